use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use laakso::covering::{self, CoverMethod, ScaleSample, DEFAULT_WORK_LIMIT};
use laakso::diffset::{self, CenterPair, DiffFn, EvalLattice, ProbeRow};
use laakso::metric::{self, DEFAULT_MATRIX_BUDGET};
use laakso::{verify, Point, ScaledDistance, Tower, DEFAULT_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

/// Exact experiments on the Laakso graph tower.
#[derive(Parser)]
#[command(name = "laakso", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Seed for randomized trials; echoed in every output.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Node limit for each exact cover search.
    #[arg(long, default_value_t = DEFAULT_WORK_LIMIT, global = true)]
    work_limit: u64,
    /// Maximum distance matrix entries.
    #[arg(long, default_value_t = DEFAULT_MATRIX_BUDGET, global = true)]
    matrix_budget: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Edgelist,
}

#[derive(Subcommand)]
enum Command {
    /// Build X_level.
    Build {
        #[arg(long)]
        level: u32,
    },
    /// Distance between two points, or the full matrix of X_level.
    Dist {
        #[arg(long)]
        level: u32,
        /// First point, `LABEL` or `LABEL@LEVEL`.
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Diameter of X_level.
    Diam {
        #[arg(long)]
        level: u32,
    },
    /// Density gap of X_from inside X_to.
    GhGap {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
    /// Exact covering numbers N(B(x, r), r/2) over vertices and dyadic radii.
    Doubling {
        #[arg(long)]
        level: u32,
        /// Radius exponents m (r = 4^-m); defaults to 0..=level.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<u32>,
    },
    /// Fit N(B(x, R), ρ) <= M (R/ρ)^s.
    Assouad {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = Scales::WholeSpace)]
        scales: Scales,
    },
    /// Sup norm of f_{x,y}, or the distance between f_{x,y} and f_{u,v}.
    DiffsetNorm {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, requires = "v")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        v: Option<String>,
    },
    /// An r-separated family inside B(0, 2r) at r = 4^-level.
    DiffsetSeparate {
        #[arg(long)]
        level: u32,
    },
    /// Try to refute a cover of B(0, 2r) by balls of radius r.
    DiffsetRefute {
        #[arg(long)]
        level: u32,
        /// JSON list of {"t": point, "s": point}.
        #[arg(long, conflicts_with = "random")]
        centers: Option<PathBuf>,
        /// Number of seeded random vertex centers.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Packing growth in X − X against doubling counts of X.
    Probe {
        #[arg(long)]
        max_level: u32,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Re-check a certificate file independently.
    Verify { certificate: PathBuf },
    /// Per-level contrast table as JSON with embedded CSV.
    Report {
        #[arg(long)]
        max_level: u32,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scales {
    /// (1, 4^-m) for m = 1..level.
    WholeSpace,
    /// (4^-a, 4^-b) for 0 <= a < b < level.
    Dyadic,
}

/// A finished command: rendered text and whether its mathematical checks held.
struct Output {
    text: String,
    holds: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, holds: true }
    }
}

struct Ctx {
    tower: Tower,
    common: Common,
}

impl Ctx {
    fn format(&self, default: Format, allowed: &[Format]) -> anyhow::Result<Format> {
        let format = self.common.format.unwrap_or(default);
        if !allowed.contains(&format) {
            bail!("this command does not support that --format");
        }
        Ok(format)
    }

    fn json<T: Serialize>(&self, value: &T) -> anyhow::Result<String> {
        let mut value = serde_json::to_value(value)?;
        if let Value::Object(map) = &mut value {
            map.insert("seed".into(), self.common.seed.into());
        }
        Ok(serde_json::to_string_pretty(&value)? + "\n")
    }

    fn csv_preamble(&self) -> String {
        format!("# seed={}\n", self.common.seed)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.common.seed)
    }
}

fn parse_point(text: &str, default_level: u32) -> anyhow::Result<Point> {
    let (label, level) = match text.rsplit_once('@') {
        Some((label, level)) => (label, level.parse().with_context(|| format!("bad level in {text:?}"))?),
        None => (text, default_level),
    };
    Ok(Point::new(level, label.parse()?)?)
}

fn samples_csv(level: u32, samples: impl Iterator<Item = (String, ScaledDistance, ScaledDistance, usize, CoverMethod)>) -> String {
    let exponent = level + 1;
    let mut out = String::from("level,center,R_units,rho_units,N,method\n");
    for (center, big, small, n, method) in samples {
        let method = match method {
            CoverMethod::Greedy => "greedy",
            CoverMethod::Exact => "exact",
        };
        let _ = writeln!(
            out,
            "{level},{center},{},{},{n},{method}",
            big.rescale(exponent).value,
            small.rescale(exponent).value
        );
    }
    out
}

fn probe_csv(rows: &[ProbeRow]) -> String {
    let mut out = String::from(
        "level,radius_value,radius_unit_exponent,packing,space_doubling,space_doubling_exact,refutation_trials,refuted\n",
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.level,
            row.radius.value,
            row.radius.unit_exponent,
            row.packing,
            row.space_doubling,
            row.space_doubling_exact,
            row.refutation_trials,
            row.refuted
        );
    }
    out
}

fn self_check<T: Serialize>(ctx: &Ctx, cert: &T) -> anyhow::Result<bool> {
    let report = verify::check_any(&serde_json::to_value(cert)?, ctx.tower.cap())?;
    for failure in &report.failures {
        eprintln!("check failed: {failure}");
    }
    Ok(report.passed())
}

fn run(ctx: &Ctx, command: &Command) -> anyhow::Result<Output> {
    let tower = &ctx.tower;
    match command {
        Command::Build { level } => {
            let g = tower.graph(*level)?;
            let text = match ctx.format(Format::Json, &[Format::Json, Format::Dot, Format::Edgelist])? {
                Format::Json => ctx.json(&g.to_json_value())?,
                Format::Dot => format!("// seed={}\n{}", ctx.common.seed, g.to_dot()),
                _ => ctx.csv_preamble() + &g.to_edge_list(),
            };
            Ok(Output::ok(text))
        }
        Command::Dist { level, from, to } => {
            if let (Some(from), Some(to)) = (from, to) {
                ctx.format(Format::Json, &[Format::Json])?;
                let (p, q) = (parse_point(from, *level)?, parse_point(to, *level)?);
                let d = metric::point_dist(tower, &p, &q)?;
                return Ok(Output::ok(ctx.json(&json!({ "from": p, "to": q, "distance": d }))?));
            }
            let g = tower.graph(*level)?;
            let matrix = metric::all_pairs_with_budget(&g, ctx.common.matrix_budget)?;
            let text = match ctx.format(Format::Csv, &[Format::Csv, Format::Json])? {
                Format::Csv => ctx.csv_preamble() + &matrix.to_csv(Some(g.labels())),
                _ => {
                    let rows: Vec<&[u32]> = (0..matrix.size()).map(|u| matrix.row(u)).collect();
                    ctx.json(&json!({
                        "level": level,
                        "unit_exponent": matrix.unit_exponent(),
                        "labels": g.labels(),
                        "units": rows,
                    }))?
                }
            };
            Ok(Output::ok(text))
        }
        Command::Diam { level } => {
            ctx.format(Format::Json, &[Format::Json])?;
            let g = tower.graph(*level)?;
            let (d, (u, v)) = metric::diameter_pair(&g);
            let mut value = serde_json::to_value(d)?;
            value["level"] = json!(level);
            value["between"] = json!([g.label(u), g.label(v)]);
            Ok(Output::ok(ctx.json(&value)?))
        }
        Command::GhGap { from, to } => {
            ctx.format(Format::Json, &[Format::Json])?;
            let cert = metric::hausdorff_gap(tower, *from, *to)?;
            let bound = metric::gh_upper_bound(tower, *from, *to)?;
            let mut value = serde_json::to_value(&cert)?;
            value["gh_upper_bound"] = serde_json::to_value(bound)?;
            Ok(Output {
                holds: cert.max_gap <= cert.bound,
                text: ctx.json(&value)?,
            })
        }
        Command::Doubling { level, radii } => {
            let g = tower.graph(*level)?;
            let radii = if radii.is_empty() {
                covering::default_radius_exponents(*level)
            } else {
                radii.clone()
            };
            let report = covering::doubling_report(&g, &radii, ctx.common.work_limit)?;
            let text = match ctx.format(Format::Json, &[Format::Json, Format::Csv])? {
                Format::Json => ctx.json(&report)?,
                _ => {
                    let rows = report
                        .entries
                        .iter()
                        .map(|e| (e.center.clone(), e.radius, e.radius.half(), e.cover_size, e.method));
                    ctx.csv_preamble() + &samples_csv(*level, rows)
                }
            };
            Ok(Output::ok(text))
        }
        Command::Assouad { level, scales } => {
            let g = tower.graph(*level)?;
            let space = metric::all_pairs_with_budget(&g, ctx.common.matrix_budget)?;
            let labels: Vec<String> = g.labels().iter().map(ToString::to_string).collect();
            let pairs = match scales {
                Scales::WholeSpace => covering::whole_space_scale_pairs(*level),
                Scales::Dyadic => covering::dyadic_scale_pairs(0, level.saturating_sub(1), *level),
            };
            let fit = covering::assouad_fit(&space, &labels, &pairs, ctx.common.work_limit)?;
            let text = match ctx.format(Format::Json, &[Format::Json, Format::Csv])? {
                Format::Json => ctx.json(&fit)?,
                _ => {
                    let rows = fit.samples.iter().map(|s: &ScaleSample| {
                        (s.center.clone(), s.big_radius, s.small_radius, s.count, s.method)
                    });
                    ctx.csv_preamble() + &samples_csv(*level, rows)
                }
            };
            Ok(Output::ok(text))
        }
        Command::DiffsetNorm { level, x, y, u, v } => {
            ctx.format(Format::Json, &[Format::Json])?;
            let f = DiffFn::new(parse_point(x, *level)?, parse_point(y, *level)?);
            if let (Some(u), Some(v)) = (u, v) {
                let g = DiffFn::new(parse_point(u, *level)?, parse_point(v, *level)?);
                let mut lattice = EvalLattice::for_functions(tower, &[&f, &g])?;
                let (d, at) = lattice.distance(&f, &g)?;
                let text = ctx.json(&json!({
                    "f": f,
                    "g": g,
                    "distance": d,
                    "attained_at": lattice.graph().label(at),
                    "lattice_level": lattice.level(),
                }))?;
                return Ok(Output::ok(text));
            }
            let mut lattice = EvalLattice::for_functions(tower, &[&f])?;
            let (norm, at) = lattice.norm(&f)?;
            let rho = metric::point_dist(tower, &f.x, &f.y)?;
            Ok(Output {
                holds: norm == rho,
                text: ctx.json(&json!({
                    "f": f,
                    "norm": norm,
                    "point_distance": rho,
                    "identity_holds": norm == rho,
                    "attained_at": lattice.graph().label(at),
                    "lattice_level": lattice.level(),
                }))?,
            })
        }
        Command::DiffsetSeparate { level } => {
            ctx.format(Format::Json, &[Format::Json])?;
            let family = diffset::separated_family(tower, *level)?;
            Ok(Output {
                holds: self_check(ctx, &family)?,
                text: ctx.json(&family)?,
            })
        }
        Command::DiffsetRefute { level, centers, random } => {
            ctx.format(Format::Json, &[Format::Json])?;
            let centers: Vec<CenterPair> = match centers {
                Some(path) => {
                    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&raw).with_context(|| format!("parsing centers in {}", path.display()))?
                }
                None => {
                    let g = tower.graph(*level)?;
                    let count = random.unwrap_or_else(|| diffset::guaranteed_center_count(*level));
                    diffset::random_centers(&g, count, &mut ctx.rng())
                }
            };
            let outcome = diffset::refute_cover(tower, *level, &centers)?;
            let holds = match outcome.certificate() {
                Some(cert) => self_check(ctx, cert)?,
                None => true,
            };
            Ok(Output {
                holds,
                text: ctx.json(&outcome)?,
            })
        }
        Command::Probe { max_level, trials } => {
            let rows = diffset::growth_probe(tower, *max_level, *trials, &mut ctx.rng())?;
            let text = match ctx.format(Format::Json, &[Format::Json, Format::Csv])? {
                Format::Json => ctx.json(&json!({ "rows": rows }))?,
                _ => ctx.csv_preamble() + &probe_csv(&rows),
            };
            Ok(Output::ok(text))
        }
        Command::Verify { certificate } => {
            ctx.format(Format::Json, &[Format::Json])?;
            let raw = std::fs::read_to_string(certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let value: Value = serde_json::from_str(&raw).context("certificate is not JSON")?;
            let report = verify::check_any(&value, tower.cap())?;
            Ok(Output {
                holds: report.passed(),
                text: ctx.json(&report)?,
            })
        }
        Command::Report { max_level, trials } => {
            if *max_level < 1 {
                bail!("report needs at least one level (max-level >= 1)");
            }
            let rows = diffset::growth_probe(tower, *max_level, *trials, &mut ctx.rng())?;
            let csv = probe_csv(&rows);
            let text = match ctx.format(Format::Json, &[Format::Json, Format::Csv])? {
                Format::Json => ctx.json(&json!({ "rows": rows, "csv": csv }))?,
                _ => ctx.csv_preamble() + &csv,
            };
            Ok(Output::ok(text))
        }
    }
}

fn cap_from_env() -> anyhow::Result<u32> {
    match std::env::var("LAAKSO_CAP") {
        Ok(raw) => raw.trim().parse().map_err(|_| anyhow!("LAAKSO_CAP must be a non-negative integer, got {raw:?}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_CAP),
        Err(e) => Err(e.into()),
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = cap_from_env().and_then(|cap| {
        let ctx = Ctx {
            tower: Tower::new(cap),
            common: cli.common,
        };
        let out = run(&ctx, &cli.command)?;
        emit(ctx.common.output.as_deref(), &out.text)?;
        Ok(out.holds)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
