//! Stand-alone certificate checker.
//!
//! Nothing here calls into the construction or search code: the graphs are
//! rebuilt bottom-up (every edge of `X_k` replaced by a copy of the six-edge
//! pattern), distances come from a separate BFS, and certificates are read as
//! plain JSON. Only the label spelling is shared, since certificates name
//! vertices by label.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;
use serde_json::Value;

const PATTERN: [(&str, &str); 6] = [
    ("a", "b"),
    ("b", "m_upper"),
    ("b", "m_lower"),
    ("m_upper", "c"),
    ("m_lower", "c"),
    ("c", "d"),
];

/// `X_level` as an adjacency list keyed by label strings.
pub struct CheckGraph {
    pub level: u32,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    /// Edge address digits and endpoint labels.
    edges: Vec<(String, String, String)>,
    cycles: Vec<[String; 4]>,
}

fn named(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}:{name}")
    }
}

impl CheckGraph {
    pub fn build(level: u32) -> Self {
        let mut edges = vec![(String::new(), "a".to_string(), "d".to_string())];
        let mut vertices = vec!["a".to_string(), "d".to_string()];
        let mut cycles = Vec::new();
        for _ in 0..level {
            let mut next = Vec::with_capacity(edges.len() * 6);
            cycles.clear();
            for (digits, u, v) in &edges {
                let local = |name: &str| match name {
                    "a" => u.clone(),
                    "d" => v.clone(),
                    other => named(digits, other),
                };
                for name in ["b", "m_upper", "m_lower", "c"] {
                    vertices.push(named(digits, name));
                }
                cycles.push(["b", "m_upper", "c", "m_lower"].map(local));
                for (e, (p, q)) in PATTERN.iter().enumerate() {
                    next.push((format!("{digits}{e}"), local(p), local(q)));
                }
            }
            edges = next;
        }
        let index: HashMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (_, u, v) in &edges {
            let (a, b) = (index[u], index[v]);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        Self {
            level,
            index,
            adjacency,
            edges,
            cycles,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Squares of the last substitution round, corner labels in cycle order.
    pub fn cycles(&self) -> &[[String; 4]] {
        &self.cycles
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Hop counts from the nearest source.
    pub fn hops(&self, sources: &[usize]) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }

    /// Vertices on the canonical image of `X_from`: edges whose address digits
    /// past position `from` are all on the `a-b-m_upper-c-d` branch.
    pub fn image_of(&self, from: u32) -> Vec<usize> {
        let mut out = Vec::new();
        for (digits, u, v) in &self.edges {
            if digits[from as usize..].chars().all(|c| "0135".contains(c)) {
                out.push(self.index[u]);
                out.push(self.index[v]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Exact rational `value / 4^exp` as a numerator over `4^max_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Exact {
    value: i128,
    exp: u32,
}

impl Exact {
    fn at(self, exp: u32) -> i128 {
        self.value * 4i128.pow(exp - self.exp)
    }

    fn cmp(self, other: Exact) -> std::cmp::Ordering {
        let k = self.exp.max(other.exp);
        self.at(k).cmp(&other.at(k))
    }
}

#[derive(Debug, Default, Serialize)]
pub struct CheckReport {
    pub kind: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(kind: &str) -> Self {
        Self {
            kind: kind.into(),
            ..Self::default()
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug)]
pub struct Malformed(pub String);

impl std::fmt::Display for Malformed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "malformed certificate: {}", self.0)
    }
}

impl std::error::Error for Malformed {}

type Checked<T> = std::result::Result<T, Malformed>;

fn field<'a>(v: &'a Value, key: &str) -> Checked<&'a Value> {
    v.get(key).ok_or_else(|| Malformed(format!("missing field {key:?}")))
}

fn uint(v: &Value, key: &str) -> Checked<u64> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| Malformed(format!("{key:?} is not a nonnegative integer")))
}

fn exact(v: &Value, key: &str) -> Checked<Exact> {
    let d = field(v, key)?;
    let value = field(d, "value")?
        .as_i64()
        .ok_or_else(|| Malformed(format!("{key}.value is not an integer")))?;
    let exp = uint(d, "unit_exponent")? as u32;
    if exp > 20 {
        return Err(Malformed(format!("{key}.unit_exponent {exp} is out of range")));
    }
    Ok(Exact {
        value: value as i128,
        exp,
    })
}

#[derive(Debug, Clone)]
struct RawPoint {
    level: u32,
    label: String,
}

fn point(v: &Value) -> Checked<RawPoint> {
    let level = uint(v, "level")? as u32;
    let label = field(v, "label")?
        .as_str()
        .ok_or_else(|| Malformed("point label is not a string".into()))?
        .to_string();
    Ok(RawPoint { level, label })
}

fn array<'a>(v: &'a Value, key: &str) -> Checked<&'a Vec<Value>> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| Malformed(format!("{key:?} is not an array")))
}

/// Graphs by level, built on first use.
struct Graphs {
    cap: u32,
    built: BTreeMap<u32, CheckGraph>,
    rows: HashMap<(u32, usize), Vec<u64>>,
}

impl Graphs {
    fn new(cap: u32) -> Self {
        Self {
            cap,
            built: BTreeMap::new(),
            rows: HashMap::new(),
        }
    }

    fn graph(&mut self, level: u32) -> Checked<&CheckGraph> {
        if level > self.cap {
            return Err(Malformed(format!("level {level} exceeds the cap {}", self.cap)));
        }
        Ok(self.built.entry(level).or_insert_with(|| CheckGraph::build(level)))
    }

    fn id(&mut self, level: u32, p: &RawPoint) -> Checked<usize> {
        if p.level > level {
            return Err(Malformed(format!("point {} is finer than level {level}", p.label)));
        }
        self.graph(level)?
            .vertex(&p.label)
            .ok_or_else(|| Malformed(format!("{} is not a vertex at level {level}", p.label)))
    }

    fn row(&mut self, level: u32, p: &RawPoint) -> Checked<Vec<u64>> {
        let id = self.id(level, p)?;
        if !self.rows.contains_key(&(level, id)) {
            let row = self.graph(level)?.hops(&[id]);
            self.rows.insert((level, id), row);
        }
        Ok(self.rows[&(level, id)].clone())
    }

    /// `Σ ϱ(plus, z) − Σ ϱ(minus, z)` at one lattice vertex `z`, in units of `4^{-level}`.
    fn combo_at(&mut self, level: u32, plus: &[&RawPoint], minus: &[&RawPoint], z: &RawPoint) -> Checked<i128> {
        let zid = self.id(level, z)?;
        let mut total = 0i128;
        for p in plus {
            total += self.row(level, p)?[zid] as i128;
        }
        for p in minus {
            total -= self.row(level, p)?[zid] as i128;
        }
        Ok(total)
    }

    /// Max over all vertices of `X_level` of the absolute combination.
    fn combo_sup(&mut self, level: u32, plus: &[&RawPoint], minus: &[&RawPoint]) -> Checked<i128> {
        let plus_rows = plus.iter().map(|p| self.row(level, p)).collect::<Checked<Vec<_>>>()?;
        let minus_rows = minus.iter().map(|p| self.row(level, p)).collect::<Checked<Vec<_>>>()?;
        let n = self.graph(level)?.vertex_count();
        Ok((0..n)
            .map(|z| {
                let s: i128 = plus_rows.iter().map(|r| r[z] as i128).sum::<i128>()
                    - minus_rows.iter().map(|r| r[z] as i128).sum::<i128>();
                s.abs()
            })
            .max()
            .unwrap_or(0))
    }
}

fn quarter_power(i: u32) -> Exact {
    Exact { value: 1, exp: i }
}

/// Re-checks a refutation certificate: the witness lies in `B(0, 2r)` and
/// every center is at sup distance `>= r` from it.
pub fn check_refutation(cert: &Value, cap: u32) -> Checked<CheckReport> {
    let mut report = CheckReport::new("refutation");
    let mut graphs = Graphs::new(cap);
    let i = uint(cert, "i")? as u32;
    let r = exact(cert, "r")?;
    report.expect(r.cmp(quarter_power(i)).is_eq(), || format!("r is not 4^-{i}"));

    let witness = field(cert, "witness")?;
    let x = point(field(witness, "x")?)?;
    let y = point(field(witness, "y")?)?;
    let centers = array(cert, "centers")?
        .iter()
        .map(|c| Ok((point(field(c, "t")?)?, point(field(c, "s")?)?)))
        .collect::<Checked<Vec<_>>>()?;

    // norm of the witness: sup over the lattice one level below x and y
    let norm_level = x.level.max(y.level) + 1;
    let norm = graphs.combo_sup(norm_level, &[&x], &[&y])?;
    let norm = Exact {
        value: norm,
        exp: norm_level,
    };
    let two_r = Exact {
        value: 2 * r.value,
        exp: r.exp,
    };
    report.expect(norm.cmp(two_r).is_lt(), || "witness norm is not below 2r".into());
    report.expect(norm.cmp(exact(cert, "witness_norm")?).is_eq(), || {
        "claimed witness norm differs from the recomputed one".into()
    });

    // the free cycle is a genuine square of X_i with the witness on it
    let cycle = field(cert, "free_cycle")?;
    let corners: Vec<String> = array(cycle, "corners")?
        .iter()
        .map(|c| c.as_str().map(str::to_string))
        .collect::<Option<_>>()
        .ok_or_else(|| Malformed("cycle corners are not strings".into()))?;
    let g = graphs.graph(i)?;
    report.expect(g.cycles().iter().any(|c| c.as_slice() == corners.as_slice()), || {
        format!("{corners:?} is not an edge cycle of X_{i}")
    });
    report.expect(corners.contains(&x.label), || "witness x is not a cycle corner".into());

    let defeats = array(cert, "per_center")?;
    report.expect(defeats.len() == centers.len(), || {
        format!("{} centers but {} defeats", centers.len(), defeats.len())
    });
    let mut seen = vec![false; centers.len()];
    for d in defeats {
        let j = uint(d, "j")? as usize;
        let Some((t, s)) = centers.get(j) else {
            report.expect(false, || format!("defeat refers to unknown center {j}"));
            continue;
        };
        seen[j] = true;
        let z = point(field(d, "z")?)?;
        let claimed = exact(d, "value")?;
        let level = [x.level, y.level, t.level, s.level, z.level].into_iter().max().unwrap_or(0);
        // (f - g_j)(z) = ϱ(x,z) - ϱ(y,z) - ϱ(t,z) + ϱ(s,z)
        let at_z = graphs.combo_at(level, &[&x, s], &[&y, t], &z)?.abs();
        let at_z = Exact {
            value: at_z,
            exp: level,
        };
        report.expect(at_z.cmp(claimed).is_eq(), || {
            format!("center {j}: claimed {claimed:?}, recomputed {at_z:?}")
        });
        report.expect(at_z.cmp(r).is_ge(), || format!("center {j}: |f - g_j|(z) < r"));
    }
    report.expect(seen.iter().all(|&s| s), || "some center has no defeat".into());
    Ok(report)
}

/// Re-checks a separation family: `6^{i-1}` members with norm `< 2r`, every
/// pair at sup distance `>= r` through the recorded witness vertex.
pub fn check_separation(cert: &Value, cap: u32) -> Checked<CheckReport> {
    let mut report = CheckReport::new("separation");
    let mut graphs = Graphs::new(cap);
    let i = uint(cert, "i")? as u32;
    let r = exact(cert, "r")?;
    report.expect(r.cmp(quarter_power(i)).is_eq(), || format!("r is not 4^-{i}"));
    let members = array(cert, "members")?
        .iter()
        .map(|m| Ok((point(field(m, "x")?)?, point(field(m, "y")?)?)))
        .collect::<Checked<Vec<_>>>()?;
    let expected = 6usize.pow(i.saturating_sub(1));
    report.expect(members.len() == expected, || {
        format!("{} members, expected {expected}", members.len())
    });
    let two_r = Exact {
        value: 2 * r.value,
        exp: r.exp,
    };
    for (k, (x, y)) in members.iter().enumerate() {
        let level = x.level.max(y.level) + 1;
        let norm = Exact {
            value: graphs.combo_sup(level, &[x], &[y])?,
            exp: level,
        };
        report.expect(norm.cmp(two_r).is_lt(), || format!("member {k} has norm >= 2r"));
    }
    let mut covered = vec![vec![false; members.len()]; members.len()];
    let mut least: Option<Exact> = None;
    for p in array(cert, "pairs")? {
        let (a, b) = (uint(p, "first")? as usize, uint(p, "second")? as usize);
        if a >= members.len() || b >= members.len() || a == b {
            report.expect(false, || format!("bad pair ({a}, {b})"));
            continue;
        }
        covered[a.min(b)][a.max(b)] = true;
        let z = point(field(p, "z")?)?;
        let claimed = exact(p, "value")?;
        let (fx, fy) = (&members[a].0, &members[a].1);
        let (gx, gy) = (&members[b].0, &members[b].1);
        let level = [fx.level, fy.level, gx.level, gy.level, z.level].into_iter().max().unwrap_or(0);
        let at_z = Exact {
            value: graphs.combo_at(level, &[fx, gy], &[fy, gx], &z)?.abs(),
            exp: level,
        };
        report.expect(at_z.cmp(claimed).is_eq(), || format!("pair ({a}, {b}): value mismatch"));
        report.expect(at_z.cmp(r).is_ge(), || format!("pair ({a}, {b}) closer than r"));
        if least.is_none_or(|l| at_z.cmp(l).is_lt()) {
            least = Some(at_z);
        }
    }
    for (a, row) in covered.iter().enumerate() {
        for (b, &seen) in row.iter().enumerate().skip(a + 1) {
            report.expect(seen, || format!("pair ({a}, {b}) has no witness"));
        }
    }
    if let (Some(least), Some(min)) = (least, field(cert, "min_pairwise").ok().filter(|v| !v.is_null())) {
        let claimed = exact(&serde_json::json!({ "m": min }), "m")?;
        report.expect(least.cmp(claimed).is_eq(), || "min_pairwise mismatch".into());
    }
    Ok(report)
}

/// Re-checks a density certificate: every vertex of `X_to` within `max_gap`
/// of the canonical image of `X_from`, `max_gap` attained at the witness, and
/// `max_gap <= bound = 4^{-(from+1)}`.
pub fn check_gap(cert: &Value, cap: u32) -> Checked<CheckReport> {
    let mut report = CheckReport::new("gap");
    let mut graphs = Graphs::new(cap);
    let from = uint(cert, "from_level")? as u32;
    let to = uint(cert, "to_level")? as u32;
    if from >= to {
        return Err(Malformed(format!("from_level {from} >= to_level {to}")));
    }
    let gap = exact(cert, "max_gap")?;
    let bound = exact(cert, "bound")?;
    report.expect(bound.cmp(quarter_power(from + 1)).is_eq(), || "bound is not 4^-(from+1)".into());
    report.expect(gap.cmp(bound).is_le(), || "max_gap exceeds bound".into());
    let witness = field(cert, "witness")?
        .as_str()
        .ok_or_else(|| Malformed("witness is not a label".into()))?
        .to_string();
    let g = graphs.graph(to)?;
    let image = g.image_of(from);
    let reach = g.hops(&image);
    let worst = reach.iter().copied().max().unwrap_or(0);
    let worst = Exact {
        value: worst as i128,
        exp: to,
    };
    report.expect(worst.cmp(gap).is_eq(), || format!("recomputed gap {worst:?} differs"));
    match g.vertex(&witness) {
        Some(w) => report.expect(
            Exact {
                value: reach[w] as i128,
                exp: to,
            }
            .cmp(gap)
            .is_eq(),
            || "witness does not attain max_gap".into(),
        ),
        None => report.expect(false, || format!("witness {witness} is not a vertex")),
    }
    Ok(report)
}

/// Dispatches on the certificate's fields.
pub fn check_any(cert: &Value, cap: u32) -> Checked<CheckReport> {
    if cert.get("per_center").is_some() {
        check_refutation(cert, cap)
    } else if cert.get("members").is_some() {
        check_separation(cert, cap)
    } else if cert.get("max_gap").is_some() {
        check_gap(cert, cap)
    } else {
        Err(Malformed("unrecognised certificate kind".into()))
    }
}
