//! The difference set `Φ(X) − Φ(X)` inside `L∞(X)`.
//!
//! A [`DiffFn`] is the pair `(x, y)` standing for `z ↦ ϱ(x,z) − ϱ(y,z)`; it is
//! never tabulated. Sup norms are computed exactly on an [`EvalLattice`]: when
//! every defining point is a vertex of `X_m`, each distance function is, along
//! any edge of `X_m`, a minimum of unit-slope linear pieces that break only at
//! half-edges, and half-edges are vertices of `X_{m+1}`. So the supremum over
//! the limit space of any signed sum of such distances is a maximum over the
//! vertices of `X_{m+1}`.
//!
//! The non-doubling argument works at scale `r = 4^{-i}`. Inside each edge
//! cycle of `X_i` the function `f = ϱ(x,·) − ϱ(y,·)` with `x` a side corner
//! and `y` the midpoint of the opposite edge has norm `3r/2 < 2r`, and any
//! difference function whose two points avoid that cycle stays at least `r`
//! away from it. One such `f` per cycle gives `6^{i-1}` members of
//! `B(0, 2r)` that are pairwise `r` apart.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeCycle, LaaksoGraph, Node, Point, Tower, VertexId, VertexLabel};
use crate::metric::{self, RowCache};
use crate::scaled::{ScaledDistance, SignedDistance};

/// `z ↦ ϱ(x,z) − ϱ(y,z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiffFn {
    pub x: Point,
    pub y: Point,
}

impl DiffFn {
    pub fn new(x: Point, y: Point) -> Self {
        Self { x, y }
    }

    /// The zero function, written `f_{a,a}` with `a` the start endpoint.
    pub fn zero() -> Self {
        let a = Point::top(0, Node::A).expect("a exists at level 0");
        Self::new(a.clone(), a)
    }

    /// `f_{y,x} = −f_{x,y}`.
    pub fn reversed(&self) -> Self {
        Self::new(self.y.clone(), self.x.clone())
    }

    pub fn level(&self) -> u32 {
        self.x.level.max(self.y.level)
    }
}

impl std::fmt::Display for DiffFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f[{} - {}]", self.x, self.y)
    }
}

/// All vertices of one level, with distance rows from the defining points.
#[derive(Debug)]
pub struct EvalLattice {
    rows: RowCache,
}

impl EvalLattice {
    pub fn new(tower: &Tower, level: u32) -> Result<Self> {
        Ok(Self {
            rows: RowCache::new(tower.graph(level)?),
        })
    }

    /// The lattice one level finer than every defining point of `fns`.
    pub fn for_functions(tower: &Tower, fns: &[&DiffFn]) -> Result<Self> {
        let level = fns.iter().map(|f| f.level()).max().unwrap_or(0) + 1;
        Self::new(tower, level)
    }

    pub fn level(&self) -> u32 {
        self.rows.level()
    }

    pub fn graph(&self) -> &Arc<LaaksoGraph> {
        self.rows.graph()
    }

    fn check(&self, f: &DiffFn) -> Result<()> {
        if f.level() >= self.level() {
            return Err(Error::Precondition(format!(
                "{f} needs a lattice finer than level {}",
                self.level()
            )));
        }
        Ok(())
    }

    pub fn prefetch(&mut self, points: &[&Point]) -> Result<()> {
        let ids = points
            .iter()
            .map(|p| self.rows.graph().require(&p.label))
            .collect::<Result<Vec<_>>>()?;
        self.rows.prefetch(&ids);
        Ok(())
    }

    /// `f(z)` in lattice units.
    pub fn eval(&mut self, f: &DiffFn, z: VertexId) -> Result<SignedDistance> {
        let x = self.rows.row_of(&f.x)?;
        let y = self.rows.row_of(&f.y)?;
        let k = self.level();
        Ok(SignedDistance::new(
            x[z as usize] as i64 - y[z as usize] as i64,
            k,
        ))
    }

    /// Max over the lattice of `|Σ ϱ(plus,·) − Σ ϱ(minus,·)|` and a vertex attaining it.
    fn sup_abs(&mut self, plus: &[&Point], minus: &[&Point]) -> Result<(ScaledDistance, VertexId)> {
        let plus_rows = plus
            .iter()
            .map(|p| self.rows.row_of(p))
            .collect::<Result<Vec<_>>>()?;
        let minus_rows = minus
            .iter()
            .map(|p| self.rows.row_of(p))
            .collect::<Result<Vec<_>>>()?;
        let n = self.rows.graph().vertex_count();
        let (z, best) = (0..n)
            .map(|z| {
                let total: i64 = plus_rows.iter().map(|r| r[z] as i64).sum::<i64>()
                    - minus_rows.iter().map(|r| r[z] as i64).sum::<i64>();
                (z, total.unsigned_abs())
            })
            .max_by_key(|&(z, v)| (v, std::cmp::Reverse(z)))
            .expect("lattice has vertices");
        Ok((ScaledDistance::new(best, self.level()), z as VertexId))
    }

    pub fn norm(&mut self, f: &DiffFn) -> Result<(ScaledDistance, VertexId)> {
        self.check(f)?;
        self.sup_abs(&[&f.x], &[&f.y])
    }

    /// `‖f − g‖∞` and a vertex where it is attained.
    pub fn distance(&mut self, f: &DiffFn, g: &DiffFn) -> Result<(ScaledDistance, VertexId)> {
        self.check(f)?;
        self.check(g)?;
        self.sup_abs(&[&f.x, &g.y], &[&f.y, &g.x])
    }
}

/// `f(z)`, evaluated at the finest level among `f` and `z`.
pub fn eval(tower: &Tower, f: &DiffFn, z: &Point) -> Result<SignedDistance> {
    let level = f.level().max(z.level);
    let g = tower.graph(level)?;
    let zv = g.require(&z.label)?;
    let row = metric::bfs(&g, &[zv]);
    let x = row[g.require(&f.x.label)? as usize] as i64;
    let y = row[g.require(&f.y.label)? as usize] as i64;
    Ok(SignedDistance::new(x - y, level))
}

/// `‖f‖∞` over the limit space.
pub fn linf_norm(tower: &Tower, f: &DiffFn) -> Result<ScaledDistance> {
    let mut lattice = EvalLattice::for_functions(tower, &[f])?;
    Ok(lattice.norm(f)?.0)
}

/// `‖f − g‖∞` over the limit space.
pub fn linf_dist(tower: &Tower, f: &DiffFn, g: &DiffFn) -> Result<ScaledDistance> {
    let mut lattice = EvalLattice::for_functions(tower, &[f, g])?;
    Ok(lattice.distance(f, g)?.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryViolation {
    pub x: VertexLabel,
    pub y: VertexLabel,
    pub distance: ScaledDistance,
    pub sup: ScaledDistance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryReport {
    pub level: u32,
    pub pairs_checked: usize,
    pub violations: Vec<IsometryViolation>,
}

/// Checks `sup_z |ϱ(x,z) − ϱ(y,z)| = ϱ(x,y)` for every vertex pair of `X_i`.
pub fn kuratowski_isometry_check(tower: &Tower, i: u32) -> Result<IsometryReport> {
    let base = tower.graph(i)?;
    let mut lattice = EvalLattice::new(tower, i + 1)?;
    let points: Vec<Point> = base.vertices().map(|v| base.point(v)).collect();
    lattice.prefetch(&points.iter().collect::<Vec<_>>())?;
    let own = metric::all_pairs(&base)?;
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for u in 0..points.len() {
        for v in u + 1..points.len() {
            let f = DiffFn::new(points[u].clone(), points[v].clone());
            let (sup, _) = lattice.norm(&f)?;
            let distance = own.get(u, v);
            pairs_checked += 1;
            if sup != distance {
                violations.push(IsometryViolation {
                    x: points[u].label.clone(),
                    y: points[v].label.clone(),
                    distance,
                    sup,
                });
            }
        }
    }
    Ok(IsometryReport {
        level: i,
        pairs_checked,
        violations,
    })
}

/// Labels of an edge cycle, as recorded in certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRef {
    pub index: usize,
    pub corners: [VertexLabel; 4],
}

impl CycleRef {
    fn new(g: &LaaksoGraph, index: usize) -> Self {
        Self {
            index,
            corners: g.edge_cycles()[index].corners.map(|v| g.label(v).clone()),
        }
    }
}

/// The function placed in an edge cycle of `X_i`: `x` is the upper side
/// corner, `y` the midpoint (a level `i+1` vertex) of the edge from the lower
/// side corner to the far junction, so `ϱ(x, y) = 3/2 · 4^{-i}`.
pub fn cycle_witness(g: &LaaksoGraph, cycle: &EdgeCycle) -> DiffFn {
    let x = g.point(cycle.sides()[0]);
    let mut path = cycle.copy_path.clone();
    path.push(4); // pattern edge m_lower -> c
    let y = Point::new(g.level() + 1, VertexLabel::resolve(&path, Node::Upper))
        .expect("midpoint exists one level down");
    DiffFn::new(x, y)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairWitness {
    pub first: usize,
    pub second: usize,
    pub z: Point,
    pub value: ScaledDistance,
}

/// `6^{i-1}` members of `B(0, 2·4^{-i})` pairwise at least `4^{-i}` apart.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparationFamily {
    pub i: u32,
    pub r: ScaledDistance,
    pub members: Vec<DiffFn>,
    pub norms: Vec<ScaledDistance>,
    /// `None` for a single member.
    pub min_pairwise: Option<ScaledDistance>,
    pub max_norm: ScaledDistance,
    pub lattice_level: u32,
    pub pairs: Vec<PairWitness>,
}

pub fn separated_family(tower: &Tower, i: u32) -> Result<SeparationFamily> {
    if i < 1 {
        return Err(Error::Precondition("separated families start at level 1".into()));
    }
    let lattice_level = i + 2;
    tower.check_level(lattice_level)?;
    let g = tower.graph(i)?;
    let members: Vec<DiffFn> = g.edge_cycles().iter().map(|c| cycle_witness(&g, c)).collect();

    let mut lattice = EvalLattice::new(tower, lattice_level)?;
    let defining: Vec<&Point> = members.iter().flat_map(|f| [&f.x, &f.y]).collect();
    lattice.prefetch(&defining)?;

    let r = ScaledDistance::power_of_quarter(i, lattice_level);
    let norms = members
        .iter()
        .map(|f| lattice.norm(f).map(|(n, _)| n))
        .collect::<Result<Vec<_>>>()?;
    let max_norm = norms.iter().copied().max().expect("at least one cycle");

    let mut pairs = Vec::new();
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let (value, z) = lattice.distance(&members[a], &members[b])?;
            if value < r {
                return Err(Error::Separation {
                    first: a,
                    second: b,
                    distance: value.to_string(),
                });
            }
            pairs.push(PairWitness {
                first: a,
                second: b,
                z: lattice.graph().point(z),
                value,
            });
        }
    }
    let min_pairwise = pairs.iter().map(|p| p.value).min();
    Ok(SeparationFamily {
        i,
        r,
        members,
        norms,
        min_pairwise,
        max_norm,
        lattice_level,
        pairs,
    })
}

/// A proposed ball center `g_j = f_{t_j, s_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterPair {
    pub t: Point,
    pub s: Point,
}

impl CenterPair {
    pub fn as_fn(&self) -> DiffFn {
        DiffFn::new(self.t.clone(), self.s.clone())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CenterDefeat {
    pub j: usize,
    pub z: Point,
    pub value: ScaledDistance,
}

/// Exact evidence that no ball `B(g_j, r)` contains `witness`, although
/// `witness` lies in `B(0, 2r)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub i: u32,
    pub r: ScaledDistance,
    pub centers: Vec<CenterPair>,
    pub free_cycle: CycleRef,
    /// How a cycle counts as occupied by a center point.
    pub occupancy_rule: String,
    pub witness: DiffFn,
    pub witness_norm: ScaledDistance,
    pub norm_check: bool,
    pub lattice_level: u32,
    pub per_center: Vec<CenterDefeat>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Refutation {
    Refuted(Box<RefutationCertificate>),
    NotRefuted { reason: String },
}

impl Refutation {
    pub fn certificate(&self) -> Option<&RefutationCertificate> {
        match self {
            Refutation::Refuted(cert) => Some(cert),
            Refutation::NotRefuted { .. } => None,
        }
    }
}

pub const OCCUPANCY_RULE: &str =
    "a cycle is occupied when some lifted center point lies at distance < r from one of its side corners";

/// Tries to refute `B(0, 2r) ⊂ ∪_j B(g_j, r)` at `r = 4^{-i}`.
///
/// A cycle is occupied when a center point lies in it away from its two
/// junctions; any other point reaches the cycle only through a junction,
/// which is all the per-center bound needs. Each center point occupies at
/// most one cycle, so fewer than `6^{i-1}/2` centers always leave a cycle free.
pub fn refute_cover(tower: &Tower, i: u32, centers: &[CenterPair]) -> Result<Refutation> {
    if i < 1 {
        return Err(Error::Precondition("refutation needs i >= 1".into()));
    }
    let center_level = centers
        .iter()
        .flat_map(|c| [c.t.level, c.s.level])
        .max()
        .unwrap_or(0);
    let lattice_level = center_level.max(i + 1) + 1;
    tower.check_level(lattice_level)?;

    let base = tower.graph(i)?;
    let mut lattice = EvalLattice::new(tower, lattice_level)?;
    let fine = lattice.graph().clone();
    let r = ScaledDistance::power_of_quarter(i, lattice_level);

    let center_ids = centers
        .iter()
        .flat_map(|c| [&c.t, &c.s])
        .map(|p| fine.require(&p.label))
        .collect::<Result<Vec<_>>>()?;
    let reach = if center_ids.is_empty() {
        vec![u32::MAX; fine.vertex_count()]
    } else {
        metric::bfs(&fine, &center_ids)
    };
    let free = base.edge_cycles().iter().position(|cycle| {
        cycle.sides().iter().all(|&side| {
            let v = fine.require(base.label(side)).expect("refinement keeps labels");
            (reach[v as usize] as u64) >= r.value
        })
    });
    let Some(index) = free else {
        return Ok(Refutation::NotRefuted {
            reason: format!(
                "all {} edge cycles of X_{i} are occupied by center points",
                base.edge_cycles().len()
            ),
        });
    };

    let witness = cycle_witness(&base, &base.edge_cycles()[index]);
    let mut points: Vec<&Point> = vec![&witness.x, &witness.y];
    points.extend(centers.iter().flat_map(|c| [&c.t, &c.s]));
    lattice.prefetch(&points)?;

    let (witness_norm, _) = lattice.norm(&witness)?;
    let norm_check = witness_norm < r.double() && witness_norm > r;
    let mut per_center = Vec::with_capacity(centers.len());
    for (j, center) in centers.iter().enumerate() {
        let (value, z) = lattice.distance(&witness, &center.as_fn())?;
        if value < r {
            return Ok(Refutation::NotRefuted {
                reason: format!("center {j} lies within {value} of the witness, below r = {r}"),
            });
        }
        per_center.push(CenterDefeat {
            j,
            z: fine.point(z),
            value,
        });
    }
    if !norm_check {
        return Ok(Refutation::NotRefuted {
            reason: format!("witness norm {witness_norm} is not in (r, 2r)"),
        });
    }
    Ok(Refutation::Refuted(Box::new(RefutationCertificate {
        i,
        r,
        centers: centers.to_vec(),
        free_cycle: CycleRef::new(&base, index),
        occupancy_rule: OCCUPANCY_RULE.into(),
        witness,
        witness_norm,
        norm_check,
        lattice_level,
        per_center,
    })))
}

/// `count` centers whose points are independent uniform vertices of `X_level`.
pub fn random_centers<R: Rng>(g: &LaaksoGraph, count: usize, rng: &mut R) -> Vec<CenterPair> {
    let n = g.vertex_count() as VertexId;
    (0..count)
        .map(|_| CenterPair {
            t: g.point(rng.gen_range(0..n)),
            s: g.point(rng.gen_range(0..n)),
        })
        .collect()
}

/// Largest number of centers for which a free cycle is guaranteed at level `i`.
pub fn guaranteed_center_count(i: u32) -> usize {
    (6usize.pow(i.saturating_sub(1)) - 1) / 2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeRow {
    pub level: u32,
    pub radius: ScaledDistance,
    /// Members of `B(0, 2r)` pairwise `>= r` apart.
    pub packing: usize,
    pub packing_min_pairwise: Option<ScaledDistance>,
    /// Largest `N(B(x, ρ), ρ/2)` over vertices and dyadic `ρ` in `X_level`.
    pub space_doubling: usize,
    pub space_doubling_exact: bool,
    pub refutation_trials: usize,
    pub refuted: usize,
}

/// The contrast between `X` (bounded doubling counts) and `X − X`
/// (packings of size `6^{i-1}` inside balls of radius `2·4^{-i}`).
pub fn growth_probe<R: Rng>(tower: &Tower, i_max: u32, trials: usize, rng: &mut R) -> Result<Vec<ProbeRow>> {
    if i_max < 1 {
        return Err(Error::Precondition("probe needs i_max >= 1".into()));
    }
    tower.check_level(i_max + 2)?;
    let mut rows = Vec::new();
    for i in 1..=i_max {
        let family = separated_family(tower, i)?;
        let g = tower.graph(i)?;
        let doubling = crate::covering::doubling_report(
            &g,
            &crate::covering::default_radius_exponents(i),
            crate::covering::DEFAULT_WORK_LIMIT,
        )?;
        let mut refuted = 0;
        for _ in 0..trials {
            let centers = random_centers(&g, guaranteed_center_count(i), rng);
            if refute_cover(tower, i, &centers)?.certificate().is_some() {
                refuted += 1;
            }
        }
        rows.push(ProbeRow {
            level: i,
            radius: ScaledDistance::power_of_quarter(i, i),
            packing: family.members.len(),
            packing_min_pairwise: family.min_pairwise,
            space_doubling: doubling.max_cover_size,
            space_doubling_exact: doubling.all_exact,
            refutation_trials: trials,
            refuted,
        });
    }
    Ok(rows)
}
