//! Covering numbers, doubling constants and homogeneity exponents.
//!
//! Balls are closed (`dist <= r`) throughout. Cover centers may be any vertex
//! of the ambient space, not only members of the set being covered.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LaaksoGraph, VertexId};
use crate::metric::{self, DistanceMatrix};
use crate::scaled::ScaledDistance;

/// Default node budget for the exact solver.
pub const DEFAULT_WORK_LIMIT: u64 = 10_000_000;

/// `dist <= r` with both sides exact.
fn within(hops: u32, unit_exponent: u32, r: ScaledDistance) -> bool {
    ScaledDistance::new(hops as u64, unit_exponent) <= r
}

/// Closed ball around `center` in the graph.
pub fn ball(g: &LaaksoGraph, center: VertexId, r: ScaledDistance) -> Result<Vec<VertexId>> {
    if !g.contains(center) {
        return Err(Error::UnknownVertex(format!("id {center} at level {}", g.level())));
    }
    if r.is_zero() {
        return Err(Error::Precondition("ball radius must be positive".into()));
    }
    let row = metric::bfs(g, &[center]);
    Ok(g.vertices()
        .filter(|&v| within(row[v as usize], g.unit_exponent(), r))
        .collect())
}

/// Closed ball around `center` in a distance matrix.
pub fn ball_in(space: &DistanceMatrix, center: usize, r: ScaledDistance) -> Vec<usize> {
    let k = space.unit_exponent();
    space
        .row(center)
        .iter()
        .enumerate()
        .filter(|&(_, &d)| within(d, k, r))
        .map(|(v, _)| v)
        .collect()
}

/// Cover `target` with closed `radius`-balls centered in `candidates`.
#[derive(Debug, Clone)]
pub struct CoverProblem<'a> {
    pub space: &'a DistanceMatrix,
    pub target: Vec<usize>,
    pub radius: ScaledDistance,
    pub candidates: Vec<usize>,
}

impl<'a> CoverProblem<'a> {
    /// Candidates range over every point of `space`.
    pub fn new(space: &'a DistanceMatrix, target: Vec<usize>, radius: ScaledDistance) -> Self {
        let candidates = (0..space.size()).collect();
        Self {
            space,
            target,
            radius,
            candidates,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.target.is_empty() {
            return Err(Error::Precondition("cover target is empty".into()));
        }
        if self.radius.is_zero() {
            return Err(Error::Precondition("cover radius must be positive".into()));
        }
        Ok(())
    }

    /// Coverage bitsets over target positions, one per candidate.
    fn coverage(&self) -> Vec<Bits> {
        let k = self.space.unit_exponent();
        self.candidates
            .iter()
            .map(|&c| {
                let row = self.space.row(c);
                let mut bits = Bits::new(self.target.len());
                for (pos, &t) in self.target.iter().enumerate() {
                    if within(row[t], k, self.radius) {
                        bits.set(pos);
                    }
                }
                bits
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn full(len: usize) -> Self {
        let mut b = Self::new(len);
        for pos in 0..len {
            b.set(pos);
        }
        b
    }

    fn set(&mut self, pos: usize) {
        self.words[pos / 64] |= 1 << (pos % 64);
    }

    fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn overlap(&self, other: &Bits) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn remove(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

/// Greedy set cover: repeatedly take the candidate covering the most
/// uncovered targets (lowest index on ties).
pub fn greedy_cover(problem: &CoverProblem<'_>) -> Result<Vec<usize>> {
    problem.validate()?;
    let coverage = problem.coverage();
    let mut uncovered = Bits::full(problem.target.len());
    let mut centers = Vec::new();
    while uncovered.count() > 0 {
        let (best, gain) = coverage
            .iter()
            .enumerate()
            .map(|(i, bits)| (i, bits.overlap(&uncovered)))
            .max_by_key(|&(i, gain)| (gain, std::cmp::Reverse(i)))
            .ok_or(Error::InfeasibleCover(problem.target.len()))?;
        if gain == 0 {
            return Err(Error::InfeasibleCover(uncovered.count() as usize));
        }
        uncovered.remove(&coverage[best]);
        centers.push(problem.candidates[best]);
    }
    Ok(centers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverMethod {
    Greedy,
    Exact,
}

#[derive(Debug, Clone)]
pub struct CoverOutcome {
    pub size: usize,
    pub centers: Vec<usize>,
    pub method: CoverMethod,
    pub nodes: u64,
}

struct Search<'a> {
    sets: &'a [Bits],
    /// Sets containing each target position.
    covering: Vec<Vec<usize>>,
    best: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    limit: u64,
    max_gain: u32,
}

impl Search<'_> {
    /// Returns false once the node budget is exhausted.
    fn run(&mut self, uncovered: &Bits) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        let left = uncovered.count();
        if left == 0 {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return true;
        }
        let lower = self.chosen.len() + left.div_ceil(self.max_gain) as usize;
        if lower >= self.best.len() {
            return true;
        }
        // branch on the uncovered target with the fewest options
        let pivot = uncovered
            .iter()
            .min_by_key(|&t| self.covering[t].len())
            .expect("nonempty");
        let mut options = self.covering[pivot].clone();
        options.sort_by_key(|&s| std::cmp::Reverse(self.sets[s].overlap(uncovered)));
        for s in options {
            let mut next = uncovered.clone();
            next.remove(&self.sets[s]);
            self.chosen.push(s);
            let finished = self.run(&next);
            self.chosen.pop();
            if !finished {
                return false;
            }
        }
        true
    }
}

/// Minimum number of balls, by branch and bound seeded with the greedy cover.
///
/// When the node budget runs out the greedy size is returned with
/// [`CoverMethod::Greedy`].
pub fn min_cover_exact(problem: &CoverProblem<'_>, work_limit: u64) -> Result<CoverOutcome> {
    let greedy = greedy_cover(problem)?;
    let coverage = problem.coverage();

    // drop empty, duplicate and dominated candidate sets
    let mut order: Vec<usize> = (0..coverage.len()).filter(|&i| coverage[i].count() > 0).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(coverage[i].count()), i));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if !kept.iter().any(|&k| coverage[i].is_subset(&coverage[k])) {
            kept.push(i);
        }
    }
    let sets: Vec<Bits> = kept.iter().map(|&i| coverage[i].clone()).collect();
    let mut covering = vec![Vec::new(); problem.target.len()];
    for (s, bits) in sets.iter().enumerate() {
        for t in bits.iter() {
            covering[t].push(s);
        }
    }
    let max_gain = sets.iter().map(Bits::count).max().unwrap_or(1);

    let mut search = Search {
        sets: &sets,
        covering,
        best: vec![usize::MAX; greedy.len()],
        chosen: Vec::new(),
        nodes: 0,
        limit: work_limit,
        max_gain,
    };
    let finished = search.run(&Bits::full(problem.target.len()));
    let nodes = search.nodes.min(work_limit);
    let improved = search.best.first() != Some(&usize::MAX);
    let centers: Vec<usize> = if improved {
        search.best.iter().map(|&s| problem.candidates[kept[s]]).collect()
    } else {
        greedy
    };
    Ok(CoverOutcome {
        size: centers.len(),
        centers,
        method: if finished { CoverMethod::Exact } else { CoverMethod::Greedy },
        nodes,
    })
}

/// Largest subset found greedily (in index order) whose points are pairwise
/// at distance strictly greater than `r`; it is maximal for inclusion.
pub fn separated_subset(space: &DistanceMatrix, set: &[usize], r: ScaledDistance) -> Vec<usize> {
    let k = space.unit_exponent();
    let mut chosen: Vec<usize> = Vec::new();
    for &v in set {
        if chosen.iter().all(|&c| !within(space.units(c, v), k, r)) {
            chosen.push(v);
        }
    }
    chosen
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoublingEntry {
    pub center: String,
    pub radius: ScaledDistance,
    pub ball_size: usize,
    pub cover_size: usize,
    pub greedy_size: usize,
    pub method: CoverMethod,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoublingReport {
    pub level: u32,
    /// Always "closed"; recorded so reports are self-describing.
    pub ball_kind: String,
    pub entries: Vec<DoublingEntry>,
    pub max_cover_size: usize,
    pub all_exact: bool,
}

/// Dyadic radius exponents `0..=level`.
pub fn default_radius_exponents(level: u32) -> Vec<u32> {
    (0..=level).collect()
}

/// `N(B(x, 4^{-m}), 4^{-m}/2)` for every vertex `x` and listed `m`.
pub fn doubling_report(g: &LaaksoGraph, radius_exponents: &[u32], work_limit: u64) -> Result<DoublingReport> {
    if let Some(&m) = radius_exponents.iter().find(|&&m| m > g.level()) {
        return Err(Error::Precondition(format!(
            "radius exponent {m} exceeds level {}",
            g.level()
        )));
    }
    let space = metric::all_pairs(g)?;
    let jobs: Vec<(VertexId, u32)> = g
        .vertices()
        .flat_map(|x| radius_exponents.iter().map(move |&m| (x, m)))
        .collect();
    // balls with the same radius and vertex set share one solve
    let mut unique: HashMap<(u32, Vec<usize>), usize> = HashMap::new();
    let mut problems: Vec<(u32, usize, Vec<usize>)> = Vec::new();
    let keys: Vec<usize> = jobs
        .iter()
        .map(|&(x, m)| {
            let r = ScaledDistance::power_of_quarter(m, g.level());
            let target = ball_in(&space, x as usize, r);
            *unique.entry((m, target.clone())).or_insert_with(|| {
                problems.push((m, x as usize, target));
                problems.len() - 1
            })
        })
        .collect();
    let solved = problems
        .into_par_iter()
        .map(|(m, x, target)| {
            let r = ScaledDistance::power_of_quarter(m, g.level());
            let reach = r + r.half();
            // centers farther than r + r/2 from x cannot reach B(x, r)
            let problem = CoverProblem {
                space: &space,
                candidates: ball_in(&space, x, reach),
                target,
                radius: r.half(),
            };
            let greedy = greedy_cover(&problem)?;
            let outcome = min_cover_exact(&problem, work_limit)?;
            Ok((problem.target.len(), greedy.len(), outcome))
        })
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<DoublingEntry> = jobs
        .iter()
        .zip(&keys)
        .map(|(&(x, m), &key)| {
            let (ball_size, greedy_size, outcome) = &solved[key];
            DoublingEntry {
                center: g.label(x).to_string(),
                radius: ScaledDistance::power_of_quarter(m, g.level()),
                ball_size: *ball_size,
                cover_size: outcome.size,
                greedy_size: *greedy_size,
                method: outcome.method,
            }
        })
        .collect();
    let max_cover_size = entries.iter().map(|e| e.cover_size).max().unwrap_or(0);
    let all_exact = entries.iter().all(|e| e.method == CoverMethod::Exact);
    Ok(DoublingReport {
        level: g.level(),
        ball_kind: "closed".into(),
        entries,
        max_cover_size,
        all_exact,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleSample {
    pub big_radius: ScaledDistance,
    pub small_radius: ScaledDistance,
    pub count: usize,
    pub center: String,
    pub method: CoverMethod,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomogeneityFit {
    pub samples: Vec<ScaleSample>,
    pub exponent_s: f64,
    /// Least `M` with `N <= M (R/ρ)^s` on every sample and on `R = ρ`.
    pub constant_m: f64,
    /// Root-mean-square residual of the log-log regression.
    pub residual: f64,
}

/// Worst case over centers of `N(B(x, R), ρ)`; balls with identical vertex
/// sets are solved once.
pub fn worst_case_count(
    space: &DistanceMatrix,
    labels: &[String],
    big: ScaledDistance,
    small: ScaledDistance,
    work_limit: u64,
) -> Result<ScaleSample> {
    let mut distinct: HashMap<Vec<usize>, usize> = HashMap::new();
    for x in 0..space.size() {
        distinct.entry(ball_in(space, x, big)).or_insert(x);
    }
    let mut balls: Vec<(Vec<usize>, usize)> = distinct.into_iter().collect();
    balls.sort_by_key(|(_, x)| *x);
    let counted = balls
        .into_par_iter()
        .map(|(target, x)| {
            let problem = CoverProblem::new(space, target, small);
            min_cover_exact(&problem, work_limit).map(|o| (o.size, x, o.method))
        })
        .collect::<Result<Vec<_>>>()?;
    let (count, x, method) = counted
        .into_iter()
        .max_by_key(|&(n, x, _)| (n, std::cmp::Reverse(x)))
        .expect("space is nonempty");
    Ok(ScaleSample {
        big_radius: big,
        small_radius: small,
        count,
        center: labels[x].clone(),
        method,
    })
}

/// Least-squares fit of `log N = log M + s log(R/ρ)` over the given scale pairs.
pub fn assouad_fit(
    space: &DistanceMatrix,
    labels: &[String],
    scale_pairs: &[(ScaledDistance, ScaledDistance)],
    work_limit: u64,
) -> Result<HomogeneityFit> {
    let mut ratios: Vec<f64> = scale_pairs
        .iter()
        .map(|(big, small)| big.to_f64() / small.to_f64())
        .collect();
    ratios.sort_by(f64::total_cmp);
    ratios.dedup();
    if ratios.len() < 2 || scale_pairs.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 scale pairs and 2 distinct ratios, got {} pairs and {} ratios",
            scale_pairs.len(),
            ratios.len()
        )));
    }
    if scale_pairs.iter().any(|(big, small)| small.is_zero() || big < small) {
        return Err(Error::DegenerateFit("each pair needs R >= ρ > 0".into()));
    }
    let samples = scale_pairs
        .iter()
        .map(|&(big, small)| worst_case_count(space, labels, big, small, work_limit))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| {
            (
                (s.big_radius.to_f64() / s.small_radius.to_f64()).ln(),
                (s.count as f64).ln(),
            )
        })
        .collect();
    let (slope, intercept) = least_squares(&points);
    let residual = (points
        .iter()
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / points.len() as f64)
        .sqrt();
    let constant_m = points
        .iter()
        .map(|(x, y)| (y - slope * x).exp())
        .fold(1.0, f64::max);
    Ok(HomogeneityFit {
        samples,
        exponent_s: slope,
        constant_m,
        residual,
    })
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, mean_y - slope * mean_x)
}

/// Scale pairs `(4^{-a}, 4^{-b})` with `min_exponent <= a < b <= max_exponent`, at `unit_exponent`.
pub fn dyadic_scale_pairs(
    min_exponent: u32,
    max_exponent: u32,
    unit_exponent: u32,
) -> Vec<(ScaledDistance, ScaledDistance)> {
    let mut pairs = Vec::new();
    for a in min_exponent..max_exponent {
        for b in a + 1..=max_exponent {
            pairs.push((
                ScaledDistance::power_of_quarter(a, unit_exponent),
                ScaledDistance::power_of_quarter(b, unit_exponent),
            ));
        }
    }
    pairs
}

/// Scale pairs `(1, 4^{-m})` for `m = 1..level`: the whole space (diameter 1)
/// covered at every dyadic scale coarser than one edge.
pub fn whole_space_scale_pairs(level: u32) -> Vec<(ScaledDistance, ScaledDistance)> {
    (1..level)
        .map(|m| {
            (
                ScaledDistance::power_of_quarter(0, level),
                ScaledDistance::power_of_quarter(m, level),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build, DEFAULT_CAP};

    fn x(level: u32) -> LaaksoGraph {
        build(level, DEFAULT_CAP).unwrap()
    }

    fn unit(level: u32) -> ScaledDistance {
        ScaledDistance::new(1, level)
    }

    /// Every subset of candidates, smallest first.
    fn brute_force_cover(problem: &CoverProblem<'_>) -> usize {
        let k = problem.space.unit_exponent();
        let n = problem.candidates.len();
        (1..=n)
            .find(|&size| {
                (0u64..1 << n).filter(|m| m.count_ones() as usize == size).any(|mask| {
                    problem.target.iter().all(|&t| {
                        (0..n).any(|i| {
                            mask >> i & 1 == 1
                                && within(problem.space.units(problem.candidates[i], t), k, problem.radius)
                        })
                    })
                })
            })
            .unwrap()
    }

    #[test]
    fn whole_space_ball() {
        let g = x(1);
        assert_eq!(ball(&g, 0, ScaledDistance::new(4, 1)).unwrap().len(), 6);
        assert!(ball(&g, 0, ScaledDistance::zero(1)).is_err());
        assert!(ball(&g, 42, unit(1)).is_err());
    }

    #[test]
    fn unit_ball_is_closed_neighbourhood() {
        for level in 1..=3 {
            let g = x(level);
            for v in g.vertices() {
                let b = ball(&g, v, unit(level)).unwrap();
                assert_eq!(b.len(), g.degree(v) + 1);
                assert!(b.contains(&v));
            }
        }
    }

    #[test]
    fn endpoint_ball_in_x2() {
        // a, 0:b, 0:m_upper, 0:m_lower, 0:c, b
        let g = x(2);
        let space = metric::all_pairs(&g).unwrap();
        let b = ball(&g, g.endpoints().0, ScaledDistance::new(4, 2)).unwrap();
        let by_scan = space.row(g.endpoints().0 as usize).iter().filter(|&&d| d <= 4).count();
        assert_eq!(b.len(), by_scan);
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn four_cycle_needs_two_unit_balls() {
        // corners of the X_1 square, centers anywhere in X_1
        let g = x(1);
        let space = metric::all_pairs(&g).unwrap();
        let corners: Vec<usize> = g.edge_cycles()[0].corners.iter().map(|&v| v as usize).collect();
        let problem = CoverProblem::new(&space, corners, unit(1));
        assert_eq!(brute_force_cover(&problem), 2);
        assert_eq!(min_cover_exact(&problem, DEFAULT_WORK_LIMIT).unwrap().size, 2);
    }

    #[test]
    fn single_target_needs_one_center() {
        let g = x(2);
        let space = metric::all_pairs(&g).unwrap();
        let problem = CoverProblem::new(&space, vec![7], unit(2));
        assert_eq!(greedy_cover(&problem).unwrap().len(), 1);
        let ball_x = ball_in(&space, 7, ScaledDistance::new(3, 2));
        let own = CoverProblem::new(&space, ball_x, ScaledDistance::new(3, 2));
        assert_eq!(min_cover_exact(&own, DEFAULT_WORK_LIMIT).unwrap().size, 1);
    }

    #[test]
    fn infeasible_candidates_are_reported() {
        let g = x(2);
        let space = metric::all_pairs(&g).unwrap();
        let problem = CoverProblem {
            space: &space,
            target: vec![0, 29],
            radius: unit(2),
            candidates: vec![0],
        };
        assert!(matches!(greedy_cover(&problem), Err(Error::InfeasibleCover(1))));
        let empty = CoverProblem::new(&space, vec![], unit(2));
        assert!(greedy_cover(&empty).is_err());
    }

    #[test]
    fn x1_doubling_balls_by_brute_force() {
        // B(x, 2u) by u-balls on X_1 for every x and both u that fit
        let g = x(1);
        let space = metric::all_pairs(&g).unwrap();
        for u in [1u64, 2] {
            for v in 0..space.size() {
                let target = ball_in(&space, v, ScaledDistance::new(2 * u, 1));
                let problem = CoverProblem::new(&space, target, ScaledDistance::new(u, 1));
                let exact = brute_force_cover(&problem);
                let greedy = greedy_cover(&problem).unwrap().len();
                assert!(greedy <= 6);
                assert!(greedy >= exact);
                assert_eq!(min_cover_exact(&problem, DEFAULT_WORK_LIMIT).unwrap().size, exact);
            }
        }
    }

    #[test]
    fn exact_matches_brute_force_on_x2_balls() {
        let g = x(2);
        let space = metric::all_pairs(&g).unwrap();
        let small: Vec<usize> = (0..space.size()).step_by(3).collect();
        for v in 0..space.size() {
            for r in [2u64, 4] {
                let target = ball_in(&space, v, ScaledDistance::new(r, 2));
                let problem = CoverProblem {
                    space: &space,
                    target: target.clone(),
                    radius: ScaledDistance::new(r / 2, 2),
                    candidates: small.iter().copied().chain(target).collect(),
                };
                let outcome = min_cover_exact(&problem, DEFAULT_WORK_LIMIT).unwrap();
                assert_eq!(outcome.method, CoverMethod::Exact);
                if problem.candidates.len() <= 20 {
                    assert_eq!(outcome.size, brute_force_cover(&problem));
                }
            }
        }
    }

    #[test]
    fn work_limit_falls_back_to_greedy() {
        let g = x(3);
        let space = metric::all_pairs(&g).unwrap();
        let problem = CoverProblem::new(&space, (0..space.size()).collect(), unit(3));
        let outcome = min_cover_exact(&problem, 5).unwrap();
        assert_eq!(outcome.method, CoverMethod::Greedy);
        assert_eq!(outcome.size, greedy_cover(&problem).unwrap().len());
    }

    #[test]
    fn tiny_radius_gives_singletons() {
        // r = one unit at m = level: half-unit balls hold a single vertex
        let g = x(2);
        let report = doubling_report(&g, &[2], DEFAULT_WORK_LIMIT).unwrap();
        for e in &report.entries {
            assert_eq!(e.cover_size, e.ball_size);
        }
        assert!(doubling_report(&g, &[3], DEFAULT_WORK_LIMIT).is_err());
    }

    #[test]
    fn x1_whole_space_is_doubling_with_six() {
        let g = x(1);
        let report = doubling_report(&g, &[0], DEFAULT_WORK_LIMIT).unwrap();
        assert!(report.max_cover_size <= 6);
        assert!(report.all_exact);
        for e in &report.entries {
            assert!(e.cover_size <= e.greedy_size);
        }
    }

    #[test]
    fn separated_sets_bracket_the_covering_number() {
        let g = x(2);
        let space = metric::all_pairs(&g).unwrap();
        for v in 0..space.size() {
            for m in 0..=2 {
                let r = ScaledDistance::power_of_quarter(m, 2);
                let target = ball_in(&space, v, r);
                for rho in [r, r.half()] {
                    let n = min_cover_exact(&CoverProblem::new(&space, target.clone(), rho), DEFAULT_WORK_LIMIT)
                        .unwrap()
                        .size;
                    let fine = separated_subset(&space, &target, rho);
                    let coarse = separated_subset(&space, &target, rho.double());
                    assert!(fine.len() >= n, "v={v} m={m}");
                    assert!(n >= coarse.len(), "v={v} m={m}");
                }
            }
        }
    }

    #[test]
    fn covering_is_monotone() {
        let g = x(2);
        let space = metric::all_pairs(&g).unwrap();
        for v in (0..space.size()).step_by(4) {
            let target = ball_in(&space, v, ScaledDistance::new(8, 2));
            let mut last = usize::MAX;
            for rho in 1..=8u64 {
                let n = min_cover_exact(
                    &CoverProblem::new(&space, target.clone(), ScaledDistance::new(rho, 2)),
                    DEFAULT_WORK_LIMIT,
                )
                .unwrap()
                .size;
                assert!(n <= last);
                last = n;
            }
            let smaller: Vec<usize> = target.iter().copied().step_by(2).collect();
            let r = ScaledDistance::new(2, 2);
            let n_small = min_cover_exact(&CoverProblem::new(&space, smaller, r), DEFAULT_WORK_LIMIT).unwrap().size;
            let n_big = min_cover_exact(&CoverProblem::new(&space, target, r), DEFAULT_WORK_LIMIT).unwrap().size;
            assert!(n_small <= n_big);
        }
    }

    #[test]
    fn degenerate_fits_are_rejected() {
        let g = x(1);
        let space = metric::all_pairs(&g).unwrap();
        let labels: Vec<String> = g.labels().iter().map(|l| l.to_string()).collect();
        let same = vec![(ScaledDistance::new(4, 1), ScaledDistance::new(1, 1)); 3];
        assert!(matches!(
            assouad_fit(&space, &labels, &same, DEFAULT_WORK_LIMIT),
            Err(Error::DegenerateFit(_))
        ));
        assert!(assouad_fit(&space, &labels, &same[..1], DEFAULT_WORK_LIMIT).is_err());
    }

    #[test]
    fn a_path_is_one_dimensional() {
        // the image of X_0 inside X_4: a geodesic path of 256 edges
        let tower = crate::graph::Tower::default();
        let g = tower.graph(4).unwrap();
        let image = tower.refine(0, 4).unwrap().image_vertices(&g);
        let keep: Vec<usize> = image.iter().map(|&v| v as usize).collect();
        let space = metric::all_pairs(&g).unwrap().restrict(&keep);
        let labels: Vec<String> = image.iter().map(|&v| g.label(v).to_string()).collect();
        let fit = assouad_fit(&space, &labels, &whole_space_scale_pairs(4), DEFAULT_WORK_LIMIT).unwrap();
        assert!((fit.exponent_s - 1.0).abs() < 0.1, "s = {}", fit.exponent_s);
        assert!(fit.constant_m >= 1.0);
    }
}
