//! Geodesic distances on `X_i` in exact units of `4^{-i}`.
//!
//! Every edge at one level has the same length, so breadth-first hop counts
//! are exact geodesic distances.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LaaksoGraph, Point, Tower, VertexId, VertexLabel};
use crate::scaled::ScaledDistance;

/// Matrices with more entries than this are refused by default.
pub const DEFAULT_MATRIX_BUDGET: u64 = 100_000_000;

const UNREACHED: u32 = u32::MAX;

/// Hop counts from the nearest of `sources` to every vertex.
pub fn bfs(g: &LaaksoGraph, sources: &[VertexId]) -> Vec<u32> {
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut queue = VecDeque::with_capacity(g.vertex_count());
    for &s in sources {
        if dist[s as usize] != 0 {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u as usize] + 1;
        for &v in g.neighbors(u) {
            if dist[v as usize] == UNREACHED {
                dist[v as usize] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn check_vertex(g: &LaaksoGraph, v: VertexId) -> Result<()> {
    if g.contains(v) {
        Ok(())
    } else {
        Err(Error::UnknownVertex(format!("id {v} at level {}", g.level())))
    }
}

pub fn dist(g: &LaaksoGraph, u: VertexId, v: VertexId) -> Result<ScaledDistance> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    let hops = bfs(g, &[u])[v as usize];
    Ok(ScaledDistance::new(hops as u64, g.unit_exponent()))
}

/// Distance between two points of the limit space, computed at the finer of
/// their two levels.
pub fn point_dist(tower: &Tower, p: &Point, q: &Point) -> Result<ScaledDistance> {
    let level = p.level.max(q.level);
    let g = tower.graph(level)?;
    let u = g.require(&p.label)?;
    let v = g.require(&q.label)?;
    dist(&g, u, v)
}

/// Dense symmetric matrix of hop counts at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    unit_exponent: u32,
    size: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn from_rows(unit_exponent: u32, rows: Vec<Vec<u32>>) -> Self {
        let size = rows.len();
        assert!(rows.iter().all(|r| r.len() == size), "matrix must be square");
        Self {
            unit_exponent,
            size,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn unit_exponent(&self) -> u32 {
        self.unit_exponent
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Raw hop count.
    pub fn units(&self, u: usize, v: usize) -> u32 {
        self.data[u * self.size + v]
    }

    pub fn get(&self, u: usize, v: usize) -> ScaledDistance {
        ScaledDistance::new(self.units(u, v) as u64, self.unit_exponent)
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.data[u * self.size..(u + 1) * self.size]
    }

    /// Subspace metric on the given vertices, in that order.
    pub fn restrict(&self, keep: &[usize]) -> DistanceMatrix {
        let rows = keep
            .iter()
            .map(|&u| keep.iter().map(|&v| self.units(u, v)).collect())
            .collect();
        DistanceMatrix::from_rows(self.unit_exponent, rows)
    }

    /// CSV with a `unit_exponent=<k>` header line and integer units.
    pub fn to_csv(&self, labels: Option<&[VertexLabel]>) -> String {
        let mut out = format!("unit_exponent={}\n", self.unit_exponent);
        if let Some(labels) = labels {
            let header: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
            out.push_str(&format!("vertex,{}\n", header.join(",")));
        }
        for u in 0..self.size {
            let cells: Vec<String> = self.row(u).iter().map(|d| d.to_string()).collect();
            if let Some(labels) = labels {
                out.push_str(&format!("{},", labels[u]));
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn all_pairs(g: &LaaksoGraph) -> Result<DistanceMatrix> {
    all_pairs_with_budget(g, DEFAULT_MATRIX_BUDGET)
}

pub fn all_pairs_with_budget(g: &LaaksoGraph, budget: u64) -> Result<DistanceMatrix> {
    let n = g.vertex_count() as u64;
    if n * n > budget {
        return Err(Error::Budget {
            entries: n * n,
            budget,
        });
    }
    let rows: Vec<Vec<u32>> = g
        .vertices()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| bfs(g, &[s]))
        .collect();
    Ok(DistanceMatrix::from_rows(g.unit_exponent(), rows))
}

/// Largest distance together with a pair attaining it; needs only one BFS row at a time.
pub fn diameter_pair(g: &LaaksoGraph) -> (ScaledDistance, (VertexId, VertexId)) {
    let (hops, pair) = g
        .vertices()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| {
            let row = bfs(g, &[s]);
            let (far, &d) = row
                .iter()
                .enumerate()
                .max_by_key(|&(v, d)| (*d, std::cmp::Reverse(v)))
                .expect("graph has vertices");
            (d, (s, far as VertexId))
        })
        .max_by_key(|&(d, (s, t))| (d, std::cmp::Reverse((s, t))))
        .expect("graph has vertices");
    (ScaledDistance::new(hops as u64, g.unit_exponent()), pair)
}

pub fn diameter(g: &LaaksoGraph) -> ScaledDistance {
    diameter_pair(g).0
}

/// One-sided certificate that the image of `X_from` is dense in `X_to`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapCertificate {
    pub from_level: u32,
    pub to_level: u32,
    pub max_gap: ScaledDistance,
    pub bound: ScaledDistance,
    pub witness: VertexLabel,
}

/// Largest distance from a vertex of `X_j` to the refinement image of `X_i`.
pub fn hausdorff_gap(tower: &Tower, i: u32, j: u32) -> Result<GapCertificate> {
    let map = tower.refine(i, j)?;
    let target = tower.graph(j)?;
    let image = map.image_vertices(&target);
    let reach = bfs(&target, &image);
    let (witness, &gap) = reach
        .iter()
        .enumerate()
        .max_by_key(|&(v, d)| (*d, std::cmp::Reverse(v)))
        .expect("graph has vertices");
    let cert = GapCertificate {
        from_level: i,
        to_level: j,
        max_gap: ScaledDistance::new(gap as u64, j),
        bound: ScaledDistance::power_of_quarter(i + 1, j),
        witness: target.label(witness as VertexId).clone(),
    };
    debug_assert!(cert.max_gap <= cert.bound);
    Ok(cert)
}

/// Upper bound on the Gromov–Hausdorff distance of `X_i` and `X_j` through the
/// canonical isometric embedding.
pub fn gh_upper_bound(tower: &Tower, i: u32, j: u32) -> Result<ScaledDistance> {
    Ok(hausdorff_gap(tower, i, j)?.max_gap)
}

/// BFS rows of one graph, computed on demand and kept.
#[derive(Debug)]
pub struct RowCache {
    graph: Arc<LaaksoGraph>,
    rows: HashMap<VertexId, Arc<Vec<u32>>>,
}

impl RowCache {
    pub fn new(graph: Arc<LaaksoGraph>) -> Self {
        Self {
            graph,
            rows: HashMap::new(),
        }
    }

    pub fn graph(&self) -> &Arc<LaaksoGraph> {
        &self.graph
    }

    pub fn level(&self) -> u32 {
        self.graph.level()
    }

    pub fn row(&mut self, source: VertexId) -> Arc<Vec<u32>> {
        let graph = &self.graph;
        self.rows
            .entry(source)
            .or_insert_with(|| Arc::new(bfs(graph, &[source])))
            .clone()
    }

    pub fn row_of(&mut self, p: &Point) -> Result<Arc<Vec<u32>>> {
        if p.level > self.level() {
            return Err(Error::Precondition(format!(
                "point {p} is finer than lattice level {}",
                self.level()
            )));
        }
        let v = self.graph.require(&p.label)?;
        Ok(self.row(v))
    }

    /// Computes the rows of all `sources` in parallel.
    pub fn prefetch(&mut self, sources: &[VertexId]) {
        let missing: Vec<VertexId> = sources
            .iter()
            .copied()
            .filter(|s| !self.rows.contains_key(s))
            .collect();
        let graph = &self.graph;
        let built: Vec<(VertexId, Vec<u32>)> = missing
            .into_par_iter()
            .map(|s| (s, bfs(graph, &[s])))
            .collect();
        for (s, row) in built {
            self.rows.insert(s, Arc::new(row));
        }
    }
}
