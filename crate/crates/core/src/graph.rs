//! Construction of the Laakso graphs `X_i`.
//!
//! `X_0` is a single edge from `a` to `d`. For `i >= 1`, `X_i` is the six-edge
//! pattern
//!
//! ```text
//!            m_upper
//!           /       \
//!   a --- b           c --- d
//!           \       /
//!            m_lower
//! ```
//!
//! with every pattern edge replaced by a copy of `X_{i-1}` scaled by 1/4.
//! Edges of `X_i` are therefore addressed by `i` base-6 digits (one pattern
//! edge per generation) and vertices by a copy path plus a pattern node.
//! Labels are canonical: a vertex shared between copies always carries the
//! label of the shallowest copy that owns it, and labels are stable across
//! levels, so the canonical refinement `X_i -> X_j` is the identity on labels.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the generation index.
pub const DEFAULT_CAP: u32 = 6;

pub type VertexId = u32;

/// A vertex of the six-edge pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    A,
    B,
    Upper,
    Lower,
    C,
    D,
}

impl Node {
    pub const ALL: [Node; 6] = [Node::A, Node::B, Node::Upper, Node::Lower, Node::C, Node::D];
    pub const INTERIOR: [Node; 4] = [Node::B, Node::Upper, Node::Lower, Node::C];

    pub fn name(self) -> &'static str {
        match self {
            Node::A => "a",
            Node::B => "b",
            Node::Upper => "m_upper",
            Node::Lower => "m_lower",
            Node::C => "c",
            Node::D => "d",
        }
    }

    fn is_endpoint(self) -> bool {
        matches!(self, Node::A | Node::D)
    }

    /// Reflection of the pattern that swaps `a` with `d`.
    pub fn mirror(self) -> Node {
        match self {
            Node::A => Node::D,
            Node::B => Node::C,
            Node::C => Node::B,
            Node::D => Node::A,
            other => other,
        }
    }
}

impl FromStr for Node {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Node::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| Error::Parse {
                what: "pattern node",
                input: s.to_string(),
            })
    }
}

/// Pattern edges, oriented; a copy substituted for edge `e` has its `a` at
/// `PATTERN_EDGES[e].0` and its `d` at `PATTERN_EDGES[e].1`.
pub const PATTERN_EDGES: [(Node, Node); 6] = [
    (Node::A, Node::B),
    (Node::B, Node::Upper),
    (Node::B, Node::Lower),
    (Node::Upper, Node::C),
    (Node::Lower, Node::C),
    (Node::C, Node::D),
];

/// Pattern edges on the canonical `a -> b -> m_upper -> c -> d` geodesic.
pub const CANONICAL_BRANCH: [u8; 4] = [0, 1, 3, 5];

/// Pattern-edge permutation induced by [`Node::mirror`].
pub const MIRROR_EDGE: [u8; 6] = [5, 3, 4, 1, 2, 0];

/// Canonical vertex label: a copy path (one pattern edge index per generation)
/// and the pattern node inside the innermost copy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    path: Vec<u8>,
    node: Node,
}

impl VertexLabel {
    /// Builds the canonical label of `node` in the copy at `path`, climbing
    /// to the parent copy while `node` is an endpoint of its copy.
    pub fn resolve(path: &[u8], node: Node) -> Self {
        let mut path = path.to_vec();
        let mut node = node;
        while node.is_endpoint() {
            let Some(edge) = path.pop() else { break };
            let (start, end) = PATTERN_EDGES[edge as usize];
            node = if node == Node::A { start } else { end };
        }
        Self { path, node }
    }

    pub fn top(node: Node) -> Self {
        Self::resolve(&[], node)
    }

    pub fn path(&self) -> &[u8] {
        &self.path
    }

    pub fn node(&self) -> Node {
        self.node
    }

    /// The coarsest level at which this label is a vertex.
    pub fn min_level(&self) -> u32 {
        if self.path.is_empty() && self.node.is_endpoint() {
            0
        } else {
            self.path.len() as u32 + 1
        }
    }

    pub fn mirror(&self) -> Self {
        Self {
            path: self.path.iter().map(|&e| MIRROR_EDGE[e as usize]).collect(),
            node: self.node.mirror(),
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return f.write_str(self.node.name());
        }
        for digit in &self.path {
            write!(f, "{digit}")?;
        }
        write!(f, ":{}", self.node.name())
    }
}

impl FromStr for VertexLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "vertex label",
            input: s.to_string(),
        };
        let (path, node) = match s.split_once(':') {
            Some((path, node)) if !path.is_empty() => (path, node),
            Some(_) => return Err(bad()),
            None => ("", s),
        };
        let digits = path
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d < 6 => Ok(d as u8),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<u8>>>()?;
        let node: Node = node.parse().map_err(|_| bad())?;
        let label = Self::resolve(&digits, node);
        if label.path.len() != digits.len() {
            // endpoint labels of a copy are spelled through their owner
            return Err(bad());
        }
        Ok(label)
    }
}

impl Serialize for VertexLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexLabel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Base-6 digits of an edge index at `level`, most significant first.
pub fn edge_digits(level: u32, mut index: usize) -> Vec<u8> {
    let mut digits = vec![0u8; level as usize];
    for slot in digits.iter_mut().rev() {
        *slot = (index % 6) as u8;
        index /= 6;
    }
    digits
}

/// Endpoint labels of the edge with the given digits.
pub fn edge_endpoints(digits: &[u8]) -> (VertexLabel, VertexLabel) {
    match digits.split_last() {
        None => (VertexLabel::top(Node::A), VertexLabel::top(Node::D)),
        Some((&edge, path)) => {
            let (u, v) = PATTERN_EDGES[edge as usize];
            (VertexLabel::resolve(path, u), VertexLabel::resolve(path, v))
        }
    }
}

/// A finest-scale square `junction, side, junction, side`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCycle {
    pub corners: [VertexId; 4],
    pub member_edges: [usize; 4],
    /// Path of the `X_1` copy whose square this is.
    pub copy_path: Vec<u8>,
}

impl EdgeCycle {
    pub fn junctions(&self) -> [VertexId; 2] {
        [self.corners[0], self.corners[2]]
    }

    pub fn sides(&self) -> [VertexId; 2] {
        [self.corners[1], self.corners[3]]
    }
}

/// The level-`i` graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct LaaksoGraph {
    level: u32,
    labels: Vec<VertexLabel>,
    index: HashMap<VertexLabel, VertexId>,
    edges: Vec<[VertexId; 2]>,
    adjacency: Vec<Vec<VertexId>>,
    endpoints: (VertexId, VertexId),
    edge_cycles: Vec<EdgeCycle>,
}

fn copy_paths(depth: u32) -> impl Iterator<Item = Vec<u8>> {
    (0..6usize.pow(depth)).map(move |i| edge_digits(depth, i))
}

/// Builds `X_level` top-down.
pub fn build(level: u32, cap: u32) -> Result<LaaksoGraph> {
    if level > cap {
        return Err(Error::LevelCap { level, cap });
    }

    let mut labels = Vec::new();
    if level == 0 {
        labels.push(VertexLabel::top(Node::A));
        labels.push(VertexLabel::top(Node::D));
    } else {
        labels.extend(Node::ALL.into_iter().map(VertexLabel::top));
        for depth in 1..level {
            for path in copy_paths(depth) {
                for node in Node::INTERIOR {
                    labels.push(VertexLabel {
                        path: path.clone(),
                        node,
                    });
                }
            }
        }
    }
    let index: HashMap<VertexLabel, VertexId> = labels
        .iter()
        .enumerate()
        .map(|(id, label)| (label.clone(), id as VertexId))
        .collect();

    let edges: Vec<[VertexId; 2]> = (0..6usize.pow(level))
        .map(|n| {
            let (u, v) = edge_endpoints(&edge_digits(level, n));
            [index[&u], index[&v]]
        })
        .collect();

    let mut adjacency = vec![Vec::new(); labels.len()];
    for &[u, v] in &edges {
        adjacency[u as usize].push(v);
        adjacency[v as usize].push(u);
    }

    let mut edge_cycles = Vec::new();
    if level >= 1 {
        for path in copy_paths(level - 1) {
            let at = |node| index[&VertexLabel::resolve(&path, node)];
            let base = path.iter().fold(0usize, |acc, &d| acc * 6 + d as usize) * 6;
            edge_cycles.push(EdgeCycle {
                corners: [at(Node::B), at(Node::Upper), at(Node::C), at(Node::Lower)],
                member_edges: [base + 1, base + 3, base + 4, base + 2],
                copy_path: path,
            });
        }
    }

    let endpoints = (
        index[&VertexLabel::top(Node::A)],
        index[&VertexLabel::top(Node::D)],
    );
    Ok(LaaksoGraph {
        level,
        labels,
        index,
        edges,
        adjacency,
        endpoints,
        edge_cycles,
    })
}

impl LaaksoGraph {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Edge length is `4^{-unit_exponent}`.
    pub fn unit_exponent(&self) -> u32 {
        self.level
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.labels.len() as VertexId
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        self.endpoints
    }

    pub fn edge_cycles(&self) -> &[EdgeCycle] {
        &self.edge_cycles
    }

    pub fn label(&self, v: VertexId) -> &VertexLabel {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn id(&self, label: &VertexLabel) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &VertexLabel) -> Result<VertexId> {
        self.id(label)
            .ok_or_else(|| Error::UnknownVertex(format!("{label} at level {}", self.level)))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v as usize) < self.labels.len()
    }

    pub fn point(&self, v: VertexId) -> Point {
        Point {
            level: self.level,
            label: self.labels[v as usize].clone(),
        }
    }

    /// Vertex permutation swapping the endpoints; an automorphism and an involution.
    pub fn endpoint_involution(&self) -> Vec<VertexId> {
        self.labels
            .iter()
            .map(|label| self.index[&label.mirror()])
            .collect()
    }
}

/// Vertex count `(4·6^i + 6) / 5`.
pub fn expected_vertex_count(level: u32) -> u64 {
    (4 * 6u64.pow(level) + 6) / 5
}

/// A point of the limit space, represented by a vertex at some finite level.
/// Equality and hashing ignore the level: two points are equal iff they
/// coincide after lifting to a common level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Point {
    pub level: u32,
    pub label: VertexLabel,
}

impl Point {
    pub fn new(level: u32, label: VertexLabel) -> Result<Self> {
        if label.min_level() > level {
            return Err(Error::UnknownVertex(format!("{label} at level {level}")));
        }
        Ok(Self { level, label })
    }

    pub fn top(level: u32, node: Node) -> Result<Self> {
        Self::new(level, VertexLabel::top(node))
    }

    /// Canonical representative of the same point at a deeper level.
    pub fn lift(&self, to: u32) -> Result<Point> {
        if to < self.level {
            return Err(Error::Precondition(format!(
                "cannot lift a level-{} point to level {to}",
                self.level
            )));
        }
        Ok(Point {
            level: to,
            label: self.label.clone(),
        })
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
    }
}

impl Eq for Point {}

impl std::hash::Hash for Point {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.label.hash(state);
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.label)
    }
}

/// The canonical isometric embedding `X_from -> X_to`.
///
/// Each edge of `X_from` is sent to the `a -> b -> m_upper -> c -> d` path of
/// the `X_1` copy substituted for it, repeatedly; on vertices this is the
/// identity on labels.
#[derive(Debug, Clone)]
pub struct RefinementMap {
    pub from_level: u32,
    pub to_level: u32,
    pub vertex_map: Vec<VertexId>,
}

impl RefinementMap {
    pub fn new(from: &LaaksoGraph, to: &LaaksoGraph) -> Result<Self> {
        if from.level >= to.level {
            return Err(Error::Precondition(format!(
                "refinement needs from < to, got {} -> {}",
                from.level, to.level
            )));
        }
        let vertex_map = from
            .labels
            .iter()
            .map(|label| to.require(label))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            from_level: from.level,
            to_level: to.level,
            vertex_map,
        })
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.vertex_map[v as usize]
    }

    /// Edges of `X_to` on the image of the edges of `X_from`.
    pub fn image_edges(&self, to: &LaaksoGraph) -> Vec<usize> {
        let skip = self.from_level as usize;
        (0..to.edges.len())
            .filter(|&n| {
                edge_digits(to.level, n)[skip..]
                    .iter()
                    .all(|d| CANONICAL_BRANCH.contains(d))
            })
            .collect()
    }

    /// Vertices of `X_to` lying on the image of `X_from` viewed as a metric
    /// graph (edges included, not only vertex images).
    pub fn image_vertices(&self, to: &LaaksoGraph) -> Vec<VertexId> {
        let mut seen = vec![false; to.vertex_count()];
        for n in self.image_edges(to) {
            for v in to.edges[n] {
                seen[v as usize] = true;
            }
        }
        (0..seen.len() as VertexId)
            .filter(|&v| seen[v as usize])
            .collect()
    }
}

/// Lazily built graphs for every level up to a cap, shared by all labs.
#[derive(Debug)]
pub struct Tower {
    cap: u32,
    graphs: Vec<OnceLock<Arc<LaaksoGraph>>>,
}

impl Default for Tower {
    fn default() -> Self {
        Self::new(DEFAULT_CAP)
    }
}

impl Tower {
    pub fn new(cap: u32) -> Self {
        Self {
            cap,
            graphs: (0..=cap).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn check_level(&self, level: u32) -> Result<()> {
        if level > self.cap {
            return Err(Error::LevelCap {
                level,
                cap: self.cap,
            });
        }
        Ok(())
    }

    pub fn graph(&self, level: u32) -> Result<Arc<LaaksoGraph>> {
        self.check_level(level)?;
        let slot = &self.graphs[level as usize];
        if let Some(g) = slot.get() {
            return Ok(g.clone());
        }
        let built = Arc::new(build(level, self.cap)?);
        Ok(slot.get_or_init(|| built).clone())
    }

    pub fn refine(&self, from: u32, to: u32) -> Result<RefinementMap> {
        if from >= to {
            return Err(Error::Precondition(format!(
                "refinement needs from < to, got {from} -> {to}"
            )));
        }
        RefinementMap::new(&*self.graph(from)?, &*self.graph(to)?)
    }

    pub fn lift(&self, p: &Point, to: u32) -> Result<Point> {
        self.check_level(to)?;
        p.lift(to)
    }

    /// Vertex id of a point in the graph of its own level.
    pub fn locate(&self, p: &Point) -> Result<(Arc<LaaksoGraph>, VertexId)> {
        let g = self.graph(p.level)?;
        let v = g.require(&p.label)?;
        Ok((g, v))
    }
}

#[derive(Serialize)]
struct GraphJson<'a> {
    level: u32,
    unit_exponent: u32,
    vertices: &'a [VertexLabel],
    edges: Vec<[&'a VertexLabel; 2]>,
    endpoints: [&'a VertexLabel; 2],
    edge_cycles: Vec<[&'a VertexLabel; 4]>,
}

impl LaaksoGraph {
    pub fn to_json_value(&self) -> serde_json::Value {
        let l = |v: VertexId| &self.labels[v as usize];
        let doc = GraphJson {
            level: self.level,
            unit_exponent: self.unit_exponent(),
            vertices: &self.labels,
            edges: self.edges.iter().map(|&[u, v]| [l(u), l(v)]).collect(),
            endpoints: [l(self.endpoints.0), l(self.endpoints.1)],
            edge_cycles: self
                .edge_cycles
                .iter()
                .map(|c| c.corners.map(l))
                .collect(),
        };
        serde_json::to_value(doc).expect("graph serializes")
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# laakso level={}\n", self.level);
        for &[u, v] in &self.edges {
            out.push_str(&format!("{} {}\n", self.label(u), self.label(v)));
        }
        out
    }

    /// Graphviz rendering; edges on an edge cycle carry `class="cycle"` and a color.
    pub fn to_dot(&self) -> String {
        let mut on_cycle = vec![false; self.edges.len()];
        for cycle in &self.edge_cycles {
            for &e in &cycle.member_edges {
                on_cycle[e] = true;
            }
        }
        let mut out = format!("graph laakso_{} {{\n", self.level);
        for (id, label) in self.labels.iter().enumerate() {
            let shape = if id as VertexId == self.endpoints.0 || id as VertexId == self.endpoints.1 {
                "box"
            } else {
                "point"
            };
            out.push_str(&format!("  v{id} [label=\"{label}\", shape={shape}];\n"));
        }
        for (n, &[u, v]) in self.edges.iter().enumerate() {
            if on_cycle[n] {
                out.push_str(&format!("  v{u} -- v{v} [class=\"cycle\", color=red];\n"));
            } else {
                out.push_str(&format!("  v{u} -- v{v};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn label(s: &str) -> VertexLabel {
        s.parse().unwrap()
    }

    #[test]
    fn level_zero_is_a_single_edge() {
        let g = build(0, DEFAULT_CAP).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges().len(), 1);
        assert!(g.edge_cycles().is_empty());
    }

    #[test]
    fn level_one_is_the_pattern() {
        let g = build(1, DEFAULT_CAP).unwrap();
        assert_eq!(g.edges().len(), 6);
        assert_eq!(g.edge_cycles().len(), 1);
        let names: Vec<String> = g.labels().iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["a", "b", "m_upper", "m_lower", "c", "d"]);
        let cycle = &g.edge_cycles()[0];
        assert_eq!(cycle.corners, [1, 2, 4, 3]);
    }

    #[test]
    fn level_three_counts() {
        let g = build(3, DEFAULT_CAP).unwrap();
        assert_eq!(g.edges().len(), 216);
        assert_eq!(g.vertex_count(), 174);
        assert_eq!(g.edge_cycles().len(), 36);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(build(3, 2), Err(Error::LevelCap { level: 3, cap: 2 })));
        let tower = Tower::new(2);
        assert!(tower.graph(3).is_err());
    }

    #[test]
    fn labels_round_trip_and_reject_noncanonical() {
        for s in ["a", "d", "m_upper", "0:b", "31:m_lower", "5:c"] {
            assert_eq!(label(s).to_string(), s);
        }
        // `a` of copy 1 is the top-level `b`
        assert!("1:a".parse::<VertexLabel>().is_err());
        assert!("7:b".parse::<VertexLabel>().is_err());
        assert!(":b".parse::<VertexLabel>().is_err());
        assert_eq!(VertexLabel::resolve(&[1], Node::A), label("b"));
        assert_eq!(VertexLabel::resolve(&[3, 5], Node::D), label("c"));
        assert_eq!(VertexLabel::resolve(&[3, 0], Node::D), label("3:b"));
    }

    #[test]
    fn refine_rejects_equal_levels() {
        let tower = Tower::default();
        assert!(matches!(tower.refine(2, 2), Err(Error::Precondition(_))));
        assert!(tower.refine(3, 1).is_err());
    }

    #[test]
    fn refine_zero_to_one_preserves_endpoints() {
        let tower = Tower::default();
        let map = tower.refine(0, 1).unwrap();
        let x0 = tower.graph(0).unwrap();
        let x1 = tower.graph(1).unwrap();
        assert_eq!(map.apply(x0.endpoints().0), x1.endpoints().0);
        assert_eq!(map.apply(x0.endpoints().1), x1.endpoints().1);
    }

    #[test]
    fn refine_is_injective_and_endpoint_preserving() {
        let tower = Tower::default();
        for j in 1..=4 {
            for i in 0..j {
                let map = tower.refine(i, j).unwrap();
                let (from, to) = (tower.graph(i).unwrap(), tower.graph(j).unwrap());
                let image: HashSet<_> = map.vertex_map.iter().collect();
                assert_eq!(image.len(), from.vertex_count());
                assert_eq!(map.apply(from.endpoints().0), to.endpoints().0);
                assert_eq!(map.apply(from.endpoints().1), to.endpoints().1);
            }
        }
    }

    #[test]
    fn image_of_one_step_is_a_canonical_path_per_edge() {
        let tower = Tower::default();
        let map = tower.refine(0, 2).unwrap();
        let x2 = tower.graph(2).unwrap();
        // X_0 -> X_2 is a geodesic path of 16 edges
        assert_eq!(map.image_edges(&x2).len(), 16);
        assert_eq!(map.image_vertices(&x2).len(), 17);
    }

    #[test]
    fn lift_is_identity_and_functorial() {
        let tower = Tower::default();
        let p = Point::top(1, Node::A).unwrap();
        assert_eq!(tower.lift(&p, 3).unwrap().label, p.label);
        assert_eq!(tower.lift(&p, 1).unwrap().level, 1);
        let q = Point::new(2, label("3:m_lower")).unwrap();
        let direct = tower.lift(&q, 4).unwrap();
        let staged = tower.lift(&tower.lift(&q, 3).unwrap(), 4).unwrap();
        assert_eq!(direct.level, staged.level);
        assert_eq!(direct.label, staged.label);
        assert!(tower.lift(&q, 1).is_err());
        assert!(tower.lift(&q, 7).is_err());
        assert!(Point::new(1, label("3:b")).is_err());
    }

    #[test]
    fn involution_on_small_levels() {
        let x0 = build(0, DEFAULT_CAP).unwrap();
        assert_eq!(x0.endpoint_involution(), vec![1, 0]);
        let x1 = build(1, DEFAULT_CAP).unwrap();
        // a b mu ml c d -> d c mu ml b a
        assert_eq!(x1.endpoint_involution(), vec![5, 4, 2, 3, 1, 0]);
    }

    #[test]
    fn involution_is_an_automorphism() {
        for level in 0..=4 {
            let g = build(level, DEFAULT_CAP).unwrap();
            let sigma = g.endpoint_involution();
            let edges: HashSet<(u32, u32)> = g
                .edges()
                .iter()
                .map(|&[u, v]| (u.min(v), u.max(v)))
                .collect();
            for &(u, v) in &edges {
                let (a, b) = (sigma[u as usize], sigma[v as usize]);
                assert!(edges.contains(&(a.min(b), a.max(b))));
            }
            for v in g.vertices() {
                assert_eq!(sigma[sigma[v as usize] as usize], v);
            }
            assert_eq!(sigma[g.endpoints().0 as usize], g.endpoints().1);
        }
    }

    #[test]
    fn build_is_deterministic() {
        let a = build(3, DEFAULT_CAP).unwrap();
        let b = build(3, DEFAULT_CAP).unwrap();
        assert_eq!(a.labels(), b.labels());
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn exports() {
        let g = build(1, DEFAULT_CAP).unwrap();
        let edge_list = g.to_edge_list();
        assert!(edge_list.starts_with("# laakso level=1\n"));
        assert_eq!(edge_list.lines().count(), 7);
        assert!(edge_list.contains("b m_upper\n"));
        let dot = g.to_dot();
        assert_eq!(dot.matches("class=\"cycle\"").count(), 4);
        let json = g.to_json_value();
        assert_eq!(json["edges"].as_array().unwrap().len(), 6);
        assert_eq!(json["endpoints"], serde_json::json!(["a", "d"]));
        assert_eq!(json["edge_cycles"][0], serde_json::json!(["b", "m_upper", "c", "m_lower"]));
    }
}
