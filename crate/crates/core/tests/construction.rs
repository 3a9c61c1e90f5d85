use std::collections::HashSet;

use laakso::graph::expected_vertex_count;
use laakso::verify::CheckGraph;
use laakso::{build, DEFAULT_CAP};

#[test]
fn counts_and_degrees() {
    for level in 0..=5u32 {
        let g = build(level, DEFAULT_CAP).unwrap();
        assert_eq!(g.edges().len() as u64, 6u64.pow(level));
        assert_eq!(g.vertex_count() as u64, expected_vertex_count(level));
        let cycles = if level == 0 { 0 } else { 6usize.pow(level - 1) };
        assert_eq!(g.edge_cycles().len(), cycles);

        let degrees: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        assert_eq!(degrees.iter().filter(|&&d| d == 1).count(), 2);
        assert!(degrees.iter().all(|&d| (1..=3).contains(&d)));
        let junctions = degrees.iter().filter(|&&d| d == 3).count() as u64;
        assert_eq!(junctions, 2 * (6u64.pow(level) - 1) / 5);
        let (s, t) = g.endpoints();
        assert_eq!((g.degree(s), g.degree(t)), (1, 1));
    }
}

#[test]
fn connected() {
    for level in 0..=4 {
        let g = build(level, DEFAULT_CAP).unwrap();
        let reach = laakso::metric::bfs(&g, &[0]);
        assert!(reach.iter().all(|&d| d != u32::MAX));
    }
}

#[test]
fn edge_cycles_are_disjoint_squares() {
    for level in 1..=4 {
        let g = build(level, DEFAULT_CAP).unwrap();
        let edges: HashSet<(u32, u32)> = g.edges().iter().map(|&[u, v]| (u.min(v), u.max(v))).collect();
        let mut used = HashSet::new();
        for cycle in g.edge_cycles() {
            for k in 0..4 {
                let (u, v) = (cycle.corners[k], cycle.corners[(k + 1) % 4]);
                assert!(edges.contains(&(u.min(v), u.max(v))));
                let [a, b] = g.edges()[cycle.member_edges[k]];
                assert_eq!((a.min(b), a.max(b)), (u.min(v), u.max(v)));
                assert!(used.insert(cycle.corners[k]), "vertex in two cycles");
            }
            for j in cycle.junctions() {
                assert_eq!(g.degree(j), 3);
            }
            for s in cycle.sides() {
                assert_eq!(g.degree(s), 2);
            }
        }
    }
}

/// Top-down construction agrees with bottom-up substitution, label for label.
#[test]
fn top_down_matches_bottom_up() {
    for level in 0..=4 {
        let g = build(level, DEFAULT_CAP).unwrap();
        let other = CheckGraph::build(level);
        assert_eq!(g.vertex_count(), other.vertex_count());
        for &[u, v] in g.edges() {
            let a = other.vertex(&g.label(u).to_string()).expect("label known bottom-up");
            let b = other.vertex(&g.label(v).to_string()).expect("label known bottom-up");
            assert!(other.is_edge(a, b));
        }
        let squares: HashSet<Vec<String>> = other.cycles().iter().map(|c| c.to_vec()).collect();
        for cycle in g.edge_cycles() {
            let corners: Vec<String> = cycle.corners.iter().map(|&v| g.label(v).to_string()).collect();
            assert!(squares.contains(&corners));
        }
    }
}
