use laakso::metric::{self, all_pairs, dist, point_dist};
use laakso::{build, Point, ScaledDistance, Tower, DEFAULT_CAP};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn metric_axioms_exhaustive_up_to_level_two() {
    for level in 0..=2 {
        let m = all_pairs(&build(level, DEFAULT_CAP).unwrap()).unwrap();
        let n = m.size();
        for u in 0..n {
            assert_eq!(m.units(u, u), 0);
            for v in 0..n {
                assert_eq!(m.units(u, v), m.units(v, u));
                if u != v {
                    assert!(m.units(u, v) > 0);
                }
                for w in 0..n {
                    assert!(m.units(u, w) <= m.units(u, v) + m.units(v, w));
                }
            }
        }
    }
}

#[test]
fn triangle_inequality_sampled_at_level_three() {
    let m = all_pairs(&build(3, DEFAULT_CAP).unwrap()).unwrap();
    let n = m.size();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100_000 {
        let (u, v, w) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        assert!(m.units(u, w) <= m.units(u, v) + m.units(v, w));
        assert_eq!(m.units(u, v), m.units(v, u));
    }
}

#[test]
fn refinement_is_isometric() {
    let tower = Tower::default();
    for j in 1..=4 {
        let fine = all_pairs(&tower.graph(j).unwrap()).unwrap();
        for i in 0..j {
            let coarse = all_pairs(&tower.graph(i).unwrap()).unwrap();
            let map = tower.refine(i, j).unwrap();
            for u in 0..coarse.size() {
                for v in 0..coarse.size() {
                    let before = coarse.get(u, v);
                    let after = fine.get(map.vertex_map[u] as usize, map.vertex_map[v] as usize);
                    assert_eq!(before, after, "{i}->{j} pair ({u},{v})");
                }
            }
        }
    }
}

#[test]
fn involution_is_isometric() {
    for level in 0..=3 {
        let g = build(level, DEFAULT_CAP).unwrap();
        let m = all_pairs(&g).unwrap();
        let sigma = g.endpoint_involution();
        for u in 0..m.size() {
            for v in 0..m.size() {
                assert_eq!(m.units(u, v), m.units(sigma[u] as usize, sigma[v] as usize));
            }
        }
    }
}

#[test]
fn one_step_image_is_one_unit_dense() {
    let tower = Tower::default();
    for i in 0..=3 {
        let cert = metric::hausdorff_gap(&tower, i, i + 1).unwrap();
        assert!(cert.max_gap <= ScaledDistance::new(1, i + 1));
        assert!(cert.max_gap <= cert.bound);
    }
}

#[test]
fn point_dist_does_not_depend_on_lifting_level() {
    let tower = Tower::default();
    for level in 0..=3 {
        let g = tower.graph(level).unwrap();
        let deeper = all_pairs(&tower.graph(level + 1).unwrap()).unwrap();
        let finer = tower.graph(level + 1).unwrap();
        for u in g.vertices() {
            for v in g.vertices() {
                let (p, q) = (g.point(u), g.point(v));
                let here = point_dist(&tower, &p, &q).unwrap();
                let lifted = deeper.get(
                    finer.id(&p.label).unwrap() as usize,
                    finer.id(&q.label).unwrap() as usize,
                );
                assert_eq!(here, lifted);
                assert_eq!(here.rescale(level + 1).value, lifted.value);
            }
        }
    }
}

#[test]
fn lifted_m_upper_keeps_its_distances() {
    // m_upper of X_1 seen in X_2: still one quarter from b, i.e. 4 level-2 units
    let tower = Tower::default();
    let mu = Point::top(1, laakso::Node::Upper).unwrap();
    let b = Point::top(1, laakso::Node::B).unwrap();
    let lifted = tower.lift(&mu, 2).unwrap();
    let x2 = tower.graph(2).unwrap();
    let d = dist(&x2, x2.id(&lifted.label).unwrap(), x2.id(&b.label).unwrap()).unwrap();
    assert_eq!(d.value, 4);
    assert_eq!(d, point_dist(&tower, &mu, &b).unwrap());
}

proptest! {
    #[test]
    fn bfs_agrees_with_matrix(level in 0u32..=3, a in 0usize..1000, b in 0usize..1000) {
        let g = build(level, DEFAULT_CAP).unwrap();
        let n = g.vertex_count();
        let (u, v) = ((a % n) as u32, (b % n) as u32);
        let m = all_pairs(&g).unwrap();
        prop_assert_eq!(dist(&g, u, v).unwrap(), m.get(u as usize, v as usize));
        prop_assert!(dist(&g, u, v).unwrap() <= ScaledDistance::new(1, 0));
    }
}
