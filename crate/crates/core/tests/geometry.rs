use proptest::prelude::*;
use varineq::geometry::{hull_distance, sample_grid, segment_distance, segment_projection, DEFAULT_MAX_ITER};
use varineq::{ConvexSet64, Point64};

fn pt(c: &[f64]) -> Point64 {
    Point64::from_f64(c).unwrap()
}

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn two_point_hull_matches_segment(p in coords(3), a in coords(3), b in coords(3)) {
        let (p, a, b) = (pt(&p), pt(&a), pt(&b));
        let seg = segment_distance(&p, &a, &b).unwrap();
        let hull = hull_distance(&p, &[a, b], DEFAULT_MAX_ITER, 1e-12).unwrap();
        prop_assert!((seg - hull.distance).abs() <= 1e-9, "segment {seg} hull {}", hull.distance);
        prop_assert!(hull.lower_bound <= hull.distance + 1e-12);
    }

    #[test]
    fn projection_is_nearest_lattice_point(p in coords(2), a in coords(2), b in coords(2)) {
        let (p, a, b) = (pt(&p), pt(&a), pt(&b));
        let (t, d) = segment_projection(&p, &a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&t));
        for k in 0..=100 {
            let q = a.lerp(&b, k as f64 / 100.0);
            prop_assert!(d <= p.distance(&q) + 1e-12);
        }
    }

    #[test]
    fn hull_weights_reproduce_nearest_point(p in coords(2), vs in prop::collection::vec(coords(2), 1..6)) {
        let p = pt(&p);
        let vs: Vec<Point64> = vs.iter().map(|v| pt(v)).collect();
        let h = hull_distance(&p, &vs, DEFAULT_MAX_ITER, 1e-12).unwrap();
        let total: f64 = h.weights.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(h.weights.iter().all(|&w| w >= 0.0));
        let mut c = [0.0; 2];
        for (v, w) in vs.iter().zip(&h.weights) {
            c[0] += w * v[0];
            c[1] += w * v[1];
        }
        prop_assert!(pt(&c).distance(&h.nearest) < 1e-9);
        // no vertex is closer than the hull
        for v in &vs {
            prop_assert!(h.distance <= p.distance(v) + 1e-9);
        }
    }

    #[test]
    fn box_grid_points_are_members(lo in coords(2), w in prop::collection::vec(0.1f64..2.0, 2), r in 2usize..12) {
        let hi: Vec<f64> = lo.iter().zip(&w).map(|(l, w)| l + w).collect();
        let set = ConvexSet64::new_box(pt(&lo), pt(&hi)).unwrap();
        let g = sample_grid(&set, r).unwrap();
        prop_assert_eq!(g.len(), r * r);
        for p in g.points() {
            prop_assert!(set.contains(p, 0.0).unwrap());
        }
        prop_assert_eq!(g, sample_grid(&set, r).unwrap());
    }
}

#[test]
fn segment_reference_values() {
    let o = pt(&[0.0, 0.0]);
    let d = pt(&[1.0, 1.0]);
    let (t, dist) = segment_projection(&pt(&[0.125, 0.25]), &o, &d).unwrap();
    assert!((t - 3.0 / 16.0).abs() < 1e-15);
    assert!((dist - 2f64.sqrt() / 16.0).abs() < 1e-15);
    assert_eq!(segment_distance(&pt(&[2.0, 2.0]), &o, &d).unwrap(), 2f64.sqrt());
}

#[test]
fn hull_of_square_contains_center() {
    let sq = [pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0]), pt(&[1.0, 1.0])];
    let h = hull_distance(&pt(&[0.5, 0.5]), &sq, DEFAULT_MAX_ITER, 1e-12).unwrap();
    assert!(h.distance <= 1e-12);
    let h = hull_distance(&pt(&[2.0, 0.5]), &sq, DEFAULT_MAX_ITER, 1e-12).unwrap();
    assert!((h.distance - 1.0).abs() < 1e-12);
}

#[test]
fn ball_and_simplex_grids() {
    let ball = ConvexSet64::new_ball(pt(&[0.0, 0.0]), 1.0).unwrap();
    let g = sample_grid(&ball, 33).unwrap();
    assert!(g.points().iter().all(|p| p.norm() <= 1.0));
    assert!(g.position(&pt(&[0.0, 0.0])).is_some());
    let simplex = ConvexSet64::new_simplex(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0])]).unwrap();
    let g = sample_grid(&simplex, 5).unwrap();
    assert_eq!(g.len(), 15);
    for p in g.points() {
        assert!(simplex.contains(p, 1e-12).unwrap());
    }
}

#[test]
fn invalid_sets_rejected() {
    assert!(ConvexSet64::new_box(pt(&[1.0]), pt(&[0.0])).is_err());
    assert!(ConvexSet64::new_ball(pt(&[0.0]), -1.0).is_err());
    assert!(ConvexSet64::new_simplex(vec![pt(&[0.0, 0.0]), pt(&[1.0, 1.0]), pt(&[2.0, 2.0])]).is_err());
    assert!(Point64::from_f64(&[f64::NAN]).is_err());
    assert!(sample_grid(&ConvexSet64::interval(0.0, 1.0).unwrap(), 1).is_err());
}
