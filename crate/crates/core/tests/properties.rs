//! Property tests for geometric and analytic invariants.

use proptest::prelude::*;
use rand::Rng;

use sphere_facets::bounds::{fit_scaling, FitModel, ScalingPoint};
use sphere_facets::caps::{build_cap_packing, cap_angle_from_fraction, cap_area, cap_area_bounds, cap_area_by_quadrature};
use sphere_facets::extremal::{angular_gaps, run_trial};
use sphere_facets::hull::{convex_hull, facets_by_enumeration};
use sphere_facets::montecarlo::Welford;
use sphere_facets::simplex_law::cdf_bounds;
use sphere_facets::{hyperplane_through, ln_gamma, sample_sphere, simplex_volume, sphere_area, RngStream};

fn cloud(seed: u64, n: usize, m: usize) -> Vec<Vec<f64>> {
    let c = sample_sphere(&RngStream::new(seed, 0), n, m).unwrap();
    c.iter().map(<[f64]>::to_vec).collect()
}

/// Random orthogonal map as a product of `n` Householder reflections.
fn rotate(points: &[Vec<f64>], seed: u64) -> Vec<Vec<f64>> {
    let n = points[0].len();
    let mut rng = RngStream::new(seed, 1).rng();
    let mut out = points.to_vec();
    for _ in 0..n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= len);
        for p in out.iter_mut() {
            let d: f64 = p.iter().zip(&v).map(|(a, b)| a * b).sum();
            p.iter_mut().zip(&v).for_each(|(a, b)| *a -= 2.0 * d * b);
        }
    }
    out
}

fn refs(p: &[Vec<f64>]) -> Vec<&[f64]> {
    p.iter().map(Vec::as_slice).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplex_volume_is_invariant_under_permutation_and_rotation(seed in any::<u64>(), n in 2usize..=6, shift in 0usize..6) {
        let pts = cloud(seed, n, n);
        let v = simplex_volume(&refs(&pts)).unwrap();
        let mut perm = pts.clone();
        perm.rotate_left(shift % n);
        perm.swap(0, n - 1);
        let rot = rotate(&pts, seed);
        let tol = 1e-10 * v.max(1e-3);
        prop_assert!((simplex_volume(&refs(&perm)).unwrap() - v).abs() <= tol);
        prop_assert!((simplex_volume(&refs(&rot)).unwrap() - v).abs() <= tol);
    }

    #[test]
    fn hyperplane_passes_through_its_points(seed in any::<u64>(), n in 2usize..=8) {
        let pts = cloud(seed, n, n);
        let h = hyperplane_through(&refs(&pts)).unwrap();
        prop_assert!(h.offset >= 0.0 && h.offset <= 1.0);
        for p in &pts {
            prop_assert!(h.signed_distance(p).abs() <= 1e-10);
        }
    }

    #[test]
    fn cap_area_is_monotone_and_complementary(n in 2u32..=8, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(cap_area(n, lo).unwrap() >= cap_area(n, hi).unwrap());
        let total = sphere_area(n).unwrap();
        prop_assert!((cap_area(n, a).unwrap() + cap_area(n, -a).unwrap() - total).abs() <= 1e-12 * total);
        let q = cap_area_by_quadrature(n, a).unwrap();
        prop_assert!((cap_area(n, a).unwrap() - q).abs() <= 1e-10 * q.max(1e-300) + 1e-14);
    }

    #[test]
    fn cap_area_bounds_sandwich(n in 4u32..=6, p in 0.001f64..=1.0) {
        let (lo, hi) = cap_area_bounds(n, p).unwrap();
        let a = cap_area(n, p).unwrap();
        prop_assert!(lo <= a * (1.0 + 1e-12) && a <= hi * (1.0 + 1e-12), "{lo} {a} {hi}");
    }

    #[test]
    fn cap_angle_sandwich(n in 2u32..=6, r in prop::sample::select(vec![2.0, 10.0, 100.0, 1e4]), extra in 2.0f64..1e6) {
        for r in [r, extra] {
            let c = cap_angle_from_fraction(n, r).unwrap();
            prop_assert!(c.lower <= c.phi + 1e-12 && c.phi <= c.upper + 1e-12, "{c:?}");
            // passing through cos φ costs about ε/φ² of relative precision
            let area = cap_area(n, c.phi.cos()).unwrap();
            let tol = 1e-9 + 1e-15 / (c.phi * c.phi);
            prop_assert!((area * r / sphere_area(n).unwrap() - 1.0).abs() < tol);
        }
    }

    #[test]
    fn gamma_recurrence(x in 0.01f64..50.0) {
        let lhs = ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap();
        prop_assert!((lhs - x.ln()).abs() <= 1e-12 * (1.0 + ln_gamma(x + 1.0).unwrap().abs()));
    }

    #[test]
    fn cdf_bounds_are_ordered(n in 2u32..=6, t in 1e-8f64..10.0) {
        let b = cdf_bounds(n, t).unwrap();
        prop_assert!(b.upper <= 1.0 && b.upper <= b.upper_raw);
        if let Some(lo) = b.lower {
            prop_assert!(lo <= b.upper_raw);
        }
    }

    #[test]
    fn welford_merge_matches_sequential(xs in prop::collection::vec(-1e3f64..1e3, 2..200), cut in 0usize..200) {
        let cut = cut % xs.len();
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..cut].iter().for_each(|&x| a.push(x));
        xs[cut..].iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        prop_assert_eq!(m.count, all.count);
        prop_assert!((m.mean - all.mean).abs() <= 1e-9);
        prop_assert!((m.variance() - all.variance()).abs() <= 1e-7 * (1.0 + all.variance()));
    }

    #[test]
    fn power_fit_recovers_exact_exponent(alpha in -3.0f64..-0.5, c in 0.01f64..100.0) {
        let pts: Vec<ScalingPoint> = [100.0, 200.0, 400.0, 800.0, 1600.0]
            .iter()
            .map(|&m: &f64| ScalingPoint { big_n: m, mean: c * m.powf(alpha), stderr: 0.0 })
            .collect();
        let f = fit_scaling("synthetic", 3, &pts, FitModel::Power).unwrap();
        prop_assert!((f.exponent.unwrap() - alpha).abs() <= 1e-12);
        prop_assert!((f.constant / c - 1.0).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_matches_brute_force(seed in any::<u64>(), n in 2usize..=5, extra in 1usize..=8) {
        let c = sample_sphere(&RngStream::new(seed, 0), n, n + extra).unwrap();
        let h = convex_hull(&c).unwrap();
        prop_assume!(!h.degenerate);
        prop_assert!(h.ridges_consistent());
        prop_assert_eq!(h.facet_sets(), facets_by_enumeration(&c));
    }

    #[test]
    fn hull_contains_every_point(seed in any::<u64>(), n in 2usize..=6, m in 10usize..120) {
        let c = sample_sphere(&RngStream::new(seed, 0), n, m).unwrap();
        let h = convex_hull(&c).unwrap();
        prop_assume!(!h.degenerate);
        prop_assert!(h.ridges_consistent());
        for f in &h.facets {
            prop_assert!(f.volume > 0.0);
            for p in c.iter() {
                prop_assert!(f.signed_distance(p) <= 1e-10);
            }
        }
    }

    #[test]
    fn circle_hull_edges_are_angular_neighbours(seed in any::<u64>(), m in 3usize..300) {
        let c = sample_sphere(&RngStream::new(seed, 0), 2, m).unwrap();
        let h = convex_hull(&c).unwrap();
        let gaps = angular_gaps(&c).unwrap();
        let mut expected: Vec<Vec<u32>> = gaps.iter().map(|&(i, j, _)| if i < j { vec![i, j] } else { vec![j, i] }).collect();
        expected.sort();
        prop_assert_eq!(h.facet_sets(), expected);
        let chord: std::collections::HashMap<Vec<u32>, f64> = h.facets.iter().map(|f| (f.sorted_vertices(), f.volume)).collect();
        for (i, j, gap) in gaps {
            let key = if i < j { vec![i, j] } else { vec![j, i] };
            prop_assert!((chord[&key] - 2.0 * (gap / 2.0).sin()).abs() <= 1e-12);
        }
    }

    #[test]
    fn sampling_and_trials_are_deterministic(seed in any::<u64>(), idx in any::<u64>(), n in 2u32..=4) {
        let s = RngStream::new(seed, idx);
        prop_assert_eq!(sample_sphere(&s, n as usize, 20).unwrap(), sample_sphere(&s, n as usize, 20).unwrap());
        prop_assert_eq!(run_trial(&s, n, 30).unwrap(), run_trial(&s, n, 30).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn packings_are_disjoint_and_sized(seed in any::<u64>(), n in 2u32..=4, r in 10.0f64..300.0) {
        let p = build_cap_packing(&RngStream::new(seed, 0), n, r).unwrap();
        prop_assert!(p.count_in_range());
        prop_assert!(p.pairwise_disjoint());
        prop_assert!(p.len() as f64 >= 3f64.powi(-(n as i32)) * r && p.len() as f64 <= r);
    }
}
