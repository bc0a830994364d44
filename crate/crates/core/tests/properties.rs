use capbound::capacity::{
    convex_envelope, corr_quantum, corr_quantum_unchecked, corr_single_epsilon, hypothesis_threshold, pointwise_min,
    uniform_grid, DegradabilityCertificate,
};
use capbound::channel::identity;
use capbound::entropy::{local_distance, random_distribution_pairs, random_state_pairs, tv_distance, DistancePair};
use capbound::linalg::{operator_distance, trace_distance};
use capbound::Error;
use proptest::prelude::*;

fn curves(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, n), 1..4)
}

proptest! {
    #[test]
    fn envelope_is_convex_and_below_every_curve(cs in curves(17)) {
        let grid = uniform_grid(0.0, 1.0, 17).unwrap();
        let env = convex_envelope(&grid, &cs).unwrap();
        let min = pointwise_min(&grid, &cs).unwrap();
        for i in 0..grid.len() {
            prop_assert!(env[i] <= min[i] + 1e-12);
        }
        for w in env.windows(3) {
            prop_assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-12);
        }
        // endpoints of the hull touch the minimum
        prop_assert!((env[0] - min[0]).abs() <= 1e-12);
        prop_assert!((env[16] - min[16]).abs() <= 1e-12);
    }

    #[test]
    fn envelope_of_a_convex_curve_is_itself(a in 0.0f64..3.0, b in -1.0f64..1.0) {
        let grid = uniform_grid(0.0, 1.0, 21).unwrap();
        let c: Vec<f64> = grid.iter().map(|x| a * x * x + b * x).collect();
        let env = convex_envelope(&grid, &[c.clone()]).unwrap();
        for (e, v) in env.iter().zip(&c) {
            prop_assert!((e - v).abs() <= 1e-12);
        }
    }

    #[test]
    fn corrections_grow_with_the_diamond_distance(
        eps1 in 0.001f64..0.2, r in 0.51f64..1.0, e in 0.0f64..0.2, de in 0.0f64..0.1, d_e in 2usize..9
    ) {
        // β = r keeps βd_E > 1
        let nu = 0.5 * r * eps1;
        let a = corr_quantum_unchecked(eps1, nu, e, d_e);
        let b = corr_quantum_unchecked(eps1, nu, e + de, d_e);
        prop_assert!(b >= a - 1e-15);
    }

    #[test]
    fn single_epsilon_correction_is_monotone(e in 0.0f64..0.5, de in 0.0f64..0.1, d_e in 2usize..9) {
        prop_assert!(corr_single_epsilon(e + de, d_e) >= corr_single_epsilon(e, d_e) - 1e-15);
    }

    #[test]
    fn beta_one_fails_the_hypothesis_for_three_environments(eps in 1e-6f64..1.0) {
        // 2νd_E/(νd_E + 3) < ε whenever 2ν = ε and d_E = 3
        let cert = DegradabilityCertificate::new(eps, eps, 0.5 * eps, 3, identity(2)).unwrap();
        prop_assert!(!cert.hypothesis_ok);
        prop_assert!(hypothesis_threshold(0.5 * eps, 3) < eps);
        let is_hypothesis_error = matches!(corr_quantum(&cert), Err(Error::Hypothesis { .. }));
        prop_assert!(is_hypothesis_error);
    }

    #[test]
    fn classical_distances_are_consistent(d in 2usize..12, seed in any::<u64>()) {
        for (p, q) in random_distribution_pairs(d, 20, seed) {
            let tv = tv_distance(&p, &q).unwrap();
            let lo = local_distance(&p, &q).unwrap();
            prop_assert!(lo <= tv, "{} > {}", lo, tv);
            prop_assert!(tv <= 1.0, "tv {}", tv);
            let pair = DistancePair::between(&p, &q).unwrap();
            prop_assert_eq!((pair.tv, pair.local), (tv, lo));
        }
    }

    #[test]
    fn operator_distance_never_exceeds_trace_distance(d in 2usize..7, seed in any::<u64>()) {
        for (r, s) in random_state_pairs(d, 5, seed) {
            let t = trace_distance(&r, &s).unwrap();
            let nu = operator_distance(&r, &s).unwrap();
            prop_assert!(nu <= t && t <= 1.0 + 1e-12);
            // symmetric up to eigensolver round-off
            prop_assert!((trace_distance(&s, &r).unwrap() - t).abs() <= 1e-13);
        }
    }
}
