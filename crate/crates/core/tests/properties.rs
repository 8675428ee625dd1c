mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use qkad::data::Label;
use qkad::ensemble::{combine_scores, z_normalize, Combine};
use qkad::kernels::{fidelity_exact_matrix, inversion_test_matrix, mitigate, rbf_matrix, RbfConfig};
use qkad::metrics::average_precision;
use qkad::ocsvm::{solve_dual_with, SolverOptions};
use qkad::qsim::{apply_feature_map, fidelity, FeatureMapConfig};

fn points(d: usize, n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.5f64..1.5, n * d).prop_map(move |v| DMatrix::from_row_slice(n, d, &v))
}

fn labelled(max: usize) -> impl Strategy<Value = (Vec<Label>, Vec<f64>)> {
    (2..=max).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(-3.0f64..3.0, n),
            0..n,
        )
            .prop_map(|(flags, scores, forced)| {
                let labels = flags
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if a || i == forced { Label::Anomaly } else { Label::Normal })
                    .collect();
                (labels, scores)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn feature_map_matches_dense_oracle(x in prop::collection::vec(-2.0f64..2.0, 1..=3), lambda in 1usize..=3, scaled in any::<bool>()) {
        let d = x.len();
        let fmap = if scaled { FeatureMapConfig::scaled(d, lambda).unwrap() } else { FeatureMapConfig::new(d, lambda).unwrap() };
        let state = apply_feature_map(&fmap, &x).unwrap();
        let oracle = dense_feature_state(&x, fmap.block_reps, fmap.angle_scale);
        prop_assert!((state.norm() - 1.0).abs() <= 1e-9);
        for (a, b) in state.amplitudes().iter().zip(oracle.iter()) {
            prop_assert!((a - b).norm() <= 1e-10);
        }
    }

    #[test]
    fn fidelity_is_symmetric(x in prop::collection::vec(-2.0f64..2.0, 3), y in prop::collection::vec(-2.0f64..2.0, 3)) {
        let fmap = FeatureMapConfig::new(3, 2).unwrap();
        let a = apply_feature_map(&fmap, &x).unwrap();
        let b = apply_feature_map(&fmap, &y).unwrap();
        prop_assert!((fidelity(&a, &b).unwrap() - fidelity(&b, &a).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn inversion_entries_ignore_evaluation_order(x in points(2, 6), seed in any::<u64>()) {
        let fmap = FeatureMapConfig::new(2, 2).unwrap();
        let parallel = inversion_test_matrix(&x, &x, &fmap, 64, seed).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| inversion_test_matrix(&x, &x, &fmap, 64, seed).unwrap());
        prop_assert_eq!(&parallel.values, &serial.values);
        prop_assert!(parallel.diagonal().iter().all(|&v| v == 1.0));
        prop_assert!(parallel.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn ap_invariant_to_monotone_maps((labels, scores) in labelled(20), shift in -5.0f64..5.0) {
        let base = average_precision(&labels, &scores).unwrap();
        let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
        let cubed: Vec<f64> = scores.iter().map(|s| s.powi(3) * 2.0).collect();
        prop_assert!((average_precision(&labels, &shifted).unwrap() - base).abs() <= 1e-12);
        prop_assert!((average_precision(&labels, &cubed).unwrap() - base).abs() <= 1e-12);
        prop_assert!((base - brute_force_ap(&labels, &scores)).abs() <= 1e-12);
    }

    #[test]
    fn average_mode_absorbs_affine_rescaling(raw in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 8), 1..5), slope in 0.1f64..10.0, offset in -5.0f64..5.0) {
        let norm = |v: &Vec<Vec<f64>>| -> Vec<Vec<f64>> { v.iter().map(|s| z_normalize(s).unwrap()).collect() };
        let rescaled: Vec<Vec<f64>> = raw.iter().map(|s| s.iter().map(|v| slope * v + offset).collect()).collect();
        let a = combine_scores(&norm(&raw), Combine::Average);
        let b = combine_scores(&norm(&rescaled), Combine::Average);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
        let mut reversed = raw.clone();
        reversed.reverse();
        let mx = combine_scores(&norm(&raw), Combine::Maximum);
        prop_assert_eq!(combine_scores(&norm(&reversed), Combine::Maximum), mx.clone());
        prop_assert!(mx.iter().zip(&a).all(|(m, v)| m >= v));
    }

    #[test]
    fn solver_is_order_robust(x in points(2, 12), nu in 0.1f64..1.0, rot in 1usize..12) {
        let g = rbf_matrix(&x, &x, RbfConfig::new(1.0).unwrap()).unwrap().values;
        let perm: Vec<usize> = (0..12).map(|i| (i + rot) % 12).collect();
        let gp = DMatrix::from_fn(12, 12, |i, j| g[(perm[i], perm[j])]);
        let a = solve_dual_with(&g, nu, SolverOptions::default()).unwrap();
        let b = solve_dual_with(&gp, nu, SolverOptions::default()).unwrap();
        prop_assert!((a.objective - b.objective).abs() <= 1e-6);
        let c = 1.0 / (nu * 12.0);
        prop_assert!(a.alphas.iter().all(|&v| (0.0..=c + 1e-9).contains(&v)));
        prop_assert!((a.alphas.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
        prop_assert!(a.support_indices.len() + 1 >= (nu * 12.0).ceil() as usize);
    }

    #[test]
    fn duplicate_point_never_raises_objective(x in points(2, 6), nu in 0.2f64..1.0, dup in 0usize..6) {
        let extended = DMatrix::from_fn(7, 2, |i, j| if i < 6 { x[(i, j)] } else { x[(dup, j)] });
        let g6 = fidelity_exact_matrix(&x, &x, &FeatureMapConfig::new(2, 1).unwrap()).unwrap().values;
        let g7 = fidelity_exact_matrix(&extended, &extended, &FeatureMapConfig::new(2, 1).unwrap()).unwrap().values;
        // Same ν·N box scale: C = 1/(ν N) for each problem.
        let before = solve_dual_with(&g6, nu, SolverOptions::default()).unwrap().objective;
        let after = solve_dual_with(&g7, nu * 6.0 / 7.0, SolverOptions::default()).unwrap().objective;
        prop_assert!(after <= before + 1e-6);
    }

    #[test]
    fn mitigation_formula(k in prop::collection::vec(-0.2f64..1.2, 6), pl in prop::collection::vec(0.05f64..1.5, 2), pr in prop::collection::vec(0.05f64..1.5, 3)) {
        let km = qkad::kernels::KernelMatrix::new(DMatrix::from_row_slice(2, 3, &k), qkad::kernels::KernelMethod::Randomized, Default::default());
        let m = mitigate(&km, &pl, &pr).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                prop_assert!((m.get(i, j) - km.get(i, j) / (pl[i] * pr[j]).sqrt()).abs() <= 1e-15);
            }
        }
    }
}
