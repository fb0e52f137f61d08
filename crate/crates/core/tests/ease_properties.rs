mod common;

use common::binary_fm;
use proptest::prelude::*;
use wikiease_core::linalg::spd_inverse;
use wikiease_core::oracle::{oracle_fit, oracle_objective};
use wikiease_core::{entity_gram, fit, SquareMatrix};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_oracle(fm in binary_fm(10, 8), lambda in prop_oneof![Just(0.5), Just(2.0), Just(10.0)]) {
        let model = fit(&fm, lambda).unwrap();
        let reference = oracle_fit(&fm, lambda, 1e-9).unwrap();
        for (a, b) in model.weights().as_slice().iter().zip(reference.as_slice()) {
            prop_assert!((a - b).abs() <= 1e-5, "{a} vs {b}");
        }
    }

    #[test]
    fn stationary_off_diagonal(fm in binary_fm(10, 8), lambda in 0.1f64..50.0) {
        let model = fit(&fm, lambda).unwrap();
        let b = model.weights();
        let n = b.dim();
        let mut g = entity_gram(&fm);
        g.add_to_diagonal(lambda);
        let gb = g.matmul(b);
        let scale = g.frobenius_norm();
        for i in 0..n {
            prop_assert_eq!(b.get(i, i), 0.0);
            for j in 0..n {
                if i != j {
                    // 2·(G·B − (G − λI)) off the diagonal
                    let grad = 2.0 * (gb.get(i, j) - g.get(i, j));
                    prop_assert!(grad.abs() <= 1e-8 * scale, "grad[{i}][{j}] = {grad}");
                }
            }
        }
    }

    #[test]
    fn single_entry_perturbations_never_help(fm in binary_fm(6, 6), lambda in 0.5f64..10.0) {
        let model = fit(&fm, lambda).unwrap();
        let base = oracle_objective(&fm, model.weights(), lambda).unwrap();
        let n = model.n_entities();
        for i in 0..n {
            for j in 0..n {
                if i == j { continue; }
                for delta in [1e-3, -1e-3] {
                    let mut p = model.weights().clone();
                    p.set(i, j, p.get(i, j) + delta);
                    prop_assert!(oracle_objective(&fm, &p, lambda).unwrap() >= base);
                }
            }
        }
    }

    #[test]
    fn larger_lambda_shrinks(fm in binary_fm(10, 8), l1 in 0.1f64..20.0, factor in 1.0f64..100.0) {
        let small = fit(&fm, l1).unwrap();
        let large = fit(&fm, l1 * factor).unwrap();
        prop_assert!(large.weights().frobenius_norm() <= small.weights().frobenius_norm() + 1e-12);
    }

    #[test]
    fn inverse_diagonal_reweights_transpose(fm in binary_fm(10, 8), lambda in 0.1f64..20.0) {
        // B[i][j]·P[j][j] == B[j][i]·P[i][i]
        let model = fit(&fm, lambda).unwrap();
        let mut g = entity_gram(&fm);
        g.add_to_diagonal(lambda);
        let p = spd_inverse(&g).unwrap();
        let b = model.weights();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let lhs = b.get(i, j) * p.get(j, j);
                let rhs = b.get(j, i) * p.get(i, i);
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
            }
        }
    }
}

#[test]
fn equal_gram_diagonal_gives_symmetric_weights() {
    // every entity has the same number of features and pairwise overlaps are
    // symmetric in structure: a 4-cycle
    let cells = [
        true, true, false, false, //
        false, true, true, false, //
        false, false, true, true, //
        true, false, false, true,
    ];
    let fm = common::dense_fm(4, 4, &cells);
    let model = fit(&fm, 3.0).unwrap();
    let b = model.weights();
    for i in 0..4 {
        for j in 0..4 {
            let (x, y) = (b.get(i, j), b.get(j, i));
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }
}

#[test]
fn thread_count_does_not_change_bits() {
    let mut cells = Vec::new();
    let mut state = 11u64;
    let (n, m) = (120, 90);
    for _ in 0..n * m {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        cells.push(state.is_multiple_of(5));
    }
    let values: Vec<f64> = cells.iter().map(|&b| b as u8 as f64).collect();
    let fm = wikiease_core::FeatureMatrix::from_dense(
        common::names("e", n),
        common::names("f", m),
        &values,
        wikiease_core::FeatureMode::Binary,
    )
    .unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| fit(&fm, 5.0).unwrap())
    };
    let bits = |w: &SquareMatrix| w.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    let one = run(1);
    let many = run(4);
    assert_eq!(bits(one.weights()), bits(many.weights()));
}
