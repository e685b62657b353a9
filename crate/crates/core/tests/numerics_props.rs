mod common;

use common::{all_close, config, matrix};
use lts_core::numerics::{least_squares, solve_square, Matrix, SolveOutcome, DEFAULT_PIVOT_TOL};
use proptest::prelude::*;

/// Random square matrix made well conditioned by a dominant diagonal.
fn well_conditioned() -> impl Strategy<Value = Matrix> {
    (1usize..=8).prop_flat_map(|p| {
        (matrix(p, p, 1.0), prop::collection::vec(prop::bool::ANY, p)).prop_map(move |(m, flip)| {
            let mut data = m.as_slice().to_vec();
            for (i, f) in flip.iter().enumerate() {
                data[i * p + i] += if *f { -(p as f64) - 1.0 } else { p as f64 + 1.0 };
            }
            Matrix::new(p, p, data).unwrap()
        })
    })
}

fn regression() -> impl Strategy<Value = (Matrix, Vec<f64>)> {
    (1usize..=6, 2usize..=10).prop_flat_map(|(p, extra)| {
        let h = p + extra;
        (matrix(h, p, 5.0), prop::collection::vec(-50.0..50.0f64, h))
    })
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn square_solve_residual(a in well_conditioned(), seed in prop::collection::vec(-100.0..100.0f64, 8)) {
        let b = &seed[..a.rows()];
        let out = solve_square(&a, b, DEFAULT_PIVOT_TOL).unwrap();
        let beta = out.solution().expect("diagonally dominant systems are regular");
        let bmax = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let resid = a.mul_vec(beta).iter().zip(b).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
        prop_assert!(resid <= 1e-10 * (1.0 + bmax), "residual {resid}");
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn least_squares_matches_normal_equations((x, y) in regression()) {
        let beta = least_squares(&x, &y).unwrap();
        let normal = match solve_square(&x.gram(), &x.transpose_mul_vec(&y), DEFAULT_PIVOT_TOL).unwrap() {
            SolveOutcome::Regular(v) => v,
            SolveOutcome::Singular => return Ok(()),
        };
        prop_assert!(all_close(&beta, &normal, 1e-8), "{beta:?} vs {normal:?}");

        // gradient of the residual sum of squares vanishes
        let fitted = x.mul_vec(&beta);
        let r: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        let grad = x.transpose_mul_vec(&r);
        let scale = x.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()))
            * y.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            * x.rows() as f64;
        prop_assert!(grad.iter().all(|g| g.abs() <= 1e-8 * (1.0 + scale)));
    }

    #[test]
    fn least_squares_ignores_row_order((x, y) in regression(), key in prop::collection::vec(any::<u32>(), 16)) {
        let mut order: Vec<usize> = (0..x.rows()).collect();
        order.sort_by_key(|&i| (key[i % key.len()], i));
        let xp = x.select_rows(&order);
        let yp: Vec<f64> = order.iter().map(|&i| y[i]).collect();
        let a = least_squares(&x, &y).unwrap();
        let b = least_squares(&xp, &yp).unwrap();
        prop_assert!(all_close(&a, &b, 1e-10), "{a:?} vs {b:?}");
    }
}
