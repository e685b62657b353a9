mod common;

use common::{close, config, dataset};
use lts_core::combinatorics::Combinations;
use lts_core::model::{lts_objective, squared_residuals, subset_objective, Problem, SubsetMask};
use proptest::prelude::*;

fn problem_with_h() -> impl Strategy<Value = Problem> {
    dataset(4..=10, 1..=3)
        .prop_flat_map(|d| {
            let (n, p) = (d.n(), d.p());
            (Just(d), p..=n)
        })
        .prop_map(|(d, h)| Problem::new(d, h).unwrap())
}

fn masked_sum(sq: &[f64], idx: &[usize]) -> f64 {
    idx.iter().map(|&i| sq[i]).sum()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn trimmed_sum_is_minimum_over_masks(pr in problem_with_h(), beta in prop::collection::vec(-5.0..5.0f64, 3)) {
        let beta = &beta[..pr.p()];
        let sq = squared_residuals(&pr, beta).unwrap();
        prop_assert!(sq.iter().all(|v| *v >= 0.0));
        let lts = lts_objective(&pr, beta).unwrap();
        let mut min = f64::INFINITY;
        for idx in Combinations::new(pr.n(), pr.h()) {
            let s = masked_sum(&sq, &idx);
            // pointwise: the trimmed sum never exceeds any masked sum
            prop_assert!(lts <= s * (1.0 + 1e-12) + 1e-12);
            min = min.min(s);
        }
        prop_assert!(close(lts, min, 1e-12));
    }

    #[test]
    fn subset_fit_is_optimal_on_its_subset(
        pr in problem_with_h(),
        pick in any::<u64>(),
        probes in prop::collection::vec(-5.0..5.0f64, 300),
    ) {
        let n = pr.n();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by_key(|&i| (pick.rotate_left(7 * i as u32) & 0xff, i));
        let mut idx = idx[..pr.h()].to_vec();
        idx.sort_unstable();
        let mask = SubsetMask::from_indices(n, &idx).unwrap();
        let (fit, value) = subset_objective(&pr, &mask).unwrap();
        prop_assert!(value >= 0.0);
        let at_fit = masked_sum(&squared_residuals(&pr, &fit).unwrap(), &idx);
        prop_assert!(close(value, at_fit, 1e-9));
        for beta in probes.chunks(3).take(100) {
            let s = masked_sum(&squared_residuals(&pr, &beta[..pr.p()]).unwrap(), &idx);
            prop_assert!(value <= s * (1.0 + 1e-9) + 1e-9);
        }
    }

    #[test]
    fn scaling_response_scales_objective(pr in problem_with_h(), beta in prop::collection::vec(-5.0..5.0f64, 3)) {
        let beta = &beta[..pr.p()];
        let scaled = Problem::new(pr.dataset().scaled_response(2.0).unwrap(), pr.h()).unwrap();
        let doubled: Vec<f64> = beta.iter().map(|b| 2.0 * b).collect();
        let a = lts_objective(&pr, beta).unwrap();
        let b = lts_objective(&scaled, &doubled).unwrap();
        prop_assert!(close(4.0 * a, b, 1e-12));
    }
}
