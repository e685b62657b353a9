#![allow(dead_code)]

use std::ops::RangeInclusive;

use lts_core::model::{Dataset, Problem};
use lts_core::numerics::Matrix;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

/// Fixed seed so that every run explores the same cases.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x1757_0001),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn matrix(rows: usize, cols: usize, bound: f64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-bound..bound, rows * cols).prop_map(move |v| Matrix::new(rows, cols, v).unwrap())
}

/// Continuous data: X uniform in [-10, 10], Y uniform in [-20, 20].
pub fn dataset(n: RangeInclusive<usize>, p: RangeInclusive<usize>) -> impl Strategy<Value = Dataset> {
    (n, p).prop_flat_map(|(n, p)| {
        let p = p.min(n - 1);
        (matrix(n, p, 10.0), prop::collection::vec(-20.0..20.0f64, n))
            .prop_map(|(x, y)| Dataset::new(x, y, false).unwrap())
    })
}

/// A problem with `p + 1 <= h <= n`.
pub fn problem(n: RangeInclusive<usize>, p: RangeInclusive<usize>) -> impl Strategy<Value = Problem> {
    dataset(n, p)
        .prop_flat_map(|d| {
            let (n, p) = (d.n(), d.p());
            (Just(d), p + 1..=n)
        })
        .prop_map(|(d, h)| Problem::new(d, h).unwrap())
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

pub fn all_close(a: &[f64], b: &[f64], rel: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(*x, *y, rel))
}
