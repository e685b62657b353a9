//! Seeded random regression instances with planted outliers.

use lts_core::model::Dataset;
use lts_core::numerics::Matrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::spec::GenSpec;

/// Shift added to the responses of the contaminated rows.
pub const OUTLIER_SHIFT: f64 = 50.0;

/// `X` uniform on `[-10, 10]`, true coefficients uniform on `[-5, 5]`,
/// `y = X beta + N(0, 1)`, and `floor(fraction * n)` rows shifted by
/// [`OUTLIER_SHIFT`]. The same spec always yields the same bytes.
pub fn gen_instance(spec: &GenSpec) -> Result<(Dataset, Vec<f64>)> {
    let GenSpec { seed, n, p, outlier_fraction } = *spec;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..n * p).map(|_| rng.random_range(-10.0..=10.0)).collect();
    let beta: Vec<f64> = (0..p).map(|_| rng.random_range(-5.0..=5.0)).collect();
    let x = Matrix::new(n, p, x)?;
    let mut y = x.mul_vec(&beta);
    for v in &mut y {
        *v += rng.sample::<f64, _>(StandardNormal);
    }
    let outliers = (outlier_fraction * n as f64).floor() as usize;
    for i in sample(&mut rng, n, outliers.min(n)) {
        y[i] += OUTLIER_SHIFT;
    }
    Ok((Dataset::new(x, y, false)?, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::write_csv;

    fn bytes(spec: &GenSpec) -> Vec<u8> {
        let mut out = Vec::new();
        write_csv(&gen_instance(spec).unwrap().0, &mut out).unwrap();
        out
    }

    #[test]
    fn same_seed_same_bytes() {
        let spec = GenSpec { seed: 3, n: 11, p: 2, outlier_fraction: 0.2 };
        assert_eq!(bytes(&spec), bytes(&spec));
        assert_ne!(bytes(&spec), bytes(&GenSpec { seed: 4, ..spec }));
    }

    #[test]
    fn shapes_and_ranges() {
        let (d, beta) = gen_instance(&GenSpec { seed: 1, n: 20, p: 3, outlier_fraction: 0.0 }).unwrap();
        assert_eq!((d.n(), d.p(), beta.len()), (20, 3, 3));
        assert!(d.x().as_slice().iter().all(|v| (-10.0..=10.0).contains(v)));
        // without contamination the residuals at the true beta are pure noise
        let fitted = d.x().mul_vec(&beta);
        assert!(d.y().iter().zip(&fitted).all(|(y, f)| (y - f).abs() < 6.0));
    }

    #[test]
    fn contamination_count() {
        let spec = GenSpec { seed: 9, n: 20, p: 1, outlier_fraction: 0.3 };
        let (d, beta) = gen_instance(&spec).unwrap();
        let fitted = d.x().mul_vec(&beta);
        let shifted = d.y().iter().zip(&fitted).filter(|(y, f)| *y - *f > 25.0).count();
        assert_eq!(shifted, 6);
    }
}
