//! Problem definition, residuals, the continuous LTS objective and the
//! subset objective `J(w)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{LtsError, Result};
use crate::numerics::{self, dot, Matrix, DEFAULT_PIVOT_TOL};

/// Measurements `(X, Y)`. If `has_intercept` is set, the first column of `X`
/// must be the ones column; the flag only changes which rank condition the
/// diagnostics check.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    x: Matrix,
    y: Vec<f64>,
    has_intercept: bool,
}

impl Dataset {
    pub fn new(x: Matrix, y: Vec<f64>, has_intercept: bool) -> Result<Self> {
        let (n, p) = (x.rows(), x.cols());
        if y.len() != n {
            return Err(LtsError::invalid(format!("X has {n} rows but Y has {} entries", y.len())));
        }
        if p == 0 {
            return Err(LtsError::invalid("X has no columns"));
        }
        if n <= p {
            return Err(LtsError::invalid(format!("need n > p, got n = {n}, p = {p}")));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(LtsError::invalid(format!("non-finite response at row {i}")));
        }
        if has_intercept {
            if let Some(i) = (0..n).find(|&i| x.get(i, 0) != 1.0) {
                return Err(LtsError::invalid(format!(
                    "intercept model requires a ones first column, row {i} has {}",
                    x.get(i, 0)
                )));
            }
        }
        Ok(Dataset { x, y, has_intercept })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.rows()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.x.cols()
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn has_intercept(&self) -> bool {
        self.has_intercept
    }

    /// Observations reordered so that new row `k` is old row `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Dataset> {
        let mut seen = vec![false; self.n()];
        if order.len() != self.n() || order.iter().any(|&i| i >= self.n() || std::mem::replace(&mut seen[i], true)) {
            return Err(LtsError::invalid("not a permutation of the rows"));
        }
        let y = order.iter().map(|&i| self.y[i]).collect();
        Dataset::new(self.x.select_rows(order), y, self.has_intercept)
    }

    /// Same design, responses multiplied by `c`.
    pub fn scaled_response(&self, c: f64) -> Result<Dataset> {
        Dataset::new(self.x.clone(), self.y.iter().map(|v| v * c).collect(), self.has_intercept)
    }
}

/// Numeric tolerances. The defining equalities of the method are exact; in
/// floating point two squared residuals are equal when they agree to
/// `residual_eq_tol` relative to `1 + max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    pub residual_eq_tol: f64,
    pub pivot_tol: f64,
    /// Upper bound on the number of subsets a single tie may expand into.
    pub max_tie_subsets: u128,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy { residual_eq_tol: 1e-8, pivot_tol: DEFAULT_PIVOT_TOL, max_tie_subsets: 100_000 }
    }
}

impl TolerancePolicy {
    #[inline]
    pub fn residuals_equal(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.residual_eq_tol * (1.0 + a.max(b))
    }

    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !ok(self.residual_eq_tol) || !ok(self.pivot_tol) {
            return Err(LtsError::invalid("tolerances must be positive and finite"));
        }
        if self.max_tie_subsets == 0 {
            return Err(LtsError::invalid("tie subset cap must be positive"));
        }
        Ok(())
    }
}

/// A dataset together with the trimming parameter `h` (`p <= h <= n`).
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    dataset: Dataset,
    h: usize,
    tol: TolerancePolicy,
}

impl Problem {
    pub fn new(dataset: Dataset, h: usize) -> Result<Self> {
        Problem::with_tolerance(dataset, h, TolerancePolicy::default())
    }

    pub fn with_tolerance(dataset: Dataset, h: usize, tol: TolerancePolicy) -> Result<Self> {
        let (n, p) = (dataset.n(), dataset.p());
        if h < p || h > n {
            return Err(LtsError::invalid(format!("h = {h} outside [p, n] = [{p}, {n}]")));
        }
        tol.validate()?;
        Ok(Problem { dataset, h, tol })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn n(&self) -> usize {
        self.dataset.n()
    }

    pub fn p(&self) -> usize {
        self.dataset.p()
    }

    pub fn tol(&self) -> &TolerancePolicy {
        &self.tol
    }
}

/// 0/1 selection of exactly `h` observations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: Vec<bool>,
}

impl SubsetMask {
    /// Mask over `n` observations retaining `indices` (0-based).
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(LtsError::invalid(format!("index {i} out of range for n = {n}")));
            }
            if std::mem::replace(&mut bits[i], true) {
                return Err(LtsError::invalid(format!("duplicate index {i}")));
            }
        }
        Ok(SubsetMask { bits })
    }

    pub fn all(n: usize) -> Self {
        SubsetMask { bits: vec![true; n] }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of retained observations.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.get(i).copied().unwrap_or(false)
    }

    /// Retained indices, ascending, 0-based.
    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter_map(|(i, &b)| b.then_some(i))
    }

    /// Indices in exactly one of the two masks.
    pub fn symmetric_difference(&self, other: &SubsetMask) -> Vec<usize> {
        self.bits.iter().zip(&other.bits).enumerate().filter_map(|(i, (a, b))| (a != b).then_some(i)).collect()
    }
}

/// Lexicographic order on the ascending index lists.
impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Enumeration counters of a solver run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub index_tuples_visited: u64,
    pub systems_solved: u64,
    pub regular_systems: u64,
    pub candidates_in_hp: u64,
    pub j_evaluations: u64,
    /// Subsets skipped because their rows are rank deficient.
    pub singular_masks: u64,
}

impl Counters {
    pub fn merge(&mut self, other: &Counters) {
        self.index_tuples_visited += other.index_tuples_visited;
        self.systems_solved += other.systems_solved;
        self.regular_systems += other.regular_systems;
        self.candidates_in_hp += other.candidates_in_hp;
        self.j_evaluations += other.j_evaluations;
        self.singular_masks += other.singular_masks;
    }
}

/// A solver outcome: the OLS fit of the winning subset and its objective.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub beta: Vec<f64>,
    pub objective: f64,
    pub mask: SubsetMask,
    pub counters: Counters,
    /// Set when `h = n` and the fit is plain OLS on all observations.
    pub ols_short_circuit: bool,
}

/// `(Y_i - x_i^T beta)^2` for every observation.
pub fn squared_residuals(problem: &Problem, beta: &[f64]) -> Result<Vec<f64>> {
    check_beta(problem, beta)?;
    Ok(squared_residuals_unchecked(problem.dataset(), beta))
}

pub(crate) fn squared_residuals_unchecked(data: &Dataset, beta: &[f64]) -> Vec<f64> {
    (0..data.n())
        .map(|i| {
            let r = data.y[i] - dot(data.x.row(i), beta);
            r * r
        })
        .collect()
}

fn check_beta(problem: &Problem, beta: &[f64]) -> Result<()> {
    if beta.len() != problem.p() {
        return Err(LtsError::invalid(format!("beta has {} entries, expected {}", beta.len(), problem.p())));
    }
    if beta.iter().any(|v| !v.is_finite()) {
        return Err(LtsError::invalid("non-finite beta"));
    }
    Ok(())
}

/// Observation indices ordered by squared residual, ties by index.
pub(crate) fn residual_order(sq: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..sq.len()).collect();
    order.sort_by(|&a, &b| sq[a].total_cmp(&sq[b]).then(a.cmp(&b)));
    order
}

/// Sum of the `h` smallest squared residuals at `beta`.
pub fn lts_objective(problem: &Problem, beta: &[f64]) -> Result<f64> {
    let sq = squared_residuals(problem, beta)?;
    let order = residual_order(&sq);
    Ok(order[..problem.h()].iter().map(|&i| sq[i]).sum())
}

/// OLS fit on the retained rows and its residual sum of squares, `J(w)`.
pub fn subset_objective(problem: &Problem, mask: &SubsetMask) -> Result<(Vec<f64>, f64)> {
    if mask.len() != problem.n() {
        return Err(LtsError::invalid("mask length does not match n"));
    }
    let idx = mask.indices();
    subset_fit(problem.dataset(), &idx)
}

/// OLS on rows `idx` of the dataset.
pub(crate) fn subset_fit(data: &Dataset, idx: &[usize]) -> Result<(Vec<f64>, f64)> {
    let xs = data.x.select_rows(idx);
    let ys: Vec<f64> = idx.iter().map(|&i| data.y[i]).collect();
    let beta = match numerics::least_squares(&xs, &ys) {
        Ok(b) => b,
        Err(LtsError::RankDeficient) => return Err(LtsError::SingularFit { subset: idx.to_vec() }),
        Err(e) => return Err(e),
    };
    let value = idx
        .iter()
        .map(|&i| {
            let r = data.y[i] - dot(data.x.row(i), &beta);
            r * r
        })
        .sum();
    Ok((beta, value))
}

/// Running minimum of `J` with the deterministic tie-break: objectives equal
/// to within `1e-12` relative go to the lexicographically smaller mask.
#[derive(Clone, Debug, Default)]
pub(crate) struct Incumbent {
    best: Option<(f64, SubsetMask, Vec<f64>)>,
}

const TIE_REL: f64 = 1e-12;

impl Incumbent {
    pub(crate) fn offer(&mut self, value: f64, mask: &SubsetMask, beta: &[f64]) {
        let take = match &self.best {
            None => true,
            Some((cur, cur_mask, _)) => {
                let tol = TIE_REL * cur.abs().max(value.abs());
                if value < cur - tol {
                    true
                } else if (value - cur).abs() <= tol {
                    mask < cur_mask
                } else {
                    false
                }
            }
        };
        if take {
            self.best = Some((value, mask.clone(), beta.to_vec()));
        }
    }

    pub(crate) fn absorb(&mut self, other: Incumbent) {
        if let Some((v, m, b)) = other.best {
            self.offer(v, &m, &b);
        }
    }

    pub(crate) fn into_fit(self, counters: Counters) -> Option<FitResult> {
        self.best.map(|(objective, mask, beta)| FitResult { beta, objective, mask, counters, ols_short_circuit: false })
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::combinatorics::Combinations;

    #[test]
    fn residuals_at_zero_are_squared_responses() {
        let sq = squared_residuals(&example(), &[0.0]).unwrap();
        assert!((sq[0] - 0.81).abs() < 1e-12);
        for (s, y) in sq.iter().zip(EXAMPLE_Y) {
            assert_eq!(*s, y * y);
        }
    }

    #[test]
    fn residuals_tie_at_plus_intersection() {
        let beta = (EXAMPLE_Y[5] + EXAMPLE_Y[6]) / (EXAMPLE_X[5] + EXAMPLE_X[6]);
        assert!((beta + 8.168).abs() < 1e-3);
        let sq = squared_residuals(&example(), &[beta]).unwrap();
        assert!((sq[5] - sq[6]).abs() <= 1e-9 * sq[5]);
    }

    #[test]
    fn residual_of_interpolated_point_is_zero() {
        let beta = EXAMPLE_Y[3] / EXAMPLE_X[3];
        let sq = squared_residuals(&example(), &[beta]).unwrap();
        assert!(sq[3] < 1e-24);
    }

    #[test]
    fn objective_at_published_minima() {
        let pr = example();
        assert!((lts_objective(&pr, &[-0.77]).unwrap() - 71.96).abs() < 0.05);
        assert!((lts_objective(&pr, &[2.06]).unwrap() - 156.15).abs() < 0.05);
    }

    #[test]
    fn full_h_objective_is_ols_objective() {
        let x = Matrix::from_column(&EXAMPLE_X).unwrap();
        let pr = Problem::new(Dataset::new(x, EXAMPLE_Y.to_vec(), false).unwrap(), 9).unwrap();
        let beta = [0.3];
        let all: f64 = squared_residuals(&pr, &beta).unwrap().iter().sum();
        assert!((lts_objective(&pr, &beta).unwrap() - all).abs() < 1e-9);
    }

    #[test]
    fn subset_objective_of_global_subset() {
        let (beta, value) = subset_objective(&example(), &mask1(&[1, 2, 7, 8, 9])).unwrap();
        assert!((beta[0] + 0.774).abs() < 1e-3);
        assert!((value - 71.96).abs() < 0.01);
    }

    #[test]
    fn subset_objective_of_first_five() {
        // frozen from an independent closed-form evaluation sum(xy)/sum(x^2)
        let (beta, value) = subset_objective(&example(), &mask1(&[1, 2, 3, 4, 5])).unwrap();
        assert!((beta[0] - 2.9216665168597733).abs() < 1e-12);
        assert!((value - 436.18996516610696).abs() < 1e-9);
    }

    #[test]
    fn interpolating_subset_has_zero_objective() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, -1.0], vec![0.5, 0.5]]).unwrap();
        let pr = Problem::new(Dataset::new(x, vec![4.0, 1.0, 9.0], false).unwrap(), 2).unwrap();
        let (_, value) = subset_objective(&pr, &SubsetMask::from_indices(3, &[0, 1]).unwrap()).unwrap();
        assert!(value < 1e-20);
    }

    #[test]
    fn singular_subset_names_the_subset() {
        let x = Matrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![1.0, -1.0], vec![3.0, 0.0]]).unwrap();
        let pr = Problem::new(Dataset::new(x, vec![1.0, 2.0, 3.0, 4.0], false).unwrap(), 2).unwrap();
        let err = subset_objective(&pr, &SubsetMask::from_indices(4, &[0, 1]).unwrap()).unwrap_err();
        assert_eq!(err, LtsError::SingularFit { subset: vec![0, 1] });
    }

    #[test]
    fn dataset_validation() {
        let x = Matrix::from_column(&[1.0, 2.0]).unwrap();
        assert!(Dataset::new(x.clone(), vec![1.0], false).is_err());
        assert!(Dataset::new(x.clone(), vec![1.0, f64::NAN], false).is_err());
        assert!(Dataset::new(x.clone(), vec![1.0, 2.0], true).is_err());
        assert!(Dataset::new(Matrix::from_column(&[1.0]).unwrap(), vec![1.0], false).is_err());
        let d = Dataset::new(x, vec![1.0, 2.0], false).unwrap();
        assert!(Problem::new(d.clone(), 0).is_err());
        assert!(Problem::new(d.clone(), 3).is_err());
        let bad_tol = TolerancePolicy { residual_eq_tol: 0.0, ..Default::default() };
        assert!(Problem::with_tolerance(d, 1, bad_tol).is_err());
        let ones = Matrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 3.0], vec![1.0, 5.0]]).unwrap();
        assert!(Dataset::new(ones, vec![0.0; 3], true).is_ok());
    }

    #[test]
    fn mask_order_is_lexicographic_on_indices() {
        let a = SubsetMask::from_indices(5, &[0, 1, 4]).unwrap();
        let b = SubsetMask::from_indices(5, &[0, 2, 3]).unwrap();
        assert!(a < b);
        let all: Vec<SubsetMask> = Combinations::new(6, 3).map(|c| SubsetMask::from_indices(6, &c).unwrap()).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(SubsetMask::from_indices(3, &[0, 0]).is_err());
        assert!(SubsetMask::from_indices(3, &[3]).is_err());
        assert_eq!(a.symmetric_difference(&b), vec![1, 2, 3, 4]);
    }

    #[test]
    fn incumbent_breaks_ties_by_mask() {
        let lo = SubsetMask::from_indices(4, &[0, 1]).unwrap();
        let hi = SubsetMask::from_indices(4, &[2, 3]).unwrap();
        let mut inc = Incumbent::default();
        inc.offer(1.0, &hi, &[1.0]);
        inc.offer(1.0 + 1e-14, &lo, &[2.0]);
        let fit = inc.into_fit(Counters::default()).unwrap();
        assert_eq!(fit.mask, lo);

        let mut inc = Incumbent::default();
        inc.offer(1.0, &hi, &[1.0]);
        inc.offer(1.0 + 1e-6, &lo, &[2.0]);
        assert_eq!(inc.into_fit(Counters::default()).unwrap().mask, hi);
    }
}
