//! Checks for the data conditions under which the border scan is exact, and
//! the one-regressor objective landscape (borders, cells, local minima).

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bsa::{candidate_roots_1d, test_candidate, Sign, SignVector};
use crate::combinatorics::{binomial, Combinations};
use crate::error::{LtsError, Result};
use crate::model::{subset_objective, Dataset, FitResult, Problem, SubsetMask, TolerancePolicy};
use crate::numerics::{rank, Matrix, DEFAULT_PIVOT_TOL};
use crate::relation::subsets_in_relation;

/// Default number of subsets or sign vectors examined by the sampled checks.
pub const DEFAULT_BUDGET: u64 = 4096;

const MAX_WITNESSES: usize = 8;
const SAMPLING_SEED: u64 = 0x5eed_1a75;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssumptionId {
    /// No two rows equal up to sign, no zero row.
    PairwiseDistinct,
    /// The optimal trimmed sum is strictly positive.
    PositiveMinimum,
    /// Every sign system anchored at the first row has rank `p`.
    SignRank,
    /// As `SignRank`, exempting the all-minus system (intercept models).
    SignRankIntercept,
    /// Every `h`-row submatrix has rank `p`.
    HFullRank,
}

impl AssumptionId {
    pub fn label(self) -> &'static str {
        match self {
            AssumptionId::PairwiseDistinct => "A1",
            AssumptionId::PositiveMinimum => "A2",
            AssumptionId::SignRank => "A3",
            AssumptionId::SignRankIntercept => "A4",
            AssumptionId::HFullRank => "HFullRank",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssumptionStatus {
    Pass,
    Fail,
    SampledPass,
    Skipped,
}

/// Evidence against an assumption. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Rows equal up to sign.
    Pair(usize, usize),
    ZeroRow(usize),
    Subset(Vec<usize>),
    Signs(SignVector),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssumptionReport {
    pub id: AssumptionId,
    pub status: AssumptionStatus,
    pub witnesses: Vec<Witness>,
    /// Pairs, subsets or sign vectors examined.
    pub checked: u64,
}

impl AssumptionReport {
    fn conclude(id: AssumptionId, witnesses: Vec<Witness>, checked: u64, exhaustive: bool) -> Self {
        let status = match (witnesses.is_empty(), exhaustive) {
            (false, _) => AssumptionStatus::Fail,
            (true, true) => AssumptionStatus::Pass,
            (true, false) => AssumptionStatus::SampledPass,
        };
        AssumptionReport { id, status, witnesses, checked }
    }

    fn skipped(id: AssumptionId) -> Self {
        AssumptionReport { id, status: AssumptionStatus::Skipped, witnesses: Vec::new(), checked: 0 }
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, AssumptionStatus::Pass | AssumptionStatus::SampledPass)
    }
}

/// `x_i != +-x_j` for all `i < j` and no zero row, entrywise to the default
/// residual tolerance.
pub fn check_pairwise(dataset: &Dataset) -> AssumptionReport {
    let tol = TolerancePolicy::default().residual_eq_tol;
    let x = dataset.x();
    let close = |a: f64, b: f64| (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()));
    let mut witnesses = Vec::new();
    let n = dataset.n();
    for i in 0..n {
        if x.row(i).iter().all(|v| v.abs() <= tol) {
            witnesses.push(Witness::ZeroRow(i));
        }
    }
    let mut checked = 0;
    for i in 0..n {
        for j in i + 1..n {
            checked += 1;
            let (a, b) = (x.row(i), x.row(j));
            let same = a.iter().zip(b).all(|(u, v)| close(*u, *v));
            let opposite = a.iter().zip(b).all(|(u, v)| close(*u, -*v));
            if same || opposite {
                witnesses.push(Witness::Pair(i, j));
            }
        }
    }
    AssumptionReport::conclude(AssumptionId::PairwiseDistinct, witnesses, checked, true)
}

/// Rank of every `h`-row submatrix. Exhaustive when `C(n, h) <= budget`,
/// otherwise `budget` random subsets from a fixed seed.
pub fn check_h_full_rank(dataset: &Dataset, h: usize, budget: u64) -> AssumptionReport {
    let id = AssumptionId::HFullRank;
    let (n, p) = (dataset.n(), dataset.p());
    if budget == 0 {
        return AssumptionReport::skipped(id);
    }
    if h < p || h > n {
        let w = vec![Witness::Subset((0..h.min(n)).collect())];
        return AssumptionReport::conclude(id, w, 0, true);
    }
    let deficient = |idx: &[usize]| rank(&dataset.x().select_rows(idx), DEFAULT_PIVOT_TOL) < p;
    let mut witnesses = Vec::new();
    let mut checked = 0;
    let exhaustive = binomial(n, h) <= budget as u128;
    if exhaustive {
        for idx in Combinations::new(n, h) {
            checked += 1;
            if deficient(&idx) {
                witnesses.push(Witness::Subset(idx));
                if witnesses.len() >= MAX_WITNESSES {
                    break;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        for _ in 0..budget {
            checked += 1;
            let mut idx = sample(&mut rng, n, h).into_vec();
            idx.sort_unstable();
            if deficient(&idx) {
                witnesses.push(Witness::Subset(idx));
                if witnesses.len() >= MAX_WITNESSES {
                    break;
                }
            }
        }
    }
    AssumptionReport::conclude(id, witnesses, checked, exhaustive)
}

/// Rank of the `(n-1) x p` sign systems with rows `x_1 o_k x_{k+1}`.
///
/// All `2^(n-1)` sign vectors are checked when that fits in `budget`;
/// otherwise `budget` random ones plus the all-plus and all-minus vectors.
/// For intercept models the all-minus vector, whose first column vanishes,
/// is exempt.
pub fn check_sign_rank(dataset: &Dataset, budget: u64) -> AssumptionReport {
    let intercept = dataset.has_intercept();
    let id = if intercept { AssumptionId::SignRankIntercept } else { AssumptionId::SignRank };
    let (n, p) = (dataset.n(), dataset.p());
    let m = n - 1;
    if m < p {
        let w = vec![Witness::Signs(SignVector::new(vec![Sign::Plus; m]))];
        return AssumptionReport::conclude(id, w, 0, true);
    }
    if budget == 0 {
        return AssumptionReport::skipped(id);
    }
    let x = dataset.x();
    let all_minus = SignVector::new(vec![Sign::Minus; m]);
    let mut witnesses = Vec::new();
    let mut checked = 0;
    let mut check = |signs: SignVector, witnesses: &mut Vec<Witness>| {
        if intercept && signs == all_minus {
            return;
        }
        checked += 1;
        let mut data = Vec::with_capacity(m * p);
        for (k, s) in signs.signs().iter().enumerate() {
            let (a, b) = (x.row(0), x.row(k + 1));
            data.extend(a.iter().zip(b).map(|(u, v)| if *s == Sign::Plus { u + v } else { u - v }));
        }
        // sums of huge entries can overflow; such a system is unusable anyway
        let deficient = Matrix::new(m, p, data).map_or(true, |mat| rank(&mat, DEFAULT_PIVOT_TOL) < p);
        if deficient && witnesses.len() < MAX_WITNESSES {
            witnesses.push(Witness::Signs(signs));
        }
    };

    let exhaustive = m < 63 && (1u64 << m) <= budget;
    if exhaustive {
        for signs in SignVector::all(m) {
            check(signs, &mut witnesses);
        }
    } else {
        check(SignVector::new(vec![Sign::Plus; m]), &mut witnesses);
        check(all_minus.clone(), &mut witnesses);
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        for _ in 0..budget {
            let signs = (0..m).map(|_| if rng.random::<bool>() { Sign::Minus } else { Sign::Plus }).collect();
            check(SignVector::new(signs), &mut witnesses);
        }
    }
    AssumptionReport::conclude(id, witnesses, checked, exhaustive)
}

/// Whether the optimal trimmed sum is positive. A failure is informational:
/// `h` points fit exactly, and that fit is the estimate.
pub fn check_positive_minimum(problem: &Problem, result: &FitResult) -> AssumptionReport {
    let y = problem.dataset().y();
    let scale = y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64;
    let threshold = problem.tol().residual_eq_tol * (1.0 + scale);
    let witnesses =
        if result.objective > threshold { Vec::new() } else { vec![Witness::Subset(result.mask.indices())] };
    AssumptionReport::conclude(AssumptionId::PositiveMinimum, witnesses, 1, true)
}

/// An open interval of the one-regressor objective on which the retained
/// subset is constant. `None` bounds are infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub mask: SubsetMask,
}

impl Cell {
    /// Whether `beta` lies in the closed interval.
    pub fn contains_closed(&self, beta: f64) -> bool {
        self.lower.is_none_or(|l| beta >= l) && self.upper.is_none_or(|u| beta <= u)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalMinimum {
    pub beta: f64,
    pub value: f64,
    pub mask: SubsetMask,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Landscape1D {
    /// Ascending.
    pub boundary_points: Vec<f64>,
    pub cells: Vec<Cell>,
    pub local_minima: Vec<LocalMinimum>,
}

impl Landscape1D {
    /// Lowest local minimum, first one on ties.
    pub fn global_minimum(&self) -> Option<&LocalMinimum> {
        self.local_minima.iter().reduce(|a, b| if b.value < a.value { b } else { a })
    }
}

/// Borders, cells and local minima of the objective for a single regressor.
///
/// Borders are the pairwise roots that pass the border test; roots closer
/// than `10 * residual_eq_tol * (1 + |b|)` are merged. Each cell is labelled
/// by the subset at its midpoint (outer cells at one unit past the extreme
/// border). A cell holds a local minimum when the OLS fit of its subset lies
/// in the closed cell. Expects pairwise distinct rows.
pub fn landscape_1d(problem: &Problem) -> Result<Landscape1D> {
    if problem.p() != 1 {
        return Err(LtsError::invalid("the landscape needs exactly one regressor"));
    }
    let n = problem.n();
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for beta in candidate_roots_1d(problem, i, j)? {
                if test_candidate(problem, &[beta], i)? {
                    roots.push(beta);
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    let merge_tol = 10.0 * problem.tol().residual_eq_tol;
    let mut boundary_points: Vec<f64> = Vec::with_capacity(roots.len());
    for b in roots {
        match boundary_points.last() {
            Some(&prev) if b - prev <= merge_tol * (1.0 + prev.abs().max(b.abs())) => {}
            _ => boundary_points.push(b),
        }
    }

    let k = boundary_points.len();
    let mut cells = Vec::with_capacity(k + 1);
    for c in 0..=k {
        let lower = c.checked_sub(1).map(|i| boundary_points[i]);
        let upper = boundary_points.get(c).copied();
        let probe = match (lower, upper) {
            (Some(l), Some(u)) => 0.5 * (l + u),
            (None, Some(u)) => u - 1.0,
            (Some(l), None) => l + 1.0,
            (None, None) => 0.0,
        };
        let mask = subsets_in_relation(problem, &[probe])?.swap_remove(0);
        cells.push(Cell { lower, upper, mask });
    }

    let mut local_minima = Vec::new();
    for cell in &cells {
        let (beta, value) = subset_objective(problem, &cell.mask)?;
        if cell.contains_closed(beta[0]) {
            local_minima.push(LocalMinimum { beta: beta[0], value, mask: cell.mask.clone() });
        }
    }
    Ok(Landscape1D { boundary_points, cells, local_minima })
}
