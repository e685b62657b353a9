//! Borders scanning: exact LTS by visiting every vertex of the cell
//! arrangement that lies on the trimming boundary.
//!
//! For each `(p+1)`-tuple `i_1 < ... < i_{p+1}` and each sign vector the
//! candidate system
//!
//! ```text
//! (x_{i_1} o_k x_{i_{k+1}})^T beta = y_{i_1} o_k y_{i_{k+1}},   k = 1..p
//! ```
//!
//! is solved. A regular solution makes all `p + 1` tuple residuals equal in
//! absolute value. It is kept when the anchor's squared residual equals both
//! the `h`-th and `(h+1)`-th ordered ones; the subsets in relation with it are
//! then evaluated by OLS and the smallest `J` wins.
//!
//! With one regressor the two sign cases reduce to the closed-form roots of
//! [`candidate_roots_1d`].

use std::fmt;

use crate::combinatorics::binomial;
use crate::error::{LtsError, Result};
use crate::model::{
    residual_order, squared_residuals, squared_residuals_unchecked, subset_fit, Counters, FitResult, Incumbent,
    Problem, SubsetMask,
};
use crate::numerics::{solve_in_place, Matrix};
use crate::parallel::map_subset_blocks;
use crate::relation::{masks_for, tie_structure_ordered};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            Sign::Plus => a + b,
            Sign::Minus => a - b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    /// The `counter`-th of the `2^len` sign vectors in binary-counter order,
    /// `+` as 0 and the first sign most significant.
    pub fn from_counter(len: usize, counter: u64) -> Self {
        SignVector((0..len).map(|k| if counter >> (len - 1 - k) & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect())
    }

    /// All `2^len` vectors in counter order.
    pub fn all(len: usize) -> impl Iterator<Item = SignVector> {
        (0..1u64 << len).map(move |c| SignVector::from_counter(len, c))
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s == Sign::Plus { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// A regular solution of one candidate system.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidatePoint {
    pub beta: Vec<f64>,
    /// 0-based, ascending; the first entry is the anchor.
    pub tuple: Vec<usize>,
    pub signs: SignVector,
    pub in_hp: bool,
}

/// Roots of `r_i^2 = r_j^2` for a single regressor: the minus root
/// `(y_i - y_j) / (x_i - x_j)` then the plus root `(y_i + y_j) / (x_i + x_j)`.
/// A root whose denominator is below `pivot_tol * max(|x_i|, |x_j|)` is
/// dropped, and equal roots collapse to one.
pub fn candidate_roots_1d(problem: &Problem, i: usize, j: usize) -> Result<Vec<f64>> {
    if problem.p() != 1 {
        return Err(LtsError::invalid("closed-form roots need exactly one regressor"));
    }
    let n = problem.n();
    if i == j || i >= n || j >= n {
        return Err(LtsError::invalid(format!("need two distinct indices below {n}, got {i} and {j}")));
    }
    Ok(roots_1d(problem, i, j).into_iter().map(|(r, _)| r).collect())
}

fn roots_1d(problem: &Problem, i: usize, j: usize) -> Vec<(f64, Sign)> {
    let d = problem.dataset();
    let (xi, xj) = (d.x().get(i, 0), d.x().get(j, 0));
    let (yi, yj) = (d.y()[i], d.y()[j]);
    let guard = problem.tol().pivot_tol * xi.abs().max(xj.abs());
    let mut roots = Vec::with_capacity(2);
    if (xi - xj).abs() > guard {
        roots.push(((yi - yj) / (xi - xj), Sign::Minus));
    }
    if (xi + xj).abs() > guard {
        let r = (yi + yj) / (xi + xj);
        if roots.first().map(|f| f.0) != Some(r) {
            roots.push((r, Sign::Plus));
        }
    }
    roots
}

/// The `p x p` system anchored at `tuple[0]`: row `k` is
/// `x_{tuple[0]} o_k x_{tuple[k+1]}`, entry `k` of the right-hand side is
/// `y_{tuple[0]} o_k y_{tuple[k+1]}`.
pub fn build_candidate_system(problem: &Problem, tuple: &[usize], signs: &SignVector) -> Result<(Matrix, Vec<f64>)> {
    let p = problem.p();
    check_tuple(problem, tuple)?;
    if signs.len() != p {
        return Err(LtsError::invalid(format!("sign vector has length {}, expected {p}", signs.len())));
    }
    let mut a = vec![0.0; p * p];
    let mut b = vec![0.0; p];
    fill_system(problem, tuple, signs.signs(), &mut a, &mut b);
    Ok((Matrix::new(p, p, a)?, b))
}

fn check_tuple(problem: &Problem, tuple: &[usize]) -> Result<()> {
    let (n, p) = (problem.n(), problem.p());
    if tuple.len() != p + 1 {
        return Err(LtsError::invalid(format!("tuple has {} indices, expected {}", tuple.len(), p + 1)));
    }
    for (k, &i) in tuple.iter().enumerate() {
        if i >= n || tuple[..k].contains(&i) {
            return Err(LtsError::invalid(format!("tuple indices must be distinct and below {n}")));
        }
    }
    Ok(())
}

fn fill_system(problem: &Problem, tuple: &[usize], signs: &[Sign], a: &mut [f64], b: &mut [f64]) {
    let d = problem.dataset();
    let p = problem.p();
    let anchor = tuple[0];
    let xa = d.x().row(anchor);
    let ya = d.y()[anchor];
    for (k, &s) in signs.iter().enumerate() {
        let other = tuple[k + 1];
        let xo = d.x().row(other);
        for c in 0..p {
            a[k * p + c] = s.apply(xa[c], xo[c]);
        }
        b[k] = s.apply(ya, d.y()[other]);
    }
}

/// Border test: `r_anchor^2 = r_(h)^2 = r_(h+1)^2` under the tolerance
/// policy. Always false when `h = n`.
pub fn test_candidate(problem: &Problem, beta: &[f64], anchor: usize) -> Result<bool> {
    if anchor >= problem.n() {
        return Err(LtsError::invalid("anchor index out of range"));
    }
    let sq = squared_residuals(problem, beta)?;
    let order = residual_order(&sq);
    Ok(border_test(problem, &sq, &order, anchor))
}

fn border_test(problem: &Problem, sq: &[f64], order: &[usize], anchor: usize) -> bool {
    let h = problem.h();
    if h >= problem.n() {
        return false;
    }
    let tol = problem.tol();
    let (rh, rh1) = (sq[order[h - 1]], sq[order[h]]);
    let ra = sq[anchor];
    tol.residuals_equal(ra, rh) && tol.residuals_equal(ra, rh1)
}

/// Every regular candidate point, in enumeration order, with its border test
/// result. Sequential; meant for inspection and tests.
pub fn scan_candidates(problem: &Problem) -> Result<Vec<CandidatePoint>> {
    let (n, p) = (problem.n(), problem.p());
    let mut out = Vec::new();
    for tuple in crate::combinatorics::Combinations::new(n, p + 1) {
        if p == 1 {
            for (beta, s) in roots_1d(problem, tuple[0], tuple[1]) {
                let in_hp = test_candidate(problem, &[beta], tuple[0])?;
                out.push(CandidatePoint { beta: vec![beta], tuple: tuple.clone(), signs: SignVector(vec![s]), in_hp });
            }
            continue;
        }
        for signs in SignVector::all(p) {
            let mut a = vec![0.0; p * p];
            let mut b = vec![0.0; p];
            fill_system(problem, &tuple, signs.signs(), &mut a, &mut b);
            let mut lu = a.clone();
            if solve_in_place(&mut lu, &a, &mut b, p, problem.tol().pivot_tol) {
                let in_hp = test_candidate(problem, &b, tuple[0])?;
                out.push(CandidatePoint { beta: b, tuple: tuple.clone(), signs, in_hp });
            }
        }
    }
    Ok(out)
}

/// Exact LTS fit.
///
/// Candidate systems are scanned in parallel over blocks of tuples; the
/// result does not depend on the thread count. Ties in `J` within `1e-12`
/// relative go to the lexicographically smallest subset. With `h = n` the
/// plain OLS fit is returned.
pub fn bsa_solve(problem: &Problem) -> Result<FitResult> {
    let (n, p, h) = (problem.n(), problem.p(), problem.h());
    if h == n {
        return ols_fit(problem);
    }
    if p >= 63 {
        return Err(LtsError::invalid("too many regressors for sign enumeration"));
    }

    let blocks = map_subset_blocks(n, p + 1, |tuples| scan_block(problem, tuples));

    let mut counters = Counters::default();
    let mut best = Incumbent::default();
    for block in blocks {
        let (c, inc) = block?;
        counters.merge(&c);
        best.absorb(inc);
    }
    best.into_fit(counters).ok_or_else(|| no_candidate(problem, &counters))
}

fn ols_fit(problem: &Problem) -> Result<FitResult> {
    let n = problem.n();
    let idx: Vec<usize> = (0..n).collect();
    let (beta, objective) = subset_fit(problem.dataset(), &idx)?;
    Ok(FitResult {
        beta,
        objective,
        mask: SubsetMask::all(n),
        counters: Counters { j_evaluations: 1, ..Default::default() },
        ols_short_circuit: true,
    })
}

fn no_candidate(problem: &Problem, counters: &Counters) -> LtsError {
    let hint = if counters.candidates_in_hp > 0 {
        "every subset adjacent to a border vertex is rank deficient; X likely lacks h-full rank (HFullRank)".to_string()
    } else if counters.regular_systems == 0 {
        "no candidate system was regular; rows are likely equal up to sign (A1) or the sign systems rank deficient (A3/A4)"
            .to_string()
    } else {
        format!(
            "none of {} regular candidates lies on the trimming boundary (h = {}); the sign systems are likely rank deficient (A3/A4)",
            counters.regular_systems,
            problem.h()
        )
    };
    LtsError::NoCandidate { hint }
}

fn scan_block(problem: &Problem, tuples: &mut dyn Iterator<Item = Vec<usize>>) -> Result<(Counters, Incumbent)> {
    let p = problem.p();
    let mut counters = Counters::default();
    let mut best = Incumbent::default();
    let mut a = vec![0.0; p * p];
    let mut lu = vec![0.0; p * p];
    let mut b = vec![0.0; p];
    let sign_vectors: Vec<SignVector> = SignVector::all(p).collect();

    for tuple in tuples {
        counters.index_tuples_visited += 1;
        if p == 1 {
            counters.systems_solved += 2;
            for (beta, _) in roots_1d(problem, tuple[0], tuple[1]) {
                counters.regular_systems += 1;
                visit(problem, &[beta], tuple[0], &mut counters, &mut best)?;
            }
            continue;
        }
        for signs in &sign_vectors {
            counters.systems_solved += 1;
            fill_system(problem, &tuple, signs.signs(), &mut a, &mut b);
            lu.copy_from_slice(&a);
            if !solve_in_place(&mut lu, &a, &mut b, p, problem.tol().pivot_tol) {
                continue;
            }
            counters.regular_systems += 1;
            visit(problem, &b, tuple[0], &mut counters, &mut best)?;
        }
    }
    Ok((counters, best))
}

fn visit(problem: &Problem, beta: &[f64], anchor: usize, counters: &mut Counters, best: &mut Incumbent) -> Result<()> {
    let data = problem.dataset();
    let sq = squared_residuals_unchecked(data, beta);
    let order = residual_order(&sq);
    if !border_test(problem, &sq, &order, anchor) {
        return Ok(());
    }
    counters.candidates_in_hp += 1;
    let ties = tie_structure_ordered(&sq, &order, problem.h(), problem.tol());
    for mask in masks_for(&ties, problem.n(), problem.h(), problem.tol().max_tie_subsets)? {
        match subset_fit(data, &mask.indices()) {
            Ok((fit, value)) => {
                counters.j_evaluations += 1;
                best.offer(value, &mask, &fit);
            }
            Err(LtsError::SingularFit { .. }) => counters.singular_masks += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Number of candidate systems a full scan solves: `C(n, p+1) * 2^p`.
pub fn expected_system_count(n: usize, p: usize) -> u128 {
    binomial(n, p + 1).saturating_mul(1u128 << p.min(127))
}
