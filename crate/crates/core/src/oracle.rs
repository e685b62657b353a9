//! Brute-force reference: the minimum of `J(w)` over every `h`-subset.

use crate::combinatorics::binomial;
use crate::error::{LtsError, Result};
use crate::model::{subset_fit, Counters, FitResult, Incumbent, Problem, SubsetMask};
use crate::parallel::map_subset_blocks;

/// Default ceiling on `C(n, h)`.
pub const DEFAULT_CAP: u128 = 2_000_000;

/// Evaluates `J` on all `C(n, h)` subsets in lexicographic order and returns
/// the minimum, with the same tie-break as [`crate::bsa::bsa_solve`].
/// Rank-deficient subsets are skipped and counted.
pub fn exact_enumerate(problem: &Problem, cap: u128) -> Result<FitResult> {
    let (n, h) = (problem.n(), problem.h());
    let count = binomial(n, h);
    if count > cap {
        return Err(LtsError::CapExceeded { count, cap });
    }
    let data = problem.dataset();

    let blocks = map_subset_blocks(n, h, |subsets| {
        let mut counters = Counters::default();
        let mut best = Incumbent::default();
        for idx in subsets {
            match subset_fit(data, &idx) {
                Ok((beta, value)) => {
                    counters.j_evaluations += 1;
                    let mask = SubsetMask::from_indices(n, &idx).expect("combination indices are valid");
                    best.offer(value, &mask, &beta);
                }
                Err(LtsError::SingularFit { .. }) => counters.singular_masks += 1,
                Err(e) => return Err(e),
            }
        }
        Ok((counters, best))
    });

    let mut counters = Counters::default();
    let mut best = Incumbent::default();
    for block in blocks {
        let (c, inc) = block?;
        counters.merge(&c);
        best.absorb(inc);
    }
    let mut fit = best.into_fit(counters).ok_or(LtsError::NoRegularSubset)?;
    fit.ols_short_circuit = h == n;
    Ok(fit)
}
