//! Which `h`-subsets attain the trimmed sum at a given `beta`.
//!
//! Away from ties the answer is the unique set of `h` smallest squared
//! residuals. When the `h`-th and `(h+1)`-th ordered squared residuals are
//! equal, every way of filling the remaining slots from the tie block
//! attains the same sum.

use crate::combinatorics::{binomial, Combinations};
use crate::error::{LtsError, Result};
use crate::model::{residual_order, squared_residuals, Problem, SubsetMask, TolerancePolicy};

/// Ordering around position `h`: `l` residuals strictly below a block of `t`
/// mutually equal ones. Without a tie across `h`/`h+1`, `t = 1`, `l = h - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieStructure {
    pub l: usize,
    pub t: usize,
    pub below_indices: Vec<usize>,
    pub tie_indices: Vec<usize>,
}

impl TieStructure {
    /// True if the block straddles positions `h` and `h + 1`.
    pub fn is_tie(&self) -> bool {
        self.t > 1
    }

    /// Number of subsets in relation, `C(t, h - l)`.
    pub fn subset_count(&self, h: usize) -> u128 {
        binomial(self.t, h - self.l)
    }
}

pub fn tie_structure_at(problem: &Problem, beta: &[f64]) -> Result<TieStructure> {
    let sq = squared_residuals(problem, beta)?;
    Ok(tie_structure_from(&sq, problem.h(), problem.tol()))
}

/// Tie block around position `h` (1-based) of the sorted squared residuals,
/// chaining pairwise tolerance comparisons outward.
pub(crate) fn tie_structure_from(sq: &[f64], h: usize, tol: &TolerancePolicy) -> TieStructure {
    let order = residual_order(sq);
    tie_structure_ordered(sq, &order, h, tol)
}

pub(crate) fn tie_structure_ordered(sq: &[f64], order: &[usize], h: usize, tol: &TolerancePolicy) -> TieStructure {
    let n = sq.len();
    let at = |k: usize| sq[order[k]];
    // 0-based positions h-1 and h are the h-th and (h+1)-th smallest
    let straddles = h < n && tol.residuals_equal(at(h - 1), at(h));
    let (lo, hi) = if straddles {
        let mut lo = h - 1;
        while lo > 0 && tol.residuals_equal(at(lo - 1), at(lo)) {
            lo -= 1;
        }
        let mut hi = h;
        while hi + 1 < n && tol.residuals_equal(at(hi), at(hi + 1)) {
            hi += 1;
        }
        (lo, hi)
    } else {
        (h - 1, h - 1)
    };
    let mut tie_indices = order[lo..=hi].to_vec();
    tie_indices.sort_unstable();
    TieStructure { l: lo, t: hi - lo + 1, below_indices: order[..lo].to_vec(), tie_indices }
}

/// All masks `w` with `sum_i w_i r_i^2(beta)` equal to the trimmed sum.
///
/// The masks are `below_indices` plus each `(h - l)`-subset of the tie block,
/// in lexicographic order of the chosen indices. Fails with
/// [`LtsError::DegenerateTie`] when their number exceeds the configured cap.
pub fn subsets_in_relation(problem: &Problem, beta: &[f64]) -> Result<Vec<SubsetMask>> {
    let sq = squared_residuals(problem, beta)?;
    let ties = tie_structure_from(&sq, problem.h(), problem.tol());
    masks_for(&ties, problem.n(), problem.h(), problem.tol().max_tie_subsets)
}

pub(crate) fn masks_for(ties: &TieStructure, n: usize, h: usize, cap: u128) -> Result<Vec<SubsetMask>> {
    let need = h - ties.l;
    let count = ties.subset_count(h);
    if count > cap {
        return Err(LtsError::DegenerateTie { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    for choice in Combinations::new(ties.t, need) {
        let mut idx: Vec<usize> = ties.below_indices.clone();
        idx.extend(choice.iter().map(|&c| ties.tie_indices[c]));
        out.push(SubsetMask::from_indices(n, &idx)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::{lts_objective, Dataset};
    use crate::numerics::Matrix;

    fn plus_root(i: usize, j: usize) -> f64 {
        (EXAMPLE_Y[i] + EXAMPLE_Y[j]) / (EXAMPLE_X[i] + EXAMPLE_X[j])
    }

    #[test]
    fn no_tie_inside_a_cell() {
        let ties = tie_structure_at(&example(), &[-1.0]).unwrap();
        assert_eq!(ties.t, 1);
        assert_eq!(ties.l, 4);
        assert!(!ties.is_tie());
        let masks = subsets_in_relation(&example(), &[-1.0]).unwrap();
        assert_eq!(masks, vec![mask1(&[1, 2, 7, 8, 9])]);
    }

    #[test]
    fn tie_at_border_between_first_cells() {
        let beta = [plus_root(5, 6)];
        let ties = tie_structure_at(&example(), &beta).unwrap();
        assert_eq!(ties.t, 2);
        assert_eq!(ties.tie_indices, vec![5, 6]);
        assert_eq!(ties.l, 4);
        let masks = subsets_in_relation(&example(), &beta).unwrap();
        assert_eq!(masks, vec![mask1(&[1, 2, 3, 5, 6]), mask1(&[1, 2, 3, 5, 7])]);
        let obj = lts_objective(&example(), &beta).unwrap();
        for m in &masks {
            let s: f64 = m.iter().map(|i| squared_residuals(&example(), &beta).unwrap()[i]).sum();
            assert!((s - obj).abs() <= 1e-9 * obj);
        }
    }

    #[test]
    fn full_h_gives_all_ones() {
        let x = Matrix::from_column(&EXAMPLE_X).unwrap();
        let pr = Problem::new(Dataset::new(x, EXAMPLE_Y.to_vec(), false).unwrap(), 9).unwrap();
        let masks = subsets_in_relation(&pr, &[0.5]).unwrap();
        assert_eq!(masks, vec![SubsetMask::all(9)]);
    }

    #[test]
    fn wide_tie_block_and_cap() {
        // |y| = 1 everywhere, so every squared residual is 1 at beta = 0
        let x = Matrix::from_column(&[1.0, -1.0, 2.0, -2.0, 3.0, 1.5]).unwrap();
        let d = Dataset::new(x, vec![1.0, 1.0, 1.0, -1.0, 1.0, -1.0], false).unwrap();
        let pr = Problem::new(d.clone(), 3).unwrap();
        let ties = tie_structure_at(&pr, &[0.0]).unwrap();
        assert_eq!((ties.l, ties.t), (0, 6));
        let masks = subsets_in_relation(&pr, &[0.0]).unwrap();
        assert_eq!(masks.len(), 20);
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
        assert!(masks.iter().all(|m| m.count() == 3));

        let tight = TolerancePolicy { max_tie_subsets: 10, ..Default::default() };
        let pr = Problem::with_tolerance(d, 3, tight).unwrap();
        assert_eq!(subsets_in_relation(&pr, &[0.0]), Err(LtsError::DegenerateTie { count: 20, cap: 10 }));
    }

    #[test]
    fn ties_below_h_do_not_count() {
        let tol = TolerancePolicy::default();
        let sq = [1.0, 1.0, 1.0, 5.0, 9.0];
        let ties = tie_structure_from(&sq, 3, &tol);
        assert_eq!((ties.l, ties.t), (2, 1));
        let ties = tie_structure_from(&[1.0, 5.0, 5.0, 5.0, 9.0], 2, &tol);
        assert_eq!((ties.l, ties.t), (1, 3));
        assert_eq!(ties.subset_count(2), 3);
    }
}
