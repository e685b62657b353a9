//! Exact Least Trimmed Squares (LTS) regression.
//!
//! The LTS estimate minimizes the sum of the `h` smallest squared residuals.
//! That objective is piecewise quadratic: the parameter space splits into open
//! cells on which the set of retained observations is constant, and every
//! local minimum is the ordinary least squares fit of one cell's subset.
//!
//! [`bsa::bsa_solve`] finds the global minimum exactly by enumerating the
//! zero-dimensional intersections of the hyperplanes `r_i^2 = r_j^2`, keeping
//! those where the tie sits at the trimming boundary (ordered positions `h`
//! and `h + 1`), and evaluating the subsets adjacent to each such vertex.
//! [`oracle::exact_enumerate`] is the brute-force reference over all
//! `C(n, h)` subsets.
//!
//! ```
//! use lts_core::{bsa, model::{Dataset, Problem}, numerics::Matrix};
//!
//! let x = Matrix::from_column(&[1.39, -2.25, 6.10, -8.50, 8.26, -8.67, 10.87, 13.70, 13.05]).unwrap();
//! let y = vec![-0.90, -0.80, 33.32, -27.23, 12.63, -14.18, -3.79, -8.66, -16.45];
//! let problem = Problem::new(Dataset::new(x, y, false).unwrap(), 5).unwrap();
//! let fit = bsa::bsa_solve(&problem).unwrap();
//! assert_eq!(fit.mask.indices(), vec![0, 1, 6, 7, 8]);
//! assert!((fit.objective - 71.9578).abs() < 1e-3);
//! ```

pub mod bsa;
pub mod combinatorics;
pub mod diagnostics;
mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod parallel;
pub mod relation;

pub use error::{LtsError, Result};
