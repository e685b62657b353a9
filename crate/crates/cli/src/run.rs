//! One solver run from configuration to report.

use std::path::PathBuf;
use std::time::Instant;

use lts_core::bsa::bsa_solve;
use lts_core::diagnostics::{
    check_h_full_rank, check_pairwise, check_positive_minimum, check_sign_rank, landscape_1d, DEFAULT_BUDGET,
};
use lts_core::model::{Dataset, FitResult, Problem, TolerancePolicy};
use lts_core::numerics::Matrix;
use lts_core::oracle::{exact_enumerate, DEFAULT_CAP};
use lts_core::parallel::with_threads;

use crate::error::{CliError, Result};
use crate::generate::gen_instance;
use crate::input::{load_csv, write_csv, ResponseColumn};
use crate::report::{one_based, Agreement, Algorithm, AssumptionEntry, Report, ReportFormat, SolverSummary};
use crate::spec::{resolve_h, GenSpec, HSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum InputSource {
    Csv { path: PathBuf, response: ResponseColumn },
    Generated(GenSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: InputSource,
    pub h: Option<HSpec>,
    pub intercept: bool,
    pub algorithm: Algorithm,
    pub residual_eq_tol: Option<f64>,
    pub pivot_tol: Option<f64>,
    /// Ceiling on `C(n, h)` for the brute-force solver.
    pub cap: u128,
    pub format: ReportFormat,
    /// Worker threads, `0` for one per core.
    pub threads: usize,
    pub landscape: bool,
    /// Where to write the dataset actually solved, as CSV.
    pub dump_data: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: InputSource) -> Self {
        RunConfig {
            input,
            h: None,
            intercept: false,
            algorithm: Algorithm::Bsa,
            residual_eq_tol: None,
            pivot_tol: None,
            cap: DEFAULT_CAP,
            format: ReportFormat::Json,
            threads: 0,
            landscape: false,
            dump_data: None,
        }
    }
}

fn with_ones(d: &Dataset) -> Result<Dataset> {
    let (n, p) = (d.n(), d.p());
    let mut x = Vec::with_capacity(n * (p + 1));
    for i in 0..n {
        x.push(1.0);
        x.extend_from_slice(d.x().row(i));
    }
    Ok(Dataset::new(Matrix::new(n, p + 1, x)?, d.y().to_vec(), true)?)
}

fn tolerance(config: &RunConfig) -> Result<TolerancePolicy> {
    let mut tol = TolerancePolicy::default();
    for (value, slot, flag) in [
        (config.residual_eq_tol, &mut tol.residual_eq_tol, "--tol"),
        (config.pivot_tol, &mut tol.pivot_tol, "--pivot-tol"),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::BadArgument(format!("{flag} must be a positive number")));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

fn relatively_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Loads or generates the data, runs the selected solvers and diagnostics,
/// and assembles the report.
pub fn run(config: &RunConfig) -> Result<Report> {
    let (dataset, true_beta) = match &config.input {
        InputSource::Csv { path, response } => (load_csv(path, response, config.intercept)?, None),
        InputSource::Generated(spec) => {
            let (d, beta) = gen_instance(spec)?;
            let d = if config.intercept { with_ones(&d)? } else { d };
            (d, Some(beta))
        }
    };
    if let Some(path) = &config.dump_data {
        let file = std::fs::File::create(path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        write_csv(&dataset, std::io::BufWriter::new(file))?;
    }
    let (n, p) = (dataset.n(), dataset.p());
    let (h, h_warning) = resolve_h(config.h, n, p)?;
    if config.landscape && p != 1 {
        return Err(CliError::BadArgument(format!("--landscape needs exactly one regressor, the model has {p}")));
    }
    let problem = Problem::with_tolerance(dataset, h, tolerance(config)?)?;
    let mut warnings: Vec<String> = h_warning.into_iter().collect();

    with_threads(config.threads, || {
        let started = Instant::now();
        let (primary, exact) = match config.algorithm {
            Algorithm::Bsa => (bsa_solve(&problem)?, None),
            Algorithm::Exact => (exact_enumerate(&problem, config.cap)?, None),
            Algorithm::Both => {
                let fast = bsa_solve(&problem)?;
                let exact = exact_enumerate(&problem, config.cap)?;
                (fast, Some(exact))
            }
        };
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;

        let data = problem.dataset();
        let checks = [
            check_pairwise(data),
            check_sign_rank(data, DEFAULT_BUDGET),
            check_h_full_rank(data, h, DEFAULT_BUDGET),
            check_positive_minimum(&problem, &primary),
        ];
        for c in checks.iter().filter(|c| !c.passed()) {
            warnings.push(format!("assumption {} not satisfied", c.id.label()));
        }

        let agreement = exact.as_ref().map(|e: &FitResult| {
            let agreement = Agreement {
                objective: relatively_equal(primary.objective, e.objective),
                subset: primary.mask == e.mask,
                objective_gap: (primary.objective - e.objective).abs(),
            };
            if !agreement.objective {
                warnings.push("border scan and enumeration disagree on the objective".into());
            }
            agreement
        });
        let landscape = if config.landscape { Some((&landscape_1d(&problem)?).into()) } else { None };

        Ok(Report {
            beta: primary.beta.clone(),
            objective: primary.objective,
            subset: one_based(&primary.mask),
            counters: (&primary.counters).into(),
            assumptions: checks.iter().map(AssumptionEntry::from).collect(),
            algorithm: config.algorithm,
            wall_ms,
            n,
            p,
            h,
            intercept: data.has_intercept(),
            short_circuit: primary.ols_short_circuit,
            exact: exact.as_ref().map(SolverSummary::from),
            agreement,
            landscape,
            true_beta,
            warnings,
        })
    })
}
