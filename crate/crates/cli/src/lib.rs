//! Command-line frontend for the exact LTS solver: CSV ingestion, solver
//! selection, diagnostics and report serialization.
//!
//! ```
//! use lts_cli::{run, InputSource, RunConfig, GenSpec, Algorithm};
//!
//! let spec = GenSpec { seed: 1, n: 8, p: 1, outlier_fraction: 0.25 };
//! let mut config = RunConfig::new(InputSource::Generated(spec));
//! config.algorithm = Algorithm::Both;
//! let report = run(&config).unwrap();
//! assert!(report.agreement.unwrap().objective);
//! ```

mod args;
mod error;
mod generate;
mod input;
mod report;
mod run;
mod spec;

pub use args::Cli;
pub use error::{exit, CliError, Result};
pub use generate::{gen_instance, OUTLIER_SHIFT};
pub use input::{load_csv, parse_csv, parse_table, table_to_dataset, write_csv, ResponseColumn, Table};
pub use report::{
    one_based, Agreement, Algorithm, AssumptionEntry, CellEntry, CountersReport, LandscapeReport, MinimumEntry, Report,
    ReportFormat, SolverSummary, WitnessEntry,
};
pub use run::{run, InputSource, RunConfig};
pub use spec::{default_h, resolve_h, GenSpec, HSpec};
