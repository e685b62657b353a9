use std::path::PathBuf;

use clap::Parser;
use lts_core::oracle::DEFAULT_CAP;

use crate::error::{CliError, Result};
use crate::input::ResponseColumn;
use crate::report::{Algorithm, ReportFormat};
use crate::run::{InputSource, RunConfig};
use crate::spec::{GenSpec, HSpec};

/// Exact least trimmed squares regression.
#[derive(Debug, Parser)]
#[command(name = "lts", version)]
pub struct Cli {
    /// CSV file: comma separated, optional header row.
    #[arg(required_unless_present = "gen", conflicts_with = "gen")]
    pub input: Option<PathBuf>,
    /// Response column, by header name or 1-based position.
    #[arg(long, default_value = "1")]
    pub response: String,
    /// Observations kept: a count, or a fraction of n rounded up.
    /// Defaults to floor((n + p + 1) / 2).
    #[arg(long)]
    pub h: Option<String>,
    /// Prepend a column of ones to the regressors.
    #[arg(long)]
    pub intercept: bool,
    #[arg(long, value_enum, default_value_t = Algorithm::Bsa)]
    pub algorithm: Algorithm,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub report: ReportFormat,
    /// Add borders, cells and local minima of the objective (one regressor).
    #[arg(long)]
    pub landscape: bool,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Relative tolerance for equal squared residuals.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative pivot threshold for singular candidate systems.
    #[arg(long)]
    pub pivot_tol: Option<f64>,
    /// Refuse brute force above this many subsets.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u128,
    /// Solve a generated instance instead: "seed,n,p,frac".
    #[arg(long)]
    pub gen: Option<String>,
    /// Write the solved dataset to this CSV file.
    #[arg(long)]
    pub dump_data: Option<PathBuf>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let input = match (self.input, self.gen) {
            (_, Some(spec)) => InputSource::Generated(spec.parse::<GenSpec>()?),
            (Some(path), None) => InputSource::Csv { path, response: self.response.parse::<ResponseColumn>()? },
            (None, None) => return Err(CliError::BadArgument("an input file or --gen is required".into())),
        };
        Ok(RunConfig {
            input,
            h: self.h.as_deref().map(str::parse::<HSpec>).transpose()?,
            intercept: self.intercept,
            algorithm: self.algorithm,
            residual_eq_tol: self.tol,
            pivot_tol: self.pivot_tol,
            cap: self.cap,
            format: self.report,
            threads: self.threads,
            landscape: self.landscape,
            dump_data: self.dump_data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        Cli::try_parse_from(std::iter::once("lts").chain(args.iter().copied())).unwrap().into_config()
    }

    #[test]
    fn file_input_with_flags() {
        let c =
            parse(&["data.csv", "--h", "0.75", "--response", "y", "--algorithm", "both", "--threads", "2"]).unwrap();
        assert_eq!(c.input, InputSource::Csv { path: "data.csv".into(), response: ResponseColumn::Name("y".into()) });
        assert_eq!(c.h, Some(HSpec::Fraction(0.75)));
        assert_eq!(c.algorithm, Algorithm::Both);
        assert_eq!(c.threads, 2);
        assert_eq!(c.cap, DEFAULT_CAP);
    }

    #[test]
    fn generator_input() {
        let c = parse(&["--gen", "1,10,2,0.2", "--report", "text", "--cap", "50"]).unwrap();
        assert!(matches!(c.input, InputSource::Generated(GenSpec { seed: 1, n: 10, p: 2, .. })));
        assert_eq!(c.format, ReportFormat::Text);
        assert_eq!(c.cap, 50);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse(&["--gen", "1,10,2"]).is_err());
        assert!(parse(&["x.csv", "--h", "2.5"]).is_err());
        assert!(Cli::try_parse_from(["lts"]).is_err());
        assert!(Cli::try_parse_from(["lts", "x.csv", "--gen", "1,5,1,0"]).is_err());
        assert!(Cli::try_parse_from(["lts", "x.csv", "--algorithm", "fast"]).is_err());
    }
}
