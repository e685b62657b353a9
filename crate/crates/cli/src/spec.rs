//! Parsers for the `--h` and `--gen` arguments.

use std::str::FromStr;

use crate::error::{CliError, Result};

/// Trimming parameter as given on the command line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HSpec {
    Count(usize),
    /// Fraction of `n`, rounded up.
    Fraction(f64),
}

impl FromStr for HSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(k) = s.parse::<usize>() {
            return Ok(HSpec::Count(k));
        }
        match s.parse::<f64>() {
            Ok(f) if f > 0.0 && f <= 1.0 => Ok(HSpec::Fraction(f)),
            Ok(f) => Err(CliError::BadArgument(format!("h fraction {f} outside (0, 1]"))),
            Err(_) => Err(CliError::BadArgument(format!("h must be a count or a fraction, got '{s}'"))),
        }
    }
}

/// The usual high-breakdown choice `floor((n + p + 1) / 2)`.
pub fn default_h(n: usize, p: usize) -> usize {
    (n + p).div_ceil(2).min(n)
}

/// Resolves `h` for a dataset of size `n x p`. The second value is a warning
/// when `h / n` falls outside `(0.5, 1]`.
pub fn resolve_h(spec: Option<HSpec>, n: usize, p: usize) -> Result<(usize, Option<String>)> {
    let h = match spec {
        None => default_h(n, p),
        Some(HSpec::Count(k)) => k,
        Some(HSpec::Fraction(f)) => (f * n as f64).ceil() as usize,
    };
    if h < p || h > n {
        return Err(CliError::BadArgument(format!("h = {h} outside [p, n] = [{p}, {n}]")));
    }
    let warning = (2 * h <= n).then(|| format!("h = {h} keeps at most half of the {n} observations"));
    Ok((h, warning))
}

/// Generator request `seed,n,p,frac`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub outlier_fraction: f64,
}

impl FromStr for GenSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| CliError::BadArgument(format!("--gen expects seed,n,p,frac: {what}"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [seed, n, p, frac] = parts[..] else {
            return Err(bad("need exactly four fields"));
        };
        let seed = seed.parse().map_err(|_| bad("bad seed"))?;
        let n: usize = n.parse().map_err(|_| bad("bad n"))?;
        let p: usize = p.parse().map_err(|_| bad("bad p"))?;
        let outlier_fraction: f64 = frac.parse().map_err(|_| bad("bad fraction"))?;
        if p == 0 || n <= p {
            return Err(bad("need n > p >= 1"));
        }
        if !(0.0..0.5).contains(&outlier_fraction) {
            return Err(bad("fraction must lie in [0, 0.5)"));
        }
        Ok(GenSpec { seed, n, p, outlier_fraction })
    }
}
