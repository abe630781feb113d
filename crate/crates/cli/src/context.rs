use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use berezin_core::mc::{SamplingPlan, DEFAULT_SAMPLES};
use clap::Args;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::report::{Draft, Format};

pub const DEFAULT_SEED: u64 = 1;

/// Tolerance names accepted by `--tol` and their defaults.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("unitarity", 1e-12),
    ("deterministic", 1e-8),
    ("z", 3.0),
    ("gram", 1e-8),
    ("scalar", 1e-12),
    ("covariance", 1e-10),
    ("rank", 0.99),
    ("ratio", 1e-8),
    ("rank1", 5e-2),
];

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=REAL, got {s:?}"))?;
    if !TOLERANCES.iter().any(|(n, _)| *n == k) {
        let names: Vec<&str> = TOLERANCES.iter().map(|(n, _)| *n).collect();
        return Err(format!("unknown tolerance {k:?}; known: {}", names.join(", ")));
    }
    let v: f64 = v.parse().map_err(|e| format!("{v:?}: {e}"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("tolerance {k} must be positive, got {v}"));
    }
    Ok((k.to_string(), v))
}

#[derive(Debug, Args)]
pub struct Opts {
    #[arg(long, global = true)]
    pub p: Option<usize>,
    #[arg(long, global = true)]
    pub q: Option<usize>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub r: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Comma-separated exponents.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub mu: Option<Vec<f64>>,
    /// Spectral grid for `plancherel weight`, p values per point.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub s: Option<Vec<f64>>,
    /// Radial grid for `plancherel rank1`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Option<Vec<f64>>,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, global = true, env = "BEREZIN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Report destination (stdout if absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Destination for samples, tables and witnesses.
    #[arg(long, global = true)]
    pub dump: Option<PathBuf>,
    /// Tolerance override NAME=REAL, repeatable.
    #[arg(long, global = true, value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Number of samples, points or trials, depending on the command.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Witness-search configuration budget.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Square-integrability edge for `plancherel blocks`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Non-strict block condition w_r <= h - alpha.
    #[arg(long, global = true)]
    pub weak: bool,
    /// Add the corrupted catalog row (negative control).
    #[arg(long, global = true)]
    pub corrupted_fixture: bool,
}

pub struct Ctx {
    pub opts: Opts,
    tol: BTreeMap<String, f64>,
}

impl Ctx {
    pub fn new(opts: Opts) -> CliResult<Self> {
        if opts.samples == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        let mut tol: BTreeMap<String, f64> = TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in &opts.tol {
            tol.insert(k.clone(), *v);
        }
        Ok(Ctx { opts, tol })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tol[name]
    }

    pub fn seed(&self) -> u64 {
        self.opts.seed
    }

    pub fn format(&self) -> Option<Format> {
        self.opts.format
    }

    pub fn plan(&self) -> SamplingPlan {
        SamplingPlan::new(self.opts.seed, self.opts.samples)
    }

    pub fn require<T: Copy>(&self, v: Option<T>, flag: &str) -> CliResult<T> {
        v.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
    }

    pub fn p(&self) -> CliResult<usize> {
        self.require(self.opts.p, "p")
    }

    pub fn q(&self) -> CliResult<usize> {
        self.require(self.opts.q, "q")
    }

    pub fn n(&self) -> CliResult<usize> {
        self.require(self.opts.n, "n")
    }

    pub fn r(&self) -> CliResult<usize> {
        self.require(self.opts.r, "r")
    }

    pub fn alpha(&self) -> CliResult<f64> {
        let a = self.require(self.opts.alpha, "alpha")?;
        if !a.is_finite() {
            return Err(CliError::Usage("--alpha must be finite".into()));
        }
        Ok(a)
    }

    pub fn list(&self, v: &Option<Vec<f64>>, flag: &str) -> CliResult<Vec<f64>> {
        v.clone().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
    }

    /// Seed and version, present in every report.
    pub fn draft(&self, command: &str) -> Draft {
        let mut inputs = BTreeMap::new();
        inputs.insert("seed".to_string(), Value::from(self.opts.seed));
        inputs.insert(
            "version".to_string(),
            Value::from(format!("berezin-core {}", berezin_core::VERSION)),
        );
        Draft::new(command, inputs)
    }

    pub fn sink(&self) -> CliResult<Box<dyn Write>> {
        Ok(match &self.opts.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    /// Writes `json` (JSON format) or `rows` under `header` (CSV) to `--dump`, if given.
    /// A CSV `preamble` goes on a leading `#` line.
    pub fn dump<J: Serialize>(
        &self,
        json: &J,
        preamble: Option<&str>,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> CliResult<()> {
        let Some(path) = &self.opts.dump else {
            return Ok(());
        };
        let mut file = BufWriter::new(File::create(path)?);
        match self.format().unwrap_or(Format::Json) {
            Format::Json => {
                serde_json::to_writer_pretty(&mut file, json)?;
                writeln!(file)?;
                file.flush()?;
            }
            Format::Csv => {
                if let Some(pre) = preamble {
                    writeln!(file, "# {pre}")?;
                }
                let mut w = csv::Writer::from_writer(file);
                w.write_record(header)?;
                for row in rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}
