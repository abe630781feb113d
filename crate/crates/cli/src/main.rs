//! `berezin-lab`: seeded verification campaigns over berezin-core.
//!
//! Exit codes: 0 all checks pass (or are inconclusive), 2 some check fails,
//! 3 domain or usage error.

mod commands;
mod context;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::context::{Ctx, Opts};
use crate::error::{CliError, CliResult};
use crate::report::{write_reports, Format, Verdict};

#[derive(Debug, Parser)]
#[command(name = "berezin-lab", version, about = "Seeded numerical verification of Berezin kernel and group-integral formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Group {
    So,
    U,
    Sp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KernelCmd {
    Gram,
    Witness,
    Covariance,
    Domination,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PlancherelCmd {
    Blocks,
    Weight,
    Degeneration,
    Rank1,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    O,
    U,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Haar samples from SO(n), U(n) or Sp(n) with a unitarity summary.
    Haar { group: Group },
    /// Closed forms, quadrature and Monte Carlo for the corner-determinant integrals.
    VerifyIntegral { group: Group },
    /// Berezin kernel checks.
    Kernel { which: KernelCmd },
    /// Restriction of the kernel to a boundary orbit.
    BoundaryProbe,
    /// Plancherel blocks, weights, degenerations and the rank-one probe.
    Plancherel {
        which: PlancherelCmd,
        /// Real form for `degeneration`.
        #[arg(long, value_enum, default_value_t = Family::O)]
        family: Family,
    },
    /// Dimension identities of the hermitization catalog.
    Catalog,
    /// Formula ledger with live evidence.
    Ledger,
}

/// What a command produced: reports, or a standalone document.
pub enum Output {
    Reports(Vec<report::VerificationReport>),
    Document(String),
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let ctx = Ctx::new(cli.opts)?;
    let output = match cli.command {
        Command::Haar { group } => commands::haar::run(&ctx, group)?,
        Command::VerifyIntegral { group } => commands::integral::run(&ctx, group)?,
        Command::Kernel { which } => commands::kernel::run(&ctx, which)?,
        Command::BoundaryProbe => commands::boundary::run(&ctx)?,
        Command::Plancherel { which, family } => commands::plancherel::run(&ctx, which, family)?,
        Command::Catalog => commands::catalog::run(&ctx)?,
        Command::Ledger => commands::ledger::run(&ctx)?,
    };
    let mut sink = ctx.sink()?;
    let code = match output {
        Output::Reports(reports) => {
            write_reports(&reports, ctx.format().unwrap_or(Format::Json), &mut sink)?;
            if reports.iter().any(|r| r.verdict == Verdict::Fail) {
                2
            } else {
                0
            }
        }
        Output::Document(doc) => {
            sink.write_all(doc.as_bytes())?;
            0
        }
    };
    sink.flush()?;
    Ok(ExitCode::from(code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Core(berezin_core::Error::DomainError(msg)) => eprintln!("berezin-lab: DomainError: {msg}"),
                _ => eprintln!("berezin-lab: {e}"),
            }
            ExitCode::from(3)
        }
    }
}
