use berezin_core::ball::{BallPoint, PseudoOrthogonalElement};
use berezin_core::berezin::{
    adjudicate_covariance, boundary_sample, covariance_residual, domination_residual, gram_spectrum,
    least_positive_configuration, pd_witness_search, wallach_admissible, witness_configuration, CovarianceConvention,
    GramReport, WITNESS_REL,
};
use berezin_core::mc::block_rng;
use berezin_core::Error;
use serde::Serialize;

use crate::context::Ctx;
use crate::error::{CliError, CliResult};
use crate::report::{num, Expected, Verdict, VerificationReport};
use crate::{KernelCmd, Output};

pub fn run(ctx: &Ctx, which: KernelCmd) -> CliResult<Output> {
    let p = ctx.p()?;
    let q = ctx.q()?;
    if p == 0 || p > q {
        return Err(CliError::Usage(format!("need 1 <= p <= q, got p={p}, q={q}")));
    }
    let alpha = ctx.alpha()?;
    let reports = match which {
        KernelCmd::Gram => vec![gram(ctx, p, q, alpha)?],
        KernelCmd::Witness => vec![witness(ctx, p, q, alpha)?],
        KernelCmd::Covariance => covariance(ctx, p, q, alpha)?,
        KernelCmd::Domination => vec![domination(ctx, p, q, alpha)?],
    };
    Ok(Output::Reports(reports))
}

fn gram(ctx: &Ctx, p: usize, q: usize, alpha: f64) -> CliResult<VerificationReport> {
    let points = ctx.opts.count.unwrap_or(40);
    let configs = ctx.opts.budget.unwrap_or(200);
    let tol = ctx.tol("gram");
    let admissible = wallach_admissible(alpha, p);
    let d = ctx
        .draft("kernel gram")
        .input("p", p)
        .input("q", q)
        .input("alpha", alpha)
        .input("points", points)
        .input("configurations", configs)
        .input("wallach_admissible", admissible)
        .input("tol.gram", tol);
    let mut worst = f64::INFINITY;
    for i in 0..configs {
        let mut rng = block_rng(ctx.seed(), i as u64);
        let pts: Vec<BallPoint> = (0..points).map(|_| BallPoint::random(p, q, 0.99, &mut rng)).collect();
        worst = worst.min(gram_spectrum(&pts, alpha, ctx.seed())?.relative_min());
    }
    let expected = Expected::at_least(-tol);
    // outside the Wallach set random clouds need not expose negativity
    let verdict = if admissible {
        Verdict::from_bool(expected.contains(worst))
    } else {
        Verdict::Inconclusive
    };
    Ok(d.finish(expected, worst, None, None, verdict))
}

#[derive(Serialize)]
struct WitnessDump {
    found: bool,
    config_index: usize,
    seed: u64,
    report: GramReport,
    points: Vec<Vec<Vec<f64>>>,
}

fn witness(ctx: &Ctx, p: usize, q: usize, alpha: f64) -> CliResult<VerificationReport> {
    let budget = ctx.opts.budget.unwrap_or(1000);
    let admissible = wallach_admissible(alpha, p);
    let d = ctx
        .draft("kernel witness")
        .input("p", p)
        .input("q", q)
        .input("alpha", alpha)
        .input("budget", budget)
        .input("wallach_admissible", admissible);
    let (found, index, report) = match pd_witness_search(p, q, alpha, budget, ctx.seed())? {
        Some(w) => (true, w.config_index, w.report),
        None => {
            let (i, r) = least_positive_configuration(p, q, alpha, budget, ctx.seed())?;
            (false, i, r)
        }
    };
    let points = witness_configuration(p, q, ctx.seed(), index)
        .iter()
        .map(|z| z.matrix().row_iter().map(|row| row.iter().copied().collect()).collect())
        .collect();
    let dump = WitnessDump {
        found,
        config_index: index,
        seed: ctx.seed(),
        report,
        points,
    };
    let rows: Vec<Vec<String>> = dump
        .points
        .iter()
        .enumerate()
        .flat_map(|(k, m)| {
            m.iter().enumerate().flat_map(move |(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, v)| vec![k.to_string(), i.to_string(), j.to_string(), num(*v)])
            })
        })
        .collect();
    let preamble = format!(
        "found={found} config_index={index} seed={} min_eig={} max_eig={}",
        ctx.seed(),
        report.min_eig,
        report.max_eig
    );
    ctx.dump(&dump, Some(&preamble), &["point", "row", "col", "value"], &rows)?;
    // a witness is expected exactly off the Wallach set
    let expected = if admissible {
        Expected::at_least(-WITNESS_REL)
    } else {
        Expected::at_most(-WITNESS_REL)
    };
    Ok(d.input("config_index", index).check(expected, report.relative_min()))
}

#[derive(Serialize)]
struct ConventionRow {
    convention: String,
    max_residual: f64,
}

fn covariance(ctx: &Ctx, p: usize, q: usize, alpha: f64) -> CliResult<Vec<VerificationReport>> {
    let trials = ctx.opts.count.unwrap_or(200);
    let (scalar_tol, tol) = (ctx.tol("scalar"), ctx.tol("covariance"));

    let d = ctx
        .draft("kernel covariance scalar-adjudication")
        .input("alpha", alpha)
        .input("trials", trials)
        .input("tol.scalar", scalar_tol);
    let table = adjudicate_covariance(alpha, trials, ctx.seed())?;
    let winners: Vec<&CovarianceConvention> =
        table.iter().filter(|(_, r)| *r < scalar_tol).map(|(c, _)| c).collect();
    let rows: Vec<ConventionRow> = table
        .iter()
        .map(|(c, r)| ConventionRow {
            convention: c.label(),
            max_residual: *r,
        })
        .collect();
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.convention.clone(), num(r.max_residual)])
        .collect();
    ctx.dump(&rows, None, &["convention", "max_residual"], &csv_rows)?;
    let mut d = d;
    if let [w] = winners.as_slice() {
        d = d.input("winner", w.label());
    }
    let adjudication = d.check(Expected::Value(1.0), winners.len() as f64);

    let d = ctx
        .draft("kernel covariance corrected")
        .input("p", p)
        .input("q", q)
        .input("alpha", alpha)
        .input("trials", trials)
        .input("convention", CovarianceConvention::CORRECTED.label())
        .input("tol.covariance", tol);
    let mut worst = 0.0f64;
    for i in 0..trials {
        let mut rng = block_rng(ctx.seed(), i as u64);
        let g = PseudoOrthogonalElement::random(p, q, 1.5, &mut rng);
        let z = BallPoint::random(p, q, 0.9, &mut rng);
        let u = BallPoint::random(p, q, 0.9, &mut rng);
        worst = worst.max(covariance_residual(&g, &z, &u, alpha, CovarianceConvention::CORRECTED)?);
    }
    Ok(vec![adjudication, d.check(Expected::between(0.0, tol), worst)])
}

fn domination(ctx: &Ctx, p: usize, q: usize, alpha: f64) -> CliResult<VerificationReport> {
    let count = ctx.opts.count.unwrap_or(10_000);
    let d = ctx
        .draft("kernel domination")
        .input("p", p)
        .input("q", q)
        .input("alpha", alpha)
        .input("count", count);
    let mut worst = 0.0f64;
    let mut skipped = 0usize;
    for i in 0..count {
        let mut rng = block_rng(ctx.seed(), i as u64);
        // half the draws at c = 1 − 1e−3, the rest spread over (0, 1)
        let c = if i % 2 == 0 { 1.0 - 1e-3 } else { (i as f64 + 0.5) / count as f64 };
        let (z, u) = if i % 4 < 2 {
            (BallPoint::random(p, q, 0.999, &mut rng), BallPoint::random(p, q, 0.999, &mut rng))
        } else {
            let r = (i / 4) % (p + 1);
            (boundary_sample(p, q, r, &mut rng)?.z, boundary_sample(p, q, r, &mut rng)?.z)
        };
        match domination_residual(&z, &u, c, alpha) {
            Ok(v) => worst = worst.max(v),
            Err(Error::NonPositiveDeterminant(_)) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(d.input("skipped", skipped).check(Expected::Value(0.0), worst))
}
