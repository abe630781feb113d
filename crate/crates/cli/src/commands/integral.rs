use berezin_core::integrals::{
    so_integral_closed_form, so_integral_mc, so_integral_quadrature, so_lambda, sp_integral_closed_form,
    sp_integral_mc, u_integral_closed_form, u_integral_mc, ExponentVector, SoVariant,
};
use berezin_core::Error;

use super::rel_diff;
use crate::context::Ctx;
use crate::error::CliResult;
use crate::report::{z_score, Expected, Verdict, VerificationReport};
use crate::{Group, Output};

pub fn run(ctx: &Ctx, group: Group) -> CliResult<Output> {
    let reports = match group {
        Group::So => so(ctx)?,
        Group::U => unitary(ctx)?,
        Group::Sp => sp(ctx)?,
    };
    Ok(Output::Reports(reports))
}

fn so(ctx: &Ctx) -> CliResult<Vec<VerificationReport>> {
    let n = ctx.n()?;
    let lambda = ctx.list(&ctx.opts.lambda, "lambda")?;
    let lam = so_lambda(n, &lambda)?;
    if !ExponentVector::new(lam.clone()).so_admissible(n) {
        return Err(Error::DomainError(format!(
            "lambda = {lam:?} violates lambda_k > -(n-k)/2 for SO({n})"
        ))
        .into());
    }
    let (det_tol, z_max) = (ctx.tol("deterministic"), ctx.tol("z"));
    let base = |what: &str| {
        ctx.draft(&format!("verify-integral so {what}"))
            .input("n", n)
            .input("lambda", &lambda)
    };

    let d = base("quadrature").input("tol.deterministic", det_tol);
    let corrected = so_integral_closed_form(n, &lam, SoVariant::TwoPowerCorrected)?;
    let quad = so_integral_quadrature(n, &lam)?;
    let quad_report = d.finish(
        Expected::Value(corrected),
        quad,
        None,
        None,
        Verdict::from_bool(rel_diff(quad, corrected) <= det_tol),
    );

    let d = base("monte-carlo").input("samples", ctx.opts.samples).input("tol.z", z_max);
    let est = so_integral_mc(n, &lam, &ctx.plan())?;
    let mc_report = d.input("resamples", est.resamples).z_test(corrected, est.mean, est.stderr, z_max);

    // the printed variant, for comparison only
    let d = base("as-printed").input("samples", ctx.opts.samples);
    let printed = so_integral_closed_form(n, &lam, SoVariant::AsPrinted)?;
    let z = z_score(est.mean, printed, est.stderr);
    let printed_report = d.finish(Expected::Value(printed), est.mean, Some(est.stderr), Some(z), Verdict::Inconclusive);

    Ok(vec![quad_report, mc_report, printed_report])
}

fn unitary(ctx: &Ctx) -> CliResult<Vec<VerificationReport>> {
    let n = ctx.n()?;
    let lambda = ctx.list(&ctx.opts.lambda, "lambda")?;
    let mu = ctx.list(&ctx.opts.mu, "mu")?;
    let z_max = ctx.tol("z");
    let base = |what: &str| {
        ctx.draft(&format!("verify-integral u {what}"))
            .input("n", n)
            .input("lambda", &lambda)
            .input("mu", &mu)
            .input("samples", ctx.opts.samples)
            .input("tol.z", z_max)
    };
    let d_re = base("monte-carlo");
    let closed = u_integral_closed_form(n, &lambda, &mu)?;
    let (re, im) = u_integral_mc(n, &lambda, &mu, &ctx.plan())?;
    let re_report = d_re.input("resamples", re.resamples).z_test(closed, re.mean, re.stderr, z_max);
    let im_report = base("imaginary-part").z_test(0.0, im.mean, im.stderr, z_max);
    Ok(vec![re_report, im_report])
}

fn sp(ctx: &Ctx) -> CliResult<Vec<VerificationReport>> {
    let n = ctx.n()?;
    let lambda = ctx.list(&ctx.opts.lambda, "lambda")?;
    let z_max = ctx.tol("z");
    let d = ctx
        .draft("verify-integral sp monte-carlo")
        .input("n", n)
        .input("lambda", &lambda)
        .input("samples", ctx.opts.samples)
        .input("tol.z", z_max);
    let closed = sp_integral_closed_form(n, &lambda)?;
    let est = sp_integral_mc(n, &lambda, &ctx.plan())?;
    Ok(vec![d.input("resamples", est.resamples).z_test(closed, est.mean, est.stderr, z_max)])
}
