use berezin_core::ball::DEFAULT_RANK_TOL;
use berezin_core::berezin::{
    boundary_rank_accuracy, restriction_closed_form, restriction_probe, restriction_quadrature,
    restriction_running_max, restriction_threshold,
};

use super::rel_diff;
use crate::context::Ctx;
use crate::error::{CliError, CliResult};
use crate::report::{Expected, Verdict, VerificationReport};
use crate::Output;

pub fn run(ctx: &Ctx) -> CliResult<Output> {
    let (p, q, r, alpha) = (ctx.p()?, ctx.q()?, ctx.r()?, ctx.alpha()?);
    if !(p >= 1 && p < q && r < p) {
        return Err(CliError::Usage(format!("need 1 <= p < q and r < p, got p={p}, q={q}, r={r}")));
    }
    let threshold = restriction_threshold(p, q, r, 0, 0.0);
    let n = ctx.opts.samples;
    let base = |what: &str| {
        ctx.draft(&format!("boundary-probe {what}"))
            .input("p", p)
            .input("q", q)
            .input("r", r)
            .input("alpha", alpha)
            .input("threshold", threshold)
    };
    let mut reports = Vec::new();

    let rank_n = ctx.opts.count.unwrap_or(5_000);
    let min_acc = ctx.tol("rank");
    let d = base("rank").input("count", rank_n).input("tol.rank", min_acc);
    let acc = boundary_rank_accuracy(p, q, r, rank_n, ctx.seed(), DEFAULT_RANK_TOL)?;
    reports.push(d.check(Expected::between(min_acc, 1.0), acc));

    if alpha < threshold {
        reports.extend(below(ctx, p, q, r, alpha, &base)?);
    } else {
        // heavy tails: running maxima on one nested stream, no verdict
        let checkpoints: Vec<usize> = [n / 100, n / 10, n].into_iter().filter(|&c| c > 0).collect();
        let start = std::time::Instant::now();
        for rm in restriction_running_max(p, q, r, alpha, ctx.seed(), &checkpoints)? {
            let d = base("above-threshold").since(start).input("samples", rm.n_samples).input("running_mean", rm.running_mean);
            reports.push(d.finish(Expected::unbounded(), rm.running_max, None, None, Verdict::Inconclusive));
        }
    }
    Ok(Output::Reports(reports))
}

fn below(
    ctx: &Ctx,
    p: usize,
    q: usize,
    r: usize,
    alpha: f64,
    base: &dyn Fn(&str) -> crate::report::Draft,
) -> CliResult<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let closed = restriction_closed_form(p, q, r, alpha)?;
    let det_tol = ctx.tol("deterministic");
    // the one-dimensional quadrature exists when a single corner determinant enters
    let oracle = if p - r == 1 {
        let d = base("quadrature").input("tol.deterministic", det_tol);
        let quad = restriction_quadrature(p, q, r, alpha)?;
        let ok = rel_diff(quad, closed) <= det_tol;
        reports.push(d.finish(Expected::Value(closed), quad, None, None, Verdict::from_bool(ok)));
        quad
    } else {
        closed
    };
    let z_max = ctx.tol("z");
    let d = base("monte-carlo")
        .input("samples", ctx.opts.samples)
        .input("oracle", if p - r == 1 { "quadrature" } else { "closed-form" })
        // the second moment is the same integral at 2α
        .input("finite_variance", 2.0 * alpha < restriction_threshold(p, q, r, 0, 0.0))
        .input("tol.z", z_max);
    let res = restriction_probe(p, q, r, alpha, &ctx.plan())?;
    reports.push(
        d.input("max_sample", res.max_sample)
            .z_test(oracle, res.estimate.mean, res.estimate.stderr, z_max),
    );
    Ok(reports)
}
