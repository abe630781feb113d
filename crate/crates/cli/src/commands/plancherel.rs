use berezin_core::plancherel::{
    block_values_o, continuous_weight_o, degeneration_u, rank1_plancherel_probe, surviving_blocks, BlockIndex,
    PlancherelParams, Rank1Config,
};
use serde::Serialize;

use crate::context::Ctx;
use crate::error::{CliError, CliResult};
use crate::report::{num, Expected, Verdict, VerificationReport};
use crate::{Family, Output, PlancherelCmd};

pub fn run(ctx: &Ctx, which: PlancherelCmd, family: Family) -> CliResult<Output> {
    let reports = match which {
        PlancherelCmd::Blocks => vec![blocks(ctx)?],
        PlancherelCmd::Weight => vec![weight(ctx)?],
        PlancherelCmd::Degeneration => degeneration(ctx, family)?,
        PlancherelCmd::Rank1 => rank1(ctx)?,
    };
    Ok(Output::Reports(reports))
}

fn params(ctx: &Ctx) -> CliResult<PlancherelParams> {
    let mut pp = PlancherelParams::new(ctx.p()?, ctx.q()?, ctx.alpha()?)?;
    if let Some(h) = ctx.opts.h {
        pp = pp.with_h(h);
    }
    if ctx.opts.weak {
        pp = pp.weak();
    }
    Ok(pp)
}

const MAX_BOX: f64 = 1e7;

/// Block count by exhaustive search over the box u ∈ {0..m}^r.
fn brute_force_block_count(pp: &PlancherelParams) -> CliResult<usize> {
    let budget = pp.h - pp.alpha;
    let m = budget.ceil().max(0.0) as u64 + 1;
    if ((m + 1) as f64).powi(pp.p as i32) > MAX_BOX {
        return Err(CliError::Usage(format!("h - alpha = {budget} gives too many candidate blocks")));
    }
    let mut count = 1; // r = 0
    for r in 1..=pp.p {
        let mut u = vec![0u64; r];
        loop {
            let wr = u.iter().sum::<u64>() as f64 + r as f64 / 2.0;
            if (pp.strict && wr < budget) || (!pp.strict && wr <= budget) {
                count += 1;
            }
            // odometer
            let mut k = 0;
            while k < r && u[k] == m {
                u[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
            u[k] += 1;
        }
    }
    Ok(count)
}

#[derive(Serialize)]
struct BlockRow<'a> {
    r: usize,
    u: &'a [u64],
    w: &'a [f64],
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn blocks(ctx: &Ctx) -> CliResult<VerificationReport> {
    let pp = params(ctx)?;
    let d = ctx
        .draft("plancherel blocks")
        .input("p", pp.p)
        .input("q", pp.q)
        .input("alpha", pp.alpha)
        .input("h", pp.h)
        .input("strict", pp.strict);
    let list: Vec<BlockIndex> = surviving_blocks(&pp);
    let rows: Vec<BlockRow> = list.iter().map(|b| BlockRow { r: b.r, u: &b.u, w: &b.w }).collect();
    let csv_rows: Vec<Vec<String>> = list
        .iter()
        .map(|b| vec![b.r.to_string(), join(&b.u), join(&b.w)])
        .collect();
    ctx.dump(&rows, None, &["r", "u", "w"], &csv_rows)?;
    let expected = brute_force_block_count(&pp)?;
    Ok(d.check(Expected::Value(expected as f64), list.len() as f64))
}

fn weight(ctx: &Ctx) -> CliResult<VerificationReport> {
    let pp = params(ctx)?;
    let s = ctx.list(&ctx.opts.s, "s")?;
    if s.is_empty() || s.len() % pp.p != 0 {
        return Err(CliError::Usage(format!(
            "--s needs a positive multiple of p = {} values, got {}",
            pp.p,
            s.len()
        )));
    }
    let d = ctx
        .draft("plancherel weight")
        .input("p", pp.p)
        .input("q", pp.q)
        .input("alpha", pp.alpha)
        .input("s", &s);
    let mut rows = Vec::new();
    let mut table = Vec::new();
    let mut min = f64::INFINITY;
    for point in s.chunks(pp.p) {
        let w = continuous_weight_o(&pp, point)?;
        min = min.min(w);
        let mut row: Vec<String> = point.iter().copied().map(num).collect();
        row.push(num(w));
        rows.push(row);
        table.push(serde_json::json!({ "s": point, "weight": w }));
    }
    let mut header: Vec<String> = (1..=pp.p).map(|k| format!("s{k}")).collect();
    header.push("weight".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    ctx.dump(&table, None, &header, &rows)?;
    Ok(d.check(Expected::at_least(0.0), min))
}

fn degeneration(ctx: &Ctx, family: Family) -> CliResult<Vec<VerificationReport>> {
    let (p, q, alpha) = (ctx.p()?, ctx.q()?, ctx.alpha()?);
    let label = match family {
        Family::O => "o",
        Family::U => "u",
    };
    let base = |what: &str| {
        ctx.draft(&format!("plancherel degeneration {what}"))
            .input("family", label)
            .input("p", p)
            .input("q", q)
            .input("alpha", alpha)
    };
    let (lower, top, n_blocks) = match family {
        Family::O => {
            let pp = PlancherelParams::new(p, q, alpha)?;
            let vals = block_values_o(&pp)?;
            let rows: Vec<Vec<String>> = vals
                .iter()
                .map(|v| {
                    vec![
                        v.block.r.to_string(),
                        join(&v.block.u),
                        v.v_order.to_string(),
                        num(v.v_value),
                    ]
                })
                .collect();
            ctx.dump(&vals, None, &["r", "u", "v_order", "v_value"], &rows)?;
            // zero-flagged: negative order; finite nonzero: order 0
            let lower = vals.iter().filter(|v| v.block.r < p && v.v_order >= 0).count();
            let top = vals.iter().filter(|v| v.block.r == p && v.v_order == 0).count();
            (lower, top, vals.len())
        }
        Family::U => {
            let dg = degeneration_u(p, q, alpha)?;
            (
                usize::from(!dg.lower_blocks_vanish),
                usize::from(dg.top_block_survives),
                dg.n_blocks,
            )
        }
    };
    let lower_report = base("lower-blocks-nonzero")
        .input("blocks", n_blocks)
        .check(Expected::Value(0.0), lower as f64);
    let top_report = base("top-blocks-finite")
        .input("blocks", n_blocks)
        .check(Expected::at_least(1.0), top as f64);
    Ok(vec![lower_report, top_report])
}

fn rank1(ctx: &Ctx) -> CliResult<Vec<VerificationReport>> {
    if let Some(p) = ctx.opts.p {
        if p != 1 {
            return Err(CliError::Usage(format!("the rank-one probe needs p = 1, got {p}")));
        }
    }
    let (q, alpha) = (ctx.q()?, ctx.alpha()?);
    let t = ctx.opts.t.clone().unwrap_or_else(|| vec![0.5, 0.75, 1.0, 1.25, 1.5]);
    let mut cfg = Rank1Config::new(q, alpha, t, ctx.seed());
    if let Some(n) = ctx.opts.count {
        cfg.n_mc = n;
    }
    let tol = ctx.tol("rank1");
    let start = std::time::Instant::now();
    let rep = rank1_plancherel_probe(&cfg)?;
    let reports = rep
        .rows
        .iter()
        .map(|row| {
            let z = crate::report::z_score(row.observed, row.expected, row.oracle_stderr);
            ctx.draft("plancherel rank1")
                .since(start)
                .input("p", 1)
                .input("q", q)
                .input("alpha", alpha)
                .input("t", row.t)
                .input("n_mc", cfg.n_mc)
                .input("n_quad", cfg.n_quad)
                .input("s_max", cfg.s_max)
                .input("a_const", rep.a_const)
                .input("tol.rank1", tol)
                .finish(
                    Expected::Value(row.expected),
                    row.observed,
                    Some(row.oracle_stderr),
                    Some(z),
                    Verdict::from_bool(row.rel_residual <= tol),
                )
        })
        .collect();
    Ok(reports)
}
