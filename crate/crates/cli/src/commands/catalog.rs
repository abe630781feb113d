use berezin_core::catalog::{catalog, corrupted_fixture, dims, sweep, SymmetricPair};
use serde::Serialize;

use crate::context::Ctx;
use crate::error::{CliError, CliResult};
use crate::report::{Expected, VerificationReport};
use crate::Output;

#[derive(Serialize)]
struct Row<'a> {
    #[serde(flatten)]
    pair: &'a SymmetricPair,
    checked: usize,
    mismatches: usize,
}

pub fn run(ctx: &Ctx) -> CliResult<Output> {
    let max = ctx.opts.n.unwrap_or(8) as u64;
    if max == 0 {
        return Err(CliError::Usage("--n (sweep bound) must be at least 1".into()));
    }
    let mut pairs = catalog();
    if ctx.opts.corrupted_fixture {
        pairs.push(corrupted_fixture());
    }
    let mut rows = Vec::new();
    let mut reports: Vec<VerificationReport> = Vec::new();
    for pair in &pairs {
        let d = ctx
            .draft("catalog")
            .input("index", pair.index)
            .input("name", pair.name)
            .input("sweep_max", max);
        let params = sweep(pair.params, max);
        let mut bad = 0usize;
        for &pr in &params {
            let (re, ce) = dims(pair, pr)?;
            if re != ce {
                bad += 1;
            }
        }
        rows.push(Row {
            pair,
            checked: params.len(),
            mismatches: bad,
        });
        reports.push(d.input("checked", params.len()).check(Expected::Value(0.0), bad as f64));
    }
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.pair.index.to_string(),
                r.pair.g_family.to_string(),
                r.pair.g_circ_family.to_string(),
                r.pair.dim_real_formula.to_string(),
                r.pair.dim_cplx_formula.to_string(),
                r.checked.to_string(),
                r.mismatches.to_string(),
            ]
        })
        .collect();
    ctx.dump(
        &rows,
        None,
        &["index", "g", "g_circ", "dim_real", "dim_cplx", "checked", "mismatches"],
        &csv_rows,
    )?;
    Ok(Output::Reports(reports))
}
