use berezin_core::ledger::{formula_ledger, render_markdown};

use crate::context::Ctx;
use crate::error::CliResult;
use crate::report::Format;
use crate::Output;

/// Markdown by default; `--format json|csv` gives machine-readable entries.
pub fn run(ctx: &Ctx) -> CliResult<Output> {
    let entries = formula_ledger()?;
    let doc = match ctx.format() {
        None => render_markdown(&entries),
        Some(Format::Json) => serde_json::to_string_pretty(&entries)? + "\n",
        Some(Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for e in &entries {
                w.serialize(e)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8")
        }
    };
    Ok(Output::Document(doc))
}
