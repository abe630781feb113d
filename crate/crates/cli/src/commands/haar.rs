use berezin_core::compact::{CompactGroupElement, Field, FieldMatrix};
use berezin_core::mc::block_rng;
use serde::Serialize;

use crate::context::Ctx;
use crate::error::{CliError, CliResult};
use crate::report::{num, Expected};
use crate::{Group, Output};

/// Version tag of the sample file layout.
pub const SAMPLE_FORMAT: &str = "berezin-lab-haar/1";

/// Sample file: a header plus row-major entries, each `[re, im]`.
#[derive(Debug, Serialize)]
struct SampleFile {
    format: &'static str,
    group: &'static str,
    /// `real` for SO(n), `complex` for U(n), `complex-2n` for Sp(n).
    realization: &'static str,
    n: usize,
    rows: usize,
    seed: u64,
    count: usize,
    samples: Vec<Vec<[f64; 2]>>,
}

fn field(g: Group) -> Field {
    match g {
        Group::So => Field::Real,
        Group::U => Field::Complex,
        Group::Sp => Field::Quaternion,
    }
}

fn realization(f: Field) -> &'static str {
    match f {
        Field::Real => "real",
        Field::Complex => "complex",
        Field::Quaternion => "complex-2n",
    }
}

fn entries(m: &FieldMatrix) -> Vec<[f64; 2]> {
    let c = m.to_complex();
    // row-major
    (0..c.nrows())
        .flat_map(|i| (0..c.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| [c[(i, j)].re, c[(i, j)].im])
        .collect()
}

pub fn run(ctx: &Ctx, group: Group) -> CliResult<Output> {
    let n = ctx.n()?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let count = ctx.opts.count.unwrap_or(10);
    let f = field(group);
    let tol = ctx.tol("unitarity");
    let draft = ctx
        .draft(&format!("haar {}", f.group_name()))
        .input("n", n)
        .input("count", count)
        .input("tol.unitarity", tol);

    // sample i uses stream i
    let samples: Vec<CompactGroupElement> = (0..count)
        .map(|i| CompactGroupElement::haar_sample(f, n, &mut block_rng(ctx.seed(), i as u64)))
        .collect();
    let worst = samples.iter().map(|g| g.unitarity_residual()).fold(0.0, f64::max);

    let file = SampleFile {
        format: SAMPLE_FORMAT,
        group: f.group_name(),
        realization: realization(f),
        n,
        rows: n * f.width(),
        seed: ctx.seed(),
        count,
        samples: samples.iter().map(|g| entries(g.matrix())).collect(),
    };
    let preamble = format!(
        "{SAMPLE_FORMAT} group={} realization={} n={n} rows={} seed={} count={count}",
        file.group, file.realization, file.rows, file.seed
    );
    let rows: Vec<Vec<String>> = file
        .samples
        .iter()
        .enumerate()
        .flat_map(|(k, s)| {
            let m = file.rows;
            s.iter().enumerate().map(move |(idx, e)| {
                vec![
                    k.to_string(),
                    (idx / m).to_string(),
                    (idx % m).to_string(),
                    num(e[0]),
                    num(e[1]),
                ]
            })
        })
        .collect();
    ctx.dump(&file, Some(&preamble), &["sample", "row", "col", "re", "im"], &rows)?;

    Ok(Output::Reports(vec![draft.check(Expected::between(0.0, tol), worst)]))
}
