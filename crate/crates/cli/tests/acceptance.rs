//! Acceptance campaign: one line per criterion. Non-gating criteria are
//! reported but do not affect the exit status.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use berezin_core::ball::{BallPoint, PseudoOrthogonalElement, DEFAULT_RANK_TOL};
use berezin_core::berezin::*;
use berezin_core::catalog::{catalog, dims_match, sweep};
use berezin_core::compact::{
    corner_det_multiplicativity_residual, equivariance_residual, CompactGroupElement, Field, FieldMatrix,
};
use berezin_core::integrals::*;
use berezin_core::mc::{block_rng, sample_values, MCEstimate, SamplingPlan};
use berezin_core::plancherel::*;
use berezin_core::stats::{ks_one_sample, pearson, symmetric_beta_cdf};
use berezin_core::Error;

/// Fixed before the first run; every criterion derives its streams from it.
const SEED: u64 = 20261015;

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    gating: bool,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(est: &MCEstimate, target: f64, k: f64) -> bool {
    (est.mean - target).abs() <= k * est.stderr
}

fn fields() -> [Field; 3] {
    [Field::Real, Field::Complex, Field::Quaternion]
}

fn upsilon_calculus() -> Outcome {
    const PER: usize = 100;
    let (mut worst, mut skipped) = ([0.0f64; 4], 0usize);
    let mut counts = [0usize; 4];
    let mut i = 0u64;
    while counts.iter().any(|&c| c < PER) {
        i += 1;
        let mut rng = block_rng(SEED, i);
        let field = fields()[(i % 3) as usize];
        let n = 3 + (i % 4) as usize; // 3..=6
        let g = CompactGroupElement::haar_sample(field, n, &mut rng);
        let m = 1 + (i as usize / 3) % (n - 2);
        let k = 1 + (i as usize / 7) % (n - 1 - m);
        let results: [Result<f64, Error>; 4] = [
            // composition Υ^k ∘ Υ^m = Υ^{k+m}
            g.upsilon(m)
                .and_then(|u| u.upsilon(k))
                .and_then(|a| Ok(a.matrix().sub_max_abs(g.upsilon(k + m)?.matrix()))),
            // Cayley corner: lower-right block of C(g) equals C(Υ^{n−p}(g))
            g.cayley().and_then(|s| {
                let small = g.upsilon(m)?.cayley()?;
                Ok(s.lower_right(n - m).sub_max_abs(&small))
            }),
            {
                let a = CompactGroupElement::haar_sample(field, n - m, &mut rng);
                let b = CompactGroupElement::haar_sample(field, n - m, &mut rng);
                equivariance_residual(&g, &a, &b, m)
            },
            corner_det_multiplicativity_residual(&g, m, n),
        ];
        for (j, r) in results.into_iter().enumerate() {
            match r {
                Ok(v) => {
                    worst[j] = worst[j].max(v);
                    counts[j] += 1;
                }
                Err(Error::SingularUpsilon { .. } | Error::SingularCayley { .. }) => skipped += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    let detail = format!(
        "max residuals composition {:.1e}, cayley {:.1e}, equivariance {:.1e}, multiplicativity {:.1e} over >= {PER} samples each (n = 3..6, R/C/H), {skipped} singular draws",
        worst[0], worst[1], worst[2], worst[3]
    );
    ensure(worst.iter().all(|&w| w < 1e-10), || detail.clone())?;
    Ok(detail)
}

fn haar_pushforward() -> Outcome {
    const N: usize = 100_000;
    let mut ps = Vec::new();
    for n in 2..=5usize {
        let plan = SamplingPlan::new(SEED + n as u64, N);
        let (xs, _) = sample_values(&plan, |rng| {
            let g = CompactGroupElement::haar_sample(Field::Real, n, rng);
            let FieldMatrix::Real(m) = g.matrix() else { unreachable!() };
            Ok(Some(m[(0, 0)]))
        })
        .map_err(|e| e.to_string())?;
        let ks = ks_one_sample(&xs, symmetric_beta_cdf((n as f64 - 3.0) / 2.0));
        ensure(ks.p_value > 0.01, || format!("[g]_1 on SO({n}): KS p = {}", ks.p_value))?;
        ps.push(ks.p_value);
    }
    let bound = 3.0 / (N as f64).sqrt();
    let mut worst_corr = 0.0f64;
    for n in 3..=5usize {
        let mut cols = vec![Vec::with_capacity(N); n - 1];
        let mut rng = block_rng(SEED + 20, n as u64);
        while cols[0].len() < N {
            let g = CompactGroupElement::haar_sample(Field::Real, n, &mut rng);
            if let Ok(x) = g.cube_coords() {
                for (c, v) in cols.iter_mut().zip(x) {
                    c.push(v);
                }
            }
        }
        for (j, c) in cols.iter().enumerate() {
            let ks = ks_one_sample(c, symmetric_beta_cdf((j as f64 - 1.0) / 2.0));
            ensure(ks.p_value > 0.01, || format!("n={n} x_{}: KS p = {}", j + 1, ks.p_value))?;
        }
        for a in 0..n - 1 {
            for b in a + 1..n - 1 {
                let c = pearson(&cols[a], &cols[b]).abs();
                worst_corr = worst_corr.max(c);
                ensure(c < bound, || format!("n={n} corr(x_{}, x_{}) = {c}", a + 1, b + 1))?;
            }
        }
    }
    Ok(format!(
        "min KS p over n=2..5: {:.3}; max |corr| {worst_corr:.4} < {bound:.4}",
        ps.iter().copied().fold(1.0, f64::min)
    ))
}

fn integral_identity_so() -> Outcome {
    let cases: [(usize, &[&[f64]]); 3] = [
        (2, &[&[1.0], &[0.5], &[-0.2], &[2.0], &[0.25]]),
        (3, &[&[1.0, 0.0], &[0.5, 0.3], &[-0.2, 0.1], &[1.5, -0.1], &[0.3, 0.6]]),
        (4, &[&[0.5, 0.25, 0.1], &[1.0, 0.0, 0.0], &[-0.3, 0.2, 0.0], &[0.2, -0.2, 0.1], &[1.0, 0.5, 0.25]]),
    ];
    let mut worst_z = 0.0f64;
    let mut worst_rel = 0.0f64;
    let mut k = 0u64;
    for (n, lams) in cases {
        for lam in lams {
            k += 1;
            let quad = so_integral_quadrature(n, lam).map_err(|e| e.to_string())?;
            let closed = so_integral_closed_form(n, lam, SoVariant::DEFAULT).map_err(|e| e.to_string())?;
            let rel = (quad / closed - 1.0).abs();
            worst_rel = worst_rel.max(rel);
            ensure(rel < 1e-8, || format!("n={n} {lam:?}: quadrature {quad} vs closed {closed}"))?;
            let mc = so_integral_mc(n, lam, &SamplingPlan::new(SEED + k, 200_000)).map_err(|e| e.to_string())?;
            let z = (mc.mean - quad) / mc.stderr;
            worst_z = worst_z.max(z.abs());
            ensure(z.abs() <= 3.0, || format!("n={n} {lam:?}: MC {} ± {} vs {quad}", mc.mean, mc.stderr))?;
        }
    }
    let corrected = so_integral_closed_form(2, &[1.0, 0.0], SoVariant::TwoPowerCorrected).map_err(|e| e.to_string())?;
    let printed = so_integral_closed_form(2, &[1.0, 0.0], SoVariant::AsPrinted).map_err(|e| e.to_string())?;
    let mc = so_integral_mc(2, &[1.0, 0.0], &SamplingPlan::new(SEED, 200_000)).map_err(|e| e.to_string())?;
    ensure((corrected - 1.0).abs() < 1e-12 && (printed - 0.5).abs() < 1e-12, || {
        format!("n=2 (1,0): corrected {corrected}, printed {printed}")
    })?;
    ensure(within(&mc, 1.0, 3.0) && !within(&mc, 0.5, 3.0), || format!("n=2 (1,0) MC {mc:?}"))?;
    Ok(format!(
        "15 exponent vectors: max |z| {worst_z:.2}, max quadrature/closed rel {worst_rel:.1e}; n=2 (1,0): MC {:.4} ± {:.4} selects 1 over 1/2",
        mc.mean, mc.stderr
    ))
}

fn integral_identities_u_sp() -> Outcome {
    let e = |r: Result<f64, Error>| r.map_err(|e| e.to_string());
    let u11 = e(u_integral_closed_form(1, &[1.0], &[1.0]))?;
    let u10 = e(u_integral_closed_form(1, &[1.0], &[0.0]))?;
    let sp2 = e(sp_integral_closed_form(1, &[2.0]))?;
    ensure((u11 - 2.0).abs() < 1e-12 && (u10 - 1.0).abs() < 1e-12 && (sp2 - 2.0).abs() < 1e-12, || {
        format!("exact values: U(1) {u11}, {u10}; Sp(1) {sp2}")
    })?;
    let mut worst = 0.0f64;
    for (i, (lam, mu)) in [([1.0, 0.0], [1.0, 0.0]), ([0.7, 0.2], [-0.3, 0.4]), ([0.5, 0.5], [0.5, 0.0])]
        .iter()
        .enumerate()
    {
        let closed = e(u_integral_closed_form(2, lam, mu))?;
        let (re, im) = u_integral_mc(2, lam, mu, &SamplingPlan::new(SEED + 30 + i as u64, 200_000))
            .map_err(|e| e.to_string())?;
        let z = (re.mean - closed) / re.stderr;
        worst = worst.max(z.abs());
        ensure(z.abs() <= 3.0, || format!("U(2) {lam:?},{mu:?}: {re:?} vs {closed}"))?;
        ensure(im.mean.abs() <= 3.0 * im.stderr.max(1e-15), || format!("U(2) imaginary part {im:?}"))?;
    }
    for (i, (n, lam)) in [(1usize, vec![2.0]), (1, vec![1.0]), (2, vec![1.0, 0.0]), (2, vec![0.5, 0.5])]
        .iter()
        .enumerate()
    {
        let closed = e(sp_integral_closed_form(*n, lam))?;
        let mc = sp_integral_mc(*n, lam, &SamplingPlan::new(SEED + 40 + i as u64, 200_000)).map_err(|e| e.to_string())?;
        let z = (mc.mean - closed) / mc.stderr;
        worst = worst.max(z.abs());
        ensure(z.abs() <= 3.0, || format!("Sp({n}) {lam:?}: {mc:?} vs {closed}"))?;
    }
    Ok(format!("exact U(1) = 2, 1 and Sp(1) = 2; 7 MC cases max |z| {worst:.2}"))
}

fn berezin_positive_definiteness() -> Outcome {
    let mut worst = f64::INFINITY;
    for (p, q) in [(1usize, 2usize), (2, 2), (2, 3), (2, 4)] {
        let alphas: &[f64] = if p == 1 { &[0.0, 0.3, 1.0, 2.7] } else { &[0.0, 1.0, 1.5, 2.0, 3.3] };
        for &alpha in alphas {
            for c in 0..200u64 {
                let mut rng = block_rng(SEED + 50, c);
                let pts: Vec<BallPoint> = (0..40).map(|_| BallPoint::random(p, q, 0.99, &mut rng)).collect();
                let rep = gram_spectrum(&pts, alpha, SEED).map_err(|e| e.to_string())?;
                worst = worst.min(rep.relative_min());
                ensure(rep.min_eig >= -1e-8 * rep.max_eig, || format!("({p},{q}) alpha={alpha}: {rep:?}"))?;
            }
        }
    }
    let mut found = Vec::new();
    for s in 1..=5u64 {
        let w = pd_witness_search(2, 3, 0.5, 1000, SEED + s).map_err(|e| e.to_string())?;
        let w = w.ok_or_else(|| format!("no witness at alpha = 0.5, seed {}", SEED + s))?;
        found.push(w.config_index);
    }
    let none = pd_witness_search(2, 3, 1.0, 1000, SEED).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || format!("spurious witness at alpha = 1: {none:?}"))?;
    Ok(format!(
        "min relative eigenvalue {worst:.1e} on admissible alpha; witnesses at alpha=0.5 for 5/5 seeds (config indices {found:?}); none at alpha=1"
    ))
}

fn covariance_and_domination() -> Outcome {
    let mut lines = Vec::new();
    for alpha in [0.7, 1.3, 2.5] {
        let table = adjudicate_covariance(alpha, 200, SEED).map_err(|e| e.to_string())?;
        let winners: Vec<_> = table.iter().filter(|(_, r)| *r < 1e-12).collect();
        ensure(winners.len() == 1, || format!("alpha={alpha}: {} conventions below 1e-12", winners.len()))?;
        ensure(winners[0].0 == CovarianceConvention::CORRECTED, || format!("winner {}", winners[0].0.label()))?;
        lines.push(format!("{:.1e}", winners[0].1));
    }
    let mut worst = 0.0f64;
    for i in 0..1000u64 {
        let mut rng = block_rng(SEED + 60, i);
        let g = PseudoOrthogonalElement::random(2, 3, 1.5, &mut rng);
        let z = BallPoint::random(2, 3, 0.9, &mut rng);
        let u = BallPoint::random(2, 3, 0.9, &mut rng);
        worst = worst.max(covariance_residual(&g, &z, &u, 1.7, CovarianceConvention::CORRECTED).map_err(|e| e.to_string())?);
    }
    ensure(worst < 1e-10, || format!("(2,3) residual {worst}"))?;
    let mut dom = 0.0f64;
    for i in 0..10_000u64 {
        let mut rng = block_rng(SEED + 70, i);
        let c = if i % 2 == 0 { 1.0 - 1e-3 } else { (i as f64 + 0.5) / 1e4 };
        let (z, u) = if i % 4 < 2 {
            (BallPoint::random(2, 3, 0.999, &mut rng), BallPoint::random(2, 3, 0.999, &mut rng))
        } else {
            let r = (i as usize / 4) % 3;
            let a = boundary_sample(2, 3, r, &mut rng).map_err(|e| e.to_string())?.z;
            (a, boundary_sample(2, 3, r, &mut rng).map_err(|e| e.to_string())?.z)
        };
        let alpha = 0.5 + (i % 7) as f64 * 0.5;
        dom = dom.max(domination_residual(&z, &u, c, alpha).map_err(|e| e.to_string())?);
    }
    ensure(dom == 0.0, || format!("domination residual {dom}"))?;
    Ok(format!(
        "one convention (positive exponent, u-cocycle) at alpha 0.7/1.3/2.5, residuals {}; (2,3) residual {worst:.1e}; domination exactly 0 on 1e4 samples",
        lines.join("/")
    ))
}

fn boundary_restriction() -> Outcome {
    let mut acc = Vec::new();
    for (p, q, r) in [(2usize, 4usize, 0usize), (2, 4, 1), (3, 5, 2)] {
        let a = boundary_rank_accuracy(p, q, r, 10_000, SEED, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
        ensure(a >= 0.99, || format!("rank accuracy ({p},{q},{r}) = {a}"))?;
        acc.push(a);
    }
    let plan = SamplingPlan::new(SEED, 100_000);
    let quad = restriction_quadrature(1, 2, 0, 0.4).map_err(|e| e.to_string())?;
    let a = restriction_probe(1, 2, 0, 0.4, &plan).map_err(|e| e.to_string())?;
    let za = (a.estimate.mean - quad) / a.estimate.stderr;
    let closed = restriction_closed_form(2, 4, 1, 1.0).map_err(|e| e.to_string())?;
    let b = restriction_probe(2, 4, 1, 1.0, &plan).map_err(|e| e.to_string())?;
    let zb = (b.estimate.mean - closed) / b.estimate.stderr;
    let mut growth = Vec::new();
    for (p, q, r) in [(1usize, 2usize, 0usize), (2, 4, 1)] {
        let alpha = restriction_threshold(p, q, r, 0, 0.0) + 0.5;
        let rm = restriction_running_max(p, q, r, alpha, SEED, &[10_000, 100_000, 1_000_000]).map_err(|e| e.to_string())?;
        let maxima: Vec<f64> = rm.iter().map(|m| m.running_max).collect();
        // maxima of nested prefixes never decrease; growth means the last exceeds the first
        let grows = maxima.windows(2).all(|w| w[1] >= w[0]) && maxima[2] > maxima[0];
        ensure(grows, || format!("({p},{q},{r}) alpha={alpha}: maxima {maxima:?}"))?;
        let last = rm[2];
        let share = last.running_max / (last.running_mean * last.n_samples as f64);
        growth.push(format!(
            "({p},{q},{r}) {:.1e}->{:.1e}->{:.1e}, largest draw {:.0}% of the sum",
            maxima[0],
            maxima[1],
            maxima[2],
            100.0 * share
        ));
    }
    let detail = format!(
        "rank accuracy {acc:?}; (1,2,0,0.4) z = {za:.2} vs quadrature {quad:.6}; (2,4,1,1) z = {zb:.2} vs closed {closed}; running max {}",
        growth.join(", ")
    );
    ensure(za.abs() <= 3.0 && zb.abs() <= 3.0, || detail.clone())?;
    Ok(detail)
}

fn plancherel_structure() -> Outcome {
    let mut checked = 0usize;
    for p in 1..=3usize {
        for q in p..=6usize {
            let h = default_h(p, q);
            let alphas: Vec<f64> = (-6..=10).map(|k| k as f64 * 0.5).chain([h, h + 1e-9]).collect();
            for alpha in alphas {
                let pp = PlancherelParams::new(p, q, alpha).map_err(|e| e.to_string())?;
                let blocks = surviving_blocks(&pp);
                ensure(blocks[0].r == 0 && blocks.iter().skip(1).all(|b| b.r >= 1 && b.w_last() < h - alpha), || {
                    format!("({p},{q},{alpha}): {blocks:?}")
                })?;
                if alpha >= h {
                    ensure(blocks.len() == 1, || format!("({p},{q},{alpha}) >= h: {} blocks", blocks.len()))?;
                }
                checked += 1;
            }
        }
    }
    for q in 3..=6usize {
        for alpha in [-1.0, -2.0] {
            let d = degeneration_o(&PlancherelParams::new(2, q, alpha).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            ensure(d.holds(), || format!("(2,{q}) alpha={alpha}: {d:?}"))?;
        }
    }
    let grid: Vec<Vec<f64>> = vec![vec![0.3, 1.7], vec![0.9, 2.6], vec![4.1, 0.5], vec![2.2, 3.3]];
    let mut spread = 0.0f64;
    for (q, alpha) in [(3usize, 2.2), (4, 1.4), (5, 2.8)] {
        let ratios = r0_ratios(&PlancherelParams::new(2, q, alpha).map_err(|e| e.to_string())?, &grid)
            .map_err(|e| e.to_string())?;
        let s = ratios.iter().map(|r| (r / ratios[0] - 1.0).abs()).fold(0.0, f64::max);
        spread = spread.max(s);
        ensure(s < 1e-8, || format!("(2,{q},{alpha}) ratios {ratios:?}"))?;
    }
    Ok(format!(
        "{checked} (p,q,alpha) sweeps finite with alpha >= h => r=0 only; degeneration at alpha=-1,-2 for p=2, q=3..6; r=0 ratio spread {spread:.1e}"
    ))
}

fn rank1_probe() -> Outcome {
    let t: Vec<f64> = (0..=10).map(|k| 0.5 + 0.1 * k as f64).collect();
    let rep = rank1_plancherel_probe(&Rank1Config::new(3, 4.0, t, SEED)).map_err(|e| e.to_string())?;
    let detail = format!("max relative residual {:.1e} on t in [0.5,1.5]", rep.max_residual);
    ensure(rep.max_residual < 5e-2, || detail.clone())?;
    Ok(detail)
}

fn hermitization_catalog() -> Outcome {
    let rows = catalog();
    ensure(rows.len() == 12, || format!("{} rows", rows.len()))?;
    let mut checks = 0;
    for row in &rows {
        for p in sweep(row.params, 8) {
            ensure(dims_match(row, p).map_err(|e| e.to_string())?, || format!("{} at {p:?}", row.g_family))?;
            checks += 1;
        }
    }
    Ok(format!("12/12 rows, {checks} parameter points"))
}

fn lab(args: &[&str], env: &[(&str, &str)]) -> Result<(i32, String), String> {
    let mut c = Command::new(env!("CARGO_BIN_EXE_berezin-lab"));
    c.args(args).env_remove("BEREZIN_SEED");
    for (k, v) in env {
        c.env(k, v);
    }
    let o = c.output().map_err(|e| e.to_string())?;
    let body = String::from_utf8_lossy(&o.stdout)
        .lines()
        .filter(|l| !l.contains("\"duration\""))
        .collect::<Vec<_>>()
        .join("\n");
    Ok((o.status.code().unwrap_or(-1), body))
}

fn harness_contracts() -> Outcome {
    let seed = SEED.to_string();
    let mc = ["verify-integral", "so", "--n", "4", "--lambda", "0.5,0.25,0.1", "--samples", "50000", "--seed", &seed];
    let (c1, a) = lab(&mc, &[])?;
    let (_, b) = lab(&mc, &[])?;
    ensure(c1 == 0 && a == b && !a.is_empty(), || "verify-integral reports differ between runs".into())?;
    // same reports whatever the worker count
    let (_, one) = lab(&mc, &[("RAYON_NUM_THREADS", "1")])?;
    let (_, many) = lab(&mc, &[("RAYON_NUM_THREADS", "7")])?;
    ensure(one == a && many == a, || "reports depend on the thread count".into())?;
    let plan = SamplingPlan::new(SEED, 30_000).with_block_size(1000);
    let lam = [0.3, -0.2, 0.0];
    let par = so_integral_mc(4, &lam, &plan).map_err(|e| e.to_string())?;
    let seq = so_integral_mc(4, &lam, &plan.sequential()).map_err(|e| e.to_string())?;
    ensure(par == seq, || format!("parallel {par:?} vs sequential {seq:?}"))?;

    let haar = ["haar", "sp", "--n", "2", "--count", "5", "--seed", &seed];
    ensure(lab(&haar, &[])? == lab(&haar, &[])?, || "haar reports differ".into())?;

    let codes = [
        (lab(&["catalog"], &[])?.0, 0),
        (lab(&["catalog", "--corrupted-fixture"], &[])?.0, 2),
        (lab(&["verify-integral", "so", "--n", "4", "--lambda=-2,0,0"], &[])?.0, 3),
        (lab(&["kernel", "witness", "--p", "2", "--q", "3", "--alpha", "1.0"], &[])?.0, 0),
        (lab(&["kernel", "covariance", "--p", "2", "--q", "3", "--alpha", "0"], &[])?.0, 2),
        (lab(&["plancherel", "degeneration", "--p", "2", "--q", "5", "--alpha=-1"], &[])?.0, 0),
        (lab(&["plancherel", "rank1", "--q", "3", "--alpha", "0.5"], &[])?.0, 3),
        (lab(&["haar", "so"], &[])?.0, 3),
        (lab(&["haar", "so", "--n", "2", "--tol", "nope=1"], &[])?.0, 3),
    ];
    ensure(codes.iter().all(|(got, want)| got == want), || format!("exit codes (got, want): {codes:?}"))?;
    Ok("byte-identical reports across runs and thread counts; parallel == sequential MC; 9 exit-code cases".into())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "upsilon-calculus", gating: true, budget: Duration::from_secs(10), run: upsilon_calculus },
        Criterion { name: "haar-pushforward", gating: true, budget: Duration::from_secs(60), run: haar_pushforward },
        Criterion { name: "integral-identity-so", gating: true, budget: Duration::from_secs(300), run: integral_identity_so },
        Criterion { name: "integral-identities-u-sp", gating: true, budget: Duration::from_secs(180), run: integral_identities_u_sp },
        Criterion { name: "berezin-positive-definiteness", gating: true, budget: Duration::from_secs(120), run: berezin_positive_definiteness },
        Criterion { name: "covariance-and-domination", gating: true, budget: Duration::from_secs(60), run: covariance_and_domination },
        Criterion { name: "boundary-restriction", gating: true, budget: Duration::from_secs(300), run: boundary_restriction },
        Criterion { name: "plancherel-structure", gating: true, budget: Duration::from_secs(30), run: plancherel_structure },
        Criterion { name: "rank1-plancherel-probe", gating: false, budget: Duration::from_secs(60), run: rank1_probe },
        Criterion { name: "hermitization-catalog", gating: true, budget: Duration::from_secs(1), run: hermitization_catalog },
        Criterion { name: "harness-contracts", gating: true, budget: Duration::from_secs(120), run: harness_contracts },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; runtime {took:.1?} over budget {:?}", c.budget)),
            Err(d) => (false, d),
        };
        let tag = match (ok, c.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (non-gating)",
        };
        println!("[{tag}] {} ({took:.2?}): {detail}", c.name);
        if !ok && c.gating {
            failed += 1;
        }
    }
    println!("acceptance: {} criteria, {failed} gating failures", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
