//! Berezin kernels K_α(z,u) = det(1 − zuᵗ)^{−α} on B_{p,q}: Gram spectra,
//! witnesses of indefiniteness off the Wallach set, the covariance and
//! domination identities, and restriction integrals over boundary orbits.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{cocycle, moebius_act, orbit_rank, BallPoint, PseudoOrthogonalElement};
use crate::compact::{haar_orthogonal, haar_special_orthogonal};
use crate::error::{Error, Result};
use crate::integrals::{so_integral_closed_form, so_integral_quadrature, SoVariant, DET_FLOOR};
use crate::mc::{block_rng, map_blocks, MCEstimate, Moments, SamplingPlan};

/// Tolerance for integer membership in the Wallach set.
pub const WALLACH_TOL: f64 = 1e-9;
/// A Gram matrix is a witness of indefiniteness when min_eig < −WITNESS_REL·max_eig.
pub const WITNESS_REL: f64 = 1e-6;
/// Per-point relative slack for classifying a Gram matrix as positive semidefinite.
pub const PASS_REL_PER_POINT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    pub p: usize,
    pub q: usize,
    pub alpha: f64,
}

/// det(1 − zuᵗ)^{−α}; the determinant must be positive.
pub fn berezin_kernel(z: &BallPoint, u: &BallPoint, alpha: f64) -> Result<f64> {
    let d = one_minus_det(z.matrix(), u.matrix(), 1.0);
    if !(d > 0.0) {
        return Err(Error::NonPositiveDeterminant(d));
    }
    Ok(d.powf(-alpha))
}

fn one_minus_det(z: &DMatrix<f64>, u: &DMatrix<f64>, scale: f64) -> f64 {
    let p = z.nrows();
    (DMatrix::<f64>::identity(p, p) - z * u.transpose() * scale).determinant()
}

/// α ∈ {0, 1, …, p−1} or α > p−1.
pub fn wallach_admissible(alpha: f64, p: usize) -> bool {
    let top = p as f64 - 1.0;
    if alpha > top {
        return true;
    }
    let r = alpha.round();
    r >= 0.0 && r <= top && (alpha - r).abs() <= WALLACH_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramReport {
    pub n_points: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl GramReport {
    /// min_eig ≥ −n·1e−12·max_eig.
    pub fn is_positive(&self) -> bool {
        self.min_eig >= -(self.n_points as f64) * PASS_REL_PER_POINT * self.max_eig
    }

    /// min_eig < −1e−6·max_eig.
    pub fn is_witness(&self) -> bool {
        self.min_eig < -WITNESS_REL * self.max_eig
    }

    pub fn relative_min(&self) -> f64 {
        self.min_eig / self.max_eig
    }
}

pub fn gram_matrix(points: &[BallPoint], alpha: f64) -> Result<DMatrix<f64>> {
    let n = points.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let k = berezin_kernel(&points[i], &points[j], alpha)?;
            g[(i, j)] = k;
            g[(j, i)] = k;
        }
    }
    Ok(g)
}

/// Extreme eigenvalues of [K_α(z_i, z_j)]. `seed` is recorded for provenance.
pub fn gram_spectrum(points: &[BallPoint], alpha: f64, seed: u64) -> Result<GramReport> {
    if points.is_empty() {
        return Err(Error::InvalidParams("empty point set".into()));
    }
    let eig = gram_matrix(points, alpha)?.symmetric_eigenvalues();
    Ok(GramReport {
        n_points: points.len(),
        min_eig: eig.min(),
        max_eig: eig.max(),
        alpha,
        seed,
    })
}

/// Random point U·diag(σ)·Vᵗ with σ_i uniform on [lo, hi).
pub fn random_point_with_norms<R: Rng + ?Sized>(
    p: usize,
    q: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> BallPoint {
    let u = haar_orthogonal(p, rng);
    let v = haar_orthogonal(q, rng);
    let mut s = DMatrix::zeros(p, q);
    for i in 0..p {
        s[(i, i)] = rng.random_range(lo..hi);
    }
    BallPoint::new(u * s * v.transpose()).expect("norm below 1 by construction")
}

/// Configuration `t·R_θ`, `t·F_θ` (rotations and reflections at θ = 2πk/m) in
/// the leading 2×2 block, conjugated by a random element of O(p)×O(q).
/// These sit on a circle where the degree-two Taylor terms of K_α carry the
/// coefficient α(α−1)/4, negative for 0 < α < 1.
fn structured_configuration<R: Rng + ?Sized>(p: usize, q: usize, rng: &mut R) -> Vec<BallPoint> {
    let m = if rng.random_bool(0.5) { 3 } else { 4 };
    let t = rng.random_range(0.25..0.75);
    let u = haar_orthogonal(p, rng);
    let v = haar_orthogonal(q, rng);
    let mut pts = Vec::with_capacity(2 * m);
    for k in 0..m {
        let th = 2.0 * PI * k as f64 / m as f64;
        let (s, c) = th.sin_cos();
        for block in [[c, -s, s, c], [c, s, s, -c]] {
            let mut z = DMatrix::zeros(p, q);
            z[(0, 0)] = t * block[0];
            z[(0, 1)] = t * block[1];
            z[(1, 0)] = t * block[2];
            z[(1, 1)] = t * block[3];
            pts.push(BallPoint::new(&u * z * v.transpose()).expect("norm t < 1"));
        }
    }
    pts
}

fn cloud_configuration<R: Rng + ?Sized>(p: usize, q: usize, rng: &mut R) -> Vec<BallPoint> {
    let n = rng.random_range(3..=8);
    (0..n)
        .map(|_| random_point_with_norms(p, q, 0.8, 0.999, rng))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    /// Index of the successful configuration; with `seed` it reproduces the points.
    pub config_index: usize,
    pub seed: u64,
    pub report: GramReport,
    #[serde(skip)]
    pub points: Vec<BallPoint>,
}

/// Searches `budget` configurations for a Gram matrix with
/// min_eig < −1e−6·max_eig. Even-indexed configurations are structured
/// (rotation/reflection circles, needs p ≥ 2), odd-indexed ones are random
/// clouds near the boundary. Configuration i uses the RNG stream (seed, i),
/// and the lowest successful index is returned, so the result does not depend
/// on scheduling. For Wallach-admissible α this is a negative control.
pub fn pd_witness_search(
    p: usize,
    q: usize,
    alpha: f64,
    budget: usize,
    seed: u64,
) -> Result<Option<Witness>> {
    if p == 0 || p > q {
        return Err(Error::InvalidParams(format!("need 1 <= p <= q, got p={p}, q={q}")));
    }
    let found = (0..budget).into_par_iter().find_map_first(|i| {
        let pts = witness_configuration(p, q, seed, i);
        let report = gram_spectrum(&pts, alpha, seed).ok()?;
        report.is_witness().then_some(Witness {
            config_index: i,
            seed,
            report,
            points: pts,
        })
    });
    Ok(found)
}

/// Configuration `i` of the witness search seeded with `seed`.
pub fn witness_configuration(p: usize, q: usize, seed: u64, i: usize) -> Vec<BallPoint> {
    let mut rng = block_rng(seed, i as u64);
    if i.is_multiple_of(2) && p >= 2 {
        structured_configuration(p, q, &mut rng)
    } else {
        cloud_configuration(p, q, &mut rng)
    }
}

/// The configuration with the smallest min_eig/max_eig among the first `budget`.
pub fn least_positive_configuration(
    p: usize,
    q: usize,
    alpha: f64,
    budget: usize,
    seed: u64,
) -> Result<(usize, GramReport)> {
    if p == 0 || p > q || budget == 0 {
        return Err(Error::InvalidParams(format!(
            "need 1 <= p <= q and budget > 0, got p={p}, q={q}, budget={budget}"
        )));
    }
    let reports: Vec<(usize, GramReport)> = (0..budget)
        .into_par_iter()
        .map(|i| Ok((i, gram_spectrum(&witness_configuration(p, q, seed, i), alpha, seed)?)))
        .collect::<Result<_>>()?;
    Ok(reports
        .into_iter()
        .min_by(|a, b| a.1.relative_min().total_cmp(&b.1.relative_min()))
        .expect("budget > 0"))
}

/// Exponent sign and second determinant in the transformation law of K_α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SecondFactor {
    /// det(a + zuᵗ), the literal reading.
    Zu,
    /// det(a + uc).
    Uc,
    /// det(a + zc) again.
    Zc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CovarianceConvention {
    pub positive_exponent: bool,
    pub second: SecondFactor,
}

impl CovarianceConvention {
    pub const AS_PRINTED: CovarianceConvention = CovarianceConvention {
        positive_exponent: true,
        second: SecondFactor::Zu,
    };
    /// K(z^[g], u^[g]) = K(z,u)·det(a+zc)^α·det(a+uc)^α.
    pub const CORRECTED: CovarianceConvention = CovarianceConvention {
        positive_exponent: true,
        second: SecondFactor::Uc,
    };

    pub fn all() -> Vec<CovarianceConvention> {
        let mut out = Vec::new();
        for positive_exponent in [true, false] {
            for second in [SecondFactor::Zu, SecondFactor::Uc, SecondFactor::Zc] {
                out.push(CovarianceConvention {
                    positive_exponent,
                    second,
                });
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let sign = if self.positive_exponent { "+" } else { "-" };
        let second = match self.second {
            SecondFactor::Zu => "det(a+zu^t)",
            SecondFactor::Uc => "det(a+uc)",
            SecondFactor::Zc => "det(a+zc)",
        };
        format!("det(a+zc)^({sign}a)*{second}^({sign}a)")
    }
}

/// |K(z^[g], u^[g]) − K(z,u)·f₁^{±α}·f₂^{±α}| / |K(z^[g], u^[g])|. A convention
/// whose determinant product is not positive yields +∞ (not real-valued).
pub fn covariance_residual(
    g: &PseudoOrthogonalElement,
    z: &BallPoint,
    u: &BallPoint,
    alpha: f64,
    convention: CovarianceConvention,
) -> Result<f64> {
    let lhs = berezin_kernel(&moebius_act(g, z)?, &moebius_act(g, u)?, alpha)?;
    let k = berezin_kernel(z, u, alpha)?;
    let f1 = cocycle(g, z)?;
    let f2 = match convention.second {
        SecondFactor::Zc => f1,
        SecondFactor::Uc => cocycle(g, u)?,
        SecondFactor::Zu => (g.a() + z.matrix() * u.matrix().transpose()).determinant(),
    };
    let prod = f1 * f2;
    if !(prod > 0.0) {
        return Ok(f64::INFINITY);
    }
    let e = if convention.positive_exponent { alpha } else { -alpha };
    let rhs = k * prod.powf(e);
    Ok((lhs - rhs).abs() / lhs.abs())
}

/// Largest residual of each convention over `trials` random scalar triples
/// (p = q = 1: boost times a random sign pattern, z and u uniform in (−0.95, 0.95)).
pub fn adjudicate_covariance(
    alpha: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<(CovarianceConvention, f64)>> {
    let mut rng = block_rng(seed, 0);
    let mut worst = vec![0.0f64; 6];
    for _ in 0..trials {
        let t = rng.random_range(-2.0..2.0);
        let boost = PseudoOrthogonalElement::boost(1, 1, &[t]);
        let sa = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let sd = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let flip = PseudoOrthogonalElement::block_diag(
            &DMatrix::from_element(1, 1, sa),
            &DMatrix::from_element(1, 1, sd),
        )?;
        let g = boost.compose(&flip);
        let z = BallPoint::new(DMatrix::from_element(1, 1, rng.random_range(-0.95..0.95)))?;
        let u = BallPoint::new(DMatrix::from_element(1, 1, rng.random_range(-0.95..0.95)))?;
        for (w, c) in worst.iter_mut().zip(CovarianceConvention::all()) {
            let r = covariance_residual(&g, &z, &u, alpha, c)?;
            *w = w.max(if r.is_nan() { f64::INFINITY } else { r });
        }
    }
    Ok(CovarianceConvention::all().into_iter().zip(worst).collect())
}

/// max(0, det(1−c²zuᵗ)^{−α} − 2^{pα}·det(1−zuᵗ)^{−α}).
pub fn domination_residual(z: &BallPoint, u: &BallPoint, c: f64, alpha: f64) -> Result<f64> {
    let d1 = one_minus_det(z.matrix(), u.matrix(), 1.0);
    let dc = one_minus_det(z.matrix(), u.matrix(), c * c);
    if !(d1 > 0.0) {
        return Err(Error::NonPositiveDeterminant(d1));
    }
    if !(dc > 0.0) {
        return Err(Error::NonPositiveDeterminant(dc));
    }
    let p = z.p() as f64;
    let lhs = dc.powf(-alpha);
    let rhs = 2f64.powf(p * alpha) * d1.powf(-alpha);
    Ok((lhs - rhs).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryOrbitPoint {
    pub z: BallPoint,
    pub r: usize,
}

/// Upper-left p×q block of a Haar element of SO(q+r).
pub fn boundary_sample<R: Rng + ?Sized>(
    p: usize,
    q: usize,
    r: usize,
    rng: &mut R,
) -> Result<BoundaryOrbitPoint> {
    if p == 0 || r > p || p > q {
        return Err(Error::InvalidParams(format!(
            "need 0 <= r <= p <= q, got p={p}, q={q}, r={r}"
        )));
    }
    let g = haar_special_orthogonal(q + r, rng);
    let z = BallPoint::closure(g.view((0, 0), (p, q)).into_owned(), 1e-12)?;
    Ok(BoundaryOrbitPoint { z, r })
}

/// Fraction of `n` boundary samples whose numerical orbit rank equals r.
pub fn boundary_rank_accuracy(p: usize, q: usize, r: usize, n: usize, seed: u64, tol: f64) -> Result<f64> {
    let plan = SamplingPlan::new(seed, n);
    let hits: Result<Vec<usize>> = map_blocks(&plan, |rng, len| {
        let mut h = 0;
        for _ in 0..len {
            let b = boundary_sample(p, q, r, rng)?;
            if orbit_rank(&b.z, tol) == r {
                h += 1;
            }
        }
        Ok(h)
    })
    .into_iter()
    .collect();
    Ok(hits?.iter().sum::<usize>() as f64 / n as f64)
}

/// (q − p + 2r)/2 − 2k − gap.
pub fn restriction_threshold(p: usize, q: usize, r: usize, k: usize, lambda_max_gap: f64) -> f64 {
    (q as f64 - p as f64 + 2.0 * r as f64) / 2.0 - 2.0 * k as f64 - lambda_max_gap
}

fn check_probe(p: usize, q: usize, r: usize) -> Result<()> {
    if !(p < q && r < p) {
        return Err(Error::InvalidParams(format!(
            "restriction probes need p < q and r < p, got p={p}, q={q}, r={r}"
        )));
    }
    Ok(())
}

/// Exponents on SO(q+r) reproducing det(1+[g]_{p−r})^{−α}: λ₁ = … = λ_{p−r} = −α, rest 0.
pub fn restriction_lambda(p: usize, q: usize, r: usize, alpha: f64) -> Vec<f64> {
    let n = q + r;
    (1..n).map(|k| if k <= p - r { -alpha } else { 0.0 }).collect()
}

/// Closed form of E det(1+[g]_{p−r})^{−α} over SO(q+r).
pub fn restriction_closed_form(p: usize, q: usize, r: usize, alpha: f64) -> Result<f64> {
    check_probe(p, q, r)?;
    let th = restriction_threshold(p, q, r, 0, 0.0);
    if alpha >= th {
        return Err(Error::DomainError(format!(
            "alpha = {alpha} is not below the threshold {th}"
        )));
    }
    so_integral_closed_form(q + r, &restriction_lambda(p, q, r, alpha), SoVariant::DEFAULT)
}

/// Same quantity by the factorized one-dimensional quadratures.
pub fn restriction_quadrature(p: usize, q: usize, r: usize, alpha: f64) -> Result<f64> {
    check_probe(p, q, r)?;
    so_integral_quadrature(q + r, &restriction_lambda(p, q, r, alpha))
}

fn restriction_sample<R: Rng + ?Sized>(
    p: usize,
    q: usize,
    r: usize,
    alpha: f64,
    rng: &mut R,
) -> Option<f64> {
    let b = boundary_sample(p, q, r, rng).ok()?;
    let k = p - r;
    let corner = b.z.matrix().view((0, 0), (k, k)).into_owned();
    let d = (DMatrix::<f64>::identity(k, k) + corner).determinant();
    if d < DET_FLOOR {
        return None;
    }
    Some(d.powf(-alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub estimate: MCEstimate,
    pub max_sample: f64,
    pub threshold: f64,
}

/// Monte Carlo estimate of E det(1+[z]_{p−r})^{−α} over boundary samples.
pub fn restriction_probe(
    p: usize,
    q: usize,
    r: usize,
    alpha: f64,
    plan: &SamplingPlan,
) -> Result<ProbeResult> {
    check_probe(p, q, r)?;
    let threshold = restriction_threshold(p, q, r, 0, 0.0);
    if alpha == 0.0 {
        return Ok(ProbeResult {
            estimate: MCEstimate {
                mean: 1.0,
                stderr: 0.0,
                n_samples: plan.n_samples,
                seed: plan.seed,
                resamples: 0,
            },
            max_sample: 1.0,
            threshold,
        });
    }
    let (m, resamples) = crate::mc::estimate_moments(plan, |rng| {
        Ok(restriction_sample(p, q, r, alpha, rng))
    })?;
    Ok(ProbeResult {
        estimate: MCEstimate {
            mean: m.mean,
            stderr: m.stderr(),
            n_samples: m.n,
            seed: plan.seed,
            resamples,
        },
        max_sample: m.max_abs,
        threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunningMax {
    pub n_samples: usize,
    pub running_max: f64,
    pub running_mean: f64,
}

/// Running maximum and mean at each checkpoint of one nested sample stream
/// (the first N draws for each N in `checkpoints`, ascending).
pub fn restriction_running_max(
    p: usize,
    q: usize,
    r: usize,
    alpha: f64,
    seed: u64,
    checkpoints: &[usize],
) -> Result<Vec<RunningMax>> {
    check_probe(p, q, r)?;
    let n_max = checkpoints.iter().copied().max().unwrap_or(0);
    // blocks of gcd(checkpoints) make every checkpoint land on a block edge
    let block = checkpoints.iter().fold(0usize, |a, &b| gcd(a, b)).max(1);
    let plan = SamplingPlan::new(seed, n_max).with_block_size(block);
    let blocks: Vec<Moments> = map_blocks(&plan, |rng, len| {
        let mut m = Moments::default();
        while m.n < len {
            if let Some(v) = restriction_sample(p, q, r, alpha, rng) {
                m.push(v);
            }
        }
        m
    });
    let mut out = Vec::new();
    for &c in checkpoints {
        let nb = c / block;
        let mut acc = Moments::default();
        for b in &blocks[..nb.min(blocks.len())] {
            acc.merge(b);
        }
        out.push(RunningMax {
            n_samples: acc.n,
            running_max: acc.max_abs,
            running_mean: acc.mean,
        });
    }
    Ok(out)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
