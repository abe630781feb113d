//! Haar integrals of products of corner determinants over SO(n), U(n), Sp(n):
//! Gamma-product closed forms and two independent oracles (Monte Carlo on the
//! group, and a product of one-dimensional quadratures in cube coordinates).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::compact::{CompactGroupElement, Field};
use crate::error::{Error, Result};
use crate::mc::{estimate, estimate_complex, MCEstimate, SamplingPlan};
use crate::quadrature::TanhSinh;
use crate::special::ln_gamma_signed;

/// Draws whose corner determinant falls below this are redrawn.
pub const DET_FLOOR: f64 = 1e-300;

/// Closed-form variant of the SO(n) product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SoVariant {
    AsPrinted,
    /// Each factor multiplied by 2^{λ_k}; confirmed by both oracles.
    TwoPowerCorrected,
}

impl SoVariant {
    pub const DEFAULT: SoVariant = SoVariant::TwoPowerCorrected;
}

/// Exponents λ (and μ in the unitary case), with λ_{n+1} = 0 implied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentVector {
    pub lambda: Vec<f64>,
    pub mu: Option<Vec<f64>>,
}

impl ExponentVector {
    pub fn new(lambda: Vec<f64>) -> Self {
        ExponentVector { lambda, mu: None }
    }

    pub fn with_mu(lambda: Vec<f64>, mu: Vec<f64>) -> Self {
        ExponentVector {
            lambda,
            mu: Some(mu),
        }
    }

    /// λ_k > −(n−k)/2 for the indices entering the SO(n) product.
    pub fn so_admissible(&self, n: usize) -> bool {
        so_lambda(n, &self.lambda).is_ok_and(|l| {
            l.iter()
                .enumerate()
                .all(|(i, &lk)| lk > -((n - i - 1) as f64) / 2.0)
        })
    }
}

/// Normalizes an SO(n) exponent vector to λ₁..λ_{n−1}. A supplied λ_n must be 0:
/// the product only involves k ≤ n−1, and its Gamma closed form assumes λ_n = 0.
pub fn so_lambda(n: usize, lambda: &[f64]) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    match lambda.len() {
        l if l + 1 == n => Ok(lambda.to_vec()),
        l if l == n => {
            if lambda[n - 1] != 0.0 {
                return Err(Error::InvalidParams(format!(
                    "lambda_n must be 0 for SO({n}), got {}",
                    lambda[n - 1]
                )));
            }
            Ok(lambda[..n - 1].to_vec())
        }
        l => Err(Error::InvalidParams(format!(
            "SO({n}) needs {} or {n} exponents, got {l}",
            n - 1
        ))),
    }
}

fn check_len(n: usize, v: &[f64], name: &str) -> Result<()> {
    if n == 0 || v.len() != n {
        return Err(Error::InvalidParams(format!(
            "{name} must have length n = {n}, got {}",
            v.len()
        )));
    }
    Ok(())
}

/// ln Γ(x) for x > 0, DomainError otherwise.
fn ln_gamma_pos(x: f64, what: &str) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!(
            "Gamma argument {what} = {x} is not positive"
        )));
    }
    Ok(ln_gamma_signed(x).expect("positive argument").0)
}

/// ∏_{k=1}^{n−1} Γ(n−k)Γ(λ_k+(n−k)/2) / (Γ((n−k)/2)Γ(λ_k+n−k)), times ∏2^{λ_k}
/// for the corrected variant.
pub fn so_integral_closed_form(n: usize, lambda: &[f64], variant: SoVariant) -> Result<f64> {
    let lam = so_lambda(n, lambda)?;
    let mut log = 0.0;
    for (i, &l) in lam.iter().enumerate() {
        let m = (n - i - 1) as f64;
        log += ln_gamma_pos(m, "n-k")? + ln_gamma_pos(l + m / 2.0, "lambda_k+(n-k)/2")?
            - ln_gamma_pos(m / 2.0, "(n-k)/2")?
            - ln_gamma_pos(l + m, "lambda_k+n-k")?;
        if variant == SoVariant::TwoPowerCorrected {
            log += l * std::f64::consts::LN_2;
        }
    }
    Ok(log.exp())
}

/// The SO(n) integrand ∏_{k=1}^{n−1} det(1+[g]_k)^{λ_k−λ_{k+1}}, or `None`
/// when a determinant with a negative exponent is below [`DET_FLOOR`].
pub fn so_integrand(g: &CompactGroupElement, lam: &[f64]) -> Result<Option<f64>> {
    let n = g.n();
    let mut log = 0.0;
    for k in 1..n {
        let e = lam[k - 1] - lam.get(k).copied().unwrap_or(0.0);
        if e == 0.0 {
            continue;
        }
        let d = g.corner(k).det_one_plus()?.re;
        if d < DET_FLOOR {
            if e > 0.0 {
                return Ok(Some(0.0));
            }
            return Ok(None);
        }
        log += e * d.ln();
    }
    Ok(Some(log.exp()))
}

fn all_zero(v: &[f64]) -> bool {
    v.iter().all(|&x| x == 0.0)
}

fn exact_one(plan: &SamplingPlan) -> MCEstimate {
    MCEstimate {
        mean: 1.0,
        stderr: 0.0,
        n_samples: plan.n_samples,
        seed: plan.seed,
        resamples: 0,
    }
}

/// Monte Carlo over Haar-distributed g ∈ SO(n).
pub fn so_integral_mc(n: usize, lambda: &[f64], plan: &SamplingPlan) -> Result<MCEstimate> {
    let lam = so_lambda(n, lambda)?;
    if all_zero(&lam) {
        return Ok(exact_one(plan));
    }
    estimate(plan, |rng| {
        let g = CompactGroupElement::haar_sample(Field::Real, n, rng);
        so_integrand(&g, &lam)
    })
}

/// E (1+y)^λ for y with density ∝ (1−y²)^{a−1} on [−1,1], by tanh-sinh
/// quadrature in y = cos φ; the normalizer is computed the same way.
pub fn beta_factor_quadrature(a: f64, lambda: f64) -> Result<f64> {
    let ts = TanhSinh::default();
    // evaluated in log space: 1 + cos φ = 2 sin²((π − φ)/2) underflows near φ = π
    let weight = |lam: f64| {
        move |_phi: f64, dl: f64, dr: f64| {
            let ln_sin = dl.min(dr).sin().ln();
            let ln_one_plus = std::f64::consts::LN_2 + 2.0 * (dr / 2.0).sin().ln();
            let mut e = (2.0 * a - 1.0) * ln_sin;
            if lam != 0.0 {
                e += lam * ln_one_plus;
            }
            e.exp()
        }
    };
    let num = ts.integrate(0.0, PI, weight(lambda))?;
    let den = ts.integrate(0.0, PI, weight(0.0))?;
    Ok(num.value / den.value)
}

/// Product over k of the one-dimensional factors E(1+y)^{λ_k}, y ∝ (1−y²)^{(n−k−2)/2}.
pub fn so_integral_quadrature(n: usize, lambda: &[f64]) -> Result<f64> {
    let lam = so_lambda(n, lambda)?;
    let mut out = 1.0;
    for (i, &l) in lam.iter().enumerate() {
        if l == 0.0 {
            continue;
        }
        let a = (n - i - 1) as f64 / 2.0;
        if l + a <= 0.0 {
            return Err(Error::DomainError(format!(
                "factor {} diverges: lambda = {l} <= -{a}",
                i + 1
            )));
        }
        out *= beta_factor_quadrature(a, l)?;
    }
    Ok(out)
}

/// ∏_{k=1}^n Γ(m)Γ(m+λ_k+μ_k) / (Γ(m+λ_k)Γ(m+μ_k)), m = n−k+1.
pub fn u_integral_closed_form(n: usize, lambda: &[f64], mu: &[f64]) -> Result<f64> {
    check_len(n, lambda, "lambda")?;
    check_len(n, mu, "mu")?;
    let mut log = 0.0;
    for k in 1..=n {
        let m = (n - k + 1) as f64;
        let (l, u) = (lambda[k - 1], mu[k - 1]);
        log += ln_gamma_pos(m, "n-k+1")? + ln_gamma_pos(m + l + u, "n-k+1+lambda_k+mu_k")?
            - ln_gamma_pos(m + l, "n-k+1+lambda_k")?
            - ln_gamma_pos(m + u, "n-k+1+mu_k")?;
    }
    Ok(log.exp())
}

/// Branch of log det(1+A) continuous from A = 0: Σ ln(1+ν) over eigenvalues ν,
/// each 1+ν lying in the closed right half-plane for a contraction A.
fn log_det_one_plus(eigs: &[Complex64]) -> Complex64 {
    eigs.iter().map(|&v| (1.0 + v).ln()).sum()
}

/// The U(n) integrand ∏ det(1+[g]_k)^{λ_k−λ_{k+1}} · conj(det(1+[g]_k))^{μ_k−μ_{k+1}}.
pub fn u_integrand(g: &CompactGroupElement, lambda: &[f64], mu: &[f64]) -> Option<Complex64> {
    let n = g.n();
    let mut log = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        let el = lambda[k - 1] - lambda.get(k).copied().unwrap_or(0.0);
        let em = mu[k - 1] - mu.get(k).copied().unwrap_or(0.0);
        if el == 0.0 && em == 0.0 {
            continue;
        }
        let ld = log_det_one_plus(&g.corner(k).eigenvalues());
        if ld.re < DET_FLOOR.ln() {
            if el + em > 0.0 {
                return Some(Complex64::new(0.0, 0.0));
            }
            return None;
        }
        // z^a · conj(z)^b = exp((a+b) Re log z + i (a−b) Im log z)
        log += Complex64::new((el + em) * ld.re, (el - em) * ld.im);
    }
    Some(log.exp())
}

/// Monte Carlo over U(n); returns (real part, imaginary part).
pub fn u_integral_mc(
    n: usize,
    lambda: &[f64],
    mu: &[f64],
    plan: &SamplingPlan,
) -> Result<(MCEstimate, MCEstimate)> {
    check_len(n, lambda, "lambda")?;
    check_len(n, mu, "mu")?;
    if all_zero(lambda) && all_zero(mu) {
        let mut zero = exact_one(plan);
        zero.mean = 0.0;
        return Ok((exact_one(plan), zero));
    }
    estimate_complex(plan, |rng| {
        let g = CompactGroupElement::haar_sample(Field::Complex, n, rng);
        Ok(u_integrand(&g, lambda, mu).map(|z| (z.re, z.im)))
    })
}

/// ∏_{k=1}^n Γ(2m)Γ(2m+λ_k+1) / (Γ(2m+λ_k/2)Γ(2m+λ_k/2+1)), m = n−k+1.
pub fn sp_integral_closed_form(n: usize, lambda: &[f64]) -> Result<f64> {
    check_len(n, lambda, "lambda")?;
    let mut log = 0.0;
    for k in 1..=n {
        let m2 = 2.0 * (n - k + 1) as f64;
        let l = lambda[k - 1];
        log += ln_gamma_pos(m2, "2(n-k+1)")? + ln_gamma_pos(m2 + l + 1.0, "2(n-k+1)+lambda_k+1")?
            - ln_gamma_pos(m2 + l / 2.0, "2(n-k+1)+lambda_k/2")?
            - ln_gamma_pos(m2 + l / 2.0 + 1.0, "2(n-k+1)+lambda_k/2+1")?;
    }
    Ok(log.exp())
}

/// The Sp(n) integrand ∏ |det(1+[g]_k)|^{λ_k−λ_{k+1}} with the quaternionic determinant.
pub fn sp_integrand(g: &CompactGroupElement, lambda: &[f64]) -> Result<Option<f64>> {
    let n = g.n();
    let mut log = 0.0;
    for k in 1..=n {
        let e = lambda[k - 1] - lambda.get(k).copied().unwrap_or(0.0);
        if e == 0.0 {
            continue;
        }
        let d = g.corner(k).det_one_plus()?.re;
        if d < DET_FLOOR {
            if e > 0.0 {
                return Ok(Some(0.0));
            }
            return Ok(None);
        }
        log += e * d.ln();
    }
    Ok(Some(log.exp()))
}

/// Monte Carlo over Sp(n).
pub fn sp_integral_mc(n: usize, lambda: &[f64], plan: &SamplingPlan) -> Result<MCEstimate> {
    check_len(n, lambda, "lambda")?;
    if all_zero(lambda) {
        return Ok(exact_one(plan));
    }
    estimate(plan, |rng| {
        let g = CompactGroupElement::haar_sample(Field::Quaternion, n, rng);
        sp_integrand(&g, lambda)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_exponents() {
        for v in [SoVariant::AsPrinted, SoVariant::TwoPowerCorrected] {
            assert!((so_integral_closed_form(4, &[0.0; 4], v).unwrap() - 1.0).abs() < 1e-14);
        }
        assert_eq!(so_integral_quadrature(4, &[0.0; 3]).unwrap(), 1.0);
        assert!((u_integral_closed_form(3, &[0.0; 3], &[0.0; 3]).unwrap() - 1.0).abs() < 1e-14);
        assert!((sp_integral_closed_form(3, &[0.0; 3]).unwrap() - 1.0).abs() < 1e-14);
        let plan = SamplingPlan::new(1, 1000);
        let e = so_integral_mc(3, &[0.0; 3], &plan).unwrap();
        assert_eq!((e.mean, e.stderr), (1.0, 0.0));
    }

    #[test]
    fn circle_discriminates_variants() {
        let c = so_integral_closed_form(2, &[1.0, 0.0], SoVariant::TwoPowerCorrected).unwrap();
        let p = so_integral_closed_form(2, &[1.0, 0.0], SoVariant::AsPrinted).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
        assert!((p - 0.5).abs() < 1e-14);
        assert!((so_integral_quadrature(2, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn so3_cofactor_case() {
        let c = so_integral_closed_form(3, &[1.0, 1.0, 0.0], SoVariant::TwoPowerCorrected).unwrap();
        assert!((c - 1.0).abs() < 1e-13);
    }

    #[test]
    fn lambda_n_must_vanish() {
        assert!(matches!(
            so_integral_closed_form(3, &[1.0, 1.0, 1.0], SoVariant::DEFAULT),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            so_integral_closed_form(4, &[-1.5, 0.0, 0.0], SoVariant::DEFAULT),
            Err(Error::DomainError(_))
        ));
        assert!(so_integral_closed_form(4, &[-1.49, 0.0, 0.0], SoVariant::DEFAULT).is_ok());
        assert!(matches!(
            u_integral_closed_form(1, &[-1.0], &[0.5]),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            sp_integral_closed_form(1, &[-4.0]),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn unitary_and_symplectic_small_cases() {
        assert!((u_integral_closed_form(1, &[1.0], &[1.0]).unwrap() - 2.0).abs() < 1e-14);
        assert!((u_integral_closed_form(1, &[1.0], &[0.0]).unwrap() - 1.0).abs() < 1e-14);
        assert!((sp_integral_closed_form(1, &[2.0]).unwrap() - 2.0).abs() < 1e-14);
        assert!((u_integral_closed_form(2, &[1.0, 0.0], &[1.0, 0.0]).unwrap() - 1.5).abs() < 1e-13);
    }

    #[test]
    fn quadrature_factor_matches_beta_closed_form() {
        // E(1+y)^λ = 2^λ Γ(λ+a)Γ(2a) / (Γ(a)Γ(λ+2a))
        let g = |x: f64| crate::special::gamma(x);
        for &(a, l) in &[(0.5, 1.0), (1.0, -0.7), (1.5, 0.25), (2.0, -1.9), (0.5, -0.45)] {
            let exact = 2f64.powf(l) * g(l + a) * g(2.0 * a) / (g(a) * g(l + 2.0 * a));
            let q = beta_factor_quadrature(a, l).unwrap();
            assert!((q / exact - 1.0).abs() < 1e-10, "a={a} l={l}: {q} vs {exact}");
        }
    }
}
