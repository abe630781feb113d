//! Gamma-function arithmetic.
//!
//! Real and complex log-Gamma via the Lanczos approximation (g = 7, 9 terms),
//! plus [`GammaValue`], a (log|c|, sign, order) triple that carries leading
//! Laurent coefficients through products so that poles of numerator and
//! denominator Gamma factors can cancel exactly.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Div, Mul};

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Relative tolerance used to decide that an argument sits on a Gamma pole.
pub const POLE_TOL: f64 = 1e-12;

/// Returns `Some(n)` when `x` equals the nonpositive integer `-n` to within [`POLE_TOL`].
pub fn nonpositive_integer(x: f64) -> Option<u64> {
    if x > 0.5 {
        return None;
    }
    let r = x.round();
    if (x - r).abs() <= POLE_TOL * r.abs().max(1.0) {
        Some((-r) as u64)
    } else {
        None
    }
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    // valid for Re z >= 0.5
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// ln|sin(pi z)| without overflow for large imaginary parts.
fn ln_abs_sin_pi(z: Complex64) -> f64 {
    // |sin(pi z)|^2 = (cosh(2 pi y) - cos(2 pi x)) / 2
    let u = 2.0 * PI * z.im.abs();
    let c = (2.0 * PI * z.re).cos();
    if u > 30.0 {
        0.5 * (u - 4f64.ln() + (1.0 + (-2.0 * u).exp() - 2.0 * c * (-u).exp()).ln())
    } else {
        0.5 * ((u.cosh() - c) / 2.0).ln()
    }
}

/// Real part of ln Γ(z), i.e. ln|Γ(z)|, for complex z off the poles.
pub fn ln_abs_gamma_complex(z: Complex64) -> f64 {
    if z.re >= 0.5 {
        lanczos_ln_gamma(z).re
    } else {
        PI.ln() - ln_abs_sin_pi(z) - lanczos_ln_gamma(1.0 - z).re
    }
}

/// ln|Γ(x+iy)|² = 2 ln|Γ(x+iy)|.
pub fn ln_abs_gamma_sq(x: f64, y: f64) -> f64 {
    2.0 * ln_abs_gamma_complex(Complex64::new(x, y))
}

/// ln|Γ(x)| and the sign of Γ(x) for real x. Returns `None` on a pole.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if nonpositive_integer(x).is_some() {
        return None;
    }
    if x >= 0.5 {
        return Some((lanczos_ln_gamma(Complex64::new(x, 0.0)).re, 1.0));
    }
    let s = (PI * x).sin();
    let (lg, _) = ln_gamma_signed(1.0 - x)?;
    Some((PI.ln() - s.abs().ln() - lg, s.signum()))
}

/// Γ(x) for real x (infinite at poles).
pub fn gamma(x: f64) -> f64 {
    match ln_gamma_signed(x) {
        Some((lg, s)) => s * lg.exp(),
        None => f64::INFINITY,
    }
}

pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma_signed(n as f64 + 1.0).map(|(v, _)| v).unwrap_or(0.0)
}

/// A real quantity known through its leading behaviour `sign * exp(log_abs) * δ^(-order)`
/// as the analytic-continuation parameter δ → 0.
///
/// `order > 0` marks a pole, `order < 0` a zero forced by a pole in a denominator,
/// `order == 0` an ordinary finite nonzero value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValue {
    pub log_abs: f64,
    pub sign: f64,
    pub order: i32,
}

impl GammaValue {
    pub const ONE: GammaValue = GammaValue {
        log_abs: 0.0,
        sign: 1.0,
        order: 0,
    };

    pub fn from_f64(x: f64) -> Self {
        assert!(x != 0.0 && x.is_finite(), "GammaValue::from_f64 needs a finite nonzero value");
        GammaValue {
            log_abs: x.abs().ln(),
            sign: x.signum(),
            order: 0,
        }
    }

    /// Positive value given by its logarithm.
    pub fn from_ln(ln: f64) -> Self {
        GammaValue {
            log_abs: ln,
            sign: 1.0,
            order: 0,
        }
    }

    /// Γ(x0 + slope·δ) as δ → 0.
    pub fn gamma(x0: f64, slope: f64) -> Self {
        match nonpositive_integer(x0) {
            // Γ(-n + ε) ≈ (-1)^n / (n! ε)
            Some(n) => GammaValue {
                log_abs: -ln_factorial(n) - slope.abs().ln(),
                sign: if n % 2 == 0 { 1.0 } else { -1.0 } * slope.signum(),
                order: 1,
            },
            None => {
                let (lg, s) = ln_gamma_signed(x0).expect("non-pole argument");
                GammaValue {
                    log_abs: lg,
                    sign: s,
                    order: 0,
                }
            }
        }
    }

    /// The affine factor x0 + slope·δ.
    pub fn linear(x0: f64, slope: f64) -> Self {
        if x0.abs() <= POLE_TOL {
            GammaValue {
                log_abs: slope.abs().ln(),
                sign: slope.signum(),
                order: -1,
            }
        } else {
            Self::from_f64(x0)
        }
    }

    /// Rising factorial (x0 + slope·δ)_n as a product of affine factors.
    pub fn pochhammer(x0: f64, slope: f64, n: u64) -> Self {
        (0..n).fold(Self::ONE, |acc, j| acc * Self::linear(x0 + j as f64, slope))
    }

    pub fn recip(self) -> Self {
        GammaValue {
            log_abs: -self.log_abs,
            sign: self.sign,
            order: -self.order,
        }
    }

    pub fn powi(self, k: i32) -> Self {
        GammaValue {
            log_abs: self.log_abs * k as f64,
            sign: if k % 2 == 0 { 1.0 } else { self.sign },
            order: self.order * k,
        }
    }

    pub fn is_pole(&self) -> bool {
        self.order > 0
    }

    pub fn is_zero(&self) -> bool {
        self.order < 0
    }

    pub fn is_finite_nonzero(&self) -> bool {
        self.order == 0
    }

    /// Plain value: 0 for zeros, ±∞ for poles.
    pub fn value(&self) -> f64 {
        match self.order {
            0 => self.sign * self.log_abs.exp(),
            o if o < 0 => 0.0,
            _ => self.sign * f64::INFINITY,
        }
    }
}

impl Mul for GammaValue {
    type Output = GammaValue;
    fn mul(self, rhs: GammaValue) -> GammaValue {
        GammaValue {
            log_abs: self.log_abs + rhs.log_abs,
            sign: self.sign * rhs.sign,
            order: self.order + rhs.order,
        }
    }
}

impl Div for GammaValue {
    type Output = GammaValue;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: GammaValue) -> GammaValue {
        self * rhs.recip()
    }
}

impl std::iter::Product for GammaValue {
    fn product<I: Iterator<Item = GammaValue>>(iter: I) -> Self {
        iter.fold(GammaValue::ONE, |a, b| a * b)
    }
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            0 => write!(f, "{:e}", self.value()),
            o if o < 0 => write!(f, "zero(order {})", -o),
            o => write!(f, "pole(order {o})"),
        }
    }
}
