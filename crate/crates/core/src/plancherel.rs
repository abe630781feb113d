//! Plancherel densities for the kernel representations of O(p,q) and U(p,q)
//! and the coefficients of their analytic continuation in α: continuous
//! weights, discrete blocks indexed by u (O case) or w (U case), and a rank-one
//! numerical check of the expansion of cosh^{−α} t in spherical functions.
//!
//! The overall constants A are never fixed; coefficients are returned with
//! A = 1 and compared projectively.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::{Error, Result};
use crate::mc::block_rng;
use crate::special::{ln_abs_gamma_sq, ln_factorial, nonpositive_integer, GammaValue};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlancherelParams {
    pub p: usize,
    pub q: usize,
    pub alpha: f64,
    /// Square-integrability edge; defaults to (p+q)/2 − 1.
    pub h: f64,
    /// Block condition w_r < h − α (strict) or w_r ≤ h − α.
    pub strict: bool,
}

impl PlancherelParams {
    pub fn new(p: usize, q: usize, alpha: f64) -> Result<Self> {
        if p == 0 || p > q {
            return Err(Error::InvalidParams(format!("need 1 <= p <= q, got p={p}, q={q}")));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParams("alpha must be finite".into()));
        }
        Ok(PlancherelParams {
            p,
            q,
            alpha,
            h: default_h(p, q),
            strict: true,
        })
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn weak(mut self) -> Self {
        self.strict = false;
        self
    }

    fn half_sum(&self) -> f64 {
        (self.p + self.q) as f64 / 2.0
    }
}

pub fn default_h(p: usize, q: usize) -> f64 {
    (p + q) as f64 / 2.0 - 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockIndex {
    pub r: usize,
    pub u: Vec<u64>,
    pub w: Vec<f64>,
}

impl BlockIndex {
    /// w_j = u₁ + … + u_j + j/2.
    pub fn from_u(u: Vec<u64>) -> Self {
        let mut acc = 0u64;
        let w = u
            .iter()
            .enumerate()
            .map(|(j, &uj)| {
                acc += uj;
                acc as f64 + (j + 1) as f64 / 2.0
            })
            .collect();
        BlockIndex { r: u.len(), u, w }
    }

    pub fn continuous() -> Self {
        Self::from_u(Vec::new())
    }

    /// w_j for j ≥ 1, and w_0 = 0.
    fn w_at(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.w[j - 1]
        }
    }

    pub fn w_last(&self) -> f64 {
        self.w_at(self.r)
    }
}

/// Accumulates ln|·| together with counts of forced zeros and poles for
/// quantities evaluated at a fixed real spectral point.
#[derive(Debug, Default, Clone, Copy)]
struct LogAcc {
    ln: f64,
    zeros: u32,
    poles: u32,
}

impl LogAcc {
    /// Adds ±ln|Γ(x+iy)|² (sign = +1 numerator, −1 denominator).
    fn gamma_sq(&mut self, x: f64, y: f64, sign: f64) {
        if y == 0.0 && nonpositive_integer(x).is_some() {
            if sign > 0.0 {
                self.poles += 1;
            } else {
                self.zeros += 1;
            }
        } else {
            self.ln += sign * ln_abs_gamma_sq(x, y);
        }
    }

    /// Adds ±ln|v|.
    fn real(&mut self, v: f64, sign: f64) {
        if v == 0.0 {
            if sign > 0.0 {
                self.zeros += 1;
            } else {
                self.poles += 1;
            }
        } else {
            self.ln += sign * v.abs().ln();
        }
    }

    /// 1/|Γ(is)|² = s·sinh(πs)/π.
    fn inv_gamma_is_sq(&mut self, s: f64) {
        let a = s.abs();
        if a == 0.0 {
            self.zeros += 1;
            return;
        }
        let x = PI * a;
        let ln_sinh = if x > 20.0 {
            x - 2f64.ln() + (-(2.0 * x)).exp().ln_1p()
        } else {
            x.sinh().ln()
        };
        self.ln += a.ln() + ln_sinh - PI.ln();
    }

    /// (s_k² − s_l²)·tanh(π(s_k−s_l)/2)·tanh(π(s_k+s_l)/2), always ≥ 0.
    fn interaction(&mut self, sk: f64, sl: f64) {
        let d = sk - sl;
        let e = sk + sl;
        let v = (d * e).abs() * (PI * d / 2.0).tanh().abs() * (PI * e / 2.0).tanh().abs();
        self.real(v, 1.0);
    }

    fn finish(self, what: &str) -> Result<f64> {
        if self.poles > 0 {
            if self.zeros >= self.poles {
                return Err(Error::PoleOnContour(format!(
                    "{what}: coincident zero and pole, limit not resolved"
                )));
            }
            return Err(Error::PoleOnContour(what.to_string()));
        }
        if self.zeros > 0 {
            return Ok(0.0);
        }
        Ok(self.ln.exp())
    }
}

/// |Γ((q−p)/2 + is)|² / |Γ(is)|², equal to 1 identically when p = q.
fn c_function_factor(acc: &mut LogAcc, p: usize, q: usize, s: f64) {
    if p == q {
        return;
    }
    acc.gamma_sq((q - p) as f64 / 2.0, s, 1.0);
    acc.inv_gamma_is_sq(s);
}

/// Continuous Plancherel weight for O(p,q), without the prefactor
/// 1/∏Γ(α−k+1) and the constant A.
pub fn continuous_weight_o(params: &PlancherelParams, s: &[f64]) -> Result<f64> {
    let p = params.p;
    if s.len() != p {
        return Err(Error::InvalidParams(format!("need {p} spectral values, got {}", s.len())));
    }
    let x = (params.alpha - params.half_sum() + 1.0) / 2.0;
    let mut acc = LogAcc::default();
    for &sk in s {
        acc.gamma_sq(x, sk / 2.0, 1.0);
        c_function_factor(&mut acc, p, params.q, sk);
    }
    for k in 0..p {
        for l in k + 1..p {
            acc.interaction(s[k], s[l]);
        }
    }
    // a vanishing factor wins over a Gamma pole only through 1/|Γ(is)|² at s = 0
    if acc.zeros > 0 && s.contains(&0.0) {
        return Ok(0.0);
    }
    acc.finish("continuous weight")
}

fn compositions(r: usize, budget: f64, strict: bool, prefix: &mut Vec<u64>, out: &mut Vec<BlockIndex>) {
    // w_r = Σu + r/2; prefix sums only grow, so prune on the running total
    let used: u64 = prefix.iter().sum();
    if prefix.len() == r {
        out.push(BlockIndex::from_u(prefix.clone()));
        return;
    }
    let base = used as f64 + r as f64 / 2.0;
    let mut next = 0u64;
    loop {
        let wr = base + next as f64;
        let ok = if strict { wr < budget } else { wr <= budget };
        if !ok {
            break;
        }
        prefix.push(next);
        compositions(r, budget, strict, prefix, out);
        prefix.pop();
        next += 1;
    }
}

/// The r = 0 block followed by every (r, u), 1 ≤ r ≤ p, with w_r < h − α.
pub fn surviving_blocks(params: &PlancherelParams) -> Vec<BlockIndex> {
    let budget = params.h - params.alpha;
    let mut out = vec![BlockIndex::continuous()];
    for r in 1..=params.p {
        compositions(r, budget, params.strict, &mut Vec::new(), &mut out);
    }
    out
}

fn ln_combinatorial_prefactor(p: usize, r: usize) -> f64 {
    // 2^{p−r} p! (2π)^r / (p−r)!
    (p - r) as f64 * 2f64.ln() + ln_factorial(p as u64) + r as f64 * (2.0 * PI).ln()
        - ln_factorial((p - r) as u64)
}

/// Discrete-block coefficient C_u for O(p,q) with A = 1.
pub fn coeff_c(block: &BlockIndex, p: usize) -> Result<GammaValue> {
    let r = block.r;
    if r > p {
        return Err(Error::InvalidParams(format!("block rank {r} exceeds p = {p}")));
    }
    let mut v = GammaValue::from_ln(ln_combinatorial_prefactor(p, r));
    let total: u64 = block.u.iter().sum();
    if total % 2 == 1 {
        v = v * GammaValue::from_f64(-1.0);
    }
    for &uj in &block.u {
        v = v / GammaValue::from_ln(ln_factorial(uj));
    }
    for k in 1..=r {
        for m in k + 1..=r {
            let d = block.w_at(m) - block.w_at(k);
            v = v * GammaValue::gamma(0.5 + d, 0.0)
                / GammaValue::gamma(d, 0.0)
                / GammaValue::pochhammer(0.5 + block.w_at(k - 1) - block.w_at(m), 0.0, block.u[k - 1]);
        }
    }
    Ok(v)
}

fn reject_pole(v: GammaValue) -> Result<GammaValue> {
    if v.is_pole() {
        Err(Error::UncancelledPole(v.order))
    } else {
        Ok(v)
    }
}

/// Holomorphic factor V_u(α) for O(p,q); orders are taken in α.
pub fn coeff_v_o(alpha: f64, block: &BlockIndex, p: usize, q: usize) -> Result<GammaValue> {
    let r = block.r;
    if r > p || p > q {
        return Err(Error::InvalidParams(format!("need r <= p <= q, got r={r}, p={p}, q={q}")));
    }
    let hs = (p + q) as f64 / 2.0;
    let (pf, qf) = (p as f64, q as f64);
    let mut v: GammaValue = (1..=p)
        .map(|k| GammaValue::gamma(alpha - k as f64 + 1.0, 1.0).recip())
        .product();
    for k in 1..=r {
        let wk = block.w_at(k);
        let wk1 = block.w_at(k - 1);
        v = v * GammaValue::gamma(alpha - pf + 1.0 + 2.0 * wk, 1.0)
            * GammaValue::gamma(-alpha + qf - 1.0 - 2.0 * wk, -1.0)
            / GammaValue::gamma(-alpha + hs - 2.0 * wk, -1.0)
            / GammaValue::pochhammer(alpha - hs + wk + wk1 + 0.5, 1.0, block.u[k - 1]);
    }
    for k in 1..=r {
        for m in k + 1..=r {
            let (wk, wm, wk1) = (block.w_at(k), block.w_at(m), block.w_at(k - 1));
            v = v * GammaValue::gamma(0.5 - alpha + hs - wk - wm, -1.0)
                / GammaValue::gamma(-alpha + hs - wk - wm, -1.0)
                / GammaValue::pochhammer(alpha - hs + wm + wk1 + 0.5, 1.0, block.u[k - 1]);
        }
    }
    reject_pole(v)
}

/// ln |(x+iy)_n|² and whether some factor vanishes.
fn pochhammer_sq(acc: &mut LogAcc, x: f64, y: f64, n: u64, sign: f64) {
    for j in 0..n {
        let re = x + j as f64;
        acc.real(re * re + y * y, sign);
    }
}

/// Mixed discrete/continuous weight Q_u(α | s_{r+1}, …, s_p) for O(p,q).
pub fn coeff_q_o(alpha: f64, block: &BlockIndex, s: &[f64], p: usize, q: usize) -> Result<f64> {
    let r = block.r;
    if r > p || p > q {
        return Err(Error::InvalidParams(format!("need r <= p <= q, got r={r}, p={p}, q={q}")));
    }
    if s.len() != p - r {
        return Err(Error::InvalidParams(format!(
            "need {} spectral values, got {}",
            p - r,
            s.len()
        )));
    }
    let hs = (p + q) as f64 / 2.0;
    let wr = block.w_last();
    let mut acc = LogAcc::default();
    for &sn in s {
        acc.gamma_sq((alpha - hs + 1.0) / 2.0 + wr, sn / 2.0, 1.0);
        c_function_factor(&mut acc, p, q, sn);
    }
    for k in 1..=r {
        let wk = block.w_at(k);
        for &sl in s {
            acc.gamma_sq((1.0 - alpha + hs - 2.0 * wk) / 2.0, sl / 2.0, 1.0);
            acc.gamma_sq((-alpha + hs - 2.0 * wk) / 2.0, sl / 2.0, -1.0);
            pochhammer_sq(&mut acc, (alpha - hs + wk) / 2.0, sl / 2.0, block.u[k - 1], -1.0);
        }
    }
    for n in 0..s.len() {
        for l in n + 1..s.len() {
            acc.interaction(s[l], s[n]);
        }
    }
    if acc.zeros > 0 && s.contains(&0.0) && acc.poles == 0 {
        return Ok(0.0);
    }
    acc.finish("Q_u")
}

/// C_w, V_w(α) and Q_w(α | s) for U(p,q); `w` lists the r discrete parameters.
pub fn coeff_cvq_u(
    alpha: f64,
    w: &[u64],
    s: &[f64],
    p: usize,
    q: usize,
) -> Result<(GammaValue, GammaValue, f64)> {
    let r = w.len();
    if p == 0 || r > p || p > q {
        return Err(Error::InvalidParams(format!("need r <= p <= q, got r={r}, p={p}, q={q}")));
    }
    if s.len() != p - r {
        return Err(Error::InvalidParams(format!(
            "need {} spectral values, got {}",
            p - r,
            s.len()
        )));
    }
    for k in 0..r {
        if w[k + 1..].contains(&w[k]) {
            return Err(Error::InvalidParams("w entries must be distinct".into()));
        }
    }
    let n = (p + q) as f64;
    let (pf, qf) = (p as f64, q as f64);
    let wf: Vec<f64> = w.iter().map(|&x| x as f64).collect();

    let mut c = GammaValue::from_ln(ln_combinatorial_prefactor(p, r));
    for k in 0..r {
        if w[k] % 2 == 1 {
            c = c * GammaValue::from_f64(-1.0);
        }
        c = c / GammaValue::from_ln(ln_factorial(w[k]));
        for l in k + 1..r {
            c = c * GammaValue::from_f64((wf[k] - wf[l]).powi(2));
        }
    }

    let mut v: GammaValue = (1..=p)
        .map(|m| GammaValue::gamma(alpha / 2.0 - m as f64 + 1.0, 0.5).powi(-2))
        .product();
    for k in 0..r {
        v = v * GammaValue::gamma(alpha / 2.0 - pf + 1.0 + wf[k], 0.5).powi(2)
            * GammaValue::gamma(-alpha / 2.0 + qf - wf[k], -0.5).powi(2)
            / GammaValue::gamma(-alpha + n - 1.0 + 2.0 * wf[k], -1.0)
            / GammaValue::pochhammer(alpha - n + 1.0 + wf[k], 1.0, w[k]);
        for l in k + 1..r {
            v = v * GammaValue::linear(alpha - n + 1.0 + wf[k] + wf[l], 1.0).powi(2);
        }
    }
    let v = reject_pole(v)?;

    let mut acc = LogAcc::default();
    for &wk in &wf[..r] {
        let a = (alpha - n + 1.0 + 2.0 * wk) / 2.0;
        for &sn in s {
            acc.real((a * a + sn * sn).powi(2), 1.0);
        }
    }
    for &sn in s {
        let mut g = LogAcc::default();
        g.gamma_sq((qf - pf + 1.0) / 2.0, sn / 2.0, 1.0);
        acc.ln += 2.0 * g.ln;
        acc.poles += 2 * g.poles;
        acc.gamma_sq((alpha - n + 1.0) / 2.0, sn / 2.0, 1.0);
        acc.inv_gamma_is_sq(sn);
    }
    for m in 0..s.len() {
        for l in m + 1..s.len() {
            acc.real((s[l] * s[l] - s[m] * s[m]).powi(2), 1.0);
        }
    }
    let qv = if acc.zeros > 0 && acc.poles == 0 { 0.0 } else { acc.finish("Q_w")? };
    Ok((c, v, qv))
}

/// Blocks and V-values at one α, used by the degeneration checks.
#[derive(Debug, Clone, Serialize)]
pub struct BlockValue {
    pub block: BlockIndex,
    pub v_order: i32,
    pub v_value: f64,
}

pub fn block_values_o(params: &PlancherelParams) -> Result<Vec<BlockValue>> {
    surviving_blocks(params)
        .into_iter()
        .map(|b| {
            let v = coeff_v_o(params.alpha, &b, params.p, params.q)?;
            Ok(BlockValue {
                block: b,
                v_order: v.order,
                v_value: v.value(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Degeneration {
    /// Every block with r < p has a vanishing V.
    pub lower_blocks_vanish: bool,
    /// Some block with r = p has a finite nonzero V.
    pub top_block_survives: bool,
    pub n_blocks: usize,
}

impl Degeneration {
    pub fn holds(&self) -> bool {
        self.lower_blocks_vanish && self.top_block_survives
    }
}

pub fn degeneration_o(params: &PlancherelParams) -> Result<Degeneration> {
    let vals = block_values_o(params)?;
    let p = params.p;
    Ok(Degeneration {
        lower_blocks_vanish: vals.iter().filter(|b| b.block.r < p).all(|b| b.v_order < 0),
        top_block_survives: vals.iter().any(|b| b.block.r == p && b.v_order == 0),
        n_blocks: vals.len(),
    })
}

/// Increasing w (r = 0..p) with 2w_r < (p+q−1) − α, i.e. a negative spherical
/// parameter α − (p+q) + 1 + 2w_r, the U(p,q) counterpart of w_r < h − α.
pub fn surviving_w_u(p: usize, q: usize, alpha: f64) -> Vec<Vec<u64>> {
    let bound = (p + q) as f64 - 1.0 - alpha;
    let mut out = Vec::new();
    if bound <= 0.0 {
        out.push(Vec::new());
        return out;
    }
    let w_max = ((bound / 2.0).ceil() as u64).saturating_sub(1);
    for r in 0..=p {
        let mut ws = Vec::new();
        increasing(r, 0, w_max, &mut Vec::new(), &mut ws);
        out.extend(ws.into_iter().filter(|w| w.last().is_none_or(|&x| 2.0 * (x as f64) < bound)));
    }
    out
}

/// U(p,q) analogue of [`degeneration_o`] over [`surviving_w_u`].
pub fn degeneration_u(p: usize, q: usize, alpha: f64) -> Result<Degeneration> {
    let mut lower = true;
    let mut top = false;
    let blocks = surviving_w_u(p, q, alpha);
    for w in &blocks {
        let r = w.len();
        let (_, v, _) = coeff_cvq_u(alpha, w, &vec![1.0; p - r], p, q)?;
        if r < p && !v.is_zero() {
            lower = false;
        }
        if r == p && v.is_finite_nonzero() {
            top = true;
        }
    }
    Ok(Degeneration {
        lower_blocks_vanish: lower,
        top_block_survives: top,
        n_blocks: blocks.len(),
    })
}

fn increasing(r: usize, from: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if prefix.len() == r {
        out.push(prefix.clone());
        return;
    }
    for x in from..=max {
        prefix.push(x);
        increasing(r, x + 1, max, prefix, out);
        prefix.pop();
    }
}

/// r = 0 consistency: C·V·Q divided by the continuous weight at each s.
/// The ratios must agree (the prefactor 1/∏Γ(α−k+1) and 2^p are s-independent).
pub fn r0_ratios(params: &PlancherelParams, grid: &[Vec<f64>]) -> Result<Vec<f64>> {
    let b = BlockIndex::continuous();
    let cv = coeff_c(&b, params.p)? * coeff_v_o(params.alpha, &b, params.p, params.q)?;
    grid.iter()
        .map(|s| {
            let qv = coeff_q_o(params.alpha, &b, s, params.p, params.q)?;
            let w = continuous_weight_o(params, s)?;
            Ok(cv.value() * qv / w)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rank1Config {
    pub q: usize,
    pub alpha: f64,
    pub t_grid: Vec<f64>,
    pub s_max: f64,
    /// Number of Simpson intervals on [0, s_max] (rounded up to even).
    pub n_quad: usize,
    /// Stratified draws of the first coordinate on S^{q−1}.
    pub n_mc: usize,
    pub seed: u64,
    /// Budget on the oracle stderr relative to cosh^{−α} t.
    pub stderr_budget: f64,
}

impl Rank1Config {
    pub fn new(q: usize, alpha: f64, t_grid: Vec<f64>, seed: u64) -> Self {
        Rank1Config {
            q,
            alpha,
            t_grid,
            s_max: 40.0,
            n_quad: 1000,
            n_mc: 50_000,
            seed,
            stderr_budget: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rank1Row {
    pub t: f64,
    pub expected: f64,
    pub observed: f64,
    pub rel_residual: f64,
    pub oracle_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rank1Report {
    pub rows: Vec<Rank1Row>,
    pub max_residual: f64,
    /// Calibrated constant A (at t = 0).
    pub a_const: f64,
}

/// Rank-one check of cosh^{−α} t = A ∫₀^∞ W(s) Φ_s(t) ds on O(1,q), with
/// Φ_s(t) = E (cosh t + sinh t·ξ₁)^{is−ρ}, ρ = (q−1)/2, ξ uniform on S^{q−1}.
/// ξ₁ has density ∝ (1−x²)^{(q−3)/2}; it is drawn by stratified inversion.
pub fn rank1_plancherel_probe(cfg: &Rank1Config) -> Result<Rank1Report> {
    let q = cfg.q;
    if q < 2 {
        return Err(Error::InvalidParams("rank-one probe needs q >= 2".into()));
    }
    let edge = (1.0 + q as f64) / 2.0 - 1.0;
    if !(cfg.alpha > edge) {
        return Err(Error::Precondition(format!(
            "alpha = {} must exceed {edge}",
            cfg.alpha
        )));
    }
    if cfg.n_mc < 2 || cfg.n_quad < 2 || !(cfg.s_max > 0.0) {
        return Err(Error::InvalidParams("n_mc, n_quad >= 2 and s_max > 0 required".into()));
    }
    let params = PlancherelParams::new(1, q, cfg.alpha)?;
    let n_int = cfg.n_quad + cfg.n_quad % 2;
    let hstep = cfg.s_max / n_int as f64;
    let weights: Vec<f64> = (0..=n_int)
        .map(|j| {
            let simpson = if j == 0 || j == n_int {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            Ok(simpson * hstep / 3.0 * continuous_weight_o(&params, &[j as f64 * hstep])?)
        })
        .collect::<Result<_>>()?;
    let total: f64 = weights.iter().sum();
    let a_const = 1.0 / total;

    let shape = (q as f64 - 1.0) / 2.0;
    let beta = Beta::new(shape, shape).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let mut rng = block_rng(cfg.seed, 0);
    let xi: Vec<f64> = (0..cfg.n_mc)
        .map(|i| {
            let u = (i as f64 + rng.random::<f64>()) / cfg.n_mc as f64;
            2.0 * beta.inverse_cdf(u) - 1.0
        })
        .collect();
    let rho = shape;

    let rows: Vec<Rank1Row> = cfg
        .t_grid
        .par_iter()
        .map(|&t| {
            let (ch, sh) = (t.cosh(), t.sinh());
            let f: Vec<f64> = xi
                .iter()
                .map(|&x| {
                    let y = ch + sh * x;
                    let l = y.ln();
                    // Σ_j W_j cos(s_j l) with s_j = j·h, by rotation
                    let step = Complex64::from_polar(1.0, hstep * l);
                    let mut z = Complex64::new(1.0, 0.0);
                    let mut acc = 0.0;
                    for &wj in &weights {
                        acc += wj * z.re;
                        z *= step;
                    }
                    a_const * acc * (-rho * l).exp()
                })
                .collect();
            let n = f.len() as f64;
            let mean = f.iter().sum::<f64>() / n;
            let pair_sq: f64 = f.chunks_exact(2).map(|c| (c[0] - c[1]).powi(2)).sum();
            let se = pair_sq.sqrt() / n;
            let expected = t.cosh().powf(-cfg.alpha);
            Rank1Row {
                t,
                expected,
                observed: mean,
                rel_residual: (mean - expected).abs() / expected,
                oracle_stderr: se,
            }
        })
        .collect();
    for row in &rows {
        let rel = row.oracle_stderr / row.expected;
        if rel > cfg.stderr_budget {
            return Err(Error::OracleVarianceTooHigh {
                stderr: rel,
                budget: cfg.stderr_budget,
            });
        }
    }
    let max_residual = rows.iter().map(|r| r.rel_residual).fold(0.0, f64::max);
    Ok(Rank1Report {
        rows,
        max_residual,
        a_const,
    })
}
