//! Blocked, reproducible Monte Carlo estimation.
//!
//! Samples are grouped in fixed-size blocks. Block `i` draws from a ChaCha8
//! stream keyed by `(seed, i)`, and block moments are merged in block order,
//! so the estimate does not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 200_000;
pub const DEFAULT_BLOCK: usize = 4096;
/// Maximum number of rejected draws tolerated per accepted sample.
pub const MAX_RESAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExecutionMode {
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, Copy)]
pub struct SamplingPlan {
    pub seed: u64,
    pub n_samples: usize,
    pub block_size: usize,
    pub mode: ExecutionMode,
}

impl SamplingPlan {
    pub fn new(seed: u64, n_samples: usize) -> Self {
        SamplingPlan {
            seed,
            n_samples,
            block_size: DEFAULT_BLOCK,
            mode: ExecutionMode::Parallel,
        }
    }

    pub fn sequential(mut self) -> Self {
        self.mode = ExecutionMode::Sequential;
        self
    }

    pub fn with_block_size(mut self, block_size: usize) -> Self {
        self.block_size = block_size.max(1);
        self
    }

    fn blocks(&self) -> Vec<(u64, usize)> {
        let bs = self.block_size.max(1);
        let nb = self.n_samples.div_ceil(bs);
        (0..nb)
            .map(|i| (i as u64, bs.min(self.n_samples - i * bs)))
            .collect()
    }
}

/// RNG for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub resamples: usize,
}

/// Running moments (Welford / Chan merge).
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    pub m2: f64,
    pub max_abs: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
        self.max_abs = self.max_abs.max(x.abs());
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = (self.n + other.n) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n;
        self.m2 += other.m2 + d * d * self.n as f64 * other.n as f64 / n;
        self.n += other.n;
        self.max_abs = self.max_abs.max(other.max_abs);
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        self.m2 / (self.n - 1) as f64
    }

    pub fn stderr(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Runs `body(rng, len)` for every block and returns the outputs in block order.
pub fn map_blocks<T, F>(plan: &SamplingPlan, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    let blocks = plan.blocks();
    let run = |&(i, len): &(u64, usize)| {
        let mut rng = block_rng(plan.seed, i);
        body(&mut rng, len)
    };
    match plan.mode {
        ExecutionMode::Sequential => blocks.iter().map(run).collect(),
        ExecutionMode::Parallel => blocks.par_iter().map(run).collect(),
    }
}

/// Draws `plan.n_samples` values. `sample` returns `Ok(None)` to request a
/// redraw (e.g. a near-singular configuration); redraws are counted.
pub fn sample_values<F>(plan: &SamplingPlan, sample: F) -> Result<(Vec<f64>, usize)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<f64>> + Sync,
{
    let parts = map_blocks(plan, |rng, len| -> Result<(Vec<f64>, usize)> {
        let mut out = Vec::with_capacity(len);
        let mut rejected = 0usize;
        while out.len() < len {
            match sample(rng)? {
                Some(v) => out.push(v),
                None => {
                    rejected += 1;
                    if rejected > MAX_RESAMPLES * len.max(1) {
                        return Err(Error::Precondition(
                            "too many rejected draws while sampling".into(),
                        ));
                    }
                }
            }
        }
        Ok((out, rejected))
    });
    let mut values = Vec::with_capacity(plan.n_samples);
    let mut rejected = 0;
    for p in parts {
        let (v, r) = p?;
        values.extend(v);
        rejected += r;
    }
    Ok((values, rejected))
}

/// Mean and standard error of `sample` over the plan.
pub fn estimate<F>(plan: &SamplingPlan, sample: F) -> Result<MCEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<f64>> + Sync,
{
    let (m, resamples) = estimate_moments(plan, sample)?;
    Ok(MCEstimate {
        mean: m.mean,
        stderr: m.stderr(),
        n_samples: m.n,
        seed: plan.seed,
        resamples,
    })
}

pub fn estimate_moments<F>(plan: &SamplingPlan, sample: F) -> Result<(Moments, usize)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<f64>> + Sync,
{
    let parts = map_blocks(plan, |rng, len| -> Result<(Moments, usize)> {
        let mut m = Moments::default();
        let mut rejected = 0usize;
        while m.n < len {
            match sample(rng)? {
                Some(v) => m.push(v),
                None => {
                    rejected += 1;
                    if rejected > MAX_RESAMPLES * len.max(1) {
                        return Err(Error::Precondition(
                            "too many rejected draws while sampling".into(),
                        ));
                    }
                }
            }
        }
        Ok((m, rejected))
    });
    let mut total = Moments::default();
    let mut rejected = 0;
    for p in parts {
        let (m, r) = p?;
        total.merge(&m);
        rejected += r;
    }
    Ok((total, rejected))
}

/// Like [`estimate`] for a complex-valued integrand; returns the real and
/// imaginary estimates.
pub fn estimate_complex<F>(plan: &SamplingPlan, sample: F) -> Result<(MCEstimate, MCEstimate)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<(f64, f64)>> + Sync,
{
    let parts = map_blocks(plan, |rng, len| -> Result<(Moments, Moments, usize)> {
        let (mut re, mut im) = (Moments::default(), Moments::default());
        let mut rejected = 0usize;
        while re.n < len {
            match sample(rng)? {
                Some((a, b)) => {
                    re.push(a);
                    im.push(b);
                }
                None => {
                    rejected += 1;
                    if rejected > MAX_RESAMPLES * len.max(1) {
                        return Err(Error::Precondition(
                            "too many rejected draws while sampling".into(),
                        ));
                    }
                }
            }
        }
        Ok((re, im, rejected))
    });
    let (mut re, mut im) = (Moments::default(), Moments::default());
    let mut rejected = 0;
    for p in parts {
        let (a, b, r) = p?;
        re.merge(&a);
        im.merge(&b);
        rejected += r;
    }
    let pack = |m: &Moments| MCEstimate {
        mean: m.mean,
        stderr: m.stderr(),
        n_samples: m.n,
        seed: plan.seed,
        resamples: rejected,
    };
    Ok((pack(&re), pack(&im)))
}
