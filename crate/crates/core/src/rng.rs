//! Seeded random streams that count every primitive draw.
//!
//! The generator is xoshiro256++ (Blackman and Vigna), seeded from a single
//! `u64` through SplitMix64 as implemented by `rand_xoshiro`. Changing the
//! algorithm changes every golden output in this crate and requires a version
//! bump.
//!
//! Draw counts are the cost unit reported by the samplers: each Bernoulli
//! trial, each uniform variate and each normal variate is one draw,
//! including variates spent on rejected proposals inside
//! [`RngStream::truncated_normal`].

use std::ops::{Add, Sub};

use rand::{Rng, RngCore, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DrawCounter {
    pub bernoulli: u64,
    pub uniform: u64,
    pub normal: u64,
}

impl DrawCounter {
    pub fn total(&self) -> u64 {
        self.bernoulli + self.uniform + self.normal
    }
}

impl Sub for DrawCounter {
    type Output = DrawCounter;

    fn sub(self, rhs: Self) -> Self {
        DrawCounter {
            bernoulli: self.bernoulli - rhs.bernoulli,
            uniform: self.uniform - rhs.uniform,
            normal: self.normal - rhs.normal,
        }
    }
}

impl Add for DrawCounter {
    type Output = DrawCounter;

    fn add(self, rhs: Self) -> Self {
        DrawCounter {
            bernoulli: self.bernoulli + rhs.bernoulli,
            uniform: self.uniform + rhs.uniform,
            normal: self.normal + rhs.normal,
        }
    }
}

/// A single-owner random stream. Identical seeds and call sequences give
/// identical outputs and counters on every platform.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: Xoshiro256PlusPlus,
    counter: DrawCounter,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
            counter: DrawCounter::default(),
        }
    }

    /// Stream for replication `index` under root seed `seed`: `seed + index`.
    pub fn substream(seed: u64, index: u64) -> Self {
        Self::new(seed.wrapping_add(index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> DrawCounter {
        self.counter
    }

    fn unit(&mut self) -> f64 {
        // 53 high bits scaled into [0, 1).
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One Bernoulli trial with success probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("Bernoulli probability {p} not in [0, 1]")));
        }
        Ok(self.bernoulli_unchecked(p))
    }

    /// Bernoulli trial for a `p` already known to lie in `[0, 1]`.
    pub(crate) fn bernoulli_unchecked(&mut self, p: f64) -> bool {
        self.counter.bernoulli += 1;
        self.unit() < p
    }

    /// Uniform variate on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.counter.uniform += 1;
        self.unit()
    }

    /// Uniform integer in `0..n`; counted as one uniform draw.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be nonempty");
        self.counter.uniform += 1;
        self.inner.random_range(0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.counter.normal += 1;
        self.inner.sample(StandardNormal)
    }

    /// Draw from `N(mean, variance)` conditioned on `[0, 1]`.
    ///
    /// When `mean` lies in `[0, 1]` and the standard deviation is at most 1,
    /// untruncated normals are drawn until one lands in range. Otherwise an
    /// exact rejection sampler with a better envelope is used: a uniform
    /// proposal for wide distributions centered inside the interval, and a
    /// truncated exponential proposal tangent to the log-density at the near
    /// endpoint when the mean lies outside it. All three are exact.
    pub fn truncated_normal(&mut self, mean: f64, variance: f64) -> Result<f64> {
        if !variance.is_finite() || variance <= 0.0 {
            return Err(Error::param(format!(
                "truncated normal variance must be positive and finite, got {variance}"
            )));
        }
        if !mean.is_finite() {
            return Err(Error::param(format!("truncated normal mean {mean} is not finite")));
        }
        let sd = variance.sqrt();
        if (0.0..=1.0).contains(&mean) {
            if sd <= 1.0 {
                loop {
                    let x = mean + sd * self.standard_normal();
                    if (0.0..=1.0).contains(&x) {
                        return Ok(x);
                    }
                }
            }
            // Envelope: constant at the peak exp(0) on [0, 1].
            loop {
                let x = self.uniform();
                let d = x - mean;
                if self.uniform() < (-d * d / (2.0 * variance)).exp() {
                    return Ok(x);
                }
            }
        }
        // Mean outside [0, 1]: mirror so the near endpoint is 1 and the
        // density increases on [0, 1].
        let (m, flip) = if mean > 1.0 { (mean, false) } else { (1.0 - mean, true) };
        let rate = (m - 1.0) / variance;
        loop {
            // Distance t = 1 - x from the near endpoint, drawn from an
            // exponential(rate) truncated to [0, 1].
            let u = self.uniform();
            let t = if rate < 1e-12 {
                u
            } else {
                -(u * (-rate).exp_m1()).ln_1p() / rate
            };
            let t = t.clamp(0.0, 1.0);
            if self.uniform() < (-t * t / (2.0 * variance)).exp() {
                let x = 1.0 - t;
                return Ok(if flip { 1.0 - x } else { x });
            }
        }
    }
}
