//! Fractional-sum kernel: Gamma-ratio weights and the memory convolution
//! shared by every trajectory engine.
//!
//! The weight of lag n is c_n = Γ(n+α) / (Γ(α)·Γ(n+1)). Weights are built by
//! the multiplicative recurrence c_0 = 1, c_{n+1} = c_n·(n+α)/(n+1), which
//! never evaluates a raw Gamma function: Γ(n+α) alone overflows an f64 for
//! n ≳ 170 while the normalized ratio stays modest for any horizon.

use crate::error::{Error, Result};

/// Precomputed kernel weights c_0..c_N for a fixed order α.
///
/// Immutable after construction; a single instance is shared read-only by all
/// trajectories of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWeights {
    alpha: f64,
    coeffs: Vec<f64>,
}

impl KernelWeights {
    /// Build weights for lags 0..=horizon.
    pub fn build(alpha: f64, horizon: usize) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(Error::InvalidAlpha(alpha));
        }
        let mut coeffs = Vec::with_capacity(horizon + 1);
        coeffs.push(1.0);
        for n in 0..horizon {
            let n = n as f64;
            let next = coeffs[coeffs.len() - 1] * (n + alpha) / (n + 1.0);
            coeffs.push(next);
        }
        Ok(Self { alpha, coeffs })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Largest lag covered.
    pub fn horizon(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Memory convolution Σ_{j=1..t} c_{t−j}·increments[j−1].
///
/// Terms are accumulated oldest (largest lag) first, so the small late-lag
/// contributions are summed before the O(1) recent ones. Pure function.
pub fn memory_sum(weights: &KernelWeights, increments: &[f64], t: usize) -> Result<f64> {
    if increments.len() < t {
        return Err(Error::IncrementLength {
            step: t,
            got: increments.len(),
        });
    }
    if t > 0 && weights.horizon() < t - 1 {
        return Err(Error::HorizonTooShort {
            needed: t - 1,
            got: weights.horizon(),
        });
    }
    Ok(increments[..t]
        .iter()
        .zip(weights.coeffs[..t].iter().rev())
        .map(|(g, c)| c * g)
        .sum())
}

/// Short-memory variant: lags greater than `window` are dropped.
///
/// Truncation changes the dynamics; it exists for performance experiments
/// only and nothing uses it unless explicitly requested.
pub fn memory_sum_truncated(
    weights: &KernelWeights,
    increments: &[f64],
    t: usize,
    window: usize,
) -> Result<f64> {
    if increments.len() < t {
        return Err(Error::IncrementLength {
            step: t,
            got: increments.len(),
        });
    }
    let first_j = t.saturating_sub(window).max(1);
    if t > 0 && weights.horizon() + first_j < t {
        return Err(Error::HorizonTooShort {
            needed: t - first_j,
            got: weights.horizon(),
        });
    }
    Ok((first_j..=t).map(|j| weights.coeffs[t - j] * increments[j - 1]).sum())
}
