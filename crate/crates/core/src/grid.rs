use crate::error::{Error, Result};

/// Uniform 1D parameter grid with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    lo: f64,
    hi: f64,
    count: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "endpoints must be finite, got [{lo}, {hi}]"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidGrid("point count must be at least 1".into()));
        }
        if count == 1 && lo != hi {
            return Err(Error::InvalidGrid(format!(
                "a single-point grid needs lo == hi, got [{lo}, {hi}]"
            )));
        }
        if count > 1 && lo >= hi {
            return Err(Error::InvalidGrid(format!(
                "need lo < hi for a multi-point grid, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi, count })
    }

    /// Single-point grid, handy for treating a scalar as a degenerate sweep.
    pub fn singleton(value: f64) -> Result<Self> {
        Self::new(value, value, 1)
    }

    /// Grid from a step size: points lo, lo+step, ... up to (and including) hi
    /// when hi lands on the lattice, otherwise up to the last point below hi.
    pub fn with_step(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "step must be positive and finite, got {step}"
            )));
        }
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidGrid(format!(
                "need finite lo <= hi, got [{lo}, {hi}]"
            )));
        }
        // small relative slack so hi itself is kept despite rounding
        let span = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize;
        let count = span + 1;
        if count == 1 {
            Self::new(lo, lo, 1)
        } else {
            Self::new(lo, lo + span as f64 * step, count)
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// i-th grid value; strictly increasing in i.
    pub fn value(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        if self.count == 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.value(i))
    }

    pub fn values(&self) -> Vec<f64> {
        self.iter().collect()
    }
}
