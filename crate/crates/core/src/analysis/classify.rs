//! Asymptotic period classification of trajectory tails.
//!
//! Fractional-order orbits are never exactly periodic, so classification is
//! tolerance-based: a tail is asymptotically period-p when the worst
//! p-lagged difference over the tail window stays below a tolerance scaled
//! by the tail amplitude. "Chaotic" means no period up to p_max qualifies.

use crate::dynamics::{Outcome, Trajectory};
use crate::error::{Error, Result};

/// Classification outcome for one trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodKind {
    Period(u32),
    Chaotic,
    Divergent,
    PoleHit,
}

impl PeriodKind {
    /// Short lower-case label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            PeriodKind::Period(_) => "period",
            PeriodKind::Chaotic => "chaotic",
            PeriodKind::Divergent => "divergent",
            PeriodKind::PoleHit => "polehit",
        }
    }

    /// Detected period, 0 when not applicable.
    pub fn period(&self) -> u32 {
        match self {
            PeriodKind::Period(p) => *p,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodClass {
    pub kind: PeriodKind,
    /// Worst tail residual |x(t) − x(t−p)| for the accepted period,
    /// 0 when not applicable.
    pub residual: f64,
}

/// Classify the tail of `traj`.
///
/// Returns the smallest p ≤ p_max whose worst p-lagged difference over the
/// last `tail` states is below tol·max(1, tail amplitude), so a settled
/// fixed point is Period(1) and never Period(2). Trajectories that ended
/// early map straight to Divergent / PoleHit.
pub fn classify_period(
    traj: &Trajectory,
    transient: usize,
    tail: usize,
    p_max: usize,
    tol: f64,
) -> Result<PeriodClass> {
    match traj.outcome {
        Outcome::PoleHit(_) => {
            return Ok(PeriodClass {
                kind: PeriodKind::PoleHit,
                residual: 0.0,
            })
        }
        Outcome::Diverged(_) => {
            return Ok(PeriodClass {
                kind: PeriodKind::Divergent,
                residual: 0.0,
            })
        }
        Outcome::Completed => {}
    }
    if tail < 2 * p_max {
        return Err(Error::TailTooShort { tail, p_max });
    }
    if traj.states.len() < transient + tail {
        return Err(Error::TrajectoryTooShort {
            len: traj.states.len(),
            transient,
            tail,
        });
    }
    let window = &traj.states[traj.states.len() - tail..];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in window {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    let scale = tol * (hi - lo).max(1.0);

    for p in 1..=p_max {
        let mut worst = 0.0f64;
        for i in p..window.len() {
            worst = worst.max((window[i] - window[i - p]).abs());
        }
        if worst < scale {
            return Ok(PeriodClass {
                kind: PeriodKind::Period(p as u32),
                residual: worst,
            });
        }
    }
    Ok(PeriodClass {
        kind: PeriodKind::Chaotic,
        residual: 0.0,
    })
}
