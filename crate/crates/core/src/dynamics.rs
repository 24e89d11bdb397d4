//! Trajectory engines: the free memory-sum iteration
//!
//!   x(t) = x(0) + Σ_{j=1..t} c_{t−j}·(f(x(j−1)) − x(j−1)),
//!
//! its delayed-feedback controlled variant x(t) = x(0) + b·x(t−τ) + Σ(...),
//! and the master–slave coupled pair where the slave carries an extra
//! control term H(x, y) inside its memory sum.
//!
//! Each increment f(x(j−1)) − x(j−1) is computed once when x(j−1) becomes
//! known and reused at every later step, so a T-step run costs O(T²) work
//! and O(T) memory. Simulations are strictly sequential in t; distinct
//! simulations share only the immutable kernel weights.

use crate::error::{Error, Result};
use crate::frackernel::{memory_sum, memory_sum_truncated, KernelWeights};
use crate::glmap::{at_pole, eval_map, MapParams};

/// States beyond this magnitude terminate a run as diverged. Far above any
/// attractor of the map family (all lie within |x| ≲ 5), but finite so
/// parameter sweeps stay total when a control gain pushes the state away.
pub const DIVERGENCE_BOUND: f64 = 1e8;

/// How a run ended. The payload is the step index of the offending state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    PoleHit(usize),
    Diverged(usize),
}

/// A simulated orbit together with the configuration that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: MapParams,
    pub x0: f64,
    /// x(0)..x(T); truncated at the offending state when the run ended early.
    pub states: Vec<f64>,
    pub outcome: Outcome,
}

impl Trajectory {
    pub fn is_completed(&self) -> bool {
        self.outcome == Outcome::Completed
    }

    /// Last `n` states (fewer when the trajectory is shorter).
    pub fn tail(&self, n: usize) -> &[f64] {
        let start = self.states.len().saturating_sub(n);
        &self.states[start..]
    }
}

/// Engine tuning knobs. `memory_window` enables short-memory truncation
/// (ignore lags beyond the window); it changes the dynamics and stays off
/// unless explicitly requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub divergence_bound: f64,
    pub memory_window: Option<usize>,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            divergence_bound: DIVERGENCE_BOUND,
            memory_window: None,
        }
    }
}

/// Delayed-feedback parameters: gain b and delay τ ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlConfig {
    pub b: f64,
    pub tau: usize,
}

impl ControlConfig {
    pub fn new(b: f64, tau: usize) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::NonFinite { name: "b", value: b });
        }
        if tau == 0 {
            return Err(Error::ZeroDelay);
        }
        Ok(Self { b, tau })
    }
}

/// Value substituted for x(t−τ) while t−τ < 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum HistoryRule {
    /// Constant pre-history equal to x(0).
    #[default]
    HoldX0,
    /// Constant pre-history with an explicit value.
    Constant(f64),
}

impl HistoryRule {
    fn resolve(&self, x0: f64) -> f64 {
        match self {
            HistoryRule::HoldX0 => x0,
            HistoryRule::Constant(v) => *v,
        }
    }
}

/// Synchronization controller choice. H3 and H4 are the r = 0 special-case
/// controllers; the gain intervals differ accordingly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Controller {
    H1,
    H2,
    H3,
    H4,
}

impl Controller {
    pub fn name(&self) -> &'static str {
        match self {
            Controller::H1 => "H1",
            Controller::H2 => "H2",
            Controller::H3 => "H3",
            Controller::H4 => "H4",
        }
    }

    pub fn requires_zero_r(&self) -> bool {
        matches!(self, Controller::H3 | Controller::H4)
    }
}

/// Slave-side coupling configuration. The sufficiency theory assumes p = μ,
/// but p is stored separately so mismatch experiments can be reproduced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncConfig {
    pub controller: Controller,
    pub p: f64,
    pub k: f64,
}

impl SyncConfig {
    pub fn new(controller: Controller, p: f64, k: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::NonFinite { name: "p", value: p });
        }
        if !k.is_finite() {
            return Err(Error::NonFinite { name: "k", value: k });
        }
        Ok(Self { controller, p, k })
    }
}

/// A master–slave run: both orbits plus the error sequence E(t) = x(t) − y(t).
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledRun {
    pub master: Trajectory,
    pub slave: Trajectory,
    pub error: Vec<f64>,
}

impl CoupledRun {
    pub fn is_completed(&self) -> bool {
        self.master.is_completed() && self.slave.is_completed()
    }
}

fn check_common(params: &MapParams, steps: usize, weights: &KernelWeights, opts: &SimOptions) -> Result<()> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    if weights.alpha() != params.alpha {
        return Err(Error::AlphaMismatch {
            kernel: weights.alpha(),
            map: params.alpha,
        });
    }
    if weights.horizon() + 1 < steps {
        return Err(Error::HorizonTooShort {
            needed: steps - 1,
            got: weights.horizon(),
        });
    }
    if !opts.divergence_bound.is_finite() || opts.divergence_bound <= 0.0 {
        return Err(Error::InvalidDivergenceBound(opts.divergence_bound));
    }
    Ok(())
}

fn check_state(x: f64, t: usize, params: &MapParams, bound: f64) -> Option<Outcome> {
    if !x.is_finite() || x.abs() > bound {
        Some(Outcome::Diverged(t))
    } else if at_pole(params, x) {
        Some(Outcome::PoleHit(t))
    } else {
        None
    }
}

fn convolve(weights: &KernelWeights, incr: &[f64], t: usize, opts: &SimOptions) -> f64 {
    let sum = match opts.memory_window {
        None => memory_sum(weights, incr, t),
        Some(w) => memory_sum_truncated(weights, incr, t, w),
    };
    sum.expect("increment length and horizon are maintained by the engine loop")
}

fn run_single(
    params: &MapParams,
    x0: f64,
    steps: usize,
    weights: &KernelWeights,
    opts: &SimOptions,
    feedback: Option<(f64, usize, f64)>,
) -> Trajectory {
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0);
    if at_pole(params, x0) {
        return Trajectory {
            params: *params,
            x0,
            states,
            outcome: Outcome::PoleHit(0),
        };
    }
    let mut incr = Vec::with_capacity(steps);
    for t in 1..=steps {
        let prev = states[t - 1];
        let f_prev = eval_map(params, prev).expect("states are pole-checked when produced");
        incr.push(f_prev - prev);
        let mem = convolve(weights, &incr, t, opts);
        let x_t = match feedback {
            None => x0 + mem,
            Some((b, tau, pre)) => {
                let delayed = if t >= tau { states[t - tau] } else { pre };
                x0 + b * delayed + mem
            }
        };
        states.push(x_t);
        if let Some(outcome) = check_state(x_t, t, params, opts.divergence_bound) {
            return Trajectory {
                params: *params,
                x0,
                states,
                outcome,
            };
        }
    }
    Trajectory {
        params: *params,
        x0,
        states,
        outcome: Outcome::Completed,
    }
}

/// Simulate the free system for `steps` steps, building kernel weights
/// internally. Use [`simulate_with`] to share weights across a sweep.
pub fn simulate(params: &MapParams, x0: f64, steps: usize) -> Result<Trajectory> {
    let weights = KernelWeights::build(params.alpha, steps.saturating_sub(1))?;
    simulate_with(params, x0, steps, &weights, &SimOptions::default())
}

/// Simulate the free system with shared weights and explicit options.
pub fn simulate_with(
    params: &MapParams,
    x0: f64,
    steps: usize,
    weights: &KernelWeights,
    opts: &SimOptions,
) -> Result<Trajectory> {
    if !x0.is_finite() {
        return Err(Error::NonFinite { name: "x0", value: x0 });
    }
    check_common(params, steps, weights, opts)?;
    Ok(run_single(params, x0, steps, weights, opts, None))
}

/// Simulate the delayed-feedback controlled system.
///
/// A zero gain takes exactly the free-engine arithmetic path, so b = 0
/// reproduces [`simulate_with`] bitwise on the same inputs.
pub fn simulate_controlled(
    params: &MapParams,
    control: &ControlConfig,
    x0: f64,
    history: HistoryRule,
    steps: usize,
) -> Result<Trajectory> {
    let weights = KernelWeights::build(params.alpha, steps.saturating_sub(1))?;
    simulate_controlled_with(params, control, x0, history, steps, &weights, &SimOptions::default())
}

pub fn simulate_controlled_with(
    params: &MapParams,
    control: &ControlConfig,
    x0: f64,
    history: HistoryRule,
    steps: usize,
    weights: &KernelWeights,
    opts: &SimOptions,
) -> Result<Trajectory> {
    if !x0.is_finite() {
        return Err(Error::NonFinite { name: "x0", value: x0 });
    }
    if control.tau == 0 {
        return Err(Error::ZeroDelay);
    }
    if !control.b.is_finite() {
        return Err(Error::NonFinite {
            name: "b",
            value: control.b,
        });
    }
    check_common(params, steps, weights, opts)?;
    let feedback = if control.b == 0.0 {
        None
    } else {
        Some((control.b, control.tau, history.resolve(x0)))
    };
    Ok(run_single(params, x0, steps, weights, opts, feedback))
}

fn control_term(params: &MapParams, sync: &SyncConfig, x: f64, y: f64) -> f64 {
    let diff = x - y;
    match sync.controller {
        Controller::H1 => {
            let den_x = 1.0 + params.r * params.mu * x * (1.0 - x);
            let den_y = 1.0 + params.r * params.mu * y * (1.0 - y);
            (sync.p * diff - sync.p * (x * x - y * y)) / (den_x * den_y) + sync.k * diff
        }
        Controller::H2 => {
            let den_x = 1.0 + params.r * params.mu * x * (1.0 - x);
            let den_y = 1.0 + params.r * params.mu * y * (1.0 - y);
            sync.p * diff * (1.0 - 2.0 * x) / (den_x * den_y) + sync.k * diff
        }
        Controller::H3 => sync.k * diff - sync.p * (x * x - y * y),
        Controller::H4 => sync.k * diff + 2.0 * sync.p * (x * y - x * x),
    }
}

/// Simulate the coupled master–slave pair.
pub fn simulate_coupled(
    params: &MapParams,
    sync: &SyncConfig,
    x0: f64,
    y0: f64,
    steps: usize,
) -> Result<CoupledRun> {
    let weights = KernelWeights::build(params.alpha, steps.saturating_sub(1))?;
    simulate_coupled_with(params, sync, x0, y0, steps, &weights, &SimOptions::default())
}

/// Simulate the coupled pair with shared weights and explicit options.
///
/// The master evolves freely; the slave's increment carries the extra
/// control term evaluated at the previous (x, y). When either orbit hits
/// the pole or diverges, both stop at that step and the offender's outcome
/// records which trajectory failed.
pub fn simulate_coupled_with(
    params: &MapParams,
    sync: &SyncConfig,
    x0: f64,
    y0: f64,
    steps: usize,
    weights: &KernelWeights,
    opts: &SimOptions,
) -> Result<CoupledRun> {
    if !x0.is_finite() {
        return Err(Error::NonFinite { name: "x0", value: x0 });
    }
    if !y0.is_finite() {
        return Err(Error::NonFinite { name: "y0", value: y0 });
    }
    if sync.controller.requires_zero_r() && params.r != 0.0 {
        return Err(Error::ControllerRequiresZeroR {
            controller: sync.controller.name(),
            r: params.r,
        });
    }
    check_common(params, steps, weights, opts)?;

    let mut xs = vec![x0];
    let mut ys = vec![y0];
    let mut outcome_x = Outcome::Completed;
    let mut outcome_y = Outcome::Completed;

    if at_pole(params, x0) {
        outcome_x = Outcome::PoleHit(0);
    } else if at_pole(params, y0) {
        outcome_y = Outcome::PoleHit(0);
    } else {
        let mut gx = Vec::with_capacity(steps);
        let mut gy = Vec::with_capacity(steps);
        for t in 1..=steps {
            let (xp, yp) = (xs[t - 1], ys[t - 1]);
            let fx = eval_map(params, xp).expect("master states are pole-checked when produced");
            let fy = eval_map(params, yp).expect("slave states are pole-checked when produced");
            gx.push(fx - xp);
            gy.push(fy - yp + control_term(params, sync, xp, yp));
            let x_t = x0 + convolve(weights, &gx, t, opts);
            let y_t = y0 + convolve(weights, &gy, t, opts);
            xs.push(x_t);
            ys.push(y_t);
            if let Some(o) = check_state(x_t, t, params, opts.divergence_bound) {
                outcome_x = o;
                break;
            }
            if let Some(o) = check_state(y_t, t, params, opts.divergence_bound) {
                outcome_y = o;
                break;
            }
        }
    }

    let error: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| x - y).collect();
    Ok(CoupledRun {
        master: Trajectory {
            params: *params,
            x0,
            states: xs,
            outcome: outcome_x,
        },
        slave: Trajectory {
            params: *params,
            x0: y0,
            states: ys,
            outcome: outcome_y,
        },
        error,
    })
}

/// Open interval of coupling gains k for which the chosen controller is
/// guaranteed to synchronize the pair (assuming p = μ): (−1, −1+2^α) for
/// H1/H2, shifted to (μ−1, μ−1+2^α) for the r = 0 controllers H3/H4.
///
/// The bound is sufficient, not necessary; gains outside it may still
/// synchronize. For the related iteration x(t) = x(0) + Σ c_{t−j}·f(x(j−1))
/// that omits the −x(j−1) term the whole interval shifts by one more unit
/// to (μ, μ+2^α); that variant is not simulated here.
pub fn sync_gain_interval(params: &MapParams, controller: Controller) -> Result<(f64, f64)> {
    match controller {
        Controller::H1 | Controller::H2 => Ok((-1.0, -1.0 + 2f64.powf(params.alpha))),
        Controller::H3 | Controller::H4 => {
            if params.r != 0.0 {
                return Err(Error::ControllerRequiresZeroR {
                    controller: controller.name(),
                    r: params.r,
                });
            }
            Ok((params.mu - 1.0, params.mu - 1.0 + 2f64.powf(params.alpha)))
        }
    }
}
