use thiserror::Error;

/// Errors reported by the map, kernel, simulation and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alpha must lie in (0,1], got {0}")]
    InvalidAlpha(f64),
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("memory sum at step {step} needs {step} increments, got {got}")]
    IncrementLength { step: usize, got: usize },
    #[error("kernel horizon is {got}, need at least {needed}")]
    HorizonTooShort { needed: usize, got: usize },
    #[error("kernel was built for alpha = {kernel}, map has alpha = {map}")]
    AlphaMismatch { kernel: f64, map: f64 },
    #[error("x = {x} is at the pole of the map (denominator {denominator:e})")]
    PoleHit { x: f64, denominator: f64 },
    #[error("x = {x} is not a fixed point (residual {residual:e})")]
    NotAFixedPoint { x: f64, residual: f64 },
    #[error("equilibrium index must be 1, 2 or 3, got {0}")]
    InvalidEquilibriumIndex(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("steps must be at least 1")]
    ZeroSteps,
    #[error("delay tau must be at least 1")]
    ZeroDelay,
    #[error("controller {controller} requires r = 0, got r = {r}")]
    ControllerRequiresZeroR { controller: &'static str, r: f64 },
    #[error("trajectory of length {len} is shorter than transient {transient} + tail {tail}")]
    TrajectoryTooShort {
        len: usize,
        transient: usize,
        tail: usize,
    },
    #[error("tail window {tail} too short for p_max {p_max} (need tail >= 2*p_max)")]
    TailTooShort { tail: usize, p_max: usize },
    #[error("feedback boundary requires 0 < alpha < 1, got {0}")]
    BoundaryAlphaRange(f64),
    #[error("need at least {needed} boundary samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("multistability probe needs at least 2 initial conditions, got {0}")]
    TooFewInitialConditions(usize),
    #[error("divergence bound must be positive and finite, got {0}")]
    InvalidDivergenceBound(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
