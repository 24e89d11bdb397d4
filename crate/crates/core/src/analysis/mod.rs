//! Asymptotic classification and figure-dataset generation: 1D bifurcation
//! sweeps, 2D phase diagrams, delayed-feedback stability regions and
//! multistability probes.

mod classify;
mod feedback;
mod sweep;

pub use classify::{classify_period, PeriodClass, PeriodKind};
pub use feedback::{
    control_interval, corner, curve_a, curve_b, feedback_boundary, BoundaryPoint, FeedbackRegion,
};
pub use sweep::{
    bifurcation_1d, multistability_probe, multistability_sweep, phase_diagram_2d,
    MultistabilityReport, MultistabilitySweep, PairVerdict, PhaseCell, PhaseDiagram, ProbeRun,
    SweepAxis, SweepConfig, SweepPoint, SweepResult,
};
