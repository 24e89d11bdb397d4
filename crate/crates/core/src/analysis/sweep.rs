//! Bifurcation sweeps, 2D phase diagrams and multistability probes.
//!
//! Sweep cells are independent pure computations over shared read-only
//! kernel weights; they run on whatever rayon pool is installed and the
//! ordered collect makes results identical for any worker count.

use rayon::prelude::*;

use crate::analysis::classify::{classify_period, PeriodClass};
use crate::dynamics::{simulate_with, SimOptions, Trajectory};
use crate::error::{Error, Result};
use crate::frackernel::KernelWeights;
use crate::glmap::MapParams;
use crate::grid::Grid;

/// Simulation plus classification settings for sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub steps: usize,
    pub transient: usize,
    pub tail: usize,
    pub p_max: usize,
    pub tol: f64,
    /// How many trailing states each sweep point keeps for plotting.
    pub keep_tail: usize,
    pub options: SimOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            steps: 1000,
            transient: 500,
            tail: 256,
            p_max: 64,
            tol: 1e-4,
            keep_tail: 64,
            options: SimOptions::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::ZeroSteps);
        }
        if self.tail < 2 * self.p_max {
            return Err(Error::TailTooShort {
                tail: self.tail,
                p_max: self.p_max,
            });
        }
        if self.steps + 1 < self.transient + self.tail {
            return Err(Error::TrajectoryTooShort {
                len: self.steps + 1,
                transient: self.transient,
                tail: self.tail,
            });
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::NonFinite {
                name: "tol",
                value: self.tol,
            });
        }
        Ok(())
    }

    pub fn classify(&self, traj: &Trajectory) -> Result<PeriodClass> {
        classify_period(traj, self.transient, self.tail, self.p_max, self.tol)
    }

    fn weights(&self, alpha: f64) -> Result<KernelWeights> {
        KernelWeights::build(alpha, self.steps.saturating_sub(1))
    }
}

/// Which map parameter a 1D sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Mu,
    R,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Mu => "mu",
            SweepAxis::R => "r",
        }
    }
}

/// One grid point of a 1D sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub class: PeriodClass,
    /// Up to `keep_tail` trailing states (shorter when the run ended early).
    pub tail: Vec<f64>,
}

/// Result of a 1D bifurcation sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub alpha: f64,
    pub axis: SweepAxis,
    /// Value of the non-swept parameter.
    pub fixed: f64,
    pub x0: f64,
    pub points: Vec<SweepPoint>,
}

/// Sweep one parameter, classifying the asymptotic behavior at each grid
/// point. Pole and divergence outcomes are recorded per point, never fatal.
pub fn bifurcation_1d(
    alpha: f64,
    axis: SweepAxis,
    fixed: f64,
    sweep: &Grid,
    x0: f64,
    cfg: &SweepConfig,
) -> Result<SweepResult> {
    cfg.validate()?;
    if !x0.is_finite() {
        return Err(Error::NonFinite { name: "x0", value: x0 });
    }
    let weights = cfg.weights(alpha)?;
    let points = sweep
        .values()
        .into_par_iter()
        .map(|value| -> Result<SweepPoint> {
            let params = match axis {
                SweepAxis::Mu => MapParams::new(alpha, value, fixed)?,
                SweepAxis::R => MapParams::new(alpha, fixed, value)?,
            };
            let traj = simulate_with(&params, x0, cfg.steps, &weights, &cfg.options)?;
            let class = cfg.classify(&traj)?;
            Ok(SweepPoint {
                value,
                class,
                tail: traj.tail(cfg.keep_tail).to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        alpha,
        axis,
        fixed,
        x0,
        points,
    })
}

/// One classified cell of the (μ, r) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCell {
    pub mu: f64,
    pub r: f64,
    pub class: PeriodClass,
}

/// 2D phase diagram: one PeriodClass per (μ, r) cell, μ-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub alpha: f64,
    pub x0: f64,
    pub mu: Grid,
    pub r: Grid,
    pub cells: Vec<PhaseCell>,
}

/// Classify every cell of a (μ, r) grid. Embarrassingly parallel; the output
/// ordering is fixed by the grids, not by scheduling.
pub fn phase_diagram_2d(
    alpha: f64,
    mu_grid: &Grid,
    r_grid: &Grid,
    x0: f64,
    cfg: &SweepConfig,
) -> Result<PhaseDiagram> {
    cfg.validate()?;
    if !x0.is_finite() {
        return Err(Error::NonFinite { name: "x0", value: x0 });
    }
    let weights = cfg.weights(alpha)?;
    let n_r = r_grid.len();
    let cells = (0..mu_grid.len() * n_r)
        .into_par_iter()
        .map(|idx| -> Result<PhaseCell> {
            let mu = mu_grid.value(idx / n_r);
            let r = r_grid.value(idx % n_r);
            let params = MapParams::new(alpha, mu, r)?;
            let traj = simulate_with(&params, x0, cfg.steps, &weights, &cfg.options)?;
            Ok(PhaseCell {
                mu,
                r,
                class: cfg.classify(&traj)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseDiagram {
        alpha,
        x0,
        mu: *mu_grid,
        r: *r_grid,
        cells,
    })
}

/// Classification of one initial condition in a multistability probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRun {
    pub x0: f64,
    pub class: PeriodClass,
    pub tail: Vec<f64>,
}

/// Pairwise verdict: do two initial conditions share an asymptotic class?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairVerdict {
    pub first: usize,
    pub second: usize,
    pub same_class: bool,
}

/// Multistability probe at fixed parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MultistabilityReport {
    pub params: MapParams,
    pub runs: Vec<ProbeRun>,
    pub pairs: Vec<PairVerdict>,
}

impl MultistabilityReport {
    /// True when at least one pair of initial conditions disagrees.
    pub fn has_distinct_classes(&self) -> bool {
        self.pairs.iter().any(|p| !p.same_class)
    }
}

fn probe_with(
    params: &MapParams,
    x0_list: &[f64],
    cfg: &SweepConfig,
    weights: &KernelWeights,
) -> Result<MultistabilityReport> {
    let runs = x0_list
        .iter()
        .map(|&x0| -> Result<ProbeRun> {
            if !x0.is_finite() {
                return Err(Error::NonFinite { name: "x0", value: x0 });
            }
            let traj = simulate_with(params, x0, cfg.steps, weights, &cfg.options)?;
            Ok(ProbeRun {
                x0,
                class: cfg.classify(&traj)?,
                tail: traj.tail(cfg.keep_tail).to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            pairs.push(PairVerdict {
                first: i,
                second: j,
                same_class: runs[i].class.kind == runs[j].class.kind,
            });
        }
    }
    Ok(MultistabilityReport {
        params: *params,
        runs,
        pairs,
    })
}

/// Classify each initial condition at fixed parameters and report which
/// pairs land in different asymptotic classes.
pub fn multistability_probe(
    params: &MapParams,
    x0_list: &[f64],
    cfg: &SweepConfig,
) -> Result<MultistabilityReport> {
    if x0_list.len() < 2 {
        return Err(Error::TooFewInitialConditions(x0_list.len()));
    }
    cfg.validate()?;
    let weights = cfg.weights(params.alpha)?;
    probe_with(params, x0_list, cfg, &weights)
}

/// A μ-sweep of multistability probes with the same initial conditions at
/// every grid point, reproducing dual-color bifurcation diagrams.
#[derive(Debug, Clone, PartialEq)]
pub struct MultistabilitySweep {
    pub alpha: f64,
    pub r: f64,
    pub mu: Grid,
    pub reports: Vec<MultistabilityReport>,
}

impl MultistabilitySweep {
    /// Grid values where at least one pair of initial conditions disagrees.
    pub fn distinct_mu_values(&self) -> Vec<f64> {
        self.mu
            .iter()
            .zip(&self.reports)
            .filter(|(_, rep)| rep.has_distinct_classes())
            .map(|(mu, _)| mu)
            .collect()
    }
}

pub fn multistability_sweep(
    alpha: f64,
    r: f64,
    mu_grid: &Grid,
    x0_list: &[f64],
    cfg: &SweepConfig,
) -> Result<MultistabilitySweep> {
    if x0_list.len() < 2 {
        return Err(Error::TooFewInitialConditions(x0_list.len()));
    }
    cfg.validate()?;
    let weights = cfg.weights(alpha)?;
    let reports = mu_grid
        .values()
        .into_par_iter()
        .map(|mu| {
            let params = MapParams::new(alpha, mu, r)?;
            probe_with(&params, x0_list, cfg, &weights)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultistabilitySweep {
        alpha,
        r,
        mu: *mu_grid,
        reports,
    })
}
