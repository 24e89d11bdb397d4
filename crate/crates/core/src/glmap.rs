//! The generalized logistic map family f(x) = μx(1−x) / (1 + rμx(1−x)):
//! evaluation, derivative, pole detection, equilibria and their stability.
//!
//! An equilibrium x* is asymptotically stable when 1−2^α < f'(x*) < 1; the
//! lower endpoint depends on the fractional order α, so the same map can
//! change stability as α varies.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Denominators smaller than this in magnitude count as a pole hit.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Relative residual allowed when checking that a point is fixed.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-9;

/// Band around the stability boundaries classified as marginal.
pub const MARGINAL_TOLERANCE: f64 = 1e-12;

/// One map instance: fractional order α and the two control parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    pub alpha: f64,
    pub mu: f64,
    pub r: f64,
}

impl MapParams {
    pub fn new(alpha: f64, mu: f64, r: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(Error::InvalidAlpha(alpha));
        }
        if !mu.is_finite() {
            return Err(Error::NonFinite {
                name: "mu",
                value: mu,
            });
        }
        if !r.is_finite() {
            return Err(Error::NonFinite {
                name: "r",
                value: r,
            });
        }
        Ok(Self { alpha, mu, r })
    }
}

/// f(x). Fails with `Error::PoleHit` when x is at (or within tolerance of)
/// the pole 1 + rμx(1−x) = 0.
pub fn eval_map(params: &MapParams, x: f64) -> Result<f64> {
    let g = params.mu * x * (1.0 - x);
    let den = 1.0 + params.r * g;
    if den.abs() < POLE_TOLERANCE {
        return Err(Error::PoleHit { x, denominator: den });
    }
    Ok(g / den)
}

/// f'(x) = μ(1−2x) / (1 + rμx(1−x))².
pub fn eval_derivative(params: &MapParams, x: f64) -> Result<f64> {
    let g = params.mu * x * (1.0 - x);
    let den = 1.0 + params.r * g;
    if den.abs() < POLE_TOLERANCE {
        return Err(Error::PoleHit { x, denominator: den });
    }
    Ok(params.mu * (1.0 - 2.0 * x) / (den * den))
}

/// True when x is within pole tolerance of the map's pole.
pub fn at_pole(params: &MapParams, x: f64) -> bool {
    (1.0 + params.r * params.mu * x * (1.0 - x)).abs() < POLE_TOLERANCE
}

/// Stability verdict for an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    /// Within `MARGINAL_TOLERANCE` of either boundary f' = 1 or f' = 1−2^α.
    Marginal,
}

/// Verdict from the derivative value alone (no fixed-point residual check).
pub fn classify_derivative(alpha: f64, deriv: f64) -> Stability {
    let lower = 1.0 - 2f64.powf(alpha);
    if (deriv - 1.0).abs() <= MARGINAL_TOLERANCE || (deriv - lower).abs() <= MARGINAL_TOLERANCE {
        Stability::Marginal
    } else if deriv > lower && deriv < 1.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

/// Verdict for a claimed equilibrium `x_star`; rejects points that are not
/// fixed to within `FIXED_POINT_TOLERANCE` relative residual.
pub fn classify_stability(params: &MapParams, x_star: f64) -> Result<Stability> {
    let fx = eval_map(params, x_star)?;
    let residual = (fx - x_star).abs();
    if residual > FIXED_POINT_TOLERANCE * x_star.abs().max(1.0) {
        return Err(Error::NotAFixedPoint { x: x_star, residual });
    }
    let deriv = eval_derivative(params, x_star)?;
    Ok(classify_derivative(params.alpha, deriv))
}

/// One reported equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub value: f64,
    pub derivative: f64,
    pub stability: Stability,
    /// Set when the discriminant is exactly zero and x₂* = x₃* coincide.
    pub double_root: bool,
}

/// The up-to-three fixed points of f together with the existence
/// discriminant 4rμ + μ² − 2rμ² + r²μ² for the nonzero pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    pub points: Vec<Equilibrium>,
    pub existence_discriminant: f64,
}

/// Discriminant of rμx² − μ(1+r)x + (μ−1) = 0, whose roots are the nonzero
/// fixed points.
pub fn existence_discriminant(mu: f64, r: f64) -> f64 {
    4.0 * r * mu + mu * mu - 2.0 * r * mu * mu + r * r * mu * mu
}

fn report_point(params: &MapParams, value: f64, double_root: bool) -> Equilibrium {
    // At a genuine fixed point the denominator equals 1/(1 − r·x*), so a
    // pole can only be approached in the limit |r·x*| → ∞; treat a non-finite
    // derivative as unstable rather than failing the whole report.
    let derivative = eval_derivative(params, value).unwrap_or(f64::INFINITY);
    let stability = if derivative.is_finite() {
        classify_derivative(params.alpha, derivative)
    } else {
        Stability::Unstable
    };
    Equilibrium {
        value,
        derivative,
        stability,
        double_root,
    }
}

/// All equilibria of the map. x₁* = 0 is always present; the nonzero pair
/// appears when the discriminant is nonnegative and rμ ≠ 0. For r = 0 the
/// quadratic degenerates and the classical second fixed point 1 − 1/μ is
/// reported (the finite r→0 limit of the pair). Degenerate parameter choices
/// produce fewer points, never failures.
pub fn equilibria(params: &MapParams) -> EquilibriumReport {
    let (mu, r) = (params.mu, params.r);
    let disc = existence_discriminant(mu, r);
    let mut points = vec![report_point(params, 0.0, false)];

    if r == 0.0 {
        if mu != 0.0 && mu != 1.0 {
            points.push(report_point(params, 1.0 - 1.0 / mu, false));
        }
    } else if mu != 0.0 && disc >= 0.0 {
        let a = r * mu;
        let b = -(mu + r * mu);
        let c = mu - 1.0;
        let sqrt_disc = disc.sqrt();
        // stable quadratic roots: q avoids cancellation between -b and √disc
        let q = -0.5 * (b + b.signum() * sqrt_disc);
        let (x2, x3) = if q == 0.0 {
            (0.0, 0.0)
        } else if b <= 0.0 {
            // -b ≥ 0: q = (-b + √disc)/2 is the x₃* (plus-branch) numerator
            (c / q, q / a)
        } else {
            (q / a, c / q)
        };
        if disc == 0.0 {
            if x2 != 0.0 {
                points.push(report_point(params, x2, true));
            }
        } else {
            if x2 != 0.0 {
                points.push(report_point(params, x2, false));
            }
            if x3 != 0.0 {
                points.push(report_point(params, x3, false));
            }
        }
    }

    EquilibriumReport {
        points,
        existence_discriminant: disc,
    }
}

/// Cell verdict of the analytic stability raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionVerdict {
    Stable,
    Unstable,
    /// The requested equilibrium does not exist at these parameters.
    NotReal,
    /// The equilibrium or its derivative is not finite there.
    Pole,
}

impl RegionVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionVerdict::Stable => "stable",
            RegionVerdict::Unstable => "unstable",
            RegionVerdict::NotReal => "notreal",
            RegionVerdict::Pole => "pole",
        }
    }
}

/// Analytic stability raster over the (μ, r) plane for one equilibrium.
///
/// Cells are stored by μ-major order: `cells[i * r.len() + j]` is the verdict
/// at (mu.value(i), r.value(j)).
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRaster {
    pub which: usize,
    pub mu: Grid,
    pub r: Grid,
    pub cells: Vec<RegionVerdict>,
}

fn strict_verdict(alpha: f64, deriv: f64) -> RegionVerdict {
    let lower = 1.0 - 2f64.powf(alpha);
    if deriv > lower && deriv < 1.0 {
        RegionVerdict::Stable
    } else {
        RegionVerdict::Unstable
    }
}

fn raster_cell(alpha: f64, mu: f64, r: f64, which: usize) -> RegionVerdict {
    if which == 1 {
        // f'(0) = μ for every r
        return strict_verdict(alpha, mu);
    }
    // nonzero pair
    if r == 0.0 {
        // the classical point 1 - 1/μ is the r→0 limit of x₂* for μ > 0 and
        // of x₃* for μ < 0; the other branch escapes to infinity
        let on_branch = (which == 2 && mu > 0.0) || (which == 3 && mu < 0.0);
        if !on_branch || mu == 0.0 || mu == 1.0 {
            return RegionVerdict::NotReal;
        }
        let params = MapParams { alpha, mu, r };
        return match eval_derivative(&params, 1.0 - 1.0 / mu) {
            Ok(d) if d.is_finite() => strict_verdict(alpha, d),
            _ => RegionVerdict::Pole,
        };
    }
    if mu == 0.0 {
        return RegionVerdict::NotReal;
    }
    let disc = existence_discriminant(mu, r);
    if disc < 0.0 {
        return RegionVerdict::NotReal;
    }
    let sqrt_disc = disc.sqrt();
    let num = match which {
        2 => mu + r * mu - sqrt_disc,
        3 => mu + r * mu + sqrt_disc,
        _ => unreachable!(),
    };
    let x_star = num / (2.0 * r * mu);
    if !x_star.is_finite() {
        return RegionVerdict::Pole;
    }
    let params = MapParams { alpha, mu, r };
    match eval_derivative(&params, x_star) {
        Ok(d) if d.is_finite() => strict_verdict(alpha, d),
        _ => RegionVerdict::Pole,
    }
}

/// Rasterize the analytic stability condition of equilibrium `which` (1, 2
/// or 3) over a (μ, r) grid. No simulation is involved.
pub fn stability_region_raster(
    alpha: f64,
    mu_grid: &Grid,
    r_grid: &Grid,
    which: usize,
) -> Result<StabilityRaster> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    if !(1..=3).contains(&which) {
        return Err(Error::InvalidEquilibriumIndex(which));
    }
    let mut cells = Vec::with_capacity(mu_grid.len() * r_grid.len());
    for mu in mu_grid.iter() {
        for r in r_grid.iter() {
            cells.push(raster_cell(alpha, mu, r, which));
        }
    }
    Ok(StabilityRaster {
        which,
        mu: *mu_grid,
        r: *r_grid,
        cells,
    })
}
