//! Delayed-feedback stability region in the (b, a) plane, a = f'(0) = μ.
//!
//! For delay τ = 1 the stable region of the controlled fixed point is
//! bounded by three pieces: the line a = 1, the line a = 1 − 2^α(1+b), and
//! a parametric curve (a(t), b(t)) for t ∈ [0, 2π]. The curve retraces
//! itself for t > π (the two halves are mirror parametrizations of the same
//! arc) and meets the lower line tangentially at the corner
//! (b, a) = ((2−α)/α, 1 − 2^{α+1}/α), where its parametrization becomes
//! singular; the region closes through that exact corner.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Denominator angles closer to zero than this are excluded from sampling.
const SINGULARITY_TOLERANCE: f64 = 1e-9;

/// a(t) of the parametric boundary piece.
pub fn curve_a(alpha: f64, t: f64) -> f64 {
    let theta_plus = alpha * PI / 2.0 + t * (1.0 - alpha / 2.0);
    let theta_minus = alpha * PI / 2.0 - t * alpha / 2.0;
    let cot = theta_minus.cos() / theta_minus.sin();
    2f64.powf(alpha) * (t / 2.0).sin().powf(alpha) * (theta_plus.cos() - theta_plus.sin() * cot)
        + 1.0
}

/// b(t) of the parametric boundary piece.
pub fn curve_b(alpha: f64, t: f64) -> f64 {
    let theta_plus = alpha * PI / 2.0 + t * (1.0 - alpha / 2.0);
    let theta_minus = alpha * PI / 2.0 - t * alpha / 2.0;
    theta_plus.sin() / theta_minus.sin()
}

fn curve_singular(alpha: f64, t: f64) -> bool {
    (alpha * PI / 2.0 - t * alpha / 2.0).sin().abs() < SINGULARITY_TOLERANCE
}

/// Exact corner where the parametric curve meets the line a = 1 − 2^α(1+b).
pub fn corner(alpha: f64) -> (f64, f64) {
    ((2.0 - alpha) / alpha, 1.0 - 2f64.powf(alpha + 1.0) / alpha)
}

/// b on the line a = 1 − 2^α(1+b) at height a.
fn lower_line_b(alpha: f64, a: f64) -> f64 {
    (1.0 - a) / 2f64.powf(alpha) - 1.0
}

/// One sampled point of the parametric piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub t: f64,
    pub b: f64,
    pub a: f64,
}

/// The closed stable region for delayed feedback at order α.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackRegion {
    pub alpha: f64,
    /// Valid samples of the parametric curve over [0, 2π], ascending t.
    pub curve: Vec<BoundaryPoint>,
    /// Simple closed polygon (b, a); the last vertex connects back to the
    /// first implicitly.
    pub polygon: Vec<(f64, f64)>,
}

impl FeedbackRegion {
    /// Even-odd point-in-polygon test; points on the boundary are not
    /// meaningful at polygon resolution.
    pub fn contains(&self, b: f64, a: f64) -> bool {
        let poly = &self.polygon;
        let n = poly.len();
        let mut inside = false;
        for i in 0..n {
            let (x1, y1) = poly[i];
            let (x2, y2) = poly[(i + 1) % n];
            if (y1 > a) != (y2 > a) {
                let x_cross = x1 + (a - y1) * (x2 - x1) / (y2 - y1);
                if x_cross > b {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Assemble the stable region boundary from its three pieces.
///
/// The parametric curve is sampled over [0, 2π] minus the singular t; the
/// polygon uses the t < π branch (its mirror adds no new points), the exact
/// corner, and the vertex (−1, 1) where the two lines intersect. The closing
/// edges corner→(−1,1) and (−1,1)→(1,1) run along the lines themselves.
pub fn feedback_boundary(alpha: f64, samples: usize) -> Result<FeedbackRegion> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::BoundaryAlphaRange(alpha));
    }
    if samples < 64 {
        return Err(Error::TooFewSamples {
            needed: 64,
            got: samples,
        });
    }
    let mut curve = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = 2.0 * PI * i as f64 / (samples - 1) as f64;
        if curve_singular(alpha, t) {
            continue;
        }
        curve.push(BoundaryPoint {
            t,
            b: curve_b(alpha, t),
            a: curve_a(alpha, t),
        });
    }

    let (corner_b, corner_a) = corner(alpha);
    let mut polygon = vec![(-1.0, 1.0)];
    polygon.extend(
        curve
            .iter()
            .filter(|p| p.t < PI)
            .map(|p| (p.b, p.a)),
    );
    polygon.push((corner_b, corner_a));

    Ok(FeedbackRegion {
        alpha,
        curve,
        polygon,
    })
}

/// Horizontal slice of the stable region at height `a`: the open b-intervals
/// whose interior is stable. Endpoints are refined to at worst `resolution`.
///
/// The left edge comes from the line a = 1 − 2^α(1+b) in closed form; curve
/// crossings are found by a scan over t ∈ (0, π) plus bisection.
pub fn control_interval(alpha: f64, a: f64, resolution: f64) -> Result<Vec<(f64, f64)>> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::BoundaryAlphaRange(alpha));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite { name: "a", value: a });
    }
    if !resolution.is_finite() || resolution <= 0.0 {
        return Err(Error::NonFinite {
            name: "resolution",
            value: resolution,
        });
    }
    let (_, corner_a) = corner(alpha);
    if a >= 1.0 || a <= corner_a {
        return Ok(Vec::new());
    }

    let mut crossings = vec![lower_line_b(alpha, a)];

    // sign-change scan of a(t) − a over (0, π); t = 0 gives a(0) = 1 > a
    let n = 4096;
    let mut t_prev = 0.0;
    let mut h_prev = 1.0 - a;
    for i in 0..=n {
        let t = if i < n {
            PI * (i as f64 + 0.5) / n as f64
        } else {
            PI * (1.0 - 0.25 / n as f64)
        };
        if curve_singular(alpha, t) {
            continue;
        }
        let h = curve_a(alpha, t) - a;
        if h == 0.0 {
            crossings.push(curve_b(alpha, t));
        } else if h_prev.signum() != h.signum() {
            let mut lo = t_prev;
            let mut hi = t;
            let mut h_lo = h_prev;
            for _ in 0..200 {
                if (curve_b(alpha, hi) - curve_b(alpha, lo)).abs() < resolution / 8.0 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let h_mid = curve_a(alpha, mid) - a;
                if h_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if h_mid.signum() == h_lo.signum() {
                    lo = mid;
                    h_lo = h_mid;
                } else {
                    hi = mid;
                }
            }
            crossings.push(curve_b(alpha, 0.5 * (lo + hi)));
        }
        t_prev = t;
        h_prev = h;
    }

    crossings.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Jordan parity: the slice enters the region at even crossings
    let intervals = crossings
        .chunks(2)
        .filter(|c| c.len() == 2)
        .map(|c| (c[0], c[1]))
        .collect();
    Ok(intervals)
}
