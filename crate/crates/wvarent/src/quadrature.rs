//! Adaptive numerical integration over finite and semi-infinite intervals.
//!
//! The engine is an adaptive Gauss–Kronrod (G7,K15) bisection scheme. All
//! Kronrod nodes are interior, so integrands with logarithmic endpoint
//! singularities (every entropy integrand contains `log f`) are never
//! evaluated at the endpoints themselves.
//!
//! Semi-infinite upper limits are handled by quantile truncation: the caller
//! supplies a map from tail mass to abscissa (normally the distribution's
//! survival quantile) and the integral is cut where the remaining mass drops
//! below [`QuadratureConfig::tail_mass`]. Without a quantile, a doubling
//! probe finds a point beyond which the integrand is negligible.

use crate::error::{Error, Result};
use std::collections::BinaryHeap;

/// Tolerances and truncation controls for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureConfig {
    /// Relative error target.
    pub rel_tol: f64,
    /// Absolute error target (floor for integrals near zero).
    pub abs_tol: f64,
    /// Probability mass beyond the truncation point of an improper upper limit.
    pub tail_mass: f64,
    /// Maximum number of interval bisections before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            // Weighted second-moment integrands pick up a factor of roughly
            // (x log f)^2 at the cut, so the mass left behind must sit well
            // below the 1e-6 relative agreement the closed-form checks need.
            tail_mass: 1e-13,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::DegenerateParameter(
                "quadrature tolerances must be strictly positive".into(),
            ));
        }
        if !(self.tail_mass > 0.0 && self.tail_mass < 1e-6) {
            return Err(Error::DegenerateParameter(format!(
                "tail_mass must lie in (0, 1e-6), got {}",
                self.tail_mass
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::DegenerateParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions_used: usize,
    /// Where an improper upper limit was cut, if it was.
    pub truncated_at: Option<f64>,
}

// 15-point Kronrod / 7-point Gauss nodes and weights (positive half).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// QUADPACK-style error rescaling: sharpen the raw |K15 - G7| difference
/// using the oscillation of the integrand over the segment.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One Gauss–Kronrod 15-point pass over [a, b].
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { x })
        }
    };

    let fc = eval(center)?;
    let mut res_k = WGK[7] * fc;
    let mut res_g = WG[3] * fc;
    let mut res_abs = WGK[7] * fc.abs();

    let mut samples = [0.0f64; 15];
    samples[7] = fc;

    for i in 0..7 {
        let dx = half * XGK[i];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        samples[i] = f1;
        samples[14 - i] = f2;
        let sum = f1 + f2;
        res_k += WGK[i] * sum;
        res_abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            res_g += WG[i / 2] * sum;
        }
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for i in 0..7 {
        res_asc += WGK[i] * ((samples[i] - mean).abs() + (samples[14 - i] - mean).abs());
    }

    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * half, res_abs * half, res_asc * half.abs());
    Ok((value, err))
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Find an upper cutoff for an improper integral when no quantile is
/// available: double the span until the integrand stays negligible.
fn probe_upper<F: Fn(f64) -> f64>(f: &F, lower: f64, abs_tol: f64) -> f64 {
    let mut span = 1.0f64.max(lower.abs());
    let mut upper = lower + span;
    for _ in 0..1024 {
        let a = f(upper).abs();
        let b = f(upper - span / 7.0).abs();
        if a.is_finite() && b.is_finite() && a < abs_tol && b < abs_tol {
            return upper;
        }
        span *= 2.0;
        upper = lower + span;
        if !upper.is_finite() {
            break;
        }
    }
    lower + 1e300
}

/// Adaptive integration of `f` over `(lower, upper)`.
///
/// `upper` may be `f64::INFINITY`; in that case `truncation_quantile`, when
/// given, is called with the configured tail mass and must return the point
/// beyond which that much mass remains (a survival quantile).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    cfg: &QuadratureConfig,
    truncation_quantile: Option<&dyn Fn(f64) -> f64>,
) -> Result<QuadratureResult> {
    cfg.validate()?;
    if !lower.is_finite() {
        return Err(Error::DegenerateParameter(format!(
            "lower limit must be finite, got {lower}"
        )));
    }

    let (cut, truncated_at) = if upper.is_finite() {
        (upper, None)
    } else {
        let u = match truncation_quantile {
            Some(q) => q(cfg.tail_mass),
            None => probe_upper(&f, lower, cfg.abs_tol),
        };
        if !u.is_finite() {
            return Err(Error::NonConvergence(
                "could not locate a finite truncation point".into(),
            ));
        }
        (u, Some(u))
    };

    if cut <= lower {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            subdivisions_used: 0,
            truncated_at,
        });
    }

    let (v0, e0) = gk15(&f, lower, cut)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a: lower,
        b: cut,
        value: v0,
        error: e0,
    });
    let mut total_value = v0;
    let mut total_error = e0;
    // Error held by segments too narrow to bisect further.
    let mut stuck_error = 0.0f64;
    let mut subdivisions = 0usize;

    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total_value.abs());
        if total_error <= tol {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::NonConvergence(format!(
                "error estimate {:.3e} above tolerance {:.3e} after {} subdivisions",
                total_error, tol, subdivisions
            )));
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Width at machine resolution: accept this segment as-is.
            stuck_error += worst.error;
            total_error -= worst.error;
            if stuck_error > cfg.abs_tol.max(cfg.rel_tol * total_value.abs()) {
                return Err(Error::NonConvergence(
                    "interval collapsed below machine resolution before tolerance was met".into(),
                ));
            }
            continue;
        }
        subdivisions += 1;
        let (v1, e1) = gk15(&f, worst.a, mid)?;
        let (v2, e2) = gk15(&f, mid, worst.b)?;
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }

    Ok(QuadratureResult {
        value: total_value,
        abs_error_estimate: total_error + stuck_error,
        subdivisions_used: subdivisions,
        truncated_at,
    })
}
