//! Residual-lifetime measures.
//!
//! For a unit still alive at age t the residual density is
//! `f_t(x) = f(x) / S(t)` on `x > t`. The weighted residual Shannon entropy
//! uses the minus-sign convention
//!
//! ```text
//! H^w(X;t) = -int_t^inf w(x) f_t(x) log f_t(x) dx
//! ```
//!
//! which is the only sign under which the second-moment decomposition and
//! the published reference values at t = 0.1/0.2/0.3 for Exponential(5.5)
//! are consistent (the alternative sign is a known typo; see ERRATA.md).
//! The weighted residual varentropy is the variance of `-w(X) log f_t(X)`
//! given survival.

use crate::distributions::{vitality, vrl, Distribution, Law, SF_FLOOR};
use crate::error::{Error, Result};
use crate::measures::{flogf, flogf2, weighted_varentropy, WeightFunction};
use crate::quadrature::{integrate, QuadratureConfig, QuadratureResult};

/// A residual-lifetime evaluation point: distribution, age and weight.
#[derive(Debug, Clone)]
pub struct ResidualQuery {
    pub dist: Distribution,
    pub t: f64,
    pub weight: WeightFunction,
}

impl ResidualQuery {
    /// Validates that the residual distribution exists (`sf(t) > 0`).
    pub fn new(dist: Distribution, t: f64, weight: WeightFunction) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::DegenerateParameter(format!(
                "residual age must be finite and nonnegative, got {t}"
            )));
        }
        if dist.sf(t) < SF_FLOOR {
            return Err(Error::TailUnderflow { t });
        }
        Ok(ResidualQuery { dist, t, weight })
    }

    pub fn wrse(&self, cfg: &QuadratureConfig) -> Result<f64> {
        wrse(&self.dist, self.t, &self.weight, cfg)
    }

    pub fn wrve(&self, cfg: &QuadratureConfig) -> Result<f64> {
        wrve(&self.dist, self.t, &self.weight, cfg)
    }
}

/// Integrate `g(x, delta(x))` over the surviving tail `(max(t, lo), hi)`,
/// where `delta = pdf / sf(t)` is the residual density. Improper upper
/// limits are cut where the remaining *conditional* mass drops below the
/// configured tail mass.
pub(crate) fn residual_integral<L: Law + ?Sized>(
    law: &L,
    t: f64,
    sft: f64,
    g: impl Fn(f64, f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let (lo, hi) = law.support();
    let a = t.max(lo);
    let integrand = |x: f64| g(x, law.pdf(x) / sft);
    if hi.is_finite() {
        if a >= hi {
            return integrate(integrand, a, a, cfg, None);
        }
        integrate(integrand, a, hi, cfg, None)
    } else {
        // Absolute mass m corresponds to conditional mass m / sf(t).
        integrate(
            integrand,
            a,
            f64::INFINITY,
            cfg,
            Some(&|m| law.quantile_sf((m * sft).min(1.0))),
        )
    }
}

fn checked_sf<L: Law + ?Sized>(law: &L, t: f64) -> Result<f64> {
    let sft = law.sf(t);
    if sft < SF_FLOOR {
        Err(Error::TailUnderflow { t })
    } else {
        Ok(sft)
    }
}

/// Weighted residual Shannon entropy `H^w(X;t)`.
pub fn wrse<L: Law + ?Sized>(
    law: &L,
    t: f64,
    w: &WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sft = checked_sf(law, t)?;
    let r = residual_integral(law, t, sft, |x, d| -w.eval(x) * flogf(d), cfg)?;
    Ok(r.value)
}

/// Weighted residual varentropy `VE^w(X;t) = Var[-w(X) log f_t(X) | X > t]`,
/// by direct quadrature of the defining integrals.
pub fn wrve<L: Law + ?Sized>(
    law: &L,
    t: f64,
    w: &WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sft = checked_sf(law, t)?;
    let m2 = residual_integral(
        law,
        t,
        sft,
        |x, d| {
            let ww = w.eval(x);
            ww * ww * flogf2(d)
        },
        cfg,
    )?;
    let m1 = residual_integral(law, t, sft, |x, d| w.eval(x) * flogf(d), cfg)?;
    Ok(m2.value - m1.value * m1.value)
}

/// The weight-x WRVE through its second-moment decomposition
/// `(1/S(t)) int_t x^2 f (log f)^2 - L(t)^2 E[X^2|X>t] - 2 L(t) H^{x^2}(X;t)
/// - H^x(X;t)^2` with `L(t) = -log S(t)`. Must agree with [`wrve`]; both
/// routes are exercised by the test suite.
pub fn wrve_decomposed<L: Law + ?Sized>(law: &L, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let sft = checked_sf(law, t)?;
    let cum_haz = -sft.ln();
    let raw_m2 = residual_integral(law, t, sft, |x, _| x * x * flogf2(law.pdf(x)) / sft, cfg)?;
    // Conditional second moment through the same truncation rule as every
    // other piece, so the route comparison is not polluted by differing
    // cut points on heavy tails.
    let ex2 = residual_integral(law, t, sft, |x, d| x * x * d, cfg)?.value;
    let h_sq = wrse(law, t, &WeightFunction::Square, cfg)?;
    let h_x = wrse(law, t, &WeightFunction::Identity, cfg)?;
    Ok(raw_m2.value - cum_haz * cum_haz * ex2 - 2.0 * cum_haz * h_sq - h_x * h_x)
}

/// Unweighted residual varentropy `Var[-log f_t(X) | X > t]`.
pub fn rve<L: Law + ?Sized>(law: &L, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    wrve(law, t, &WeightFunction::Unit, cfg)
}

/// Closed-form weight-x WRVE for uniform, exponential, and power (b = 1)
/// lifetimes.
///
/// As with the unconditional closed form, the power case subtracts the
/// squared residual weighted entropy with its exact `(k+1)^4` denominator;
/// the commonly printed `(k+1)^2` is a transcription slip (ERRATA.md).
pub fn closed_form_wrve(dist: &Distribution, t: f64) -> Result<f64> {
    match *dist {
        Distribution::Uniform { a, b } => {
            if a != 0.0 {
                return Err(Error::UnsupportedFamily(
                    "residual closed form needs uniform on (0, b)".into(),
                ));
            }
            if !(t >= 0.0 && t < b) {
                return Err(Error::OutOfSupport(format!("need 0 <= t < b, got t={t}, b={b}")));
            }
            let d = b - t;
            Ok((d * d.ln()).powi(2) / 12.0)
        }
        Distribution::Exponential { lambda } => {
            if t < 0.0 {
                return Err(Error::OutOfSupport(format!("need t >= 0, got {t}")));
            }
            let lt = lambda * t;
            let u = lambda.ln() + lt;
            let second = (lt * lt + 2.0 * lt + 2.0) * u * u
                - 2.0 * (lt.powi(3) + 3.0 * lt * lt + 6.0 * lt + 6.0) * u
                + (lt.powi(4) + 4.0 * lt.powi(3) + 12.0 * lt * lt + 24.0 * lt + 24.0);
            let mean_ic = (lt + 1.0) * lambda.ln() - (2.0 + lt);
            Ok((second - mean_ic * mean_ic) / (lambda * lambda))
        }
        Distribution::Power { k, b } => {
            if b != 1.0 {
                return Err(Error::UnsupportedFamily(
                    "residual closed form covers the power family only for b = 1".into(),
                ));
            }
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::OutOfSupport(format!("need t in (0, 1), got {t}")));
            }
            let m = k - 1.0;
            let k1 = k + 1.0;
            let k2 = k + 2.0;
            let tk = t.powf(k);
            let psi = (k / (1.0 - tk)).ln();
            let lt = t.ln();
            let tk2 = t.powf(k + 2.0);
            let second = k / (k2.powi(3) * (1.0 - tk))
                * (2.0 * m * m - m * m * tk2 * (k2 * k2 * lt * lt - 2.0 * k2 * lt + 2.0)
                    + 2.0 * m * k2 * psi * (tk2 * (1.0 - k2 * lt) - 1.0)
                    + k2 * k2 * psi * psi * (1.0 - tk2));
            let tk1 = t.powf(k + 1.0);
            let bracket = k1 * psi - tk1 * (k1 * psi + (k * k - 1.0) * lt - m) - m;
            let mean_ic_sq = k * k / (k1.powi(4) * (1.0 - tk) * (1.0 - tk)) * bracket * bracket;
            Ok(second - mean_ic_sq)
        }
        ref other => Err(Error::UnsupportedFamily(other.family_name().into())),
    }
}

/// Derivative of the weight-x WRVE in t, both as the published closed
/// expression and as a finite-difference oracle.
///
/// The two systematically disagree away from stationary points: the middle
/// squared term of the printed expression does not survive dimensional
/// analysis against the entropy-derivative building blocks. Both values are
/// returned so callers can see the gap; nothing is silently corrected.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeComparison {
    pub formula_value: f64,
    pub finite_difference_value: f64,
}

pub fn wrve_derivative<L: Law + ?Sized>(
    law: &L,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivativeComparison> {
    let sft = checked_sf(law, t)?;
    let rate = law.pdf(t) / sft;
    if !(rate > 0.0) {
        return Err(Error::TailUnderflow { t });
    }
    let ve = wrve(law, t, &WeightFunction::Identity, cfg)?;
    let h_x = wrse(law, t, &WeightFunction::Identity, cfg)?;
    let h_sq = wrse(law, t, &WeightFunction::Square, cfg)?;
    let v = vitality(law, t, cfg)?;
    let formula_value = rate
        * (ve - 2.0 * (h_x * v + h_sq).powi(2) - (h_x + t * rate.ln()).powi(2));

    let h = 1e-5f64.max(1e-5 * t);
    let finite_difference_value = if t - h >= 0.0 && law.sf(t - h) >= SF_FLOOR {
        let hi = wrve(law, t + h, &WeightFunction::Identity, cfg)?;
        let lo = wrve(law, t - h, &WeightFunction::Identity, cfg)?;
        (hi - lo) / (2.0 * h)
    } else {
        let hi = wrve(law, t + h, &WeightFunction::Identity, cfg)?;
        (hi - ve) / h
    };

    Ok(DerivativeComparison {
        formula_value,
        finite_difference_value,
    })
}

/// An upper or lower bound together with the verdict of its precondition.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck {
    pub bound: f64,
    pub condition_holds: bool,
}

/// Upper bound for the weight-x WRVE: the residual weighted entropy with
/// weight `alpha x^3 + beta x^2` plus `L(t)^2 E[X^2 | X > t]`, valid under
/// the density envelope `exp(-(alpha x + beta)) <= f <= 1`.
pub fn wrve_upper_bound<L: Law + ?Sized>(
    law: &L,
    t: f64,
    alpha: f64,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<BoundCheck> {
    let sft = checked_sf(law, t)?;
    let w2 = WeightFunction::cubic_quad(alpha, beta)?;
    let h_w2 = wrse(law, t, &w2, cfg)?;
    let cum_haz = -sft.ln();
    let ex2 = crate::distributions::moment_conditional(law, 2, t, cfg)?;
    Ok(BoundCheck {
        bound: h_w2 + cum_haz * cum_haz * ex2,
        condition_holds: crate::measures::density_envelope_condition(law, alpha, beta),
    })
}

/// The function eta_t from the covariance identity
/// `vrl(t) * eta_t(x) * f_t(x) = int_t^x (v(t) - u) f_t(u) du`,
/// where v(t) is the vitality (conditional mean of the surviving unit).
///
/// Using the conditional mean, rather than the mean residual life, is what
/// makes the identity close (`E[eta_t] = 1`) on the unshifted tail and the
/// variance bound below apply to the WRVE itself; see ERRATA.md.
///
/// The tabulation stores exact cumulative integrals at 512 geometrically
/// spaced nodes; evaluation completes the integral locally, and the
/// derivative comes from the defining relationship with the family's exact
/// density derivative.
pub struct EtaFunction<'a, L: Law + ?Sized> {
    law: &'a L,
    pub t: f64,
    pub vitality: f64,
    pub vrl: f64,
    sft: f64,
    pub nodes: Vec<f64>,
    /// Cumulative integral of (v(t) - u) f_t(u) from t to each node.
    pub cum: Vec<f64>,
    /// eta at each node.
    pub values: Vec<f64>,
}

// Gauss-Legendre 15-point rule on [-1, 1] (positive half; symmetric).
const GL15_X: [f64; 8] = [
    0.000000000000000,
    0.201194093997435,
    0.394151347077563,
    0.570972172608539,
    0.724417731360170,
    0.848206583410427,
    0.937273392400706,
    0.987992518020485,
];
const GL15_W: [f64; 8] = [
    0.202578241925561,
    0.198431485327112,
    0.186161000015562,
    0.166269205816994,
    0.139570677926154,
    0.107159220467172,
    0.070366047488108,
    0.030753241996117,
];

fn gl15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = GL15_W[0] * f(c);
    for i in 1..8 {
        let dx = h * GL15_X[i];
        acc += GL15_W[i] * (f(c - dx) + f(c + dx));
    }
    acc * h
}

impl<'a, L: Law + ?Sized> EtaFunction<'a, L> {
    pub fn build(law: &'a L, t: f64, cfg: &QuadratureConfig) -> Result<Self> {
        let sft = checked_sf(law, t)?;
        let v = vitality(law, t, cfg)?;
        let s2 = vrl(law, t, cfg)?;
        if !(s2 > 0.0) || !s2.is_finite() || !v.is_finite() {
            return Err(Error::NonfiniteMoment(format!(
                "eta needs finite positive residual variance, got vrl={s2}"
            )));
        }
        let (lo, _hi) = law.support();
        let start = t.max(lo);
        let end = law.quantile_sf(1e-8 * sft.min(1.0));
        if !(end > start) {
            return Err(Error::TailUnderflow { t });
        }

        let n = 512usize;
        let span = end - start;
        let ratio = (1e8f64).powf(1.0 / (n as f64 - 1.0));
        let mut nodes = Vec::with_capacity(n);
        let mut z = span * 1e-8;
        for _ in 0..n {
            nodes.push(start + z);
            z *= ratio;
        }
        *nodes.last_mut().unwrap() = end;

        let f_t = |u: f64| law.pdf(u) / sft;
        let kernel = |u: f64| (v - u) * f_t(u);
        let mut cum = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut acc = gl15(&kernel, start, nodes[0]);
        for i in 0..n {
            if i > 0 {
                acc += gl15(&kernel, nodes[i - 1], nodes[i]);
            }
            cum.push(acc);
            let d = f_t(nodes[i]);
            if d < 1e-300 {
                return Err(Error::EtaSingularity { x: nodes[i] });
            }
            values.push(acc / (s2 * d));
        }

        Ok(EtaFunction {
            law,
            t,
            vitality: v,
            vrl: s2,
            sft,
            nodes,
            cum,
            values,
        })
    }

    fn cum_at(&self, x: f64) -> f64 {
        let f_t = |u: f64| self.law.pdf(u) / self.sft;
        let v = self.vitality;
        let kernel = |u: f64| (v - u) * f_t(u);
        let start = self.t.max(self.law.support().0);
        if x <= self.nodes[0] {
            return gl15(&kernel, start, x);
        }
        let i = self.nodes.partition_point(|&n| n <= x) - 1;
        self.cum[i] + gl15(&kernel, self.nodes[i], x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let start = self.t.max(self.law.support().0);
        if x <= start {
            return 0.0;
        }
        let d = self.law.pdf(x) / self.sft;
        if d < 1e-300 {
            return 0.0;
        }
        self.cum_at(x) / (self.vrl * d)
    }

    /// eta' from the defining relationship:
    /// `eta' = (v - x)/vrl - eta * f'/f`.
    pub fn deriv(&self, x: f64) -> f64 {
        let d = self.law.pdf(x);
        if d < 1e-300 {
            return 0.0;
        }
        (self.vitality - x) / self.vrl - self.eval(x) * self.law.pdf_deriv(x) / d
    }
}

/// Variance lower bound for the weight-x WRVE:
/// `vrl(t) * (1 + E[-eta_t(X) log f_t(X)] + E[X eta_t'(X)])^2`
/// with the expectations over the surviving unit X | X > t.
pub fn wrve_lower_bound<L: Law + ?Sized>(
    law: &L,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sft = checked_sf(law, t)?;
    let eta = EtaFunction::build(law, t, cfg)?;
    let e_log = residual_integral(
        law,
        t,
        sft,
        |x, d| {
            if d < 1e-300 {
                0.0
            } else {
                -eta.eval(x) * d.ln() * d
            }
        },
        cfg,
    )?;
    let e_deriv = residual_integral(law, t, sft, |x, d| x * eta.deriv(x) * d, cfg)?;
    Ok(eta.vrl * (1.0 + e_log.value + e_deriv.value).powi(2))
}
