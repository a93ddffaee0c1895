//! Entropy and varentropy measures, continuous and discrete, weighted and
//! unweighted.
//!
//! The information content of an observation under density f is
//! `IC(x) = -log f(x)`; weighting it by `w(x)` gives `-w(x) log f(x)`.
//! Entropies are expectations of these quantities and varentropies their
//! variances. Heavy-tailed laws with divergent measures come back as large
//! truncated values (the truncation point is part of the quadrature result),
//! never as silent NaNs: integrands guard the `f -> 0` limit where
//! `f (log f)^m -> 0`.

use crate::distributions::{Distribution, Law};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig, QuadratureResult};
use std::sync::Arc;

/// Below this density the analytic limit `f (log f)^m = 0` is substituted,
/// avoiding `-inf * 0` in the far tails.
const DENSITY_GUARD: f64 = 1e-300;

/// `f * log(f)` with the tail guard.
#[inline]
pub(crate) fn flogf(f: f64) -> f64 {
    if f < DENSITY_GUARD {
        0.0
    } else {
        f * f.ln()
    }
}

/// `f * log(f)^2` with the tail guard.
#[inline]
pub(crate) fn flogf2(f: f64) -> f64 {
    if f < DENSITY_GUARD {
        0.0
    } else {
        let l = f.ln();
        f * l * l
    }
}

/// Weight attached to the information content.
#[derive(Clone)]
pub enum WeightFunction {
    /// w(x) = x, the default shift-dependent weight.
    Identity,
    /// w(x) = x^2.
    Square,
    /// w(x) = a x + b.
    Affine { a: f64, b: f64 },
    /// w(x) = alpha x^3 + beta x^2 (the bound weight).
    CubicQuad { alpha: f64, beta: f64 },
    /// w(x) = 1: reduces every weighted measure to its unweighted form.
    Unit,
    /// Arbitrary weight with a label for report output.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>, String),
}

impl std::fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WeightFunction({})", self.label())
    }
}

impl WeightFunction {
    pub fn affine(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) || !b.is_finite() {
            return Err(Error::DegenerateParameter(format!(
                "affine weight needs finite a > 0, got a={a}, b={b}"
            )));
        }
        Ok(WeightFunction::Affine { a, b })
    }

    pub fn cubic_quad(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) || !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::DegenerateParameter(format!(
                "cubic-quad weight needs alpha > 0 and beta >= 0, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(WeightFunction::CubicQuad { alpha, beta })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static, label: impl Into<String>) -> Self {
        WeightFunction::Custom(Arc::new(f), label.into())
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            WeightFunction::Identity => x,
            WeightFunction::Square => x * x,
            WeightFunction::Affine { a, b } => a * x + b,
            WeightFunction::CubicQuad { alpha, beta } => (alpha * x + beta) * x * x,
            WeightFunction::Unit => 1.0,
            WeightFunction::Custom(f, _) => f(x),
        }
    }

    pub fn label(&self) -> String {
        match self {
            WeightFunction::Identity => "x".into(),
            WeightFunction::Square => "x2".into(),
            WeightFunction::Affine { a, b } => format!("affine:{a},{b}"),
            WeightFunction::CubicQuad { alpha, beta } => format!("cubquad:{alpha},{beta}"),
            WeightFunction::Unit => "unit".into(),
            WeightFunction::Custom(_, label) => label.clone(),
        }
    }

    /// Parse the CLI syntax `x | x2 | unit | affine:a,b | cubquad:alpha,beta`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "x" => return Ok(WeightFunction::Identity),
            "x2" => return Ok(WeightFunction::Square),
            "unit" => return Ok(WeightFunction::Unit),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("affine:") {
            let (a, b) = parse_pair(rest)?;
            return WeightFunction::affine(a, b);
        }
        if let Some(rest) = s.strip_prefix("cubquad:") {
            let (alpha, beta) = parse_pair(rest)?;
            return WeightFunction::cubic_quad(alpha, beta);
        }
        Err(Error::Validation(format!("unknown weight spec `{s}`")))
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let mut it = s.split(',');
    let a = it
        .next()
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Validation(format!("expected two numbers in `{s}`")))?;
    let b = it
        .next()
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Validation(format!("expected two numbers in `{s}`")))?;
    if it.next().is_some() {
        return Err(Error::Validation(format!("expected exactly two numbers in `{s}`")));
    }
    Ok((a, b))
}

/// A measure value together with the propagated quadrature error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Measured {
    pub value: f64,
    pub quadrature_error: f64,
}

/// Integrate `g(x)` over the support of `law`, truncating improper upper
/// limits at the survival quantile of the configured tail mass.
pub(crate) fn support_integral<L: Law + ?Sized>(
    law: &L,
    lower: f64,
    g: impl Fn(f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let (lo, hi) = law.support();
    let a = lower.max(lo);
    if hi.is_finite() {
        if a >= hi {
            return integrate(g, a, a, cfg, None);
        }
        integrate(g, a, hi, cfg, None)
    } else {
        integrate(g, a, f64::INFINITY, cfg, Some(&|m| law.quantile_sf(m)))
    }
}

/// Weighted Shannon entropy `H^w(X) = -int w(x) f(x) log f(x) dx`, with the
/// quadrature error estimate attached.
pub fn weighted_entropy_measured<L: Law + ?Sized>(
    law: &L,
    w: &WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<Measured> {
    let r = support_integral(law, f64::NEG_INFINITY, |x| -w.eval(x) * flogf(law.pdf(x)), cfg)?;
    Ok(Measured {
        value: r.value,
        quadrature_error: r.abs_error_estimate,
    })
}

/// Weighted Shannon entropy `H^w(X)`.
pub fn weighted_entropy<L: Law + ?Sized>(
    law: &L,
    w: &WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    Ok(weighted_entropy_measured(law, w, cfg)?.value)
}

/// Differential (Shannon) entropy `H(X)`.
pub fn shannon_entropy<L: Law + ?Sized>(law: &L, cfg: &QuadratureConfig) -> Result<f64> {
    weighted_entropy(law, &WeightFunction::Unit, cfg)
}

/// Weighted varentropy `Var[-w(X) log f(X)]` with error estimate.
pub fn weighted_varentropy_measured<L: Law + ?Sized>(
    law: &L,
    w: &WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<Measured> {
    let m2 = support_integral(
        law,
        f64::NEG_INFINITY,
        |x| {
            let ww = w.eval(x);
            ww * ww * flogf2(law.pdf(x))
        },
        cfg,
    )?;
    let m1 = support_integral(law, f64::NEG_INFINITY, |x| w.eval(x) * flogf(law.pdf(x)), cfg)?;
    Ok(Measured {
        value: m2.value - m1.value * m1.value,
        quadrature_error: m2.abs_error_estimate + 2.0 * m1.value.abs() * m1.abs_error_estimate,
    })
}

/// Weighted varentropy `VE^w(X)`.
pub fn weighted_varentropy<L: Law + ?Sized>(
    law: &L,
    w: &WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    Ok(weighted_varentropy_measured(law, w, cfg)?.value)
}

/// Varentropy `Var[-log f(X)]`.
pub fn varentropy<L: Law + ?Sized>(law: &L, cfg: &QuadratureConfig) -> Result<f64> {
    weighted_varentropy(law, &WeightFunction::Unit, cfg)
}

/// Closed-form weighted varentropy (weight x) for the families that have
/// one: uniform, exponential and power.
///
/// The power form is the exact evaluation of the defining integrals; the
/// commonly printed version of this expression carries a wrong sign and a
/// `(k+1)^2` factor on the squared-entropy term (see ERRATA.md).
pub fn closed_form_wve(dist: &Distribution) -> Result<f64> {
    match *dist {
        Distribution::Uniform { a, b } => {
            let d = b - a;
            Ok((a - b).powi(2) * d.ln().powi(2) / 12.0)
        }
        Distribution::Exponential { lambda } => {
            Ok(((lambda.ln() - 4.0).powi(2) + 4.0) / (lambda * lambda))
        }
        Distribution::Power { k, b } => {
            let c = (k / b.powf(k)).ln();
            let m = k - 1.0;
            let lb = b.ln();
            let k2 = k + 2.0;
            let k1 = k + 1.0;
            let second_moment = k * b * b / k2.powi(3)
                * (k2 * k2 * c * c
                    + 2.0 * m * k2 * c * (k2 * lb - 1.0)
                    + m * m * (k2 * k2 * lb * lb - 2.0 * (k2 * lb - 1.0)));
            let mean_ic = k * b / (k1 * k1) * (k1 * c + m * (k1 * lb - 1.0));
            Ok(second_moment - mean_ic * mean_ic)
        }
        ref other => Err(Error::UnsupportedFamily(other.family_name().into())),
    }
}

/// Finite outcome set with probabilities and per-outcome weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteModel {
    pub outcomes: Vec<f64>,
    pub probs: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscreteModel {
    pub fn new(outcomes: Vec<f64>, probs: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if outcomes.len() != probs.len() || probs.len() != weights.len() {
            return Err(Error::InvalidModel(
                "outcomes, probs and weights must have equal length".into(),
            ));
        }
        if outcomes.is_empty() {
            return Err(Error::InvalidModel("model must have at least one outcome".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidModel("probabilities must be finite and nonnegative".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidModel("weights must be finite and nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidModel(format!(
                "probabilities must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(DiscreteModel {
            outcomes,
            probs,
            weights,
        })
    }
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0 // 0 log 0 = 0
    }
}

/// Discrete Shannon entropy `-sum p_i log p_i`.
pub fn discrete_entropy(m: &DiscreteModel) -> f64 {
    -m.probs.iter().map(|&p| plogp(p)).sum::<f64>()
}

/// Discrete weighted entropy `-sum w_i p_i log p_i`.
pub fn discrete_weighted_entropy(m: &DiscreteModel) -> f64 {
    -m.probs
        .iter()
        .zip(&m.weights)
        .map(|(&p, &w)| w * plogp(p))
        .sum::<f64>()
}

/// Discrete varentropy `sum p (log p)^2 - (sum p log p)^2`.
pub fn discrete_varentropy(m: &DiscreteModel) -> f64 {
    let second: f64 = m
        .probs
        .iter()
        .map(|&p| if p > 0.0 { p * p.ln() * p.ln() } else { 0.0 })
        .sum();
    let first: f64 = m.probs.iter().map(|&p| plogp(p)).sum();
    second - first * first
}

/// Discrete weighted varentropy `sum w^2 p (log p)^2 - (sum w p log p)^2`.
pub fn discrete_weighted_varentropy(m: &DiscreteModel) -> f64 {
    let second: f64 = m
        .probs
        .iter()
        .zip(&m.weights)
        .map(|(&p, &w)| if p > 0.0 { w * w * p * p.ln() * p.ln() } else { 0.0 })
        .sum();
    let first: f64 = m
        .probs
        .iter()
        .zip(&m.weights)
        .map(|(&p, &w)| w * plogp(p))
        .sum();
    second - first * first
}

/// Replace the weights by `w_i = -p_i / (2 log p_i)`, the choice under which
/// the weighted varentropy collapses to the varextropy.
pub fn varextropy_weight(m: &DiscreteModel) -> Result<DiscreteModel> {
    if m.probs.iter().any(|&p| p <= 0.0 || p >= 1.0) {
        return Err(Error::DegenerateProbability(
            "varextropy weights need every p_i strictly inside (0, 1)".into(),
        ));
    }
    let weights = m.probs.iter().map(|&p| -p / (2.0 * p.ln())).collect();
    DiscreteModel::new(m.outcomes.clone(), m.probs.clone(), weights)
}

/// Varextropy `(1/4) [sum p^3 - (sum p^2)^2]`.
pub fn varextropy(m: &DiscreteModel) -> Result<f64> {
    if m.probs.iter().any(|&p| p <= 0.0 || p >= 1.0) {
        return Err(Error::DegenerateProbability(
            "varextropy needs every p_i strictly inside (0, 1)".into(),
        ));
    }
    let p3: f64 = m.probs.iter().map(|&p| p * p * p).sum();
    let p2: f64 = m.probs.iter().map(|&p| p * p).sum();
    Ok(0.25 * (p3 - p2 * p2))
}

/// Upper bound on the (weight-x) weighted varentropy by the weighted entropy
/// with weight `alpha x^3 + beta x^2`, valid when
/// `exp(-(alpha x + beta)) <= f(x) <= 1` on the support.
#[derive(Debug, Clone, Copy)]
pub struct ConditionedBound {
    pub bound: f64,
    pub condition_holds: bool,
}

/// Grid check of `exp(-(alpha x + beta)) <= f(x) <= 1` between the 1e-8 and
/// 1 - 1e-8 quantiles.
pub fn density_envelope_condition<L: Law + ?Sized>(law: &L, alpha: f64, beta: f64) -> bool {
    let lo = law.quantile(1e-8);
    let hi = law.quantile_sf(1e-8);
    if !(hi > lo) {
        return false;
    }
    let n = 10_000;
    for i in 0..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let f = law.pdf(x);
        let lower = (-(alpha * x + beta)).exp();
        if f > 1.0 + 1e-12 || f + 1e-12 < lower {
            return false;
        }
    }
    true
}

/// Weighted-entropy upper bound for the weighted varentropy.
pub fn wve_upper_bound<L: Law + ?Sized>(
    law: &L,
    alpha: f64,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<ConditionedBound> {
    let w = WeightFunction::cubic_quad(alpha, beta)?;
    let bound = weighted_entropy(law, &w, cfg)?;
    Ok(ConditionedBound {
        bound,
        condition_holds: density_envelope_condition(law, alpha, beta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Distribution;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn shannon_entropy_zero_cases() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        assert!(shannon_entropy(&u, &cfg()).unwrap().abs() < 1e-9);
        // Exponential with mean 1/e has rate e.
        let e = Distribution::exponential(std::f64::consts::E).unwrap();
        assert!(shannon_entropy(&e, &cfg()).unwrap().abs() < 1e-9);
    }

    #[test]
    fn shannon_entropy_uniform_log_width() {
        let u = Distribution::uniform(0.0, 2.0).unwrap();
        assert!((shannon_entropy(&u, &cfg()).unwrap() - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn weighted_entropy_examples() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        assert!(weighted_entropy(&u, &WeightFunction::Identity, &cfg())
            .unwrap()
            .abs()
            < 1e-10);

        // -int x e^{-x} (-x) dx = E[X^2] = 2 for the unit exponential.
        let e = Distribution::exponential(1.0).unwrap();
        assert!(
            (weighted_entropy(&e, &WeightFunction::Identity, &cfg()).unwrap() - 2.0).abs() < 1e-8
        );

        // Unit weight reduces to the Shannon entropy.
        let w = Distribution::weibull(2.0).unwrap();
        let h = shannon_entropy(&w, &cfg()).unwrap();
        let hu = weighted_entropy(&w, &WeightFunction::Unit, &cfg()).unwrap();
        assert!((h - hu).abs() < 1e-12);
    }

    #[test]
    fn varentropy_uniform_zero_exponential_one() {
        let u = Distribution::uniform(0.3, 2.6).unwrap();
        assert!(varentropy(&u, &cfg()).unwrap().abs() < 1e-9);
        for lambda in [0.5, 1.0, 5.5] {
            let e = Distribution::exponential(lambda).unwrap();
            assert!(
                (varentropy(&e, &cfg()).unwrap() - 1.0).abs() < 1e-7,
                "lambda={lambda}"
            );
        }
    }

    #[test]
    fn weighted_varentropy_examples() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        assert!(weighted_varentropy(&u, &WeightFunction::Identity, &cfg())
            .unwrap()
            .abs()
            < 1e-10);

        let e = Distribution::exponential(1.0).unwrap();
        let v = weighted_varentropy(&e, &WeightFunction::Identity, &cfg()).unwrap();
        assert!((v - 20.0).abs() < 1e-6, "exponential WVE {v}");

        let w = Distribution::weibull(2.0).unwrap();
        let v = weighted_varentropy(&w, &WeightFunction::Identity, &cfg()).unwrap();
        assert!((1.85..=1.89).contains(&v), "weibull WVE {v}");
    }

    #[test]
    fn unit_weight_equals_varentropy_across_families() {
        for dist in [
            Distribution::uniform(0.5, 2.0).unwrap(),
            Distribution::exponential(2.0).unwrap(),
            Distribution::power(2.0, 1.5).unwrap(),
            Distribution::weibull(1.5).unwrap(),
            Distribution::lomax(1.0, 3.0).unwrap(),
            Distribution::log_uniform(0.5, 3.0).unwrap(),
        ] {
            let a = weighted_varentropy(&dist, &WeightFunction::Unit, &cfg()).unwrap();
            let b = varentropy(&dist, &cfg()).unwrap();
            assert!((a - b).abs() < 1e-8, "{}", dist.family_name());
        }
    }

    #[test]
    fn closed_form_matches_quadrature_on_grids() {
        let c = cfg();
        // Uniform over a b-grid.
        for i in 0..20 {
            let b = 0.4 + 0.35 * i as f64;
            let d = Distribution::uniform(0.0, b).unwrap();
            let cf = closed_form_wve(&d).unwrap();
            let q = weighted_varentropy(&d, &WeightFunction::Identity, &c).unwrap();
            assert!(
                (cf - q).abs() <= 1e-6 * q.abs().max(1e-9),
                "uniform b={b}: {cf} vs {q}"
            );
        }
        // Exponential over a lambda-grid.
        for i in 0..20 {
            let lambda = 0.3 + 0.5 * i as f64;
            let d = Distribution::exponential(lambda).unwrap();
            let cf = closed_form_wve(&d).unwrap();
            let q = weighted_varentropy(&d, &WeightFunction::Identity, &c).unwrap();
            assert!(
                (cf - q).abs() <= 1e-6 * q.abs().max(1e-9),
                "exponential lambda={lambda}: {cf} vs {q}"
            );
        }
        // Power over a (k, b) grid.
        for ik in 0..5 {
            for ib in 0..4 {
                let k = 0.6 + 0.8 * ik as f64;
                let b = 0.5 + 0.8 * ib as f64;
                let d = Distribution::power(k, b).unwrap();
                let cf = closed_form_wve(&d).unwrap();
                let q = weighted_varentropy(&d, &WeightFunction::Identity, &c).unwrap();
                assert!(
                    (cf - q).abs() <= 1e-6 * q.abs().max(1e-8),
                    "power k={k} b={b}: {cf} vs {q}"
                );
            }
        }
    }

    #[test]
    fn closed_form_specific_values() {
        let u = Distribution::uniform(1.0, 1.0 + std::f64::consts::E).unwrap();
        let expect = std::f64::consts::E.powi(2) / 12.0;
        assert!((closed_form_wve(&u).unwrap() - expect).abs() < 1e-12);

        let e9 = Distribution::exponential(9.0).unwrap();
        assert!(closed_form_wve(&e9).unwrap() < 0.1201);

        let p = Distribution::power(1.0, 1.0).unwrap();
        assert!(closed_form_wve(&p).unwrap().abs() < 1e-12);

        let w = Distribution::weibull(2.0).unwrap();
        assert!(matches!(closed_form_wve(&w), Err(Error::UnsupportedFamily(_))));
    }

    fn example_model(p: f64, q: f64) -> DiscreteModel {
        DiscreteModel::new(
            vec![1.0, 2.0, 3.0],
            vec![p, 1.0 - p - q, q],
            vec![1.0, 2.0, 3.0],
        )
        .unwrap()
    }

    #[test]
    fn discrete_three_point_reference_values() {
        let pq = example_model(0.5, 0.3);
        let qp = example_model(0.3, 0.5);

        // Exact direct-summation values (verified to 30 digits externally).
        // The commonly printed digits 1.92508326678 / 0.48838794637 carry
        // ~2.6e-8 rounding noise; see ERRATA.md.
        assert!((discrete_weighted_varentropy(&pq) - 1.925083293110509).abs() < 1e-12);
        assert!((discrete_weighted_varentropy(&qp) - 0.488387926014524).abs() < 1e-12);
        assert!((discrete_weighted_varentropy(&pq) - 1.92508326678).abs() < 5e-8);
        assert!((discrete_weighted_varentropy(&qp) - 0.48838794637).abs() < 5e-8);
        assert!((discrete_varentropy(&pq) - 0.13296441046).abs() < 1e-9);
        assert!((discrete_varentropy(&qp) - 0.13296441046).abs() < 1e-9);

        // Varentropy is permutation symmetric in p; the weighted version is not.
        assert!(
            (discrete_weighted_varentropy(&pq) - discrete_weighted_varentropy(&qp)).abs() > 1.0
        );
    }

    #[test]
    fn discrete_entropy_edge_cases() {
        let degenerate =
            DiscreteModel::new(vec![1.0, 2.0], vec![1.0, 0.0], vec![5.0, 7.0]).unwrap();
        assert_eq!(discrete_entropy(&degenerate), 0.0);
        assert_eq!(discrete_weighted_entropy(&degenerate), 0.0);

        let coin = DiscreteModel::new(vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 1.0]).unwrap();
        assert!((discrete_entropy(&coin) - 2f64.ln()).abs() < 1e-15);
        assert!((discrete_weighted_entropy(&coin) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn discrete_weighted_entropy_direct_sum_oracle() {
        let m = example_model(0.5, 0.3);
        let by_hand: f64 = -(1.0 * 0.5 * 0.5f64.ln()
            + 2.0 * 0.2 * 0.2f64.ln()
            + 3.0 * 0.3 * 0.3f64.ln());
        assert!((discrete_weighted_entropy(&m) - by_hand).abs() < 1e-14);
    }

    #[test]
    fn discrete_model_validation() {
        assert!(DiscreteModel::new(vec![1.0], vec![0.9], vec![1.0]).is_err());
        assert!(DiscreteModel::new(vec![1.0, 2.0], vec![0.5, 0.5], vec![1.0]).is_err());
        assert!(DiscreteModel::new(vec![1.0, 2.0], vec![0.5, 0.5], vec![-1.0, 1.0]).is_err());
    }

    #[test]
    fn varextropy_identities() {
        // Uniform probabilities give zero varextropy.
        for n in [2usize, 3, 5, 8] {
            let p = vec![1.0 / n as f64; n];
            let m = DiscreteModel::new((0..n).map(|i| i as f64).collect(), p, vec![1.0; n]).unwrap();
            assert!(varextropy(&m).unwrap().abs() < 1e-15);
        }

        let m = DiscreteModel::new(vec![0.0, 1.0], vec![0.9, 0.1], vec![1.0, 1.0]).unwrap();
        // (1/4)[(0.729 + 0.001) - 0.82^2] = 0.0144 exactly.
        assert!((varextropy(&m).unwrap() - 0.0144).abs() < 1e-15);

        // Weighted varentropy under the varextropy weights equals varextropy.
        let m = example_model(0.5, 0.3);
        let reweighted = varextropy_weight(&m).unwrap();
        assert!(
            (discrete_weighted_varentropy(&reweighted) - varextropy(&m).unwrap()).abs() < 1e-12
        );

        let degenerate =
            DiscreteModel::new(vec![1.0, 2.0], vec![1.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            varextropy_weight(&degenerate),
            Err(Error::DegenerateProbability(_))
        ));
    }

    #[test]
    fn discrete_varentropy_joint_permutation_invariance() {
        let m = DiscreteModel::new(
            vec![1.0, 2.0, 3.0, 4.0],
            vec![0.1, 0.2, 0.3, 0.4],
            vec![2.0, 0.5, 1.0, 3.0],
        )
        .unwrap();
        let perm = DiscreteModel::new(
            vec![3.0, 1.0, 4.0, 2.0],
            vec![0.3, 0.1, 0.4, 0.2],
            vec![1.0, 2.0, 3.0, 0.5],
        )
        .unwrap();
        assert!((discrete_varentropy(&m) - discrete_varentropy(&perm)).abs() < 1e-15);
        assert!((discrete_weighted_varentropy(&m) - discrete_weighted_varentropy(&perm)).abs() < 1e-15);
    }

    #[test]
    fn envelope_condition_cases() {
        let lomax = Distribution::lomax(1.0, 1.0).unwrap();
        let r = wve_upper_bound(&lomax, 1.0, 0.5, &cfg()).unwrap();
        assert!(r.condition_holds);

        let e = Distribution::exponential(1.0).unwrap();
        let r = wve_upper_bound(&e, 1.0, 2.0, &cfg()).unwrap();
        assert!(r.condition_holds);
        // VE^x = 20 for the unit exponential; the bound must dominate.
        let wve = weighted_varentropy(&e, &WeightFunction::Identity, &cfg()).unwrap();
        assert!(wve <= r.bound + 1e-8, "wve {wve} bound {}", r.bound);

        let narrow = Distribution::uniform(0.0, 0.5).unwrap();
        let r = wve_upper_bound(&narrow, 1.0, 0.5, &cfg()).unwrap();
        assert!(!r.condition_holds, "density 2 > 1 must fail the envelope");
    }

    #[test]
    fn weight_parsing() {
        assert!(matches!(WeightFunction::parse("x"), Ok(WeightFunction::Identity)));
        assert!(matches!(WeightFunction::parse("x2"), Ok(WeightFunction::Square)));
        assert!(matches!(WeightFunction::parse("unit"), Ok(WeightFunction::Unit)));
        let w = WeightFunction::parse("affine:2,0.5").unwrap();
        assert!((w.eval(1.0) - 2.5).abs() < 1e-15);
        let w = WeightFunction::parse("cubquad:1,2").unwrap();
        assert!((w.eval(2.0) - 16.0).abs() < 1e-15);
        assert!(WeightFunction::parse("bogus").is_err());
        assert!(WeightFunction::parse("affine:1").is_err());
    }
}
