//! Truncated-series Bessel functions of integer order, their two-variable and
//! Hermite generalizations, and the Gaussian integrals they satisfy.
//!
//! Every series value carries a `tail_bound`: a bound on the truncation
//! remainder plus a small allowance for floating-point summation error.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::combinat::{factorial, factorial_f64, ratio};
use crate::families::{composite, hkdf2};
use crate::gauss::{tensor_quadrature, Integrand, IntegralResult, QuadratureConfig, QuadratureError};
use crate::polycore::{CompiledPoly, ComplexFloat, GaussianRational, MultiPoly};

/// Relative allowance for rounding in a sum, applied to `Σ|terms|`.
const ROUNDING: f64 = 8.0 * f64::EPSILON;

/// Grid of radii for Cauchy bounds on Hermite polynomials.
const CAUCHY_RADII: usize = 240;

/// Nodes on the unit circle for generating-function checks.
pub const FOURIER_NODES: usize = 512;

#[derive(Debug, Error, PartialEq)]
pub enum BesselError {
    #[error("tail bound {tail_bound:e} exceeds tolerance {tolerance:e} at K = {k}")]
    TailBoundNotMet { k: u32, tail_bound: f64, tolerance: f64 },
    #[error("Gaussian weight must be positive, got {0}")]
    NonPositiveWeight(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Summation bound `K` shared by every infinite series in a call, and the
/// largest acceptable tail bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTruncation {
    pub k: u32,
    pub tolerance: f64,
}

impl SeriesTruncation {
    pub fn new(k: u32) -> Self {
        SeriesTruncation { k, tolerance: 1e-10 }
    }

    /// Default for doubly infinite sums over `l`.
    pub fn l_sums() -> Self {
        Self::new(40)
    }

    /// Default for the one-sided Hermite–Bessel sums over `s`.
    pub fn s_sums() -> Self {
        Self::new(25)
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        SeriesTruncation { tolerance, ..self }
    }

    fn check(&self, v: SeriesValue) -> Result<SeriesValue, BesselError> {
        if v.tail_bound <= self.tolerance {
            Ok(v)
        } else {
            Err(BesselError::TailBoundNotMet { k: self.k, tail_bound: v.tail_bound, tolerance: self.tolerance })
        }
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self::l_sums()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub k: u32,
}

/// Geometric remainder bound `next/(1−q)`, infinite when `q ≥ 1`.
fn geometric_tail(next: f64, q: f64) -> f64 {
    if next == 0.0 {
        0.0
    } else if q < 1.0 {
        next / (1.0 - q)
    } else {
        f64::INFINITY
    }
}

/// `Σ_{r=0}^{K} s^r (x/2)^{n+2r} / (r!(n+r)!)` with `s = −1` for J and `+1` for I.
fn power_series(n: u32, x: f64, k: u32, alternating: bool) -> SeriesValue {
    let h = x.abs() / 2.0;
    let mut t = 1.0;
    for j in 1..=n {
        t *= h / j as f64;
    }
    let q_at = |r: u32| h * h / ((r as f64 + 1.0) * (n as f64 + r as f64 + 1.0));
    let mut sum = 0.0;
    let mut abs = 0.0;
    for r in 0..=k {
        let signed = if alternating && r % 2 == 1 { -t } else { t };
        sum += signed;
        abs += t;
        t *= q_at(r);
    }
    // `t` is now the magnitude of term K+1; later ratios are at most q_at(K+1).
    let tail = geometric_tail(t, q_at(k + 1));
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    SeriesValue { value: sign * sum, tail_bound: tail + ROUNDING * (abs + tail), k }
}

fn j_unchecked(n: i64, x: f64, k: u32) -> SeriesValue {
    let v = power_series(n.unsigned_abs() as u32, x, k, true);
    if n < 0 && n % 2 != 0 {
        SeriesValue { value: -v.value, ..v }
    } else {
        v
    }
}

fn i_unchecked(n: i64, y: f64, k: u32) -> SeriesValue {
    power_series(n.unsigned_abs() as u32, y, k, false)
}

/// Cylindrical Bessel function `J_n(x)`.
pub fn bessel_j(n: i64, x: f64, trunc: SeriesTruncation) -> Result<SeriesValue, BesselError> {
    trunc.check(j_unchecked(n, x, trunc.k))
}

/// Modified Bessel function `I_n(y)`.
pub fn bessel_i(n: i64, y: f64, trunc: SeriesTruncation) -> Result<SeriesValue, BesselError> {
    trunc.check(i_unchecked(n, y, trunc.k))
}

/// `Σ_{l>K} (h)^l/l!` bounded geometrically, with `h = |y|/2`.
fn outer_tail(h: f64, k: u32) -> f64 {
    let mut g = 1.0;
    for l in 1..=k + 1 {
        g *= h / l as f64;
    }
    geometric_tail(g, h / (k as f64 + 2.0))
}

/// `Σ_{l=−K}^{K} A_l B_l`, propagating the error bound of each factor.
fn bilinear(
    k: u32,
    mut factors: impl FnMut(i64) -> (SeriesValue, SeriesValue),
    outer: f64,
) -> SeriesValue {
    let mut sum = 0.0;
    let mut abs = 0.0;
    let mut err = outer;
    for l in -(k as i64)..=k as i64 {
        let (a, b) = factors(l);
        sum += a.value * b.value;
        abs += (a.value * b.value).abs();
        err += a.tail_bound * b.value.abs() + b.tail_bound * a.value.abs() + a.tail_bound * b.tail_bound;
    }
    SeriesValue { value: sum, tail_bound: err + ROUNDING * abs, k }
}

fn j2_unchecked(n: i64, x: f64, y: f64, k: u32) -> SeriesValue {
    // |J_{n−2l}(x)| ≤ 1 and |J_l(y)| ≤ (|y|/2)^|l| / |l|! for real arguments.
    let outer = 2.0 * outer_tail(y.abs() / 2.0, k);
    bilinear(k, |l| (j_unchecked(n - 2 * l, x, k), j_unchecked(l, y, k)), outer)
}

/// Two-variable Bessel function `J_n(x, y) = Σ_l J_{n−2l}(x) J_l(y)`.
pub fn bessel_2var(n: i64, x: f64, y: f64, trunc: SeriesTruncation) -> Result<SeriesValue, BesselError> {
    trunc.check(j2_unchecked(n, x, y, trunc.k))
}

fn ji4_unchecked(n: i64, x: f64, y: f64, k: u32) -> SeriesValue {
    // |I_l(y)| ≤ (|y|/2)^l / l! · e^{y²/4}.
    let outer = 2.0 * outer_tail(y.abs() / 2.0, k) * (y * y / 4.0).exp();
    bilinear(k, |l| (j_unchecked(n - 4 * l, x, k), i_unchecked(l, y, k)), outer)
}

/// `JI^(4)_n(x, y) = Σ_l J_{n−4l}(x) I_l(y)`.
pub fn ji4(n: i64, x: f64, y: f64, trunc: SeriesTruncation) -> Result<SeriesValue, BesselError> {
    trunc.check(ji4_unchecked(n, x, y, trunc.k))
}

/// Bound on `Σ_{j≥0} |term_{first+j}|` for terms bounded by `E(ρ)·ρ^{−(first+2j)}`,
/// minimized over a fixed grid of radii `ρ > 1`.
fn cauchy_tail(first: u32, log_e: impl Fn(f64) -> f64) -> f64 {
    (0..CAUCHY_RADII)
        .map(|i| {
            let rho = 1.02f64 * (1.03f64).powi(i as i32);
            let log_bound = log_e(rho) - first as f64 * rho.ln() - (1.0 - rho.powi(-2)).ln();
            log_bound.exp()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Compiled truncated Hermite–Bessel series
/// `Σ_{r=0}^{K} (−1)^r H_{n+2r}(x, y) / (2^{n+2r} r! (n+r)!)`, built as one exact polynomial in `(x, y)`.
#[derive(Clone, Debug)]
pub struct HermiteBesselSeries {
    n: u32,
    k: u32,
    poly: MultiPoly,
    compiled: CompiledPoly,
}

impl HermiteBesselSeries {
    pub fn new(n: u32, k: u32) -> Self {
        let mut poly = MultiPoly::zero(&["x", "y"]);
        for r in 0..=k {
            let den = (num_bigint::BigInt::from(1) << (n + 2 * r)) * factorial(r) * factorial(n + r);
            let mut c = GaussianRational::from(ratio(1.into(), den));
            if r % 2 == 1 {
                c = -c;
            }
            poly = poly.add(&hkdf2(n + 2 * r, 2).scale(&c));
        }
        let compiled = poly.compile_for(&["x", "y"]);
        HermiteBesselSeries { n, k, poly, compiled }
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    /// Bound on the omitted terms `r > K` from `|H_k(x,y)| ≤ k! e^{|x|ρ+|y|ρ²}/ρ^k`
    /// and `C(n+2r, r) ≤ 2^{n+2r}`.
    pub fn tail_bound(&self, x: f64, y: f64) -> f64 {
        cauchy_tail(self.n + 2 * self.k + 2, |rho| x.abs() * rho + y.abs() * rho * rho)
    }

    pub fn eval(&self, x: f64, y: f64) -> SeriesValue {
        let v = self.compiled.eval(&[ComplexFloat::new(x, 0.0), ComplexFloat::new(y, 0.0)]).re;
        let scale = self.compiled.magnitude(&[x, y]);
        SeriesValue { value: v, tail_bound: self.tail_bound(x, y) + ROUNDING * scale, k: self.k }
    }
}

/// Hermite–Bessel function `_HJ_n(x, y)`.
pub fn hermite_bessel(n: u32, x: f64, y: f64, trunc: SeriesTruncation) -> Result<SeriesValue, BesselError> {
    trunc.check(HermiteBesselSeries::new(n, trunc.k).eval(x, y))
}

/// `(1/2π)∮ t^{−n−1} exp((x/2)(t−1/t) + (y/2)(t²−1/t²)) dt` by the trapezoid
/// rule on the unit circle. Independent of the series definition of `J_n(x, y)`.
pub fn bessel_2var_fourier(n: i64, x: f64, y: f64, nodes: usize) -> f64 {
    circle_average(nodes, |th| ComplexFloat::new(0.0, x * th.sin() + y * (2.0 * th).sin() - n as f64 * th).exp())
}

/// Fourier coefficient of `exp((x/2)(t−1/t) + (y/2)(t⁴+1/t⁴))`, i.e. `JI^(4)_n(x, y)`.
pub fn ji4_fourier(n: i64, x: f64, y: f64, nodes: usize) -> f64 {
    circle_average(nodes, |th| {
        ComplexFloat::new(y * (4.0 * th).cos(), x * th.sin() - n as f64 * th).exp()
    })
}

fn circle_average(nodes: usize, f: impl Fn(f64) -> ComplexFloat) -> f64 {
    let sum: ComplexFloat = (0..nodes).map(|j| f(2.0 * PI * j as f64 / nodes as f64)).sum();
    sum.re / nodes as f64
}

fn check_weight(a: f64) -> Result<(), BesselError> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(BesselError::NonPositiveWeight(a))
    }
}

/// Integrates a tail bound for the error estimate. The bound is only piecewise
/// smooth, so it gets one pass on the starting grid instead of refinement.
fn tail_integral(a: f64, f: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static, cfg: &QuadratureConfig) -> Result<f64, BesselError> {
    let once = QuadratureConfig { tol: f64::MAX, max_refinements: 0, ..cfg.clone() };
    Ok(tensor_quadrature(&real_integrand(a, f), &once)?.value.re)
}

fn real_integrand(a: f64, f: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static) -> Integrand {
    Integrand::new(vec![a], move || {
        let f = f.clone();
        Box::new(move |t: &[f64]| ComplexFloat::new(f(t[0]), 0.0))
    })
}

fn result(
    id: &str,
    params: String,
    closed: f64,
    oracle: f64,
    error_estimate: f64,
    scale: f64,
    points: usize,
    rel_tol: f64,
) -> IntegralResult {
    let diff = (closed - oracle).abs();
    let rel = diff / closed.abs().max(1e-300);
    IntegralResult {
        id: id.to_string(),
        params,
        closed_form_value: ComplexFloat::new(closed, 0.0),
        oracle_value: ComplexFloat::new(oracle, 0.0),
        oracle_error_estimate: error_estimate,
        relative_discrepancy: rel,
        integrand_scale: scale,
        points_per_dim: points,
        rel_tol,
        pass: rel <= rel_tol || diff <= crate::gauss::ROUNDING_FLOOR * scale,
    }
}

/// Closed form of `∫ e^{−ay²} J_n(x, y) dy = √(π/a) e^{−1/(8a)} JI^(4)_n(x, 1/(8a))`.
pub fn bessel_gauss_closed(n: i64, x: f64, a: f64, trunc: SeriesTruncation) -> Result<SeriesValue, BesselError> {
    check_weight(a)?;
    let pre = (PI / a).sqrt() * (-1.0 / (8.0 * a)).exp();
    let v = ji4(n, x, 1.0 / (8.0 * a), trunc)?;
    Ok(SeriesValue { value: pre * v.value, tail_bound: pre * v.tail_bound, k: v.k })
}

/// Compares the closed form of `∫ e^{−ay²} J_n(x, y) dy` with quadrature of the
/// two-variable Bessel series.
pub fn bessel_gauss_integral(
    n: i64,
    x: f64,
    a: f64,
    trunc: SeriesTruncation,
    quad_cfg: &QuadratureConfig,
    rel_tol: f64,
) -> Result<IntegralResult, BesselError> {
    let closed = bessel_gauss_closed(n, x, a, trunc)?;
    let k = trunc.k.max(40);
    let q = tensor_quadrature(&real_integrand(a, move |y| j2_unchecked(n, x, y, k).value), quad_cfg)?;
    let tail = tail_integral(a, move |y| j2_unchecked(n, x, y, k).tail_bound, quad_cfg)?;
    Ok(result(
        "BESSEL_GAUSS",
        format!("n={n},x={x},a={a}"),
        closed.value,
        q.value.re,
        q.error_estimate + tail,
        q.abs_integral,
        q.points_per_dim,
        rel_tol,
    ))
}

/// Closed form of `∫ e^{−ay²} H_n(x, y) _HJ_m(z, y) dy`:
/// `√(π/a) Σ_s (−1)^s / (2^{m+2s} s! (m+s)!) H^{(4,4,2)}_{n,m+2s}(x, 1/(4a); z, 1/(4a) | 1/(2a))`.
pub fn jgh_closed(n: u32, m: u32, x: f64, z: f64, a: f64, trunc: SeriesTruncation) -> Result<SeriesValue, BesselError> {
    check_weight(a)?;
    let q = 0.25 / a;
    let at = [x, q, z, q, 2.0 * q].map(|v| ComplexFloat::new(v, 0.0));
    let mut sum = 0.0;
    let mut abs = 0.0;
    for s in 0..=trunc.k {
        let c = 1.0 / (2f64.powi((m + 2 * s) as i32) * factorial_f64(s) * factorial_f64(m + s));
        let h = composite(n, m + 2 * s, 4, 4, 2).compile().eval(&at).re;
        let t = if s % 2 == 1 { -c * h } else { c * h };
        sum += t;
        abs += t.abs();
    }
    // Each omitted term is √(a/π)∫e^{−ay²} H_n(x,y) c_s H_{m+2s}(z,y) dy; bound
    // |H_n(x,y)| ≤ n! e^{|x|+|y|} and |c_s H_{m+2s}(z,y)| ≤ e^{|z|ρ+|y|ρ²} ρ^{−(m+2s)}.
    let tail = factorial_f64(n)
        * cauchy_tail(m + 2 * trunc.k + 2, |rho| {
            let c = rho * rho + 1.0;
            (2.0f64).ln() + x.abs() + z.abs() * rho + c * c / (4.0 * a)
        });
    let pre = (PI / a).sqrt();
    trunc.check(SeriesValue {
        value: pre * sum,
        tail_bound: pre * (tail + ROUNDING * abs),
        k: trunc.k,
    })
}

/// Compares the closed form of `∫ e^{−ay²} H_n(x, y) _HJ_m(z, y) dy` with
/// quadrature using the Hermite–Bessel series.
pub fn jgh_integral(
    n: u32,
    m: u32,
    x: f64,
    z: f64,
    a: f64,
    trunc: SeriesTruncation,
    quad_cfg: &QuadratureConfig,
    rel_tol: f64,
) -> Result<IntegralResult, BesselError> {
    let closed = jgh_closed(n, m, x, z, a, trunc)?;
    let hn = std::sync::Arc::new(hkdf2(n, 2).compile_for(&["x", "y"]));
    let hj = std::sync::Arc::new(HermiteBesselSeries::new(m, (2 * trunc.k).max(60)));
    let eval_h = {
        let hn = hn.clone();
        move |y: f64| hn.eval(&[ComplexFloat::new(x, 0.0), ComplexFloat::new(y, 0.0)]).re
    };
    let value = {
        let (eval_h, hj) = (eval_h.clone(), hj.clone());
        real_integrand(a, move |y| eval_h(y) * hj.eval(z, y).value)
    };
    let q = tensor_quadrature(&value, quad_cfg)?;
    let t = tail_integral(a, move |y| eval_h(y).abs() * hj.tail_bound(z, y), quad_cfg)?;
    Ok(result(
        "HERMITE_BESSEL_GAUSS",
        format!("n={n},m={m},x={x},z={z},a={a}"),
        closed.value,
        q.value.re,
        q.error_estimate + t,
        q.abs_integral,
        q.points_per_dim,
        rel_tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const T: SeriesTruncation = SeriesTruncation { k: 40, tolerance: 1e-10 };

    #[test]
    fn reference_values() {
        assert_eq!(bessel_j(0, 0.0, T).unwrap().value, 1.0);
        assert_eq!(bessel_j(1, 0.0, T).unwrap().value, 0.0);
        assert_abs_diff_eq!(bessel_j(0, 1.0, T).unwrap().value, 0.7651976866, epsilon = 1e-10);
        assert_abs_diff_eq!(bessel_i(0, 1.0, T).unwrap().value, 1.2660658778, epsilon = 1e-10);
        assert_eq!(bessel_i(1, 0.0, T).unwrap().value, 0.0);
    }

    #[test]
    fn negative_orders() {
        let a = bessel_j(3, 1.3, T).unwrap().value;
        assert_eq!(bessel_j(-3, 1.3, T).unwrap().value, -a);
        assert_eq!(bessel_j(-2, 1.3, T).unwrap().value, bessel_j(2, 1.3, T).unwrap().value);
        assert_eq!(bessel_i(-3, 0.7, T).unwrap().value, bessel_i(3, 0.7, T).unwrap().value);
        // odd order is odd in x
        assert_eq!(bessel_j(3, -1.3, T).unwrap().value, -a);
    }

    #[test]
    fn tolerance_enforced() {
        let err = bessel_j(0, 30.0, SeriesTruncation::new(5)).unwrap_err();
        assert!(matches!(err, BesselError::TailBoundNotMet { k: 5, .. }));
    }

    #[test]
    fn hermite_bessel_small() {
        assert_abs_diff_eq!(hermite_bessel(0, 0.0, 0.0, SeriesTruncation::s_sums()).unwrap().value, 1.0);
    }
}
