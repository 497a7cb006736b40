//! Independent numerical side of every catalog identity, and the comparator.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::closed::closed_form;
use super::params::{format_complex, IntegralId, ParamKind, ParamSet};
use super::quadrature::{tensor_quadrature, Integrand, PointFn, QuadratureConfig, QuadratureOutcome};
use super::IntegralError;
use crate::families::{hkdf2, hkdf_multi, incomplete, two_index};
use crate::polycore::{CompiledPoly, ComplexFloat, MultiPoly};

/// Absolute agreement accepted regardless of `rel_tol`, as a multiple of
/// `∫|integrand|`. It covers identities whose exact value is zero, where the
/// relative discrepancy is meaningless and only floating-point cancellation remains.
pub const ROUNDING_FLOOR: f64 = 1e-12;

const DISCREPANCY_FLOOR: f64 = 1e-300;

type ArgFn = Arc<dyn Fn(&[f64], &mut [ComplexFloat]) + Send + Sync>;

fn c(re: f64) -> ComplexFloat {
    ComplexFloat::new(re, 0.0)
}

fn arg_fn(f: impl Fn(&[f64], &mut [ComplexFloat]) + Send + Sync + 'static) -> ArgFn {
    Arc::new(f)
}

/// Integrand given by a product of polynomial factors, each evaluated at
/// arguments computed from the integration point.
fn product_integrand(weights: Vec<f64>, factors: Vec<(&MultiPoly, ArgFn)>) -> Integrand {
    let factors: Arc<Vec<(CompiledPoly, ArgFn)>> =
        Arc::new(factors.into_iter().map(|(p, f)| (p.compile(), f)).collect());
    Integrand::new(weights, move || {
        let factors = Arc::clone(&factors);
        let mut args: Vec<Vec<ComplexFloat>> =
            factors.iter().map(|(p, _)| vec![c(0.0); p.nvars()]).collect();
        let mut scratch: Vec<ComplexFloat> = Vec::new();
        let f: PointFn = Box::new(move |t: &[f64]| {
            let mut acc = c(1.0);
            for ((poly, argf), buf) in factors.iter().zip(args.iter_mut()) {
                argf(t, buf);
                acc *= poly.eval_with(buf, &mut scratch);
            }
            acc
        });
        f
    })
}

fn real_weight(params: &ParamSet, key: &str) -> Result<f64, IntegralError> {
    let w = params.at(key);
    if w.im != 0.0 {
        return Err(IntegralError::ComplexWeight { key: key.to_string(), value: format_complex(w) });
    }
    Ok(w.re)
}

/// Integrand of the orthogonality family, `H_m(Z, −1/4) H_n(Z, −1/4)` with
/// `Z = x1 + i x2`, against `exp(−a x1² − b x2²)`.
fn orthogonality_integrand(m: u32, n: u32, a: f64, b: f64) -> Integrand {
    let z = arg_fn(|t, v| {
        v[0] = ComplexFloat::new(t[0], t[1]);
        v[1] = c(-0.25);
    });
    product_integrand(vec![a, b], vec![(&hkdf2(m, 2), z.clone()), (&hkdf2(n, 2), z)])
}

/// Left-hand side integrand of `id` at `params`, without the Gaussian weight.
pub fn integrand(id: IntegralId, params: &ParamSet) -> Result<Integrand, IntegralError> {
    params.validate(id)?;
    let p = |k: &str| params.at(k);
    let deg = |k: &str| params.degree(k);
    let w = |k: &str| real_weight(params, k);
    let out = match id {
        IntegralId::GAUSS_1D_Y => {
            let x = p("x");
            product_integrand(
                vec![w("b")?],
                vec![(
                    &hkdf2(deg("n"), 2),
                    arg_fn(move |t, v| {
                        v[0] = x;
                        v[1] = c(t[0]);
                    }),
                )],
            )
        }
        IntegralId::COMPLEX_2D => {
            let (d1, d2, y) = (p("delta1").re, p("delta2").re, p("y"));
            product_integrand(
                vec![w("a")?, w("b")?],
                vec![(
                    &hkdf2(deg("n"), 2),
                    arg_fn(move |t, v| {
                        v[0] = ComplexFloat::new(t[0] + d1, t[1] + d2);
                        v[1] = y;
                    }),
                )],
            )
        }
        IntegralId::COMPLEX_3D => {
            let (d1, d2) = (p("delta1").re, p("delta2").re);
            product_integrand(
                vec![w("a")?, w("b")?, w("c")?],
                vec![(
                    &hkdf2(deg("n"), 2),
                    arg_fn(move |t, v| {
                        v[0] = ComplexFloat::new(t[0] + d1, t[1] + d2);
                        v[1] = c(t[2]);
                    }),
                )],
            )
        }
        IntegralId::TWO_COMPLEX_4D => {
            let (d1, d2) = (p("delta1").re, p("delta2").re);
            product_integrand(
                vec![w("a")?, w("b")?, w("c")?, w("d")?],
                vec![(
                    &hkdf2(deg("n"), 2),
                    arg_fn(move |t, v| {
                        v[0] = ComplexFloat::new(t[0] + d1, t[1] + d2);
                        v[1] = ComplexFloat::new(t[2], t[3]);
                    }),
                )],
            )
        }
        IntegralId::PRODUCT_1D => {
            let (delta, eta, y, ww) = (p("delta"), p("eta"), p("y"), p("w"));
            product_integrand(
                vec![w("a")?],
                vec![
                    (
                        &hkdf2(deg("m"), 2),
                        arg_fn(move |t, v| {
                            v[0] = c(t[0]) + delta;
                            v[1] = y;
                        }),
                    ),
                    (
                        &hkdf2(deg("n"), 2),
                        arg_fn(move |t, v| {
                            v[0] = c(t[0]) + eta;
                            v[1] = ww;
                        }),
                    ),
                ],
            )
        }
        IntegralId::PRODUCT_COMPLEX_2D => {
            let (d1, d2, y1, y2) = (p("delta1").re, p("delta2").re, p("y1"), p("y2"));
            product_integrand(
                vec![w("a")?, w("b")?],
                vec![
                    (
                        &hkdf2(deg("m"), 2),
                        arg_fn(move |t, v| {
                            v[0] = ComplexFloat::new(t[0] + d1, t[1] + d2);
                            v[1] = y1;
                        }),
                    ),
                    (
                        &hkdf2(deg("n"), 2),
                        arg_fn(move |t, v| {
                            v[0] = ComplexFloat::new(t[0] + d1, t[1] + d2);
                            v[1] = y2;
                        }),
                    ),
                ],
            )
        }
        IntegralId::ORTHOGONALITY => {
            let a = w("a")?;
            orthogonality_integrand(deg("m"), deg("n"), a, paired_weight(a))
        }
        IntegralId::TWO_INDEX_2D => {
            let (x, z, tau) = (p("x"), p("z"), p("tau"));
            product_integrand(
                vec![w("a")?, w("b")?],
                vec![(
                    &two_index(deg("m"), deg("n")),
                    arg_fn(move |t, v| {
                        v.copy_from_slice(&[x, c(t[0]), z, c(t[1]), tau]);
                    }),
                )],
            )
        }
        IntegralId::CONJUGATE_PAIR_2D => {
            let (x1, x2) = (p("x1"), p("x2"));
            product_integrand(
                vec![w("a")?, w("b")?],
                vec![
                    (
                        &hkdf2(deg("m"), 2),
                        arg_fn(move |t, v| {
                            v[0] = x1;
                            v[1] = ComplexFloat::new(t[0], t[1]);
                        }),
                    ),
                    (
                        &hkdf2(deg("n"), 2),
                        arg_fn(move |t, v| {
                            v[0] = x2;
                            v[1] = ComplexFloat::new(t[0], -t[1]);
                        }),
                    ),
                ],
            )
        }
        IntegralId::HKDF_XY_2D => {
            let delta = p("delta");
            product_integrand(
                vec![w("a")?, w("b")?],
                vec![(
                    &hkdf2(deg("n"), 2),
                    arg_fn(move |t, v| {
                        v[0] = c(t[0]) + delta;
                        v[1] = c(t[1]);
                    }),
                )],
            )
        }
        IntegralId::H3_3D => {
            let delta = p("delta");
            product_integrand(
                vec![w("a1")?, w("a2")?, w("a3")?],
                vec![(
                    &hkdf_multi(deg("n"), 3),
                    arg_fn(move |t, v| {
                        v[0] = c(t[0]) + delta;
                        v[1] = c(t[1]);
                        v[2] = c(t[2]);
                    }),
                )],
            )
        }
        IntegralId::INCOMPLETE_2D => {
            let tau = p("tau");
            product_integrand(
                vec![w("a")?, w("b")?],
                vec![(
                    &incomplete(deg("m"), deg("n")),
                    arg_fn(move |t, v| {
                        v[0] = ComplexFloat::new(t[0], t[1]);
                        v[1] = ComplexFloat::new(t[0], -t[1]);
                        v[2] = tau;
                    }),
                )],
            )
        }
    };
    Ok(out)
}

/// Second weight that makes the orthogonality identity hold: `b = a/(1−a)`.
fn paired_weight(a: f64) -> f64 {
    a / (1.0 - a)
}

/// Numerical value of the left-hand side of `id`.
pub fn quadrature(
    id: IntegralId,
    params: &ParamSet,
    cfg: &QuadratureConfig,
) -> Result<QuadratureOutcome, IntegralError> {
    let f = integrand(id, params)?;
    Ok(tensor_quadrature(&f, cfg)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralResult {
    pub id: String,
    pub params: String,
    #[serde(serialize_with = "ser_complex")]
    pub closed_form_value: ComplexFloat,
    #[serde(serialize_with = "ser_complex")]
    pub oracle_value: ComplexFloat,
    pub oracle_error_estimate: f64,
    pub relative_discrepancy: f64,
    /// `∫|integrand|`, the scale for the rounding floor.
    pub integrand_scale: f64,
    pub points_per_dim: usize,
    pub rel_tol: f64,
    pub pass: bool,
}

pub(crate) fn ser_complex<S: serde::Serializer>(z: &ComplexFloat, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

fn compare(closed: ComplexFloat, oracle: ComplexFloat, scale: f64, rel_tol: f64) -> (f64, bool) {
    let diff = (closed - oracle).norm();
    let rel = diff / closed.norm().max(DISCREPANCY_FLOOR);
    (rel, rel <= rel_tol || diff <= ROUNDING_FLOOR * scale)
}

/// Evaluates both sides of `id` and compares them at `rel_tol`.
pub fn verify(
    id: IntegralId,
    params: &ParamSet,
    cfg: &QuadratureConfig,
    rel_tol: f64,
) -> Result<IntegralResult, IntegralError> {
    let closed = closed_form(id, params)?;
    let q = quadrature(id, params, cfg)?;
    let (rel, pass) = compare(closed, q.value, q.abs_integral, rel_tol);
    Ok(IntegralResult {
        id: id.name().to_string(),
        params: params.to_string(),
        closed_form_value: closed,
        oracle_value: q.value,
        oracle_error_estimate: q.error_estimate,
        relative_discrepancy: rel,
        integrand_scale: q.abs_integral,
        points_per_dim: q.points_per_dim,
        rel_tol,
        pass,
    })
}

/// Random parameter set for `id` in the sweep ranges: weights per
/// [`IntegralId::weight_range`], degrees `0..=6`, shifts with both parts in
/// `[−2, 2]`, second arguments and couplings in `[−1, 1]`.
pub fn random_params(id: IntegralId, rng: &mut impl Rng) -> ParamSet {
    let (wlo, whi) = id.weight_range();
    let mut out = ParamSet::new();
    for &(key, kind) in id.schema() {
        let v = match kind {
            ParamKind::Degree => c(rng.gen_range(0..=6) as f64),
            ParamKind::Weight => c(rng.gen_range(wlo..=whi)),
            ParamKind::Shift => ComplexFloat::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0)),
            ParamKind::Spectator => c(rng.gen_range(-2.0..=2.0)),
            ParamKind::SecondArg | ParamKind::Coupling => c(rng.gen_range(-1.0..=1.0)),
        };
        out.insert(key, v);
    }
    out
}

/// Seeded randomized comparison of both sides of `id` over `draws` parameter
/// sets, at the default resolution and tolerance for its dimension.
pub fn sweep(id: IntegralId, draws: usize, seed: u64) -> Result<Vec<IntegralResult>, IntegralError> {
    let index = IntegralId::ALL.iter().position(|&i| i == id).unwrap_or(0) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index));
    let cfg = QuadratureConfig::for_dimension(id.dimension());
    (0..draws)
        .map(|_| {
            let params = random_params(id, &mut rng);
            verify(id, &params, &cfg, id.default_rel_tol())
        })
        .collect()
}

/// Which reading of the orthogonality integral reproduces its stated value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrthogonalityReading {
    /// Weights `a` and `a/(1−a)` on the real and imaginary directions.
    PairedWeights,
    /// The same weight `a` on both directions.
    EqualWeights,
    Neither,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub m: u32,
    pub n: u32,
    pub a: f64,
    #[serde(serialize_with = "ser_complex")]
    pub stated_value: ComplexFloat,
    #[serde(serialize_with = "ser_complex")]
    pub paired_weights: ComplexFloat,
    #[serde(serialize_with = "ser_complex")]
    pub equal_weights: ComplexFloat,
    pub matches: OrthogonalityReading,
}

/// Integrates the orthogonality integrand under both weight readings and
/// reports which one agrees with the stated right-hand side.
pub fn orthogonality_readings(
    m: u32,
    n: u32,
    a: f64,
    cfg: &QuadratureConfig,
) -> Result<OrthogonalityReport, IntegralError> {
    let params = ParamSet::new().with("m", m as f64).with("n", n as f64).with("a", a);
    let stated = closed_form(IntegralId::ORTHOGONALITY, &params)?;
    let paired = tensor_quadrature(&orthogonality_integrand(m, n, a, paired_weight(a)), cfg)?;
    let equal = tensor_quadrature(&orthogonality_integrand(m, n, a, a), cfg)?;
    let tol = 1e-6;
    let matches = if compare(stated, paired.value, paired.abs_integral, tol).1 {
        OrthogonalityReading::PairedWeights
    } else if compare(stated, equal.value, equal.abs_integral, tol).1 {
        OrthogonalityReading::EqualWeights
    } else {
        OrthogonalityReading::Neither
    };
    Ok(OrthogonalityReport {
        m,
        n,
        a,
        stated_value: stated,
        paired_weights: paired.value,
        equal_weights: equal.value,
        matches,
    })
}
