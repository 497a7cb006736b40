use std::f64::consts::PI;

use super::params::{IntegralId, ParamSet};
use super::IntegralError;
use crate::families::{composite, hkdf2, hkdf_multi, two_index};
use crate::polycore::{ComplexFloat, MultiPoly};

/// Right-hand side of a catalog identity: a floating-point prefactor times an
/// exact polynomial evaluated at a numeric assignment of its variables.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub prefactor: ComplexFloat,
    pub family: MultiPoly,
    pub assignment: Vec<(String, ComplexFloat)>,
}

impl ClosedForm {
    pub fn value(&self) -> ComplexFloat {
        let values: Vec<ComplexFloat> = self
            .family
            .vars()
            .iter()
            .map(|v| {
                self.assignment
                    .iter()
                    .find(|(k, _)| k == v)
                    .map(|(_, z)| *z)
                    .unwrap_or_default()
            })
            .collect();
        self.prefactor * self.family.compile().eval(&values)
    }
}

fn c(re: f64) -> ComplexFloat {
    ComplexFloat::new(re, 0.0)
}

/// `π^{d/2} / Π √w` with principal square roots taken factor by factor.
fn gauss_norm(weights: &[ComplexFloat]) -> ComplexFloat {
    weights
        .iter()
        .fold(c(PI.powf(weights.len() as f64 / 2.0)), |acc, w| acc / w.sqrt())
}

fn quarter_inv(a: ComplexFloat) -> ComplexFloat {
    c(0.25) / a
}

/// `1/(4a) − 1/(4b) = (b−a)/(4ab)`, the residual second argument left when
/// two conjugate directions are integrated out.
fn split_gap(a: ComplexFloat, b: ComplexFloat) -> ComplexFloat {
    quarter_inv(a) - quarter_inv(b)
}

fn assign(vars: &[&str], vals: &[ComplexFloat]) -> Vec<(String, ComplexFloat)> {
    vars.iter().zip(vals).map(|(k, v)| (k.to_string(), *v)).collect()
}

fn multi_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

/// Exact symbolic pieces of the closed form for `id` at `params`.
pub fn closed_form_parts(id: IntegralId, params: &ParamSet) -> Result<ClosedForm, IntegralError> {
    params.validate(id)?;
    let p = |k: &str| params.at(k);
    let deg = |k: &str| params.degree(k);
    let two_index_vars = ["x", "y", "z", "w", "tau"];
    let composite_vars = ["x1", "x2", "x3", "x4", "tau"];
    let zero = c(0.0);
    let out = match id {
        IntegralId::GAUSS_1D_Y => ClosedForm {
            prefactor: gauss_norm(&[p("b")]),
            family: hkdf2(deg("n"), 4),
            assignment: assign(&["x", "y"], &[p("x"), quarter_inv(p("b"))]),
        },
        IntegralId::COMPLEX_2D => {
            let (a, b) = (p("a"), p("b"));
            let shift = ComplexFloat::new(p("delta1").re, p("delta2").re);
            ClosedForm {
                prefactor: gauss_norm(&[a, b]),
                family: hkdf2(deg("n"), 2),
                assignment: assign(&["x", "y"], &[shift, p("y") + split_gap(a, b)]),
            }
        }
        IntegralId::COMPLEX_3D => {
            let (a, b, cc) = (p("a"), p("b"), p("c"));
            let shift = ComplexFloat::new(p("delta1").re, p("delta2").re);
            let names = multi_names(4);
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            ClosedForm {
                prefactor: gauss_norm(&[a, b, cc]),
                family: hkdf_multi(deg("n"), 4),
                assignment: assign(&names, &[shift, split_gap(a, b), zero, quarter_inv(cc)]),
            }
        }
        IntegralId::TWO_COMPLEX_4D => {
            let (a, b, cc, d) = (p("a"), p("b"), p("c"), p("d"));
            let shift = ComplexFloat::new(p("delta1").re, p("delta2").re);
            let names = multi_names(4);
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            ClosedForm {
                prefactor: gauss_norm(&[a, b, cc, d]),
                family: hkdf_multi(deg("n"), 4),
                assignment: assign(&names, &[shift, split_gap(a, b), zero, split_gap(cc, d)]),
            }
        }
        IntegralId::PRODUCT_1D => {
            let a = p("a");
            ClosedForm {
                prefactor: gauss_norm(&[a]),
                family: two_index(deg("m"), deg("n")),
                assignment: assign(
                    &two_index_vars,
                    &[
                        p("delta"),
                        p("y") + quarter_inv(a),
                        p("eta"),
                        p("w") + quarter_inv(a),
                        c(2.0) * quarter_inv(a),
                    ],
                ),
            }
        }
        IntegralId::PRODUCT_COMPLEX_2D => {
            let (a, b) = (p("a"), p("b"));
            let shift = ComplexFloat::new(p("delta1").re, p("delta2").re);
            let gap = split_gap(a, b);
            ClosedForm {
                prefactor: gauss_norm(&[a, b]),
                family: two_index(deg("m"), deg("n")),
                assignment: assign(
                    &two_index_vars,
                    &[shift, p("y1") + gap, shift, p("y2") + gap, c(2.0) * gap],
                ),
            }
        }
        IntegralId::ORTHOGONALITY => {
            // The paired weight b = a/(1−a) makes every argument vanish and the
            // coupling equal to 1/2, leaving δ_{mn} n!/2^n.
            let a = p("a").re;
            ClosedForm {
                prefactor: c(PI / (a * (1.0 / (1.0 - a)).sqrt())),
                family: two_index(deg("m"), deg("n")),
                assignment: assign(&two_index_vars, &[zero, zero, zero, zero, c(0.5)]),
            }
        }
        IntegralId::TWO_INDEX_2D => {
            let (a, b) = (p("a"), p("b"));
            ClosedForm {
                prefactor: gauss_norm(&[a, b]),
                family: composite(deg("m"), deg("n"), 4, 4, 1),
                assignment: assign(
                    &composite_vars,
                    &[p("x"), quarter_inv(a), p("z"), quarter_inv(b), p("tau")],
                ),
            }
        }
        IntegralId::CONJUGATE_PAIR_2D => {
            let (a, b) = (p("a"), p("b"));
            let inv_a = c(1.0) / a;
            let inv_b = c(1.0) / b;
            let sigma_minus = (inv_a - inv_b) * 0.5;
            let sigma_plus = (inv_a + inv_b) * 0.5;
            ClosedForm {
                prefactor: gauss_norm(&[a, b]),
                family: composite(deg("m"), deg("n"), 4, 4, 2),
                assignment: assign(
                    &composite_vars,
                    &[p("x1"), sigma_minus * 0.5, p("x2"), sigma_minus * 0.5, sigma_plus],
                ),
            }
        }
        IntegralId::HKDF_XY_2D => {
            let (a, b) = (p("a"), p("b"));
            let names = multi_names(4);
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            ClosedForm {
                prefactor: gauss_norm(&[a, b]),
                family: hkdf_multi(deg("n"), 4),
                assignment: assign(&names, &[p("delta"), quarter_inv(a), zero, quarter_inv(b)]),
            }
        }
        IntegralId::H3_3D => {
            let ws = [p("a1"), p("a2"), p("a3")];
            let names = multi_names(6);
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            ClosedForm {
                prefactor: gauss_norm(&ws),
                family: hkdf_multi(deg("n"), 6),
                assignment: assign(
                    &names,
                    &[
                        p("delta"),
                        quarter_inv(ws[0]),
                        zero,
                        quarter_inv(ws[1]),
                        zero,
                        quarter_inv(ws[2]),
                    ],
                ),
            }
        }
        IntegralId::INCOMPLETE_2D => {
            let (a, b) = (p("a"), p("b"));
            let gap = split_gap(a, b);
            let coupling = p("tau") + c(2.0) * (quarter_inv(a) + quarter_inv(b));
            ClosedForm {
                prefactor: gauss_norm(&[a, b]),
                family: two_index(deg("m"), deg("n")),
                assignment: assign(&two_index_vars, &[zero, gap, zero, gap, coupling]),
            }
        }
    };
    Ok(out)
}

/// Closed-form value of the integral `id` at `params`.
pub fn closed_form(id: IntegralId, params: &ParamSet) -> Result<ComplexFloat, IntegralError> {
    closed_form_parts(id, params).map(|cf| cf.value())
}
