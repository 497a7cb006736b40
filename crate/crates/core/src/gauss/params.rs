use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::IntegralError;
use crate::polycore::ComplexFloat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(non_camel_case_types)]
pub enum IntegralId {
    GAUSS_1D_Y,
    COMPLEX_2D,
    COMPLEX_3D,
    TWO_COMPLEX_4D,
    PRODUCT_1D,
    PRODUCT_COMPLEX_2D,
    ORTHOGONALITY,
    TWO_INDEX_2D,
    CONJUGATE_PAIR_2D,
    HKDF_XY_2D,
    H3_3D,
    INCOMPLETE_2D,
}

/// Role of a parameter. Drives validation and the ranges used by random sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    /// Non-negative integer degree.
    Degree,
    /// Gaussian weight, `Re > 0`.
    Weight,
    /// Shift that may be complex.
    Shift,
    /// Real spectator variable or real part of a split shift.
    Spectator,
    /// Second argument of a Hermite factor.
    SecondArg,
    /// Coupling between the two indices of a two-index family.
    Coupling,
}

use ParamKind::*;

impl IntegralId {
    pub const ALL: [IntegralId; 12] = [
        IntegralId::GAUSS_1D_Y,
        IntegralId::COMPLEX_2D,
        IntegralId::COMPLEX_3D,
        IntegralId::TWO_COMPLEX_4D,
        IntegralId::PRODUCT_1D,
        IntegralId::PRODUCT_COMPLEX_2D,
        IntegralId::ORTHOGONALITY,
        IntegralId::TWO_INDEX_2D,
        IntegralId::CONJUGATE_PAIR_2D,
        IntegralId::HKDF_XY_2D,
        IntegralId::H3_3D,
        IntegralId::INCOMPLETE_2D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntegralId::GAUSS_1D_Y => "GAUSS_1D_Y",
            IntegralId::COMPLEX_2D => "COMPLEX_2D",
            IntegralId::COMPLEX_3D => "COMPLEX_3D",
            IntegralId::TWO_COMPLEX_4D => "TWO_COMPLEX_4D",
            IntegralId::PRODUCT_1D => "PRODUCT_1D",
            IntegralId::PRODUCT_COMPLEX_2D => "PRODUCT_COMPLEX_2D",
            IntegralId::ORTHOGONALITY => "ORTHOGONALITY",
            IntegralId::TWO_INDEX_2D => "TWO_INDEX_2D",
            IntegralId::CONJUGATE_PAIR_2D => "CONJUGATE_PAIR_2D",
            IntegralId::HKDF_XY_2D => "HKDF_XY_2D",
            IntegralId::H3_3D => "H3_3D",
            IntegralId::INCOMPLETE_2D => "INCOMPLETE_2D",
        }
    }

    /// Parameter names and roles, in canonical order.
    pub fn schema(self) -> &'static [(&'static str, ParamKind)] {
        match self {
            IntegralId::GAUSS_1D_Y => &[("n", Degree), ("x", Spectator), ("b", Weight)],
            IntegralId::COMPLEX_2D => &[
                ("n", Degree),
                ("delta1", Spectator),
                ("delta2", Spectator),
                ("a", Weight),
                ("b", Weight),
                ("y", SecondArg),
            ],
            IntegralId::COMPLEX_3D => &[
                ("n", Degree),
                ("delta1", Spectator),
                ("delta2", Spectator),
                ("a", Weight),
                ("b", Weight),
                ("c", Weight),
            ],
            IntegralId::TWO_COMPLEX_4D => &[
                ("n", Degree),
                ("delta1", Spectator),
                ("delta2", Spectator),
                ("a", Weight),
                ("b", Weight),
                ("c", Weight),
                ("d", Weight),
            ],
            IntegralId::PRODUCT_1D => &[
                ("m", Degree),
                ("n", Degree),
                ("delta", Shift),
                ("eta", Shift),
                ("y", SecondArg),
                ("w", SecondArg),
                ("a", Weight),
            ],
            IntegralId::PRODUCT_COMPLEX_2D => &[
                ("m", Degree),
                ("n", Degree),
                ("delta1", Spectator),
                ("delta2", Spectator),
                ("y1", SecondArg),
                ("y2", SecondArg),
                ("a", Weight),
                ("b", Weight),
            ],
            IntegralId::ORTHOGONALITY => &[("m", Degree), ("n", Degree), ("a", Weight)],
            IntegralId::TWO_INDEX_2D => &[
                ("m", Degree),
                ("n", Degree),
                ("x", Shift),
                ("z", Shift),
                ("tau", Coupling),
                ("a", Weight),
                ("b", Weight),
            ],
            IntegralId::CONJUGATE_PAIR_2D => &[
                ("m", Degree),
                ("n", Degree),
                ("x1", Shift),
                ("x2", Shift),
                ("a", Weight),
                ("b", Weight),
            ],
            IntegralId::HKDF_XY_2D => &[("n", Degree), ("delta", Shift), ("a", Weight), ("b", Weight)],
            IntegralId::H3_3D => &[
                ("n", Degree),
                ("delta", Shift),
                ("a1", Weight),
                ("a2", Weight),
                ("a3", Weight),
            ],
            IntegralId::INCOMPLETE_2D => &[
                ("m", Degree),
                ("n", Degree),
                ("tau", Coupling),
                ("a", Weight),
                ("b", Weight),
            ],
        }
    }

    /// Number of integration variables.
    pub fn dimension(self) -> usize {
        match self {
            IntegralId::GAUSS_1D_Y | IntegralId::PRODUCT_1D => 1,
            IntegralId::COMPLEX_3D | IntegralId::H3_3D => 3,
            IntegralId::TWO_COMPLEX_4D => 4,
            _ => 2,
        }
    }

    /// Acceptance tolerance for closed form vs quadrature.
    pub fn default_rel_tol(self) -> f64 {
        match self.dimension() {
            1 => 1e-8,
            4 => 1e-4,
            _ => 1e-6,
        }
    }

    /// Range of weights drawn in random sweeps. The orthogonality identity
    /// pairs `a` with `b = a/(1−a)`, so `a` stays in a band where both lie in `[1/2, 2]`.
    pub fn weight_range(self) -> (f64, f64) {
        match self {
            IntegralId::ORTHOGONALITY => (0.5, 2.0 / 3.0),
            _ => (0.5, 2.0),
        }
    }
}

impl fmt::Display for IntegralId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntegralId {
    type Err = IntegralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.trim().to_ascii_uppercase();
        IntegralId::ALL
            .into_iter()
            .find(|id| id.name() == up)
            .ok_or_else(|| IntegralError::UnknownId(s.to_string()))
    }
}

/// Named parameter values. Degrees are stored as real numbers and checked
/// for integrality when read.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamSet {
    values: BTreeMap<String, ComplexFloat>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<ComplexFloat>) -> Self {
        self.insert(key, value);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Into<ComplexFloat>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ComplexFloat)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn get(&self, key: &str) -> Option<ComplexFloat> {
        self.values.get(key).copied()
    }

    /// Value of a key known to be present after [`validate`](Self::validate).
    pub(crate) fn at(&self, key: &str) -> ComplexFloat {
        self.values[key]
    }

    pub(crate) fn degree(&self, key: &str) -> u32 {
        self.values[key].re as u32
    }

    /// Parses `key=value,key=value`. Values accept decimals, `p/q` fractions
    /// and complex forms such as `1-2i`.
    pub fn parse(s: &str) -> Result<Self, IntegralError> {
        let mut out = ParamSet::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| IntegralError::BadValue(item.to_string()))?;
            let k = k.trim();
            if out.values.contains_key(k) {
                return Err(IntegralError::BadValue(format!("duplicate key `{k}`")));
            }
            out.insert(k, parse_complex(v)?);
        }
        Ok(out)
    }

    /// Checks keys against the schema of `id` and enforces the value constraints.
    pub fn validate(&self, id: IntegralId) -> Result<(), IntegralError> {
        let schema = id.schema();
        let schema_err = |detail: String| IntegralError::Schema { id, detail };
        for k in self.values.keys() {
            if !schema.iter().any(|(s, _)| s == k) {
                return Err(schema_err(format!("unknown parameter `{k}`")));
            }
        }
        for &(key, kind) in schema {
            let v = self.get(key).ok_or_else(|| schema_err(format!("missing parameter `{key}`")))?;
            match kind {
                Degree => {
                    if v.im != 0.0 || v.re < 0.0 || v.re.fract() != 0.0 || v.re > 64.0 {
                        return Err(schema_err(format!("`{key}` must be an integer in 0..=64")));
                    }
                }
                Weight => {
                    if !(v.re > 0.0) {
                        return Err(IntegralError::NonPositiveWeight {
                            key: key.to_string(),
                            value: format_complex(v),
                        });
                    }
                }
                _ => {
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return Err(schema_err(format!("`{key}` must be finite")));
                    }
                }
            }
        }
        if id == IntegralId::ORTHOGONALITY {
            let a = self.at("a");
            if a.im != 0.0 || a.re >= 1.0 {
                return Err(schema_err("orthogonality weight `a` must be real with 0 < a < 1".into()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.values {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{k}={}", format_complex(*v))?;
        }
        Ok(())
    }
}

pub(crate) fn format_complex(z: ComplexFloat) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().ok()?;
        let q: f64 = q.trim().parse().ok()?;
        (q != 0.0).then(|| p / q)
    } else {
        s.parse().ok().filter(|v: &f64| v.is_finite())
    }
}

/// Parses a real or complex literal: `2`, `-1/4`, `1.5e-3`, `3i`, `-i`, `1-2i`, `1/2+1/3i`.
pub fn parse_complex(s: &str) -> Result<ComplexFloat, IntegralError> {
    let bad = || IntegralError::BadValue(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(&t).map(|r| ComplexFloat::new(r, 0.0)).ok_or_else(bad);
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        other => parse_real(other),
    };
    match (parse_real(re), im) {
        (Some(r), Some(i)) => Ok(ComplexFloat::new(r, i)),
        _ => Err(bad()),
    }
}
