//! Constructors for the Hermite families as exact polynomials.
//!
//! | family | variables | definition |
//! |---|---|---|
//! | `hkdf2(n, m)` | `x, y` | `n! Σ_r x^(n−mr) y^r / ((n−mr)! r!)` |
//! | `hkdf_multi(n, m)` | `x1..xm` | generating function `exp(Σ_s x_s t^s)` |
//! | `two_index(m, n)` | `x, y, z, w, tau` | `τ`-coupled product of two order-2 families |
//! | `incomplete(m, n)` | `x, z, tau` | `two_index` with `y = w = 0` |
//! | `composite(m, n, p, q, s)` | `x1..x4, tau` | order-`p` × order-`q` coupled at stride `s` |
//! | `classical(n, kind)` | `x` | `He_n(x) = H_n(x, −1/2)`, `H_n(x) = H_n(2x, −1)` |

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::combinat::{factorial, ratio};
use crate::polycore::{GaussianRational, MultiPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown family `{0}`")]
    UnknownKind(String),
    #[error("malformed family id `{0}`")]
    Malformed(String),
    #[error("family `{kind}` is missing parameter `{key}`")]
    MissingParam { kind: &'static str, key: &'static str },
    #[error("family `{kind}` does not take parameter `{key}`")]
    UnknownParam { kind: &'static str, key: String },
    #[error("parameter `{key}` = {value} is out of range ({reason})")]
    OutOfRange { key: &'static str, value: u32, reason: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalKind {
    /// Probabilists' `He_n`.
    He,
    /// Physicists' `H_n`.
    Phys,
}

/// A fully parameterized family member, addressable by a canonical string id
/// such as `hkdf2:n=5,m=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Hkdf2 { n: u32, m: u32 },
    HkdfMulti { n: u32, m: u32 },
    TwoIndex { m: u32, n: u32 },
    Incomplete { m: u32, n: u32 },
    Composite { m: u32, n: u32, p: u32, q: u32, s: u32 },
    Classical { n: u32, kind: ClassicalKind },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<(), FamilyError> {
        let check = |key, value, ok: bool, reason| {
            if ok {
                Ok(())
            } else {
                Err(FamilyError::OutOfRange { key, value, reason })
            }
        };
        match *self {
            FamilySpec::Hkdf2 { m, .. } => check("m", m, m >= 1, "order must be at least 1"),
            FamilySpec::HkdfMulti { m, .. } => check("m", m, m >= 2, "needs at least 2 variables"),
            FamilySpec::Composite { p, q, s, .. } => {
                check("p", p, p >= 1, "order must be at least 1")?;
                check("q", q, q >= 1, "order must be at least 1")?;
                check("s", s, s >= 1, "coupling stride must be at least 1")
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<MultiPoly, FamilyError> {
        self.validate()?;
        Ok(match *self {
            FamilySpec::Hkdf2 { n, m } => hkdf2(n, m),
            FamilySpec::HkdfMulti { n, m } => hkdf_multi(n, m),
            FamilySpec::TwoIndex { m, n } => two_index(m, n),
            FamilySpec::Incomplete { m, n } => incomplete(m, n),
            FamilySpec::Composite { m, n, p, q, s } => composite(m, n, p, q, s),
            FamilySpec::Classical { n, kind } => classical(n, kind),
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Hkdf2 { n, m } => write!(f, "hkdf2:n={n},m={m}"),
            FamilySpec::HkdfMulti { n, m } => write!(f, "hkdf_multi:n={n},m={m}"),
            FamilySpec::TwoIndex { m, n } => write!(f, "two_index:m={m},n={n}"),
            FamilySpec::Incomplete { m, n } => write!(f, "incomplete:m={m},n={n}"),
            FamilySpec::Composite { m, n, p, q, s } => {
                write!(f, "composite:m={m},n={n},p={p},q={q},s={s}")
            }
            FamilySpec::Classical { n, kind: ClassicalKind::He } => write!(f, "classical_he:n={n}"),
            FamilySpec::Classical { n, kind: ClassicalKind::Phys } => write!(f, "classical_h:n={n}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let malformed = || FamilyError::Malformed(s.to_string());
        let (kind, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut pairs: Vec<(String, u32)> = Vec::new();
        for item in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(malformed)?;
            let v: u32 = v.trim().parse().map_err(|_| malformed())?;
            let k = k.trim().to_string();
            if pairs.iter().any(|(p, _)| *p == k) {
                return Err(malformed());
            }
            pairs.push((k, v));
        }
        let (name, keys): (&'static str, &[&'static str]) = match kind {
            "hkdf2" => ("hkdf2", &["n", "m"]),
            "hkdf_multi" => ("hkdf_multi", &["n", "m"]),
            "two_index" => ("two_index", &["m", "n"]),
            "incomplete" => ("incomplete", &["m", "n"]),
            "composite" => ("composite", &["m", "n", "p", "q", "s"]),
            "classical_he" => ("classical_he", &["n"]),
            "classical_h" => ("classical_h", &["n"]),
            other => return Err(FamilyError::UnknownKind(other.to_string())),
        };
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
            return Err(FamilyError::UnknownParam { kind: name, key: k.clone() });
        }
        let get = |key: &'static str| {
            pairs
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .ok_or(FamilyError::MissingParam { kind: name, key })
        };
        let spec = match name {
            "hkdf2" => FamilySpec::Hkdf2 { n: get("n")?, m: get("m")? },
            "hkdf_multi" => FamilySpec::HkdfMulti { n: get("n")?, m: get("m")? },
            "two_index" => FamilySpec::TwoIndex { m: get("m")?, n: get("n")? },
            "incomplete" => FamilySpec::Incomplete { m: get("m")?, n: get("n")? },
            "composite" => FamilySpec::Composite {
                m: get("m")?,
                n: get("n")?,
                p: get("p")?,
                q: get("q")?,
                s: get("s")?,
            },
            "classical_he" => FamilySpec::Classical { n: get("n")?, kind: ClassicalKind::He },
            _ => FamilySpec::Classical { n: get("n")?, kind: ClassicalKind::Phys },
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `H_n^(m)` in the named variables. `m = 1` gives `(x + y)^n`.
pub fn hkdf2_in(n: u32, m: u32, x: &str, y: &str) -> MultiPoly {
    assert!(m >= 1, "order must be at least 1");
    let nf = factorial(n);
    let terms = (0..=n / m).map(|r| {
        let c = &nf / (factorial(n - m * r) * factorial(r));
        (vec![n - m * r, r], GaussianRational::from_bigint(c))
    });
    MultiPoly::from_terms(&[x, y], terms)
}

/// Order-`m` two-variable Hermite `H_n^(m)(x, y)`.
pub fn hkdf2(n: u32, m: u32) -> MultiPoly {
    hkdf2_in(n, m, "x", "y")
}

/// Names of the `m` variables of [`hkdf_multi`].
pub fn multi_vars(m: u32) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

/// Multivariable `H_n^(m)(x1, …, xm)` built level by level:
/// `H_n^(k) = n! Σ_r H_{n−kr}^(k−1) x_k^r / ((n−kr)! r!)`, starting from the
/// order-2 family in `(x1, x2)`.
pub fn hkdf_multi(n: u32, m: u32) -> MultiPoly {
    assert!(m >= 2, "needs at least 2 variables");
    let vars = multi_vars(m);
    // level[j] = H_j^(k) for j = 0..=n
    let mut level: Vec<MultiPoly> = (0..=n).map(|j| hkdf2_in(j, 2, "x1", "x2")).collect();
    for k in 3..=m {
        let xk = MultiPoly::var(&vars[k as usize - 1]);
        let mut xk_pows = vec![MultiPoly::one()];
        for r in 1..=(n / k) as usize {
            xk_pows.push(&xk_pows[r - 1] * &xk);
        }
        level = (0..=n)
            .map(|j| {
                let jf = factorial(j);
                let mut acc = MultiPoly::zero(&vars[..k as usize]);
                for r in 0..=j / k {
                    let c = GaussianRational::from_bigint(&jf / (factorial(j - k * r) * factorial(r)));
                    acc = &acc + &(&level[(j - k * r) as usize] * &xk_pows[r as usize]).scale(&c);
                }
                acc
            })
            .collect();
    }
    level.swap_remove(n as usize).aligned_to(&vars)
}

pub const TWO_INDEX_VARS: [&str; 5] = ["x", "y", "z", "w", "tau"];
pub const INCOMPLETE_VARS: [&str; 3] = ["x", "z", "tau"];
pub const COMPOSITE_VARS: [&str; 5] = ["x1", "x2", "x3", "x4", "tau"];

/// Shared shape of the two-index families:
/// `m! n! Σ_r τ^r A_{m−sr} B_{n−sr} / (r! (m−sr)! (n−sr)!)`.
fn coupled(
    m: u32,
    n: u32,
    stride: u32,
    left: impl Fn(u32) -> MultiPoly,
    right: impl Fn(u32) -> MultiPoly,
    tau: &str,
    vars: &[&str],
) -> MultiPoly {
    let mn = factorial(m) * factorial(n);
    let tau = MultiPoly::var(tau);
    let mut acc = MultiPoly::zero(vars);
    for r in 0..=(m / stride).min(n / stride) {
        let den: BigInt = factorial(r) * factorial(m - stride * r) * factorial(n - stride * r);
        let c = GaussianRational::from(ratio(mn.clone(), den));
        let t = &(&tau.pow(r) * &left(m - stride * r)) * &right(n - stride * r);
        acc = &acc + &t.scale(&c);
    }
    acc.aligned_to(vars)
}

/// Two-index Hermite `H_{m,n}(x, y; z, w | τ)`.
pub fn two_index(m: u32, n: u32) -> MultiPoly {
    coupled(m, n, 1, |k| hkdf2_in(k, 2, "x", "y"), |k| hkdf2_in(k, 2, "z", "w"), "tau", &TWO_INDEX_VARS)
}

/// Incomplete Hermite `h_{m,n}(x, z | τ)`.
pub fn incomplete(m: u32, n: u32) -> MultiPoly {
    let x = MultiPoly::var("x");
    let z = MultiPoly::var("z");
    coupled(m, n, 1, |k| x.pow(k), |k| z.pow(k), "tau", &INCOMPLETE_VARS)
}

/// `H^{(p,q,s)}_{m,n}(x1, x2; x3, x4 | τ)`: order-`p` and order-`q` factors
/// coupled through `τ` at stride `s`.
pub fn composite(m: u32, n: u32, p: u32, q: u32, s: u32) -> MultiPoly {
    assert!(p >= 1 && q >= 1 && s >= 1, "orders and stride must be at least 1");
    coupled(m, n, s, |k| hkdf2_in(k, p, "x1", "x2"), |k| hkdf2_in(k, q, "x3", "x4"), "tau", &COMPOSITE_VARS)
}

/// Classical Hermite polynomials in `x`, obtained by exact substitution into
/// the order-2 family.
pub fn classical(n: u32, kind: ClassicalKind) -> MultiPoly {
    let h = hkdf2(n, 2);
    match kind {
        ClassicalKind::He => h.substitute_const("y", GaussianRational::ratio(-1, 2)),
        ClassicalKind::Phys => h
            .substitute("x", &MultiPoly::monomial(&[("x", 1)], 2))
            .substitute_const("y", -1),
    }
}

/// Derivative operator `P̂ = ∂_x`.
pub fn ladder_lower(p: &MultiPoly) -> MultiPoly {
    p.diff("x", 1)
}

/// Multiplicative operator `M̂ = x + 2y∂_x`.
pub fn ladder_raise(p: &MultiPoly) -> MultiPoly {
    let x = MultiPoly::var("x");
    let two_y = MultiPoly::monomial(&[("y", 1)], 2);
    &(&x * p) + &(&two_y * &p.diff("x", 1))
}

/// Whether `P̂ p = n·H_{n−1}(x, y)`, i.e. `p` lowers like the degree-`n`
/// member of the order-2 family.
pub fn lowers_as_degree(p: &MultiPoly, n: u32) -> bool {
    let lowered = ladder_lower(p);
    if n == 0 {
        return lowered.is_zero();
    }
    lowered == hkdf2(n - 1, 2).scale_int(n)
}
