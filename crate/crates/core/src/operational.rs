//! Exponentials of derivative operators acting on polynomials, the Gaussian
//! reduction rule, and the umbral image of the order-`m` Hermite family.
//!
//! Every exponential is materialized as a finite sum: on a polynomial of degree
//! `d` the series `Σ_j Dʲ p / j!` stops once `Dʲ p` vanishes, which happens
//! after at most `d` steps when `D` lowers degree and its coefficients do not
//! depend on the differentiated variables.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::combinat::{binomial, factorial};
use crate::polycore::{GaussianRational, MultiPoly};
use crate::polycore::ComplexFloat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("operator coefficient depends on differentiated variable `{0}`")]
    CoefficientNotConstant(String),
    #[error("operator has a term of derivative order zero; its exponential does not terminate")]
    ZeroOrderTerm,
    #[error("Gaussian weight must be positive, got {0}")]
    NonPositiveWeight(String),
    #[error("derivative order must be at least 1")]
    ZeroOrder,
}

/// Ordered product `Π ∂_v^k` with every `k > 0`.
pub type DerivativeMonomial = Vec<(String, u32)>;

/// Finite sum `Σ c · Π ∂_{v}^{k}`. Coefficients are polynomials (constants or
/// symbolic parameters) and are applied after differentiating.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffOperator {
    terms: BTreeMap<DerivativeMonomial, MultiPoly>,
}

fn normalize(derivs: &[(&str, u32)]) -> DerivativeMonomial {
    let mut acc: BTreeMap<String, u32> = BTreeMap::new();
    for &(v, k) in derivs {
        *acc.entry(v.to_string()).or_default() += k;
    }
    acc.into_iter().filter(|(_, k)| *k > 0).collect()
}

impl DiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(MultiPoly::one(), &[])
    }

    /// `∂_v^k`.
    pub fn derivative(var: &str, k: u32) -> Self {
        Self::term(MultiPoly::one(), &[(var, k)])
    }

    /// `c · Π ∂_v^k`.
    pub fn term(c: MultiPoly, derivs: &[(&str, u32)]) -> Self {
        let mut op = Self::zero();
        op.add_term(normalize(derivs), c);
        op
    }

    fn add_term(&mut self, key: DerivativeMonomial, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<DerivativeMonomial, MultiPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn differentiated_vars(&self) -> BTreeSet<&str> {
        self.terms.keys().flat_map(|k| k.iter().map(|(v, _)| v.as_str())).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        let mut out = Self::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    /// Coefficients must not involve any variable either operand differentiates.
    fn check_constant_coefficients(&self, vars: &BTreeSet<&str>) -> Result<(), OperatorError> {
        for c in self.terms.values() {
            if let Some(v) = c.used_vars().into_iter().find(|v| vars.contains(v)) {
                return Err(OperatorError::CoefficientNotConstant(v.to_string()));
            }
        }
        Ok(())
    }

    /// Operator product `self ∘ other`; valid when every coefficient commutes
    /// with every derivative involved.
    pub fn compose(&self, other: &Self) -> Result<Self, OperatorError> {
        let mut vars = self.differentiated_vars();
        vars.extend(other.differentiated_vars());
        self.check_constant_coefficients(&vars)?;
        other.check_constant_coefficients(&vars)?;
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let merged: Vec<(&str, u32)> =
                    ka.iter().chain(kb).map(|(v, k)| (v.as_str(), *k)).collect();
                out.add_term(normalize(&merged), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, OperatorError> {
        let mut acc = Self::identity();
        for _ in 0..e {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(p.vars());
        for (k, c) in &self.terms {
            let mut d = p.clone();
            for (v, order) in k {
                d = d.diff(v, *order);
            }
            out = &out + &(c * &d);
        }
        out
    }

    /// `exp(self) p = Σ_j selfʲ p / j!`, summed until the terms vanish.
    pub fn exp_apply(&self, p: &MultiPoly) -> Result<MultiPoly, OperatorError> {
        let vars = self.differentiated_vars();
        self.check_constant_coefficients(&vars)?;
        if self.terms.keys().any(|k| k.is_empty()) {
            return Err(OperatorError::ZeroOrderTerm);
        }
        let mut sum = p.clone();
        let mut term = p.clone();
        let mut j: i64 = 1;
        loop {
            term = self.apply(&term).scale(&GaussianRational::ratio(1, j));
            if term.is_zero() {
                return Ok(sum);
            }
            sum = &sum + &term;
            j += 1;
        }
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let d: Vec<String> = k
                    .iter()
                    .map(|(v, o)| if *o == 1 { format!("d_{v}") } else { format!("d_{v}^{o}") })
                    .collect();
                if d.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", d.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `exp(c ∂_v^k) p = Σ_j cʲ ∂_v^{kj} p / j!` for `k ≥ 1`. The coefficient may be
/// a constant or a polynomial in other variables, which then appear in the result.
pub fn exp_diff(p: &MultiPoly, var: &str, k: u32, c: &MultiPoly) -> MultiPoly {
    assert!(k >= 1, "derivative order must be at least 1");
    let mut sum = p.clone();
    if c.is_zero() {
        return sum;
    }
    let mut c_pow = MultiPoly::one();
    let mut d = p.clone();
    let mut j: u32 = 1;
    loop {
        d = d.diff(var, k);
        if d.is_zero() {
            return sum;
        }
        c_pow = &c_pow * c;
        let t = (&c_pow * &d).scale(&GaussianRational::from(BigRational::new(1.into(), factorial(j))));
        sum = &sum + &t;
        j += 1;
    }
}

/// Taylor shift `exp(a ∂_v) p = p(v + a)`.
pub fn exp_shift(p: &MultiPoly, var: &str, a: &MultiPoly) -> MultiPoly {
    exp_diff(p, var, 1, a)
}

/// `√(π/b)` kept symbolic until a float is needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtPiOver {
    pub b: BigRational,
}

impl SqrtPiOver {
    pub fn value(&self) -> f64 {
        let b = crate::polycore::GaussianRational::real(self.b.clone()).to_complex().re;
        (PI / b).sqrt()
    }
}

/// Polynomial part and scalar prefactor of a reduced Gaussian integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPoly {
    pub scale: SqrtPiOver,
    pub poly: MultiPoly,
}

impl ScaledPoly {
    pub fn eval(&self, assignment: &[(&str, ComplexFloat)]) -> Result<ComplexFloat, crate::polycore::PolyError> {
        Ok(self.poly.eval(assignment)? * self.scale.value())
    }
}

/// The rule `∫ exp(y D) exp(−b y²) dy = √(π/b) · exp(D² / (4b))` for
/// `D = ∂^k`, giving a derivative exponential of order `2k` with coefficient
/// `1/(4b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussReduction {
    pub b: BigRational,
    pub order: u32,
}

impl GaussReduction {
    pub fn scale(&self) -> SqrtPiOver {
        SqrtPiOver { b: self.b.clone() }
    }

    /// `1/(4b)`.
    pub fn coefficient(&self) -> GaussianRational {
        GaussianRational::real(BigRational::new(1.into(), 4.into()) / &self.b)
    }

    /// `(1/(4b)) ∂_var^{2k}` as an operator.
    pub fn operator(&self, var: &str) -> DiffOperator {
        DiffOperator::term(MultiPoly::constant(self.coefficient()), &[(var, self.order)])
    }

    /// Applies the reduced integral to `p`, differentiating in `var`.
    pub fn apply(&self, p: &MultiPoly, var: &str) -> ScaledPoly {
        ScaledPoly {
            scale: self.scale(),
            poly: exp_diff(p, var, self.order, &MultiPoly::constant(self.coefficient())),
        }
    }
}

/// Reduction for `D = ∂^k` against the weight `exp(−b y²)`, `b > 0`.
pub fn gauss_operator_reduce(k: u32, b: &BigRational) -> Result<GaussReduction, OperatorError> {
    if k == 0 {
        return Err(OperatorError::ZeroOrder);
    }
    if !b.is_positive() {
        return Err(OperatorError::NonPositiveWeight(b.to_string()));
    }
    Ok(GaussReduction { b: b.clone(), order: 2 * k })
}

/// Same rule for an arbitrary operator `D`: returns `√(π/b)` and `D²/(4b)`.
pub fn gauss_reduce_operator(
    d: &DiffOperator,
    b: &BigRational,
) -> Result<(SqrtPiOver, DiffOperator), OperatorError> {
    if !b.is_positive() {
        return Err(OperatorError::NonPositiveWeight(b.to_string()));
    }
    let c = GaussianRational::real(BigRational::new(1.into(), 4.into()) / b);
    let sq = d.compose(d)?.scale(&MultiPoly::constant(c));
    Ok((SqrtPiOver { b: b.clone() }, sq))
}

/// The umbral image `ĥ_m^r φ₀` of the vacuum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UmbralSymbol {
    pub order: u32,
    pub power: u32,
}

impl UmbralSymbol {
    pub fn new(order: u32, power: u32) -> Self {
        assert!(order >= 2, "umbral order must be at least 2");
        Self { order, power }
    }

    pub fn value(&self) -> BigInt {
        umbral_number(self.order, self.power)
    }
}

/// `r! / (r/m)!` when `m | r`, else 0.
pub fn umbral_number(m: u32, r: u32) -> BigInt {
    assert!(m >= 2, "umbral order must be at least 2");
    if r % m != 0 {
        return BigInt::zero();
    }
    factorial(r) / factorial(r / m)
}

/// [`umbral_number`] with the sign `(−1)^{r/m}`; for `m = 2` these are the
/// values `H_r(0)` of the physicists' Hermite polynomials.
pub fn signed_umbral_number(m: u32, r: u32) -> BigInt {
    let v = umbral_number(m, r);
    if (r / m) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `(x + ĥ_m y^{1/m})ⁿ φ₀` expanded as a Newton binomial. Only `m | r` terms
/// survive, so `y` carries integer exponents `r/m`.
pub fn umbral_hermite(n: u32, m: u32) -> MultiPoly {
    let terms = (0..=n).step_by(m as usize).map(|r| {
        let c = binomial(n, r) * umbral_number(m, r);
        (vec![n - r, r / m], GaussianRational::from_bigint(c))
    });
    MultiPoly::from_terms(&["x", "y"], terms)
}

/// Umbral shift `exp(y^{1/m} ĥ_m ∂_x) p φ₀ = Σ_{m|r} (ĥ_m^r φ₀ / r!) y^{r/m} ∂_xʳ p`
/// acting on an arbitrary polynomial.
pub fn umbral_shift(p: &MultiPoly, x: &str, y: &str, m: u32) -> MultiPoly {
    let mut out = p.clone();
    let yv = MultiPoly::var(y);
    let mut r = m;
    loop {
        let d = p.diff(x, r);
        if d.is_zero() {
            return out;
        }
        let c = GaussianRational::from(BigRational::new(umbral_number(m, r), factorial(r)));
        out = &out + &(&yv.pow(r / m) * &d).scale(&c);
        r += m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{hkdf2, hkdf2_in, hkdf_multi, multi_vars};

    fn x() -> MultiPoly {
        MultiPoly::var("x")
    }

    #[test]
    fn exp_diff_builds_hkdf() {
        for n in 0..8 {
            for m in 1..5 {
                assert_eq!(exp_diff(&x().pow(n), "x", m, &MultiPoly::var("y")), hkdf2(n, m));
            }
        }
        let p = &x().pow(3) + &MultiPoly::var("q");
        assert_eq!(exp_diff(&p, "x", 2, &MultiPoly::zero::<&str>(&[])), p);
    }

    #[test]
    fn exp_shift_is_taylor_shift() {
        let ix2 = MultiPoly::monomial(&[("x2", 1)], GaussianRational::i());
        let shifted = exp_shift(&x().pow(2), "x", &ix2);
        assert_eq!(shifted, (&x() + &ix2).pow(2));
        let p = hkdf2(5, 2);
        assert_eq!(exp_shift(&p, "x", &MultiPoly::zero::<&str>(&[])), p);
        assert_eq!(exp_shift(&p, "x", &ix2), p.substitute("x", &(&x() + &ix2)));
    }

    #[test]
    fn multi_term_exponential_builds_multivariable_family() {
        for m in 3..=4u32 {
            let vars = multi_vars(m);
            let mut op = DiffOperator::zero();
            for s in 2..=m {
                op = op.add(&DiffOperator::term(MultiPoly::var(&vars[s as usize - 1]), &[("x1", s)]));
            }
            for n in 0..8 {
                let got = op.exp_apply(&MultiPoly::var("x1").pow(n)).unwrap();
                assert_eq!(got, hkdf_multi(n, m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn exp_apply_rejects_non_terminating_operators() {
        let bad = DiffOperator::term(MultiPoly::var("x"), &[("x", 1)]);
        assert_eq!(bad.exp_apply(&x()), Err(OperatorError::CoefficientNotConstant("x".into())));
        assert_eq!(DiffOperator::identity().exp_apply(&x()), Err(OperatorError::ZeroOrderTerm));
    }

    #[test]
    fn gauss_reduction_gives_order_four_family() {
        let b = BigRational::new(3.into(), 2.into());
        let red = gauss_operator_reduce(2, &b).unwrap();
        assert_eq!(red.order, 4);
        for n in 0..10 {
            let got = red.apply(&x().pow(n), "x");
            let expect = hkdf2(n, 4).substitute_const("y", red.coefficient());
            assert_eq!(got.poly, expect);
        }
        let red1 = gauss_operator_reduce(1, &b).unwrap();
        assert_eq!(red1.apply(&x().pow(6), "x").poly, hkdf2(6, 2).substitute_const("y", red1.coefficient()));
        let one = red.apply(&MultiPoly::one(), "x");
        assert_eq!(one.poly, MultiPoly::one());
        assert!((one.scale.value() - (PI / 1.5).sqrt()).abs() < 1e-15);
        assert!(gauss_operator_reduce(2, &BigRational::zero()).is_err());
        assert!(gauss_operator_reduce(2, &BigRational::new((-1).into(), 1.into())).is_err());
    }

    #[test]
    fn umbral_numbers() {
        assert_eq!(umbral_number(2, 4), BigInt::from(12));
        assert_eq!(umbral_number(3, 3), BigInt::from(6));
        assert_eq!(umbral_number(3, 4), BigInt::from(0));
        assert_eq!(signed_umbral_number(2, 2), BigInt::from(-2));
        assert_eq!(UmbralSymbol::new(2, 6).value(), BigInt::from(120));
    }

    #[test]
    fn umbral_hermite_matches_family() {
        assert_eq!(umbral_hermite(2, 2), hkdf2(2, 2));
        assert_eq!(umbral_hermite(3, 4), x().pow(3));
        assert_eq!(umbral_hermite(4, 4), hkdf2(4, 4));
        assert_eq!(umbral_shift(&x().pow(7), "x", "y", 3), hkdf2(7, 3));
        assert_eq!(umbral_shift(&hkdf2_in(3, 2, "x", "q"), "x", "y", 2), exp_diff(&hkdf2_in(3, 2, "x", "q"), "x", 2, &MultiPoly::var("y")));
    }

    #[test]
    fn squared_operator_reduction() {
        // (∂x² + ∂z²)² / (4a) at a = 1
        let d = DiffOperator::derivative("x", 2).add(&DiffOperator::derivative("z", 2));
        let (scale, sq) = gauss_reduce_operator(&d, &BigRational::from_integer(1.into())).unwrap();
        assert!((scale.value() - PI.sqrt()).abs() < 1e-15);
        assert_eq!(sq.terms().len(), 3);
        assert_eq!(
            sq.terms().get(&vec![("x".to_string(), 2), ("z".to_string(), 2)]).unwrap(),
            &MultiPoly::constant(GaussianRational::ratio(1, 2))
        );
    }
}
