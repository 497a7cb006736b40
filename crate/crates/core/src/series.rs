//! Truncated exponentials of polynomials, used to check generating functions
//! independently of the family constructors.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::combinat::factorial;
use crate::polycore::{GaussianRational, MultiPoly};

/// `exp(f)` truncated to total degree `order` in `series_vars`.
///
/// Every term of `f` must have positive degree in the series variables, so that
/// `fʲ` starts at degree `j` and the sum stops at `j = order`. Panics otherwise.
pub fn truncated_exp(f: &MultiPoly, series_vars: &[&str], order: u32) -> MultiPoly {
    let idx: Vec<usize> = series_vars.iter().filter_map(|v| f.var_index(v)).collect();
    assert!(
        f.terms().keys().all(|e| idx.iter().map(|&i| e[i]).sum::<u32>() > 0),
        "exponent has a term free of the series variables"
    );
    let mut sum = MultiPoly::one();
    let mut power = MultiPoly::one();
    for j in 1..=order {
        power = (&power * f).truncate_degree(series_vars, order);
        if power.is_zero() {
            break;
        }
        let inv = GaussianRational::from(BigRational::new(BigInt::from(1), factorial(j)));
        sum = &sum + &power.scale(&inv);
    }
    sum
}

/// Coefficient of `Π vᵏ` in `p` over the listed series variables.
pub fn series_coefficient(p: &MultiPoly, powers: &[(&str, u32)]) -> MultiPoly {
    powers.iter().fold(p.clone(), |acc, &(v, k)| acc.coefficient_of(v, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_t() {
        let t = MultiPoly::var("t");
        let e = truncated_exp(&t, &["t"], 5);
        for k in 0..=5u32 {
            let c = series_coefficient(&e, &[("t", k)]);
            assert_eq!(c, MultiPoly::constant(GaussianRational::from(BigRational::new(1.into(), factorial(k)))));
        }
        assert!(series_coefficient(&e, &[("t", 6)]).is_zero());
    }

    #[test]
    #[should_panic]
    fn rejects_constant_terms() {
        let f = &MultiPoly::var("t") + &MultiPoly::one();
        truncated_exp(&f, &["t"], 3);
    }
}
