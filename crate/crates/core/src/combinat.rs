//! Exact factorials and binomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub fn factorial(n: u32) -> BigInt {
    (2..=n).map(BigInt::from).product::<BigInt>().max(BigInt::one())
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `num / den` as an exact rational.
pub fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `n!` as an `f64` (overflows to infinity past 170!).
pub fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
