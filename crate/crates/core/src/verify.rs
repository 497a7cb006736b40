//! Identity suites shared by the `verify` command and the test-suite. Each
//! suite returns one outcome per check, in a fixed order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::bessel::{
    bessel_2var, bessel_2var_fourier, bessel_gauss_integral, bessel_j, hermite_bessel, ji4, ji4_fourier,
    jgh_integral, HermiteBesselSeries, SeriesTruncation, FOURIER_NODES,
};
use crate::combinat::{binomial, factorial, ratio};
use crate::families::{
    composite, hkdf2, hkdf2_in, hkdf_multi, incomplete, ladder_lower, ladder_raise, lowers_as_degree, multi_vars,
    two_index,
};
use crate::gauss::{
    closed_form, orthogonality_readings, quadrature, sweep, IntegralId, OrthogonalityReading, ParamSet,
    QuadratureConfig,
};
use crate::operational::{
    exp_diff, exp_shift, gauss_operator_reduce, signed_umbral_number, umbral_hermite, umbral_number, umbral_shift,
    DiffOperator,
};
use crate::polycore::{GaussianRational, MultiPoly};
use crate::series::{series_coefficient, truncated_exp};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 7;

/// Parameter draws per integral id in the randomized sweep.
pub const SWEEP_DRAWS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Heat,
    Ladder,
    Genfunc,
    Umbral,
    Reductions,
    Integrals,
    Bessel,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Heat, Suite::Ladder, Suite::Genfunc, Suite::Umbral, Suite::Reductions, Suite::Integrals, Suite::Bessel];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Heat => "heat",
            Suite::Ladder => "ladder",
            Suite::Genfunc => "genfunc",
            Suite::Umbral => "umbral",
            Suite::Reductions => "reductions",
            Suite::Integrals => "integrals",
            Suite::Bessel => "bessel",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}/{}: {}", self.suite, self.name, self.detail)
    }
}

struct Recorder {
    suite: Suite,
    out: Vec<CheckOutcome>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Recorder { suite, out: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.out.push(CheckOutcome {
            suite: self.suite.name().to_string(),
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Records an exact check over many cases, naming the first failing case.
    fn exact<I: fmt::Display>(&mut self, name: &str, cases: impl IntoIterator<Item = I>, ok: impl Fn(&I) -> bool) {
        let mut count = 0;
        for c in cases {
            count += 1;
            if !ok(&c) {
                self.check(name, false, format!("mismatch at {c}"));
                return;
            }
        }
        self.check(name, true, format!("exact over {count} cases"));
    }
}

/// Runs `suite` (every suite for [`Suite::All`]) with the given sweep seed.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckOutcome> {
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, seed)).collect(),
        Suite::Heat => heat(),
        Suite::Ladder => ladder(),
        Suite::Genfunc => genfunc(),
        Suite::Umbral => umbral(),
        Suite::Reductions => reductions(),
        Suite::Integrals => integrals(seed),
        Suite::Bessel => bessel(),
    }
}

fn gr(num: i64, den: i64) -> GaussianRational {
    GaussianRational::ratio(num, den)
}

fn x_pow(var: &str, n: u32) -> MultiPoly {
    MultiPoly::var(var).pow(n)
}

struct Pair(u32, u32);

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, m={})", self.0, self.1)
    }
}

fn grid(ns: std::ops::RangeInclusive<u32>, ms: &[u32]) -> Vec<Pair> {
    ms.iter().flat_map(|&m| ns.clone().map(move |n| Pair(n, m))).collect()
}

fn heat() -> Vec<CheckOutcome> {
    let mut r = Recorder::new(Suite::Heat);
    r.exact("heat_equation", grid(0..=15, &[2, 3, 4, 5]), |Pair(n, m)| {
        let h = hkdf2(*n, *m);
        h.diff("y", 1) == h.diff("x", *m)
    });
    // H^(m)_n(x1..xm) = exp(Σ_s x_s ∂^s) x1^n, built from a generic operator.
    r.exact("multi_variable_flow", grid(0..=10, &[3, 4]), |Pair(n, m)| {
        let vars = multi_vars(*m);
        let mut d = DiffOperator::zero();
        for s in 2..=*m {
            d = d.add(&DiffOperator::term(MultiPoly::var(&vars[s as usize - 1]), &[("x1", s)]));
        }
        d.exp_apply(&x_pow("x1", *n)).map(|p| p == hkdf_multi(*n, *m)).unwrap_or(false)
    });
    r.out
}

fn ladder() -> Vec<CheckOutcome> {
    let mut r = Recorder::new(Suite::Ladder);
    let ns = || (0..=15u32).map(|n| Pair(n, 2));
    r.exact("lowering", ns(), |Pair(n, _)| {
        let h = hkdf2(*n, 2);
        lowers_as_degree(&h, *n)
            && (*n == 0 || ladder_lower(&h) == hkdf2(n - 1, 2).scale_int(*n))
    });
    r.exact("raising", ns(), |Pair(n, _)| ladder_raise(&hkdf2(*n, 2)) == hkdf2(n + 1, 2));
    r.exact("differential_equation", ns(), |Pair(n, _)| {
        let h = hkdf2(*n, 2);
        let x = MultiPoly::var("x");
        let y2 = MultiPoly::var("y").scale_int(2);
        let lhs = &(&x * &h.diff("x", 1)) + &(&y2 * &h.diff("x", 2));
        lhs == h.scale_int(*n)
    });
    r.exact("raise_after_lower", ns(), |Pair(n, _)| {
        let h = hkdf2(*n, 2);
        ladder_raise(&ladder_lower(&h)) == h.scale_int(*n)
    });
    r.out
}

fn genfunc() -> Vec<CheckOutcome> {
    let mut r = Recorder::new(Suite::Genfunc);
    const N: u32 = 12;
    for m in 1..=5u32 {
        let f = &(&MultiPoly::var("x") * &MultiPoly::var("t")) + &(&MultiPoly::var("y") * &x_pow("t", m));
        let e = truncated_exp(&f, &["t"], N);
        let name = format!("single_index_m{m}");
        r.exact(&name, (0..=N).map(|n| Pair(n, m)), |Pair(n, m)| {
            let c = series_coefficient(&e, &[("t", *n)]);
            c == hkdf2(*n, *m).scale(&GaussianRational::from(ratio(1.into(), factorial(*n))))
        });
    }
    const ORDER: u32 = 8;
    let v = MultiPoly::var;
    let f = [
        &v("x") * &v("u"),
        &v("y") * &x_pow("u", 2),
        &v("z") * &v("v"),
        &v("w") * &x_pow("v", 2),
        &(&v("tau") * &v("u")) * &v("v"),
    ]
    .iter()
    .fold(MultiPoly::zero(&["x"]), |a, b| &a + b);
    let e = truncated_exp(&f, &["u", "v"], ORDER);
    let cases: Vec<Pair> = (0..=ORDER).flat_map(|m| (0..=ORDER - m).map(move |n| Pair(n, m))).collect();
    r.exact("two_index", cases, |Pair(n, m)| {
        let c = series_coefficient(&e, &[("u", *m), ("v", *n)]);
        let den = factorial(*m) * factorial(*n);
        c == two_index(*m, *n).scale(&GaussianRational::from(ratio(1.into(), den)))
    });
    r.out
}

fn umbral() -> Vec<CheckOutcome> {
    let mut r = Recorder::new(Suite::Umbral);
    let y = MultiPoly::var("y");
    r.exact("operational_equals_umbral", grid(0..=12, &[2, 3, 4, 5]), |Pair(n, m)| {
        let h = hkdf2(*n, *m);
        exp_diff(&x_pow("x", *n), "x", *m, &y) == h && umbral_hermite(*n, *m) == h
    });
    r.exact("umbral_shift_matches_operator", grid(0..=12, &[2, 3, 4, 5]), |Pair(n, m)| {
        let p = &x_pow("x", *n) + &MultiPoly::var("x").scale_int(3);
        umbral_shift(&p, "x", "y", *m) == exp_diff(&p, "x", *m, &y)
    });
    r.exact("y_derivative", grid(0..=12, &[2, 3, 4, 5]), |Pair(n, m)| {
        let h = umbral_hermite(*n, *m);
        h.diff("y", 1) == h.diff("x", *m)
    });
    // Shift then heat flow gives H_n(x1 + i x2, y), and expands as
    // n! Σ_r H_r(i x2, y) x1^{n−r} / (r!(n−r)!).
    let ix2 = MultiPoly::monomial(&[("x2", 1)], GaussianRational::i());
    r.exact("complex_shift_series", (0..=10u32).map(|n| Pair(n, 2)), |Pair(n, _)| {
        let lhs = exp_shift(&exp_diff(&x_pow("x1", *n), "x1", 2, &y), "x1", &ix2);
        let shifted = hkdf2_in(*n, 2, "u", "y").substitute("u", &(&MultiPoly::var("x1") + &ix2));
        let series = (0..=*n).fold(MultiPoly::zero(&["x1"]), |acc, k| {
            let hr = hkdf2_in(k, 2, "u", "y").substitute("u", &ix2);
            let t = (&hr * &x_pow("x1", n - k)).scale(&GaussianRational::from_bigint(binomial(*n, k)));
            &acc + &t
        });
        lhs == shifted && lhs == series
    });
    let seq = |m: u32, rs: &[u32]| rs.iter().map(|&r| umbral_number(m, r)).collect::<Vec<BigInt>>();
    let expect2: Vec<BigInt> = [1, 2, 12, 120, 1680, 30240, 665280].map(BigInt::from).to_vec();
    let got2 = seq(2, &[0, 2, 4, 6, 8, 10, 12]);
    let odd_zero = (1..=11).step_by(2).all(|r| umbral_number(2, r) == BigInt::from(0));
    r.check("hermite_numbers_m2", got2 == expect2 && odd_zero, format!("{got2:?}"));
    let expect3: Vec<BigInt> = [1, 6, 360, 60480].map(BigInt::from).to_vec();
    let got3 = seq(3, &[0, 3, 6, 9]);
    r.check("hermite_numbers_m3", got3 == expect3, format!("{got3:?}"));
    let signed: Vec<BigInt> = (0..5).map(|r| signed_umbral_number(2, r)).collect();
    let expect_signed: Vec<BigInt> = [1, 0, -2, 0, 12].map(BigInt::from).to_vec();
    r.check("signed_hermite_numbers", signed == expect_signed, format!("{signed:?}"));
    r.out
}

fn reductions() -> Vec<CheckOutcome> {
    let mut r = Recorder::new(Suite::Reductions);
    let zero = MultiPoly::zero(&["x"]);
    let ns = || (0..=8u32).map(|n| Pair(n, 0));
    r.exact("order4_to_order2_slice", ns(), |Pair(n, _)| {
        let h = hkdf_multi(*n, 4).substitute("x3", &zero).substitute("x4", &zero);
        h == hkdf2_in(*n, 2, "x1", "x2")
    });
    r.exact("order4_to_order3_slice", ns(), |Pair(n, _)| {
        hkdf_multi(*n, 4).substitute("x4", &zero) == hkdf_multi(*n, 3)
    });
    r.exact("order2_multi_is_hkdf", ns(), |Pair(n, _)| {
        hkdf_multi(*n, 2) == hkdf2_in(*n, 2, "x1", "x2")
    });
    let mn = || (0..=8u32).flat_map(|m| (0..=8u32).map(move |n| Pair(n, m)));
    r.exact("two_index_to_incomplete", mn(), |Pair(n, m)| {
        two_index(*m, *n).substitute("y", &zero).substitute("w", &zero) == incomplete(*m, *n)
    });
    r.exact("two_index_symmetry", mn(), |Pair(n, m)| {
        let swapped = two_index(*n, *m).rename(&[("x", "z0"), ("y", "w0"), ("z", "x"), ("w", "y")]);
        let swapped = swapped.rename(&[("z0", "z"), ("w0", "w")]);
        two_index(*m, *n) == swapped
    });
    r.exact("composite_stride1_to_incomplete", mn(), |Pair(n, m)| {
        [1u32, 2, 3, 4].iter().all(|&p| {
            let c = composite(*m, *n, p, p, 1).substitute("x2", &zero).substitute("x4", &zero);
            c == incomplete(*m, *n).rename(&[("x", "x1"), ("z", "x3")])
        })
    });
    r.exact("composite_uncoupled_slice", mn(), |Pair(n, m)| {
        [1u32, 2].iter().all(|&s| {
            let c = composite(*m, *n, 4, 4, s).substitute("tau", &zero);
            c == &hkdf2_in(*m, 4, "x1", "x2") * &hkdf2_in(*n, 4, "x3", "x4")
        })
    });
    r.exact("composite_stride2_operator_slice", mn(), |Pair(n, m)| {
        let c = composite(*m, *n, 4, 4, 2).substitute("x2", &zero).substitute("x4", &zero);
        let d = DiffOperator::term(MultiPoly::var("tau"), &[("x1", 2), ("x3", 2)]);
        let mono = &x_pow("x1", *m) * &x_pow("x3", *n);
        d.exp_apply(&mono).map(|e| e == c).unwrap_or(false)
    });
    let half = MultiPoly::constant(gr(-1, 4));
    r.exact("classical_scaling", ns(), |Pair(n, _)| {
        let h = hkdf2(*n, 2);
        let lhs = h.substitute("x", &MultiPoly::var("x").scale_int(2)).substitute_const("y", gr(-1, 1));
        let rhs = h.substitute("y", &half).scale(&GaussianRational::from_bigint(BigInt::from(2).pow(*n)));
        lhs == rhs
    });
    // The Gaussian rule applied to xⁿ gives √(π/b) H^(4)_n(x, 1/(4b)) exactly.
    let b = BigRational::new(3.into(), 2.into());
    r.exact("gauss_rule_exact", ns(), |Pair(n, _)| {
        let red = gauss_operator_reduce(2, &b).expect("positive weight");
        let out = red.apply(&x_pow("x", *n), "x");
        let expect = hkdf2(*n, 4).substitute_const("y", GaussianRational::from(ratio(1.into(), 6.into())));
        out.poly == expect && out.scale.b == b
    });
    r.out
}

/// Largest relative discrepancy, plus the number of cases whose closed form is
/// exactly zero (those are judged by the absolute rounding floor instead).
fn summarize(results: &[crate::gauss::IntegralResult]) -> String {
    let zeros = results.iter().filter(|x| x.closed_form_value.norm() == 0.0).count();
    let worst = results
        .iter()
        .filter(|x| x.closed_form_value.norm() != 0.0)
        .map(|x| x.relative_discrepancy)
        .fold(0.0, f64::max);
    let mut s = format!("max relative discrepancy {worst:.2e}");
    if zeros > 0 {
        s += &format!(", {zeros} exact-zero cases within the rounding floor");
    }
    s
}

fn integrals(seed: u64) -> Vec<CheckOutcome> {
    let mut r = Recorder::new(Suite::Integrals);
    for id in IntegralId::ALL {
        match sweep(id, SWEEP_DRAWS, seed) {
            Ok(res) => {
                let failed: Vec<&str> = res.iter().filter(|x| !x.pass).map(|x| x.params.as_str()).collect();
                let detail = if failed.is_empty() {
                    format!("{} draws, {} (tol {:.0e})", res.len(), summarize(&res), id.default_rel_tol())
                } else {
                    format!("{} of {} draws failed, first at {}", failed.len(), res.len(), failed[0])
                };
                r.check(format!("sweep_{id}"), failed.is_empty(), detail);
            }
            Err(e) => r.check(format!("sweep_{id}"), false, e.to_string()),
        }
    }
    orthogonality(&mut r);
    let cfg = QuadratureConfig::default();
    let g = |s: &str| ParamSet::parse(s).expect("literal params");
    // Integrand symmetry of the one-dimensional product integral.
    let a = g("m=4,n=2,delta=1/2+i,eta=-1,y=1/3,w=-1/2,a=3/4");
    let b = g("m=2,n=4,delta=-1,eta=1/2+i,y=-1/2,w=1/3,a=3/4");
    let sym = closed_form(IntegralId::PRODUCT_1D, &a)
        .and_then(|ca| Ok((ca, closed_form(IntegralId::PRODUCT_1D, &b)?)))
        .and_then(|(ca, cb)| {
            let qa = quadrature(IntegralId::PRODUCT_1D, &a, &cfg)?.value;
            let qb = quadrature(IntegralId::PRODUCT_1D, &b, &cfg)?.value;
            Ok(((ca - cb).norm() / ca.norm(), (qa - qb).norm() / qa.norm()))
        });
    match sym {
        Ok((dc, dq)) => r.check(
            "product_symmetry",
            dc <= 1e-13 && dq <= 1e-13,
            format!("closed {dc:.1e}, oracle {dq:.1e}"),
        ),
        Err(e) => r.check("product_symmetry", false, e.to_string()),
    }
    // n = 0 quadrature scales as b^{−1/2}.
    let scaled: Result<Vec<f64>, _> = ["1/4", "1", "4"]
        .iter()
        .map(|b| {
            let p = g(&format!("n=0,x=1,b={b}"));
            quadrature(IntegralId::GAUSS_1D_Y, &p, &cfg).map(|q| q.value.re)
        })
        .collect();
    match scaled {
        Ok(v) => {
            let ok = ((v[0] / v[1]) - 2.0).abs() < 1e-12 && ((v[1] / v[2]) - 2.0).abs() < 1e-12;
            r.check("scale_covariance", ok, format!("ratios {:.15}, {:.15}", v[0] / v[1], v[1] / v[2]));
        }
        Err(e) => r.check("scale_covariance", false, e.to_string()),
    }
    r.out
}

fn orthogonality(r: &mut Recorder) {
    const A: f64 = 0.5;
    let cfg = QuadratureConfig::default();
    let mut reports = Vec::new();
    for m in 0..=6u32 {
        for n in 0..=6u32 {
            match orthogonality_readings(m, n, A, &cfg) {
                Ok(rep) => reports.push(rep),
                Err(e) => {
                    r.check("orthogonality", false, e.to_string());
                    return;
                }
            }
        }
    }
    let at = |m: u32, n: u32| &reports[(m * 7 + n) as usize];
    let mut off_worst = 0.0f64;
    let mut diag_worst = 0.0f64;
    for m in 0..=6u32 {
        for n in 0..=6u32 {
            let rep = at(m, n);
            if m == n {
                let rel = (rep.paired_weights - rep.stated_value).norm() / rep.stated_value.norm();
                diag_worst = diag_worst.max(rel);
            } else {
                off_worst = off_worst.max(rep.paired_weights.norm() / at(n, n).paired_weights.norm());
            }
        }
    }
    let readings: Vec<OrthogonalityReading> = (0..=6).map(|n| at(n, n).matches).collect();
    let paired = readings.iter().all(|&x| x == OrthogonalityReading::PairedWeights);
    let equal_off = (0..=6u32)
        .flat_map(|m| (0..=6u32).map(move |n| (m, n)))
        .filter(|(m, n)| m != n)
        .map(|(m, n)| at(m, n).equal_weights.norm())
        .fold(0.0, f64::max);
    r.check(
        "orthogonality_off_diagonal",
        off_worst <= 1e-8,
        format!("a=1/2, b=1: max |I_mn|/|I_nn| = {off_worst:.1e} over m≠n ≤ 6"),
    );
    r.check(
        "orthogonality_diagonal",
        diag_worst <= 1e-6 && paired,
        format!(
            "max relative error {diag_worst:.1e}; confirmed reading: weights (a, a/(1−a)) = (1/2, 1); \
             the equal-weight reading (a, a) gives I_00 = {:.6} vs stated {:.6} and off-diagonal values up to {equal_off:.3}",
            at(0, 0).equal_weights.re,
            at(0, 0).stated_value.re
        ),
    );
}

fn bessel() -> Vec<CheckOutcome> {
    let mut r = Recorder::new(Suite::Bessel);
    let t = SeriesTruncation::l_sums();
    let xs = [0.0, 0.5, 1.0, 2.0];
    let mut worst_red = 0.0f64;
    let mut red_err = None;
    for n in -5i64..=5 {
        for &x in &xs {
            let res = (|| {
                let j = bessel_j(n, x, t)?.value;
                let a = (bessel_2var(n, x, 0.0, t)?.value - j).abs();
                let b = (ji4(n, x, 0.0, t)?.value - j).abs();
                let c = if n >= 0 {
                    (hermite_bessel(n as u32, x, 0.0, SeriesTruncation::s_sums())?.value - j).abs()
                } else {
                    0.0
                };
                Ok::<f64, crate::bessel::BesselError>(a.max(b).max(c))
            })();
            match res {
                Ok(d) => worst_red = worst_red.max(d),
                Err(e) => red_err = Some(e.to_string()),
            }
        }
    }
    match red_err {
        Some(e) => r.check("reductions_at_y0", false, e),
        None => r.check("reductions_at_y0", worst_red <= 1e-12, format!("max deviation {worst_red:.1e}")),
    }
    // Exact form: at y = 0 the Hermite–Bessel polynomial is the J series polynomial.
    r.exact("hermite_bessel_exact_slice", (0..=5u32).map(|n| Pair(n, 0)), |Pair(n, _)| {
        let k = 25;
        let p = HermiteBesselSeries::new(*n, k).poly().substitute_const("y", GaussianRational::from_int(0));
        let j = (0..=k).fold(MultiPoly::zero(&["x"]), |acc, s| {
            let den = (BigInt::from(1) << (n + 2 * s)) * factorial(s) * factorial(n + s);
            let sign = if s % 2 == 1 { -1 } else { 1 };
            let c = GaussianRational::from(ratio(sign.into(), den));
            &acc + &x_pow("x", n + 2 * s).scale(&c)
        });
        p == j
    });
    let mut fourier_worst = 0.0f64;
    for n in -4i64..=4 {
        for &(x, y) in &[(0.7, 0.3), (1.0, -0.5), (2.0, 1.0), (0.0, 1.5)] {
            let a = bessel_2var(n, x, y, t).map(|v| (v.value - bessel_2var_fourier(n, x, y, FOURIER_NODES)).abs());
            let b = ji4(n, x, y, t).map(|v| (v.value - ji4_fourier(n, x, y, FOURIER_NODES)).abs());
            fourier_worst = fourier_worst.max(a.unwrap_or(f64::INFINITY)).max(b.unwrap_or(f64::INFINITY));
        }
    }
    r.check(
        "generating_function_fourier",
        fourier_worst <= 1e-8,
        format!("max deviation {fourier_worst:.1e} over |n| ≤ 4 on {FOURIER_NODES} nodes"),
    );
    let cfg = QuadratureConfig::default();
    let mut bg_results = Vec::new();
    let mut bg_ok = true;
    let mut bg_err = String::new();
    for n in 0..=2 {
        for &x in &[0.0, 1.0] {
            for &a in &[0.5, 1.0, 2.0] {
                match bessel_gauss_integral(n, x, a, t, &cfg, 1e-6) {
                    Ok(res) => {
                        bg_ok &= res.pass;
                        bg_results.push(res);
                    }
                    Err(e) => {
                        bg_ok = false;
                        bg_err = format!("; error at n={n}, x={x}, a={a}: {e}");
                    }
                }
            }
        }
    }
    r.check("bessel_gauss_integral", bg_ok, format!("{} (tol 1e-6){bg_err}", summarize(&bg_results)));
    let s = SeriesTruncation::s_sums();
    let cases = [(0u32, 0u32, 0.0, 1.0, 1.0), (1, 0, 0.0, 0.0, 1.0), (2, 1, 1.0, 1.0, 1.0)];
    let mut jgh_detail = Vec::new();
    let mut jgh_ok = true;
    for &(n, m, x, z, a) in &cases {
        match jgh_integral(n, m, x, z, a, s, &cfg, 1e-5) {
            Ok(res) => {
                let ok = if n == 1 && x == 0.0 {
                    res.closed_form_value.norm() == 0.0 && res.oracle_value.norm() <= 1e-8
                } else {
                    res.pass
                };
                jgh_ok &= ok;
                jgh_detail.push(format!(
                    "(n={n},m={m}) closed {:.10} oracle {:.10}",
                    res.closed_form_value.re, res.oracle_value.re
                ));
            }
            Err(e) => {
                jgh_ok = false;
                jgh_detail.push(e.to_string());
            }
        }
    }
    r.check("hermite_bessel_gauss_integral", jgh_ok, jgh_detail.join("; "));
    // Doubling K never moves a value by more than the earlier tail bound.
    let mut tail_ok = true;
    for k in [4u32, 8, 12, 20] {
        let t1 = SeriesTruncation::new(k).with_tolerance(f64::INFINITY);
        let t2 = SeriesTruncation::new(2 * k).with_tolerance(f64::INFINITY);
        for &(n, x, y) in &[(1i64, 1.5, 0.5), (-3, 2.0, -0.7), (0, 0.3, 1.2)] {
            let pairs = [
                (bessel_j(n, x, t1), bessel_j(n, x, t2)),
                (bessel_2var(n, x, y, t1), bessel_2var(n, x, y, t2)),
                (ji4(n, x, y, t1), ji4(n, x, y, t2)),
                (hermite_bessel(n.unsigned_abs() as u32, x, y, t1), hermite_bessel(n.unsigned_abs() as u32, x, y, t2)),
            ];
            for (a, b) in pairs {
                match (a, b) {
                    (Ok(a), Ok(b)) => tail_ok &= (a.value - b.value).abs() <= a.tail_bound,
                    _ => tail_ok = false,
                }
            }
        }
    }
    r.check("tail_bounds_hold_on_doubling", tail_ok, "K ∈ {4, 8, 12, 20}");
    r.out
}
