//! One line per acceptance criterion, each with its tolerance and time budget.
//! Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use hkdf_kit::gauss::{orthogonality_readings, sweep, IntegralId, OrthogonalityReading, QuadratureConfig};
use hkdf_kit::operational::umbral_number;
use hkdf_kit::verify::{run_suite, CheckOutcome, Suite, DEFAULT_SEED, SWEEP_DRAWS};
use num_bigint::BigInt;

struct Verdict {
    pass: bool,
    detail: String,
}

fn from_checks(checks: Vec<CheckOutcome>) -> Verdict {
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.to_string()).collect();
    if failed.is_empty() {
        let names: Vec<&str> = checks.iter().map(|c| c.name.as_str()).collect();
        Verdict { pass: true, detail: format!("{} checks ({})", checks.len(), names.join(", ")) }
    } else {
        Verdict { pass: false, detail: failed.join(" | ") }
    }
}

fn heat() -> Verdict {
    from_checks(run_suite(Suite::Heat, DEFAULT_SEED))
}

fn quasi_monomial() -> Verdict {
    from_checks(run_suite(Suite::Ladder, DEFAULT_SEED))
}

fn generating_functions() -> Verdict {
    from_checks(run_suite(Suite::Genfunc, DEFAULT_SEED))
}

fn operational_umbral() -> Verdict {
    let checks = run_suite(Suite::Umbral, DEFAULT_SEED)
        .into_iter()
        .filter(|c| !c.name.starts_with("hermite_numbers") && c.name != "signed_hermite_numbers")
        .collect();
    from_checks(checks)
}

fn integral_catalog() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for id in IntegralId::ALL {
        let tol = id.default_rel_tol();
        match sweep(id, SWEEP_DRAWS, DEFAULT_SEED) {
            Ok(res) => {
                let bad = res.iter().filter(|r| !r.pass).count();
                let worst = res
                    .iter()
                    .filter(|r| r.closed_form_value.norm() > 0.0)
                    .map(|r| r.relative_discrepancy)
                    .fold(0.0, f64::max);
                pass &= bad == 0 && res.len() >= 20;
                parts.push(format!("{id} {worst:.0e}/{tol:.0e}{}", if bad > 0 { format!(" ({bad} failed)") } else { String::new() }));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{id} error: {e}"));
            }
        }
    }
    Verdict { pass, detail: format!("{SWEEP_DRAWS} draws/id, seed {DEFAULT_SEED}; worst/tol: {}", parts.join(", ")) }
}

fn orthogonality() -> Verdict {
    let cfg = QuadratureConfig::default();
    let mut reports = Vec::new();
    for m in 0..=6u32 {
        for n in 0..=6u32 {
            match orthogonality_readings(m, n, 0.5, &cfg) {
                Ok(r) => reports.push(r),
                Err(e) => return Verdict { pass: false, detail: e.to_string() },
            }
        }
    }
    let at = |m: u32, n: u32| &reports[(m * 7 + n) as usize];
    let (mut off, mut diag) = (0.0f64, 0.0f64);
    for m in 0..=6u32 {
        for n in 0..=6u32 {
            let r = at(m, n);
            if m == n {
                diag = diag.max((r.paired_weights - r.stated_value).norm() / r.stated_value.norm());
            } else {
                off = off.max(r.paired_weights.norm() / at(n, n).paired_weights.norm());
            }
        }
    }
    let paired = (0..=6).all(|n| at(n, n).matches == OrthogonalityReading::PairedWeights);
    let equal_diag = (at(0, 0).equal_weights - at(0, 0).stated_value).norm() / at(0, 0).stated_value.norm();
    Verdict {
        pass: off <= 1e-8 && diag <= 1e-6 && paired,
        detail: format!(
            "off-diagonal {off:.1e} (tol 1e-8), diagonal {diag:.1e} (tol 1e-6); reading (a, a/(1-a)) = (1/2, 1) confirmed, \
             equal-weight reading misses the diagonal by {:.0}%",
            100.0 * equal_diag
        ),
    }
}

fn hermite_numbers() -> Verdict {
    let fact = |n: u32| (1..=n).fold(BigInt::from(1), |a, k| a * k);
    let m2: Vec<BigInt> = (0..=12).step_by(2).map(|r| umbral_number(2, r)).collect();
    let expect2: Vec<BigInt> = [1, 2, 12, 120, 1680, 30240, 665280].map(BigInt::from).to_vec();
    let formula = (0..=12u32).all(|r| {
        let want = if r % 2 == 0 { fact(r) / fact(r / 2) } else { BigInt::from(0) };
        umbral_number(2, r) == want
    });
    let m3: Vec<BigInt> = [0, 3, 6, 9].iter().map(|&r| umbral_number(3, r)).collect();
    let expect3: Vec<BigInt> = [1, 6, 360, 60480].map(BigInt::from).to_vec();
    Verdict {
        pass: m2 == expect2 && formula && m3 == expect3,
        detail: format!("m=2 even r: {m2:?}; m=3: {m3:?}"),
    }
}

fn bessel() -> Verdict {
    from_checks(run_suite(Suite::Bessel, DEFAULT_SEED))
}

fn reductions() -> Verdict {
    from_checks(run_suite(Suite::Reductions, DEFAULT_SEED))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Verdict); 9] = [
        ("heat equation, exact", Duration::from_secs(5), heat),
        ("quasi-monomial ladder, exact", Duration::from_secs(5), quasi_monomial),
        ("generating functions, exact", Duration::from_secs(30), generating_functions),
        ("operational/umbral equivalence, exact", Duration::from_secs(10), operational_umbral),
        ("integral catalog sweep", Duration::from_secs(300), integral_catalog),
        ("orthogonality instance", Duration::from_secs(60), orthogonality),
        ("Hermite-number sequences, exact", Duration::from_secs(1), hermite_numbers),
        ("Bessel suite", Duration::from_secs(120), bessel),
        ("structural reductions, exact", Duration::from_secs(10), reductions),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let took = start.elapsed();
        let ok = v.pass && took <= *budget;
        failures += usize::from(!ok);
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {}: {name} ({:.2} s, budget {} s): {}",
            i + 1,
            took.as_secs_f64(),
            budget.as_secs(),
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
