use hkdf_kit::bessel::*;
use hkdf_kit::gauss::QuadratureConfig;
use proptest::prelude::*;

fn loose(k: u32) -> SeriesTruncation {
    SeriesTruncation::new(k).with_tolerance(f64::INFINITY)
}

fn l() -> SeriesTruncation {
    SeriesTruncation::l_sums()
}

fn s() -> SeriesTruncation {
    SeriesTruncation::s_sums()
}

fn close(got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() <= tol, "got {got:.17e}, want {want:.17e}");
}

#[test]
fn single_variable_values() {
    close(bessel_j(0, 0.0, l()).unwrap().value, 1.0, 0.0);
    close(bessel_j(1, 0.0, l()).unwrap().value, 0.0, 0.0);
    close(bessel_j(0, 1.0, l()).unwrap().value, 0.765_197_686_557_966_6, 1e-15);
    close(bessel_i(0, 0.0, l()).unwrap().value, 1.0, 0.0);
    close(bessel_i(1, 0.0, l()).unwrap().value, 0.0, 0.0);
    close(bessel_i(0, 1.0, l()).unwrap().value, 1.266_065_877_752_008_4, 1e-15);
    // Negative orders.
    let j3 = bessel_j(3, 1.7, l()).unwrap().value;
    close(bessel_j(-3, 1.7, l()).unwrap().value, -j3, 0.0);
    close(bessel_i(-2, 0.9, l()).unwrap().value, bessel_i(2, 0.9, l()).unwrap().value, 0.0);
}

#[test]
fn reference_values() {
    // High-precision references from an independent arbitrary-precision evaluation.
    close(bessel_2var(1, 0.7, 0.3, l()).unwrap().value, 0.271_733_893_974_649_73, 1e-14);
    close(ji4(1, 1.0, 0.125, l()).unwrap().value, 0.440_561_750_888_326_36, 1e-14);
    close(hermite_bessel(0, 1.0, -0.25, s()).unwrap().value, 0.854_176_753_314_482_37, 1e-14);
    close(hermite_bessel(2, 0.5, -0.3, s()).unwrap().value, -0.046_162_963_142_068_353, 1e-14);
}

#[test]
fn reductions_at_zero_second_argument() {
    for n in -5i64..=5 {
        for x in [0.0, 0.5, 1.0, 2.0] {
            let j = bessel_j(n, x, l()).unwrap().value;
            close(bessel_2var(n, x, 0.0, l()).unwrap().value, j, 1e-12);
            close(ji4(n, x, 0.0, l()).unwrap().value, j, 1e-12);
            if n >= 0 {
                close(hermite_bessel(n as u32, x, 0.0, s()).unwrap().value, j, 1e-12);
            }
        }
    }
    close(bessel_2var(0, 0.0, 1.0, l()).unwrap().value, 0.765_197_686_557_966_6, 1e-14);
    close(ji4(0, 0.0, 0.8, l()).unwrap().value, bessel_i(0, 0.8, l()).unwrap().value, 1e-14);
    close(hermite_bessel(0, 0.0, 0.0, s()).unwrap().value, 1.0, 0.0);
}

#[test]
fn generating_functions_on_the_unit_circle() {
    for n in -4i64..=4 {
        for (x, y) in [(0.7, 0.3), (1.5, -0.8), (0.0, 1.2)] {
            let f = bessel_2var_fourier(n, x, y, FOURIER_NODES);
            close(bessel_2var(n, x, y, l()).unwrap().value, f, 1e-8);
            let f = ji4_fourier(n, x, y, FOURIER_NODES);
            close(ji4(n, x, y, l()).unwrap().value, f, 1e-8);
        }
    }
    // At t = 1 the generating function equals 1.
    let total: f64 = (-40i64..=40).map(|n| bessel_2var(n, 0.7, 0.3, l()).unwrap().value).sum();
    close(total, 1.0, 1e-13);
}

#[test]
fn tail_bound_failure_is_reported() {
    let err = bessel_j(0, 30.0, SeriesTruncation::new(5)).unwrap_err();
    assert!(matches!(err, BesselError::TailBoundNotMet { k: 5, .. }));
    assert!(bessel_gauss_closed(0, 0.0, 0.0, l()).is_err());
}

#[test]
fn hermite_bessel_series_is_exact_polynomial() {
    let series = HermiteBesselSeries::new(1, 10);
    let p = series.poly();
    // Constant y-slice of the polynomial is the truncated J_1 series.
    let slice = p.substitute_const("y", 0).compile_for(&["x"]);
    let v = slice.eval(&[hkdf_kit::polycore::ComplexFloat::new(0.9, 0.0)]).re;
    close(v, bessel_j(1, 0.9, loose(10)).unwrap().value, 1e-15);
}

#[test]
fn bessel_gauss_identity() {
    let cfg = QuadratureConfig::for_dimension(1);
    let frozen = [
        (0, 0.0, 1.0, 1.570_301_100_667_767_3),
        (1, 1.0, 1.0, 0.689_120_097_027_250_97),
        (2, 1.0, 0.5, 0.256_092_921_010_672_82),
    ];
    for (n, x, a, want) in frozen {
        close(bessel_gauss_closed(n, x, a, l()).unwrap().value, want, 1e-14);
    }
    for n in 0..=2 {
        for x in [0.0, 1.0] {
            for a in [0.5, 1.0, 2.0] {
                let r = bessel_gauss_integral(n, x, a, l(), &cfg, 1e-6).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
    }
    // Large weight: the value approaches √(π/a).
    let a = 50.0;
    let v = bessel_gauss_closed(0, 0.0, a, l()).unwrap().value;
    let leading = (std::f64::consts::PI / a).sqrt();
    assert!((v / leading - 1.0).abs() < 1.0 / a);
}

#[test]
fn hermite_bessel_gauss_identity() {
    let cfg = QuadratureConfig::for_dimension(1);
    let frozen = [
        (0, 0, 0.0, 1.0, 1.0, 1.467_570_783_380_156_7),
        (1, 0, 0.0, 0.0, 1.0, 0.0),
        (2, 1, 1.0, 1.0, 1.0, 0.220_073_041_185_159_61),
        (3, 2, -0.5, 0.8, 2.0, -0.192_496_044_681_723_69),
    ];
    for (n, m, x, z, a, want) in frozen {
        close(jgh_closed(n, m, x, z, a, s()).unwrap().value, want, 1e-13);
        let r = jgh_integral(n, m, x, z, a, s(), &cfg, 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
    }
    let r = jgh_integral(1, 0, 0.0, 0.0, 1.0, s(), &cfg, 1e-5).unwrap();
    assert!(r.oracle_value.norm() <= 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubling_k_stays_within_tail_bound(n in -4i64..=4, x in -2.0f64..2.0, y in -1.0f64..1.0, k in 4u32..14) {
        for (a, b) in [
            (bessel_2var(n, x, y, loose(k)).unwrap(), bessel_2var(n, x, y, loose(2 * k)).unwrap()),
            (ji4(n, x, y, loose(k)).unwrap(), ji4(n, x, y, loose(2 * k)).unwrap()),
            (bessel_j(n, x, loose(k)).unwrap(), bessel_j(n, x, loose(2 * k)).unwrap()),
            (bessel_i(n, y, loose(k)).unwrap(), bessel_i(n, y, loose(2 * k)).unwrap()),
        ] {
            prop_assert!((a.value - b.value).abs() <= a.tail_bound, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn hermite_bessel_doubling(n in 0u32..5, x in -1.5f64..1.5, y in -0.6f64..0.6, k in 3u32..9) {
        let a = hermite_bessel(n, x, y, loose(k)).unwrap();
        let b = hermite_bessel(n, x, y, loose(2 * k)).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.tail_bound, "{a:?} vs {b:?}");
    }

    #[test]
    fn tail_bounds_do_not_grow(n in -4i64..=4, x in -2.0f64..2.0, y in -1.0f64..1.0, k in 8u32..30) {
        let a = bessel_2var(n, x, y, loose(k)).unwrap();
        let b = bessel_2var(n, x, y, loose(k + 1)).unwrap();
        prop_assert!(b.tail_bound <= a.tail_bound * (1.0 + 1e-12));
        let a = ji4(n, x, y, loose(k)).unwrap();
        let b = ji4(n, x, y, loose(k + 1)).unwrap();
        prop_assert!(b.tail_bound <= a.tail_bound * (1.0 + 1e-12));
    }
}
