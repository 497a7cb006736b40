use std::f64::consts::PI;

use approx::assert_relative_eq;
use hkdf_kit::families::{hkdf2_in, hkdf_multi};
use hkdf_kit::gauss::*;
use hkdf_kit::polycore::ComplexFloat;

fn ps(s: &str) -> ParamSet {
    ParamSet::parse(s).unwrap()
}

fn closed(id: IntegralId, s: &str) -> ComplexFloat {
    closed_form(id, &ps(s)).unwrap()
}

fn cfg(id: IntegralId) -> QuadratureConfig {
    QuadratureConfig::for_dimension(id.dimension())
}

#[test]
fn closed_form_examples() {
    let sp = PI.sqrt();
    for (b, x) in [(0.5, -1.0), (1.0, 3.0), (2.0, 0.0)] {
        let v = closed(IntegralId::GAUSS_1D_Y, &format!("n=0,b={b},x={x}"));
        assert_relative_eq!(v.re, (PI / b).sqrt(), max_relative = 1e-15);
    }
    let v = closed(IntegralId::GAUSS_1D_Y, "n=2,b=1,x=2");
    assert_relative_eq!(v.re, 4.0 * sp, max_relative = 1e-15);
    assert_eq!(v.im, 0.0);

    let v = closed(IntegralId::PRODUCT_1D, "m=0,n=0,delta=1,eta=2,y=0.3,w=-0.1,a=3/2");
    assert_relative_eq!(v.re, (PI / 1.5).sqrt(), max_relative = 1e-15);

    let v = closed(IntegralId::HKDF_XY_2D, "n=1,delta=0.7-0.2i,a=1/2,b=2");
    let expect = ComplexFloat::new(0.7, -0.2) * PI;
    assert!((v - expect).norm() < 1e-14);

    let v = closed(IntegralId::COMPLEX_2D, "n=0,delta1=1,delta2=-1,a=1/2,b=3,y=0.25");
    assert_relative_eq!(v.re, PI / 1.5f64.sqrt(), max_relative = 1e-15);
}

#[test]
fn quadrature_examples() {
    let q = quadrature(IntegralId::GAUSS_1D_Y, &ps("n=2,b=1,x=2"), &cfg(IntegralId::GAUSS_1D_Y)).unwrap();
    assert!((q.value.re - 4.0 * PI.sqrt()).abs() < 1e-10);

    let id = IntegralId::ORTHOGONALITY;
    let q = quadrature(id, &ps("m=0,n=1,a=1/2"), &cfg(id)).unwrap();
    assert!(q.value.norm() <= 1e-12 * q.abs_integral);

    let id = IntegralId::COMPLEX_2D;
    let q = quadrature(id, &ps("n=0,delta1=0.5,delta2=1,a=1/2,b=2,y=0"), &cfg(id)).unwrap();
    assert_relative_eq!(q.value.re, PI, max_relative = 1e-10);
}

#[test]
fn one_dimensional_grid_passes_tightly() {
    let id = IntegralId::GAUSS_1D_Y;
    for n in 0..=8 {
        for b in ["1/2", "1", "2"] {
            for x in ["-1", "0", "2"] {
                let r = verify(id, &ps(&format!("n={n},b={b},x={x}")), &cfg(id), 1e-8).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
    }
}

#[test]
fn equal_weights_collapse_product_arguments() {
    let id = IntegralId::PRODUCT_COMPLEX_2D;
    let params = ps("m=2,n=1,delta1=0.4,delta2=-0.3,y1=0.2,y2=-0.5,a=3/2,b=3/2");
    let parts = closed_form_parts(id, &params).unwrap();
    let slot = |k: &str| parts.assignment.iter().find(|(v, _)| v == k).unwrap().1;
    assert_eq!(slot("tau"), ComplexFloat::new(0.0, 0.0));
    assert_eq!(slot("y"), ComplexFloat::new(0.2, 0.0));
    assert_eq!(slot("w"), ComplexFloat::new(-0.5, 0.0));
    let r = verify(id, &params, &cfg(id), 1e-6).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn incomplete_unit_case_is_pi() {
    let id = IntegralId::INCOMPLETE_2D;
    let params = ps("m=1,n=1,tau=0,a=1,b=1");
    assert_relative_eq!(closed_form(id, &params).unwrap().re, PI, max_relative = 1e-15);
    let r = verify(id, &params, &cfg(id), 1e-6).unwrap();
    assert_relative_eq!(r.oracle_value.re, PI, max_relative = 1e-10);
    assert!(r.pass);
}

#[test]
fn incomplete_gap_sign_is_b_minus_a() {
    // Flipping the sign of the second-argument gap must break agreement when a ≠ b.
    let id = IntegralId::INCOMPLETE_2D;
    let params = ps("m=4,n=2,tau=0.3,a=1/2,b=2");
    let oracle = quadrature(id, &params, &cfg(id)).unwrap().value;
    let mut parts = closed_form_parts(id, &params).unwrap();
    assert!((parts.value() - oracle).norm() <= 1e-10 * oracle.norm());
    for (k, v) in parts.assignment.iter_mut() {
        if k == "y" || k == "w" {
            *v = -*v;
        }
    }
    assert!((parts.value() - oracle).norm() > 1e-2 * oracle.norm());
}

#[test]
fn orthogonality_uses_paired_weights() {
    let id = IntegralId::ORTHOGONALITY;
    let c = cfg(id);
    let report = orthogonality_readings(2, 2, 0.5, &c).unwrap();
    assert_eq!(report.matches, OrthogonalityReading::PairedWeights);
    assert!((report.equal_weights - report.stated_value).norm() > 1e-3);
    let expect = PI * 0.25 * 2.0 / (0.5 * 2f64.sqrt());
    assert_relative_eq!(report.stated_value.re, expect, max_relative = 1e-14);

    let diag = orthogonality_readings(0, 0, 0.5, &c).unwrap();
    assert_relative_eq!(diag.equal_weights.re, 2.0 * PI, max_relative = 1e-8);
    assert_relative_eq!(diag.paired_weights.re, PI * 2f64.sqrt(), max_relative = 1e-8);

    for m in 0..=6u32 {
        for n in 0..=6u32 {
            let r = verify(id, &ps(&format!("m={m},n={n},a=1/2")), &c, 1e-6).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}

#[test]
fn complex_3d_slot_reduces_to_order_two() {
    for n in 0..=8 {
        let reduced = hkdf_multi(n, 4).substitute_const("x3", 0).substitute_const("x4", 0);
        assert_eq!(reduced, hkdf2_in(n, 2, "x1", "x2"));
    }
}

#[test]
fn product_symmetry_both_sides() {
    let id = IntegralId::PRODUCT_1D;
    let a = ps("m=3,n=1,delta=0.4,eta=-1.1,y=0.2,w=-0.3,a=3/4");
    let b = ps("m=1,n=3,delta=-1.1,eta=0.4,y=-0.3,w=0.2,a=3/4");
    let (ca, cb) = (closed_form(id, &a).unwrap(), closed_form(id, &b).unwrap());
    assert!((ca - cb).norm() <= 1e-13 * ca.norm());
    let qa = quadrature(id, &a, &cfg(id)).unwrap().value;
    let qb = quadrature(id, &b, &cfg(id)).unwrap().value;
    assert!((qa - qb).norm() <= 1e-10 * qa.norm());
}

#[test]
fn randomized_sweep_small_ids() {
    for id in [IntegralId::GAUSS_1D_Y, IntegralId::PRODUCT_1D, IntegralId::CONJUGATE_PAIR_2D] {
        let results = sweep(id, 5, 11).unwrap();
        assert!(results.iter().all(|r| r.pass), "{id:?}: {results:?}");
        assert_eq!(results, sweep(id, 5, 11).unwrap());
    }
}

#[test]
fn rejects_bad_parameters() {
    assert!("NOT_AN_ID".parse::<IntegralId>().is_err());
    assert_eq!("gauss_1d_y".parse::<IntegralId>().unwrap(), IntegralId::GAUSS_1D_Y);
    let id = IntegralId::GAUSS_1D_Y;
    assert!(matches!(closed_form(id, &ps("n=1,x=0")), Err(IntegralError::Schema { .. })));
    assert!(matches!(closed_form(id, &ps("n=1,x=0,b=1,q=2")), Err(IntegralError::Schema { .. })));
    assert!(matches!(closed_form(id, &ps("n=1.5,x=0,b=1")), Err(IntegralError::Schema { .. })));
    assert!(matches!(closed_form(id, &ps("n=1,x=0,b=-1")), Err(IntegralError::NonPositiveWeight { .. })));
    assert!(ParamSet::parse("n=1,n=2").is_err());
    assert!(ParamSet::parse("n=abc").is_err());

    // Complex weights are accepted by the closed form but not by the oracle.
    let complex_weight = ps("n=2,x=1,b=1+i");
    assert!(closed_form(id, &complex_weight).is_ok());
    assert!(matches!(quadrature(id, &complex_weight, &cfg(id)), Err(IntegralError::ComplexWeight { .. })));

    assert!(closed_form(IntegralId::ORTHOGONALITY, &ps("m=0,n=0,a=1")).is_err());
}

#[test]
fn non_convergence_is_reported() {
    let id = IntegralId::GAUSS_1D_Y;
    let tight = QuadratureConfig { points_per_dim: 5, tol: 1e-15, max_refinements: 1, ..cfg(id) };
    let err = quadrature(id, &ps("n=8,x=1,b=1/2"), &tight).unwrap_err();
    assert!(matches!(err, IntegralError::Quadrature(QuadratureError::NotConverged { .. })));
}
