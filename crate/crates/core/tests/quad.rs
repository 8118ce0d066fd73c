//! Weighted volume, Laplace constants and the boundary integral tables.

use exitwell::geometry::{CurveSpec, DomainCurve};
use exitwell::potential::{Potential, PotentialSpec};
use exitwell::quad::{alpha_leading, laplace_leading_mu, polar_integral, volume_integral, LaplaceDiagnostic};
use proptest::prelude::*;
use std::f64::consts::PI;

fn circle() -> DomainCurve {
    DomainCurve::new(CurveSpec::Circle { radius: 1.0 }, 64, 0.5).unwrap()
}

#[test]
fn alpha_for_quartic_well() {
    let pot = Potential::new(PotentialSpec::RadialPower { k: 4, scale: Some(1.0) }).unwrap();
    let (a, b) = alpha_leading(&pot).unwrap();
    assert!((a - PI.powf(1.5) / 2.0).abs() < 1e-10, "{a}");
    assert_eq!(b, 0.0);
}

#[test]
fn polar_integral_of_area() {
    let c = DomainCurve::new(CurveSpec::Ellipse { a: 2.0, b: 1.0 }, 64, 0.5).unwrap();
    let area = polar_integral(&c, |_| 1.0, |_, _| vec![], 1e-10).unwrap();
    assert!((area - 2.0 * PI).abs() < 1e-8);
}

#[test]
fn laplace_constant_on_a_disk() {
    let c = circle();
    let pot = Potential::new(PotentialSpec::QuadraticForm {
        matrix: [[1.0, 0.0], [0.0, 1.0]],
    })
    .unwrap();
    let t = pot.boundary_traces(&c, 2).unwrap();
    match laplace_leading_mu(&c, &pot, &t, 0.3) {
        LaplaceDiagnostic::Constant { value } => {
            let want = 2.0 * PI * (-1.0 / 0.18f64).exp();
            assert!((value.to_f64().unwrap() - want).abs() < 1e-12 * want);
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gaussian_volume(eps in 0.1f64..1.0) {
        let pot = Potential::new(PotentialSpec::QuadraticForm { matrix: [[1.0, 0.0], [0.0, 1.0]] }).unwrap();
        let v = volume_integral(&pot, &circle(), eps).unwrap();
        let want = 2.0 * PI * eps * eps * (-(-0.5 / (eps * eps)).exp_m1());
        prop_assert!((v - want).abs() < 1e-10 * want);
    }
}
