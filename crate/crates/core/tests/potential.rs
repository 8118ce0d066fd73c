//! Potential evaluation, boundary traces and the assumption gate.

use exitwell::geometry::{CurveSpec, DomainCurve};
use exitwell::potential::{check_assumptions, traces_by_differences, Potential, PotentialSpec};
use exitwell::{Assumption, Error};
use proptest::prelude::*;

fn circle() -> DomainCurve {
    DomainCurve::new(CurveSpec::Circle { radius: 1.0 }, 64, 0.5).unwrap()
}

fn quad(a: f64, b: f64, c: f64) -> Potential {
    Potential::new(PotentialSpec::QuadraticForm {
        matrix: [[a, c], [c, b]],
    })
    .unwrap()
}

#[test]
fn traces_of_isotropic_quadratic_on_unit_circle() {
    let pot = quad(1.0, 1.0, 0.0);
    let t = pot.boundary_traces(&circle(), 4).unwrap();
    // V(1 − τ) = (1 − τ)²/2.
    for (j, want) in [0.5, -1.0, 0.5, 0.0, 0.0].iter().enumerate() {
        assert!(t.theta[j].iter().all(|v| (v - want).abs() < 1e-14), "theta_{j}");
    }
    assert!((t.theta_min - 0.5).abs() < 1e-14);
    assert!((t.c2_boundary - 1.0).abs() < 1e-14);
    assert!((t.c2 - 0.5).abs() < 1e-12);
}

#[test]
fn outward_descent_is_rejected() {
    // V = |x|²/2 − 0.4x³ decreases across the boundary near (1, 0).
    let pot = Potential::new(PotentialSpec::Polynomial {
        k: 2,
        monomials: vec![(2, 0, 0.5), (0, 2, 0.5), (3, 0, -0.4)],
    })
    .unwrap();
    let report = check_assumptions(&pot, &circle(), 0.1);
    assert!(!report.all_passed());
    let err = report.into_result().unwrap_err();
    assert_eq!(err.exit_code(), 2, "{err}");
}

#[test]
fn degenerate_well_is_rejected() {
    let pot = Potential::new(PotentialSpec::Polynomial {
        k: 2,
        monomials: vec![(2, 0, 0.5)],
    });
    let err = pot.and_then(|p| check_assumptions(&p, &circle(), 0.1).into_result().map(|_| ()));
    assert!(
        matches!(err, Err(Error::Assumption { assumption, .. }) if assumption == Assumption::OriginDegree || assumption == Assumption::PositiveAwayFromOrigin),
        "{err:?}"
    );
}

#[test]
fn odd_radial_power_is_rejected() {
    let e = Potential::new(PotentialSpec::RadialPower { k: 3, scale: None }).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_matches_finite_differences(a in 0.5f64..3.0, b in 0.5f64..3.0, c in -0.4f64..0.4,
                                           x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let pot = quad(a, b, c);
        let h = 1e-6;
        let g = pot.gradient([x, y]);
        let gx = (pot.value([x + h, y]) - pot.value([x - h, y])) / (2.0 * h);
        let gy = (pot.value([x, y + h]) - pot.value([x, y - h])) / (2.0 * h);
        prop_assert!((g[0] - gx).abs() < 1e-7 && (g[1] - gy).abs() < 1e-7);
        prop_assert!((pot.laplacian([x, y]) - (a + b)).abs() < 1e-12);
    }

    #[test]
    fn exact_traces_agree_with_differences(a in 0.5f64..3.0, b in 0.5f64..3.0) {
        let pot = quad(a, b, 0.0);
        let curve = circle();
        let exact = pot.boundary_traces(&curve, 2).unwrap();
        let fd = traces_by_differences(|x| pot.value(x), &curve, 2, 1e-3);
        for j in 0..=2 {
            for (u, v) in exact.theta[j].iter().zip(&fd[j]) {
                prop_assert!((u - v).abs() < 1e-5 * (1.0 + u.abs()), "theta_{} {} vs {}", j, u, v);
            }
        }
    }

    #[test]
    fn quadratic_wells_have_negative_inward_derivative(a in 0.3f64..3.0, b in 0.3f64..3.0) {
        let pot = quad(a, b, 0.0);
        let t = pot.boundary_traces(&circle(), 2).unwrap();
        prop_assert!(t.theta[1].iter().all(|v| *v < 0.0));
        prop_assert!((t.theta_min - 0.5 * a.min(b)).abs() < 1e-12);
    }
}
