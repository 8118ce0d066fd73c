//! Curve construction, collar coordinates and projection.

use exitwell::geometry::{CurveSpec, DomainCurve, Location};
use exitwell::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn ellipse(a: f64, b: f64) -> DomainCurve {
    DomainCurve::new(CurveSpec::Ellipse { a, b }, 256, 1.0).unwrap()
}

#[test]
fn ellipse_curvature_matches_closed_form() {
    let c = ellipse(2.0, 1.0);
    let (lo, hi) = c.curvature_range();
    // κ ranges over [b/a², a/b²].
    assert!((lo - 0.25).abs() < 1e-10 && (hi - 2.0).abs() < 1e-10, "{lo} {hi}");
    let spectral = c.spectral_curvature();
    for (a, b) in spectral.iter().zip(c.curvature()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn star_curve_area_and_convexity() {
    let c = DomainCurve::new(
        CurveSpec::FourierStar {
            mean: 1.0,
            cos: vec![0.0, 0.0, 0.05],
            sin: vec![],
        },
        256,
        1.0,
    )
    .unwrap();
    // Area of r = 1 + 0.05 cos 3t is π(1 + 0.05²/2).
    assert!((c.area() - PI * 1.00125).abs() < 1e-12);
    assert!(c.curvature().iter().all(|k| *k > 0.0));
}

#[test]
fn degenerate_curves_are_rejected() {
    assert!(matches!(
        DomainCurve::new(CurveSpec::Circle { radius: -1.0 }, 64, 1.0),
        Err(Error::Curve(_))
    ));
    assert!(DomainCurve::new(CurveSpec::Ellipse { a: 1.0, b: f64::NAN }, 64, 1.0).is_err());
}

#[test]
fn exterior_points_are_flagged() {
    let c = ellipse(1.5, 1.0);
    assert!(c.locate_in_collar([1.6, 0.0]).is_exterior());
    assert!(!c.contains([0.0, 1.01]));
    assert!(c.contains([0.0, 0.99]));
    assert!(matches!(c.locate_in_collar([0.0, 0.0]), Location::DeepInterior { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ellipse_area_is_pi_ab(a in 0.6f64..2.0, b in 0.6f64..2.0) {
        let c = DomainCurve::new(CurveSpec::Ellipse { a, b }, 256, 1.0).unwrap();
        prop_assert!((c.area() - PI * a * b).abs() < 1e-11 * a * b);
    }

    #[test]
    fn collar_point_round_trips(s in 0.0f64..1.0, t in 0.0f64..0.95) {
        let c = ellipse(1.5, 1.0);
        let (s, tau) = (s * c.length(), t * c.collar_depth());
        let x = c.collar_point(s, tau).unwrap();
        let (s2, tau2) = c.locate_in_collar(x).coords();
        prop_assert!((tau2 - tau).abs() < 1e-10, "tau {} vs {}", tau, tau2);
        prop_assert!(c.arc_distance(s, s2) < 1e-9, "s {} vs {}", s, s2);
    }

    #[test]
    fn frames_are_orthonormal_with_inward_normal(s in 0.0f64..10.0) {
        let c = ellipse(1.5, 1.0);
        let f = c.frame(s);
        let dot = f.tangent[0] * f.normal[0] + f.tangent[1] * f.normal[1];
        prop_assert!(dot.abs() < 1e-12);
        prop_assert!((f.normal[0].hypot(f.normal[1]) - 1.0).abs() < 1e-12);
        // Convex curve around the origin: the inward normal points at it.
        prop_assert!(f.point[0] * f.normal[0] + f.point[1] * f.normal[1] < 0.0);
    }
}
