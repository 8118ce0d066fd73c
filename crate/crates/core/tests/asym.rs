//! Assembled expansion: evaluators, normalizations and scalar identities.

use exitwell::asym::{chi0, cmp_log, Cutoff, CutoffSpec, Problem, ProblemOptions};
use exitwell::geometry::CurveSpec;
use exitwell::potential::PotentialSpec;
use exitwell::validate::radial_quadratic_exact;
use exitwell::{Error, LogValue};
use proptest::prelude::*;
use std::cmp::Ordering;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn ellipse_quartic() -> &'static Problem {
    static P: OnceLock<Problem> = OnceLock::new();
    P.get_or_init(|| {
        Problem::build(
            CurveSpec::Ellipse { a: 1.5, b: 1.0 },
            PotentialSpec::RadialPower { k: 4, scale: None },
            ProblemOptions {
                order: 2,
                grid_size: 128,
                ..ProblemOptions::default()
            },
        )
        .unwrap()
    })
}

fn disk(order: usize) -> Problem {
    Problem::build(
        CurveSpec::Circle { radius: 1.0 },
        PotentialSpec::QuadraticForm {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
        },
        ProblemOptions {
            order,
            grid_size: 64,
            ..ProblemOptions::default()
        },
    )
    .unwrap()
}

#[test]
fn leading_order_radial_scalars() {
    let p = disk(0);
    let e = p.expansion(0.3).unwrap();
    assert!(e.leading_only());
    // μ₀ = 2πe^{−1/(2ε²)}, |Ω|_ε = 2πε²(1 − e^{−1/(2ε²)}).
    let lam = e.lambda().to_f64().unwrap();
    let g = (-1.0 / 0.18f64).exp();
    let want = g / (0.09 * (1.0 - g));
    assert!((lam - want).abs() < 1e-10 * want, "{lam} vs {want}");
}

#[test]
fn first_order_lambda_example() {
    let p = disk(1);
    let lam = p.expansion(0.5).unwrap().lambda().to_f64().unwrap();
    assert!((lam - 0.31305).abs() < 5e-5, "{lam}");
}

#[test]
fn mean_exit_time_tracks_exact_radial_solution() {
    let p = disk(4);
    let e = p.expansion(0.25).unwrap();
    // Interior: exact u falls below K by O(e^{V(x)/ε²}).  Inside the layer
    // and away from the cutoff ramp the agreement is much closer.
    for (r, tol) in [(0.0, 5e-4), (0.5, 1e-2), (0.95, 1e-3), (0.99, 1e-5)] {
        let u = e.mean_exit_time([r, 0.0]).unwrap().to_f64().unwrap();
        let exact = radial_quadratic_exact(r, 1.0, 0.25).unwrap();
        assert!((u - exact).abs() < tol * exact, "r = {r}: {u} vs {exact}");
    }
}

#[test]
fn maximum_sits_inside_and_equals_k() {
    let p = disk(2);
    let e = p.expansion(0.3).unwrap();
    let m = e.max_exit_time(24, 24).unwrap();
    let (k, top) = (m.k.to_f64().unwrap(), m.grid_max.to_f64().unwrap());
    assert!((top - k).abs() < 0.09 * k, "{top} vs {k}");
    assert!(m.tau_at_max > 0.0);
}

#[test]
fn truncation_is_consistent() {
    let p = disk(4);
    let full = p.expansion(0.3).unwrap();
    let two = full.truncated(2).unwrap();
    let p2 = disk(2);
    let direct = p2.expansion(0.3).unwrap();
    let (a, b) = (two.k().to_f64().unwrap(), direct.k().to_f64().unwrap());
    assert!((a - b).abs() < 1e-12 * b);
    assert!(full.truncated(5).is_err());
}

#[test]
fn exit_law_of_the_ellipse_is_normalized_and_peaks_on_the_minor_axis() {
    let p = ellipse_quartic();
    let e = p.expansion(0.35).unwrap();
    let d = e.exit_law_density();
    let ones = vec![1.0; d.len()];
    assert!((e.exit_expectation(&ones).unwrap() - 1.0).abs() < 1e-12);
    // V is smallest at the ends of the minor axis, s = ℓ/4 and 3ℓ/4.
    let n = d.len();
    assert!(d[n / 4] > d[0] && d[3 * n / 4] > d[n / 2]);
}

#[test]
fn cutoff_profile_and_validation() {
    assert_eq!(chi0(0.5), 1.0);
    assert_eq!(chi0(2.5), 0.0);
    assert!((chi0(1.5) - 0.5).abs() < 1e-15);
    let c = Cutoff::smooth(0.3).unwrap();
    assert_eq!(c.eval(0.0), 1.0);
    assert_eq!(c.eval(0.2), 0.0);
    assert!(Cutoff::smooth(-1.0).is_err());
    let too_wide = Problem::build(
        CurveSpec::Circle { radius: 1.0 },
        PotentialSpec::QuadraticForm {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
        },
        ProblemOptions {
            cutoff: CutoffSpec::Width { delta: 5.0 },
            grid_size: 32,
            ..ProblemOptions::default()
        },
    );
    assert!(matches!(too_wide, Err(Error::Range { .. })));
}

#[test]
fn exterior_points_are_rejected() {
    let p = disk(1);
    let e = p.expansion(0.4).unwrap();
    assert!(matches!(e.mean_exit_time([1.2, 0.0]), Err(Error::Exterior(..))));
}

#[test]
fn qsd_integrates_to_one() {
    let p = ellipse_quartic();
    let e = p.expansion(0.35).unwrap();
    let z = e.qsd_normalizer().unwrap();
    assert!((e.qsd_total_mass(z).unwrap() - 1.0).abs() < 1e-6);
    assert!(e.qsd_density([0.0, 0.0], z).unwrap() > e.qsd_density([0.5, 0.5], z).unwrap());
}

#[test]
fn log_comparison_orders_signed_values() {
    let a = LogValue::from_f64(-3.0);
    let b = LogValue::from_f64(2.0);
    assert_eq!(cmp_log(a, b), Ordering::Less);
    assert_eq!(cmp_log(LogValue::scaled(1.0, -800.0), b), Ordering::Greater);
    assert_eq!(cmp_log(LogValue::scaled(1.0, 800.0), b), Ordering::Less);
}

proptest! {
    // Small-noise range: θ_min/ε² ≥ 1.5 for the quartic well.
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exit_time_is_positive_and_vanishes_on_the_boundary(t in 0.0f64..1.0, r in 0.0f64..0.999, eps in 0.25f64..0.4) {
        let p = ellipse_quartic();
        let e = p.expansion(eps).unwrap();
        let phi = 2.0 * PI * t;
        let rb = p.curve().radial_extent(phi);
        let x = [r * rb * phi.cos(), r * rb * phi.sin()];
        prop_assert!(e.mean_exit_time(x).unwrap().is_positive());
        let s = t * p.curve().length();
        let b = p.curve().frame(s).point;
        prop_assert!(e.mean_exit_time(b).unwrap().to_f64_lossy().abs() < 1e-12);
        prop_assert!(e.eigenfunction(b).unwrap().abs() < 1e-12);
    }

    #[test]
    fn lambda_times_k_exp_is_one(eps in 0.2f64..0.7) {
        let e = ellipse_quartic().expansion(eps).unwrap();
        let prod = (e.lambda() * e.k_exp()).to_f64().unwrap();
        prop_assert!((prod - 1.0).abs() < 1e-14);
    }
}
