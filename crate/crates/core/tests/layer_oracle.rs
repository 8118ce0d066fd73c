//! Layer coefficients frozen from the independent symbolic oracle in
//! `oracles/layer_oracle.py` (sympy, collar coordinates expanded from scratch).

use exitwell::asym::{Problem, ProblemOptions};
use exitwell::geometry::CurveSpec;
use exitwell::layer::LayerPolynomial;
use exitwell::potential::PotentialSpec;
use std::f64::consts::PI;

const ORACLE: &str = include_str!("oracles/layer_oracle.out");

fn build(matrix: [[f64; 2]; 2], order: usize) -> Problem {
    let opts = ProblemOptions {
        order,
        grid_size: 128,
        ..ProblemOptions::default()
    };
    Problem::build(CurveSpec::Circle { radius: 1.0 }, PotentialSpec::QuadraticForm { matrix }, opts).unwrap()
}

fn fraction(x: &str) -> f64 {
    match x.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => x.parse().unwrap(),
    }
}

fn list(body: &str) -> Vec<f64> {
    body.trim().trim_matches(|c| c == '[' || c == ']').split(", ").map(fraction).collect()
}

fn node(tag: &str) -> f64 {
    match tag {
        "s=0" => 0.0,
        "s=pi/7" => PI / 7.0,
        "s=1" => 1.0,
        "s=5*pi/4" => 1.25 * PI,
        t => panic!("unknown oracle node {t}"),
    }
}

fn pick<'a>(p: &'a Problem, kind: &str, j: usize) -> &'a LayerPolynomial {
    match kind {
        "phi" => p.layers().phi(j),
        "u" => p.layers().u(j),
        k => panic!("unknown kind {k}"),
    }
}

fn at(p: &Problem, poly: &LayerPolynomial, s: f64) -> Vec<f64> {
    poly.coeffs().iter().map(|c| p.curve().grid().interpolate(c, s)).collect()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64, what: &str) {
    assert_eq!(got.len(), want.len(), "{what}: degree {got:?} vs {want:?}");
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol * w.abs().max(1.0), "{what}: {got:?} vs {want:?}");
    }
}

#[test]
fn radial_coefficients_match_exact_fractions() {
    let p = build([[1.0, 0.0], [0.0, 1.0]], 4);
    let mut seen = 0;
    for line in ORACLE.lines().skip(1).take_while(|l| !l.starts_with("//")) {
        let mut it = line.splitn(3, ' ');
        let (kind, j, body) = (it.next().unwrap(), it.next().unwrap().parse().unwrap(), it.next().unwrap());
        let want = list(body);
        for s in [0.0, 2.0, 4.5] {
            assert_close(&at(&p, pick(&p, kind, j), s), &want, 1e-11, &format!("{kind}{j}"));
        }
        seen += 1;
    }
    assert_eq!(seen, 9);
}

#[test]
fn anisotropic_coefficients_match_oracle() {
    let p = build([[1.0, 0.0], [0.0, 2.0]], 4);
    let rows: Vec<&str> = ORACLE.lines().skip_while(|l| !l.starts_with("// anisotropic")).skip(1).collect();
    assert_eq!(rows.len(), 28);
    for line in rows {
        let (head, body) = line.split_once(": ").unwrap();
        let h: Vec<&str> = head.split_whitespace().collect();
        let (kind, j, s) = (h[0], h[1].parse().unwrap(), node(h[2]));
        assert_close(&at(&p, pick(&p, kind, j), s), &list(body), 1e-10, line);
    }
}

#[test]
fn radial_u2_solves_its_equation() {
    // -U'' + U' = Φ₁ + 𝓛₀U₁ with U = ζ³/2 + 5ζ²/2 + 4ζ.
    let p = build([[1.0, 0.0], [0.0, 1.0]], 2);
    assert_close(&at(&p, p.layers().u(2), 0.3), &[0.0, 4.0, 2.5, 0.5], 1e-12, "U2");
}

/// The alternative closed form ζ³/3 + 19ζ²/6 + 4ζ leaves a nonzero residual;
/// kept to document the discrepancy.
#[test]
#[ignore = "alternative closed form of U_2 does not satisfy its own equation"]
fn printed_u2_closed_form() {
    let p = build([[1.0, 0.0], [0.0, 1.0]], 2);
    assert_close(&at(&p, p.layers().u(2), 0.0), &[0.0, 4.0, 19.0 / 6.0, 1.0 / 3.0], 1e-10, "U2 printed");
}
