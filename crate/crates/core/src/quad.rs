//! The ε-dependent integrals: boundary functionals `μ_j`, `η_j`, the
//! volume `∫_Ω e^{−V/ε²}`, the constants `α_n`, `α_{n+1}` and the leading
//! Laplace diagnostic.
//!
//! Boundary integrands carry `e^{−θ₀/ε²}`; they are summed in the shifted
//! form `e^{−(θ₀−θ_min)/ε²}` and the factor `e^{−θ_min/ε²}` is kept in the
//! exponent of a [`LogValue`].

use crate::error::{Error, Result};
use crate::geometry::{DomainCurve, Point};
use crate::layer::Layers;
use crate::logspace::LogValue;
use crate::potential::{BoundaryTraces, Potential};
use crate::quadrature::{integrate_breaks, QuadOptions};
use serde::Serialize;
use std::f64::consts::TAU;

/// Planar dimension; kept explicit so exponents such as `2n/k` read as such.
pub const DIM: u32 = 2;

#[derive(Debug, Clone, Serialize)]
pub struct IntegralTable {
    pub eps: f64,
    /// `μ_j(ε)`, `j = 0..=N`.
    pub mu: Vec<LogValue>,
    /// `η_j(ε)`, `j = 1..=N+1`, stored from index 0.
    pub eta: Vec<LogValue>,
    /// `∫_Ω e^{−V/ε²} dx`.
    pub volume: f64,
    /// `(α_n, α_{n+1})`.
    pub alpha_lead: (f64, f64),
}

impl IntegralTable {
    /// `η_j` for `j ≥ 1`.
    pub fn eta(&self, j: usize) -> LogValue {
        self.eta[j - 1]
    }
}

/// `e^{−(θ₀ − θ_min)/ε²}` on the grid.
pub fn shifted_weights(traces: &BoundaryTraces, eps: f64) -> Vec<f64> {
    let e2 = eps * eps;
    traces.theta[0]
        .iter()
        .map(|t| (-(t - traces.theta_min) / e2).exp())
        .collect()
}

fn boundary_functional(curve: &DomainCurve, weights: &[f64], f: &[f64], shift: f64) -> LogValue {
    let sum: f64 = weights.iter().zip(f).map(|(w, v)| w * v).sum::<f64>() * curve.grid().spacing();
    LogValue::scaled(sum, shift)
}

/// `μ₀ = −∮ e^{−θ₀/ε²} θ₁ ds`, `μ_j = −∮ e^{−θ₀/ε²} ∂_ζΦ_j(0, s) ds`.
pub fn mu_table(curve: &DomainCurve, traces: &BoundaryTraces, layers: &Layers, eps: f64) -> Vec<LogValue> {
    let w = shifted_weights(traces, eps);
    let shift = traces.theta_min / (eps * eps);
    (0..=layers.order())
        .map(|j| {
            let f: Vec<f64> = if j == 0 {
                traces.theta[1].iter().map(|t| -t).collect()
            } else {
                layers.phi(j).slope_at_zero().iter().map(|d| -d).collect()
            };
            boundary_functional(curve, &w, &f, shift)
        })
        .collect()
}

/// `η₁ = −∮ e^{−θ₀/ε²} / θ₁ ds`, `η_j = ∮ e^{−θ₀/ε²} ∂_ζU_j(0, s) ds` for `j = 1..=N+1`.
pub fn eta_table(curve: &DomainCurve, traces: &BoundaryTraces, layers: &Layers, eps: f64) -> Vec<LogValue> {
    let w = shifted_weights(traces, eps);
    let shift = traces.theta_min / (eps * eps);
    (1..=layers.order() + 1)
        .map(|j| {
            let f: Vec<f64> = if j == 1 {
                traces.theta[1].iter().map(|t| -1.0 / t).collect()
            } else {
                layers.u(j).slope_at_zero()
            };
            boundary_functional(curve, &w, &f, shift)
        })
        .collect()
}

/// `∫_Ω f dx` in polar coordinates about the origin: periodic trapezoid in
/// the angle (doubled until converged) and adaptive Gauss–Kronrod in the
/// radius, with `radial_breaks(φ, R(φ))` supplying interior breakpoints.
pub fn polar_integral<F, B>(curve: &DomainCurve, f: F, radial_breaks: B, rel_tol: f64) -> Result<f64>
where
    F: Fn(Point) -> f64,
    B: Fn(f64, f64) -> Vec<f64>,
{
    let inner = |phi: f64| -> Result<f64> {
        let (s, c) = phi.sin_cos();
        let rb = curve.radial_extent(phi);
        let mut breaks = vec![0.0];
        breaks.extend(radial_breaks(phi, rb).into_iter().filter(|&r| r > 0.0 && r < rb));
        breaks.push(rb);
        breaks.sort_by(f64::total_cmp);
        let mut g = |r: f64| r * f([r * c, r * s]);
        Ok(integrate_breaks(&mut g, &breaks, QuadOptions::rel(0.1 * rel_tol))?.value)
    };
    let mut m = 32usize;
    let mut vals: Vec<f64> = (0..m).map(|i| inner(TAU * i as f64 / m as f64)).collect::<Result<_>>()?;
    let mut prev = vals.iter().sum::<f64>() * TAU / m as f64;
    while m < 1 << 14 {
        // Interleave the odd nodes of the doubled rule.
        let odd: Vec<f64> = (0..m)
            .map(|i| inner(TAU * (i as f64 + 0.5) / m as f64))
            .collect::<Result<_>>()?;
        let mut merged = Vec::with_capacity(2 * m);
        for i in 0..m {
            merged.push(vals[i]);
            merged.push(odd[i]);
        }
        vals = merged;
        m *= 2;
        let next = vals.iter().sum::<f64>() * TAU / m as f64;
        if (next - prev).abs() <= rel_tol * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::numerical(format!(
        "angular trapezoid rule did not converge (last estimate {prev:e})"
    )))
}

/// Radius beyond which `e^{−V/ε²}` is below `e^{−cut}` in every direction, for `V ≈ V₀`.
fn peak_radius(pot: &Potential, eps: f64, cut: f64) -> f64 {
    let k = f64::from(pot.origin_degree());
    (cut * eps * eps / pot.v0_angular_min()).powf(1.0 / k)
}

/// `∫_Ω e^{−V/ε²} dx`.
pub fn volume_integral(pot: &Potential, curve: &DomainCurve, eps: f64) -> Result<f64> {
    let e2 = eps * eps;
    let w = peak_radius(pot, eps, 1.0);
    let v = polar_integral(
        curve,
        |x| (-pot.value(x) / e2).exp(),
        |_, _| vec![w, 4.0 * w, 16.0 * w],
        1e-11,
    )?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::numerical(format!("volume integral evaluated to {v}")));
    }
    Ok(v)
}

/// `(α_n, α_{n+1}) = (∫ e^{−V₀}, ∫ V₁ e^{−V₀})` over the plane.
pub fn alpha_leading(pot: &Potential) -> Result<(f64, f64)> {
    let k = f64::from(pot.origin_degree());
    let mut m = 64usize;
    let mut prev = (f64::NAN, f64::NAN);
    loop {
        let mut acc = (0.0, 0.0);
        for i in 0..m {
            let (s, c) = (TAU * i as f64 / m as f64).sin_cos();
            let v0 = pot.v0().eval([c, s]);
            let v1 = pot.v1().eval([c, s]);
            // e^{−r^k V₀(ω)} < e^{−60} beyond r_max.
            let rmax = (60.0 / v0).powf(1.0 / k);
            let opts = QuadOptions::rel(1e-13);
            let mut g0 = |r: f64| r * (-r.powf(k) * v0).exp();
            let a0 = integrate_breaks(&mut g0, &[0.0, 0.25 * rmax, rmax], opts)?.value;
            let a1 = if v1 == 0.0 {
                0.0
            } else {
                let mut g1 = |r: f64| r.powf(k + 2.0) * v1 * (-r.powf(k) * v0).exp();
                integrate_breaks(&mut g1, &[0.0, 0.25 * rmax, rmax], opts)?.value
            };
            acc.0 += a0;
            acc.1 += a1;
        }
        let cur = (acc.0 * TAU / m as f64, acc.1 * TAU / m as f64);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1e-300) || a == b;
        if close(cur.0, prev.0) && (close(cur.1, prev.1) || cur.1.abs() < 1e-14 * cur.0) {
            return Ok(cur);
        }
        if m >= 1 << 14 {
            return Err(Error::numerical("alpha integrals did not converge in the angle"));
        }
        prev = cur;
        m *= 2;
    }
}

/// Leading Laplace approximation of `μ₀(ε)` or the reason it is unavailable.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LaplaceDiagnostic {
    Constant { value: LogValue },
    Minima { value: LogValue, minima: Vec<f64> },
    Declined { reason: String },
}

impl LaplaceDiagnostic {
    pub fn value(&self) -> Option<LogValue> {
        match self {
            LaplaceDiagnostic::Constant { value } | LaplaceDiagnostic::Minima { value, .. } => Some(*value),
            LaplaceDiagnostic::Declined { .. } => None,
        }
    }
}

/// Constant `θ₀`: `∮(−θ₁) ds · e^{−θ_min/ε²}`.  Isolated nondegenerate
/// minima `s*`: `Σ −θ₁(s*) √(2πε²/θ₀''(s*)) e^{−θ_min/ε²}`.
pub fn laplace_leading_mu(curve: &DomainCurve, pot: &Potential, traces: &BoundaryTraces, eps: f64) -> LaplaceDiagnostic {
    let grid = curve.grid();
    let th0 = &traces.theta[0];
    let shift = traces.theta_min / (eps * eps);
    let max = th0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = traces.theta_min.abs().max(1.0);
    if max - traces.theta_min <= 1e-12 * scale {
        let total = grid.integrate(&traces.theta[1].iter().map(|t| -t).collect::<Vec<_>>());
        return LaplaceDiagnostic::Constant {
            value: LogValue::scaled(total, shift),
        };
    }
    let n = grid.len();
    let d2 = grid.derivative_n(th0, 2);
    let mut minima = Vec::new();
    let mut sum = 0.0;
    for m in 0..n {
        let (a, b) = (th0[(m + n - 1) % n], th0[(m + 1) % n]);
        if !(th0[m] <= a && th0[m] < b) {
            continue;
        }
        let h = grid.spacing();
        let (s_star, v_star) = golden(|s| pot.value(curve.frame(s).point), grid.node(m) - h, grid.node(m) + h);
        if v_star - traces.theta_min > 1e-9 * scale {
            continue;
        }
        let w = grid.interp_weights(s_star);
        let curv = crate::spectral::dot(&w, &d2);
        if curv <= 1e-8 * scale {
            return LaplaceDiagnostic::Declined {
                reason: format!(
                    "theta_0 has a degenerate minimum at s = {s_star:.6} (second derivative {curv:.3e}); \
                     its Laplace exponent is not constructive"
                ),
            };
        }
        let t1 = crate::spectral::dot(&w, &traces.theta[1]);
        sum += -t1 * (TAU * eps * eps / curv).sqrt();
        minima.push(s_star.rem_euclid(curve.length()));
    }
    if minima.is_empty() {
        return LaplaceDiagnostic::Declined {
            reason: "no isolated grid minimum of theta_0 found".into(),
        };
    }
    LaplaceDiagnostic::Minima {
        value: LogValue::scaled(sum, shift),
        minima,
    }
}

fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    let s = 0.5 * (a + b);
    (s, f(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CurveSpec;
    use crate::potential::PotentialSpec;

    #[test]
    fn gaussian_volume_and_alpha() {
        let c = DomainCurve::new(CurveSpec::Circle { radius: 1.0 }, 64, 0.5).unwrap();
        let p = Potential::new(PotentialSpec::QuadraticForm {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
        })
        .unwrap();
        let eps: f64 = 0.5;
        let exact = TAU * eps * eps * (1.0 - (-1.0 / (2.0 * eps * eps)).exp());
        let v = volume_integral(&p, &c, eps).unwrap();
        assert!((v / exact - 1.0).abs() < 1e-10, "{v} vs {exact}");
        let (a2, a3) = alpha_leading(&p).unwrap();
        assert!((a2 - TAU).abs() < 1e-10);
        assert_eq!(a3, 0.0);
    }
}
