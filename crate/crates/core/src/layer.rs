//! Boundary-layer algebra in the stretched variable `ζ = τ/ε²`.
//!
//! A layer function is stored as `P(ζ, s) = Σ_m c_m(s) ζ^m`, meaning the
//! function `P(ζ, s) e^{θ₁(s)ζ}`.  In these coordinates the operator
//! `ε²(−ε²Δ + ∇V·∇)` expands as `−∂²_ζ + θ₁∂_ζ + Σ_{i≥0} ε^{2(i+1)} M_i`
//! with
//!
//! ```text
//! M_i = [(i+2)θ_{i+2} ζ^{i+1} − (i+1)Θ_{i+1} ζ^i] ∂_ζ
//!     + ζ^i (Σ_{q≤i} L_q θ'_{i−q}) ∂_s
//!     − ζ^{i−1} [∂_s(L_{i−1} ∂_s) + (Σ_{q≤i−1} L_q Θ'_{i−1−q}) ∂_s]      (i ≥ 1)
//! ```
//!
//! and `𝓛_i = −M_i`.  Acting on `P e^{θ₁ζ}`, `∂_ζ` becomes `P' + θ₁P` and
//! `∂_s` becomes `D_s P = ∂_s P + θ₁' ζ P`.

use crate::error::{Error, Result};
use crate::geometry::{DomainCurve, MetricTaylor};
use crate::potential::BoundaryTraces;
use crate::spectral::{dot, PeriodicGrid};
use serde::Serialize;

/// Polynomial in `ζ` with coefficients sampled on the arc-length grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerPolynomial {
    /// `coeffs[m][q]` is `c_m(s_q)`.
    coeffs: Vec<Vec<f64>>,
}

impl LayerPolynomial {
    pub fn new(coeffs: Vec<Vec<f64>>) -> Self {
        assert!(!coeffs.is_empty(), "layer polynomial needs at least one coefficient");
        let n = coeffs[0].len();
        assert!(coeffs.iter().all(|c| c.len() == n), "ragged coefficient arrays");
        LayerPolynomial { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LayerPolynomial { coeffs: vec![vec![0.0; n]] }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        LayerPolynomial {
            coeffs: vec![vec![value; n]],
        }
    }

    /// Formal degree (length of the coefficient list minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn grid_len(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Option<&[f64]> {
        self.coeffs.get(m).map(Vec::as_slice)
    }

    /// `P(ζ, s_q)`.
    pub fn eval(&self, zeta: f64, q: usize) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * zeta + c[q])
    }

    /// `P(ζ, s)` off the grid, given trigonometric interpolation weights for `s`.
    pub fn eval_weighted(&self, zeta: f64, weights: &[f64]) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * zeta + dot(weights, c))
    }

    /// `P(0, s_q)` for every node.
    pub fn at_zero(&self) -> &[f64] {
        &self.coeffs[0]
    }

    /// `∂P/∂ζ(0, s_q)` for every node.
    pub fn slope_at_zero(&self) -> Vec<f64> {
        self.coeffs
            .get(1)
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.grid_len()])
    }

    /// `(Q, ∂_ζQ, ∂²_ζQ)` of `Q = P e^{θ₁ζ}` at `(ζ, s_q)`.
    pub fn exp_jet(&self, zeta: f64, q: usize, theta1: f64) -> (f64, f64, f64) {
        let p = self.eval(zeta, q);
        let d1 = self.zeta_derivative();
        let p1 = d1.eval(zeta, q);
        let p2 = d1.zeta_derivative().eval(zeta, q);
        let e = (theta1 * zeta).exp();
        (p * e, (p1 + theta1 * p) * e, (p2 + 2.0 * theta1 * p1 + theta1 * theta1 * p) * e)
    }

    /// `∂P/∂ζ`.
    pub fn zeta_derivative(&self) -> LayerPolynomial {
        if self.degree() == 0 {
            return LayerPolynomial::zero(self.grid_len());
        }
        LayerPolynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(m, c)| c.iter().map(|v| v * (m + 1) as f64).collect())
                .collect(),
        )
    }

    /// `∫_0^∞ ζ^r P(ζ, s) e^{θ₁(s)ζ} dζ = Σ_m c_m (m+r)! / (−θ₁)^{m+r+1}` per node.
    pub fn zeta_moment(&self, theta1: &[f64], r: usize) -> Result<Vec<f64>> {
        require_negative(theta1)?;
        Ok((0..self.grid_len())
            .map(|q| {
                let a = -theta1[q];
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(m, c)| c[q] * factorial(m + r) / a.powi((m + r + 1) as i32))
                    .sum()
            })
            .collect())
    }

    fn max_abs(&self, m: usize) -> f64 {
        self.coeffs[m].iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Drops formally present top coefficients beyond `bound`; they must vanish.
    pub fn enforce_degree(mut self, bound: usize, what: &str) -> Result<Self> {
        let scale = (0..=self.degree()).map(|m| self.max_abs(m)).fold(1.0, f64::max);
        while self.degree() > bound {
            let top = self.max_abs(self.degree());
            if top > 1e-9 * scale {
                return Err(Error::numerical(format!(
                    "{what} has a nonzero coefficient of degree {} above the bound {bound} (max {top:e})",
                    self.degree()
                )));
            }
            self.coeffs.pop();
        }
        Ok(self)
    }

    fn add_assign(&mut self, other: &LayerPolynomial) {
        while self.coeffs.len() < other.coeffs.len() {
            self.coeffs.push(vec![0.0; self.grid_len()]);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    fn scale_by(&self, f: &[f64]) -> LayerPolynomial {
        LayerPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| c.iter().zip(f).map(|(x, y)| x * y).collect())
                .collect(),
        )
    }

    fn shift(&self, k: usize) -> LayerPolynomial {
        let n = self.grid_len();
        let mut coeffs = vec![vec![0.0; n]; k];
        coeffs.extend(self.coeffs.iter().cloned());
        LayerPolynomial::new(coeffs)
    }

    fn negate(mut self) -> LayerPolynomial {
        self.coeffs.iter_mut().flatten().for_each(|v| *v = -*v);
        self
    }

    /// Coefficient-wise sup-norm distance, padding the shorter with zeros.
    pub fn sup_distance(&self, other: &LayerPolynomial) -> f64 {
        let d = self.degree().max(other.degree());
        let n = self.grid_len();
        let zero = vec![0.0; n];
        (0..=d)
            .map(|m| {
                let a = self.coeffs.get(m).unwrap_or(&zero);
                let b = other.coeffs.get(m).unwrap_or(&zero);
                a.iter().zip(b).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
            })
            .fold(0.0, f64::max)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

fn require_negative(theta1: &[f64]) -> Result<()> {
    match theta1.iter().position(|&t| !(t < 0.0)) {
        Some(q) => Err(Error::assumption(
            crate::error::Assumption::InwardDescent,
            format!("theta_1 = {} at node {q}; the layer problem has no decaying solution", theta1[q]),
        )),
        None => Ok(()),
    }
}

/// The decaying solution of `−P'' − θ₁P' = g` (the layer form of
/// `−∂²Q + θ₁∂Q = G`) with `P(0) = boundary_value`.
pub fn solve_layer_ode(theta1: &[f64], rhs: &LayerPolynomial, boundary_value: f64) -> Result<LayerPolynomial> {
    require_negative(theta1)?;
    assert_eq!(theta1.len(), rhs.grid_len());
    let n = theta1.len();
    let d = rhs.degree() + 1;
    let mut coeffs = vec![vec![0.0; n]; d + 1];
    for q in 0..n {
        let t1 = theta1[q];
        // θ₁(m+1)p_{m+1} + (m+2)(m+1)p_{m+2} = −g_m, downward from m = d − 1.
        let mut p = vec![0.0; d + 2];
        for m in (0..d).rev() {
            let g = rhs.coeffs[m][q];
            p[m + 1] = (-g - ((m + 2) * (m + 1)) as f64 * p[m + 2]) / (t1 * (m + 1) as f64);
        }
        p[0] = boundary_value;
        for m in 0..=d {
            coeffs[m][q] = p[m];
        }
    }
    Ok(LayerPolynomial::new(coeffs))
}

/// Taylor data and spectral derivatives needed by the operators `𝓛_i`.
#[derive(Debug, Clone)]
pub struct LayerContext {
    grid: PeriodicGrid,
    theta: Vec<Vec<f64>>,
    dtheta: Vec<Vec<f64>>,
    theta_big: Vec<Vec<f64>>,
    dtheta_big: Vec<Vec<f64>>,
    ell: Vec<Vec<f64>>,
}

impl LayerContext {
    pub fn new(curve: &DomainCurve, traces: &BoundaryTraces, metric: &MetricTaylor) -> Result<Self> {
        let grid = curve.grid().clone();
        require_negative(&traces.theta[1])?;
        let dtheta = traces.theta.iter().map(|t| grid.derivative(t)).collect();
        let dtheta_big = metric.theta_big.iter().map(|t| grid.derivative(t)).collect();
        Ok(LayerContext {
            grid,
            theta: traces.theta.clone(),
            dtheta,
            theta_big: metric.theta_big.clone(),
            dtheta_big,
            ell: metric.ell.clone(),
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn theta1(&self) -> &[f64] {
        &self.theta[1]
    }

    pub fn theta(&self, j: usize) -> &[f64] {
        &self.theta[j]
    }

    pub fn dtheta(&self, j: usize) -> &[f64] {
        &self.dtheta[j]
    }

    pub fn theta_big(&self, j: usize) -> &[f64] {
        &self.theta_big[j]
    }

    /// Highest `i` for which `𝓛_i` is available.
    pub fn max_operator_order(&self) -> Option<usize> {
        let by_theta = self.theta.len().checked_sub(3)?;
        let by_metric = self.theta_big.len().checked_sub(2)?;
        Some(by_theta.min(by_metric).min(self.ell.len().checked_sub(1)?))
    }

    /// `D_s P = ∂_s P + θ₁' ζ P`.
    fn ds(&self, p: &LayerPolynomial) -> LayerPolynomial {
        let mut out = LayerPolynomial::new(p.coeffs.iter().map(|c| self.grid.derivative(c)).collect());
        out.add_assign(&p.scale_by(&self.dtheta[1]).shift(1));
        out
    }

    /// `P' + θ₁P`.
    fn dzeta(&self, p: &LayerPolynomial) -> LayerPolynomial {
        let mut out = p.zeta_derivative();
        out.add_assign(&p.scale_by(&self.theta[1]));
        out
    }

    /// `𝓛_i p`.
    pub fn apply(&self, i: usize, p: &LayerPolynomial) -> Result<LayerPolynomial> {
        match self.max_operator_order() {
            Some(max) if i <= max => {}
            _ => {
                return Err(Error::Range {
                    what: "layer operator order",
                    value: i as f64,
                    lo: 0.0,
                    hi: self.max_operator_order().map_or(-1.0, |m| m as f64),
                })
            }
        }
        let n = self.grid.len();
        let fi = i as f64;
        let dz = self.dzeta(p);
        let mut m = dz
            .scale_by(&self.theta[i + 2].iter().map(|t| (fi + 2.0) * t).collect::<Vec<_>>())
            .shift(i + 1);
        let big: Vec<f64> = self.theta_big[i + 1].iter().map(|t| -(fi + 1.0) * t).collect();
        m.add_assign(&dz.scale_by(&big).shift(i));

        let dsp = self.ds(p);
        let mut a = vec![0.0; n];
        for q in 0..=i {
            for (k, v) in a.iter_mut().enumerate() {
                *v += self.ell[q][k] * self.dtheta[i - q][k];
            }
        }
        m.add_assign(&dsp.scale_by(&a).shift(i));

        if i >= 1 {
            let mut inner = self.ds(&dsp.scale_by(&self.ell[i - 1]));
            let mut b = vec![0.0; n];
            for q in 0..i {
                for (k, v) in b.iter_mut().enumerate() {
                    *v += self.ell[q][k] * self.dtheta_big[i - 1 - q][k];
                }
            }
            inner.add_assign(&dsp.scale_by(&b));
            m.add_assign(&inner.shift(i - 1).negate());
        }
        Ok(m.negate())
    }

    /// `−P'' − θ₁P' − g` at `(ζ, s_q)` for the layer form.
    pub fn residual(&self, p: &LayerPolynomial, rhs: &LayerPolynomial, zeta: f64, q: usize) -> f64 {
        let t1 = self.theta[1][q];
        let e = (t1 * zeta).exp();
        let (_, d1, d2) = p.exp_jet(zeta, q, t1);
        -d2 + t1 * d1 - rhs.eval(zeta, q) * e
    }
}

/// `Φ_0..Φ_N` and `U_1..U_{N+1}` with their right-hand sides.
#[derive(Debug, Clone)]
pub struct Layers {
    order: usize,
    phis: Vec<LayerPolynomial>,
    us: Vec<LayerPolynomial>,
    phi_rhs: Vec<LayerPolynomial>,
    u_rhs: Vec<LayerPolynomial>,
}

impl Layers {
    /// Builds `Φ_0..Φ_N` and `U_1..U_{N+1}`; the extra `U` feeds `η_{N+1}`.
    pub fn build(ctx: &LayerContext, order: usize) -> Result<Self> {
        let (phis, phi_rhs) = phi_sequence(ctx, order)?;
        let (us, u_rhs) = u_sequence(ctx, order + 1, &phis)?;
        Ok(Layers {
            order,
            phis,
            us,
            phi_rhs,
            u_rhs,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Φ_j`, `j = 0..=N`.
    pub fn phi(&self, j: usize) -> &LayerPolynomial {
        &self.phis[j]
    }

    pub fn phis(&self) -> &[LayerPolynomial] {
        &self.phis
    }

    /// `U_j`, `j = 1..=N+1`.
    pub fn u(&self, j: usize) -> &LayerPolynomial {
        &self.us[j - 1]
    }

    pub fn us(&self) -> &[LayerPolynomial] {
        &self.us
    }

    /// Right side `G_j` of the `Φ_j` problem (`G_0 = 0`).
    pub fn phi_rhs(&self, j: usize) -> &LayerPolynomial {
        &self.phi_rhs[j]
    }

    /// Right side `F_j` of the `U_j` problem.
    pub fn u_rhs(&self, j: usize) -> &LayerPolynomial {
        &self.u_rhs[j - 1]
    }
}

/// `Φ_0 ≡ 1` and `Φ_j` solving `−Φ_j'' − θ₁Φ_j' = G_j`, `Φ_j(0) = 0`, with
/// `G_j = Σ_{i<j} 𝓛_i Φ_{j−i−1}`.  Returns the sequence and the right sides.
pub fn phi_sequence(ctx: &LayerContext, order: usize) -> Result<(Vec<LayerPolynomial>, Vec<LayerPolynomial>)> {
    let n = ctx.grid.len();
    let mut phis = vec![LayerPolynomial::constant(n, 1.0)];
    let mut rhs = vec![LayerPolynomial::zero(n)];
    for j in 1..=order {
        let mut g = LayerPolynomial::zero(n);
        for i in 0..j {
            g.add_assign(&ctx.apply(i, &phis[j - i - 1])?);
        }
        let phi = solve_layer_ode(ctx.theta1(), &g, 0.0)?.enforce_degree(2 * j, &format!("Phi_{j}"))?;
        phis.push(phi);
        rhs.push(g);
    }
    Ok((phis, rhs))
}

/// `U_j` solving `−U_j'' − θ₁U_j' = F_j`, `U_j(0) = 0`, with
/// `F_j = Φ_{j−1} + Σ_{i≤j−2} 𝓛_i U_{j−i−1}`; needs `Φ_0..Φ_{order−1}`.
pub fn u_sequence(
    ctx: &LayerContext,
    order: usize,
    phis: &[LayerPolynomial],
) -> Result<(Vec<LayerPolynomial>, Vec<LayerPolynomial>)> {
    if phis.len() < order {
        return Err(Error::Range {
            what: "available Phi order for U sequence",
            value: phis.len() as f64 - 1.0,
            lo: order as f64 - 1.0,
            hi: f64::INFINITY,
        });
    }
    let mut us: Vec<LayerPolynomial> = Vec::with_capacity(order);
    let mut rhs = Vec::with_capacity(order);
    for j in 1..=order {
        let mut f = phis[j - 1].clone();
        for i in 0..j.saturating_sub(1) {
            f.add_assign(&ctx.apply(i, &us[j - i - 2])?);
        }
        let u = solve_layer_ode(ctx.theta1(), &f, 0.0)?.enforce_degree(2 * j - 1, &format!("U_{j}"))?;
        us.push(u);
        rhs.push(f);
    }
    Ok((us, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q0_and_u1_from_the_solver() {
        let t1 = vec![-1.0; 4];
        let q0 = solve_layer_ode(&t1, &LayerPolynomial::zero(4), 1.0).unwrap();
        assert_eq!(q0.coeffs()[0], vec![1.0; 4]);
        assert!(q0.coeffs().iter().skip(1).flatten().all(|v| *v == 0.0));
        let u1 = solve_layer_ode(&t1, &LayerPolynomial::constant(4, 1.0), 0.0).unwrap();
        assert_eq!(u1.coeffs()[0], vec![0.0; 4]);
        assert_eq!(u1.coeffs()[1], vec![1.0; 4]);
    }

    #[test]
    fn rejects_nonnegative_theta1() {
        let t1 = vec![-1.0, 0.0, -1.0, -1.0];
        assert!(solve_layer_ode(&t1, &LayerPolynomial::zero(4), 1.0).is_err());
    }

    #[test]
    fn moments() {
        let one = LayerPolynomial::constant(1, 1.0);
        assert_eq!(one.zeta_moment(&[-1.0], 0).unwrap(), vec![1.0]);
        let zeta = LayerPolynomial::new(vec![vec![0.0], vec![1.0]]);
        assert_eq!(zeta.zeta_moment(&[-1.0], 0).unwrap(), vec![1.0]);
        assert_eq!(one.zeta_moment(&[-2.0], 1).unwrap(), vec![0.25]);
    }

    #[test]
    fn degree_enforcement() {
        let p = LayerPolynomial::new(vec![vec![1.0], vec![2.0], vec![0.0]]);
        assert_eq!(p.clone().enforce_degree(1, "p").unwrap().degree(), 1);
        assert!(p.enforce_degree(0, "p").is_err());
    }
}
