//! Polynomial single-well potentials, their boundary Taylor traces and the
//! checks of the standing assumptions.

use crate::error::{Assumption, Error, Result};
use crate::geometry::{DomainCurve, Point};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// One term `c·x^i·y^j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub c: f64,
}

/// Bivariate polynomial with merged, nonzero terms sorted by `(i, j)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Poly2 {
    terms: Vec<Monomial>,
    degree: u32,
}

/// `x^n` by repeated squaring.
#[inline]
fn ipow(mut x: f64, mut n: u32) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= x;
        }
        x *= x;
        n >>= 1;
    }
    acc
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, r| acc * f64::from(n - r) / f64::from(r + 1))
}

impl Poly2 {
    pub fn new(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut map: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for t in terms {
            *map.entry((t.i, t.j)).or_insert(0.0) += t.c;
        }
        let terms: Vec<Monomial> = map
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|((i, j), c)| Monomial { i, j, c })
            .collect();
        let degree = terms.iter().map(|t| t.i + t.j).max().unwrap_or(0);
        Poly2 { terms, degree }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: Point) -> f64 {
        self.terms.iter().map(|t| t.c * ipow(x[0], t.i) * ipow(x[1], t.j)).sum()
    }

    pub fn dx(&self) -> Poly2 {
        Poly2::new(self.terms.iter().filter(|t| t.i > 0).map(|t| Monomial {
            i: t.i - 1,
            j: t.j,
            c: t.c * f64::from(t.i),
        }))
    }

    pub fn dy(&self) -> Poly2 {
        Poly2::new(self.terms.iter().filter(|t| t.j > 0).map(|t| Monomial {
            i: t.i,
            j: t.j - 1,
            c: t.c * f64::from(t.j),
        }))
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly2 {
        Poly2::new(self.terms.iter().copied().filter(|t| t.i + t.j == d))
    }

    pub fn scale(&self, a: f64) -> Poly2 {
        Poly2::new(self.terms.iter().map(|t| Monomial { c: a * t.c, ..*t }))
    }

    /// Taylor coefficients of `τ ↦ p(x + τ d)`, degrees `0..=order`.
    pub fn ray_taylor(&self, x: Point, d: Point, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        for t in &self.terms {
            for a in 0..=t.i.min(order as u32) {
                let ca = binomial(t.i, a) * x[0].powi((t.i - a) as i32) * d[0].powi(a as i32);
                for b in 0..=t.j.min(order as u32 - a) {
                    let cb = binomial(t.j, b) * x[1].powi((t.j - b) as i32) * d[1].powi(b as i32);
                    out[(a + b) as usize] += t.c * ca * cb;
                }
            }
        }
        out
    }
}

/// `V = scale·|x|^k`, `V = x·Ax/2`, or an explicit monomial list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    RadialPower {
        k: u32,
        /// Defaults to `1/k`.
        #[serde(default)]
        scale: Option<f64>,
    },
    QuadraticForm {
        matrix: [[f64; 2]; 2],
    },
    Polynomial {
        /// Degree of the leading homogeneous part at the origin.
        k: u32,
        /// `(i, j, c)` triples for `c·x^i·y^j`.
        monomials: Vec<(u32, u32, f64)>,
    },
}

#[derive(Debug, Clone)]
pub struct Potential {
    spec: PotentialSpec,
    poly: Poly2,
    grad: [Poly2; 2],
    k: u32,
    v0: Poly2,
    v1: Poly2,
}

impl Potential {
    pub fn new(spec: PotentialSpec) -> Result<Self> {
        let (poly, k) = match &spec {
            PotentialSpec::RadialPower { k, scale } => {
                if *k < 2 || k % 2 != 0 {
                    return Err(Error::assumption(
                        Assumption::Smoothness,
                        format!("|x|^{k} is smooth at the origin only for even k >= 2"),
                    ));
                }
                let a = scale.unwrap_or(1.0 / f64::from(*k));
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::assumption(
                        Assumption::OriginDegree,
                        format!("radial_power scale {a} must be positive"),
                    ));
                }
                let h = k / 2;
                let poly = Poly2::new((0..=h).map(|r| Monomial {
                    i: 2 * r,
                    j: 2 * (h - r),
                    c: a * binomial(h, r),
                }));
                (poly, *k)
            }
            PotentialSpec::QuadraticForm { matrix: m } => {
                if (m[0][1] - m[1][0]).abs() > 1e-14 * (m[0][1].abs() + m[1][0].abs()) {
                    return Err(Error::Config(format!(
                        "quadratic_form matrix must be symmetric, got off-diagonal {} and {}",
                        m[0][1], m[1][0]
                    )));
                }
                let poly = Poly2::new([
                    Monomial { i: 2, j: 0, c: 0.5 * m[0][0] },
                    Monomial { i: 1, j: 1, c: m[0][1] },
                    Monomial { i: 0, j: 2, c: 0.5 * m[1][1] },
                ]);
                (poly, 2)
            }
            PotentialSpec::Polynomial { k, monomials } => {
                if monomials.iter().any(|m| !m.2.is_finite()) {
                    return Err(Error::Config("polynomial coefficients must be finite".into()));
                }
                let poly = Poly2::new(monomials.iter().map(|&(i, j, c)| Monomial { i, j, c }));
                (poly, *k)
            }
        };
        let v0 = poly.homogeneous_part(k);
        let v1 = poly.homogeneous_part(k + 1);
        let grad = [poly.dx(), poly.dy()];
        let pot = Potential {
            spec,
            poly,
            grad,
            k,
            v0,
            v1,
        };
        pot.check_origin()?;
        Ok(pot)
    }

    fn check_origin(&self) -> Result<()> {
        for d in 0..2 {
            if !self.poly.homogeneous_part(d).is_zero() {
                return Err(Error::assumption(
                    Assumption::CriticalPointAtOrigin,
                    format!("the degree-{d} part of V does not vanish"),
                ));
            }
        }
        if self.k < 2 {
            return Err(Error::assumption(
                Assumption::OriginDegree,
                format!("origin degree k = {} must be at least 2", self.k),
            ));
        }
        for d in 2..self.k {
            if !self.poly.homogeneous_part(d).is_zero() {
                return Err(Error::assumption(
                    Assumption::OriginDegree,
                    format!("V has a nonzero degree-{d} part below the declared k = {}", self.k),
                ));
            }
        }
        if self.v0.is_zero() {
            return Err(Error::assumption(
                Assumption::OriginDegree,
                format!("d^{}V(0) vanishes", self.k),
            ));
        }
        let min = self.v0_angular_min();
        if !(min > 0.0) {
            return Err(Error::assumption(
                Assumption::OriginDegree,
                format!("V0 attains {min:.3e} on the unit circle; it must be positive away from 0"),
            ));
        }
        Ok(())
    }

    /// `min V₀` over 2048 directions of the unit circle.
    pub fn v0_angular_min(&self) -> f64 {
        self.v0_angular_range().0
    }

    /// `(min V₀, max V₀)` over 2048 directions of the unit circle.
    pub fn v0_angular_range(&self) -> (f64, f64) {
        (0..2048)
            .map(|i| {
                let (s, c) = (TAU * i as f64 / 2048.0).sin_cos();
                self.v0.eval([c, s])
            })
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn poly(&self) -> &Poly2 {
        &self.poly
    }

    pub fn origin_degree(&self) -> u32 {
        self.k
    }

    /// Leading homogeneous part `V₀` (degree `k`).
    pub fn v0(&self) -> &Poly2 {
        &self.v0
    }

    /// Next homogeneous part `V₁` (degree `k + 1`).
    pub fn v1(&self) -> &Poly2 {
        &self.v1
    }

    #[inline]
    pub fn value(&self, x: Point) -> f64 {
        self.poly.eval(x)
    }

    #[inline]
    pub fn gradient(&self, x: Point) -> Point {
        [self.grad[0].eval(x), self.grad[1].eval(x)]
    }

    /// Trace of the Hessian.
    pub fn laplacian(&self, x: Point) -> f64 {
        self.grad[0].dx().eval(x) + self.grad[1].dy().eval(x)
    }

    /// `θ_j(s_m)`, the Taylor coefficients of `V(x(s) + τν(s))` in `τ`.
    pub fn boundary_traces(&self, curve: &DomainCurve, order: usize) -> Result<BoundaryTraces> {
        let n = curve.len();
        let mut theta = vec![vec![0.0; n]; order + 1];
        for m in 0..n {
            let c = self.poly.ray_taylor(curve.points()[m], curve.normals()[m], order);
            for (j, v) in c.into_iter().enumerate() {
                theta[j][m] = v;
            }
        }
        BoundaryTraces::new(theta, self, curve)
    }
}

/// `θ_j(s_m)` by central differences along the normal with Richardson
/// extrapolation in `h²`, for potentials known only through values.
pub fn traces_by_differences<F: Fn(Point) -> f64>(v: F, curve: &DomainCurve, order: usize, h0: f64) -> Vec<Vec<f64>> {
    let n = curve.len();
    let mut theta = vec![vec![0.0; n]; order + 1];
    for m in 0..n {
        let (x, nu) = (curve.points()[m], curve.normals()[m]);
        let g = |t: f64| v([x[0] + t * nu[0], x[1] + t * nu[1]]);
        theta[0][m] = g(0.0);
        let mut fact = 1.0;
        for j in 1..=order {
            fact *= j as f64;
            theta[j][m] = richardson(|h| central_difference(&g, j, h), h0, 5) / fact;
        }
    }
    theta
}

/// Second-order central difference for the `j`-th derivative at 0.
fn central_difference<G: Fn(f64) -> f64>(g: &G, j: usize, h: f64) -> f64 {
    let jj = j as u32;
    let sum = |offset: f64| -> f64 {
        (0..=jj)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(jj, k) * g((0.5 * j as f64 - k as f64 + offset) * h)
            })
            .sum()
    };
    let raw = if j % 2 == 0 { sum(0.0) } else { 0.5 * (sum(0.5) + sum(-0.5)) };
    raw / h.powi(j as i32)
}

/// Neville table on step halving with an even error expansion.
fn richardson<D: Fn(f64) -> f64>(d: D, h0: f64, levels: usize) -> f64 {
    let mut table: Vec<f64> = (0..levels).map(|l| d(h0 / 2f64.powi(l as i32))).collect();
    for col in 1..levels {
        let f = 4f64.powi(col as i32);
        for row in (col..levels).rev() {
            table[row] = (f * table[row] - table[row - 1]) / (f - 1.0);
        }
    }
    table[levels - 1]
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryTraces {
    /// `theta[j][m]`, `j = 0..=order`.
    pub theta: Vec<Vec<f64>>,
    /// `min_s θ₀`, refined off the grid.
    pub theta_min: f64,
    /// Arc length at which `θ_min` is attained.
    pub theta_min_s: f64,
    /// `min −∂V/∂τ` over the collar `0 ≤ τ ≤ τ₀`.
    pub c2: f64,
    /// `min −θ₁` on the boundary itself.
    pub c2_boundary: f64,
}

impl BoundaryTraces {
    fn new(theta: Vec<Vec<f64>>, pot: &Potential, curve: &DomainCurve) -> Result<Self> {
        if theta.len() < 2 {
            return Err(Error::Range {
                what: "boundary trace order",
                value: theta.len() as f64 - 1.0,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        let (m_max, worst) = theta[1]
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if worst >= 0.0 {
            let p = curve.points()[m_max];
            return Err(Error::assumption(
                Assumption::InwardDescent,
                format!("theta_1 = {worst:.3e} >= 0 at boundary point ({:.6}, {:.6})", p[0], p[1]),
            ));
        }
        let c2_boundary = -worst;
        let (m0, _) = theta[0]
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        let (theta_min_s, theta_min) = refine_min(|s| pot.value(curve.frame(s).point), curve.grid().node(m0), curve.grid().spacing());
        if !(theta_min > 0.0) {
            return Err(Error::assumption(
                Assumption::PositiveAwayFromOrigin,
                format!("min of V on the boundary is {theta_min:.3e}"),
            ));
        }
        let c2 = collar_descent(pot, curve);
        Ok(BoundaryTraces {
            theta,
            theta_min,
            theta_min_s: theta_min_s.rem_euclid(curve.length()),
            c2,
            c2_boundary,
        })
    }

    pub fn order(&self) -> usize {
        self.theta.len() - 1
    }
}

/// `min −∇V·ν` over a 33-level grid in `τ ∈ [0, τ₀]` at every boundary node.
fn collar_descent(pot: &Potential, curve: &DomainCurve) -> f64 {
    let levels = 33;
    let mut c2 = f64::INFINITY;
    for m in 0..curve.len() {
        let (x, nu) = (curve.points()[m], curve.normals()[m]);
        for l in 0..levels {
            let tau = curve.collar_depth() * l as f64 / (levels - 1) as f64;
            let g = pot.gradient([x[0] + tau * nu[0], x[1] + tau * nu[1]]);
            c2 = c2.min(-(g[0] * nu[0] + g[1] * nu[1]));
        }
    }
    c2
}

/// Golden-section refinement of a minimum bracketed by `seed ± h`.
fn refine_min<F: Fn(f64) -> f64>(f: F, seed: f64, h: f64) -> (f64, f64) {
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (seed - h, seed + h);
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
    let best = [(seed, f(seed)), (s, f(s))]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("two candidates");
    best
}

/// Outcome of one assumption check.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionCheck {
    pub assumption: Assumption,
    pub passed: bool,
    pub detail: String,
}

/// Measured constants and per-assumption verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    pub rho1: f64,
    pub c1: f64,
    pub c2: f64,
    pub c2_boundary: f64,
    pub theta_min: f64,
    pub origin_degree: u32,
    pub hessian_singular: bool,
    pub checks: Vec<AssumptionCheck>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn into_result(self) -> Result<Self> {
        match self.first_failure() {
            Some(c) => Err(Error::assumption(c.assumption, c.detail.clone())),
            None => Ok(self),
        }
    }
}

/// Relative size below which `V₀` or `|∇V|` counts as vanishing.
const DEGENERACY_TOL: f64 = 1e-10;

/// Measures `c₁` outside `B_{ρ₁}`, `c₂`, `θ_min` and checks every assumption.
/// Never fails; a violated assumption is recorded in the report.
pub fn check_assumptions(pot: &Potential, curve: &DomainCurve, rho1: f64) -> AssumptionReport {
    let mut checks = Vec::new();
    let mut push = |a: Assumption, passed: bool, detail: String| {
        checks.push(AssumptionCheck {
            assumption: a,
            passed,
            detail,
        })
    };

    let v_origin = pot.value([0.0, 0.0]);
    let g_origin = pot.gradient([0.0, 0.0]);
    let crit = v_origin.abs() <= 1e-12 && g_origin[0].hypot(g_origin[1]) <= 1e-12;
    push(
        Assumption::CriticalPointAtOrigin,
        crit,
        format!("V(0) = {v_origin:e}, |grad V(0)| = {:e}", g_origin[0].hypot(g_origin[1])),
    );

    // Relative floors: rounding leaves ~1e-33 where V₀ or ∇V vanish exactly.
    let (v0min, v0max) = pot.v0_angular_range();
    push(
        Assumption::OriginDegree,
        v0min > DEGENERACY_TOL * v0max,
        format!("k = {}, min of V0 on the unit circle = {v0min:.6e}", pot.origin_degree()),
    );

    let (na, nr) = (256, 128);
    let (mut vmin, mut c1, mut gmax) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    let mut vmin_at = [0.0, 0.0];
    for a in 0..na {
        let phi = TAU * a as f64 / na as f64;
        let (sp, cp) = phi.sin_cos();
        let rb = curve.radial_extent(phi);
        for r in 1..=nr {
            let rr = rb * r as f64 / nr as f64;
            let x = [rr * cp, rr * sp];
            let v = pot.value(x);
            if v < vmin {
                vmin = v;
                vmin_at = x;
            }
        }
        for r in 0..=nr {
            let rr = rho1 + (rb - rho1) * r as f64 / nr as f64;
            let g = pot.gradient([rr * cp, rr * sp]);
            c1 = c1.min(g[0].hypot(g[1]));
            gmax = gmax.max(g[0].hypot(g[1]));
        }
    }
    push(
        Assumption::PositiveAwayFromOrigin,
        vmin > 0.0,
        format!("min V over the sample grid = {vmin:.6e} at ({:.4}, {:.4})", vmin_at[0], vmin_at[1]),
    );
    push(
        Assumption::NonvanishingGradient,
        c1 > DEGENERACY_TOL * gmax,
        format!("c1 = {c1:.6e} outside the ball of radius {rho1}"),
    );

    let (c2, c2_boundary, theta_min) = match pot.boundary_traces(curve, 1) {
        Ok(t) => {
            push(
                Assumption::InwardDescent,
                t.c2 > 0.0,
                format!("c2 = {:.6e} over the collar, min(-theta_1) = {:.6e}", t.c2, t.c2_boundary),
            );
            (t.c2, t.c2_boundary, t.theta_min)
        }
        Err(Error::Assumption { assumption, detail }) => {
            push(assumption, false, detail);
            (f64::NAN, f64::NAN, f64::NAN)
        }
        Err(e) => {
            push(Assumption::InwardDescent, false, e.to_string());
            (f64::NAN, f64::NAN, f64::NAN)
        }
    };
    push(Assumption::Smoothness, true, "polynomial potential".into());

    let h = [pot.grad[0].dx().eval([0.0; 2]), pot.grad[0].dy().eval([0.0; 2]), pot.grad[1].dy().eval([0.0; 2])];
    let det = h[0] * h[2] - h[1] * h[1];
    AssumptionReport {
        rho1,
        c1,
        c2,
        c2_boundary,
        theta_min,
        origin_degree: pot.origin_degree(),
        hessian_singular: det.abs() < 1e-14,
        checks,
    }
}
