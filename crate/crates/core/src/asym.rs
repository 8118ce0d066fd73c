//! Assembly of the asymptotic outputs: the principal eigenvalue, the
//! eigenfunction, the constants `K^(exp)`, `K^(pow)`, the mean exit time and
//! the derived probabilistic quantities.
//!
//! With `D(ε) = Σ_{j≤N} ε^{2j−2} μ_j(ε)` and `|Ω|_V = ∫_Ω e^{−V/ε²}`:
//!
//! ```text
//! λ_ε      = ε² D / |Ω|_V
//! K^(exp)  = ε^{−2} |Ω|_V / D
//! K^(pow)  = −Σ_{j≤N} ε^{2j} η_{j+1} / D
//! Ψ_ε(x)   = 1 − χ(τ) e^{θ₁ζ} Σ_{j≤N} ε^{2j} Φ_j(ζ, s)
//! u_ε(x)   = K Ψ_ε(x) + χ(τ) e^{θ₁ζ} Σ_{1≤j≤N} ε^{2j} U_j(ζ, s)
//! ```
//!
//! so `λ_ε K^(exp) = 1` holds identically.

use crate::error::{Error, Result};
use crate::geometry::{CurveSpec, DomainCurve, Location, Point, BOUNDARY_TOL};
use crate::layer::{LayerContext, LayerPolynomial, Layers};
use crate::logspace::LogValue;
use crate::potential::{check_assumptions, AssumptionReport, BoundaryTraces, Potential, PotentialSpec};
use crate::quad::{self, IntegralTable, LaplaceDiagnostic};
use crate::spectral::dot;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Fraction of `min{τ₀, θ_min/(4c₂)}` used for the default cutoff width.
pub const DEFAULT_DELTA_FRACTION: f64 = 0.9;

/// `h(x) = e^{−1/x}` for `x > 0`, else `0`.
fn mollifier_h(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// `χ₀(t)`: `1` for `t ≤ 1`, `0` for `t ≥ 2`, smooth in between.
pub fn chi0(t: f64) -> f64 {
    let a = mollifier_h(2.0 - t);
    let b = mollifier_h(t - 1.0);
    a / (a + b)
}

/// The collar cutoff `χ(τ) = χ₀(3τ/δ)`, or `χ ≡ 1` on the projection domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cutoff {
    Smooth { delta: f64 },
    /// Diagnostic: the layer is applied wherever the nearest-point
    /// projection is defined.
    None,
}

impl Cutoff {
    pub fn smooth(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Range {
                what: "cutoff width delta",
                value: delta,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(Cutoff::Smooth { delta })
    }

    pub fn none() -> Self {
        Cutoff::None
    }

    /// Upper bound `min{τ₀, θ_min/(4c₂)}` for `δ`.
    pub fn delta_bound(curve: &DomainCurve, traces: &BoundaryTraces) -> f64 {
        curve.collar_depth().min(traces.theta_min / (4.0 * traces.c2))
    }

    pub fn default_for(curve: &DomainCurve, traces: &BoundaryTraces) -> Self {
        Cutoff::Smooth {
            delta: DEFAULT_DELTA_FRACTION * Self::delta_bound(curve, traces),
        }
    }

    pub fn delta(&self) -> Option<f64> {
        match self {
            Cutoff::Smooth { delta } => Some(*delta),
            Cutoff::None => None,
        }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            Cutoff::Smooth { delta } => chi0(3.0 * tau / delta),
            Cutoff::None => 1.0,
        }
    }

    /// `τ` beyond which `χ = 0`.
    pub fn support(&self) -> f64 {
        match self {
            Cutoff::Smooth { delta } => 2.0 * delta / 3.0,
            Cutoff::None => f64::INFINITY,
        }
    }
}

/// Cutoff choice as written in a configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CutoffSpec {
    #[default]
    Auto,
    Width {
        delta: f64,
    },
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemOptions {
    /// Expansion order `N`.
    pub order: usize,
    /// Arc-length grid size (power of two).
    pub grid_size: usize,
    /// User cap on the collar depth.
    pub collar_cap: f64,
    /// Radius of the excluded ball for the gradient bound.
    pub rho1: f64,
    pub cutoff: CutoffSpec,
}

impl Default for ProblemOptions {
    fn default() -> Self {
        ProblemOptions {
            order: 4,
            grid_size: 128,
            collar_cap: 0.5,
            rho1: 0.1,
            cutoff: CutoffSpec::Auto,
        }
    }
}

/// Geometry, potential, traces and layer sequences for one configuration;
/// independent of `ε`.
#[derive(Debug, Clone)]
pub struct Problem {
    curve: DomainCurve,
    potential: Potential,
    traces: BoundaryTraces,
    layers: Layers,
    cutoff: Cutoff,
    assumptions: AssumptionReport,
    options: ProblemOptions,
}

impl Problem {
    pub fn build(curve: CurveSpec, potential: PotentialSpec, options: ProblemOptions) -> Result<Self> {
        let curve = DomainCurve::new(curve, options.grid_size, options.collar_cap)?;
        let potential = Potential::new(potential)?;
        Self::from_parts(curve, potential, options)
    }

    pub fn from_parts(curve: DomainCurve, potential: Potential, options: ProblemOptions) -> Result<Self> {
        let assumptions = check_assumptions(&potential, &curve, options.rho1).into_result()?;
        let n = options.order;
        let traces = potential.boundary_traces(&curve, n + 2)?;
        let metric = curve.metric_taylor(n + 2)?;
        let ctx = LayerContext::new(&curve, &traces, &metric)?;
        let layers = Layers::build(&ctx, n)?;
        let cutoff = match options.cutoff {
            CutoffSpec::Auto => Cutoff::default_for(&curve, &traces),
            CutoffSpec::Width { delta } => {
                let bound = Cutoff::delta_bound(&curve, &traces);
                if !(delta > 0.0 && delta < bound) {
                    return Err(Error::Range {
                        what: "cutoff width delta",
                        value: delta,
                        lo: 0.0,
                        hi: bound,
                    });
                }
                Cutoff::smooth(delta)?
            }
            CutoffSpec::None => Cutoff::None,
        };
        Ok(Problem {
            curve,
            potential,
            traces,
            layers,
            cutoff,
            assumptions,
            options,
        })
    }

    pub fn curve(&self) -> &DomainCurve {
        &self.curve
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn traces(&self) -> &BoundaryTraces {
        &self.traces
    }

    pub fn layers(&self) -> &Layers {
        &self.layers
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn assumptions(&self) -> &AssumptionReport {
        &self.assumptions
    }

    pub fn options(&self) -> &ProblemOptions {
        &self.options
    }

    pub fn order(&self) -> usize {
        self.layers.order()
    }

    /// Integral table and assembled scalars at `ε` for the full order `N`.
    pub fn expansion(&self, eps: f64) -> Result<Expansion<'_>> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Range {
                what: "eps",
                value: eps,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        let table = IntegralTable {
            eps,
            mu: quad::mu_table(&self.curve, &self.traces, &self.layers, eps),
            eta: quad::eta_table(&self.curve, &self.traces, &self.layers, eps),
            volume: quad::volume_integral(&self.potential, &self.curve, eps)?,
            alpha_lead: quad::alpha_leading(&self.potential)?,
        };
        Ok(Expansion::assemble(self, table, self.order(), self.cutoff))
    }
}

/// A non-positive quantity that should be positive, reported rather than
/// clipped.  Typical at large `ε` when the truncated series loses its sign.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationFlag {
    pub quantity: &'static str,
    pub detail: String,
}

/// Everything known at one `ε` for a truncation order `n ≤ N`.
#[derive(Debug, Clone)]
pub struct Expansion<'a> {
    problem: &'a Problem,
    table: IntegralTable,
    order: usize,
    cutoff: Cutoff,
    denominator: LogValue,
    lambda: LogValue,
    k_exp: LogValue,
    k_pow: LogValue,
    k: LogValue,
    /// `Σ_{j≤n} ε^{2j}Φ_j` and `Σ_{1≤j≤n} ε^{2j}U_j` as single polynomials.
    phi_sum: LayerPolynomial,
    u_sum: LayerPolynomial,
    flags: Vec<TruncationFlag>,
}

fn eps_pow(eps: f64, p: i32) -> LogValue {
    LogValue::new(1, f64::from(p) * eps.ln())
}

fn weighted_sum(polys: &[&LayerPolynomial], weights: &[f64], n: usize) -> LayerPolynomial {
    let deg = polys.iter().map(|p| p.degree()).max().unwrap_or(0);
    let mut coeffs = vec![vec![0.0; n]; deg + 1];
    for (p, w) in polys.iter().zip(weights) {
        for (m, c) in p.coeffs().iter().enumerate() {
            for (acc, v) in coeffs[m].iter_mut().zip(c) {
                *acc += w * v;
            }
        }
    }
    LayerPolynomial::new(coeffs)
}

impl<'a> Expansion<'a> {
    fn assemble(problem: &'a Problem, table: IntegralTable, order: usize, cutoff: Cutoff) -> Self {
        let eps = table.eps;
        let mut flags = Vec::new();
        let terms: Vec<LogValue> = (0..=order).map(|j| eps_pow(eps, 2 * j as i32 - 2) * table.mu[j]).collect();
        let denominator = LogValue::sum(terms.iter().copied());
        if !denominator.is_positive() {
            flags.push(TruncationFlag {
                quantity: "denominator",
                detail: format!(
                    "sum of eps^(2j-2) mu_j is {:?}; term ln-magnitudes and signs: {:?}",
                    denominator.to_f64(),
                    terms.iter().map(|t| (t.sign, t.ln_abs)).collect::<Vec<_>>()
                ),
            });
        }
        let volume = LogValue::from_f64(table.volume);
        let e2 = eps_pow(eps, 2);
        let lambda = e2 * denominator / volume;
        let k_exp = volume / (e2 * denominator);
        let k_pow = -LogValue::sum((0..=order).map(|j| eps_pow(eps, 2 * j as i32) * table.eta(j + 1))) / denominator;
        let k = k_exp + k_pow;
        if !k.is_positive() {
            flags.push(TruncationFlag {
                quantity: "K",
                detail: format!("K_exp = {:?}, K_pow = {:?}", k_exp.to_f64(), k_pow.to_f64()),
            });
        }
        let layers = problem.layers();
        let n = problem.curve().len();
        let phis: Vec<&LayerPolynomial> = (0..=order).map(|j| layers.phi(j)).collect();
        let phi_w: Vec<f64> = (0..=order).map(|j| eps.powi(2 * j as i32)).collect();
        let us: Vec<&LayerPolynomial> = (1..=order).map(|j| layers.u(j)).collect();
        let u_w: Vec<f64> = (1..=order).map(|j| eps.powi(2 * j as i32)).collect();
        Expansion {
            problem,
            table,
            order,
            cutoff,
            denominator,
            lambda,
            k_exp,
            k_pow,
            k,
            phi_sum: weighted_sum(&phis, &phi_w, n),
            u_sum: weighted_sum(&us, &u_w, n),
            flags,
        }
    }

    /// The same `ε` truncated at a lower order `n`.
    pub fn truncated(&self, n: usize) -> Result<Expansion<'a>> {
        if n > self.problem.order() {
            return Err(Error::Range {
                what: "truncation order",
                value: n as f64,
                lo: 0.0,
                hi: self.problem.order() as f64,
            });
        }
        Ok(Self::assemble(self.problem, self.table.clone(), n, self.cutoff))
    }

    /// The same expansion with a different cutoff in the evaluators.
    pub fn with_cutoff(&self, cutoff: Cutoff) -> Expansion<'a> {
        Expansion {
            cutoff,
            ..self.clone()
        }
    }

    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn eps(&self) -> f64 {
        self.table.eps
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &IntegralTable {
        &self.table
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn flags(&self) -> &[TruncationFlag] {
        &self.flags
    }

    /// `D = Σ_{j≤n} ε^{2j−2} μ_j`.
    pub fn denominator(&self) -> LogValue {
        self.denominator
    }

    pub fn lambda(&self) -> LogValue {
        self.lambda
    }

    pub fn k_exp(&self) -> LogValue {
        self.k_exp
    }

    pub fn k_pow(&self) -> LogValue {
        self.k_pow
    }

    pub fn k(&self) -> LogValue {
        self.k
    }

    /// The exit time is `KΨ` alone when `n = 0`.
    pub fn leading_only(&self) -> bool {
        self.order == 0
    }

    /// `(s, τ)` for a point of `Ω̄`; exterior points are rejected.
    fn collar_coords(&self, x: Point) -> Result<Option<(f64, f64)>> {
        let curve = self.problem.curve();
        if curve.bounding_test(x) == Some(false) {
            return Err(Error::Exterior(x[0], x[1]));
        }
        if self.cutoff.support().is_finite() && curve.bounding_test(x) == Some(true) {
            // Inside the inscribed disk the distance to the boundary can
            // still be below the cutoff support, so only skip when it is not.
            let r = x[0].hypot(x[1]);
            if curve.inner_radius() - r > self.cutoff.support() {
                return Ok(None);
            }
        }
        match curve.locate_in_collar(x) {
            Location::Exterior { tau, .. } if tau < -BOUNDARY_TOL => Err(Error::Exterior(x[0], x[1])),
            Location::Exterior { s, .. } => Ok(Some((s, 0.0))),
            Location::Collar { s, tau } => Ok(Some((s, tau))),
            Location::DeepInterior { s, tau } => Ok(match self.cutoff {
                Cutoff::None => Some((s, tau)),
                Cutoff::Smooth { .. } => None,
            }),
        }
    }

    /// `(χ e^{θ₁ζ} Σε^{2j}Φ_j, χ e^{θ₁ζ} Σε^{2j}U_j)` at `x`.
    fn layer_terms(&self, x: Point) -> Result<(f64, f64)> {
        let Some((s, tau)) = self.collar_coords(x)? else {
            return Ok((0.0, 0.0));
        };
        let chi = self.cutoff.eval(tau);
        if chi == 0.0 {
            return Ok((0.0, 0.0));
        }
        if tau == 0.0 {
            // Φ₀(0) = 1 and every other layer vanishes at ζ = 0.
            return Ok((chi, 0.0));
        }
        let zeta = tau / (self.eps() * self.eps());
        let w = self.problem.curve().grid().interp_weights(s);
        let theta1 = dot(&w, &self.problem.traces().theta[1]);
        let e = chi * (theta1 * zeta).exp();
        if e == 0.0 {
            return Ok((0.0, 0.0));
        }
        Ok((e * self.phi_sum.eval_weighted(zeta, &w), e * self.u_sum.eval_weighted(zeta, &w)))
    }

    /// `Ψ_ε(x)`.
    pub fn eigenfunction(&self, x: Point) -> Result<f64> {
        Ok(1.0 - self.layer_terms(x)?.0)
    }

    /// `u_ε(x)`, carried in log form since `K` grows like `e^{θ_min/ε²}`.
    pub fn mean_exit_time(&self, x: Point) -> Result<LogValue> {
        let (phi, u) = self.layer_terms(x)?;
        Ok(self.k * LogValue::from_f64(1.0 - phi) + LogValue::from_f64(u))
    }

    /// Boundary density of the exit point on the arc-length grid.
    pub fn exit_law_density(&self) -> Vec<f64> {
        let eps = self.eps();
        let traces = self.problem.traces();
        let w = quad::shifted_weights(traces, eps);
        let mut f: Vec<f64> = traces.theta[1].iter().map(|t| -t / (eps * eps)).collect();
        for j in 1..=self.order {
            let c = eps.powi(2 * j as i32 - 2);
            for (acc, d) in f.iter_mut().zip(self.problem.layers().phi(j).slope_at_zero()) {
                *acc -= c * d;
            }
        }
        let norm = (LogValue::scaled(1.0, traces.theta_min / (eps * eps)) / self.denominator).to_f64_lossy();
        w.iter().zip(&f).map(|(a, b)| a * b * norm).collect()
    }

    /// `∮ f dP` for boundary samples `f` under the exit law.
    pub fn exit_expectation(&self, f: &[f64]) -> Result<f64> {
        let grid = self.problem.curve().grid();
        if f.len() != grid.len() {
            return Err(Error::Range {
                what: "boundary sample count",
                value: f.len() as f64,
                lo: grid.len() as f64,
                hi: grid.len() as f64,
            });
        }
        let d = self.exit_law_density();
        Ok(grid.integrate(&d.iter().zip(f).map(|(a, b)| a * b).collect::<Vec<_>>()))
    }

    /// Exit-law mass on `{θ₀ < θ_min + width}`, integrated on a 16× refined grid.
    pub fn exit_law_band_mass(&self, width: f64) -> f64 {
        let grid = self.problem.curve().grid();
        let traces = self.problem.traces();
        let d = grid.upsample(&self.exit_law_density(), 16);
        let th = grid.upsample(&traces.theta[0], 16);
        let h = grid.length() / d.len() as f64;
        d.iter()
            .zip(&th)
            .filter(|(_, t)| **t < traces.theta_min + width)
            .map(|(v, _)| v * h)
            .sum()
    }

    /// `K(|Ω| − Σ ε^{2j+2}∮[M₀Φ_j − ε²κM₁Φ_j]) + Σ_{j≥1} ε^{2j+2}∮[M₀U_j − ε²κM₁U_j]`
    /// with `M_r` the `ζ`-moments of the layers.
    pub fn torsional_rigidity(&self) -> Result<LogValue> {
        let eps = self.eps();
        let e2 = eps * eps;
        let curve = self.problem.curve();
        let grid = curve.grid();
        let theta1 = &self.problem.traces().theta[1];
        let kappa = curve.curvature();
        let layer_integral = |p: &LayerPolynomial| -> Result<f64> {
            let m0 = p.zeta_moment(theta1, 0)?;
            let m1 = p.zeta_moment(theta1, 1)?;
            let f: Vec<f64> = (0..grid.len()).map(|q| m0[q] - e2 * kappa[q] * m1[q]).collect();
            Ok(e2 * grid.integrate(&f))
        };
        let phi_part = layer_integral(&self.phi_sum)?;
        let u_part = layer_integral(&self.u_sum)?;
        Ok(self.k * LogValue::from_f64(curve.area() - phi_part) + LogValue::from_f64(u_part))
    }

    /// `∫_Ω u_ε dx` by polar quadrature of the evaluator.
    pub fn torsional_rigidity_direct(&self) -> Result<f64> {
        self.domain_integral(|x| Ok(self.mean_exit_time(x)?.to_f64_lossy()), 1e-9)
    }

    fn domain_integral<F: Fn(Point) -> Result<f64>>(&self, f: F, tol: f64) -> Result<f64> {
        let curve = self.problem.curve();
        let e2 = self.eps() * self.eps();
        let support = self.cutoff.support().min(curve.collar_depth());
        let peak = {
            let k = f64::from(self.problem.potential().origin_degree());
            (e2 / self.problem.potential().v0_angular_min()).powf(1.0 / k)
        };
        let failure = std::cell::RefCell::new(None);
        let value = quad::polar_integral(
            curve,
            |x| match f(x) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            |_, rb| {
                let mut b = vec![peak, 4.0 * peak, rb - e2, rb - 4.0 * e2, rb - 16.0 * e2];
                if support.is_finite() {
                    b.push(rb - support);
                    b.push(rb - 0.5 * support);
                }
                b
            },
            tol,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(value)
    }

    /// `∫_Ω e^{−V/ε²} Ψ_ε dx`.
    pub fn qsd_normalizer(&self) -> Result<f64> {
        let e2 = self.eps() * self.eps();
        let pot = self.problem.potential();
        self.domain_integral(|x| Ok((-pot.value(x) / e2).exp() * self.eigenfunction(x)?), 1e-10)
    }

    /// `e^{−V/ε²}Ψ_ε(x) / ∫ e^{−V/ε²}Ψ_ε`, given the normalizer.
    pub fn qsd_density(&self, x: Point, normalizer: f64) -> Result<f64> {
        let e2 = self.eps() * self.eps();
        Ok((-self.problem.potential().value(x) / e2).exp() * self.eigenfunction(x)? / normalizer)
    }

    /// `∫_Ω` of the QSD density, a quadrature check of its normalization.
    pub fn qsd_total_mass(&self, normalizer: f64) -> Result<f64> {
        self.domain_integral(|x| self.qsd_density(x, normalizer), 1e-10)
    }

    /// `K` together with the largest `u_ε` found on a polar sample grid.
    pub fn max_exit_time(&self, angles: usize, radii: usize) -> Result<MaxExitTime> {
        let curve = self.problem.curve();
        let mut best: Option<(LogValue, Point)> = None;
        for a in 0..angles {
            let phi = std::f64::consts::TAU * a as f64 / angles as f64;
            let rb = curve.radial_extent(phi);
            for r in 0..=radii {
                let rr = rb * r as f64 / radii as f64;
                let x = [rr * phi.cos(), rr * phi.sin()];
                let u = self.mean_exit_time(x)?;
                if best.map_or(true, |(b, _)| cmp_log(u, b) == Ordering::Greater) {
                    best = Some((u, x));
                }
            }
        }
        let (grid_max, at) = best.ok_or_else(|| Error::numerical("empty sample grid"))?;
        let tau = match curve.locate_in_collar(at) {
            Location::Collar { tau, .. } | Location::DeepInterior { tau, .. } => tau,
            Location::Exterior { .. } => 0.0,
        };
        Ok(MaxExitTime {
            k: self.k,
            grid_max,
            at,
            tau_at_max: tau,
            caveat: "K equals the maximum up to O(eps^2)",
        })
    }

    /// `μ₀` against its leading Laplace approximation.
    pub fn laplace(&self) -> LaplaceDiagnostic {
        let p = self.problem;
        quad::laplace_leading_mu(p.curve(), p.potential(), p.traces(), self.eps())
    }

    pub fn summary(&self) -> ExpansionSummary {
        let mu0 = self.table.mu[0];
        let laplace = self.laplace();
        ExpansionSummary {
            eps: self.eps(),
            order: self.order,
            leading_only: self.leading_only(),
            lambda: self.lambda,
            k_exp: self.k_exp,
            k_pow: self.k_pow,
            k: self.k,
            denominator: self.denominator,
            mu_ratios: self.table.mu.iter().map(|m| (*m / mu0).to_f64_lossy()).collect(),
            eta_ratios: self.table.eta.iter().map(|m| (*m / mu0).to_f64_lossy()).collect(),
            laplace_ratio: laplace.value().map(|v| (v / mu0).to_f64_lossy()),
            laplace,
            cutoff: self.cutoff,
            table: self.table.clone(),
            flags: self.flags.clone(),
        }
    }
}

/// Total order on `LogValue` by linear value.
pub fn cmp_log(a: LogValue, b: LogValue) -> Ordering {
    match a.sign.cmp(&b.sign) {
        Ordering::Equal => match a.sign {
            0 => Ordering::Equal,
            1 => a.ln_abs.total_cmp(&b.ln_abs),
            _ => b.ln_abs.total_cmp(&a.ln_abs),
        },
        o => o,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxExitTime {
    pub k: LogValue,
    pub grid_max: LogValue,
    pub at: Point,
    pub tau_at_max: f64,
    pub caveat: &'static str,
}

/// Serializable scalars of one [`Expansion`].
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionSummary {
    pub eps: f64,
    pub order: usize,
    pub leading_only: bool,
    pub lambda: LogValue,
    pub k_exp: LogValue,
    pub k_pow: LogValue,
    pub k: LogValue,
    pub denominator: LogValue,
    /// `μ_j/μ₀`.
    pub mu_ratios: Vec<f64>,
    /// `η_j/μ₀`, `j ≥ 1`.
    pub eta_ratios: Vec<f64>,
    pub laplace_ratio: Option<f64>,
    pub laplace: LaplaceDiagnostic,
    pub cutoff: Cutoff,
    pub table: IntegralTable,
    pub flags: Vec<TruncationFlag>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi0_profile() {
        assert_eq!(chi0(0.5), 1.0);
        assert_eq!(chi0(1.0), 1.0);
        assert_eq!(chi0(2.0), 0.0);
        assert_eq!(chi0(3.0), 0.0);
        assert!((chi0(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = chi0(1.0 + i as f64 / 100.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn cmp_log_orders_signs() {
        let a = LogValue::from_f64(-2.0);
        let b = LogValue::from_f64(-1.0);
        let c = LogValue::ZERO;
        let d = LogValue::from_f64(3.0);
        assert_eq!(cmp_log(a, b), Ordering::Less);
        assert_eq!(cmp_log(b, c), Ordering::Less);
        assert_eq!(cmp_log(c, d), Ordering::Less);
        assert_eq!(cmp_log(d, d), Ordering::Equal);
    }
}
