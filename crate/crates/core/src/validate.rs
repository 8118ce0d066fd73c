//! Independent oracles: the radial boundary value problem (exact and
//! finite-volume), the lowest Dirichlet eigenvalue of the radial generator,
//! and Monte Carlo simulation of the diffusion with exit detection.
//!
//! The radial problem `−ε²(u'' + u'/r) + v'(r)u' = 1`, `u'(0) = 0`,
//! `u(R) = 0` is written in divergence form
//! `−ε²(r e^{−v/ε²} u')' = r e^{−v/ε²}` and discretized by node-centred
//! finite volumes.  The same stiffness matrix `A` and the diagonal mass
//! `B = diag(∫_CV r e^{−v/ε²})` give the eigenproblem `Au = λBu`; its
//! symmetrization `B^{−½}AB^{−½}` is the conjugation by `e^{−v/2ε²}` that
//! turns the generator into the Schrödinger form `−ε²Δ + W_ε`.

use crate::error::{Error, Result};
use crate::geometry::{DomainCurve, Point};
use crate::potential::{Potential, PotentialSpec};
use crate::quadrature::{integrate, integrate_breaks, QuadOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{SQRT_2, TAU};

/// `v(r) = scale · r^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialProfile {
    pub k: u32,
    pub scale: f64,
}

impl RadialProfile {
    pub fn new(k: u32, scale: f64) -> Result<Self> {
        if k < 2 || !(scale > 0.0) {
            return Err(Error::Config(format!(
                "radial profile needs k >= 2 and a positive scale, got k = {k}, scale = {scale}"
            )));
        }
        Ok(RadialProfile { k, scale })
    }

    /// The profile of a rotation-invariant potential, if it is one.
    pub fn from_spec(spec: &PotentialSpec) -> Option<Self> {
        match spec {
            PotentialSpec::RadialPower { k, scale } => Some(RadialProfile {
                k: *k,
                scale: scale.unwrap_or(1.0 / f64::from(*k)),
            }),
            PotentialSpec::QuadraticForm { matrix } => {
                let a = matrix[0][0];
                (matrix[0][1] == 0.0 && matrix[1][0] == 0.0 && matrix[1][1] == a && a > 0.0)
                    .then_some(RadialProfile { k: 2, scale: 0.5 * a })
            }
            PotentialSpec::Polynomial { .. } => None,
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.scale * r.powi(self.k as i32)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.scale * f64::from(self.k) * r.powi(self.k as i32 - 1)
    }

    fn is_unit_quadratic(&self) -> bool {
        self.k == 2 && self.scale == 0.5
    }
}

/// `u(r) = ∫_r^R expm1(t²/2ε²)/t dt`, the exact solution for `v = r²/2`.
pub fn radial_quadratic_exact(r: f64, radius: f64, eps: f64) -> Result<f64> {
    let e2 = 2.0 * eps * eps;
    let f = |t: f64| {
        if t == 0.0 {
            0.0
        } else {
            (t * t / e2).exp_m1() / t
        }
    };
    Ok(integrate(f, r, radius, QuadOptions::rel(1e-14))?.value)
}

/// `u(0) = ½ Σ_{n≥1} X^n/(n·n!)` with `X = R²/(2ε²)`.
pub fn radial_quadratic_series_u0(radius: f64, eps: f64) -> f64 {
    let x = radius * radius / (2.0 * eps * eps);
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..10_000 {
        term *= x / n as f64;
        let add = term / n as f64;
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
    }
    0.5 * sum
}

/// `u(r)` for a general profile by the double integral
/// `∫_r^R e^{v(t)/ε²}/(ε² t) ∫_0^t σ e^{−v(σ)/ε²} dσ dt`.
pub fn radial_exact(profile: RadialProfile, r: f64, radius: f64, eps: f64) -> Result<f64> {
    let e2 = eps * eps;
    let inner = |t: f64| -> Result<f64> {
        Ok(integrate(|s| s * ((profile.value(t) - profile.value(s)) / e2).exp(), 0.0, t, QuadOptions::rel(1e-13))?.value)
    };
    let mut failure = None;
    let mut f = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        match inner(t) {
            Ok(v) => v / (e2 * t),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let v = integrate_breaks(&mut f, &[r, 0.5 * (r + radius), radius], QuadOptions::rel(1e-12))?.value;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Nodes `r_i = R[1 − sinh(β(1−i/M))/sinh β]`, uniform for `β = 0`.
pub fn graded_grid(radius: f64, intervals: usize, beta: f64) -> Vec<f64> {
    (0..=intervals)
        .map(|i| {
            let xi = i as f64 / intervals as f64;
            if beta == 0.0 {
                radius * xi
            } else {
                radius * (1.0 - (beta * (1.0 - xi)).sinh() / beta.sinh())
            }
        })
        .collect()
}

fn nodes_within(r: &[f64], radius: f64, width: f64) -> usize {
    r.iter().filter(|&&x| x >= radius - width).count()
}

/// Least grading with at least 20 nodes in `[R − 5ε², R]`; refuses when
/// even the strongest grading leaves fewer than 5 nodes in `[R − ε², R]`.
pub fn layer_grid(radius: f64, intervals: usize, eps: f64) -> Result<Vec<f64>> {
    let e2 = eps * eps;
    let ok = |b: f64| nodes_within(&graded_grid(radius, intervals, b), radius, 5.0 * e2) >= 20;
    const BETA_MAX: f64 = 12.0;
    let beta = if ok(0.0) {
        0.0
    } else if ok(BETA_MAX) {
        let (mut lo, mut hi) = (0.0, BETA_MAX);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    } else {
        BETA_MAX
    };
    let r = graded_grid(radius, intervals, beta);
    let inner = nodes_within(&r, radius, e2);
    if inner < 5 {
        // Spacing at R is Rβ/(M sinh β); solve for the M giving ε²/5.
        let needed = (5.0 * radius * BETA_MAX / (e2 * BETA_MAX.sinh())).ceil();
        return Err(Error::Config(format!(
            "radial grid of {intervals} intervals resolves the boundary layer with {inner} nodes in [R - eps^2, R]; \
             at least 5 are required (use about {needed} intervals)"
        )));
    }
    Ok(r)
}

/// Finite-volume data shared by the boundary value and eigenvalue oracles.
struct RadialSystem {
    r: Vec<f64>,
    /// `ε² a_{i+½}` for `i = 0..M−1`.
    flux: Vec<f64>,
    /// `∫_CV r e^{−v/ε²} dr` for `i = 0..M`.
    mass: Vec<f64>,
}

impl RadialSystem {
    fn new(profile: RadialProfile, radius: f64, eps: f64, intervals: usize) -> Result<Self> {
        let e2 = eps * eps;
        let r = layer_grid(radius, intervals, eps)?;
        let w = |x: f64| (-profile.value(x) / e2).exp();
        let mid: Vec<f64> = r.windows(2).map(|p| 0.5 * (p[0] + p[1])).collect();
        let flux: Vec<f64> = r
            .windows(2)
            .zip(&mid)
            .map(|(p, &m)| e2 * m * w(m) / (p[1] - p[0]))
            .collect();
        let m_len = r.len();
        let edges: Vec<(f64, f64)> = (0..m_len)
            .map(|i| (if i == 0 { 0.0 } else { mid[i - 1] }, if i + 1 == m_len { radius } else { mid[i] }))
            .collect();
        let mass: Vec<f64> = if profile.is_unit_quadratic() {
            edges
                .iter()
                .map(|&(a, b)| e2 * ((-a * a / (2.0 * e2)).exp() - (-b * b / (2.0 * e2)).exp()))
                .collect()
        } else {
            edges
                .iter()
                .map(|&(a, b)| Ok(integrate(|x| x * w(x), a, b, QuadOptions::rel(1e-13))?.value))
                .collect::<Result<_>>()?
        };
        if flux.iter().chain(&mass).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::numerical(format!(
                "radial weights e^(-v/eps^2) under- or overflow at eps = {eps}"
            )));
        }
        Ok(RadialSystem { r, flux, mass })
    }

    /// Unknowns `0..M−1`; `u_M = 0`.
    fn unknowns(&self) -> usize {
        self.r.len() - 1
    }

    /// Tridiagonal `(lower, diag, upper)` of the stiffness on the unknowns.
    fn stiffness(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.unknowns();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for i in 0..n {
            diag[i] = self.flux[i] + if i > 0 { self.flux[i - 1] } else { 0.0 };
            if i + 1 < n {
                off[i] = -self.flux[i];
            }
        }
        (off.clone(), diag, off)
    }
}

/// Thomas algorithm for `lower[i−1] x[i−1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    if denom == 0.0 {
        return Err(Error::numerical("zero pivot in tridiagonal solve"));
    }
    c[0] = if n > 1 { upper[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - lower[i - 1] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::numerical(format!("zero pivot in tridiagonal solve at row {i}")));
        }
        c[i] = if i + 1 < n { upper[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialSolution {
    pub eps: f64,
    pub radius: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub u0: f64,
    /// Closed form at the origin for `v = r²/2`.
    pub exact_u0: Option<f64>,
    pub nodes_in_layer: usize,
    pub monotone: bool,
}

/// Discrete radial mean exit time.
pub fn radial_bvp(profile: RadialProfile, radius: f64, eps: f64, intervals: usize) -> Result<RadialSolution> {
    let sys = RadialSystem::new(profile, radius, eps, intervals)?;
    let (lo, diag, up) = sys.stiffness();
    let rhs = &sys.mass[..sys.unknowns()];
    let mut u = solve_tridiagonal(&lo, &diag, &up, rhs)?;
    u.push(0.0);
    let monotone = u.windows(2).all(|p| p[1] <= p[0]);
    let exact_u0 = profile.is_unit_quadratic().then(|| radial_quadratic_series_u0(radius, eps));
    Ok(RadialSolution {
        eps,
        radius,
        u0: u[0],
        nodes_in_layer: nodes_within(&sys.r, radius, 5.0 * eps * eps),
        r: sys.r,
        u,
        exact_u0,
        monotone,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialEigen {
    pub eps: f64,
    pub intervals: usize,
    /// Inverse-iteration estimate `xᵀx / xᵀC⁻¹x`.
    pub lambda: f64,
    /// `ε²Σ a_{i+½}(Δy)² / Σ b_i y_i²` for the final iterate.
    pub rayleigh: f64,
    pub iterations: usize,
    /// Ground state `y = B^{−½}x` on the nodes, normalized to `y(0) = 1`.
    pub mode: Vec<f64>,
}

/// Lowest Dirichlet eigenvalue of the radial generator.
pub fn radial_eigen(profile: RadialProfile, radius: f64, eps: f64, intervals: usize) -> Result<RadialEigen> {
    let sys = RadialSystem::new(profile, radius, eps, intervals)?;
    let n = sys.unknowns();
    let (lo, diag, up) = sys.stiffness();
    let sq: Vec<f64> = sys.mass[..n].iter().map(|b| b.sqrt()).collect();
    let c_diag: Vec<f64> = (0..n).map(|i| diag[i] / sys.mass[i]).collect();
    let c_off: Vec<f64> = (0..n - 1).map(|i| lo[i] / (sq[i] * sq[i + 1])).collect();
    let _ = up;
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut x: Vec<f64> = sq.clone();
    let n0 = norm(&x);
    x.iter_mut().for_each(|v| *v /= n0);
    let mut lambda = f64::NAN;
    for it in 1..=200 {
        let y = solve_tridiagonal(&c_off, &c_diag, &c_off, &x)?;
        let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let next = 1.0 / xy;
        let ny = norm(&y);
        x = y.into_iter().map(|v| v / ny).collect();
        let converged = (next - lambda).abs() <= 1e-14 * next.abs();
        lambda = next;
        if converged && it > 2 {
            let mut mode: Vec<f64> = x.iter().zip(&sq).map(|(a, s)| a / s).collect();
            mode.push(0.0);
            let num: f64 = sys.flux.iter().enumerate().map(|(i, a)| a * (mode[i + 1] - mode[i]).powi(2)).sum();
            let den: f64 = (0..n).map(|i| sys.mass[i] * mode[i] * mode[i]).sum();
            let rayleigh = num / den;
            let m0 = mode[0];
            mode.iter_mut().for_each(|v| *v /= m0);
            if !(lambda > 0.0) {
                return Err(Error::numerical(format!("discrete eigenvalue {lambda} is not positive")));
            }
            return Ok(RadialEigen {
                eps,
                intervals,
                lambda,
                rayleigh,
                iterations: it,
                mode,
            });
        }
    }
    Err(Error::numerical("inverse iteration did not converge in 200 steps"))
}

/// Monte Carlo settings for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McOptions {
    /// Coarse step; the fine level uses `dt/2` with the same noise.
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    /// Maximum number of coarse steps per path.
    pub step_budget: u64,
    pub bins: usize,
}

impl McOptions {
    pub(crate) fn check(&self) -> Result<()> {
        if !(self.dt > 0.0) || self.n_paths == 0 || self.bins == 0 || self.step_budget == 0 {
            return Err(Error::Config(format!(
                "Monte Carlo needs dt > 0, n_paths >= 1, bins >= 1 and a positive step budget (got {self:?})"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct PathOutcome {
    fine: Option<(f64, f64)>,
    coarse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStats {
    pub dt: f64,
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McResult {
    pub eps: f64,
    pub x0: Point,
    pub n_paths: usize,
    pub seed: u64,
    pub fine: LevelStats,
    pub coarse: LevelStats,
    /// Per-path `(√2 T_{dt/2} − T_dt)/(√2 − 1)`, removing the `O(√dt)` bias.
    pub extrapolated: LevelStats,
    /// Paths that did not exit within the step budget at either level.
    pub over_budget: usize,
    /// Exit angles of the fine level in `[0, 2π)`, `bins` equal cells.
    pub histogram: Vec<u64>,
    /// `Σ (O − E)²/E` against the uniform histogram.
    pub flatness_chi2: f64,
}

impl McResult {
    /// Fraction of exits with angle within `half_width` of `angle`.
    pub fn angular_mass_near(&self, angle: f64, half_width: f64) -> f64 {
        let bins = self.histogram.len();
        let total: u64 = self.histogram.iter().sum();
        let width = TAU / bins as f64;
        let hit: u64 = self
            .histogram
            .iter()
            .enumerate()
            .filter(|(b, _)| {
                let centre = (*b as f64 + 0.5) * width;
                let d = (centre - angle).rem_euclid(TAU);
                d.min(TAU - d) <= half_width
            })
            .map(|(_, c)| *c)
            .sum();
        hit as f64 / total.max(1) as f64
    }
}

fn stats(values: &[f64], dt: f64) -> LevelStats {
    let n = values.len() as f64;
    if values.is_empty() {
        return LevelStats {
            dt,
            mean: f64::NAN,
            std_error: f64::NAN,
        };
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    LevelStats {
        dt,
        mean,
        std_error: (var / n).sqrt(),
    }
}

fn simulate_path(pot: &Potential, curve: &DomainCurve, eps: f64, x0: Point, opts: &McOptions, index: u64) -> PathOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(index);
    let h = 0.5 * opts.dt;
    let amp = (2.0 * h).sqrt() * eps;
    let mut fine = x0;
    let mut coarse = x0;
    let mut fine_exit: Option<(f64, f64)> = None;
    let mut coarse_exit: Option<f64> = None;
    for step in 1..=opts.step_budget {
        let xi: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if fine_exit.is_none() {
            for (half, pair) in [[xi[0], xi[1]], [xi[2], xi[3]]].into_iter().enumerate() {
                let g = pot.gradient(fine);
                fine = [fine[0] - g[0] * h + amp * pair[0], fine[1] - g[1] * h + amp * pair[1]];
                if !curve.contains(fine) {
                    let t = (2 * (step - 1) + half as u64 + 1) as f64 * h;
                    fine_exit = Some((t, fine[1].atan2(fine[0]).rem_euclid(TAU)));
                    break;
                }
            }
        }
        if coarse_exit.is_none() {
            let g = pot.gradient(coarse);
            // √(2dt)ε(ξ₁+ξ₂)/√2 = √(2h)ε(ξ₁+ξ₂): the sum of the two fine increments.
            coarse = [
                coarse[0] - g[0] * opts.dt + amp * (xi[0] + xi[2]),
                coarse[1] - g[1] * opts.dt + amp * (xi[1] + xi[3]),
            ];
            if !curve.contains(coarse) {
                coarse_exit = Some(step as f64 * opts.dt);
            }
        }
        if fine_exit.is_some() && coarse_exit.is_some() {
            break;
        }
    }
    PathOutcome {
        fine: fine_exit,
        coarse: coarse_exit,
    }
}

/// Euler–Maruyama exit times from `x0` at steps `dt` and `dt/2`, coupled
/// through shared Brownian increments.  Path `i` draws from stream `i` of
/// a generator seeded with `seed`, so results do not depend on scheduling.
pub fn mc_exit(pot: &Potential, curve: &DomainCurve, eps: f64, x0: Point, opts: &McOptions) -> Result<McResult> {
    opts.check()?;
    if !curve.contains(x0) {
        return Err(Error::Exterior(x0[0], x0[1]));
    }
    let outcomes: Vec<PathOutcome> = (0..opts.n_paths as u64)
        .into_par_iter()
        .map(|i| simulate_path(pot, curve, eps, x0, opts, i))
        .collect();
    let mut fine = Vec::with_capacity(outcomes.len());
    let mut coarse = Vec::with_capacity(outcomes.len());
    let mut extra = Vec::with_capacity(outcomes.len());
    let mut histogram = vec![0u64; opts.bins];
    let mut over_budget = 0;
    for o in &outcomes {
        match (o.fine, o.coarse) {
            (Some((tf, angle)), Some(tc)) => {
                fine.push(tf);
                coarse.push(tc);
                extra.push((SQRT_2 * tf - tc) / (SQRT_2 - 1.0));
                let b = ((angle / TAU) * opts.bins as f64) as usize;
                histogram[b.min(opts.bins - 1)] += 1;
            }
            _ => over_budget += 1,
        }
    }
    let total: u64 = histogram.iter().sum();
    let expected = total as f64 / opts.bins as f64;
    let flatness_chi2 = if expected > 0.0 {
        histogram.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum()
    } else {
        f64::NAN
    };
    Ok(McResult {
        eps,
        x0,
        n_paths: opts.n_paths,
        seed: opts.seed,
        fine: stats(&fine, 0.5 * opts.dt),
        coarse: stats(&coarse, opts.dt),
        extrapolated: stats(&extra, 0.0),
        over_budget,
        histogram,
        flatness_chi2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_and_quadrature_agree() {
        let s = radial_quadratic_series_u0(1.0, 0.5);
        let q = radial_quadratic_exact(0.0, 1.0, 0.5).unwrap();
        assert!((s - 1.841_935_755_270_206).abs() < 1e-13, "{s}");
        assert!((s - q).abs() < 1e-12);
    }

    #[test]
    fn thomas_solves_small_system() {
        let x = solve_tridiagonal(&[1.0, 1.0], &[4.0, 4.0, 4.0], &[1.0, 1.0], &[5.0, 6.0, 5.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn grid_refusal_names_size() {
        let err = layer_grid(1.0, 4, 0.01).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
