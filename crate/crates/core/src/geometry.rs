//! Closed boundary curves, collar coordinates and the metric Taylor data.
//!
//! A curve is given in a native parameter `t ∈ [0, 2π)`, traversed
//! counter-clockwise, and resampled on a uniform arc-length grid.  The
//! inward normal is the tangent rotated by +90°, `ν = (−T_y, T_x)`, and the
//! curvature is signed so that convex curves have `κ > 0`; with this
//! convention `T' = κν` and `ν' = −κT`.

use crate::error::{Error, Result};
use crate::spectral::PeriodicGrid;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

pub type Point = [f64; 2];

/// Boundary point within this distance of the curve counts as on it.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// Star-shaped curve `r(t) = mean + Σ_k cos[k−1]·cos(kt) + sin[k−1]·sin(kt)`
    /// in polar form about the origin.
    FourierStar {
        mean: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

/// Position and its first two derivatives in the native parameter.
#[derive(Debug, Clone, Copy)]
struct Jet {
    p: Point,
    d1: Point,
    d2: Point,
}

impl CurveSpec {
    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        match self {
            CurveSpec::Circle { radius } if !ok(*radius) => Err(Error::Curve(format!("circle radius {radius} must be positive"))),
            CurveSpec::Ellipse { a, b } if !ok(*a) || !ok(*b) => {
                Err(Error::Curve(format!("ellipse semi-axes ({a}, {b}) must be positive")))
            }
            CurveSpec::FourierStar { mean, cos, sin } => {
                if !mean.is_finite() || cos.iter().chain(sin).any(|c| !c.is_finite()) {
                    return Err(Error::Curve("fourier_star coefficients must be finite".into()));
                }
                let m = 4096;
                let min_r = (0..m)
                    .map(|i| self.star_radius(TAU * i as f64 / m as f64).0)
                    .fold(f64::INFINITY, f64::min);
                if min_r <= 0.0 {
                    return Err(Error::Curve(format!(
                        "fourier_star radius reaches {min_r:.3e}; the curve must enclose the origin without crossing it"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `(r, r', r'')` of the polar radius of a star curve.
    fn star_radius(&self, t: f64) -> (f64, f64, f64) {
        let CurveSpec::FourierStar { mean, cos, sin } = self else {
            unreachable!("star_radius on a non-star curve")
        };
        let (mut r, mut r1, mut r2) = (*mean, 0.0, 0.0);
        for (i, &c) in cos.iter().enumerate() {
            let k = (i + 1) as f64;
            let (sk, ck) = (k * t).sin_cos();
            r += c * ck;
            r1 -= c * k * sk;
            r2 -= c * k * k * ck;
        }
        for (i, &c) in sin.iter().enumerate() {
            let k = (i + 1) as f64;
            let (sk, ck) = (k * t).sin_cos();
            r += c * sk;
            r1 += c * k * ck;
            r2 -= c * k * k * sk;
        }
        (r, r1, r2)
    }

    fn jet(&self, t: f64) -> Jet {
        let (st, ct) = t.sin_cos();
        match *self {
            CurveSpec::Circle { radius } => Jet {
                p: [radius * ct, radius * st],
                d1: [-radius * st, radius * ct],
                d2: [-radius * ct, -radius * st],
            },
            CurveSpec::Ellipse { a, b } => Jet {
                p: [a * ct, b * st],
                d1: [-a * st, b * ct],
                d2: [-a * ct, -b * st],
            },
            CurveSpec::FourierStar { .. } => {
                let (r, r1, r2) = self.star_radius(t);
                Jet {
                    p: [r * ct, r * st],
                    d1: [r1 * ct - r * st, r1 * st + r * ct],
                    d2: [r2 * ct - 2.0 * r1 * st - r * ct, r2 * st + 2.0 * r1 * ct - r * st],
                }
            }
        }
    }

    /// Distance from the origin to the curve along the ray at polar angle `phi`.
    pub fn radial_extent(&self, phi: f64) -> f64 {
        match *self {
            CurveSpec::Circle { radius } => radius,
            CurveSpec::Ellipse { a, b } => {
                let (s, c) = phi.sin_cos();
                a * b / (b * b * c * c + a * a * s * s).sqrt()
            }
            CurveSpec::FourierStar { .. } => self.star_radius(phi).0,
        }
    }

    /// Exact point-in-domain test using the polar description.
    pub fn contains(&self, x: Point) -> bool {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let rb = self.radial_extent(x[1].atan2(x[0]));
        r2 <= rb * rb
    }
}

/// Cumulative arc length `S(t)` as a closed-form Fourier series of the speed.
#[derive(Debug, Clone)]
struct ArcLength {
    mean_speed: f64,
    /// `(k, a_k, b_k)` with speed `= a₀ + Σ a_k cos kt + b_k sin kt`.
    modes: Vec<(f64, f64, f64)>,
}

impl ArcLength {
    fn new(spec: &CurveSpec) -> Result<Self> {
        let speed = |t: f64| {
            let d = spec.jet(t).d1;
            d[0].hypot(d[1])
        };
        let mut m = 256;
        loop {
            let mut buf: Vec<Complex64> = (0..m)
                .map(|j| Complex64::new(speed(TAU * j as f64 / m as f64), 0.0))
                .collect();
            FftPlanner::new().plan_fft_forward(m).process(&mut buf);
            let inv = 1.0 / m as f64;
            let a0 = buf[0].re * inv;
            let tail = buf[3 * m / 8..m / 2].iter().map(|c| c.norm() * inv).fold(0.0, f64::max);
            if tail < 1e-15 * a0 || m >= 1 << 17 {
                if tail > 1e-10 * a0 {
                    return Err(Error::Curve(format!(
                        "speed of the native parameterization is not resolved by {m} Fourier modes"
                    )));
                }
                let modes = (1..m / 2)
                    .map(|k| (k as f64, 2.0 * buf[k].re * inv, -2.0 * buf[k].im * inv))
                    .filter(|&(_, a, b)| a.abs() + b.abs() > 1e-17 * a0)
                    .collect();
                return Ok(ArcLength { mean_speed: a0, modes });
            }
            m *= 2;
        }
    }

    fn total(&self) -> f64 {
        TAU * self.mean_speed
    }

    fn s_of_t(&self, t: f64) -> f64 {
        let mut s = self.mean_speed * t;
        for &(k, a, b) in &self.modes {
            let (sk, ck) = (k * t).sin_cos();
            s += (a * sk + b * (1.0 - ck)) / k;
        }
        s
    }
}

/// Frame of the boundary at one arc-length position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryFrame {
    pub s: f64,
    pub point: Point,
    pub tangent: Point,
    pub normal: Point,
    pub curvature: f64,
}

/// Result of projecting a point onto the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "region", rename_all = "snake_case")]
pub enum Location {
    /// `0 ≤ τ ≤ τ₀`.
    Collar { s: f64, tau: f64 },
    /// `τ > τ₀`; `(s, τ)` is still the nearest-point projection.
    DeepInterior { s: f64, tau: f64 },
    /// `τ < 0`.
    Exterior { s: f64, tau: f64 },
}

impl Location {
    pub fn coords(&self) -> (f64, f64) {
        match *self {
            Location::Collar { s, tau } | Location::DeepInterior { s, tau } | Location::Exterior { s, tau } => (s, tau),
        }
    }

    pub fn is_exterior(&self) -> bool {
        matches!(self, Location::Exterior { .. })
    }
}

#[derive(Debug, Clone)]
pub struct DomainCurve {
    spec: CurveSpec,
    arc: ArcLength,
    grid: PeriodicGrid,
    params: Vec<f64>,
    points: Vec<Point>,
    tangents: Vec<Point>,
    normals: Vec<Point>,
    curvature: Vec<f64>,
    collar_depth: f64,
    max_curvature: f64,
    inner_radius: f64,
    outer_radius: f64,
}

fn frame_from_jet(s: f64, j: Jet) -> BoundaryFrame {
    let speed = j.d1[0].hypot(j.d1[1]);
    let tangent = [j.d1[0] / speed, j.d1[1] / speed];
    let cross = j.d1[0] * j.d2[1] - j.d1[1] * j.d2[0];
    BoundaryFrame {
        s,
        point: j.p,
        tangent,
        normal: [-tangent[1], tangent[0]],
        curvature: cross / speed.powi(3),
    }
}

impl DomainCurve {
    /// Builds the curve on `grid_size` arc-length nodes (a power of two,
    /// at least 16).  The collar depth is `min(0.5 / max|κ|, collar_cap)`.
    pub fn new(spec: CurveSpec, grid_size: usize, collar_cap: f64) -> Result<Self> {
        spec.validate()?;
        if !grid_size.is_power_of_two() || grid_size < 16 {
            return Err(Error::Curve(format!("grid size {grid_size} must be a power of two and at least 16")));
        }
        if !(collar_cap > 0.0) {
            return Err(Error::Curve(format!("collar cap {collar_cap} must be positive")));
        }
        let arc = ArcLength::new(&spec)?;
        let grid = PeriodicGrid::new(grid_size, arc.total());
        let mut curve = DomainCurve {
            spec,
            arc,
            grid,
            params: Vec::with_capacity(grid_size),
            points: Vec::with_capacity(grid_size),
            tangents: Vec::with_capacity(grid_size),
            normals: Vec::with_capacity(grid_size),
            curvature: Vec::with_capacity(grid_size),
            collar_depth: 0.0,
            max_curvature: 0.0,
            inner_radius: 0.0,
            outer_radius: 0.0,
        };
        for m in 0..grid_size {
            let s = curve.grid.node(m);
            let t = curve.param_of(s);
            let f = frame_from_jet(s, curve.spec.jet(t));
            curve.params.push(t);
            curve.points.push(f.point);
            curve.tangents.push(f.tangent);
            curve.normals.push(f.normal);
            curve.curvature.push(f.curvature);
        }
        // Star-shapedness about the origin: the position vector is never tangent.
        let dense = 8 * grid_size;
        let (mut rin, mut rout) = (f64::INFINITY, 0.0f64);
        for i in 0..dense {
            let t = TAU * i as f64 / dense as f64;
            let j = curve.spec.jet(t);
            if j.p[0] * j.d1[1] - j.p[1] * j.d1[0] <= 0.0 {
                return Err(Error::Curve(
                    "curve is not star-shaped about the origin (or not counter-clockwise)".into(),
                ));
            }
            let r = j.p[0].hypot(j.p[1]);
            rin = rin.min(r);
            rout = rout.max(r);
        }
        // Guard the dense sampling of the polar extremes.
        curve.inner_radius = rin * (1.0 - 1e-6);
        curve.outer_radius = rout * (1.0 + 1e-6);
        curve.max_curvature = curve.curvature.iter().fold(0.0f64, |a, k| a.max(k.abs()));
        curve.collar_depth = (0.5 / curve.max_curvature).min(collar_cap);
        if curve.collar_depth * curve.max_curvature >= 1.0 {
            return Err(Error::Collar {
                depth: curve.collar_depth,
                max_curvature: curve.max_curvature,
            });
        }
        curve.check_collar_injective()?;
        Ok(curve)
    }

    /// Every grid normal segment of length τ₀ must project back onto its foot.
    fn check_collar_injective(&self) -> Result<()> {
        let tau = self.collar_depth;
        for m in 0..self.len() {
            let x = self.collar_point_unchecked(self.grid.node(m), tau);
            let (s, t) = self.project(x);
            let ds = self.arc_distance(s, self.grid.node(m));
            if ds > 1e-6 * self.length() || (t - tau).abs() > 1e-6 {
                return Err(Error::Collar {
                    depth: tau,
                    max_curvature: self.max_curvature,
                });
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.grid.length()
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.grid.nodes()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn tangents(&self) -> &[Point] {
        &self.tangents
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn curvature(&self) -> &[f64] {
        &self.curvature
    }

    /// Native parameter of each grid node.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn collar_depth(&self) -> f64 {
        self.collar_depth
    }

    pub fn max_curvature(&self) -> f64 {
        self.max_curvature
    }

    /// Radius of a disk about the origin contained in the domain.
    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    /// Radius of a disk about the origin containing the domain.
    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn radial_extent(&self, phi: f64) -> f64 {
        self.spec.radial_extent(phi)
    }

    /// Closed-form curvature extremes over the grid `(min, max)`.
    pub fn curvature_range(&self) -> (f64, f64) {
        self.curvature
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| (lo.min(k), hi.max(k)))
    }

    /// Enclosed area by Green's theorem, `½∮ x × T ds`.
    pub fn area(&self) -> f64 {
        let f: Vec<f64> = self
            .points
            .iter()
            .zip(&self.tangents)
            .map(|(p, t)| 0.5 * (p[0] * t[1] - p[1] * t[0]))
            .collect();
        self.grid.integrate(&f)
    }

    fn wrap(&self, s: f64) -> f64 {
        s.rem_euclid(self.length())
    }

    /// Periodic distance between two arc-length positions.
    pub fn arc_distance(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(self.length());
        d.min(self.length() - d)
    }

    /// Native parameter at arc length `s`.
    pub fn param_of(&self, s: f64) -> f64 {
        let s = self.wrap(s);
        let total = self.arc.total();
        let mut t = TAU * s / total;
        for _ in 0..60 {
            let j = self.spec.jet(t);
            let f = self.arc.s_of_t(t) - s;
            let dt = f / j.d1[0].hypot(j.d1[1]);
            t -= dt;
            if dt.abs() < 1e-15 * TAU {
                break;
            }
        }
        t
    }

    pub fn frame(&self, s: f64) -> BoundaryFrame {
        let s = self.wrap(s);
        frame_from_jet(s, self.spec.jet(self.param_of(s)))
    }

    fn collar_point_unchecked(&self, s: f64, tau: f64) -> Point {
        let f = self.frame(s);
        [f.point[0] + tau * f.normal[0], f.point[1] + tau * f.normal[1]]
    }

    /// `x(s) + τν(s)` for `0 ≤ τ ≤ τ₀`.
    pub fn collar_point(&self, s: f64, tau: f64) -> Result<Point> {
        if !(-BOUNDARY_TOL..=self.collar_depth + BOUNDARY_TOL).contains(&tau) {
            return Err(Error::Range {
                what: "collar depth tau",
                value: tau,
                lo: 0.0,
                hi: self.collar_depth,
            });
        }
        Ok(self.collar_point_unchecked(s, tau.max(0.0)))
    }

    /// Nearest boundary point `(s, τ)` with `τ` signed along the inward normal.
    fn project(&self, x: Point) -> (f64, f64) {
        let (m0, _) = self
            .points
            .iter()
            .map(|p| (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2))
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty grid");
        let h = self.grid.spacing();
        let seed = self.grid.node(m0);
        let s = self.newton_projection(x, seed, h).unwrap_or_else(|| self.golden_projection(x, seed, h));
        let f = self.frame(s);
        let tau = (x[0] - f.point[0]) * f.normal[0] + (x[1] - f.point[1]) * f.normal[1];
        (self.wrap(s), if tau.abs() <= BOUNDARY_TOL { 0.0 } else { tau })
    }

    /// Newton on `g(s) = (x(s) − x)·T(s)`, `g' = 1 + κ (x(s) − x)·ν`,
    /// confined to one grid cell either side of the seed.
    fn newton_projection(&self, x: Point, seed: f64, h: f64) -> Option<f64> {
        let mut s = seed;
        for _ in 0..40 {
            let f = self.frame(s);
            let d = [f.point[0] - x[0], f.point[1] - x[1]];
            let g = d[0] * f.tangent[0] + d[1] * f.tangent[1];
            let gp = 1.0 + f.curvature * (d[0] * f.normal[0] + d[1] * f.normal[1]);
            if gp < 0.05 {
                return None;
            }
            let step = g / gp;
            s -= step;
            if (s - seed).abs() > 1.5 * h {
                return None;
            }
            if step.abs() < 1e-14 * self.length().max(1.0) {
                return Some(s);
            }
        }
        None
    }

    /// Golden-section minimization of the squared distance near the seed.
    fn golden_projection(&self, x: Point, seed: f64, h: f64) -> f64 {
        let dist2 = |s: f64| {
            let f = self.frame(s);
            (f.point[0] - x[0]).powi(2) + (f.point[1] - x[1]).powi(2)
        };
        let gr = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (seed - 1.5 * h, seed + 1.5 * h);
        let mut c = b - gr * (b - a);
        let mut d = a + gr * (b - a);
        let (mut fc, mut fd) = (dist2(c), dist2(d));
        for _ in 0..200 {
            if (b - a).abs() < 1e-15 * self.length() {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = dist2(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = dist2(d);
            }
        }
        0.5 * (a + b)
    }

    /// Nearest-boundary projection classified against the collar depth.
    pub fn locate_in_collar(&self, x: Point) -> Location {
        let (s, tau) = self.project(x);
        if tau < 0.0 {
            Location::Exterior { s, tau }
        } else if tau > self.collar_depth + BOUNDARY_TOL {
            Location::DeepInterior { s, tau }
        } else {
            Location::Collar { s, tau }
        }
    }

    /// Cheap inside test: `Some(true)` inside the inscribed disk,
    /// `Some(false)` outside the circumscribed one, `None` in between.
    pub fn bounding_test(&self, x: Point) -> Option<bool> {
        let r2 = x[0] * x[0] + x[1] * x[1];
        if r2 < self.inner_radius * self.inner_radius {
            Some(true)
        } else if r2 > self.outer_radius * self.outer_radius {
            Some(false)
        } else {
            None
        }
    }

    pub fn contains(&self, x: Point) -> bool {
        self.bounding_test(x).unwrap_or_else(|| self.spec.contains(x))
    }

    /// Curvature from spectral differentiation of the unwrapped tangent angle.
    pub fn spectral_curvature(&self) -> Vec<f64> {
        let n = self.len();
        let mut angle = Vec::with_capacity(n);
        let mut prev = self.tangents[0][1].atan2(self.tangents[0][0]);
        for t in &self.tangents {
            let mut a = t[1].atan2(t[0]);
            while a - prev > PI {
                a -= TAU;
            }
            while a - prev < -PI {
                a += TAU;
            }
            angle.push(a);
            prev = a;
        }
        let slope = TAU / self.length();
        let periodic: Vec<f64> = angle
            .iter()
            .enumerate()
            .map(|(m, a)| a - slope * self.grid.node(m))
            .collect();
        self.grid.derivative(&periodic).into_iter().map(|d| d + slope).collect()
    }

    pub fn metric_taylor(&self, order: usize) -> Result<MetricTaylor> {
        MetricTaylor::new(self, order)
    }
}

/// Taylor coefficients in `τ` of `ln J` and `L = J^{-2}`, `J = 1 − τκ`.
#[derive(Debug, Clone, Serialize)]
pub struct MetricTaylor {
    /// `theta_big[j][m]`, `j = 0..=order`.
    pub theta_big: Vec<Vec<f64>>,
    /// `ell[j][m]`, `j = 0..=order`.
    pub ell: Vec<Vec<f64>>,
}

impl MetricTaylor {
    pub fn new(curve: &DomainCurve, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::Range {
                what: "metric Taylor order",
                value: order as f64,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        let k = curve.curvature();
        let theta_big = (0..=order)
            .map(|j| {
                k.iter()
                    .map(|&kk| if j == 0 { 0.0 } else { -kk.powi(j as i32) / j as f64 })
                    .collect()
            })
            .collect();
        let ell = (0..=order)
            .map(|j| k.iter().map(|&kk| (j + 1) as f64 * kk.powi(j as i32)).collect())
            .collect();
        Ok(MetricTaylor { theta_big, ell })
    }

    pub fn order(&self) -> usize {
        self.ell.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse() -> DomainCurve {
        DomainCurve::new(CurveSpec::Ellipse { a: 2.0, b: 1.0 }, 256, 1.0).unwrap()
    }

    #[test]
    fn circle_basics() {
        let c = DomainCurve::new(CurveSpec::Circle { radius: 2.0 }, 64, 1.0).unwrap();
        assert!((c.length() - 4.0 * PI).abs() < 1e-13);
        assert!(c.curvature().iter().all(|k| (k - 0.5).abs() < 1e-14));
        assert!((c.area() - 4.0 * PI).abs() < 1e-12);
        assert!((c.collar_depth() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ellipse_vertex_curvature_and_normals() {
        let e = ellipse();
        assert!((e.curvature()[0] - 2.0).abs() < 1e-12);
        assert!(e.normals().iter().all(|n| (n[0].hypot(n[1]) - 1.0).abs() < 1e-12));
        let quarter = e.length() / 4.0;
        let f = e.frame(quarter);
        assert!(f.point[0].abs() < 1e-12 && (f.point[1] - 1.0).abs() < 1e-12);
        let x = e.collar_point(quarter, 0.1).unwrap();
        assert!(x[0].abs() < 1e-12 && (x[1] - 0.9).abs() < 1e-12);
        assert_eq!(e.collar_depth(), 0.25);
    }

    #[test]
    fn projection_classification() {
        let c = DomainCurve::new(CurveSpec::Circle { radius: 1.0 }, 64, 0.5).unwrap();
        match c.locate_in_collar([0.5, 0.0]) {
            Location::Collar { s, tau } => {
                assert!(c.arc_distance(s, 0.0) < 1e-12);
                assert!((tau - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(c.locate_in_collar([1.2, 0.0]).is_exterior());
        assert!(matches!(c.locate_in_collar([0.1, 0.2]), Location::DeepInterior { .. }));
        let e = ellipse();
        let (s, tau) = e.locate_in_collar([0.0, 0.95]).coords();
        assert!((tau - 0.05).abs() < 1e-12);
        assert!(e.arc_distance(s, e.length() / 4.0) < 1e-10);
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(DomainCurve::new(CurveSpec::Circle { radius: -1.0 }, 64, 0.5).is_err());
        let crossing = CurveSpec::FourierStar {
            mean: 1.0,
            cos: vec![1.5],
            sin: vec![],
        };
        assert!(DomainCurve::new(crossing, 64, 0.5).is_err());
        assert!(DomainCurve::new(CurveSpec::Circle { radius: 1.0 }, 100, 0.5).is_err());
    }

    #[test]
    fn metric_closed_forms() {
        let c = DomainCurve::new(CurveSpec::Circle { radius: 1.0 }, 32, 0.5).unwrap();
        let m = c.metric_taylor(3).unwrap();
        assert_eq!(m.theta_big[0][0], 0.0);
        assert_eq!(m.theta_big[1][3], -1.0);
        assert_eq!(m.theta_big[2][3], -0.5);
        assert_eq!(m.ell[0][7], 1.0);
        assert_eq!(m.ell[1][7], 2.0);
        assert!(c.metric_taylor(0).is_err());
    }
}
