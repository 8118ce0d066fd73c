//! Orchestration of a configured run and the report it produces.
//!
//! Every subcommand emits the same [`RunReport`] shape; stages that a
//! subcommand does not execute are present as `skipped` with a reason.

use crate::asym::{Cutoff, Expansion, ExpansionSummary, MaxExitTime, Problem};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::geometry::{CurveSpec, Point};
use crate::logspace::LogValue;
use crate::potential::{AssumptionReport, Monomial};
use crate::validate::{self, McResult, RadialEigen, RadialProfile};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subcommand {
    Inspect,
    Expand,
    Evaluate,
    Validate,
    Report,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Inspect => "inspect",
            Subcommand::Expand => "expand",
            Subcommand::Evaluate => "evaluate",
            Subcommand::Validate => "validate",
            Subcommand::Report => "report",
        }
    }

    fn expands(self) -> bool {
        matches!(self, Subcommand::Expand | Subcommand::Report)
    }

    fn evaluates(self) -> bool {
        matches!(self, Subcommand::Evaluate | Subcommand::Report)
    }

    fn validates(self) -> bool {
        matches!(self, Subcommand::Validate | Subcommand::Report)
    }
}

/// Outcome of one stage of the pipeline.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Stage<T> {
    Ok { value: T },
    Skipped { reason: String },
    Failed { error: String, exit_code: i32 },
}

impl<T> Stage<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(value) => Stage::Ok { value },
            Err(e) => Stage::Failed {
                exit_code: e.exit_code(),
                error: e.to_string(),
            },
        }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Stage::Skipped { reason: reason.into() }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Stage::Ok { value } => Some(value),
            _ => None,
        }
    }

    fn failure_code(&self) -> Option<i32> {
        match self {
            Stage::Failed { exit_code, .. } => Some(*exit_code),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometryInfo {
    pub spec: CurveSpec,
    pub grid_size: usize,
    pub length: f64,
    pub area: f64,
    pub collar_depth: f64,
    pub curvature_min: f64,
    pub curvature_max: f64,
    /// `∮κ ds`, equal to `2π` for a simple closed curve.
    pub total_curvature: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialInfo {
    pub origin_degree: u32,
    pub v0: Vec<Monomial>,
    pub v1: Vec<Monomial>,
    pub v0_angular_min: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceInfo {
    pub theta_min: f64,
    pub theta_min_s: f64,
    pub theta0_max: f64,
    pub theta1_min: f64,
    pub theta1_max: f64,
    pub c2: f64,
    pub c2_boundary: f64,
    pub delta_bound: f64,
    pub cutoff: Cutoff,
}

#[derive(Debug, Clone, Serialize)]
pub struct InspectReport {
    pub geometry: GeometryInfo,
    pub potential: PotentialInfo,
    pub assumptions: AssumptionReport,
    pub traces: TraceInfo,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerInfo {
    pub order: usize,
    pub phi_degrees: Vec<usize>,
    pub u_degrees: Vec<usize>,
    /// `∂_ζΦ_j(0, s)` at `s = 0`, `j = 0..=N`.
    pub phi_slopes_at_s0: Vec<f64>,
    pub u_slopes_at_s0: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeValue {
    pub x: Point,
    pub psi: Option<f64>,
    pub u: Option<LogValue>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Torsional {
    pub formula: LogValue,
    pub direct: Stage<f64>,
    /// Direct quadrature with `χ ≡ 1`, which the formula implicitly assumes.
    pub direct_no_cutoff: Stage<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QsdCheck {
    pub normalizer: f64,
    pub volume: f64,
    pub relative_gap: f64,
    pub total_mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExitLaw {
    pub s: Vec<f64>,
    pub density: Vec<f64>,
    pub integral: f64,
    /// Mass on `{θ₀ < θ_min + ε²}`.
    pub band_mass: f64,
    pub negative_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerOrder {
    pub order: usize,
    pub lambda: LogValue,
    pub k: LogValue,
    pub u_first_probe: Option<LogValue>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsEntry {
    pub eps: f64,
    pub scalars: ExpansionSummary,
    /// `λ_ε K^(exp) − 1`.
    pub identity_defect: f64,
    pub lower_orders: Vec<LowerOrder>,
    pub probes: Vec<ProbeValue>,
    pub max_exit_time: Stage<MaxExitTime>,
    pub torsional: Stage<Torsional>,
    pub qsd: Stage<QsdCheck>,
    pub exit_law: ExitLaw,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialBvpSummary {
    pub intervals: usize,
    pub u0: f64,
    pub exact_u0: Option<f64>,
    pub nodes_in_layer: usize,
    pub monotone: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialEigenSummary {
    pub intervals: usize,
    pub lambda: f64,
    pub rayleigh: f64,
    pub iterations: usize,
}

impl From<&RadialEigen> for RadialEigenSummary {
    fn from(e: &RadialEigen) -> Self {
        RadialEigenSummary {
            intervals: e.intervals,
            lambda: e.lambda,
            rayleigh: e.rayleigh,
            iterations: e.iterations,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationEntry {
    pub eps: f64,
    pub radial_bvp: Stage<RadialBvpSummary>,
    pub radial_eigen: Stage<RadialEigenSummary>,
    pub monte_carlo: Stage<McResult>,
}

/// One asymptotic-versus-oracle row.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub name: String,
    pub eps: f64,
    pub asymptotic: f64,
    pub oracle: f64,
    pub relative_error: f64,
    /// Relative tolerance applied.
    pub tolerance: f64,
    pub pass: bool,
}

impl Comparison {
    fn new(name: &str, eps: f64, asymptotic: f64, oracle: f64, tolerance: f64) -> Self {
        let relative_error = ((asymptotic - oracle) / oracle).abs();
        Comparison {
            name: name.to_string(),
            eps,
            asymptotic,
            oracle,
            relative_error,
            tolerance,
            pass: relative_error <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub grid_size: usize,
    pub order: usize,
    pub bvp_intervals: usize,
    pub eigen_intervals: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    pub subcommand: Subcommand,
    pub config: RunConfig,
    pub provenance: Provenance,
    pub inspect: Stage<InspectReport>,
    pub layers: Stage<LayerInfo>,
    pub entries: Stage<Vec<Stage<EpsEntry>>>,
    pub validation: Stage<Vec<ValidationEntry>>,
    pub comparisons: Vec<Comparison>,
}

impl RunReport {
    /// `0`, or the exit code of the first failed stage.
    pub fn exit_code(&self) -> i32 {
        let mut codes = vec![
            self.inspect.failure_code(),
            self.layers.failure_code(),
            self.entries.failure_code(),
            self.validation.failure_code(),
        ];
        if let Some(es) = self.entries.value() {
            codes.extend(es.iter().map(Stage::failure_code));
        }
        if let Some(vs) = self.validation.value() {
            for v in vs {
                codes.push(v.radial_bvp.failure_code());
                codes.push(v.radial_eigen.failure_code());
                codes.push(v.monte_carlo.failure_code());
            }
        }
        codes.into_iter().flatten().next().unwrap_or(0)
    }
}

/// Report plus the CSV tables that go next to it.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub tables: Vec<(String, Vec<Vec<String>>)>,
}

fn inspect_report(problem: &Problem) -> InspectReport {
    let curve = problem.curve();
    let pot = problem.potential();
    let tr = problem.traces();
    let (kmin, kmax) = curve.curvature_range();
    let range = |v: &[f64]| {
        v.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)))
    };
    let (_, th0max) = range(&tr.theta[0]);
    let (t1min, t1max) = range(&tr.theta[1]);
    InspectReport {
        geometry: GeometryInfo {
            spec: curve.spec().clone(),
            grid_size: curve.len(),
            length: curve.length(),
            area: curve.area(),
            collar_depth: curve.collar_depth(),
            curvature_min: kmin,
            curvature_max: kmax,
            total_curvature: curve.grid().integrate(curve.curvature()),
            inner_radius: curve.inner_radius(),
            outer_radius: curve.outer_radius(),
        },
        potential: PotentialInfo {
            origin_degree: pot.origin_degree(),
            v0: pot.v0().terms().to_vec(),
            v1: pot.v1().terms().to_vec(),
            v0_angular_min: pot.v0_angular_min(),
        },
        assumptions: problem.assumptions().clone(),
        traces: TraceInfo {
            theta_min: tr.theta_min,
            theta_min_s: tr.theta_min_s,
            theta0_max: th0max,
            theta1_min: t1min,
            theta1_max: t1max,
            c2: tr.c2,
            c2_boundary: tr.c2_boundary,
            delta_bound: Cutoff::delta_bound(curve, tr),
            cutoff: problem.cutoff(),
        },
    }
}

fn layer_info(problem: &Problem) -> LayerInfo {
    let l = problem.layers();
    LayerInfo {
        order: l.order(),
        phi_degrees: l.phis().iter().map(|p| p.degree()).collect(),
        u_degrees: l.us().iter().map(|p| p.degree()).collect(),
        phi_slopes_at_s0: l.phis().iter().map(|p| p.slope_at_zero()[0]).collect(),
        u_slopes_at_s0: l.us().iter().map(|p| p.slope_at_zero()[0]).collect(),
    }
}

fn eps_entry(cfg: &RunConfig, ex: &Expansion<'_>) -> Result<EpsEntry> {
    let eps = ex.eps();
    let probes: Vec<ProbeValue> = cfg
        .run
        .probes
        .iter()
        .map(|&x| match (ex.eigenfunction(x), ex.mean_exit_time(x)) {
            (Ok(psi), Ok(u)) => ProbeValue {
                x,
                psi: Some(psi),
                u: Some(u),
                error: None,
            },
            (Err(e), _) | (_, Err(e)) => ProbeValue {
                x,
                psi: None,
                u: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let lower_orders = (0..ex.order())
        .map(|n| -> Result<LowerOrder> {
            let t = ex.truncated(n)?;
            let u_first_probe = cfg.run.probes.first().map(|&x| t.mean_exit_time(x)).transpose().ok().flatten();
            Ok(LowerOrder {
                order: n,
                lambda: t.lambda(),
                k: t.k(),
                u_first_probe,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let torsional = Stage::from_result(ex.torsional_rigidity().map(|formula| Torsional {
        formula,
        direct: if cfg.run.torsional_direct {
            Stage::from_result(ex.torsional_rigidity_direct())
        } else {
            Stage::skipped("run.torsional_direct = false")
        },
        direct_no_cutoff: if cfg.run.torsional_direct {
            Stage::from_result(ex.with_cutoff(Cutoff::none()).torsional_rigidity_direct())
        } else {
            Stage::skipped("run.torsional_direct = false")
        },
    }));
    let qsd = if cfg.run.qsd {
        Stage::from_result((|| {
            let normalizer = ex.qsd_normalizer()?;
            let volume = ex.table().volume;
            Ok(QsdCheck {
                normalizer,
                volume,
                relative_gap: (normalizer - volume).abs() / volume,
                total_mass: ex.qsd_total_mass(normalizer)?,
            })
        })())
    } else {
        Stage::skipped("run.qsd = false")
    };
    let grid = ex.problem().curve().grid();
    let density = ex.exit_law_density();
    let exit_law = ExitLaw {
        s: grid.nodes(),
        integral: grid.integrate(&density),
        band_mass: ex.exit_law_band_mass(eps * eps),
        negative_samples: density.iter().filter(|d| **d < 0.0).count(),
        density,
    };
    let g = cfg.run.max_grid;
    Ok(EpsEntry {
        eps,
        identity_defect: (ex.lambda() * ex.k_exp()).to_f64_lossy() - 1.0,
        scalars: ex.summary(),
        lower_orders,
        probes,
        max_exit_time: Stage::from_result(ex.max_exit_time(g, g)),
        torsional,
        qsd,
        exit_law,
    })
}

fn radial_setting(cfg: &RunConfig) -> std::result::Result<(RadialProfile, f64), String> {
    let profile = RadialProfile::from_spec(&cfg.potential)
        .ok_or_else(|| "the radial oracles need a rotation-invariant potential".to_string())?;
    match cfg.domain {
        CurveSpec::Circle { radius } => Ok((profile, radius)),
        _ => Err("the radial oracles need a circular domain".to_string()),
    }
}

fn validation_entry(cfg: &RunConfig, problem: &Problem, eps: f64) -> ValidationEntry {
    let radial = radial_setting(cfg);
    let v = &cfg.validate;
    let radial_bvp = match (&radial, v.radial_bvp) {
        (_, false) => Stage::skipped("validate.radial_bvp = false"),
        (Err(r), _) => Stage::skipped(r.clone()),
        (Ok((p, radius)), true) => Stage::from_result(validate::radial_bvp(*p, *radius, eps, v.bvp_intervals).map(|s| {
            RadialBvpSummary {
                intervals: v.bvp_intervals,
                u0: s.u0,
                exact_u0: s.exact_u0,
                nodes_in_layer: s.nodes_in_layer,
                monotone: s.monotone,
            }
        })),
    };
    let radial_eigen = match (&radial, v.radial_eigen) {
        (_, false) => Stage::skipped("validate.radial_eigen = false"),
        (Err(r), _) => Stage::skipped(r.clone()),
        (Ok((p, radius)), true) => Stage::from_result(
            validate::radial_eigen(*p, *radius, eps, v.eigen_intervals).map(|e| RadialEigenSummary::from(&e)),
        ),
    };
    let mc = &cfg.monte_carlo;
    let monte_carlo = if !v.monte_carlo {
        Stage::skipped("validate.monte_carlo = false")
    } else if eps < mc.min_eps {
        Stage::skipped(format!("eps = {eps} is below monte_carlo.min_eps = {}", mc.min_eps))
    } else {
        Stage::from_result(validate::mc_exit(problem.potential(), problem.curve(), eps, mc.x0, &mc.options()))
    };
    ValidationEntry {
        eps,
        radial_bvp,
        radial_eigen,
        monte_carlo,
    }
}

fn comparisons(cfg: &RunConfig, entries: &Stage<Vec<Stage<EpsEntry>>>, validation: &Stage<Vec<ValidationEntry>>) -> Vec<Comparison> {
    let mut out = Vec::new();
    let Some(es) = entries.value() else {
        return out;
    };
    let vs = validation.value();
    for (i, e) in es.iter().enumerate() {
        let Some(e) = e.value() else { continue };
        let eps = e.eps;
        out.push(Comparison {
            name: "lambda * K_exp = 1".into(),
            eps,
            asymptotic: 1.0 + e.identity_defect,
            oracle: 1.0,
            relative_error: e.identity_defect.abs(),
            tolerance: 1e-14,
            pass: e.identity_defect.abs() <= 1e-14,
        });
        out.push(Comparison::new("exit law total mass", eps, e.exit_law.integral, 1.0, 1e-12));
        if let Some(q) = e.qsd.value() {
            out.push(Comparison::new("qsd total mass", eps, q.total_mass, 1.0, 1e-6));
        }
        if let Some(t) = e.torsional.value() {
            if let (Some(f), Some(d)) = (t.formula.to_f64(), t.direct.value()) {
                out.push(Comparison::new("torsional formula vs direct quadrature", eps, f, *d, 0.01));
            }
            if let (Some(f), Some(d)) = (t.formula.to_f64(), t.direct_no_cutoff.value()) {
                out.push(Comparison::new("torsional formula vs direct quadrature (no cutoff)", eps, f, *d, 0.01));
            }
        }
        let origin = cfg.run.probes.iter().position(|p| *p == [0.0, 0.0]);
        let u_origin = origin.and_then(|k| e.probes[k].u).and_then(|u| u.to_f64());
        let Some(v) = vs.and_then(|vs| vs.get(i)) else { continue };
        if let (Some(b), Some(u)) = (v.radial_bvp.value(), u_origin) {
            if let Some(exact) = b.exact_u0 {
                out.push(Comparison::new("u(0) vs exact radial solution", eps, u, exact, 0.1));
                out.push(Comparison::new("finite-volume u(0) vs exact radial solution", eps, b.u0, exact, 1e-6));
            } else {
                out.push(Comparison::new("u(0) vs finite-volume radial solution", eps, u, b.u0, 0.1));
            }
        }
        if let (Some(ev), Some(l)) = (v.radial_eigen.value(), e.scalars.lambda.to_f64()) {
            out.push(Comparison::new("lambda vs discrete eigenvalue", eps, l, ev.lambda, 0.2));
        }
        if let Some(mc) = v.monte_carlo.value() {
            let m = mc.extrapolated.mean;
            let se = mc.extrapolated.std_error;
            if let Some(b) = v.radial_bvp.value().filter(|_| cfg.monte_carlo.x0 == [0.0, 0.0]) {
                let exact = b.exact_u0.unwrap_or(b.u0);
                out.push(Comparison::new("Monte Carlo mean vs radial solution (3 SE)", eps, m, exact, 3.0 * se / exact));
            }
            let x0 = cfg.monte_carlo.x0;
            if let Some(pos) = cfg.run.probes.iter().position(|p| *p == x0) {
                if let Some(u) = e.probes[pos].u.and_then(|u| u.to_f64()) {
                    out.push(Comparison::new("u(x0) vs Monte Carlo mean", eps, u, m, (3.0 * se / m).max(0.15)));
                }
            }
        }
    }
    out
}

/// Runs the stages of `sub` for `cfg`.  Configuration and assumption
/// failures abort; failures at a single `ε` are recorded in the report.
pub fn run(cfg: &RunConfig, sub: Subcommand) -> Result<RunOutput> {
    cfg.check()?;
    let problem = Problem::build(cfg.domain.clone(), cfg.potential.clone(), cfg.expansion.clone())?;
    for p in &cfg.run.probes {
        if problem.curve().bounding_test(*p) == Some(false) || problem.curve().locate_in_collar(*p).coords().1 < -1e-12 {
            return Err(Error::Config(format!("probe point ({}, {}) lies outside the domain", p[0], p[1])));
        }
    }
    let mut tables = Vec::new();
    let inspect = Stage::Ok {
        value: inspect_report(&problem),
    };
    let layers = if sub.expands() || sub.evaluates() {
        if sub.expands() && cfg.output.csv {
            tables.push(("layers.csv".to_string(), layer_table(&problem)));
        }
        Stage::Ok {
            value: layer_info(&problem),
        }
    } else {
        Stage::skipped(format!("not computed by `{}`", sub.name()))
    };
    let entries = if sub.evaluates() {
        let es: Vec<Stage<EpsEntry>> = cfg
            .run
            .eps
            .par_iter()
            .map(|&eps| Stage::from_result(problem.expansion(eps).and_then(|ex| eps_entry(cfg, &ex))))
            .collect();
        if cfg.output.csv {
            tables.push(("scalars.csv".to_string(), scalar_table(&es)));
            tables.push(("exit_law.csv".to_string(), exit_law_table(&problem, &es)));
        }
        Stage::Ok { value: es }
    } else {
        Stage::skipped(format!("not computed by `{}`", sub.name()))
    };
    let validation = if sub.validates() {
        Stage::Ok {
            value: cfg.run.eps.iter().map(|&eps| validation_entry(cfg, &problem, eps)).collect(),
        }
    } else {
        Stage::skipped(format!("not computed by `{}`", sub.name()))
    };
    let comparisons = comparisons(cfg, &entries, &validation);
    Ok(RunOutput {
        report: RunReport {
            tool: ToolInfo {
                name: "exitwell",
                version: env!("CARGO_PKG_VERSION"),
            },
            subcommand: sub,
            config: cfg.clone(),
            provenance: Provenance {
                seed: cfg.monte_carlo.seed,
                grid_size: cfg.expansion.grid_size,
                order: cfg.expansion.order,
                bvp_intervals: cfg.validate.bvp_intervals,
                eigen_intervals: cfg.validate.eigen_intervals,
            },
            inspect,
            layers,
            entries,
            validation,
            comparisons,
        },
        tables,
    })
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

fn layer_table(problem: &Problem) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["layer", "j", "power", "s", "coefficient"]
        .into_iter()
        .map(String::from)
        .collect()];
    let s = problem.curve().nodes();
    let l = problem.layers();
    let named = l
        .phis()
        .iter()
        .enumerate()
        .map(|(j, p)| ("phi", j, p))
        .chain(l.us().iter().enumerate().map(|(j, p)| ("u", j + 1, p)));
    for (name, j, p) in named {
        for (m, c) in p.coeffs().iter().enumerate() {
            for (q, v) in c.iter().enumerate() {
                rows.push(vec![name.to_string(), j.to_string(), m.to_string(), fmt(s[q]), fmt(*v)]);
            }
        }
    }
    rows
}

fn log_cols(v: LogValue) -> [String; 2] {
    [v.sign.to_string(), fmt(v.ln_abs)]
}

fn scalar_table(es: &[Stage<EpsEntry>]) -> Vec<Vec<String>> {
    let mut rows = vec![[
        "eps", "order", "lambda_sign", "lambda_ln", "k_exp_sign", "k_exp_ln", "k_pow_sign", "k_pow_ln", "k_sign", "k_ln",
    ]
    .into_iter()
    .map(String::from)
    .collect()];
    for e in es.iter().filter_map(Stage::value) {
        let s = &e.scalars;
        let mut row = vec![fmt(e.eps), s.order.to_string()];
        for v in [s.lambda, s.k_exp, s.k_pow, s.k] {
            row.extend(log_cols(v));
        }
        rows.push(row);
    }
    rows
}

fn exit_law_table(problem: &Problem, es: &[Stage<EpsEntry>]) -> Vec<Vec<String>> {
    let mut rows = vec![["eps", "s", "theta0", "density"].into_iter().map(String::from).collect()];
    let th0 = &problem.traces().theta[0];
    for e in es.iter().filter_map(Stage::value) {
        for (q, (s, d)) in e.exit_law.s.iter().zip(&e.exit_law.density).enumerate() {
            rows.push(vec![fmt(e.eps), fmt(*s), fmt(th0[q]), fmt(*d)]);
        }
    }
    rows
}

/// Writes `<subcommand>.json` and the CSV tables into `dir`.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let json = dir.join(format!("{}.json", out.report.subcommand.name()));
    let text = serde_json::to_string_pretty(&out.report).map_err(|e| Error::numerical(format!("report serialization: {e}")))?;
    std::fs::write(&json, text + "\n")?;
    written.push(json);
    for (name, rows) in &out.tables {
        let path = dir.join(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| Error::Io(e.into()))?;
        for r in rows {
            w.write_record(r).map_err(|e| Error::Io(e.into()))?;
        }
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

fn show(v: LogValue) -> String {
    match v.to_f64() {
        Some(x) => format!("{x:.6e}"),
        None => format!("{}exp({:.4})", if v.sign < 0 { "-" } else { "" }, v.ln_abs),
    }
}

/// Plain-text summary for standard output.
pub fn summary_text(report: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "exitwell {} ({})", report.tool.version, report.subcommand.name());
    if let Some(i) = report.inspect.value() {
        let g = &i.geometry;
        let _ = writeln!(
            s,
            "domain: length {:.6}, area {:.6}, curvature [{:.6}, {:.6}], collar depth {:.4}",
            g.length, g.area, g.curvature_min, g.curvature_max, g.collar_depth
        );
        let t = &i.traces;
        let _ = writeln!(
            s,
            "potential: degree {}, theta_min {:.6}, c2 {:.6} (boundary {:.6}), cutoff {:?}",
            i.potential.origin_degree, t.theta_min, t.c2, t.c2_boundary, t.cutoff
        );
        let a = &i.assumptions;
        let _ = writeln!(s, "assumptions: {}", if a.all_passed() { "all hold" } else { "VIOLATED" });
        for c in &a.checks {
            let _ = writeln!(s, "  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.assumption.describe(), c.detail);
        }
    }
    if let Some(l) = report.layers.value() {
        let _ = writeln!(s, "layers: order {}, Phi degrees {:?}, U degrees {:?}", l.order, l.phi_degrees, l.u_degrees);
    }
    if let Some(es) = report.entries.value() {
        let _ = writeln!(s, "{:>8} {:>14} {:>14} {:>14} {:>14} {:>14}", "eps", "lambda", "K_exp", "K_pow", "K", "u(probe 1)");
        for e in es {
            match e {
                Stage::Ok { value: e } => {
                    let u = e.probes.first().and_then(|p| p.u).map(show).unwrap_or_else(|| "-".into());
                    let sc = &e.scalars;
                    let _ = writeln!(
                        s,
                        "{:>8} {:>14} {:>14} {:>14} {:>14} {:>14}",
                        e.eps,
                        show(sc.lambda),
                        show(sc.k_exp),
                        show(sc.k_pow),
                        show(sc.k),
                        u
                    );
                    for f in &sc.flags {
                        let _ = writeln!(s, "         truncation flag ({}): {}", f.quantity, f.detail);
                    }
                }
                Stage::Failed { error, .. } => {
                    let _ = writeln!(s, "  entry failed: {error}");
                }
                Stage::Skipped { reason } => {
                    let _ = writeln!(s, "  entry skipped: {reason}");
                }
            }
        }
    }
    if !report.comparisons.is_empty() {
        let _ = writeln!(s, "comparisons:");
        for c in &report.comparisons {
            let _ = writeln!(
                s,
                "  [{}] eps {:<6} {}: {:.8e} vs {:.8e} (rel {:.2e}, tol {:.2e})",
                if c.pass { "pass" } else { "FAIL" },
                c.eps,
                c.name,
                c.asymptotic,
                c.oracle,
                c.relative_error,
                c.tolerance
            );
        }
    }
    s
}
