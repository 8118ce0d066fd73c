//! Run configuration, read from a TOML file.
//!
//! ```toml
//! [domain]
//! kind = "circle"
//! radius = 1.0
//!
//! [potential]
//! kind = "quadratic_form"
//! matrix = [[1.0, 0.0], [0.0, 1.0]]
//!
//! [expansion]
//! order = 4
//!
//! [run]
//! eps = [0.5, 0.4, 0.3]
//! probes = [[0.0, 0.0], [0.5, 0.0]]
//! ```

use crate::asym::ProblemOptions;
use crate::error::{Error, Result};
use crate::geometry::{CurveSpec, Point};
use crate::potential::PotentialSpec;
use crate::validate::McOptions;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable overriding `[output] dir`.
pub const OUT_DIR_ENV: &str = "EXITWELL_OUT";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: CurveSpec,
    pub potential: PotentialSpec,
    #[serde(default)]
    pub expansion: ProblemOptions,
    pub run: RunSection,
    #[serde(default)]
    pub validate: ValidateSection,
    #[serde(default)]
    pub monte_carlo: McSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Strictly decreasing, positive.
    pub eps: Vec<f64>,
    #[serde(default = "default_probes")]
    pub probes: Vec<Point>,
    /// Samples per direction for the grid maximum of `u_ε`.
    #[serde(default = "default_max_grid")]
    pub max_grid: usize,
    /// Compute the torsional rigidity by direct quadrature as well.
    #[serde(default = "yes")]
    pub torsional_direct: bool,
    /// Compute the quasi-stationary normalizer by quadrature.
    #[serde(default = "yes")]
    pub qsd: bool,
}

fn default_probes() -> Vec<Point> {
    vec![[0.0, 0.0]]
}

fn default_max_grid() -> usize {
    48
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateSection {
    pub radial_bvp: bool,
    pub radial_eigen: bool,
    pub monte_carlo: bool,
    pub bvp_intervals: usize,
    pub eigen_intervals: usize,
}

impl Default for ValidateSection {
    fn default() -> Self {
        ValidateSection {
            radial_bvp: true,
            radial_eigen: true,
            monte_carlo: false,
            bvp_intervals: 4096,
            eigen_intervals: 8192,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McSection {
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub step_budget: u64,
    pub bins: usize,
    /// Monte Carlo is skipped for smaller `ε`: exit times grow like `e^{θ_min/ε²}`.
    pub min_eps: f64,
    pub x0: Point,
}

impl Default for McSection {
    fn default() -> Self {
        McSection {
            dt: 1e-4,
            n_paths: 2000,
            seed: 20_240_601,
            step_budget: 50_000_000,
            bins: 36,
            min_eps: 0.3,
            x0: [0.0, 0.0],
        }
    }
}

impl McSection {
    pub fn options(&self) -> McOptions {
        McOptions {
            dt: self.dt,
            n_paths: self.n_paths,
            seed: self.seed,
            step_budget: self.step_budget,
            bins: self.bins,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Write CSV dumps of the layer coefficients and the exit law.
    pub csv: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("exitwell-out"),
            csv: true,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Field-level checks that need no geometry.
    pub fn check(&self) -> Result<()> {
        let eps = &self.run.eps;
        if eps.is_empty() {
            return Err(Error::Config("run.eps must list at least one value".into()));
        }
        if let Some(bad) = eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(Error::Config(format!("run.eps entries must be positive and finite, got {bad}")));
        }
        if let Some(w) = eps.windows(2).find(|w| w[1] >= w[0]) {
            return Err(Error::Config(format!(
                "run.eps must be strictly decreasing ({} is followed by {})",
                w[0], w[1]
            )));
        }
        let g = self.expansion.grid_size;
        if g < 16 || !g.is_power_of_two() {
            return Err(Error::Config(format!(
                "expansion.grid_size must be a power of two >= 16, got {g}"
            )));
        }
        if self.run.max_grid < 2 {
            return Err(Error::Config("run.max_grid must be at least 2".into()));
        }
        if self.validate.monte_carlo {
            self.monte_carlo.options().check()?;
        }
        Ok(())
    }

    /// Output directory after the environment override.
    pub fn out_dir(&self) -> PathBuf {
        std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| self.output.dir.clone())
    }
}
