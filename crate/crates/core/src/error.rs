use thiserror::Error;

/// Standing assumptions on the potential and the domain that the expansion
/// relies on.  The display names are the ones used in reports and in the CLI
/// diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    /// `V(0) = 0`, `∇V(0) = 0`.
    CriticalPointAtOrigin,
    /// `V > 0` on the closed domain away from the origin.
    PositiveAwayFromOrigin,
    /// `|∇V| ≥ c₁ > 0` away from a small ball around the origin.
    NonvanishingGradient,
    /// `∂V/∂τ ≤ −c₂ < 0` on the boundary collar.
    InwardDescent,
    /// The leading homogeneous part `V₀` has degree `k ≥ 2` and `V₀(x) > 0` for `x ≠ 0`.
    OriginDegree,
    /// `V` must be smooth near the origin and on the collar.
    Smoothness,
}

impl Assumption {
    pub fn describe(self) -> &'static str {
        match self {
            Assumption::CriticalPointAtOrigin => "V(0) = 0 and grad V(0) = 0",
            Assumption::PositiveAwayFromOrigin => "V > 0 on the closed domain minus the origin",
            Assumption::NonvanishingGradient => "|grad V| >= c1 > 0 outside a ball around the origin",
            Assumption::InwardDescent => "dV/dtau <= -c2 < 0 on the boundary collar",
            Assumption::OriginDegree => "V0 homogeneous of degree k >= 2 with V0(x) > 0 for x != 0",
            Assumption::Smoothness => "V smooth near the origin and on the collar",
        }
    }
}

impl std::fmt::Display for Assumption {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    Curve(String),

    #[error("collar failure: depth {depth} times max curvature {max_curvature} must be below 1")]
    Collar { depth: f64, max_curvature: f64 },

    #[error("assumption violated ({assumption}): {detail}")]
    Assumption {
        assumption: Assumption,
        detail: String,
    },

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("point ({0}, {1}) lies outside the closed domain")]
    Exterior(f64, f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn assumption(assumption: Assumption, detail: impl Into<String>) -> Self {
        Error::Assumption {
            assumption,
            detail: detail.into(),
        }
    }

    /// Process exit status: 1 for bad input, 2 for a violated assumption,
    /// 3 for a numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Assumption { .. } => 2,
            Error::Numerical(_) => 3,
            Error::Curve(_) | Error::Collar { .. } | Error::Range { .. } | Error::Exterior(..) | Error::Config(_) | Error::Io(_) => 1,
        }
    }

    pub(crate) fn numerical(detail: impl Into<String>) -> Self {
        Error::Numerical(detail.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
