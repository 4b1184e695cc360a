//! Experiment configuration: one TOML file describes the domain or synthetic
//! tail, the time grid, engine settings, and output paths; command-line
//! flags override individual file values.
//!
//! Every validation failure names the violated invariant and surfaces as a
//! [`ConfigError`], which the binary maps to exit code 2.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use anyhow::Result;
use ibm_exit::predictors::{ParabolaParams, ParabolaShape, TwistedParams};
use ibm_exit::spectra::SpectralDomain;
use ibm_exit::subordination::{CutoffRule, QuadratureConfig, TailLaw};
use serde::{Deserialize, Serialize};

/// Marker for invalid configuration; callers exit with status 2 when an
/// error chain contains one.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Builds a configuration error with the given invariant description.
pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(ConfigError(msg.into()))
}

/// Parameter validation done by the core library is configuration validation
/// from the binary's point of view; keep the core message, change the class.
pub fn core_invalid(err: ibm_exit::Error) -> anyhow::Error {
    invalid(err.to_string())
}

/// Which engines a `converge` study runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Quadrature,
    Montecarlo,
    Both,
}

/// Which time-changed process a domain run evaluates. A `[tail]` run is
/// always the Brownian-time process (that is what the tail-transfer integral
/// represents), so the field must be `btbm` or omitted there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Bm,
    Ibm,
    Btbm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    /// One `[low, high]` pair per axis.
    pub bounds: Vec<[f64; 2]>,
    /// Dirichlet modes kept per axis.
    #[serde(default = "default_modes")]
    pub modes: usize,
    /// Starting point, one coordinate per axis, strictly inside the domain.
    pub z: Vec<f64>,
}

fn default_modes() -> usize {
    48
}

impl DomainSection {
    pub fn build(&self) -> Result<(SpectralDomain, Vec<f64>)> {
        if self.bounds.is_empty() {
            return Err(invalid("domain.bounds needs at least one [low, high] axis"));
        }
        if self.z.len() != self.bounds.len() {
            return Err(invalid(format!(
                "domain.z has {} coordinates but domain.bounds has {} axes; they must match",
                self.z.len(),
                self.bounds.len()
            )));
        }
        if self.modes == 0 {
            return Err(invalid("domain.modes must be at least 1"));
        }
        let sides: Vec<(f64, f64)> = self.bounds.iter().map(|b| (b[0], b[1])).collect();
        let domain = SpectralDomain::box_domain(&sides, self.modes).map_err(core_invalid)?;
        if !domain.contains(&self.z) {
            return Err(invalid(format!(
                "domain.z = {:?} must lie strictly inside the open domain",
                self.z
            )));
        }
        Ok((domain, self.z.clone()))
    }
}

/// Synthetic outer exit tail `T(u) = P[τ > u]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TailSection {
    /// `T(u) = min(1, (a/λ)e^{−λu})`; `splice` overrides the continuous
    /// splice point `ln(a/λ)/λ`.
    Exponential {
        a: f64,
        lambda: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        splice: Option<f64>,
    },
    /// `T(u) = min(1, u^{−c})`.
    Polynomial { c: f64 },
    /// `log T(u) = −c·u(log u)^{−2/p}`.
    StretchedLog { c: f64, p: f64 },
    /// `log T(u) = −c·u^{(1−α)/(1+α)}(log u)^{−2β/(1+α)}`.
    AlgebraicLog { c: f64, alpha: f64, beta: f64 },
    /// `T(u) = 1` on `[0, u₀)`, then 0.
    BoundedSupport { u0: f64 },
}

impl TailSection {
    pub fn law(&self) -> Result<TailLaw> {
        match *self {
            Self::Exponential { a, lambda, splice: None } => TailLaw::exponential(a, lambda),
            Self::Exponential { a, lambda, splice: Some(u0) } => {
                TailLaw::exponential_with_splice(a, lambda, u0)
            }
            Self::Polynomial { c } => TailLaw::polynomial(c),
            Self::StretchedLog { c, p } => TailLaw::stretched_log(c, p),
            Self::AlgebraicLog { c, alpha, beta } => TailLaw::algebraic_log(c, alpha, beta),
            Self::BoundedSupport { u0 } => TailLaw::bounded_support(u0),
        }
        .map_err(core_invalid)
    }
}

/// Planar domain between `y = γ·x^{1/p}`-type curves (growth power `p ≤ 1`).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedSection {
    pub gamma: f64,
    pub p: f64,
}

impl TwistedSection {
    pub fn params(&self) -> Result<TwistedParams> {
        TwistedParams::new(self.gamma, self.p).map_err(core_invalid)
    }
}

/// Region above a symmetric profile `y > f(x)`, `x ∈ R^n`, `nu = (n−2)/2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ParabolaSection {
    /// `f(x) = exp(|x|^p)`.
    ExpPower {
        p: f64,
        #[serde(default)]
        nu: f64,
    },
    /// Profile with inverse `h⁻¹(x) = a·x^alpha (log x)^beta`.
    Algebraic {
        a: f64,
        alpha: f64,
        beta: f64,
        #[serde(default)]
        nu: f64,
    },
}

impl ParabolaSection {
    pub fn params(&self) -> Result<ParabolaParams> {
        let (shape, nu) = match *self {
            Self::ExpPower { p, nu } => (ParabolaShape::ExpPower { p }, nu),
            Self::Algebraic { a, alpha, beta, nu } => {
                (ParabolaShape::Algebraic { a, alpha, beta }, nu)
            }
        };
        ParabolaParams::new(shape, nu).map_err(core_invalid)
    }
}

/// Geometric time grid from `start` to `stop` with `points` samples.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.start > 0.0) || !self.start.is_finite() {
            return Err(invalid(format!(
                "t_grid.start must be positive and finite, got {}",
                self.start
            )));
        }
        if self.points == 0 {
            return Err(invalid("t_grid.points must be at least 1 (empty time grids are not allowed)"));
        }
        if self.points > 100_000 {
            return Err(invalid(format!(
                "t_grid.points must be at most 100000, got {}",
                self.points
            )));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        if !(self.stop > self.start) || !self.stop.is_finite() {
            return Err(invalid(format!(
                "t_grid must be strictly increasing: start < stop, got start = {}, stop = {}",
                self.start, self.stop
            )));
        }
        let log_span = (self.stop / self.start).ln();
        let last = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| self.start * (log_span * i as f64 / last).exp())
            .collect())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSection {
    /// Relative tolerance on each survival integral.
    pub tolerance: f64,
    pub max_panels: usize,
    pub cutoff: CutoffSection,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        Self { tolerance: 1e-9, max_panels: 400, cutoff: CutoffSection::Safe }
    }
}

/// Where the semi-infinite integrals are truncated; `safe` extends the
/// window until the analytic remainder is negligible, `literal-proof`
/// keeps the √(t/m) cutoff and reports the remainder in the error bound.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CutoffSection {
    #[default]
    Safe,
    LiteralProof { m: f64 },
}

impl QuadratureSection {
    pub fn build(&self) -> Result<QuadratureConfig> {
        if !(self.tolerance >= 1e-13 && self.tolerance <= 0.1) {
            return Err(invalid(format!(
                "quadrature.tolerance must lie in [1e-13, 0.1], got {}",
                self.tolerance
            )));
        }
        if self.max_panels < 8 {
            return Err(invalid(format!(
                "quadrature.max_panels must be at least 8, got {}",
                self.max_panels
            )));
        }
        let cutoff = match self.cutoff {
            CutoffSection::Safe => CutoffRule::Safe,
            CutoffSection::LiteralProof { m } => {
                if !(m > 0.0) || !m.is_finite() {
                    return Err(invalid(format!(
                        "quadrature.cutoff.m must be positive and finite, got {m}"
                    )));
                }
                CutoffRule::LiteralProof { m }
            }
        };
        Ok(QuadratureConfig { tol_rel: self.tolerance, max_panels: self.max_panels, cutoff })
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSection {
    pub samples: u64,
}

impl Default for McSection {
    fn default() -> Self {
        Self { samples: 100_000 }
    }
}

impl McSection {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(invalid("montecarlo.samples must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// CSV destination; stdout when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// JSON destination for `predict`; `-` means stdout.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    /// Optional SVG plot destination.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

/// The whole experiment file. All sections are optional; each command
/// validates that the sections it needs are present.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Root seed; all Monte Carlo randomness is derived from it.
    pub seed: u64,
    /// Worker threads for sampling. Precedence: `--workers` flag, then this
    /// field, then the `IBM_EXIT_WORKERS` environment variable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub process: Option<ProcessKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twisted: Option<TwistedSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parabola: Option<ParabolaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<TGrid>,
    pub quadrature: QuadratureSection,
    pub montecarlo: McSection,
    pub output: OutputSection,
}

impl ExperimentConfig {
    pub fn t_values(&self) -> Result<Vec<f64>> {
        match &self.t_grid {
            Some(g) => g.values(),
            None => Err(invalid("a [t_grid] section (start, stop, points) is required")),
        }
    }
}

/// Command-line overrides; any flag given here replaces the corresponding
/// file value.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// TOML experiment configuration file.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Root seed override.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker-thread override (see also IBM_EXIT_WORKERS).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Engine override for converge studies.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Process override for domain runs: bm, ibm, or btbm.
    #[arg(long, value_enum)]
    pub process: Option<ProcessKind>,
    /// Time-grid start override.
    #[arg(long)]
    pub t_start: Option<f64>,
    /// Time-grid stop override.
    #[arg(long)]
    pub t_stop: Option<f64>,
    /// Time-grid point-count override.
    #[arg(long)]
    pub t_points: Option<usize>,
    /// Relative quadrature-tolerance override.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Monte Carlo sample-count override.
    #[arg(long)]
    pub samples: Option<u64>,
    /// CSV output path override (stdout when absent).
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// JSON output path override (`-` for stdout).
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// SVG plot path override.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
}

/// Loads the configuration file (or starts from defaults) and applies the
/// flag overrides.
pub fn load(ov: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg: ExperimentConfig = match &ov.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                invalid(format!("cannot read config file {}: {e}", path.display()))
            })?;
            toml::from_str(&text).map_err(|e| {
                invalid(format!("cannot parse config file {}: {e}", path.display()))
            })?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    if let Some(w) = ov.workers {
        cfg.workers = Some(w);
    }
    if let Some(m) = ov.method {
        cfg.method = m;
    }
    if let Some(p) = ov.process {
        cfg.process = Some(p);
    }
    if ov.t_start.is_some() || ov.t_stop.is_some() || ov.t_points.is_some() {
        let base = cfg.t_grid.unwrap_or(TGrid { start: 1e2, stop: 1e6, points: 5 });
        cfg.t_grid = Some(TGrid {
            start: ov.t_start.unwrap_or(base.start),
            stop: ov.t_stop.unwrap_or(base.stop),
            points: ov.t_points.unwrap_or(base.points),
        });
    }
    if let Some(tol) = ov.tolerance {
        cfg.quadrature.tolerance = tol;
    }
    if let Some(n) = ov.samples {
        cfg.montecarlo.samples = n;
    }
    if let Some(p) = &ov.csv {
        cfg.output.csv = Some(p.clone());
    }
    if let Some(p) = &ov.json {
        cfg.output.json = Some(p.clone());
    }
    if let Some(p) = &ov.svg {
        cfg.output.svg = Some(p.clone());
    }
    Ok(cfg)
}
