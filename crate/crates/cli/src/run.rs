//! Experiment execution shared by the subcommands: resolves what the
//! configuration asks to evaluate, runs quadrature or sampling over the time
//! grid, and assembles the per-t report rows.

use anyhow::Result;
use ibm_exit::exit_laws::log_survival;
use ibm_exit::montecarlo::{estimate_process_survival, McEstimate, Process};
use ibm_exit::predictors::{predict_bounded, AsymptoticPrediction};
use ibm_exit::spectra::SpectralDomain;
use ibm_exit::subordination::{
    btbm_survival_density, btbm_survival_tail, ibm_survival_symmetrized,
    tail_transfer_prediction, Estimate, QuadratureConfig, TailLaw,
};

use crate::config::{invalid, ExperimentConfig, ProcessKind};

/// What a run evaluates: a concrete domain with one of the three processes,
/// or the tail-transfer integral for a synthetic outer tail.
pub enum Target {
    Domain { domain: SpectralDomain, z: Vec<f64>, process: ProcessKind },
    Tail { law: TailLaw },
}

impl Target {
    pub fn resolve(cfg: &ExperimentConfig) -> Result<Target> {
        match (&cfg.domain, &cfg.tail) {
            (Some(_), Some(_)) => Err(invalid(
                "[domain] and [tail] are mutually exclusive: a run integrates either a \
                 concrete domain or a synthetic outer tail",
            )),
            (Some(d), None) => {
                let (domain, z) = d.build()?;
                Ok(Target::Domain { domain, z, process: cfg.process.unwrap_or(ProcessKind::Ibm) })
            }
            (None, Some(tl)) => {
                if matches!(cfg.process, Some(ProcessKind::Bm) | Some(ProcessKind::Ibm)) {
                    return Err(invalid(
                        "the tail-transfer route evaluates the Brownian-time process only; \
                         with a [tail] section, process must be btbm or omitted",
                    ));
                }
                Ok(Target::Tail { law: tl.law()? })
            }
            (None, None) => {
                Err(invalid("a [domain] or a [tail] section is required to evaluate survivals"))
            }
        }
    }

    /// The asymptotic law the run is compared against in the `scaled`,
    /// `prediction`, and `ratio` columns.
    pub fn prediction(&self) -> Result<AsymptoticPrediction> {
        match self {
            Target::Domain { domain, z, process } => {
                let bounded = predict_bounded(domain, z)?;
                match process {
                    ProcessKind::Bm => Ok(bounded.bm),
                    ProcessKind::Ibm => Ok(bounded.ibm_sharp),
                    ProcessKind::Btbm => {
                        Ok(tail_transfer_prediction(&TailLaw::from_principal(domain, z)?)?)
                    }
                }
            }
            Target::Tail { law } => Ok(tail_transfer_prediction(law)?),
        }
    }

    /// One survival evaluation. Brownian motion uses the exact dual-regime
    /// series (reported with its truncation budget); the time-changed
    /// processes run the subordination quadrature.
    pub fn survival(&self, t: f64, q: &QuadratureConfig) -> Result<Estimate> {
        match self {
            Target::Domain { domain, z, process } => match process {
                ProcessKind::Bm => {
                    let log_value = log_survival(domain, z, t)?;
                    Ok(Estimate {
                        log_value,
                        log_abs_error: log_value + 1e-13f64.ln(),
                        evaluations: 1,
                        converged: true,
                    })
                }
                ProcessKind::Ibm => Ok(ibm_survival_symmetrized(domain, z, t, q)?),
                ProcessKind::Btbm => Ok(btbm_survival_density(domain, z, t, q)?),
            },
            Target::Tail { law } => Ok(btbm_survival_tail(law, t, q)?),
        }
    }

    /// One Monte Carlo estimate; synthetic tails have no sampler.
    pub fn montecarlo(&self, t: f64, n: u64, seed: u64) -> Result<McEstimate> {
        match self {
            Target::Domain { domain, z, process } => {
                let process = match process {
                    ProcessKind::Bm => Process::Bm,
                    ProcessKind::Ibm => Process::Ibm,
                    ProcessKind::Btbm => Process::Btbm,
                };
                Ok(estimate_process_survival(domain, z, process, t, n, seed)?)
            }
            Target::Tail { .. } => Err(invalid(
                "method montecarlo requires a [domain]; tail-transfer laws integrate a \
                 synthetic outer tail that has no sampler — use quadrature",
            )),
        }
    }
}

/// One per-t quadrature report row.
pub struct Row {
    pub t: f64,
    pub est: Estimate,
    /// `log P / (t^{t_power}(log t)^{log_t_power})`, defined for t > 1.
    pub scaled: Option<f64>,
    /// Predicted `log P` (prefactor-level when available, else rate-level).
    pub prediction: Option<f64>,
    /// Prefactor ratio for sharp laws, else `scaled / rate`; approaches 1.
    pub ratio: Option<f64>,
}

pub fn quad_row(
    target: &Target,
    pred: &AsymptoticPrediction,
    t: f64,
    q: &QuadratureConfig,
) -> Result<Row> {
    let est = target.survival(t, q)?;
    let scaled = pred.scaled(t, est.log_value).ok();
    let rate_level = if t > 1.0 {
        Some(pred.rate * t.powf(pred.t_power) * t.ln().powf(pred.log_t_power))
    } else {
        None
    };
    let prediction = pred.log_prediction(t).or(rate_level);
    let ratio = pred
        .prefactor_ratio(t, est.log_value)
        .or_else(|| scaled.map(|s| s / pred.rate));
    Ok(Row { t, est, scaled, prediction, ratio })
}

pub fn quad_rows(
    target: &Target,
    pred: &AsymptoticPrediction,
    ts: &[f64],
    q: &QuadratureConfig,
) -> Result<Vec<Row>> {
    ts.iter().map(|&t| quad_row(target, pred, t, q)).collect()
}

/// Monte Carlo rows share the root seed across the grid (common random
/// numbers), which keeps the estimated curve monotone in t.
pub fn mc_rows(target: &Target, ts: &[f64], n: u64, seed: u64) -> Result<Vec<McEstimate>> {
    ts.iter().map(|&t| target.montecarlo(t, n, seed)).collect()
}

/// Least-squares slope of y against x; `None` with fewer than two points.
pub fn ls_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Successive log-log slopes between neighbouring rows; first entry empty.
pub fn local_slopes(rows: &[Row]) -> Vec<Option<f64>> {
    let mut out = vec![None; rows.len()];
    for i in 1..rows.len() {
        let dx = (rows[i].t / rows[i - 1].t).ln();
        if dx > 0.0 {
            out[i] = Some((rows[i].est.log_value - rows[i - 1].est.log_value) / dx);
        }
    }
    out
}
