//! Survival probabilities of the time-changed processes as subordination
//! integrals, evaluated by adaptive log-space quadrature.
//!
//! Conditioning on the exit times of the outer process gives
//!
//! ```text
//! P_z[τ_D(Z)  > t] = ∫₀^∞∫₀^∞ P₀[η₍₋ᵤ,ᵥ₎ > t] f(u) f(v) dv du   (IBM)
//! P_z[τ_D(Z¹) > t] = ∫₀^∞      P₀[η₍₋ᵤ,ᵤ₎ > t] f(u) du           (BTBM)
//! ```
//!
//! where `f` is the exit density of the outer Brownian motion from the
//! domain and `η₍₋ᵤ,ᵥ₎` is the inner one-dimensional exit time. A third
//! form replaces concrete domain data with a synthetic tail `T(u) = P[τ>u]`
//! and integrates it against `d/du P₀[η₍₋ᵤ,ᵤ₎ > t]` — the tail-transfer
//! route used to map outer tail hypotheses to time-changed asymptotics.
//!
//! Everything runs in log space: the interesting regimes involve
//! probabilities around `e^{−900}`, far below the smallest positive double.
//! Results come back as [`Estimate`] with `log_value ≤ 0` and a finite
//! log-space error bound that folds in the analytic beyond-cutoff remainder.

use crate::error::{Error, Result};
use crate::exit_laws::{eta_log_survival, interval_log_survival, log_exit_density, log_survival, sym_eta_log_density_du};
use crate::predictors::{
    algebraic_btbm_constant, exp_power_btbm_constant, ibm_bounded_rate, prediction,
    AsymptoticPrediction,
};
use crate::quad::integrate_log;
pub use crate::quad::Estimate;
use crate::spectra::SpectralDomain;
use crate::special::log_add_exp;
use std::cell::Cell;
use std::f64::consts::{E, LN_2, PI};

/// Error-bound floor keeping `log_abs_error` finite even for exact results.
const LOG_ERROR_FLOOR: f64 = -745.0;

/// Inner one-dimensional survivals below e^{−5e10} are treated as zero
/// outright; this also guards the `t/x²` substitution against overflow.
const INNER_SCALE_LIMIT: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    /// `T(u) = min(1, (a/λ)e^{−λu})` for `u ≥ u₀`; density `a·e^{−λu}`.
    Exponential { a: f64, lambda: f64, u0: f64 },
    /// `T(u) = min(1, u^{−c})`, splice at 1.
    Polynomial { c: f64 },
    /// `log T(u) = −c·u(log u)^{−2/p}` from `u₀ = e^{2/p}` on.
    StretchedLog { c: f64, p: f64, u0: f64 },
    /// `log T(u) = −c·u^{(1−α)/(1+α)}(log u)^{−2β/(1+α)}` from
    /// `u₀ = exp(max(1, δ/γ))` on, with `γ = (1−α)/(1+α)`, `δ = 2β/(1+α)`.
    AlgebraicLog { c: f64, gamma: f64, delta: f64, u0: f64 },
    /// `T(u) = 1` below `u₀`, `0` from `u₀` on.
    BoundedSupport { u0: f64 },
}

/// A synthetic outer exit tail `T(u) = P[τ > u]`: non-increasing,
/// right-continuous, identically 1 below its splice point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailLaw {
    kind: Kind,
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

impl TailLaw {
    /// Exponential tail `min(1, (a/λ)e^{−λu})` spliced continuously: for
    /// `a > λ` the formula crosses 1 at `u₀ = ln(a/λ)/λ`; otherwise the
    /// tail starts below 1 immediately.
    pub fn exponential(a: f64, lambda: f64) -> Result<Self> {
        let u0 = ((a / lambda).ln() / lambda).max(0.0);
        Self::exponential_with_splice(a, lambda, u0)
    }

    /// Exponential tail with an explicit splice point (the tail hypotheses
    /// only constrain large `u`, so the splice is a modelling knob); the
    /// spliced tail must not exceed 1.
    pub fn exponential_with_splice(a: f64, lambda: f64, u0: f64) -> Result<Self> {
        require_positive("tail amplitude a", a)?;
        require_positive("tail rate lambda", lambda)?;
        if !(u0 >= 0.0) || !u0.is_finite() {
            return Err(Error::InvalidParameter(format!("splice point must be >= 0, got {u0}")));
        }
        if (a / lambda).ln() - lambda * u0 > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "exponential tail exceeds 1 at its splice point u0 = {u0}"
            )));
        }
        Ok(Self { kind: Kind::Exponential { a, lambda, u0 } })
    }

    /// The exponential tail matched to a concrete domain and start point:
    /// amplitude `A(z) = λ_D ψ(z)∫ψ` and rate `λ_D`, so the density is the
    /// leading term of the spectral exit density.
    pub fn from_principal(domain: &SpectralDomain, z: &[f64]) -> Result<Self> {
        let pr = domain.principal(z)?;
        Self::exponential(pr.a_coeff, pr.lambda)
    }

    /// Polynomial tail `min(1, u^{−c})`.
    pub fn polynomial(c: f64) -> Result<Self> {
        require_positive("tail exponent c", c)?;
        Ok(Self { kind: Kind::Polynomial { c } })
    }

    /// Stretched tail `log T = −c·u(log u)^{−2/p}`, valid from `e^{2/p}`
    /// on (below that the exponent would not be monotone).
    pub fn stretched_log(c: f64, p: f64) -> Result<Self> {
        require_positive("tail coefficient c", c)?;
        require_positive("tail power p", p)?;
        Ok(Self { kind: Kind::StretchedLog { c, p, u0: (2.0 / p).exp() } })
    }

    /// Algebraic tail `log T = −c·u^{(1−α)/(1+α)}(log u)^{−2β/(1+α)}`.
    pub fn algebraic_log(c: f64, alpha: f64, beta: f64) -> Result<Self> {
        require_positive("tail coefficient c", c)?;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail exponent alpha must lie in (0, 1), got {alpha}"
            )));
        }
        require_positive("tail log-exponent beta", beta)?;
        let gamma = (1.0 - alpha) / (1.0 + alpha);
        let delta = 2.0 * beta / (1.0 + alpha);
        let u0 = 1.0f64.max(delta / gamma).exp();
        Ok(Self { kind: Kind::AlgebraicLog { c, gamma, delta, u0 } })
    }

    /// Degenerate tail: exit happens exactly at `u₀`.
    pub fn bounded_support(u0: f64) -> Result<Self> {
        require_positive("support endpoint u0", u0)?;
        Ok(Self { kind: Kind::BoundedSupport { u0 } })
    }

    /// The point below which the tail is identically 1.
    pub fn splice(&self) -> f64 {
        match self.kind {
            Kind::Exponential { u0, .. } => u0,
            Kind::Polynomial { .. } => 1.0,
            Kind::StretchedLog { u0, .. } => u0,
            Kind::AlgebraicLog { u0, .. } => u0,
            Kind::BoundedSupport { u0 } => u0,
        }
    }

    /// `log T(u)` for `u ≥ 0`; 0 below the splice point.
    pub fn log_tail(&self, u: f64) -> f64 {
        if u < self.splice() {
            return 0.0;
        }
        match self.kind {
            Kind::Exponential { a, lambda, .. } => ((a / lambda).ln() - lambda * u).min(0.0),
            Kind::Polynomial { c } => -c * u.ln(),
            Kind::StretchedLog { c, p, .. } => -c * u * u.ln().powf(-2.0 / p),
            Kind::AlgebraicLog { c, gamma, delta, .. } => {
                -c * u.powf(gamma) * u.ln().powf(-delta)
            }
            Kind::BoundedSupport { .. } => f64::NEG_INFINITY,
        }
    }

    /// log of the absolutely continuous density `−T′(u)`; `−∞` where the
    /// tail is flat. Splice-point atoms (possible for the stretched and
    /// algebraic kinds, whose formula value at `u₀` is below 1) are not
    /// included and contribute nothing to survival integrals there, since
    /// they sit at a single point.
    pub fn log_density(&self, u: f64) -> f64 {
        if u < self.splice() {
            return f64::NEG_INFINITY;
        }
        match self.kind {
            Kind::Exponential { a, lambda, .. } => a.ln() - lambda * u,
            Kind::Polynomial { c } => c.ln() - (c + 1.0) * u.ln(),
            Kind::StretchedLog { c, p, .. } => {
                let lu = u.ln();
                let slope = 1.0 - 2.0 / (p * lu);
                if slope <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                self.log_tail(u) + c.ln() - (2.0 / p) * lu.ln() + slope.ln()
            }
            Kind::AlgebraicLog { c, gamma, delta, .. } => {
                let lu = u.ln();
                let slope = gamma * lu - delta;
                if slope <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                self.log_tail(u) + c.ln() + (gamma - 1.0) * u.ln() - (delta + 1.0) * lu.ln()
                    + slope.ln()
            }
            Kind::BoundedSupport { .. } => f64::NEG_INFINITY,
        }
    }
}

/// How far out the outer variables are integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffRule {
    /// Cutoff scaled to keep the analytic remainder provably far below the
    /// value at every `t`: outer exit variables stop at
    /// `max(√(t/10), 2(R+40)/λ_D)` with `R` the leading `t^{1/3}`-exponent,
    /// tail transfers at `8√t`.
    Safe,
    /// The literal truncation `√(t/m)` from the negligibility estimates;
    /// at small `t` this can exclude visible mass, which the folded
    /// remainder bound then reports honestly.
    LiteralProof { m: f64 },
}

/// Tolerances and budgets for the subordination quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance on the value (≈ absolute tolerance on the log).
    pub tol_rel: f64,
    /// Panel budget for the outer adaptive pass.
    pub max_panels: usize,
    pub cutoff: CutoffRule,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { tol_rel: 1e-9, max_panels: 400, cutoff: CutoffRule::Safe }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol_rel >= 1e-13 && self.tol_rel <= 0.1) {
            return Err(Error::InvalidParameter(format!(
                "relative tolerance must lie in [1e-13, 0.1], got {}",
                self.tol_rel
            )));
        }
        if self.max_panels < 8 {
            return Err(Error::InvalidParameter(format!(
                "panel budget must be at least 8, got {}",
                self.max_panels
            )));
        }
        if let CutoffRule::LiteralProof { m } = self.cutoff {
            require_positive("cutoff parameter m", m)?;
        }
        Ok(())
    }

    /// Per-variable cutoff for the domain-based integrals.
    fn domain_cutoff(&self, lambda1: f64, t: f64) -> f64 {
        match self.cutoff {
            CutoffRule::LiteralProof { m } => (t / m).sqrt(),
            CutoffRule::Safe => {
                let r = ibm_bounded_rate(lambda1) * t.cbrt();
                (t / 10.0).sqrt().max(2.0 * (r + 40.0) / lambda1)
            }
        }
    }

    /// Cutoff for the tail-transfer integral, whose mass lives on the
    /// diffusive scale `√t`.
    fn tail_cutoff(&self, t: f64) -> f64 {
        match self.cutoff {
            CutoffRule::LiteralProof { m } => (t / m).sqrt(),
            CutoffRule::Safe => 8.0 * t.sqrt(),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("time t must be >= 0, got {t}")));
    }
    Ok(())
}

fn certainty() -> Estimate {
    Estimate { log_value: 0.0, log_abs_error: LOG_ERROR_FLOOR, evaluations: 0, converged: true }
}

/// Clamps the estimate to `log_value ≤ 0` (a probability), folds the worst
/// inner-integral relative error into the bound, and keeps the bound finite.
fn finalize(mut est: Estimate, inner_rel_log: f64, inner_ok: bool) -> Result<Estimate> {
    if est.log_value.is_nan() {
        return Err(Error::Numerics("subordination quadrature returned NaN".into()));
    }
    if inner_rel_log > f64::NEG_INFINITY && est.log_value > f64::NEG_INFINITY {
        est.log_abs_error = log_add_exp(est.log_abs_error, est.log_value + inner_rel_log);
    }
    est.converged &= inner_ok;
    if est.log_value > 0.0 {
        if est.log_value.exp() - 1.0 <= est.abs_error().max(1e-9) {
            est.log_value = 0.0;
        } else {
            return Err(Error::Numerics(format!(
                "integral exceeds total probability: log value {:+.3e}",
                est.log_value
            )));
        }
    }
    if !est.log_abs_error.is_finite() {
        est.log_abs_error = LOG_ERROR_FLOOR;
    }
    Ok(est)
}

/// Upper bound on `ln Φ(−x)` (Gaussian upper tail), 0 for `x ≤ 1`.
fn log_gauss_tail(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        -0.5 * x * x - x.ln() - 0.5 * (2.0 * PI).ln()
    }
}

/// Shared core of the plain and symmetrized IBM forms: integrates
/// `x·S(w, t/x²)·f(xw)·f(x(1−w))` over `x ∈ (0, x_hi)`, `w ∈ (0, w_hi)`,
/// with `log_prefactor` added once (log 2 for the symmetrized half-square).
fn ibm_integral(
    domain: &SpectralDomain,
    z: &[f64],
    t: f64,
    cfg: &QuadratureConfig,
    w_hi: f64,
    log_prefactor: f64,
) -> Result<Estimate> {
    cfg.validate()?;
    check_t(t)?;
    let pr = domain.principal(z)?; // validates z and fixes the decay scale
    if t == 0.0 {
        return Ok(certainty());
    }
    let lambda = pr.lambda;
    let u_cut = cfg.domain_cutoff(lambda, t);
    let x_hi = 2.0 * u_cut;
    if !(x_hi > 0.0) || !x_hi.is_finite() {
        return Err(Error::InvalidParameter(format!("cutoff collapsed to {x_hi} at t = {t}")));
    }
    // Remainder over {u + v > 2U} ⊂ {u > U} ∪ {v > U}: at most 2·P[τ > U].
    let remainder = LN_2 + log_survival(domain, z, u_cut)?;

    let inner_tol = (cfg.tol_rel * 0.1).max(1e-12);
    let inner_panels = 60;
    let w_knots = [0.002, 0.02, 0.1, 0.25, 0.5, 0.75, 0.9, 0.98, 0.998];
    let worst_inner: Cell<f64> = Cell::new(f64::NEG_INFINITY);
    let inner_ok = Cell::new(true);

    let outer_log = |x: f64| -> f64 {
        let s = t / (x * x);
        if !(s < INNER_SCALE_LIMIT) {
            return f64::NEG_INFINITY;
        }
        let est = integrate_log(
            &|w: f64| {
                let ls = interval_log_survival(w, s).map(|e| e.log_value).unwrap_or(f64::NEG_INFINITY);
                if ls == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let f1 = log_exit_density(domain, z, x * w).unwrap_or(f64::NEG_INFINITY);
                let f2 = log_exit_density(domain, z, x * (1.0 - w)).unwrap_or(f64::NEG_INFINITY);
                ls + f1 + f2
            },
            0.0,
            w_hi,
            &w_knots,
            inner_tol,
            inner_panels,
            f64::NEG_INFINITY,
        );
        if est.log_value > f64::NEG_INFINITY {
            worst_inner.set(worst_inner.get().max(est.log_abs_error - est.log_value));
            if !est.converged {
                inner_ok.set(false);
            }
        }
        log_prefactor + x.ln() + est.log_value
    };

    let saddle = (PI * PI * t / lambda).cbrt().min(0.9 * x_hi);
    let knots: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0].iter().map(|k| k * saddle).collect();
    let outer = integrate_log(&outer_log, 0.0, x_hi, &knots, cfg.tol_rel, cfg.max_panels, remainder);
    finalize(outer, worst_inner.get(), inner_ok.get())
}

/// IBM survival `P_z[τ_D(Z) > t]` as the double subordination integral.
pub fn ibm_survival(
    domain: &SpectralDomain,
    z: &[f64],
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    ibm_integral(domain, z, t, cfg, 1.0, 0.0)
}

/// The symmetrized IBM form `2∫₀^∞∫_u^∞ …`, equal to [`ibm_survival`] by
/// the `(u, v) ↔ (v, u)` symmetry of the inner survival; kept as a separate
/// code path so the equivalence can be checked numerically.
pub fn ibm_survival_symmetrized(
    domain: &SpectralDomain,
    z: &[f64],
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    ibm_integral(domain, z, t, cfg, 0.5, LN_2)
}

/// BTBM survival `P_z[τ_D(Z¹) > t]` as a single integral of the symmetric
/// inner survival against the outer exit density.
pub fn btbm_survival_density(
    domain: &SpectralDomain,
    z: &[f64],
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    check_t(t)?;
    let pr = domain.principal(z)?;
    if t == 0.0 {
        return Ok(certainty());
    }
    let u_cut = cfg.domain_cutoff(pr.lambda, t);
    let remainder = log_survival(domain, z, u_cut)?;
    let integrand = |u: f64| -> f64 {
        if t / (u * u) >= INNER_SCALE_LIMIT {
            return f64::NEG_INFINITY;
        }
        let ls = eta_log_survival(u, u, t).map(|e| e.log_value).unwrap_or(f64::NEG_INFINITY);
        if ls == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        ls + log_exit_density(domain, z, u).unwrap_or(f64::NEG_INFINITY)
    };
    let saddle = (PI * PI * t / (4.0 * pr.lambda)).cbrt().min(0.9 * u_cut);
    let knots: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0].iter().map(|k| k * saddle).collect();
    let est = integrate_log(&integrand, 0.0, u_cut, &knots, cfg.tol_rel, cfg.max_panels, remainder);
    finalize(est, f64::NEG_INFINITY, true)
}

/// Survival of the synthetic BTBM whose outer exit tail is `law`:
/// `∫₀^∞ (d/du P₀[η₍₋ᵤ,ᵤ₎ > t]) · T(u) du`.
pub fn btbm_survival_tail(law: &TailLaw, t: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    cfg.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tail transfer needs t > 0, got {t}"
        )));
    }
    let u_cut = cfg.tail_cutoff(t);
    // Remainder ≤ T(U)·P₀[η₍₋U,U₎ ≤ t] ≤ T(U)·4Φ(−U/√t).
    let remainder = law.log_tail(u_cut) + (LN_2 + LN_2 + log_gauss_tail(u_cut / t.sqrt())).min(0.0);
    let integrand = |u: f64| -> f64 {
        let lt = law.log_tail(u);
        if lt == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        sym_eta_log_density_du(u, t).map(|e| e.log_value).unwrap_or(f64::NEG_INFINITY) + lt
    };
    let rt = t.sqrt();
    let mut knots = vec![0.1 * rt, 0.3 * rt, rt, 2.0 * rt, 4.0 * rt];
    knots.push(law.splice());
    let est = integrate_log(&integrand, 0.0, u_cut, &knots, cfg.tol_rel, cfg.max_panels, remainder);
    finalize(est, f64::NEG_INFINITY, true)
}

/// The prefactor-level scaled quantity for a sharp law with known constant:
/// `exp(log P − poly·log t − rate·t^{t_power}(log t)^{log_t_power})`,
/// approaching `prediction.prefactor_constant` as `t` grows. All arithmetic
/// in logs, so `P ≈ e^{−900}` is fine.
pub fn scaled_ratio(est: &Estimate, t: f64, prediction: &AsymptoticPrediction) -> Result<f64> {
    if !prediction.sharp {
        return Err(Error::InvalidParameter(format!(
            "{}: scaled ratios need a sharp (two-sided) law",
            prediction.label
        )));
    }
    let (Some(_), Some(poly)) = (prediction.prefactor_constant, prediction.poly_power) else {
        return Err(Error::InvalidParameter(format!(
            "{}: scaled ratios need a prefactor-level prediction",
            prediction.label
        )));
    };
    if !(t > 1.0) {
        return Err(Error::InvalidParameter(format!("scaled ratios need t > 1, got {t}")));
    }
    let log_ratio = est.log_value
        - poly * t.ln()
        - prediction.rate * t.powf(prediction.t_power) * t.ln().powf(prediction.log_t_power);
    Ok(log_ratio.exp())
}

/// The rate-level scaled quantity `t^{−a}(log t)^{b}·log P`; with
/// `a = b = 0` this is `log P` itself.
pub fn log_scaled(est: &Estimate, t: f64, power_a: f64, log_power_b: f64) -> Result<f64> {
    if !(t > E) {
        return Err(Error::InvalidParameter(format!("scaled logs need t > e, got {t}")));
    }
    Ok(est.log_value * t.powf(-power_a) * t.ln().powf(log_power_b))
}

/// The asymptotic law the tail-transfer survival inherits from its outer
/// tail hypothesis — the synthetic-tail counterpart of the concrete-domain
/// predictions:
///
/// | outer tail `log T(u)`       | `log P[τ(Z¹) > t]` as `t → ∞`               |
/// |-----------------------------|----------------------------------------------|
/// | `log a − λu`                | `−(3/2)(π²/4)^{1/3} λ^{2/3} · t^{1/3}`       |
/// | `−c·log u`                  | `−(c/2)·log t`                                |
/// | `−c·u (log u)^{−2/p}`       | `−C(c,p) · t^{1/3} (log t)^{−4/(3p)}`         |
/// | `−c·u^γ (log u)^{−δ}`       | `−C · t^{(1−α)/(3+α)} (log t)^{−4β/(3+α)}`    |
/// | support `[0, u₀]`           | `log(4/π) − π²t/(8u₀²)` (prefactor-sharp)     |
///
/// The stretched-logarithmic constant is the same map that produces the
/// time-changed constants for exponential-power profile regions, with the
/// Bessel rate replaced by the tail constant; the algebraic-logarithmic one
/// recovers `(α, β)` from the stored exponents `γ = (1−α)/(1+α)`,
/// `δ = 2β/(1+α)`.
pub fn tail_transfer_prediction(law: &TailLaw) -> Result<AsymptoticPrediction> {
    match law.kind {
        Kind::Exponential { lambda, .. } => prediction(
            "BTBM survival, exponential outer tail",
            -ibm_bounded_rate(lambda) * 0.25f64.cbrt(),
            1.0 / 3.0,
            0.0,
            None,
            None,
            true,
            false,
        ),
        Kind::Polynomial { c } => prediction(
            "BTBM survival, polynomial outer tail",
            -0.5 * c,
            0.0,
            1.0,
            None,
            None,
            true,
            false,
        ),
        Kind::StretchedLog { c, p, .. } => prediction(
            "BTBM survival, stretched-logarithmic outer tail",
            -exp_power_btbm_constant(c, p),
            1.0 / 3.0,
            -4.0 / (3.0 * p),
            None,
            None,
            true,
            false,
        ),
        Kind::AlgebraicLog { c, gamma, delta, .. } => {
            let alpha = (1.0 - gamma) / (1.0 + gamma);
            let beta = delta / (1.0 + gamma);
            let constant = algebraic_btbm_constant(alpha, beta)
                * c.powf(2.0 * (1.0 + alpha) / (3.0 + alpha));
            prediction(
                "BTBM survival, algebraic-logarithmic outer tail",
                -constant,
                (1.0 - alpha) / (3.0 + alpha),
                -4.0 * beta / (3.0 + alpha),
                None,
                None,
                true,
                false,
            )
        }
        Kind::BoundedSupport { u0 } => prediction(
            "BTBM survival, bounded-support outer tail",
            -PI * PI / (8.0 * u0 * u0),
            1.0,
            0.0,
            Some(4.0 / PI),
            Some(0.0),
            true,
            false,
        ),
    }
}
