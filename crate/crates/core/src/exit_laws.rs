//! Exit-time laws of standard Brownian motion (generator ½Δ) on intervals
//! and boxes, in plain and log space.
//!
//! Two series represent every interval quantity:
//!
//! * spectral: P_x[η_(0,1) > s] = (4/π) Σ_{n≥0} (2n+1)⁻¹ e^{−(2n+1)²π²s/2} sin((2n+1)πx),
//!   rapidly convergent for large s;
//! * reflection (method of images): sums of Gaussian CDFs, rapidly convergent
//!   for small s.
//!
//! The two regimes split at s = [`REGIME_SPLIT`]; they agree to ~1e-13 there
//! (tested). Log-space forms factor out the dominant exponential so values
//! like e^(-1000) survive; these feed the subordination quadratures.
//!
//! Box laws are per-axis products: the exit time of a box is the minimum of
//! the per-coordinate interval exit times of independent 1-d Brownian motions.

use crate::error::{Error, Result};
use crate::special::{log_sum_exp, norm_cdf, norm_pdf};
use crate::spectra::SpectralDomain;
use std::f64::consts::PI;

/// Time-scale (on the unit interval) where evaluation switches between the
/// spectral series (s ≥ split) and the reflection series (s < split).
pub const REGIME_SPLIT: f64 = 0.1;

/// The eigenfunction-expansion CDF/density are trusted only for
/// t ≥ WINDOW_FACTOR · (min side)²; below, the truncated series cancels
/// catastrophically and the reflection forms must be used instead.
pub const WINDOW_FACTOR: f64 = 0.05;

const TERM_EPS: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Spectral,
    Reflection,
}

/// A truncated-series value with a rigorous truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEvaluation {
    pub value: f64,
    pub truncation_bound: f64,
    pub terms: usize,
    pub regime: Regime,
}

/// Log-space series value; `rel_bound` bounds the relative truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSeriesEvaluation {
    pub log_value: f64,
    pub rel_bound: f64,
    pub terms: usize,
    pub regime: Regime,
}

fn check_unit_x(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::InvalidParameter(format!("starting point x = {x} must lie in [0, 1]")));
    }
    Ok(())
}

fn check_time(name: &str, t: f64, allow_zero: bool) -> Result<()> {
    let ok = t.is_finite() && (t > 0.0 || (allow_zero && t == 0.0));
    if !ok {
        return Err(Error::InvalidParameter(format!(
            "{name} = {t} must be {} and finite",
            if allow_zero { "non-negative" } else { "positive" }
        )));
    }
    Ok(())
}

/// Clamp a probability to [0, 1], tolerating overshoot up to the truncation
/// bound; anything farther out is a numerical failure.
fn clamp_probability(value: f64, tol: f64) -> Result<f64> {
    let slack = tol.max(1e-14);
    if value < -slack || value > 1.0 + slack {
        debug_assert!(false, "series value {value} exceeds [0,1] by more than bound {slack}");
        return Err(Error::Numerics(format!(
            "series value {value} outside [0,1] beyond its truncation bound {slack}"
        )));
    }
    Ok(value.clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// unit-interval survival, both regimes
// ---------------------------------------------------------------------------

/// Spectral-series survival on (0,1); valid anywhere but efficient/accurate
/// only for s ≥ REGIME_SPLIT. Returns (value, truncation bound, terms).
fn unit_survival_spectral(x: f64, s: f64) -> (f64, f64, usize) {
    let c = PI * PI * s / 2.0;
    let mut sum = 0.0;
    let mut n = 0usize;
    loop {
        let m = (2 * n + 1) as f64;
        let term = (-m * m * c).exp() / m * (m * PI * x).sin();
        sum += term;
        // geometric majorant on the remaining tail: ratio ≤ e^{−(8n+8)c}
        let ratio = (-((8 * n + 8) as f64) * c).exp();
        let tail = (-(m + 2.0) * (m + 2.0) * c).exp() / (1.0 - ratio);
        n += 1;
        if tail < TERM_EPS || n > 20_000 {
            return (4.0 / PI * sum, 4.0 / PI * tail, n);
        }
    }
}

/// Reflection-series survival on (0,1):
/// S = Σ_k [Φ(a_k) − Φ(b_k) − Φ(c_k) + Φ(d_k)] over integer images.
fn unit_survival_reflection(x: f64, s: f64) -> (f64, f64, usize) {
    let rs = s.sqrt();
    let phi = |c: f64| norm_cdf(c / rs);
    let bracket = |k: f64| {
        phi(1.0 - x - 2.0 * k) - phi(-x - 2.0 * k) - phi(1.0 + x - 2.0 * k) + phi(x - 2.0 * k)
    };
    let mut sum = bracket(0.0);
    let mut k = 1usize;
    loop {
        let kk = k as f64;
        sum += bracket(kk) + bracket(-kk);
        // |bracket_{±(k+1)}| ≤ 2Φ̄((2k−1)/√s) hence a crude ×8 geometric cap
        let tail = 8.0 * norm_cdf(-(2.0 * kk - 1.0) / rs);
        k += 1;
        if tail < TERM_EPS || k > 10_000 {
            return (sum, tail, 2 * k - 1);
        }
    }
}

fn unit_survival_parts(x: f64, s: f64) -> (f64, f64, usize, Regime) {
    if s >= REGIME_SPLIT {
        let (v, b, n) = unit_survival_spectral(x, s);
        (v, b, n, Regime::Spectral)
    } else {
        let (v, b, n) = unit_survival_reflection(x, s);
        (v, b, n, Regime::Reflection)
    }
}

/// P_x[η_(0,1) > s]: survival of Brownian motion in the unit interval.
pub fn interval_survival(x: f64, s: f64) -> Result<SeriesEvaluation> {
    check_unit_x(x)?;
    check_time("s", s, true)?;
    if x == 0.0 || x == 1.0 {
        return Ok(SeriesEvaluation { value: 0.0, truncation_bound: 0.0, terms: 0, regime: Regime::Reflection });
    }
    if s == 0.0 {
        return Ok(SeriesEvaluation { value: 1.0, truncation_bound: 0.0, terms: 0, regime: Regime::Reflection });
    }
    let (raw, bound, terms, regime) = unit_survival_parts(x, s);
    Ok(SeriesEvaluation { value: clamp_probability(raw, bound)?, truncation_bound: bound, terms, regime })
}

/// log P_x[η_(0,1) > s], exact to relative accuracy even when the survival
/// probability underflows (the spectral regime factors out e^{−π²s/2}).
pub fn interval_log_survival(x: f64, s: f64) -> Result<LogSeriesEvaluation> {
    check_unit_x(x)?;
    check_time("s", s, true)?;
    if x == 0.0 || x == 1.0 {
        return Ok(LogSeriesEvaluation {
            log_value: f64::NEG_INFINITY,
            rel_bound: 0.0,
            terms: 0,
            regime: Regime::Reflection,
        });
    }
    if s == 0.0 {
        return Ok(LogSeriesEvaluation { log_value: 0.0, rel_bound: 0.0, terms: 0, regime: Regime::Reflection });
    }
    if s < REGIME_SPLIT {
        let (v, b, n) = unit_survival_reflection(x, s);
        let v = clamp_probability(v, b)?;
        return Ok(LogSeriesEvaluation {
            log_value: v.ln(),
            rel_bound: if v > 0.0 { b / v } else { 0.0 },
            terms: n,
            regime: Regime::Reflection,
        });
    }
    // factor out the ground-mode exponential: bracket → sin(πx) as s → ∞
    let c = PI * PI * s / 2.0;
    let mut bracket = 0.0;
    let mut n = 0usize;
    let (tail, terms) = loop {
        let m = (2 * n + 1) as f64;
        bracket += (-(m * m - 1.0) * c).exp() / m * (m * PI * x).sin();
        let ratio = (-((8 * n + 8) as f64) * c).exp();
        let tail = (-((m + 2.0) * (m + 2.0) - 1.0) * c).exp() / (1.0 - ratio);
        n += 1;
        if tail < TERM_EPS * bracket.abs().max(f64::MIN_POSITIVE) || n > 20_000 {
            break (tail, n);
        }
    };
    if bracket <= 0.0 {
        // only reachable by rounding at extreme x; survival is then below any
        // representable scale
        return Ok(LogSeriesEvaluation {
            log_value: f64::NEG_INFINITY,
            rel_bound: 0.0,
            terms,
            regime: Regime::Spectral,
        });
    }
    Ok(LogSeriesEvaluation {
        log_value: -c + (4.0 / PI * bracket).ln(),
        rel_bound: tail / bracket,
        terms,
        regime: Regime::Spectral,
    })
}

fn check_two_sided(u: f64, v: f64) -> Result<()> {
    if !(u > 0.0 && v > 0.0 && u.is_finite() && v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "interval radii (u, v) = ({u}, {v}) must be positive and finite"
        )));
    }
    Ok(())
}

/// P₀[η_(−u,v) > t] by Brownian scaling onto the unit interval:
/// the exit time of (−u, v) from 0 equals (u+v)² times the exit time of
/// (0,1) from u/(u+v).
pub fn eta_survival(u: f64, v: f64, t: f64) -> Result<SeriesEvaluation> {
    check_two_sided(u, v)?;
    check_time("t", t, true)?;
    interval_survival(u / (u + v), t / ((u + v) * (u + v)))
}

/// log P₀[η_(−u,v) > t].
pub fn eta_log_survival(u: f64, v: f64, t: f64) -> Result<LogSeriesEvaluation> {
    check_two_sided(u, v)?;
    check_time("t", t, true)?;
    interval_log_survival(u / (u + v), t / ((u + v) * (u + v)))
}

// ---------------------------------------------------------------------------
// ∂/∂u P₀[η_(−u,u) > t] — the kernel of the tail-transfer representation
// ---------------------------------------------------------------------------

/// Termwise u-derivative of the symmetric survival, spectral regime:
/// (πt/u³) Σ (−1)ⁿ (2n+1) e^{−(2n+1)²π²t/(8u²)}.
/// Returns (bracket Σ, tail bound on Σ, terms); caller applies the prefactor.
fn sym_density_spectral_bracket(q: f64) -> (f64, f64, usize) {
    // q = π²t/(8u²); alternating with decreasing terms for q ≥ π²·REGIME_SPLIT/8
    let mut sum = 0.0;
    let mut n = 0usize;
    loop {
        let m = (2 * n + 1) as f64;
        let term = m * (-(m * m - 1.0) * q).exp();
        sum += if n.is_multiple_of(2) { term } else { -term };
        let next = (m + 2.0) * (-((m + 2.0) * (m + 2.0) - 1.0) * q).exp();
        n += 1;
        if next < TERM_EPS || n > 20_000 {
            return (sum, next, n);
        }
    }
}

/// Reflection form: (4/√t) Σ_{k≥0} (−1)^k (2k+1) φ((2k+1)u/√t).
/// Returns (bracket Σ e^{…}, tail bound, terms) with the k=0 Gaussian factored out.
fn sym_density_reflection_bracket(r: f64) -> (f64, f64, usize) {
    // r = u²/(2t); terms (2k+1)e^{−((2k+1)²−1)r}, alternating, decreasing
    let mut sum = 0.0;
    let mut k = 0usize;
    loop {
        let m = (2 * k + 1) as f64;
        let term = m * (-(m * m - 1.0) * r).exp();
        sum += if k.is_multiple_of(2) { term } else { -term };
        let next = (m + 2.0) * (-((m + 2.0) * (m + 2.0) - 1.0) * r).exp();
        k += 1;
        if next < TERM_EPS || k > 10_000 {
            return (sum, next, k);
        }
    }
}

/// ∂/∂u P₀[η_(−u,u) > t] ≥ 0; integrates to 1 over u ∈ (0, ∞).
pub fn sym_eta_density_du(u: f64, t: f64) -> Result<SeriesEvaluation> {
    check_two_sided(u, u)?;
    check_time("t", t, false)?;
    let s = t / (4.0 * u * u);
    if s >= REGIME_SPLIT {
        let q = PI * PI * t / (8.0 * u * u);
        let (sum, tail, terms) = sym_density_spectral_bracket(q);
        let pref = PI * t / (u * u * u) * (-q).exp();
        Ok(SeriesEvaluation {
            value: pref * sum,
            truncation_bound: pref * tail,
            terms,
            regime: Regime::Spectral,
        })
    } else {
        let r = u * u / (2.0 * t);
        let (sum, tail, terms) = sym_density_reflection_bracket(r);
        let pref = 4.0 / t.sqrt() * norm_pdf(u / t.sqrt());
        Ok(SeriesEvaluation {
            value: pref * sum,
            truncation_bound: pref * tail,
            terms,
            regime: Regime::Reflection,
        })
    }
}

/// log ∂/∂u P₀[η_(−u,u) > t]; −∞ where the density underflows all scales.
pub fn sym_eta_log_density_du(u: f64, t: f64) -> Result<LogSeriesEvaluation> {
    check_two_sided(u, u)?;
    check_time("t", t, false)?;
    let s = t / (4.0 * u * u);
    if s >= REGIME_SPLIT {
        let q = PI * PI * t / (8.0 * u * u);
        let (sum, tail, terms) = sym_density_spectral_bracket(q);
        if sum <= 0.0 {
            return Ok(LogSeriesEvaluation {
                log_value: f64::NEG_INFINITY,
                rel_bound: 0.0,
                terms,
                regime: Regime::Spectral,
            });
        }
        Ok(LogSeriesEvaluation {
            log_value: (PI * t).ln() - 3.0 * u.ln() - q + sum.ln(),
            rel_bound: tail / sum,
            terms,
            regime: Regime::Spectral,
        })
    } else {
        let r = u * u / (2.0 * t);
        let (sum, tail, terms) = sym_density_reflection_bracket(r);
        if sum <= 0.0 {
            return Ok(LogSeriesEvaluation {
                log_value: f64::NEG_INFINITY,
                rel_bound: 0.0,
                terms,
                regime: Regime::Reflection,
            });
        }
        let log_pref = (4.0 / t.sqrt()).ln() - 0.5 * (2.0 * PI).ln() - r;
        Ok(LogSeriesEvaluation {
            log_value: log_pref + sum.ln(),
            rel_bound: tail / sum,
            terms,
            regime: Regime::Reflection,
        })
    }
}

// ---------------------------------------------------------------------------
// unit-interval exit density, both regimes
// ---------------------------------------------------------------------------

/// Spectral exit density on (0,1): f(s) = Σ_{k odd} 2kπ sin(kπx) e^{−k²π²s/2}.
fn unit_density_spectral(x: f64, s: f64) -> (f64, f64, usize) {
    let c = PI * PI * s / 2.0;
    let mut sum = 0.0;
    let mut k = 1usize;
    loop {
        let m = k as f64;
        sum += 2.0 * m * PI * (m * PI * x).sin() * (-m * m * c).exp();
        let mnext = (k + 2) as f64;
        // consecutive odd-term ratio ≤ (1+2/m')e^{−(4m'+4)c} — geometric cap
        let ratio = (1.0 + 2.0 / mnext) * (-(4.0 * mnext + 4.0) * c).exp();
        let tail = 2.0 * PI * mnext * (-mnext * mnext * c).exp()
            / (1.0 - ratio.min(0.999_999));
        k += 2;
        if tail < TERM_EPS * sum.abs().max(1.0) || k > 40_001 {
            return (sum, tail, k / 2);
        }
    }
}

/// Reflection exit density on (0,1): image sum of first-passage kernels,
///   f = (1/(2s^{3/2})) Σ_k [(1−x−2k)φ(a_k) + (x+2k)φ(b_k) − (1+x−2k)φ(c_k) + (x−2k)φ(d_k)].
fn unit_density_reflection(x: f64, s: f64) -> (f64, f64, usize) {
    let rs = s.sqrt();
    let g = |c: f64| c * norm_pdf(c / rs);
    let bracket = |k: f64| {
        g(1.0 - x - 2.0 * k) + (x + 2.0 * k) * norm_pdf((x + 2.0 * k) / rs) - g(1.0 + x - 2.0 * k)
            + g(x - 2.0 * k)
    };
    let mut sum = bracket(0.0);
    let mut k = 1usize;
    loop {
        let kk = k as f64;
        sum += bracket(kk) + bracket(-kk);
        // all |arguments| of the next images exceed 2k−1; each of 8 terms is
        // ≤ (2k+3)φ((2k−1)/√s)
        let tail = 8.0 * (2.0 * kk + 3.0) * norm_pdf((2.0 * kk - 1.0) / rs);
        k += 1;
        if tail < TERM_EPS * sum.abs().max(f64::MIN_POSITIVE) || k > 10_000 {
            return (sum / (2.0 * s * rs), tail / (2.0 * s * rs), 2 * k - 1);
        }
    }
}

fn unit_density_parts(x: f64, s: f64) -> (f64, f64, usize, Regime) {
    if s >= REGIME_SPLIT {
        let (v, b, n) = unit_density_spectral(x, s);
        (v, b, n, Regime::Spectral)
    } else {
        let (v, b, n) = unit_density_reflection(x, s);
        (v, b, n, Regime::Reflection)
    }
}

/// log exit density on (0,1), spectral regime factored by e^{−π²s/2}.
fn unit_log_density(x: f64, s: f64) -> f64 {
    if s >= REGIME_SPLIT {
        let c = PI * PI * s / 2.0;
        let mut bracket = 0.0;
        let mut k = 1usize;
        loop {
            let m = k as f64;
            bracket += 2.0 * m * PI * (m * PI * x).sin() * (-(m * m - 1.0) * c).exp();
            let mnext = (k + 2) as f64;
            let tail = 2.0 * PI * mnext * (-(mnext * mnext - 1.0) * c).exp();
            k += 2;
            if tail < TERM_EPS * bracket.abs().max(f64::MIN_POSITIVE) || k > 40_001 {
                break;
            }
        }
        if bracket <= 0.0 {
            return f64::NEG_INFINITY;
        }
        -c + bracket.ln()
    } else {
        let (v, _, _) = unit_density_reflection(x, s);
        if v <= 0.0 {
            f64::NEG_INFINITY
        } else {
            v.ln()
        }
    }
}

// ---------------------------------------------------------------------------
// eigenfunction-expansion CDF and density on a SpectralDomain (window-guarded)
// ---------------------------------------------------------------------------

fn check_window(domain: &SpectralDomain, t: f64) -> Result<()> {
    let min_t = WINDOW_FACTOR * domain.min_side() * domain.min_side();
    if t < min_t {
        return Err(Error::BelowValidityWindow { t, min_t });
    }
    Ok(())
}

/// Per-axis geometric bound Σ_{k≥m} e^{−c k² t} ≤ e^{−c m² t}/(1 − e^{−c(2m+1)t}).
fn axis_tail(c: f64, t: f64, m: usize) -> f64 {
    let m = m as f64;
    let lead = (-c * m * m * t).exp();
    let ratio = (-c * (2.0 * m + 1.0) * t).exp();
    lead / (1.0 - ratio)
}

/// Rigorous bound on Σ over all modes with some per-axis index > K of e^{−λt},
/// times the coefficient cap (4/π)^d.
fn mode_tail_bound(domain: &SpectralDomain, t: f64) -> f64 {
    let k = domain.truncation_per_axis();
    let axes = domain.geometry().axes();
    let cs: Vec<f64> = axes.iter().map(|(a, b)| PI * PI / (2.0 * (b - a) * (b - a))).collect();
    let d = cs.len();
    let coeff_cap = (4.0 / PI).powi(d as i32);
    let mut total = 0.0;
    for i in 0..d {
        let mut part = axis_tail(cs[i], t, k + 1);
        for (j, &cj) in cs.iter().enumerate() {
            if j != i {
                part *= axis_tail(cj, t, 1);
            }
        }
        total += part;
    }
    coeff_cap * total
}

/// Survival series Σ_k e^{−λ_k t} ψ_k(z) ∫ψ_k over the truncated mode list.
fn eigen_survival_series(domain: &SpectralDomain, z: &[f64], t: f64) -> Result<(f64, usize)> {
    let mut sum = 0.0;
    let mut used = 0usize;
    for m in domain.modes() {
        if m.integral == 0.0 {
            continue;
        }
        let w = (-m.eigenvalue * t).exp();
        if w == 0.0 {
            break; // modes are sorted; everything further underflows
        }
        sum += w * domain.psi(m, z)? * m.integral;
        used += 1;
    }
    Ok((sum, used))
}

/// P_z[τ_D ≤ t] = 1 − Σ_k e^{−λ_k t} ψ_k(z) ∫ψ_k, eigenfunction route.
///
/// Valid for t ≥ 0.05·(min side)²; below the window the call errors rather
/// than returning a silently-cancelled value.
pub fn bm_exit_cdf(domain: &SpectralDomain, z: &[f64], t: f64) -> Result<SeriesEvaluation> {
    check_time("t", t, true)?;
    check_window(domain, t)?;
    let (survival, used) = eigen_survival_series(domain, z, t)?;
    let bound = mode_tail_bound(domain, t);
    Ok(SeriesEvaluation {
        value: clamp_probability(1.0 - survival, bound)?,
        truncation_bound: bound,
        terms: used,
        regime: Regime::Spectral,
    })
}

/// Exit density f(t) = Σ_k λ_k e^{−λ_k t} ψ_k(z) ∫ψ_k, eigenfunction route,
/// same validity window as [`bm_exit_cdf`].
pub fn bm_exit_density(domain: &SpectralDomain, z: &[f64], t: f64) -> Result<SeriesEvaluation> {
    check_time("t", t, false)?;
    check_window(domain, t)?;
    let mut sum = 0.0;
    let mut used = 0usize;
    for m in domain.modes() {
        if m.integral == 0.0 {
            continue;
        }
        let w = m.eigenvalue * (-m.eigenvalue * t).exp();
        if w == 0.0 && m.eigenvalue * t > 1.0 {
            break;
        }
        sum += w * domain.psi(m, z)? * m.integral;
        used += 1;
    }
    // λ e^{−λt} ≤ (2/(et)) e^{−λt/2} turns the density tail into the CDF bound at t/2
    let bound = 2.0 / (std::f64::consts::E * t) * mode_tail_bound(domain, t / 2.0);
    if sum < -bound {
        return Err(Error::Numerics(format!(
            "density series {sum} below zero beyond its truncation bound {bound}"
        )));
    }
    Ok(SeriesEvaluation {
        value: sum.max(0.0),
        truncation_bound: bound,
        terms: used,
        regime: Regime::Spectral,
    })
}

// ---------------------------------------------------------------------------
// full-range (every t > 0) interval/box laws via per-axis dual-regime forms
// ---------------------------------------------------------------------------

pub(crate) fn axis_coords(domain: &SpectralDomain, z: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !domain.contains(z) {
        return Err(Error::PointOutsideDomain { point: z.to_vec() });
    }
    Ok(domain
        .geometry()
        .axes()
        .iter()
        .zip(z.iter())
        .map(|(&(a, b), &zi)| ((zi - a) / (b - a), b - a))
        .collect())
}

/// P_z[τ_D > t] for an interval or box, valid at every t ≥ 0
/// (dual-regime per axis — no validity window).
pub fn survival(domain: &SpectralDomain, z: &[f64], t: f64) -> Result<f64> {
    check_time("t", t, true)?;
    let axes = axis_coords(domain, z)?;
    let mut p = 1.0;
    for (x, len) in axes {
        let (v, b, _, _) = unit_survival_parts(x, t / (len * len));
        p *= clamp_probability(v, b)?;
    }
    Ok(p)
}

/// log P_z[τ_D > t], exact in log space at every t.
pub fn log_survival(domain: &SpectralDomain, z: &[f64], t: f64) -> Result<f64> {
    check_time("t", t, true)?;
    let axes = axis_coords(domain, z)?;
    let mut lp = 0.0;
    for (x, len) in axes {
        lp += interval_log_survival(x, t / (len * len))?.log_value;
    }
    Ok(lp)
}

/// Exit density of τ_D at t, every t > 0; for boxes,
/// f = Σ_i f_i Π_{j≠i} S_j over the per-axis interval laws.
pub fn exit_density(domain: &SpectralDomain, z: &[f64], t: f64) -> Result<f64> {
    check_time("t", t, false)?;
    let axes = axis_coords(domain, z)?;
    let per_axis: Vec<(f64, f64)> = axes
        .iter()
        .map(|&(x, len)| {
            let s = t / (len * len);
            let (fv, _, _, _) = unit_density_parts(x, s);
            let (sv, sb, _, _) = unit_survival_parts(x, s);
            Ok((fv.max(0.0) / (len * len), clamp_probability(sv, sb)?))
        })
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for i in 0..per_axis.len() {
        let mut term = per_axis[i].0;
        for (j, &(_, sj)) in per_axis.iter().enumerate() {
            if j != i {
                term *= sj;
            }
        }
        total += term;
    }
    Ok(total)
}

/// log exit density of τ_D at t, every t > 0.
pub fn log_exit_density(domain: &SpectralDomain, z: &[f64], t: f64) -> Result<f64> {
    check_time("t", t, false)?;
    let axes = axis_coords(domain, z)?;
    let log_f: Vec<f64> = axes
        .iter()
        .map(|&(x, len)| unit_log_density(x, t / (len * len)) - 2.0 * len.ln())
        .collect();
    let log_s: Vec<f64> = axes
        .iter()
        .map(|&(x, len)| interval_log_survival(x, t / (len * len)).map(|e| e.log_value))
        .collect::<Result<_>>()?;
    let total_log_s: f64 = log_s.iter().sum();
    let parts: Vec<f64> = log_f
        .iter()
        .zip(log_s.iter())
        .map(|(&lf, &ls)| lf + total_log_s - ls)
        .collect();
    Ok(log_sum_exp(&parts))
}

/// Fast unit-interval survival value for samplers (args pre-validated).
pub(crate) fn unit_survival_value(x: f64, s: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    if s <= 0.0 {
        return 1.0;
    }
    let (v, _, _, _) = unit_survival_parts(x, s);
    v.clamp(0.0, 1.0)
}
