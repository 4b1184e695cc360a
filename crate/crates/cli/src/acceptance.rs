//! The acceptance suite: nine numbered checks covering the closed-form
//! asymptotics, the Tauberian transform, the subordination quadrature, the
//! exact-inversion sampler, and the cross-cutting inequalities.
//!
//! `ibm-exit verify` and the `acceptance` integration-test target both call
//! [`run_item`], so the CLI report and the test suite cannot drift apart.
//! Items never panic on numerical failure: execution errors become failed
//! reports, and the suite continues with the remaining items.
//!
//! Expected values fall into three classes: closed forms asserted directly,
//! independently derived oracle values, and reproducibility pins measured
//! once from a converged run and guarded by a band far tighter than the
//! acceptance tolerance itself.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;
use std::time::Instant;

use ibm_exit::exit_laws::{bm_exit_cdf, interval_survival, sym_eta_density_du};
use ibm_exit::laplace::{
    log_asym_base, log_asym_tail, log_asym_tail_cosine, log_asym_tail_linear, numeric_oracle,
    Integrand,
};
use ibm_exit::montecarlo::{
    estimate_process_survival, estimate_survival, sample_interval_exit, CounterRng, Process,
};
use ibm_exit::predictors::{
    bessel_zero, exp_power_btbm_constant, predict_bounded, predict_twisted,
    sharp_prefactor_bracket, TwistedParams,
};
use ibm_exit::quad;
use ibm_exit::spectra::SpectralDomain;
use ibm_exit::subordination::{
    btbm_survival_density, btbm_survival_tail, ibm_survival_symmetrized, log_scaled,
    scaled_ratio, tail_transfer_prediction, Estimate, QuadratureConfig, TailLaw,
};
use ibm_exit::tauberian::{debruijn_forward, log_corrected_rate_constant, SmallBallLaw};
use serde::Serialize;

/// Perturbations injected into the checks to demonstrate that the harness
/// notices a wrong constant; the default is the identity.
#[derive(Debug, Clone, Copy)]
pub struct Fault {
    /// Multiplies the sharp bounded-interval prefactor C(z) inside item 3.
    pub scale_sharp_constant: f64,
}

impl Default for Fault {
    fn default() -> Self {
        Self { scale_sharp_constant: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// One line per sub-check (`pass:`/`FAIL:`) or context (`info:`).
    pub details: Vec<String>,
    pub runtime_s: f64,
}

/// Top-level document written by `ibm-exit verify --json`.
#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub schema_version: u32,
    pub passed: bool,
    pub fault_scale_sharp_constant: f64,
    pub items: Vec<ItemReport>,
}

impl SuiteReport {
    pub fn new(fault: Fault, items: Vec<ItemReport>) -> Self {
        Self {
            suite: "acceptance",
            schema_version: 1,
            passed: items.iter().all(|i| i.passed),
            fault_scale_sharp_constant: fault.scale_sharp_constant,
            items,
        }
    }
}

pub const ALL_ITEMS: [u32; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

struct Checker {
    details: Vec<String>,
    passed: bool,
}

impl Checker {
    fn new() -> Self {
        Self { details: Vec::new(), passed: true }
    }

    fn check(&mut self, ok: bool, msg: String) {
        self.passed &= ok;
        self.details.push(format!("{} {msg}", if ok { "pass:" } else { "FAIL:" }));
    }

    fn info(&mut self, msg: String) {
        self.details.push(format!("info: {msg}"));
    }

    fn close_rel(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        let dev = (value / target - 1.0).abs();
        self.check(
            dev.is_finite() && dev <= tol,
            format!("{label}: {value:.9} vs {target:.9} (rel dev {dev:.2e}, tol {tol:.0e})"),
        );
    }

    fn close_abs(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        let dev = (value - target).abs();
        self.check(
            dev.is_finite() && dev <= tol,
            format!("{label}: {value:.12} vs {target:.12} (abs dev {dev:.2e}, tol {tol:.0e})"),
        );
    }
}

pub fn run_item(id: u32, fault: &Fault) -> ItemReport {
    type ItemFn = fn(&Fault, &mut Checker) -> anyhow::Result<()>;
    let (name, f): (&'static str, ItemFn) = match id {
        1 => ("laplace-closed-forms", item_laplace),
        2 => ("debruijn-forward-map", item_debruijn),
        3 => ("bounded-interval-sharp-law", item_bounded_sharp),
        4 => ("polynomial-tail-slope", item_polynomial_slope),
        5 => ("stretched-tail-constant", item_stretched_constant),
        6 => ("quadrature-vs-montecarlo", item_quad_vs_mc),
        7 => ("exact-law-suite", item_exact_laws),
        8 => ("algebraic-identities", item_identities),
        9 => ("factor-two-inequality", item_factor_two),
        other => panic!("acceptance item ids run 1..=9, got {other}"),
    };
    let start = Instant::now();
    let mut c = Checker::new();
    if let Err(e) = f(fault, &mut c) {
        c.check(false, format!("execution error: {e:#}"));
    }
    ItemReport {
        id,
        name,
        passed: c.passed,
        details: c.details,
        runtime_s: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(fault: &Fault) -> Vec<ItemReport> {
    ALL_ITEMS.iter().map(|&id| run_item(id, fault)).collect()
}

// ---------------------------------------------------------------------------
// shared fixtures
// ---------------------------------------------------------------------------

fn unit_domain() -> SpectralDomain {
    SpectralDomain::unit_interval(48)
}

/// Matched iterated/Brownian-time quadrature evaluations at one t, used by
/// items 3 and 6 and re-checked pairwise by item 9.
pub struct QuadPair {
    pub t: f64,
    pub ibm: Estimate,
    pub btbm: Estimate,
}

const LARGE_T_GRID: [f64; 3] = [1e2, 1e3, 1e4];

/// Pinned small time where both survivals sit inside [0.05, 0.5] on the
/// unit interval from the center.
const SMALL_T: f64 = 0.1;

static LARGE_T_PAIRS: OnceLock<Result<Vec<QuadPair>, String>> = OnceLock::new();
static SMALL_T_PAIRS: OnceLock<Result<Vec<QuadPair>, String>> = OnceLock::new();

fn pairs_at(ts: &[f64]) -> Result<Vec<QuadPair>, String> {
    let d = unit_domain();
    // 1e-8 rather than the 1e-9 default: the inner stage of the nested
    // iterated-process integral cannot certify the 1e-10 sub-tolerance a
    // 1e-9 run asks of it in f64, so the convergence flag would be false
    // even though the values agree to nine digits. 1e-8 certifies cleanly.
    let q = QuadratureConfig { tol_rel: 1e-8, ..Default::default() };
    ts.iter()
        .map(|&t| {
            let ibm = ibm_survival_symmetrized(&d, &[0.5], t, &q).map_err(|e| e.to_string())?;
            let btbm = btbm_survival_density(&d, &[0.5], t, &q).map_err(|e| e.to_string())?;
            Ok(QuadPair { t, ibm, btbm })
        })
        .collect()
}

fn large_t_pairs() -> anyhow::Result<&'static [QuadPair]> {
    match LARGE_T_PAIRS.get_or_init(|| pairs_at(&LARGE_T_GRID)) {
        Ok(v) => Ok(v),
        Err(e) => Err(anyhow::anyhow!("bounded-interval quadrature failed: {e}")),
    }
}

fn small_t_pairs() -> anyhow::Result<&'static [QuadPair]> {
    match SMALL_T_PAIRS.get_or_init(|| pairs_at(&[SMALL_T])) {
        Ok(v) => Ok(v),
        Err(e) => Err(anyhow::anyhow!("small-time quadrature failed: {e}")),
    }
}

// ---------------------------------------------------------------------------
// items
// ---------------------------------------------------------------------------

const RATIO_GRID: [f64; 5] = [1e2, 1e3, 1e4, 1e5, 1e6];
const ORACLE_TOL: f64 = 1e-9;

/// Item 1 — the four closed-form Laplace-method asymptotics against the
/// brute-force oracle: ratios approach 1 monotonically along the grid,
/// within 1% by 10⁴ and 0.2% by 10⁶.
fn item_laplace(_: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    // fn-pointer closures cannot capture, so each re-derives the principal
    // eigenvalue π²/2 of the unit interval locally.
    type LawFn = fn(f64) -> anyhow::Result<(Estimate, f64)>;
    let families: [(&str, LawFn); 4] = [
        ("base", |v| {
            Ok((numeric_oracle(&Integrand::Base { lambda: v }, ORACLE_TOL)?, log_asym_base(v)?))
        }),
        ("tail", |v| {
            let hp = PI * PI / 2.0;
            Ok((
                numeric_oracle(&Integrand::Tail { a: hp, b: hp, t: v }, ORACLE_TOL)?,
                log_asym_tail(hp, hp, v)?,
            ))
        }),
        ("tail-linear", |v| {
            let hp = PI * PI / 2.0;
            Ok((
                numeric_oracle(&Integrand::TailLinear { a: hp, b: hp, t: v }, ORACLE_TOL)?,
                log_asym_tail_linear(hp, hp, v)?,
            ))
        }),
        ("tail-cosine", |v| {
            let hp = PI * PI / 2.0;
            Ok((
                numeric_oracle(&Integrand::TailCosine { k: 0.25, lambda_d: hp, t: v }, ORACLE_TOL)?,
                log_asym_tail_cosine(0.25, hp, v)?,
            ))
        }),
    ];
    for (name, eval) in families {
        let mut devs = Vec::new();
        for &v in &RATIO_GRID {
            let (est, asym) = eval(v)?;
            c.check(est.converged, format!("{name}: oracle converged at {v:.0e}"));
            devs.push(((est.log_value - asym).exp() - 1.0).abs());
        }
        for (k, w) in devs.windows(2).enumerate() {
            c.check(
                w[1] < w[0],
                format!(
                    "{name}: |ratio−1| decreases {:.3e} → {:.3e} ({:.0e} → {:.0e})",
                    w[0],
                    w[1],
                    RATIO_GRID[k],
                    RATIO_GRID[k + 1]
                ),
            );
        }
        c.check(devs[2] <= 0.01, format!("{name}: |ratio−1| = {:.3e} ≤ 1e-2 at 1e4", devs[2]));
        c.check(devs[4] <= 0.002, format!("{name}: |ratio−1| = {:.3e} ≤ 2e-3 at 1e6", devs[4]));
    }
    Ok(())
}

/// Item 2 — the de Bruijn forward map on the interval small-deviation law
/// against the exact transform `E[e^{−λη}] = 1/cosh √(2λ)` from the center
/// of (−1, 1).
fn item_debruijn(_: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    let law = SmallBallLaw::new(1.0, 0.0, 0.5)?;
    let transform = debruijn_forward(&law);
    c.close_abs("mapped transform constant √2", transform.constant, 2.0f64.sqrt(), 1e-14);
    c.close_abs("mapped transform power 1/2", transform.lambda_power, 0.5, 1e-14);
    let lambda = 1e4f64;
    let s = (2.0 * lambda).sqrt();
    // log(1/cosh s) = −s + log 2 − log(1 + e^{−2s})
    let exact = -s + LN_2 - (-2.0 * s).exp().ln_1p();
    let predicted = transform.log_transform(lambda)?;
    c.close_rel("log E[e^{−λη}] at λ=1e4 vs −√(2λ)", exact, predicted, 0.01);
    Ok(())
}

/// Pinned 4-digit reference for the bounded-interval iterated log-rate
/// (3/2)(π²λ²)^{1/3} at λ = π²/2; it agrees with the computed rate to
/// 0.04%, far inside the 10% gate below.
const PINNED_LOG_RATE: f64 = -9.3298;

/// Sharp-constant ratio R(10⁴)/C(½) frozen from a converged run at relative
/// tolerance 1e-8. The ±3% band is a determinism guard and is what makes a
/// 10% perturbation of C(z) — the documented fault injection — detectable.
const PINNED_RATIO_AT_1E4: f64 = 1.007046;

/// Item 3 — the iterated-process survival on (0,1) from z = ½: rate-level
/// scaled logs within 10% of the pinned constant at t = 10⁴, and the sharp
/// prefactor ratio approaching 1 monotonically into [0.5, 2].
fn item_bounded_sharp(fault: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    let d = unit_domain();
    let preds = predict_bounded(&d, &[0.5])?;
    let sharp = &preds.ibm_sharp;
    let c_z = sharp.prefactor_constant.expect("sharp law carries a constant")
        * fault.scale_sharp_constant;
    let pairs = large_t_pairs()?;
    for p in pairs {
        c.check(p.ibm.converged, format!("iterated quadrature converged at t={:.0e}", p.t));
    }
    let last = pairs.last().expect("grid non-empty");
    let scaled = log_scaled(&last.ibm, last.t, 1.0 / 3.0, 0.0)?;
    c.close_rel("t^{-1/3} log P at t=1e4", scaled, PINNED_LOG_RATE, 0.10);
    let ratios: Vec<f64> = pairs
        .iter()
        .map(|p| scaled_ratio(&p.ibm, p.t, sharp).map(|r| r / c_z))
        .collect::<Result<_, _>>()?;
    for (p, r) in pairs.iter().zip(&ratios) {
        c.info(format!("prefactor ratio R(t)/C at t={:.0e}: {r:.6}", p.t));
    }
    for w in ratios.windows(2) {
        c.check(
            (w[1] - 1.0).abs() < (w[0] - 1.0).abs(),
            format!("ratio strictly closer to 1: {:.4} then {:.4}", w[0], w[1]),
        );
    }
    let final_ratio = *ratios.last().expect("grid non-empty");
    c.check(
        (0.5..=2.0).contains(&final_ratio),
        format!("final ratio {final_ratio:.4} within [0.5, 2]"),
    );
    c.close_rel("final ratio reproducibility pin", final_ratio, PINNED_RATIO_AT_1E4, 0.03);
    Ok(())
}

/// Item 4 — polynomial outer tail (c = 2): the fitted log-log slope of the
/// transferred survival over t ∈ {10², …, 10⁶} is −1 within 5%.
fn item_polynomial_slope(_: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    let law = TailLaw::polynomial(2.0)?;
    let q = QuadratureConfig::default();
    let mut pts = Vec::new();
    for &t in &RATIO_GRID {
        let est = btbm_survival_tail(&law, t, &q)?;
        c.check(est.converged, format!("tail quadrature converged at t={t:.0e}"));
        pts.push((t.ln(), est.log_value));
    }
    let slope = crate::run::ls_slope(&pts).expect("five grid points");
    c.close_rel("fitted slope of log P vs log t", slope, -1.0, 0.05);
    Ok(())
}

/// Item 5 — stretched-logarithmic outer tail (c = 1, p = 2): the scaled
/// quantity approaches the transferred constant monotonically and lands
/// within 25% at t = 10⁸.
fn item_stretched_constant(_: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    let law = TailLaw::stretched_log(1.0, 2.0)?;
    let pred = tail_transfer_prediction(&law)?;
    let q = QuadratureConfig::default();
    let mut gaps = Vec::new();
    let mut final_ratio = f64::NAN;
    for &t in &[1e4, 1e6, 1e8] {
        let est = btbm_survival_tail(&law, t, &q)?;
        c.check(est.converged, format!("tail quadrature converged at t={t:.0e}"));
        let scaled = pred.scaled(t, est.log_value)?;
        let ratio = scaled / pred.rate;
        c.info(format!(
            "scaled log P at t={t:.0e}: {scaled:.4} (predictor {:.4}, ratio {ratio:.4})",
            pred.rate
        ));
        gaps.push((ratio - 1.0).abs());
        final_ratio = ratio;
    }
    for w in gaps.windows(2) {
        c.check(w[1] < w[0], format!("approach monotone: gap {:.4} then {:.4}", w[0], w[1]));
    }
    c.check(
        (final_ratio - 1.0).abs() <= 0.25,
        format!("final ratio {final_ratio:.4} within 25% of 1"),
    );
    Ok(())
}

const MC_SAMPLES: u64 = 100_000;
const MC_SEED: u64 = 2_718_281_828;

/// Item 6 — iterated and Brownian-time quadrature survivals against the
/// exact-inversion sampler (10⁵ paths) at a time where P ∈ [0.05, 0.5].
fn item_quad_vs_mc(_: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    let d = unit_domain();
    let pair = &small_t_pairs()?[0];
    for (process, est, label) in
        [(Process::Ibm, &pair.ibm, "iterated"), (Process::Btbm, &pair.btbm, "Brownian-time")]
    {
        let p_quad = est.log_value.exp();
        c.check(
            (0.05..=0.5).contains(&p_quad),
            format!("{label} quadrature P(t={SMALL_T}) = {p_quad:.4} within [0.05, 0.5]"),
        );
        let mc = estimate_process_survival(&d, &[0.5], process, SMALL_T, MC_SAMPLES, MC_SEED)?;
        let z = (mc.p_hat - p_quad) / mc.std_err;
        c.check(
            z.abs() <= 3.0,
            format!(
                "{label}: sampler {:.4} ± {:.4} vs quadrature {p_quad:.4} (z = {z:+.2}, |z| ≤ 3)",
                mc.p_hat, mc.std_err
            ),
        );
    }
    Ok(())
}

/// Item 7 — exact inner/outer law suite: sampler self-consistency, the
/// known mean exit time, the eigenfunction CDF against the dual-regime
/// survival, and the symmetric inner density normalization.
fn item_exact_laws(_: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    // (i) inversion sampler vs the survival series at an interior point
    let exact = interval_survival(0.3, 0.5)?.value;
    let mc = estimate_survival(
        |rng| sample_interval_exit(0.3, rng).expect("0.3 lies inside (0,1)"),
        0.5,
        1_000_000,
        7_654_321,
    )?;
    let z = (mc.p_hat - exact) / mc.std_err;
    c.check(
        z.abs() <= 3.0,
        format!("sampler survival {:.5} vs series {exact:.5} (z = {z:+.2}, |z| ≤ 3)", mc.p_hat),
    );

    // (ii) mean exit time from the center of (0,1) is exactly 1/4
    let n = 200_000u64;
    let (mut sum, mut sumsq) = (0.0f64, 0.0f64);
    for i in 0..n {
        let mut rng = CounterRng::new(24_601, i);
        let tau = sample_interval_exit(0.5, &mut rng)?;
        sum += tau;
        sumsq += tau * tau;
    }
    let mean = sum / n as f64;
    let se = ((sumsq / n as f64 - mean * mean) / n as f64).sqrt();
    let zm = (mean - 0.25) / se;
    c.check(
        zm.abs() <= 3.0,
        format!("mean exit time {mean:.5} vs 1/4 (z = {zm:+.2}, |z| ≤ 3)"),
    );

    // (iii) eigenfunction exit CDF against the dual-regime survival
    let d = unit_domain();
    for t in [0.05, 0.25, 1.0] {
        let cdf = bm_exit_cdf(&d, &[0.5], t)?.value;
        let s = interval_survival(0.5, t)?.value;
        c.close_abs(&format!("P[τ ≤ {t}] two routes"), cdf, 1.0 - s, 1e-10);
    }

    // (iv) the symmetric inner exit-time density integrates to 1
    for t in [0.1f64, 1.0, 10.0] {
        let hi = 8.0 * t.sqrt() + 10.0;
        let knots: Vec<f64> = [0.3, 1.0, 2.0, 4.0].iter().map(|k| k * t.sqrt()).collect();
        let r = quad::integrate(
            &|u| sym_eta_density_du(u, t).map(|s| s.value).unwrap_or(0.0),
            0.0,
            hi,
            &knots,
            1e-10,
            1e-12,
            400,
        );
        c.check(
            r.converged && (r.value - 1.0).abs() <= 1e-8,
            format!("∫ density du at t={t}: {:.12} (|Δ| = {:.2e} ≤ 1e-8)", r.value, (r.value - 1.0).abs()),
        );
    }
    Ok(())
}

/// Item 8 — exact algebraic identities at 1e-13.
fn item_identities(_: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    // (a) prefactor sandwich: ordered, with the three closed-form constants
    for lambda in [0.5, PI * PI / 2.0, 7.0] {
        let (lo, mid, hi) = sharp_prefactor_bracket(lambda);
        c.check(lo < mid && mid < hi, format!("prefactor bracket ordered at λ={lambda:.4}"));
        c.close_rel("lower bracket / λ", lo / lambda, 2.0 * (2.0 * PI / 3.0).sqrt(), 1e-13);
        c.close_rel("middle bracket / λ", mid / lambda, 2.0f64.powf(3.5) / (3.0 * PI).sqrt(), 1e-13);
        c.close_rel("upper bracket / λ", hi / lambda, PI * (2.0 * PI / 3.0).sqrt(), 1e-13);
    }

    // (b) profile-region constant equals the log-corrected Tauberian map
    for p in [0.5, 1.0, 2.0, 3.0] {
        for nu in [0.0, 0.5, 1.0] {
            let j = bessel_zero(nu)?;
            let via_map =
                log_corrected_rate_constant(j * j, p)?.constant * (PI * PI / 8.0).cbrt();
            c.close_rel(
                &format!("corrected-rate map at p={p}, ν={nu}"),
                via_map,
                exp_power_btbm_constant(j * j, p),
                1e-13,
            );
        }
    }

    // (c) fixed factor between the two time-changed rates on twisted domains
    for gamma in [0.5, 1.0, 2.0] {
        for p in [0.2, 0.5, 0.9] {
            let preds = predict_twisted(&TwistedParams::new(gamma, p)?)?;
            let factor = 2.0f64.powf((2.0 * p - 2.0) / (3.0 + p));
            c.close_rel(
                &format!("rate factor 2^((2p−2)/(3+p)) at γ={gamma}, p={p}"),
                preds.btbm.rate / preds.ibm.rate,
                factor,
                1e-13,
            );
        }
    }

    // (d) linear growth pins the polynomial exponent C(1) = 1, halved for
    // the Brownian-time process, and leaves the iterated law one-sided
    let lin = predict_twisted(&TwistedParams::new(1.0, 1.0)?)?;
    c.close_rel("polynomial exponent C(1)", lin.bm.rate, -1.0, 1e-13);
    c.close_rel("Brownian-time exponent", lin.btbm.rate, -0.5, 1e-13);
    c.check(
        lin.ibm.upper_bound_only && !lin.ibm.sharp,
        "iterated law at linear growth is an upper bound only".to_string(),
    );

    // (e) the half-order Bessel zero is π exactly
    c.close_abs("half-order Bessel zero", bessel_zero(0.5)?, PI, 1e-13);
    Ok(())
}

/// Item 9 — the factor-2 inequality P[τ(Z) > t] ≤ 2·P[τ(Z¹) > t] for every
/// quadrature pair evaluated by items 3 and 6.
fn item_factor_two(_: &Fault, c: &mut Checker) -> anyhow::Result<()> {
    let mut all: Vec<&QuadPair> = large_t_pairs()?.iter().collect();
    all.extend(small_t_pairs()?.iter());
    for p in all {
        let slack = 3.0 * (p.ibm.rel_error() + p.btbm.rel_error());
        c.check(
            p.ibm.log_value <= LN_2 + p.btbm.log_value + slack,
            format!(
                "t={:.0e}: log P_iterated = {:.6} ≤ log 2 + log P_Brownian-time = {:.6}",
                p.t,
                p.ibm.log_value,
                LN_2 + p.btbm.log_value
            ),
        );
    }
    Ok(())
}
