//! Exact-in-law Monte Carlo samplers for Brownian, IBM and BTBM exit times,
//! and a deterministic survival estimator.
//!
//! No paths are discretized anywhere: interval exit times are drawn by
//! numerically inverting the exact exit-time CDF, box exits are minima of
//! independent per-axis interval exits, and the time-changed processes are
//! sampled through their subordination structure (draw the outer exit
//! time(s), then one inner exit from the resulting random interval). That
//! makes the estimator a bias-free oracle for the quadrature code paths.
//!
//! Randomness is counter-based: draw `i` under seed `k` is a pure function
//! of `(k, i)`, so partitioning work across any number of workers cannot
//! change the stream and every estimate is bit-reproducible.

use crate::error::{Error, Result};
use crate::exit_laws::{axis_coords, unit_survival_value};
use crate::spectra::SpectralDomain;
use rayon::prelude::*;

/// Counter-based random source for one draw: a pure function of
/// `(seed, index, call-number)`, advanced by [`CounterRng::next_u01`].
#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    index: u64,
    calls: u64,
}

/// 64-bit finalizer with full avalanche (the splitmix64 mixer).
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl CounterRng {
    pub fn new(seed: u64, index: u64) -> Self {
        Self { seed, index, calls: 0 }
    }

    /// Uniform draw in the open interval (0, 1): the high 53 bits of the
    /// mixed counter, centered so neither endpoint is reachable.
    pub fn next_u01(&mut self) -> f64 {
        let h = mix64(mix64(mix64(self.seed) ^ self.index) ^ self.calls);
        self.calls += 1;
        ((h >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }
}

/// CDF of the unit-interval exit time from `x`, `P_x[η ≤ s]`.
fn unit_exit_cdf(x: f64, s: f64) -> f64 {
    1.0 - unit_survival_value(x, s)
}

/// Inverse of the unit-interval exit CDF by bisection: returns `s` with
/// `|P_x[η ≤ s] − q| ≤ 1e-10` (or at the double-precision floor of the
/// CDF near its endpoints, whichever binds first).
///
/// The lower bracket endpoint scales with the squared boundary distance so
/// start points arbitrarily close to the boundary stay covered; the upper
/// endpoint 50 is already past every survival representable in doubles.
pub fn interval_exit_inverse_cdf(x: f64, q: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParameter(format!("start point x = {x} must lie in (0, 1)")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("CDF level q = {q} must lie in (0, 1)")));
    }
    let d = x.min(1.0 - x);
    let mut lo = (d * d * 1e-5).min(1e-8);
    let mut hi = 50.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let c = unit_exit_cdf(x, mid);
        if (c - q).abs() <= 1e-10 {
            return Ok(mid);
        }
        if c < q {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One exact draw of the Brownian exit time from (0, 1) started at `x`.
pub fn sample_interval_exit(x: f64, rng: &mut CounterRng) -> Result<f64> {
    interval_exit_inverse_cdf(x, rng.next_u01())
}

/// Infallible core used by the drivers after validation: draws the domain
/// exit as the minimum over per-axis interval exits (`(x, len)` pairs).
fn draw_domain_exit(coords: &[(f64, f64)], rng: &mut CounterRng) -> f64 {
    coords
        .iter()
        .map(|&(x, len)| {
            len * len
                * interval_exit_inverse_cdf(x, rng.next_u01())
                    .expect("validated coordinates cannot fail inversion")
        })
        .fold(f64::INFINITY, f64::min)
}

/// Draws the inner exit time of a Brownian motion started at 0 from the
/// random interval `(−u, v)` via scaling: `(u+v)²·η_unit(u/(u+v))`.
fn draw_inner_exit(u: f64, v: f64, rng: &mut CounterRng) -> f64 {
    let total = u + v;
    total
        * total
        * interval_exit_inverse_cdf(u / total, rng.next_u01())
            .expect("relative position is interior by construction")
}

/// One exact draw of τ_D(z) for an interval or box domain.
pub fn sample_domain_exit(domain: &SpectralDomain, z: &[f64], rng: &mut CounterRng) -> Result<f64> {
    let coords = axis_coords(domain, z)?;
    Ok(draw_domain_exit(&coords, rng))
}

/// One exact draw of the IBM lifetime: two independent outer exit times
/// (the two branches of the two-sided outer process), then the inner exit
/// from `(−τ⁻, τ⁺)`.
pub fn sample_ibm_exit(domain: &SpectralDomain, z: &[f64], rng: &mut CounterRng) -> Result<f64> {
    let coords = axis_coords(domain, z)?;
    let tau_minus = draw_domain_exit(&coords, rng);
    let tau_plus = draw_domain_exit(&coords, rng);
    Ok(draw_inner_exit(tau_minus, tau_plus, rng))
}

/// One exact draw of the BTBM lifetime: a single outer exit time τ, then
/// the inner exit from the symmetric interval `(−τ, τ)`.
pub fn sample_btbm_exit(domain: &SpectralDomain, z: &[f64], rng: &mut CounterRng) -> Result<f64> {
    let coords = axis_coords(domain, z)?;
    let tau = draw_domain_exit(&coords, rng);
    Ok(sample_symmetric_inner_exit(tau, rng))
}

/// The BTBM inner step with the outer exit forced to a constant `u0`;
/// its law is exactly `η₍₋u₀,u₀₎`. This is the degenerate hook
/// [`sample_btbm_exit`] is built on.
pub fn sample_symmetric_inner_exit(u0: f64, rng: &mut CounterRng) -> f64 {
    draw_inner_exit(u0, u0, rng)
}

/// A Monte Carlo survival estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub std_err: f64,
    pub n: u64,
    pub seed: u64,
}

/// Estimates `P[draw > t]` from `n` independent draws of `sampler`.
///
/// Draw `i` sees a [`CounterRng`] keyed on `(seed, i)`, so the result is a
/// pure function of `(seed, n, t)` — independent of worker count and
/// evaluation order (the reduction is an integer count).
pub fn estimate_survival<S>(sampler: S, t: f64, n: u64, seed: u64) -> Result<McEstimate>
where
    S: Fn(&mut CounterRng) -> f64 + Sync,
{
    if n == 0 {
        return Err(Error::InvalidParameter("sample count n must be at least 1".into()));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("threshold t must be >= 0, got {t}")));
    }
    let survivors: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::new(seed, i);
            u64::from(sampler(&mut rng) > t)
        })
        .sum();
    let p_hat = survivors as f64 / n as f64;
    Ok(McEstimate {
        p_hat,
        std_err: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        n,
        seed,
    })
}

/// Which exit time to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    Bm,
    Ibm,
    Btbm,
}

/// Validated driver: survival estimate for the chosen process on a domain.
pub fn estimate_process_survival(
    domain: &SpectralDomain,
    z: &[f64],
    process: Process,
    t: f64,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    let coords = axis_coords(domain, z)?;
    match process {
        Process::Bm => estimate_survival(|rng| draw_domain_exit(&coords, rng), t, n, seed),
        Process::Ibm => estimate_survival(
            |rng| {
                let tau_minus = draw_domain_exit(&coords, rng);
                let tau_plus = draw_domain_exit(&coords, rng);
                draw_inner_exit(tau_minus, tau_plus, rng)
            },
            t,
            n,
            seed,
        ),
        Process::Btbm => estimate_survival(
            |rng| {
                let tau = draw_domain_exit(&coords, rng);
                draw_inner_exit(tau, tau, rng)
            },
            t,
            n,
            seed,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exit_laws::{bm_exit_cdf, eta_survival, interval_survival, survival};
    use approx::assert_abs_diff_eq;

    fn assert_within_3_sigma(est: &McEstimate, p: f64, label: &str) {
        let sigma = est.std_err.max(1e-12);
        assert!(
            (est.p_hat - p).abs() <= 3.0 * sigma,
            "{label}: p_hat = {} vs exact {p} ({}σ)",
            est.p_hat,
            (est.p_hat - p).abs() / sigma
        );
    }

    #[test]
    fn inversion_round_trips_through_the_cdf() {
        for &x in &[0.5, 0.3, 0.9, 1e-5] {
            for i in 0..2500 {
                let q = (i as f64 + 0.5) / 2500.0;
                let s = interval_exit_inverse_cdf(x, q).unwrap();
                assert!(
                    (unit_exit_cdf(x, s) - q).abs() <= 1e-9,
                    "x = {x}, q = {q}: CDF(inverse) = {}",
                    unit_exit_cdf(x, s)
                );
            }
        }
        // Extreme levels stay inside the bracket and error bound.
        for &q in &[1e-12, 1.0 - 1e-13] {
            let s = interval_exit_inverse_cdf(0.5, q).unwrap();
            assert!((unit_exit_cdf(0.5, s) - q).abs() <= 1e-9);
        }
        assert!(interval_exit_inverse_cdf(0.0, 0.5).is_err());
        assert!(interval_exit_inverse_cdf(0.5, 0.0).is_err());
        assert!(interval_exit_inverse_cdf(0.5, 1.0).is_err());
    }

    #[test]
    fn empirical_survival_matches_series() {
        let (x, s, n) = (0.3, 0.5, 100_000);
        let est = estimate_survival(
            |rng| sample_interval_exit(x, rng).unwrap(),
            s,
            n,
            17,
        )
        .unwrap();
        let exact = interval_survival(x, s).unwrap().value;
        assert_within_3_sigma(&est, exact, "interval exit");
    }

    #[test]
    fn mean_exit_time_is_a_quarter_at_center() {
        // E[η] = x(1−x) = ¼ at the midpoint.
        let n = 100_000u64;
        let (sum, sumsq) = (0..n).fold((0.0f64, 0.0f64), |(s, s2), i| {
            let mut rng = CounterRng::new(99, i);
            let draw = sample_interval_exit(0.5, &mut rng).unwrap();
            (s + draw, s2 + draw * draw)
        });
        let mean = sum / n as f64;
        let var = (sumsq / n as f64 - mean * mean).max(0.0);
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - 0.25).abs() <= 3.0 * se,
            "mean {mean} vs 0.25 (se {se:.2e})"
        );
    }

    #[test]
    fn exit_law_is_symmetric_about_the_midpoint() {
        // Two-sample Kolmogorov–Smirnov: draws from x and 1−x share a law.
        let n = 100_000usize;
        let mut a: Vec<f64> = (0..n)
            .map(|i| sample_interval_exit(0.3, &mut CounterRng::new(5, i as u64)).unwrap())
            .collect();
        let mut b: Vec<f64> = (0..n)
            .map(|i| sample_interval_exit(0.7, &mut CounterRng::new(6, i as u64)).unwrap())
            .collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
        while i < n && j < n {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / n as f64 - j as f64 / n as f64).abs());
        }
        // 1% critical value for equal n: 1.628·√(2/n).
        let crit = 1.628 * (2.0 / n as f64).sqrt();
        assert!(d <= crit, "KS statistic {d:.4} exceeds 1% critical value {crit:.4}");
    }

    #[test]
    fn unit_square_survival_matches_series_product() {
        let d = SpectralDomain::box_domain(&[(0.0, 1.0), (0.0, 1.0)], 32).unwrap();
        let z = [0.5, 0.5];
        let t = 0.3;
        let est = estimate_process_survival(&d, &z, Process::Bm, t, 100_000, 23).unwrap();
        let exact = survival(&d, &z, t).unwrap();
        assert_within_3_sigma(&est, exact, "unit square");
        // Same number through the eigen-series CDF inside its window.
        let via_cdf = 1.0 - bm_exit_cdf(&d, &z, t).unwrap().value;
        assert_abs_diff_eq!(exact, via_cdf, epsilon = 1e-10);
    }

    #[test]
    fn box_exit_is_dominated_by_each_coordinate_exit() {
        let d = SpectralDomain::box_domain(&[(0.0, 1.0), (-1.0, 1.0)], 16).unwrap();
        let z = [0.4, 0.25];
        for i in 0..200 {
            let mut rng = CounterRng::new(321, i);
            let tau = sample_domain_exit(&d, &z, &mut rng).unwrap();
            // Re-draw each coordinate with the same counter stream.
            let mut rng2 = CounterRng::new(321, i);
            let c1 = interval_exit_inverse_cdf(0.4, rng2.next_u01()).unwrap();
            let c2 = 4.0 * interval_exit_inverse_cdf(0.625, rng2.next_u01()).unwrap();
            assert!(tau <= c1 && tau <= c2);
            assert_abs_diff_eq!(tau, c1.min(c2), epsilon = 0.0);
        }
    }

    #[test]
    fn degenerate_btbm_inner_law() {
        let u0 = 0.7;
        let t = 0.5;
        let est = estimate_survival(
            |rng| sample_symmetric_inner_exit(u0, rng),
            t,
            100_000,
            31,
        )
        .unwrap();
        let exact = eta_survival(u0, u0, t).unwrap().value;
        assert_within_3_sigma(&est, exact, "degenerate BTBM inner law");
    }

    #[test]
    fn coupled_monotonicity_under_domain_enlargement() {
        let small = SpectralDomain::unit_interval(8);
        let big = SpectralDomain::interval(-0.1, 1.1, 8).unwrap();
        for i in 0..500 {
            let a = sample_domain_exit(&small, &[0.3], &mut CounterRng::new(7, i)).unwrap();
            let b = sample_domain_exit(&big, &[0.3], &mut CounterRng::new(7, i)).unwrap();
            assert!(a <= b, "draw {i}: enlargement shrank the exit time {a} > {b}");
        }
    }

    #[test]
    fn ibm_dominated_by_twice_btbm_empirically() {
        let d = SpectralDomain::unit_interval(8);
        let t = 0.5;
        let n = 100_000;
        let ibm = estimate_process_survival(&d, &[0.5], Process::Ibm, t, n, 11).unwrap();
        let btbm = estimate_process_survival(&d, &[0.5], Process::Btbm, t, n, 11).unwrap();
        assert!(
            ibm.p_hat <= 2.0 * btbm.p_hat + 3.0 * (ibm.std_err + 2.0 * btbm.std_err),
            "factor-2 violated empirically: {} vs 2·{}",
            ibm.p_hat,
            btbm.p_hat
        );
        // One-branch survival can only be larger.
        assert!(ibm.p_hat <= btbm.p_hat + 3.0 * (ibm.std_err + btbm.std_err));
    }

    #[test]
    fn ibm_empirical_matches_quadrature() {
        use crate::subordination::{ibm_survival, QuadratureConfig};
        let d = SpectralDomain::unit_interval(48);
        let t = 0.1; // P ≈ 0.12, inside the informative band
        let quad = ibm_survival(&d, &[0.5], t, &QuadratureConfig::default()).unwrap();
        let p = quad.value();
        assert!(p > 0.05 && p < 0.5, "test point drifted out of band: {p}");
        let est = estimate_process_survival(&d, &[0.5], Process::Ibm, t, 100_000, 41).unwrap();
        assert_within_3_sigma(&est, p, "IBM quadrature vs MC");
    }

    #[test]
    fn estimator_edges_and_reproducibility() {
        let sampler = |rng: &mut CounterRng| sample_interval_exit(0.5, rng).unwrap();
        let at_zero = estimate_survival(sampler, 0.0, 1000, 1).unwrap();
        assert_eq!(at_zero.p_hat, 1.0);
        assert_eq!(at_zero.std_err, 0.0);
        let at_inf = estimate_survival(sampler, f64::INFINITY, 1000, 1).unwrap();
        assert_eq!(at_inf.p_hat, 0.0);
        assert!(estimate_survival(sampler, 0.5, 0, 1).is_err());
        assert!(estimate_survival(sampler, f64::NAN, 10, 1).is_err());

        // Identical keys give bit-identical results across worker counts.
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let multi = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let p1 = single.install(|| estimate_survival(sampler, 0.25, 40_000, 77).unwrap());
        let p2 = multi.install(|| estimate_survival(sampler, 0.25, 40_000, 77).unwrap());
        assert_eq!(p1.p_hat.to_bits(), p2.p_hat.to_bits());

        // Doubling n halves the standard error (up to the change in p_hat).
        let half = estimate_survival(sampler, 0.25, 40_000, 77).unwrap();
        let full = estimate_survival(sampler, 0.25, 80_000, 77).unwrap();
        let ratio = full.std_err / half.std_err;
        assert!(ratio > 0.6 && ratio < 0.81, "std_err ratio {ratio}");
    }

    #[test]
    fn samplers_reject_invalid_points() {
        let d = SpectralDomain::unit_interval(8);
        let mut rng = CounterRng::new(0, 0);
        assert!(sample_domain_exit(&d, &[1.0], &mut rng).is_err());
        assert!(sample_ibm_exit(&d, &[-0.2], &mut rng).is_err());
        assert!(sample_btbm_exit(&d, &[0.5, 0.5], &mut rng).is_err());
    }
}
