//! Adaptive Gauss–Kronrod (7/15) quadrature, in plain and log-space forms.
//!
//! The log-space driver integrates a positive integrand supplied as x ↦ log f(x).
//! Each panel is evaluated relative to its own maximum node value, so integrands
//! whose scale is e^(-1000) or smaller lose nothing to underflow; panel results
//! are combined with log-sum-exp. This is the workhorse behind the subordination
//! integrals and the saddle-point oracles, where the answer itself is far below
//! the smallest positive double.

use crate::special::{log_add_exp, log_sum_exp};

// Kronrod-15 abscissae on [-1, 1] (positive half; node 0 last).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

// Kronrod-15 weights matching XGK.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Embedded Gauss-7 weights (nodes are XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of a quadrature or other deterministic estimate, carried in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    /// log of the (positive) estimated value.
    pub log_value: f64,
    /// log of the absolute error bound/estimate on the value.
    pub log_abs_error: f64,
    /// Number of integrand evaluations spent.
    pub evaluations: u64,
    /// False when the refinement budget ran out before the tolerance was met;
    /// the fields still hold the best available partial result.
    pub converged: bool,
}

impl Estimate {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    pub fn abs_error(&self) -> f64 {
        self.log_abs_error.exp()
    }

    /// Relative error estimate, exp(log_abs_error − log_value).
    pub fn rel_error(&self) -> f64 {
        (self.log_abs_error - self.log_value).exp()
    }
}

/// Plain-space adaptive result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: u64,
    pub converged: bool,
}

fn nodes15(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut xs = [0.0; 15];
    let mut i = 0;
    for (j, &x) in XGK.iter().enumerate() {
        if j == 7 {
            xs[i] = c;
            i += 1;
        } else {
            xs[i] = c - h * x;
            xs[i + 1] = c + h * x;
            i += 2;
        }
    }
    xs
}

/// One GK-15 panel: returns (kronrod, |kronrod − gauss|, Σ w|f|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = 0.0;
    let mut gauss = 0.0;
    let mut resabs = 0.0;
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fsum, fabs) = if j == 7 {
            let v = f(c);
            (v, v.abs())
        } else {
            let v1 = f(c - h * x);
            let v2 = f(c + h * x);
            (v1 + v2, v1.abs() + v2.abs())
        };
        kron += wk * fsum;
        resabs += wk * fabs;
        if j % 2 == 1 || j == 7 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (h * kron, h * (kron - gauss).abs(), h * resabs)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive GK-15 on [a, b] with optional interior starting knots.
///
/// Splits the panel with the largest error estimate until
/// Σ errors ≤ max(tol_abs, tol_rel · |Σ values|) or `max_panels` is reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    knots: &[f64],
    tol_rel: f64,
    tol_abs: f64,
    max_panels: usize,
) -> QuadResult {
    let mut edges: Vec<f64> = std::iter::once(a)
        .chain(knots.iter().cloned().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut evals = 0u64;
    let mut panels: Vec<Panel> = edges
        .windows(2)
        .map(|w| {
            let (v, e, _) = gk15(f, w[0], w[1]);
            evals += 15;
            Panel { a: w[0], b: w[1], value: v, error: e }
        })
        .collect();

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= tol_abs.max(tol_rel * total.abs()) {
            return QuadResult { value: total, abs_error: err, evaluations: evals, converged: true };
        }
        if panels.len() >= max_panels {
            return QuadResult { value: total, abs_error: err, evaluations: evals, converged: false };
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // panel no longer splittable at double precision
            let total: f64 = panels.iter().map(|p| p.value).sum();
            let err: f64 = panels.iter().map(|p| p.error).sum();
            return QuadResult { value: total, abs_error: err, evaluations: evals, converged: false };
        }
        let (v1, e1, _) = gk15(f, pa, mid);
        let (v2, e2, _) = gk15(f, mid, pb);
        evals += 30;
        panels[worst] = Panel { a: pa, b: mid, value: v1, error: e1 };
        panels.push(Panel { a: mid, b: pb, value: v2, error: e2 });
    }
}

#[derive(Debug, Clone, Copy)]
struct LogPanel {
    a: f64,
    b: f64,
    log_value: f64,
    log_error: f64,
}

fn gk15_log<F: Fn(f64) -> f64>(f_log: &F, a: f64, b: f64) -> LogPanel {
    let xs = nodes15(a, b);
    let mut ls = [f64::NEG_INFINITY; 15];
    let mut m = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let l = f_log(x);
        ls[i] = l;
        if l > m {
            m = l;
        }
    }
    if m == f64::NEG_INFINITY {
        return LogPanel { a, b, log_value: f64::NEG_INFINITY, log_error: f64::NEG_INFINITY };
    }
    let h = 0.5 * (b - a);
    let mut kron = 0.0;
    let mut gauss = 0.0;
    // ls is laid out as nodes15: pairs (c−hx, c+hx) at (2j, 2j+1), centre last.
    for j in 0..7 {
        let fsum = (ls[2 * j] - m).exp() + (ls[2 * j + 1] - m).exp();
        kron += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    let fc = (ls[14] - m).exp();
    kron += WGK[7] * fc;
    gauss += WG[3] * fc;
    let log_value = if kron > 0.0 { m + (h * kron).ln() } else { f64::NEG_INFINITY };
    let diff = h * (kron - gauss).abs();
    let log_error = if diff > 0.0 { m + diff.ln() } else { f64::NEG_INFINITY };
    LogPanel { a, b, log_value, log_error }
}

/// Adaptive GK-15 for a positive integrand given in log space.
///
/// Returns log ∫ f with a log-space error estimate. `tol_rel` bounds the
/// relative error on the value (equivalently the absolute error on the log,
/// for small tolerances). `extra_log_error` is folded into the reported bound
/// (used for analytic truncation remainders).
pub fn integrate_log<F: Fn(f64) -> f64>(
    f_log: &F,
    a: f64,
    b: f64,
    knots: &[f64],
    tol_rel: f64,
    max_panels: usize,
    extra_log_error: f64,
) -> Estimate {
    let mut edges: Vec<f64> = std::iter::once(a)
        .chain(knots.iter().cloned().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut evals = 0u64;
    let mut panels: Vec<LogPanel> = edges
        .windows(2)
        .map(|w| {
            evals += 15;
            gk15_log(f_log, w[0], w[1])
        })
        .collect();

    let ln_tol = tol_rel.ln();
    loop {
        let log_total = log_sum_exp(&panels.iter().map(|p| p.log_value).collect::<Vec<_>>());
        let log_err = log_add_exp(
            log_sum_exp(&panels.iter().map(|p| p.log_error).collect::<Vec<_>>()),
            extra_log_error,
        );
        let done = log_err <= log_total + ln_tol
            || (log_total == f64::NEG_INFINITY && log_err == f64::NEG_INFINITY);
        if done {
            return Estimate {
                log_value: log_total,
                log_abs_error: log_err,
                evaluations: evals,
                converged: true,
            };
        }
        if panels.len() >= max_panels {
            return Estimate {
                log_value: log_total,
                log_abs_error: log_err,
                evaluations: evals,
                converged: false,
            };
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.log_error.total_cmp(&y.1.log_error))
            .map(|(i, _)| i)
            .unwrap();
        let LogPanel { a: pa, b: pb, .. } = panels[worst];
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            let log_total = log_sum_exp(&panels.iter().map(|p| p.log_value).collect::<Vec<_>>());
            let log_err = log_add_exp(
                log_sum_exp(&panels.iter().map(|p| p.log_error).collect::<Vec<_>>()),
                extra_log_error,
            );
            return Estimate {
                log_value: log_total,
                log_abs_error: log_err,
                evaluations: evals,
                converged: false,
            };
        }
        evals += 30;
        let left = gk15_log(f_log, pa, mid);
        let right = gk15_log(f_log, mid, pb);
        panels[worst] = left;
        panels.push(right);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        // GK-15 integrates degree ≤ 22 exactly; a loose check on x⁵ over [0,2].
        let r = integrate(&|x: f64| x.powi(5), 0.0, 2.0, &[], 1e-12, 0.0, 100);
        assert!(r.converged);
        assert_relative_eq!(r.value, 64.0 / 6.0, max_relative = 1e-13);
    }

    #[test]
    fn gaussian_tail_adaptive() {
        // ∫₀^∞ e^{−x²} dx = √π/2, truncated far out.
        let r = integrate(&|x: f64| (-x * x).exp(), 0.0, 30.0, &[1.0, 5.0], 1e-13, 0.0, 500);
        assert!(r.converged);
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn log_space_matches_plain_space_when_scales_are_sane() {
        let f = |x: f64| (-x * x).exp() * (1.0 + x).powi(2);
        let plain = integrate(&f, 0.0, 10.0, &[], 1e-12, 0.0, 400);
        let logd = integrate_log(
            &|x: f64| -x * x + 2.0 * (1.0 + x).ln(),
            0.0,
            10.0,
            &[],
            1e-12,
            400,
            f64::NEG_INFINITY,
        );
        assert!(plain.converged && logd.converged);
        assert_relative_eq!(logd.log_value.exp(), plain.value, max_relative = 1e-11);
    }

    #[test]
    fn log_space_survives_huge_negative_scales() {
        // ∫₀^∞ e^{−a(x−3)²−c} dx = √(π/a)·e^{−c} with c = 2000: value ~ e^{−2000}.
        let a = 7.0;
        let c = 2000.0;
        let est = integrate_log(
            &|x: f64| -a * (x - 3.0) * (x - 3.0) - c,
            0.0,
            60.0,
            &[2.0, 3.0, 4.0],
            1e-11,
            800,
            f64::NEG_INFINITY,
        );
        assert!(est.converged);
        let expect_log = 0.5 * (std::f64::consts::PI / a).ln() - c;
        // truncated left tail at 0 is ~e^{−63}·relative — invisible at this tolerance
        assert_relative_eq!(est.log_value, expect_log, max_relative = 1e-12);
        assert!(est.rel_error() < 1e-10);
    }

    #[test]
    fn unreachable_tolerance_reports_partial_result() {
        let r = integrate(&|x: f64| x.abs().sqrt(), -1.0, 1.0, &[], 1e-30, 0.0, 8);
        assert!(!r.converged);
        assert_relative_eq!(r.value, 4.0 / 3.0, max_relative = 1e-3);
    }
}
