//! Dirichlet spectra of (1/2)Δ on intervals and axis-aligned boxes.
//!
//! On (0, L) the eigenvalues are λ_k = k²π²/(2L²) with orthonormal
//! eigenfunctions ψ_k(x) = √(2/L) sin(kπx/L); box spectra are tensor
//! products (eigenvalues add, eigenfunctions and their integrals multiply).
//! Everything downstream — exit laws, asymptotic predictors, subordination —
//! is driven by the triple (λ_k, ψ_k(z), ∫ψ_k) collected here.

use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Interval { a: f64, b: f64 },
    Box { sides: Vec<(f64, f64)> },
}

impl Geometry {
    pub fn dim(&self) -> usize {
        match self {
            Geometry::Interval { .. } => 1,
            Geometry::Box { sides } => sides.len(),
        }
    }

    /// Per-axis (lo, hi) bounds.
    pub fn axes(&self) -> Vec<(f64, f64)> {
        match self {
            Geometry::Interval { a, b } => vec![(*a, *b)],
            Geometry::Box { sides } => sides.clone(),
        }
    }

    pub fn min_side(&self) -> f64 {
        self.axes().iter().map(|(a, b)| b - a).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        let axes = self.axes();
        z.len() == axes.len() && z.iter().zip(axes).all(|(&x, (a, b))| a < x && x < b)
    }
}

/// One Dirichlet mode: per-axis quantum numbers, total eigenvalue, and ∫_D ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub indices: Vec<usize>,
    pub eigenvalue: f64,
    pub integral: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDomain {
    geometry: Geometry,
    modes: Vec<Mode>,
    truncation_per_axis: usize,
}

fn axis_eigenvalue(k: usize, len: f64) -> f64 {
    let k = k as f64;
    k * k * PI * PI / (2.0 * len * len)
}

/// ∫_a^b √(2/L) sin(kπ(x−a)/L) dx: zero for even k, 2√(2L)/(kπ) for odd k.
fn axis_integral(k: usize, len: f64) -> f64 {
    if k.is_multiple_of(2) {
        0.0
    } else {
        2.0 * (2.0 * len).sqrt() / (k as f64 * PI)
    }
}

fn axis_psi(k: usize, len: f64, x_rel: f64) -> f64 {
    (2.0 / len).sqrt() * (k as f64 * PI * x_rel / len).sin()
}

fn check_axis(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || b <= a {
        return Err(Error::InvalidDomain(format!(
            "side ({a}, {b}) must be a finite interval with positive length"
        )));
    }
    Ok(b - a)
}

impl SpectralDomain {
    /// Interval (a, b) with the first `k_modes` Dirichlet modes.
    pub fn interval(a: f64, b: f64, k_modes: usize) -> Result<Self> {
        Self::new_box(&[(a, b)], k_modes).map(|mut d| {
            d.geometry = Geometry::Interval { a, b };
            d
        })
    }

    pub fn unit_interval(k_modes: usize) -> Self {
        Self::interval(0.0, 1.0, k_modes).expect("unit interval is valid")
    }

    /// Axis-aligned box Π (aᵢ, bᵢ) with `k_per_axis` modes per axis
    /// (k_per_axis^d tensor modes in total), sorted by total eigenvalue.
    pub fn box_domain(sides: &[(f64, f64)], k_per_axis: usize) -> Result<Self> {
        Self::new_box(sides, k_per_axis)
    }

    fn new_box(sides: &[(f64, f64)], k_per_axis: usize) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidDomain("box needs at least one side".into()));
        }
        if k_per_axis == 0 {
            return Err(Error::InvalidParameter("truncation order must be at least 1".into()));
        }
        let lens = sides.iter().map(|&(a, b)| check_axis(a, b)).collect::<Result<Vec<_>>>()?;

        // enumerate all per-axis index combinations 1..=k_per_axis
        let dim = sides.len();
        let total = k_per_axis.pow(dim as u32);
        let mut modes = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rest = flat;
            let mut indices = Vec::with_capacity(dim);
            let mut eigenvalue = 0.0;
            let mut integral = 1.0;
            for len in lens.iter() {
                let k = rest % k_per_axis + 1;
                rest /= k_per_axis;
                indices.push(k);
                eigenvalue += axis_eigenvalue(k, *len);
                integral *= axis_integral(k, *len);
            }
            modes.push(Mode { indices, eigenvalue, integral });
        }
        modes.sort_by(|m, n| {
            m.eigenvalue
                .total_cmp(&n.eigenvalue)
                .then_with(|| m.indices.cmp(&n.indices))
        });

        Ok(SpectralDomain {
            geometry: Geometry::Box { sides: sides.to_vec() },
            modes,
            truncation_per_axis: k_per_axis,
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    /// Modes sorted by eigenvalue, ascending.
    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn truncation_per_axis(&self) -> usize {
        self.truncation_per_axis
    }

    /// Principal Dirichlet eigenvalue λ_D.
    pub fn lambda1(&self) -> f64 {
        self.modes[0].eigenvalue
    }

    pub fn min_side(&self) -> f64 {
        self.geometry.min_side()
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        self.geometry.contains(z)
    }

    fn check_point(&self, z: &[f64]) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::PointOutsideDomain { point: z.to_vec() })
        }
    }

    /// Eigenfunction value ψ_mode(z).
    pub fn psi(&self, mode: &Mode, z: &[f64]) -> Result<f64> {
        self.check_point(z)?;
        let axes = self.geometry.axes();
        let mut v = 1.0;
        for ((&k, &(a, b)), &x) in mode.indices.iter().zip(axes.iter()).zip(z.iter()) {
            v *= axis_psi(k, b - a, x - a);
        }
        Ok(v)
    }

    /// Principal-mode data at z: λ_D, ψ(z), ∫ψ, and A(z) = λ_D ψ(z) ∫ψ,
    /// the constant with P_z[τ_D > t] ~ (A(z)/λ_D) e^{−λ_D t}.
    pub fn principal(&self, z: &[f64]) -> Result<Principal> {
        self.check_point(z)?;
        let m = &self.modes[0];
        debug_assert!(m.indices.iter().all(|&k| k == 1));
        let psi_z = self.psi(m, z)?;
        Ok(Principal {
            lambda: m.eigenvalue,
            psi_z,
            integral: m.integral,
            a_coeff: m.eigenvalue * psi_z * m.integral,
        })
    }
}

/// Ground-state data at a point; `a_coeff` is A(z) = λ_D ψ(z) ∫ψ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Principal {
    pub lambda: f64,
    pub psi_z: f64,
    pub integral: f64,
    pub a_coeff: f64,
}
