//! One-dimensional modal finite-difference solver with perfectly matched
//! layers, used as an independent reference for the approximate models.
//!
//! Solves `u'' + k_N(x)^2 u = -g_N` on `[-L, L]`. Inside the layers the
//! coordinate is stretched by `s(x) = 1 - i alpha(x) / k`, with
//! `alpha(x) = -k (|x| - start)` past `|x| = start`, which turns the equation
//! into `(u' / s)' + s k_N^2 u = -s g_N`. Homogeneous Dirichlet conditions
//! close the outer ends.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{wavenumber_sq, ModeIndex, WidthProfile};

/// Symmetric absorbing layers on `[-end, -start]` and `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmlSpec {
    pub start: f64,
    pub end: f64,
}

impl Default for PmlSpec {
    fn default() -> Self {
        PmlSpec {
            start: 8.0,
            end: 15.0,
        }
    }
}

impl PmlSpec {
    /// Absorption coefficient `alpha(x)` at frequency `k`.
    pub fn alpha(&self, k: f64, x: f64) -> f64 {
        -k * self.depth(x)
    }

    fn depth(&self, x: f64) -> f64 {
        (x.abs() - self.start).max(0.0)
    }

    /// Coordinate stretch `1 - i alpha / k`.
    pub fn stretch(&self, x: f64) -> Complex64 {
        Complex64::new(1.0, self.depth(x))
    }
}

/// Discretization parameters of the reference solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdSettings {
    pub mesh_step: f64,
    pub pml: PmlSpec,
}

impl Default for FdSettings {
    fn default() -> Self {
        FdSettings {
            mesh_step: 1e-3,
            pml: PmlSpec::default(),
        }
    }
}

impl FdSettings {
    fn validate(&self) -> Result<usize> {
        let FdSettings { mesh_step, pml } = *self;
        if !(mesh_step > 0.0 && mesh_step <= 1e-3) {
            return Err(Error::InvalidInput(format!(
                "mesh step must lie in (0, 1e-3], got {mesh_step}"
            )));
        }
        if !(pml.start > 0.0 && pml.end > pml.start) {
            return Err(Error::InvalidInput(format!(
                "layer must satisfy 0 < start < end, got [{}, {}]",
                pml.start, pml.end
            )));
        }
        let cells = (2.0 * pml.end / mesh_step).round();
        if ((cells * mesh_step) - 2.0 * pml.end).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "mesh step {mesh_step} does not divide the domain length {}",
                2.0 * pml.end
            )));
        }
        Ok(cells as usize)
    }
}

/// Full discrete solution on the mesh.
#[derive(Debug, Clone)]
pub struct FdSolution {
    pub x: Vec<f64>,
    pub u: Vec<Complex64>,
}

impl FdSolution {
    /// Linear interpolation of the nodal values.
    pub fn at(&self, x: f64) -> Result<Complex64> {
        let lo = self.x[0];
        let step = self.x[1] - self.x[0];
        let pos = (x - lo) / step;
        if !(pos >= 0.0 && pos <= (self.x.len() - 1) as f64) {
            return Err(Error::Domain(format!("x = {x} outside the computational domain")));
        }
        let i = (pos.floor() as usize).min(self.x.len() - 2);
        let t = pos - i as f64;
        Ok(self.u[i] * (1.0 - t) + self.u[i + 1] * t)
    }
}

/// Solves the modal equation for the delta loads `atoms` (position, weight).
pub fn fd_solve(
    p: &WidthProfile,
    n: ModeIndex,
    k: f64,
    atoms: &[(f64, Complex64)],
    settings: &FdSettings,
) -> Result<FdSolution> {
    let cells = settings.validate()?;
    let dx = settings.mesh_step;
    let pml = settings.pml;
    let left = -pml.end;
    let x: Vec<f64> = (0..=cells).map(|i| left + dx * i as f64).collect();
    let mut rhs = vec![Complex64::new(0.0, 0.0); cells + 1];
    for &(xs, w) in atoms {
        let i = ((xs - left) / dx).round();
        if !(i >= 1.0 && i <= (cells - 1) as f64) {
            return Err(Error::Domain(format!("source at {xs} outside the interior mesh")));
        }
        let i = i as usize;
        rhs[i] -= pml.stretch(x[i]) * w * dx;
    }
    // unknowns 1..cells-1; row i: lower * u_{i-1} + diag * u_i + upper * u_{i+1}
    let m = cells - 1;
    let mut lower = vec![Complex64::new(0.0, 0.0); m];
    let mut diag = vec![Complex64::new(0.0, 0.0); m];
    let mut upper = vec![Complex64::new(0.0, 0.0); m];
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    for r in 0..m {
        let i = r + 1;
        let inv_l = 1.0 / pml.stretch(x[i] - 0.5 * dx);
        let inv_r = 1.0 / pml.stretch(x[i] + 0.5 * dx);
        let kappa2 = wavenumber_sq(p, n, k, x[i]);
        lower[r] = inv_l;
        upper[r] = inv_r;
        diag[r] = -(inv_l + inv_r) + pml.stretch(x[i]) * kappa2 * dx * dx;
        b[r] = rhs[i];
    }
    let inner = thomas(&lower, &diag, &upper, &b)?;
    let mut u = vec![Complex64::new(0.0, 0.0); cells + 1];
    u[1..cells].copy_from_slice(&inner);
    Ok(FdSolution { x, u })
}

/// Tridiagonal solve without pivoting.
fn thomas(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let m = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); m];
    let mut d = vec![Complex64::new(0.0, 0.0); m];
    let mut denom = diag[0];
    for i in 0..m {
        if i > 0 {
            denom = diag[i] - lower[i] * c[i - 1];
        }
        if denom.norm() < 1e-300 || !denom.is_finite() {
            return Err(Error::Solver(format!("zero pivot at row {i}")));
        }
        c[i] = upper[i] / denom;
        d[i] = if i == 0 {
            rhs[0] / denom
        } else {
            (rhs[i] - lower[i] * d[i - 1]) / denom
        };
    }
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    out[m - 1] = d[m - 1];
    for i in (0..m - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
    Ok(out)
}
