//! Synthetic section measurements of one modal component.

mod fd;
mod green;
mod measure;
mod source;

pub use fd::{fd_solve, FdSettings, FdSolution, PmlSpec};
pub use green::{green_app, turning_point, xi_phase, zeta, PHASE_TOL, XI_EXCLUSION};
pub use measure::{
    add_noise, read_measurements, synth_measurements, write_measurements, Backend,
    MeasurementSidecar, ModalMeasurementSet, Provenance,
};
pub use source::{modal_source, BoundaryAtom, InteriorAtom, ModalSourceCoeff, SourceSpec};

use num_complex::Complex64;

use crate::error::Result;
use crate::profile::{local_wavenumber, ModeIndex, WidthProfile};

/// `u_{k,n}(x_meas) = sum_s w_s G_n(x_meas, x_s)` with the approximate kernel.
pub fn modal_data_airy(
    p: &WidthProfile,
    src: &SourceSpec,
    n: ModeIndex,
    k: f64,
    x_meas: f64,
) -> Result<Complex64> {
    let g = modal_source(src, p, n);
    g.atoms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, &(xs, w)| {
        Ok(acc + w * green_app(p, n, k, x_meas, xs)?)
    })
}

/// Source constant `q(k)` of the simplified model.
pub fn q_of_k(p: &WidthProfile, src: &SourceSpec, n: ModeIndex, k: f64, x_meas: f64) -> Result<Complex64> {
    let g = modal_source(src, p, n);
    let kn = local_wavenumber(p, n, k, x_meas);
    let k_meas = if kn.im == 0.0 { kn.re } else { -kn.im };
    green::q_from_atoms(&g.atoms, k_meas, x_meas)
}

/// Source constant evaluated on a uniform guide of width `h_meas`, as used by
/// the inversion where only the plateau width is known.
pub fn q_on_plateau(
    h_meas: f64,
    src: &SourceSpec,
    n: ModeIndex,
    k: f64,
    x_meas: f64,
) -> Result<Complex64> {
    let plateau = WidthProfile::uniform(h_meas)?;
    q_of_k(&plateau, src, n, k, x_meas)
}

/// Simplified model `q(k) Phi(zeta(k))`.
pub fn modal_data_simplified(
    p: &WidthProfile,
    src: &SourceSpec,
    n: ModeIndex,
    k: f64,
    x_meas: f64,
) -> Result<Complex64> {
    let q = q_of_k(p, src, n, k, x_meas)?;
    Ok(green::simplified_value(q, zeta(p, n, k, x_meas)?))
}

/// Reference solution from the finite-difference solver.
pub fn fd_oracle(
    p: &WidthProfile,
    src: &SourceSpec,
    n: ModeIndex,
    k: f64,
    x_meas: f64,
    settings: &FdSettings,
) -> Result<Complex64> {
    let g = modal_source(src, p, n);
    fd_solve(p, n, k, &g.atoms, settings)?.at(x_meas)
}

/// Dispatches to one backend.
pub fn modal_data(
    p: &WidthProfile,
    src: &SourceSpec,
    n: ModeIndex,
    k: f64,
    x_meas: f64,
    backend: Backend,
    fd: &FdSettings,
) -> Result<Complex64> {
    match backend {
        Backend::Airy => modal_data_airy(p, src, n, k, x_meas),
        Backend::Simplified => modal_data_simplified(p, src, n, k, x_meas),
        Backend::Fd => fd_oracle(p, src, n, k, x_meas, fd),
    }
}

