//! Approximate modal Green's functions: WKB phases for propagative and
//! evanescent modes and the Airy (Langer) kernel for locally resonant ones.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profile::{
    classify_mode, local_wavenumber, rightmost_turning_point, wavenumber_sq, ModeClass, ModeIndex,
    WidthProfile,
};
use crate::quad::adaptive_simpson;
use crate::specfun::{airy_ai, airy_full, phi};

/// Absolute tolerance of every phase integral.
pub const PHASE_TOL: f64 = 1e-10;
/// Below this `|xi|` the kernel prefactor is replaced by its turning-point limit.
pub const XI_EXCLUSION: f64 = 1e-6;
/// Width of the stretched-variable window next to a turning point.
const TURNING_WINDOW: f64 = 0.25;

/// Where a turning point sits relative to an integration interval.
#[derive(Clone, Copy, PartialEq)]
enum Turning {
    None,
    Left,
    Right,
}

/// `int_a^b sqrt|k^2 - n^2 pi^2 / h^2| dx` for `a <= b`, split at the profile
/// breakpoints. A square-root zero at an endpoint is removed by `x = x* + t^2`.
fn abs_phase(p: &WidthProfile, n: ModeIndex, k: f64, a: f64, b: f64, turning: Turning) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let f = |x: f64| wavenumber_sq(p, n, k, x).abs().sqrt();
    let mut cuts = vec![a];
    cuts.extend(p.breakpoints().iter().copied().filter(|&c| c > a && c < b));
    cuts.push(b);
    match turning {
        Turning::Left => {
            let w = (a + TURNING_WINDOW).min(cuts[1]);
            if w < cuts[1] {
                cuts.insert(1, w);
            }
        }
        Turning::Right => {
            let m = cuts.len();
            let w = (b - TURNING_WINDOW).max(cuts[m - 2]);
            if w > cuts[m - 2] {
                cuts.insert(m - 1, w);
            }
        }
        Turning::None => {}
    }
    let m = cuts.len();
    let mut total = 0.0;
    for (i, seg) in cuts.windows(2).enumerate() {
        let (lo, hi) = (seg[0], seg[1]);
        let part = if turning == Turning::Left && i == 0 {
            let x0 = lo;
            adaptive_simpson(|t| 2.0 * t * f(x0 + t * t), 0.0, (hi - lo).sqrt(), PHASE_TOL)
        } else if turning == Turning::Right && i == m - 2 {
            let x0 = hi;
            adaptive_simpson(|t| 2.0 * t * f(x0 - t * t), 0.0, (hi - lo).sqrt(), PHASE_TOL)
        } else {
            adaptive_simpson(f, lo, hi, PHASE_TOL)
        };
        total += part.map_err(|e| match e {
            Error::Quadrature { reason, .. } => Error::Quadrature { a: lo, b: hi, reason },
            other => other,
        })?;
    }
    Ok(total)
}

/// Turning point used by the resonant kernel of mode `n` at `k`: the unique
/// resonant point for monotone profiles, the rightmost crossing otherwise.
pub fn turning_point(p: &WidthProfile, n: ModeIndex, k: f64) -> Result<f64> {
    rightmost_turning_point(p, n, k)
}

/// `xi(x)` about a known turning point `xs`.
fn xi_about(p: &WidthProfile, n: ModeIndex, k: f64, xs: f64, x: f64) -> Result<f64> {
    if x > xs {
        let i = abs_phase(p, n, k, xs, x, Turning::Left)?;
        Ok(-(1.5 * i).powf(2.0 / 3.0))
    } else if x < xs {
        let i = abs_phase(p, n, k, x, xs, Turning::Right)?;
        Ok((1.5 * i).powf(2.0 / 3.0))
    } else {
        Ok(0.0)
    }
}

/// Langer phase variable: positive left of the turning point, negative right
/// of it, zero at it.
pub fn xi_phase(p: &WidthProfile, n: ModeIndex, k: f64, x: f64) -> Result<f64> {
    let xs = turning_point(p, n, k)?;
    xi_about(p, n, k, xs, x)
}

/// Accumulated phase `zeta(k) = int_{x*}^{x_meas} k_N`.
pub fn zeta(p: &WidthProfile, n: ModeIndex, k: f64, x_meas: f64) -> Result<f64> {
    let xs = turning_point(p, n, k)?;
    if x_meas < xs {
        return Err(Error::Domain(format!(
            "measurement section {x_meas} lies left of the resonant point {xs}"
        )));
    }
    abs_phase(p, n, k, xs, x_meas, Turning::Left)
}

/// Prefactor `|xi|^{1/4} / sqrt|k_n|`, replaced by its limit `c^{-1/6}` next
/// to the turning point, where `k_n^2 ~ c (x - x*)`.
fn kernel_factor(p: &WidthProfile, n: ModeIndex, k: f64, xs: f64, x: f64, xi: f64) -> Result<f64> {
    if xi.abs() < XI_EXCLUSION {
        let h = p.h(xs);
        let nn = n.get() as f64;
        let c = 2.0 * nn * nn * PI * PI * p.h_prime(xs) / (h * h * h);
        if c == 0.0 || !c.is_finite() {
            return Err(Error::Pole(format!(
                "kernel is singular at the turning point x* = {xs} (h' = {})",
                p.h_prime(xs)
            )));
        }
        return Ok(c.abs().powf(-1.0 / 6.0));
    }
    let kn = local_wavenumber(p, n, k, x).norm();
    if kn == 0.0 {
        return Err(Error::Pole(format!("k_n vanishes at x = {x} with xi = {xi}")));
    }
    Ok(xi.abs().powf(0.25) / kn.sqrt())
}

/// Approximate Green's function of mode `n` between `x` and `s`.
pub fn green_app(p: &WidthProfile, n: ModeIndex, k: f64, x: f64, s: f64) -> Result<Complex64> {
    let (lo, hi) = if x <= s { (x, s) } else { (s, x) };
    match classify_mode(p, n, k)? {
        ModeClass::Propagative => {
            let k_lo = local_wavenumber(p, n, k, lo).re;
            let k_hi = local_wavenumber(p, n, k, hi).re;
            let phase = abs_phase(p, n, k, lo, hi, Turning::None)?;
            Ok(Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, phase)
                / (2.0 * (k_lo * k_hi).sqrt()))
        }
        ModeClass::Evanescent => {
            let k_lo = local_wavenumber(p, n, k, lo).norm();
            let k_hi = local_wavenumber(p, n, k, hi).norm();
            let decay = abs_phase(p, n, k, lo, hi, Turning::None)?;
            Ok(Complex64::new((-decay).exp() / (2.0 * (k_lo * k_hi).sqrt()), 0.0))
        }
        ModeClass::LocallyResonant => {
            let xs = turning_point(p, n, k)?;
            let xi_lo = xi_about(p, n, k, xs, lo)?;
            let xi_hi = xi_about(p, n, k, xs, hi)?;
            let a_lo = kernel_factor(p, n, k, xs, lo, xi_lo)?;
            let a_hi = kernel_factor(p, n, k, xs, hi, xi_hi)?;
            let left = airy_ai(xi_lo)?;
            let right = airy_full(xi_hi)?;
            let outgoing = Complex64::new(right.bi, right.ai);
            Ok(outgoing * (PI * a_lo * a_hi * left))
        }
    }
}

/// `q(k) = sum_s w_s e^{i k_N(x_meas)(x_s - x_meas)} / k_N(x_meas)`.
pub fn q_from_atoms(atoms: &[(f64, Complex64)], k_meas: f64, x_meas: f64) -> Result<Complex64> {
    if !(k_meas > 0.0) {
        return Err(Error::Domain(format!(
            "k_N(x_meas) = {k_meas} must be real positive at the measurement section"
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for &(xs, w) in atoms {
        sum += w * Complex64::from_polar(1.0, k_meas * (xs - x_meas));
        scale += w.norm();
    }
    let q = sum / k_meas;
    let magnitude = q.norm();
    if !(magnitude > 1e-12 * scale / k_meas) {
        return Err(Error::DegenerateSource { k: k_meas, magnitude });
    }
    Ok(q)
}

/// Simplified data model `u = q(k) Phi(zeta(k))` given `q` and `zeta`.
pub fn simplified_value(q: Complex64, zeta: f64) -> Complex64 {
    q * phi(zeta)
}
