//! Delta-type sources and their modal coefficients `g_n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{basis_at_width, ModeIndex, WidthProfile};
use crate::quad::{composite_gauss, gauss_legendre};

/// Interior source `amplitude * delta_{x}(x) * f_y(y)` with
/// `f_y(y) = sum_j y_coeffs[j] y^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorAtom {
    pub x: f64,
    #[serde(default = "unit")]
    pub amplitude: Complex64,
    pub y_coeffs: Vec<f64>,
}

/// Boundary source `amplitude * delta_{x}(x)` on one wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAtom {
    pub x: f64,
    #[serde(default = "unit")]
    pub amplitude: Complex64,
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Interior excitation `f` and wall excitations `b_top` (at `y = h`) and
/// `b_bot` (at `y = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    #[serde(default)]
    pub interior: Vec<InteriorAtom>,
    #[serde(default)]
    pub boundary_top: Vec<BoundaryAtom>,
    #[serde(default)]
    pub boundary_bot: Vec<BoundaryAtom>,
}

impl Default for SourceSpec {
    /// `f = delta_6(x) y` and `b_top = delta_6`.
    fn default() -> Self {
        SourceSpec::standard(6.0)
    }
}

impl SourceSpec {
    /// `f = delta_{x_s}(x) y` and `b_top = delta_{x_s}`.
    pub fn standard(x_s: f64) -> Self {
        SourceSpec {
            interior: vec![InteriorAtom {
                x: x_s,
                amplitude: unit(),
                y_coeffs: vec![0.0, 1.0],
            }],
            boundary_top: vec![BoundaryAtom {
                x: x_s,
                amplitude: unit(),
            }],
            boundary_bot: vec![],
        }
    }

    /// Every amplitude multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.interior.iter_mut().for_each(|a| a.amplitude *= c);
        out.boundary_top.iter_mut().for_each(|a| a.amplitude *= c);
        out.boundary_bot.iter_mut().for_each(|a| a.amplitude *= c);
        out
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.interior
            .iter()
            .map(|a| a.x)
            .chain(self.boundary_top.iter().map(|a| a.x))
            .chain(self.boundary_bot.iter().map(|a| a.x))
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty() && self.boundary_top.is_empty() && self.boundary_bot.is_empty()
    }

    /// Sources must sit at or to the right of the measurement section.
    pub fn validate(&self, x_meas: f64) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidInput("source has no atoms".into()));
        }
        for x in self.positions() {
            if !x.is_finite() || x < x_meas {
                return Err(Error::InvalidInput(format!(
                    "source at x = {x} lies left of the measurement section x = {x_meas}"
                )));
            }
        }
        Ok(())
    }
}

/// `g_n` as a sum of weighted deltas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalSourceCoeff {
    pub n: ModeIndex,
    pub atoms: Vec<(f64, Complex64)>,
}

/// Modal decomposition of the source on mode `n`.
pub fn modal_source(src: &SourceSpec, p: &WidthProfile, n: ModeIndex) -> ModalSourceCoeff {
    let rule = gauss_legendre(16);
    let mut atoms = Vec::new();
    for a in &src.interior {
        let h = p.h(a.x);
        let fy = |y: f64| a.y_coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c);
        // polynomial times cosine: 8 panels of 16 points are exact to rounding
        let f_n = composite_gauss(|y| fy(y) * basis_at_width(h, n, y), 0.0, h, 8, &rule);
        atoms.push((a.x, a.amplitude * (f_n / h.sqrt())));
    }
    for a in &src.boundary_top {
        let h = p.h(a.x);
        let hp = p.h_prime(a.x);
        let w = basis_at_width(h, n, h) * (1.0 + hp * hp).sqrt() / h.sqrt();
        atoms.push((a.x, a.amplitude * w));
    }
    for a in &src.boundary_bot {
        let h = p.h(a.x);
        atoms.push((a.x, a.amplitude * (basis_at_width(h, n, 0.0) / h.sqrt())));
    }
    ModalSourceCoeff { n, atoms }
}
