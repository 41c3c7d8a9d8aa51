//! Real-argument Airy functions and the model function `Phi` with its left
//! inverse modulo pi.
//!
//! Airy evaluation is split by region:
//! * `[-3, 1.5]`: Maclaurin series for both functions;
//! * `Bi` on `[0, 8.5]`: Maclaurin series (all terms positive, no cancellation);
//! * `|x| >= 8.5`: Poincare asymptotic expansions;
//! * `Ai` on `(1.5, 8.5)` and both on `(-8.5, -3)`: Taylor steps of `y'' = x y`
//!   from the nearest anchor, in the direction where the stepped solution does
//!   not decay.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const AI0: f64 = 0.355_028_053_887_817_239_26;
pub const AIP0: f64 = -0.258_819_403_792_806_798_41;
pub const BI0: f64 = 0.614_926_627_446_000_735_15;
pub const BIP0: f64 = 0.448_288_357_353_826_357_91;

const SERIES_LEFT: f64 = -3.0;
const AI_SERIES_RIGHT: f64 = 1.5;
const ASYMPTOTIC: f64 = 8.5;
const MAX_STEP: f64 = 0.5;
/// Beyond this `e^{2/3 x^{3/2}}` overflows a double.
const BI_OVERFLOW: f64 = 104.0;

/// Values of `Ai` and `Bi` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryPair {
    pub ai: f64,
    pub bi: f64,
}

/// `Ai, Ai', Bi, Bi'` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryFull {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
}

impl AiryFull {
    /// `Ai Bi' - Ai' Bi`, equal to `1/pi` in exact arithmetic.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bip - self.aip * self.bi
    }

    pub fn pair(&self) -> AiryPair {
        AiryPair {
            ai: self.ai,
            bi: self.bi,
        }
    }
}

/// `Ai(x)` and `Bi(x)`.
pub fn airy(x: f64) -> Result<AiryPair> {
    airy_full(x).map(|a| a.pair())
}

/// `Ai(x)` alone; defined for every finite `x` (no `Bi` overflow).
pub fn airy_ai(x: f64) -> Result<f64> {
    check_finite(x)?;
    if x >= ASYMPTOTIC {
        Ok(asymptotic_positive(x).0 .0)
    } else if x > AI_SERIES_RIGHT {
        let (a, _) = asymptotic_positive(ASYMPTOTIC);
        Ok(taylor_march(ASYMPTOTIC, a, x).0)
    } else {
        airy_full(x).map(|a| a.ai)
    }
}

/// `Ai, Ai', Bi, Bi'` at `x`.
pub fn airy_full(x: f64) -> Result<AiryFull> {
    check_finite(x)?;
    if x > BI_OVERFLOW {
        return Err(Error::Overflow(format!("Bi({x}) exceeds the double range")));
    }
    if x >= ASYMPTOTIC {
        let (a, b) = asymptotic_positive(x);
        return Ok(AiryFull {
            ai: a.0,
            aip: a.1,
            bi: b.0,
            bip: b.1,
        });
    }
    if x <= -ASYMPTOTIC {
        return Ok(asymptotic_negative(-x));
    }
    if x < SERIES_LEFT {
        let s = maclaurin(SERIES_LEFT);
        let a = taylor_march(SERIES_LEFT, (s.ai, s.aip), x);
        let b = taylor_march(SERIES_LEFT, (s.bi, s.bip), x);
        return Ok(AiryFull {
            ai: a.0,
            aip: a.1,
            bi: b.0,
            bip: b.1,
        });
    }
    let s = maclaurin(x);
    if x <= AI_SERIES_RIGHT {
        return Ok(s);
    }
    let (anchor, _) = asymptotic_positive(ASYMPTOTIC);
    let a = taylor_march(ASYMPTOTIC, anchor, x);
    Ok(AiryFull {
        ai: a.0,
        aip: a.1,
        bi: s.bi,
        bip: s.bip,
    })
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Airy argument must be finite, got {x}")))
    }
}

/// Maclaurin series `Ai = c1 f - c2 g`, `Bi = sqrt(3)(c1 f + c2 g)`.
fn maclaurin(x: f64) -> AiryFull {
    let c1 = AI0;
    let c2 = -AIP0;
    let x3 = x * x * x;
    let mut f = 1.0;
    let mut g = x;
    let mut fp = 0.0;
    let mut gp = 1.0;
    let mut tf = 1.0;
    let mut tg = x;
    let mut tfp = x * x / 2.0;
    let mut tgp = 1.0;
    fp += tfp;
    for k in 1..200 {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf - 1.0) * 3.0 * kf);
        tg *= x3 / (3.0 * kf * (3.0 * kf + 1.0));
        tgp *= x3 / ((3.0 * kf - 2.0) * 3.0 * kf);
        f += tf;
        g += tg;
        gp += tgp;
        if k >= 2 {
            tfp *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fp += tfp;
        }
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if tf.abs() + tg.abs() + tfp.abs() + tgp.abs() <= 1e-18 * scale {
            break;
        }
    }
    let s3 = 3f64.sqrt();
    AiryFull {
        ai: c1 * f - c2 * g,
        aip: c1 * fp - c2 * gp,
        bi: s3 * (c1 * f + c2 * g),
        bip: s3 * (c1 * fp + c2 * gp),
    }
}

/// Integrates `y'' = x y` from `x0` with `(y, y')` to `x1` by Taylor steps.
fn taylor_march(x0: f64, y: (f64, f64), x1: f64) -> (f64, f64) {
    let span = x1 - x0;
    let steps = (span.abs() / MAX_STEP).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut state = y;
    let mut x = x0;
    for i in 0..steps {
        state = taylor_step(x, state, h);
        x = x0 + h * (i + 1) as f64;
    }
    state
}

fn taylor_step(x0: f64, (y, yp): (f64, f64), h: f64) -> (f64, f64) {
    // a_{n+2} = (x0 a_n + a_{n-1}) / ((n+2)(n+1))
    let mut a = [y, yp, x0 * y / 2.0];
    let mut val = a[0] + a[1] * h + a[2] * h * h;
    let mut der = a[1] + 2.0 * a[2] * h;
    let mut hn = h * h;
    for n in 1..80 {
        let next = (x0 * a[1] + a[0]) / ((n + 2) as f64 * (n + 1) as f64);
        hn *= h;
        let term = next * hn;
        val += term;
        der += (n + 2) as f64 * next * hn / h;
        a = [a[1], a[2], next];
        if term.abs() <= 1e-18 * val.abs().max(1e-300) && n > 4 {
            break;
        }
    }
    (val, der)
}

/// Coefficients `u_k` and `v_k` of the asymptotic expansions.
fn asymptotic_coefficients() -> &'static ([f64; 40], [f64; 40]) {
    use std::sync::OnceLock;
    static COEFFS: OnceLock<([f64; 40], [f64; 40])> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut u = [0.0; 40];
        let mut v = [0.0; 40];
        u[0] = 1.0;
        v[0] = 1.0;
        for k in 1..40 {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
        }
        (u, v)
    })
}

/// Sums `sum_k sign^k c_k / z^k` over `k = start, start+2, ...` (or every
/// index if `stride = 1`), stopping at the smallest term.
fn truncated_sum(c: &[f64], z: f64, alternating: bool, start: usize, stride: usize) -> f64 {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut idx = 0usize;
    let mut k = start;
    while k < c.len() {
        let term = c[k] / z.powi(k as i32);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        let sign = if alternating && idx % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        idx += 1;
        k += stride;
    }
    sum
}

/// `((Ai, Ai'), (Bi, Bi'))` for large positive `x`.
fn asymptotic_positive(x: f64) -> ((f64, f64), (f64, f64)) {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.powf(0.25);
    let sp = PI.sqrt();
    let su_alt = truncated_sum(u, zeta, true, 0, 1);
    let sv_alt = truncated_sum(v, zeta, true, 0, 1);
    let su = truncated_sum(u, zeta, false, 0, 1);
    let sv = truncated_sum(v, zeta, false, 0, 1);
    let em = (-zeta).exp();
    let ep = zeta.exp();
    (
        (em / (2.0 * sp * q) * su_alt, -q * em / (2.0 * sp) * sv_alt),
        (ep / (sp * q) * su, q * ep / sp * sv),
    )
}

/// All four values at `-t` for large positive `t`.
fn asymptotic_negative(t: f64) -> AiryFull {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let q = t.powf(0.25);
    let sp = PI.sqrt();
    let ue = truncated_sum(u, zeta, true, 0, 2);
    let uo = truncated_sum(u, zeta, true, 1, 2);
    let ve = truncated_sum(v, zeta, true, 0, 2);
    let vo = truncated_sum(v, zeta, true, 1, 2);
    let phase = zeta - FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    AiryFull {
        ai: (c * ue + s * uo) / (sp * q),
        aip: q / sp * (s * ve - c * vo),
        bi: (-s * ue + c * uo) / (sp * q),
        bip: q / sp * (c * ve + s * vo),
    }
}

/// `Phi(x) = sin(x + pi/4) e^{i(x + pi/4)}`, pi-periodic.
pub fn phi(x: f64) -> Complex64 {
    let a = x + FRAC_PI_4;
    Complex64::from_polar(1.0, a) * a.sin()
}

/// Which left inverse of `Phi` to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiInverse {
    /// `arg(1 + 2iz)/2 - pi/4` mod pi; exact on the image of `Phi`.
    #[default]
    Exact,
    /// The three-branch arcsin/arccos formula, evaluated literally.
    Branch,
}

impl std::str::FromStr for PhiInverse {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PhiInverse::Exact),
            "branch" => Ok(PhiInverse::Branch),
            other => Err(Error::InvalidInput(format!(
                "phi inverse must be `exact` or `branch`, got `{other}`"
            ))),
        }
    }
}

/// Maximal modulus accepted by [`phi_left_inverse`]; the image of `Phi` is the
/// unit-diameter disc, with a 1/4 margin for noise.
pub const OFF_IMAGE_RADIUS: f64 = 1.25;

/// Left inverse of [`phi`] modulo pi, in `[0, pi)`.
pub fn phi_left_inverse(z: Complex64, variant: PhiInverse) -> Result<f64> {
    let r = z.norm();
    if !(r <= OFF_IMAGE_RADIUS) {
        return Err(Error::OffImage { re: z.re, im: z.im });
    }
    let theta = match variant {
        PhiInverse::Exact => {
            let w = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 2.0) * z;
            w.arg() / 2.0 - FRAC_PI_4
        }
        PhiInverse::Branch => {
            if r < 0.5 {
                if z.re >= 0.0 {
                    r.asin()
                } else {
                    PI - r.asin()
                }
            } else {
                (z.re / r).clamp(-1.0, 1.0).acos()
            }
        }
    };
    let reduced = theta.rem_euclid(PI);
    // rem_euclid can round up to exactly pi
    Ok(if reduced >= PI { 0.0 } else { reduced })
}

/// Distance between two angles on the circle of circumference pi.
pub fn circular_distance_mod_pi(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// `|Phi(x)|`, equal to `|sin(x + pi/4)|`; handy for the image check.
pub fn phi_modulus(x: f64) -> f64 {
    ((x + FRAC_PI_4).sin()).abs()
}
