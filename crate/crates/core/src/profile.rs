//! Waveguide width profiles and the modal quantities derived from them.
//!
//! The guide occupies `0 < y < h(x)`. Outside a compact support `[a, b]` the
//! width is constant and equal to either `h_min` or `h_max`. The N-th transverse
//! mode is locally resonant at frequency `k` when `h(x*) = N pi / k` for some
//! `x*`; for increasing profiles that point is unique.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GAMMA1: f64 = 3e-6;
pub const GAMMA2: f64 = 8192.0 / 5.0 * 1e-6;
pub const GAMMA3: f64 = 5e-5;
/// Read as (53/3)e-4: with e-5 the h2 plateau falls below its interior
/// maximum and the published h2 grid leaves the resonant band.
pub const GAMMA4: f64 = 53.0 / 3.0 * 1e-4;
pub const GAMMA5: f64 = 0.01 / 30.0;
pub const GAMMA6: f64 = 25e-4;
pub const GAMMA7: f64 = 5e-4;

/// Number of samples used to estimate `eta` and `theta` for a profile.
const SLOPE_SAMPLES: usize = 100_000;
/// Relative tolerance under which a frequency is considered to sit on a cutoff.
const CUTOFF_RTOL: f64 = 1e-10;

/// Identifiers of the closed-form profiles shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinId {
    H1,
    H2,
    H3,
    H4,
    H6,
}

impl BuiltinId {
    pub const ALL: [BuiltinId; 5] = [
        BuiltinId::H1,
        BuiltinId::H2,
        BuiltinId::H3,
        BuiltinId::H4,
        BuiltinId::H6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinId::H1 => "h1",
            BuiltinId::H2 => "h2",
            BuiltinId::H3 => "h3",
            BuiltinId::H4 => "h4",
            BuiltinId::H6 => "h6",
        }
    }

    /// End points of the 50-frequency mode-1 reference grid for this profile.
    pub fn reference_band(self) -> (f64, f64) {
        match self {
            BuiltinId::H1 => (30.92, 31.93),
            BuiltinId::H2 => (30.9, 31.95),
            BuiltinId::H3 | BuiltinId::H4 => (31.01, 31.83),
            BuiltinId::H6 => (31.42, 32.1),
        }
    }
}

impl std::str::FromStr for BuiltinId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h1" => Ok(BuiltinId::H1),
            "h2" => Ok(BuiltinId::H2),
            "h3" => Ok(BuiltinId::H3),
            "h4" => Ok(BuiltinId::H4),
            "h6" => Ok(BuiltinId::H6),
            other => Err(Error::UnknownProfile(other.to_string())),
        }
    }
}

/// One polynomial piece `h(x) = sum_j coeffs[j] x^j` valid on `[from, to]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPiece {
    pub from: f64,
    pub to: f64,
    pub coeffs: Vec<f64>,
}

impl PolyPiece {
    fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn eval_derivative(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, c)| acc * x + j as f64 * c)
    }
}

/// How a profile is described. Serializable so run configs can carry it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSpec {
    Builtin(BuiltinId),
    /// Contiguous polynomial pieces; constant extension outside the first and
    /// last piece.
    Piecewise { pieces: Vec<PolyPiece> },
    Uniform { width: f64 },
}

/// A width profile `h` with its derivative, support and slope parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthProfile {
    spec: ProfileSpec,
    /// Variation is scaled by this factor around `center`.
    variation_scale: f64,
    center: f64,
    support: (f64, f64),
    breakpoints: Vec<f64>,
    h_min: f64,
    h_max: f64,
    eta: f64,
    theta: f64,
    monotone: bool,
}

impl WidthProfile {
    pub fn builtin(id: BuiltinId) -> Self {
        let (support, breakpoints) = match id {
            BuiltinId::H1 | BuiltinId::H3 | BuiltinId::H4 => ((-4.0, 4.0), vec![-4.0, 4.0]),
            BuiltinId::H2 => ((-4.0, 4.0), vec![-4.0, 0.0, 4.0]),
            BuiltinId::H6 => ((-5.0, 4.0), vec![-5.0, 0.0, 4.0]),
        };
        Self::finish(ProfileSpec::Builtin(id), 1.0, 0.1, support, breakpoints)
    }

    /// Parses one of `h1, h2, h3, h4, h6`.
    pub fn from_id(id: &str) -> Result<Self> {
        Ok(Self::builtin(id.parse()?))
    }

    pub fn uniform(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidInput(format!("uniform width must be positive, got {width}")));
        }
        Ok(Self::finish(ProfileSpec::Uniform { width }, 1.0, width, (0.0, 0.0), vec![]))
    }

    /// A user profile made of polynomial pieces. `eta` and `theta` are
    /// estimated by dense sampling of the analytic derivative.
    pub fn piecewise(mut pieces: Vec<PolyPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidInput("piecewise profile needs at least one piece".into()));
        }
        pieces.sort_by(|a, b| a.from.total_cmp(&b.from));
        for w in pieces.windows(2) {
            if (w[0].to - w[1].from).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "pieces must be contiguous: {} vs {}",
                    w[0].to, w[1].from
                )));
            }
        }
        if pieces.iter().any(|p| !(p.to > p.from) || p.coeffs.is_empty()) {
            return Err(Error::InvalidInput("each piece needs from < to and coefficients".into()));
        }
        let support = (pieces[0].from, pieces[pieces.len() - 1].to);
        let mut breakpoints: Vec<f64> = pieces.iter().map(|p| p.from).collect();
        breakpoints.push(support.1);
        let spec = ProfileSpec::Piecewise { pieces };
        let probe = Self::finish(spec.clone(), 1.0, 0.0, support, breakpoints.clone());
        if probe.h_min <= 0.0 {
            return Err(Error::InvalidInput("profile width must stay positive".into()));
        }
        let center = 0.5 * (probe.h_min + probe.h_max);
        Ok(Self::finish(spec, 1.0, center, support, breakpoints))
    }

    pub fn from_spec(spec: &ProfileSpec) -> Result<Self> {
        match spec {
            ProfileSpec::Builtin(id) => Ok(Self::builtin(*id)),
            ProfileSpec::Piecewise { pieces } => Self::piecewise(pieces.clone()),
            ProfileSpec::Uniform { width } => Self::uniform(*width),
        }
    }

    /// Same shape with its variation around the reference width multiplied by
    /// `factor` (so `eta` scales by `factor`).
    pub fn scaled_variation(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidInput(format!("variation factor must be positive, got {factor}")));
        }
        Ok(Self::finish(
            self.spec.clone(),
            self.variation_scale * factor,
            self.center,
            self.support,
            self.breakpoints.clone(),
        ))
    }

    fn finish(
        spec: ProfileSpec,
        variation_scale: f64,
        center: f64,
        support: (f64, f64),
        breakpoints: Vec<f64>,
    ) -> Self {
        let mut p = WidthProfile {
            spec,
            variation_scale,
            center,
            support,
            breakpoints,
            h_min: 0.0,
            h_max: 0.0,
            eta: 0.0,
            theta: 0.0,
            monotone: true,
        };
        let (a, b) = support;
        let mut h_min = p.h(a - 1.0).min(p.h(b + 1.0));
        let mut h_max = p.h(a - 1.0).max(p.h(b + 1.0));
        for &x in &p.breakpoints {
            for y in [p.h(x), p.h(x - 1e-12), p.h(x + 1e-12)] {
                h_min = h_min.min(y);
                h_max = h_max.max(y);
            }
        }
        let mut sup_slope: f64 = 0.0;
        let mut inf_slope = f64::INFINITY;
        let mut monotone = true;
        if b > a {
            // h4 has an infinite slope at its left corner: skip a 1e-6 neighbourhood.
            let skip = 1e-6;
            let grid = (0..=SLOPE_SAMPLES).map(|i| a + (b - a) * i as f64 / SLOPE_SAMPLES as f64);
            // the edges of the excluded neighbourhoods carry the sup for h4
            for x in grid.chain([a + skip, b - skip]) {
                let y = p.h(x);
                h_min = h_min.min(y);
                h_max = h_max.max(y);
                if x < a + skip || x > b - skip {
                    continue;
                }
                let d = p.h_prime(x);
                if d.is_finite() {
                    sup_slope = sup_slope.max(d.abs());
                    inf_slope = inf_slope.min(d);
                }
                if d < 0.0 {
                    monotone = false;
                }
            }
        }
        p.h_min = h_min;
        p.h_max = h_max;
        p.monotone = monotone;
        // strict bound: sup |h'| < eta
        p.eta = sup_slope * (1.0 + 1e-9);
        p.theta = if p.eta > 0.0 && inf_slope.is_finite() {
            (inf_slope / p.eta).max(0.0)
        } else {
            0.0
        };
        p
    }

    fn base(&self, x: f64) -> (f64, f64) {
        match &self.spec {
            ProfileSpec::Builtin(id) => builtin_eval(*id, x),
            ProfileSpec::Uniform { width } => (*width, 0.0),
            ProfileSpec::Piecewise { pieces } => {
                let first = &pieces[0];
                let last = &pieces[pieces.len() - 1];
                if x < first.from {
                    (first.eval(first.from), 0.0)
                } else if x > last.to {
                    (last.eval(last.to), 0.0)
                } else {
                    let piece = pieces
                        .iter()
                        .find(|p| x <= p.to)
                        .unwrap_or(last);
                    (piece.eval(x), piece.eval_derivative(x))
                }
            }
        }
    }

    /// Width `h(x)`.
    pub fn h(&self, x: f64) -> f64 {
        let (v, _) = self.base(x);
        self.center + self.variation_scale * (v - self.center)
    }

    /// Derivative `h'(x)`.
    pub fn h_prime(&self, x: f64) -> f64 {
        self.variation_scale * self.base(x).1
    }

    pub fn spec(&self) -> &ProfileSpec {
        &self.spec
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn h_min(&self) -> f64 {
        self.h_min
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `inf h'/eta` over `[lo, hi]`, sampled.
    pub fn theta_on(&self, lo: f64, hi: f64) -> f64 {
        if self.eta == 0.0 || hi <= lo {
            return 0.0;
        }
        let n = 10_000;
        (0..=n)
            .map(|i| self.h_prime(lo + (hi - lo) * i as f64 / n as f64))
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
            / self.eta
    }

    pub fn variation_scale(&self) -> f64 {
        self.variation_scale
    }

    /// Non-decreasing over its support.
    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// The maximal interval ending at the right support edge on which `h` is
    /// non-decreasing. Equal to the support for monotone profiles.
    pub fn increasing_span(&self) -> (f64, f64) {
        let (a, b) = self.support;
        if self.monotone || b <= a {
            return (a, b);
        }
        let n = 100_000;
        let step = (b - a) / n as f64;
        let mut lo = b;
        for i in (0..n).rev() {
            let x = a + step * i as f64;
            if self.h(x) > self.h(x + step) {
                break;
            }
            lo = x;
        }
        (lo, b)
    }
}

fn builtin_eval(id: BuiltinId, x: f64) -> (f64, f64) {
    match id {
        BuiltinId::H1 => {
            if x < -4.0 {
                (0.1 - GAMMA2, 0.0)
            } else if x > 4.0 {
                (0.1 + GAMMA2, 0.0)
            } else {
                let x2 = x * x;
                let poly = x * (x2 * x2 / 5.0 - 32.0 * x2 / 3.0 + 256.0);
                (0.1 + GAMMA1 * poly, GAMMA1 * (x2 - 16.0) * (x2 - 16.0))
            }
        }
        BuiltinId::H2 => {
            if x < -4.0 {
                (0.1 - GAMMA4, 0.0)
            } else if x > 4.0 {
                (0.1 + GAMMA4, 0.0)
            } else {
                // odd extension of t^5/5 - 2t^4 + 16t^3/3
                let t = x.abs();
                let poly = t * t * t * (t * t / 5.0 - 2.0 * t + 16.0 / 3.0);
                let slope = t * t * (t - 4.0) * (t - 4.0);
                (0.1 + x.signum() * GAMMA3 * poly, GAMMA3 * slope)
            }
        }
        BuiltinId::H3 => {
            if x < -4.0 {
                (0.1 - 4.0 * GAMMA5, 0.0)
            } else if x > 4.0 {
                (0.1 + 4.0 * GAMMA5, 0.0)
            } else {
                (0.1 + GAMMA5 * x, GAMMA5)
            }
        }
        BuiltinId::H4 => {
            if x < -4.0 {
                (0.1 - 4.0 * GAMMA5, 0.0)
            } else if x > 4.0 {
                (0.1 + 4.0 * GAMMA5, 0.0)
            } else {
                let r = (x + 4.0).sqrt();
                let slope = if r > 0.0 {
                    std::f64::consts::SQRT_2 * GAMMA5 / r
                } else {
                    f64::INFINITY
                };
                (0.1 - 4.0 * GAMMA5 + 4.0 * GAMMA5 * r / std::f64::consts::SQRT_2, slope)
            }
        }
        BuiltinId::H6 => {
            if (-5.0..=0.0).contains(&x) {
                (0.1 - GAMMA7 * (x + 5.0), -GAMMA7)
            } else if x > 0.0 && x <= 4.0 {
                (0.1 + GAMMA6 / 4.0 * (x - 4.0), GAMMA6 / 4.0)
            } else {
                (0.1, 0.0)
            }
        }
    }
}

/// Index of a transverse mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModeIndex(pub u32);

impl ModeIndex {
    pub fn get(self) -> u32 {
        self.0
    }

    fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Behaviour of one mode at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeClass {
    Propagative,
    Evanescent,
    LocallyResonant,
}

/// Transverse basis function `phi_n(x, y)`, orthonormal in `L2(0, h(x))`.
pub fn eval_basis(p: &WidthProfile, n: ModeIndex, x: f64, y: f64) -> Result<f64> {
    let h = p.h(x);
    if !(0.0..=h).contains(&y) {
        return Err(Error::Domain(format!("y = {y} outside [0, h(x) = {h}]")));
    }
    Ok(basis_at_width(h, n, y))
}

pub(crate) fn basis_at_width(h: f64, n: ModeIndex, y: f64) -> f64 {
    if n.0 == 0 {
        1.0 / h.sqrt()
    } else {
        std::f64::consts::SQRT_2 / h.sqrt() * (n.as_f64() * PI * y / h).cos()
    }
}

/// Square of the local wavenumber `k^2 - n^2 pi^2 / h(x)^2`.
pub fn wavenumber_sq(p: &WidthProfile, n: ModeIndex, k: f64, x: f64) -> f64 {
    wavenumber_sq_at_width(p.h(x), n, k)
}

pub(crate) fn wavenumber_sq_at_width(h: f64, n: ModeIndex, k: f64) -> f64 {
    let c = n.as_f64() * PI / h;
    (k - c) * (k + c)
}

/// Local wavenumber `k_n(x)` with `Re >= 0` and `Im >= 0`.
pub fn local_wavenumber(p: &WidthProfile, n: ModeIndex, k: f64, x: f64) -> Complex64 {
    let s = wavenumber_sq(p, n, k, x);
    if s >= 0.0 {
        Complex64::new(s.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-s).sqrt())
    }
}

/// Cutoff frequency `n pi / width`.
pub fn cutoff(n: ModeIndex, width: f64) -> f64 {
    n.as_f64() * PI / width
}

/// Classifies mode `n` at frequency `k` over the whole guide.
pub fn classify_mode(p: &WidthProfile, n: ModeIndex, k: f64) -> Result<ModeClass> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("frequency must be positive, got {k}")));
    }
    if n.0 == 0 {
        return Ok(ModeClass::Propagative);
    }
    let lo = cutoff(n, p.h_max());
    let hi = cutoff(n, p.h_min());
    if (k - lo).abs() <= CUTOFF_RTOL * k || (k - hi).abs() <= CUTOFF_RTOL * k {
        return Err(Error::IllPosedFrequency { k, n: n.0 });
    }
    // n < k h / pi for all x  <=>  k > n pi / h_min
    if k > hi {
        Ok(ModeClass::Propagative)
    } else if k < lo {
        Ok(ModeClass::Evanescent)
    } else {
        Ok(ModeClass::LocallyResonant)
    }
}

/// All points where `h(x) = N pi / k`, located by scanning the support and
/// bisecting each sign change of `h(x) - N pi / k`.
pub fn turning_points(p: &WidthProfile, n: ModeIndex, k: f64) -> Result<Vec<f64>> {
    if classify_mode(p, n, k)? != ModeClass::LocallyResonant {
        return Err(Error::NotResonant { k, n: n.0 });
    }
    let level = cutoff(n, 1.0) / k;
    let (a, b) = p.support();
    let f = |x: f64| p.h(x) - level;
    let mut roots = Vec::new();
    if p.is_monotone() {
        roots.push(bisect(&f, a, b));
        return Ok(roots);
    }
    let samples = 10_000;
    let step = (b - a) / samples as f64;
    let mut x0 = a;
    let mut f0 = f(a);
    for i in 1..=samples {
        let x1 = if i == samples { b } else { a + step * i as f64 };
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            roots.push(bisect(&f, x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    if roots.is_empty() {
        return Err(Error::NotResonant { k, n: n.0 });
    }
    Ok(roots)
}

/// Rightmost turning point: the first one met by a wave coming from the
/// measurement side. Unique for monotone profiles.
pub fn rightmost_turning_point(p: &WidthProfile, n: ModeIndex, k: f64) -> Result<f64> {
    let roots = turning_points(p, n, k)?;
    Ok(roots.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// The unique simple resonant point `x*` with `h(x*) = N pi / k`.
pub fn resonant_point(p: &WidthProfile, n: ModeIndex, k: f64) -> Result<f64> {
    let roots = turning_points(p, n, k)?;
    if roots.len() != 1 {
        return Err(Error::AmbiguousResonance {
            level: cutoff(n, 1.0) / k,
            count: roots.len(),
        });
    }
    let x = roots[0];
    if p.h_prime(x) == 0.0 {
        return Err(Error::MultipleResonance { x });
    }
    Ok(x)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Distance of `k` to the nearest cutoff of any mode at the two plateau widths.
pub fn delta_of_k(p: &WidthProfile, k: f64) -> f64 {
    let n_max = (2.0 * k * p.h_max() / PI).ceil() as u32;
    (0..=n_max)
        .flat_map(|n| {
            let n = ModeIndex(n);
            [
                wavenumber_sq_at_width(p.h_min(), n, k).abs().sqrt(),
                wavenumber_sq_at_width(p.h_max(), n, k).abs().sqrt(),
            ]
        })
        .fold(f64::INFINITY, f64::min)
}

/// Equispaced frequencies inside the resonant band of mode `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    values: Vec<f64>,
    rho: f64,
    mode: ModeIndex,
    /// `N pi / h_max`
    k0: f64,
    /// `N pi / h_min`
    k_end: f64,
    delta_k: f64,
}

impl FrequencyGrid {
    /// `count` equispaced frequencies from `a` to `b` inclusive.
    pub fn new(a: f64, b: f64, count: usize, mode: ModeIndex, p: &WidthProfile) -> Result<Self> {
        if count < 2 {
            return Err(Error::DegenerateGrid(format!("need at least 2 frequencies, got {count}")));
        }
        if !(b > a) {
            return Err(Error::DegenerateGrid(format!("need a < b, got [{a}, {b}]")));
        }
        let rho = (b - a) / (count - 1) as f64;
        let values = (0..count)
            .map(|i| if i + 1 == count { b } else { a + rho * i as f64 })
            .collect();
        Self::build(values, rho, mode, p.h_min(), p.h_max())
    }

    /// A one-frequency grid (no spacing).
    pub fn single(k: f64, mode: ModeIndex, p: &WidthProfile) -> Result<Self> {
        Self::build(vec![k], 0.0, mode, p.h_min(), p.h_max())
    }

    /// Rebuilds a grid from stored values, checking band and equispacing.
    pub fn from_values(values: Vec<f64>, mode: ModeIndex, h_min: f64, h_max: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateGrid("empty grid".into()));
        }
        let rho = if values.len() > 1 {
            (values[values.len() - 1] - values[0]) / (values.len() - 1) as f64
        } else {
            0.0
        };
        for w in values.windows(2) {
            if !(w[1] > w[0]) || ((w[1] - w[0]) - rho).abs() > 1e-9 * (1.0 + rho) {
                return Err(Error::DegenerateGrid("frequencies are not equispaced and increasing".into()));
            }
        }
        Self::build(values, rho, mode, h_min, h_max)
    }

    fn build(values: Vec<f64>, rho: f64, mode: ModeIndex, h_min: f64, h_max: f64) -> Result<Self> {
        if mode.0 == 0 {
            return Err(Error::DegenerateGrid("mode 0 is never locally resonant".into()));
        }
        let k0 = cutoff(mode, h_max);
        let k_end = cutoff(mode, h_min);
        let a = values[0];
        let b = values[values.len() - 1];
        if !(a > k0 && b < k_end) {
            return Err(Error::OutOfBand { a, b, lo: k0, hi: k_end });
        }
        let delta_k = ((a - k0) * (a + k0)).sqrt().min(((k_end - b) * (k_end + b)).sqrt());
        Ok(FrequencyGrid {
            values,
            rho,
            mode,
            k0,
            k_end,
            delta_k,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn mode(&self) -> ModeIndex {
        self.mode
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn k_end(&self) -> f64 {
        self.k_end
    }

    pub fn delta_k(&self) -> f64 {
        self.delta_k
    }
}
