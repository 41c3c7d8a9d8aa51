//! Layer-stripping inversion: normalize by `q(k)`, invert `Phi` modulo pi,
//! unwrap, fix the global multiple of pi, then solve a lower-triangular
//! system for the distances between consecutive resonant points.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{q_on_plateau, ModalMeasurementSet, SourceSpec};
use crate::profile::{cutoff, wavenumber_sq_at_width, ModeIndex, WidthProfile};
use crate::specfun::{phi_left_inverse, PhiInverse};

/// Tolerance under which an unwrap gap is considered to be exactly pi/2.
const UNWRAP_TIE_TOL: f64 = 1e-9;
/// Slack added before flooring the estimate of `ell`, so exact integers are
/// not pushed down by rounding.
const ELL_SLACK: f64 = 1e-9;
/// Points used by [`linf_error`].
const ERROR_GRID: usize = 10_000;

/// `v_k = u_k / q(k)`, with `q` computed on the measurement plateau of width
/// `h_meas`.
pub fn normalize(m: &ModalMeasurementSet, src: &SourceSpec, h_meas: f64) -> Result<Vec<Complex64>> {
    m.grid()
        .values()
        .iter()
        .zip(m.values())
        .enumerate()
        .map(|(index, (&k, &u))| {
            q_on_plateau(h_meas, src, m.mode(), k, m.x_meas())
                .map(|q| u / q)
                .map_err(|e| Error::AtFrequency {
                    index,
                    k,
                    source: Box::new(e),
                })
        })
        .collect()
}

/// `Phi^{-1}(v_k)` in `[0, pi)` for every frequency.
pub fn phase_values(ks: &[f64], v: &[Complex64], variant: PhiInverse) -> Result<Vec<f64>> {
    ks.iter()
        .zip(v)
        .enumerate()
        .map(|(index, (&k, &z))| {
            phi_left_inverse(z, variant).map_err(|e| Error::AtFrequency {
                index,
                k,
                source: Box::new(e),
            })
        })
        .collect()
}

/// How the multiple of pi is chosen between consecutive phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnwrapRule {
    /// The unique shift with `|t_{i+1} - t_i| < pi/2`.
    Nearest,
    /// The unique shift with `0 <= t_{i+1} - t_i < pi`, using that `zeta`
    /// increases with `k`; tolerates gaps up to pi instead of pi/2.
    #[default]
    Increasing,
}

impl std::str::FromStr for UnwrapRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nearest" => Ok(UnwrapRule::Nearest),
            "increasing" => Ok(UnwrapRule::Increasing),
            other => Err(Error::InvalidInput(format!(
                "unwrap rule must be `nearest` or `increasing`, got `{other}`"
            ))),
        }
    }
}

/// Shifts each value by a multiple of pi so consecutive gaps are below pi/2.
pub fn unwrap(raw: &[f64]) -> Result<Vec<f64>> {
    unwrap_with(raw, UnwrapRule::Nearest)
}

/// [`unwrap`] with an explicit rule.
pub fn unwrap_with(raw: &[f64], rule: UnwrapRule) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(raw.len());
    for (i, &r) in raw.iter().enumerate() {
        if !r.is_finite() {
            return Err(Error::DataIntegrity(format!("phase {i} is not finite")));
        }
        let Some(&prev) = out.last() else {
            out.push(r);
            continue;
        };
        let t = match rule {
            UnwrapRule::Nearest => {
                let t = r + ((prev - r) / PI).round() * PI;
                if ((t - prev).abs() - PI / 2.0).abs() <= UNWRAP_TIE_TOL {
                    return Err(Error::UnwrapAmbiguity { index: i });
                }
                t
            }
            UnwrapRule::Increasing => {
                let t = r + ((prev - r) / PI).ceil() * PI;
                if (t - prev).abs() <= UNWRAP_TIE_TOL || (t - prev - PI).abs() <= UNWRAP_TIE_TOL {
                    return Err(Error::UnwrapAmbiguity { index: i });
                }
                t
            }
        };
        out.push(t);
    }
    Ok(out)
}

/// `k_N` on a plateau of width `h_meas`.
fn plateau_wavenumber(k: f64, n: ModeIndex, h_meas: f64) -> Result<f64> {
    let s = wavenumber_sq_at_width(h_meas, n, k);
    if !(s > 0.0) {
        return Err(Error::Domain(format!(
            "mode {n} does not propagate at k = {k} on the measurement plateau"
        )));
    }
    Ok(s.sqrt())
}

/// Global multiple of pi from the first two unwrapped phases. Negative
/// estimates are raised to 0, since `zeta >= 0` forces `ell >= 0`.
pub fn estimate_ell(t1: f64, t2: f64, k1: f64, k2: f64, n: ModeIndex, h_meas: f64) -> Result<i64> {
    let k1n = plateau_wavenumber(k1, n, h_meas)?;
    let k2n = plateau_wavenumber(k2, n, h_meas)?;
    if k2n == k1n {
        return Err(Error::DegenerateGrid(
            "the first two frequencies give the same plateau wavenumber".into(),
        ));
    }
    let ell = ((t2 * k1n - t1 * k2n) / (PI * (k2n - k1n)) + ELL_SLACK).floor();
    if !ell.is_finite() {
        return Err(Error::DataIntegrity("non-finite estimate of ell".into()));
    }
    Ok((ell as i64).max(0))
}

/// Indices (0-based) kept when thinning `len` values to `keep`: the
/// 1-based index `1 + ceil(j (len - 1) / (keep - 1))` for `j = 0..keep`.
pub fn thin_indices(len: usize, keep: usize) -> Result<Vec<usize>> {
    if keep < 2 {
        return Err(Error::InvalidInput(format!("must keep at least 2 frequencies, got {keep}")));
    }
    if keep > len {
        return Err(Error::InvalidInput(format!("cannot keep {keep} of {len} frequencies")));
    }
    Ok((0..keep)
        .map(|j| (j * (len - 1)).div_ceil(keep - 1))
        .collect())
}

/// Subsequence of `values` at [`thin_indices`].
pub fn thin_frequencies<T: Clone>(values: &[T], keep: usize) -> Result<Vec<T>> {
    Ok(thin_indices(values.len(), keep)?
        .into_iter()
        .map(|i| values[i].clone())
        .collect())
}

/// Lower-triangular system `T V = d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangularSystem {
    /// Frequencies `k_1 < ... < k_I`.
    pub ks: Vec<f64>,
    /// `N pi / h_max`.
    pub k0: f64,
    /// `p[i][j] = sqrt|k_i^2 - k_j^2|` for `j = 0..=i` (index 0 is `k0`).
    pub p: Vec<Vec<f64>>,
    /// Row-major lower triangle: `t[i]` has `i + 1` entries.
    pub t: Vec<Vec<f64>>,
    pub d: Vec<f64>,
}

impl TriangularSystem {
    pub fn size(&self) -> usize {
        self.d.len()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.t.iter().map(|r| r[r.len() - 1]).collect()
    }

    /// Dense copy (zeros above the diagonal).
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        self.t
            .iter()
            .map(|r| {
                let mut row = r.clone();
                row.resize(n, 0.0);
                row
            })
            .collect()
    }
}

/// Builds `T` from the frequencies and the unwrapped phases `d`. Frequencies
/// need only be increasing (thinned grids are not exactly equispaced).
pub fn assemble_system(ks: &[f64], k0: f64, d: &[f64]) -> Result<TriangularSystem> {
    if ks.len() != d.len() || ks.is_empty() {
        return Err(Error::DataIntegrity(format!(
            "{} frequencies for {} phases",
            ks.len(),
            d.len()
        )));
    }
    if !(ks[0] > k0) || ks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::DegenerateGrid("frequencies must increase from above k0".into()));
    }
    if let Some(i) = d.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::DataIntegrity(format!(
            "phases are not strictly increasing at index {}: {} then {}",
            i + 1,
            d[i],
            d[i + 1]
        )));
    }
    let all_k = |j: usize| if j == 0 { k0 } else { ks[j - 1] };
    let mut p = Vec::with_capacity(ks.len());
    let mut t = Vec::with_capacity(ks.len());
    for i in 1..=ks.len() {
        let ki = all_k(i);
        let row_p: Vec<f64> = (0..=i)
            .map(|j| {
                let kj = all_k(j);
                ((ki - kj) * (ki + kj)).abs().sqrt()
            })
            .collect();
        let mut row_t = Vec::with_capacity(i);
        row_t.push(row_p[0]);
        for j in 2..=i {
            // p_{i,i} = 0, so the diagonal reduces to 3 p_{i,i-1} / 4
            row_t.push((row_p[j] + 3.0 * row_p[j - 1]) / 4.0);
        }
        p.push(row_p);
        t.push(row_t);
    }
    Ok(TriangularSystem {
        ks: ks.to_vec(),
        k0,
        p,
        t,
        d: d.to_vec(),
    })
}

/// Forward substitution for a lower-triangular row-major matrix.
pub fn forward_substitution(t: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let mut x = Vec::with_capacity(b.len());
    for (i, row) in t.iter().enumerate() {
        let diag = row[i];
        if !(diag.abs() > 0.0) {
            return Err(Error::Solver(format!("zero diagonal entry at row {i}")));
        }
        let s: f64 = row[..i].iter().zip(&x).map(|(a, v)| a * v).sum();
        x.push((b[i] - s) / diag);
    }
    Ok(x)
}

/// Solution of the strip system with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripSolution {
    /// Distances between consecutive resonant points.
    pub v: Vec<f64>,
    /// Recovered resonant points, `x_meas - sum_{j<=i} v_j`.
    pub x_app: Vec<f64>,
    /// Indices with `v < 0` (non-decreasing `x_app`).
    pub negative_v: Vec<usize>,
    /// `||T||_1 ||T^{-1}||_1`.
    pub condition: f64,
}

/// Solves `T V = d` and accumulates the resonant points from `x_meas`.
pub fn solve_strip(sys: &TriangularSystem, x_meas: f64) -> Result<StripSolution> {
    if sys.diagonal().iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Solver("diagonal of T must be positive".into()));
    }
    let v = forward_substitution(&sys.t, &sys.d)?;
    let mut x_app = Vec::with_capacity(v.len());
    let mut acc = 0.0;
    for &vi in &v {
        acc += vi;
        x_app.push(x_meas - acc);
    }
    let negative_v = v
        .iter()
        .enumerate()
        .filter(|(_, &vi)| vi < 0.0)
        .map(|(i, _)| i)
        .collect();
    Ok(StripSolution {
        condition: condition_one_norm(&sys.t)?,
        v,
        x_app,
        negative_v,
    })
}

fn condition_one_norm(t: &[Vec<f64>]) -> Result<f64> {
    let n = t.len();
    let col_norm = |m: &dyn Fn(usize, usize) -> f64| {
        (0..n)
            .map(|j| (0..n).map(|i| m(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let norm_t = col_norm(&|i, j| if j <= i { t[i][j] } else { 0.0 });
    let mut inv = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = forward_substitution(t, &e)?;
        for i in 0..n {
            inv[i][j] = col[i];
        }
    }
    let norm_inv = col_norm(&|i, j| inv[i][j]);
    Ok(norm_t * norm_inv)
}

/// Piecewise-linear width estimate through the anchors and the recovered
/// resonant points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub x_app: Vec<f64>,
    /// `(x, width)` sorted by `x`, including both anchors.
    pub samples: Vec<(f64, f64)>,
    /// Set when the recovered points were not ordered and the interpolant was
    /// built on the monotone envelope.
    pub monotone_envelope: bool,
    pub warnings: Vec<String>,
}

impl Reconstruction {
    /// `h_app(x)`, constant outside the sampled range.
    pub fn eval(&self, x: f64) -> f64 {
        let s = &self.samples;
        if x <= s[0].0 {
            return s[0].1;
        }
        if x >= s[s.len() - 1].0 {
            return s[s.len() - 1].1;
        }
        let i = s.partition_point(|p| p.0 <= x);
        let (x0, h0) = s[i - 1];
        let (x1, h1) = s[i];
        if x1 == x0 {
            return h1;
        }
        h0 + (h1 - h0) * (x - x0) / (x1 - x0)
    }

    /// `[min x, max x]` over the samples.
    pub fn hull(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }
}

/// Interpolates `(x_left, h_min)`, `(x_app_i, N pi / k_i)`, `(x_right, h_max)`.
pub fn reconstruct(
    bounds: (f64, f64),
    ks: &[f64],
    n: ModeIndex,
    x_app: &[f64],
    x_right: f64,
    x_left: f64,
) -> Result<Reconstruction> {
    let (h_min, h_max) = bounds;
    if ks.len() != x_app.len() {
        return Err(Error::DataIntegrity(format!(
            "{} frequencies for {} resonant points",
            ks.len(),
            x_app.len()
        )));
    }
    if !(x_left < x_right) || !(h_min <= h_max) {
        return Err(Error::InvalidInput(format!(
            "anchors must satisfy x_left < x_right and h_min <= h_max, got [{x_left}, {x_right}] and ({h_min}, {h_max})"
        )));
    }
    if x_app.iter().any(|x| !x.is_finite()) {
        return Err(Error::DataIntegrity("non-finite resonant point".into()));
    }
    let mut samples = vec![(x_left, h_min)];
    samples.extend(x_app.iter().zip(ks).map(|(&x, &k)| (x, cutoff(n, 1.0) / k)));
    samples.push((x_right, h_max));
    let ordered = samples.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1);
    let mut warnings = Vec::new();
    if !ordered {
        warnings.push(
            "recovered points are not monotone; interpolating their monotone envelope".to_string(),
        );
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut running = f64::NEG_INFINITY;
        for s in samples.iter_mut() {
            running = running.max(s.1);
            s.1 = running;
        }
    }
    Ok(Reconstruction {
        x_app: x_app.to_vec(),
        samples,
        monotone_envelope: !ordered,
        warnings,
    })
}

/// `max |h - h_app| / h_max` over a 10^4-point grid spanning the truth
/// support and the reconstruction's sample range.
pub fn linf_error(rec: &Reconstruction, truth: &WidthProfile) -> f64 {
    let (a, b) = truth.support();
    let (c, d) = rec.hull();
    let lo = a.min(c);
    let hi = b.max(d);
    (0..ERROR_GRID)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (ERROR_GRID - 1) as f64;
            (truth.h(x) - rec.eval(x)).abs()
        })
        .fold(0.0, f64::max)
        / truth.h_max()
}

/// Knobs of the inversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionSettings {
    /// Frequencies kept for the triangular solve.
    pub keep: usize,
    pub phi_inverse: PhiInverse,
    #[serde(default)]
    pub unwrap: UnwrapRule,
    pub h_min: f64,
    pub h_max: f64,
    /// Right support edge, anchored at `h_max`.
    pub x_right: f64,
    /// Left support edge, anchored at `h_min`.
    pub x_left: f64,
}

/// Every intermediate of one inversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionReport {
    pub mode: ModeIndex,
    pub x_meas: f64,
    pub frequencies: Vec<f64>,
    pub raw_phases: Vec<f64>,
    pub t: Vec<f64>,
    pub ell: i64,
    pub d: Vec<f64>,
    pub kept_indices: Vec<usize>,
    pub kept_frequencies: Vec<f64>,
    pub t_diagonal: Vec<f64>,
    pub condition_estimate: f64,
    pub v: Vec<f64>,
    pub x_app: Vec<f64>,
    pub negative_v: Vec<usize>,
    pub reconstruction: Reconstruction,
}

fn stage(name: &'static str) -> impl Fn(Error) -> Error {
    move |e| e.in_stage(name)
}

/// Runs normalize, inverse, unwrap, ell, thin, assemble, solve, reconstruct.
pub fn invert_measurements(
    m: &ModalMeasurementSet,
    src: &SourceSpec,
    settings: &InversionSettings,
) -> Result<InversionReport> {
    let n = m.mode();
    let ks = m.grid().values();
    if ks.len() < 2 {
        return Err(Error::DegenerateGrid("need at least two frequencies".into()));
    }
    let v = normalize(m, src, settings.h_max).map_err(stage("normalize"))?;
    let raw = phase_values(ks, &v, settings.phi_inverse).map_err(stage("phi-inverse"))?;
    let t = unwrap_with(&raw, settings.unwrap).map_err(stage("unwrap"))?;
    let ell = estimate_ell(t[0], t[1], ks[0], ks[1], n, settings.h_max).map_err(stage("ell"))?;
    let d: Vec<f64> = t.iter().map(|ti| ti + ell as f64 * PI).collect();
    let kept_indices = thin_indices(ks.len(), settings.keep).map_err(stage("thin"))?;
    let kept_k: Vec<f64> = kept_indices.iter().map(|&i| ks[i]).collect();
    let kept_d: Vec<f64> = kept_indices.iter().map(|&i| d[i]).collect();
    let k0 = cutoff(n, settings.h_max);
    let sys = assemble_system(&kept_k, k0, &kept_d).map_err(stage("assemble"))?;
    let sol = solve_strip(&sys, m.x_meas()).map_err(stage("solve"))?;
    let reconstruction = reconstruct(
        (settings.h_min, settings.h_max),
        &kept_k,
        n,
        &sol.x_app,
        settings.x_right,
        settings.x_left,
    )
    .map_err(stage("reconstruct"))?;
    Ok(InversionReport {
        mode: n,
        x_meas: m.x_meas(),
        frequencies: ks.to_vec(),
        raw_phases: raw,
        t,
        ell,
        d,
        kept_indices,
        kept_frequencies: kept_k,
        t_diagonal: sys.diagonal(),
        condition_estimate: sol.condition,
        v: sol.v,
        x_app: sol.x_app,
        negative_v: sol.negative_v,
        reconstruction,
    })
}
