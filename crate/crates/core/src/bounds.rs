//! Estimation of `h_min` and `h_max` from a broadband amplitude sweep.
//!
//! The modal amplitude explodes where mode `N` is cut off on the measurement
//! plateau (`k = N pi / h_max`), and its departure from a smooth reference
//! curve stops where the mode stops being locally resonant (`k = N pi / h_min`).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{green_app, modal_data, Backend, BoundaryAtom, FdSettings, SourceSpec};
use crate::profile::{classify_mode, cutoff, ModeIndex, WidthProfile};

/// Relative shift applied to a frequency that sits on a cutoff.
const CUTOFF_NUDGE: f64 = 1e-9;
/// Samples in the change-point window.
const WINDOW: usize = 5;
/// Activity threshold as a multiple of the median slope jump.
const JUMP_FACTOR: f64 = 3.0;

/// Amplitudes of one sweep and the smooth reference curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub frequencies: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub reference: Vec<f64>,
}

/// Wall source `delta_{x_meas}` on the top boundary.
pub fn sweep_source(x_meas: f64) -> SourceSpec {
    SourceSpec {
        interior: vec![],
        boundary_top: vec![BoundaryAtom {
            x: x_meas,
            amplitude: Complex64::new(1.0, 0.0),
        }],
        boundary_bot: vec![],
    }
}

/// Moves `k` off a cutoff of mode `n` if it sits on one.
fn guard(p: &WidthProfile, n: ModeIndex, k: f64) -> f64 {
    match classify_mode(p, n, k) {
        Err(Error::IllPosedFrequency { .. }) => k * (1.0 + CUTOFF_NUDGE),
        _ => k,
    }
}

/// `|u_{k,N}(x_meas)|` on `count` equispaced frequencies of `[k_lo, k_hi]`,
/// with the reference `|G|` of a uniform guide of width `h(x_meas)`.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    p: &WidthProfile,
    src: &SourceSpec,
    n: ModeIndex,
    k_lo: f64,
    k_hi: f64,
    count: usize,
    x_meas: f64,
    backend: Backend,
    fd: &FdSettings,
) -> Result<SweepResult> {
    if backend == Backend::Simplified {
        return Err(Error::InvalidInput(
            "the simplified model is only defined inside the resonant band; sweep with airy or fd"
                .into(),
        ));
    }
    if count == 0 || !(k_lo > 0.0) || (count > 1 && !(k_hi > k_lo)) {
        return Err(Error::DegenerateGrid(format!(
            "sweep needs count >= 1 and 0 < k_lo < k_hi, got {count} on [{k_lo}, {k_hi}]"
        )));
    }
    src.validate(x_meas)?;
    let plateau = WidthProfile::uniform(p.h(x_meas))?;
    let frequencies: Vec<f64> = (0..count)
        .map(|i| {
            let k = if count == 1 {
                k_lo
            } else {
                k_lo + (k_hi - k_lo) * i as f64 / (count - 1) as f64
            };
            guard(p, n, guard(&plateau, n, k))
        })
        .collect();
    let pairs = frequencies
        .par_iter()
        .enumerate()
        .map(|(index, &k)| {
            let wrap = |e: Error| Error::AtFrequency {
                index,
                k,
                source: Box::new(e),
            };
            let u = modal_data(p, src, n, k, x_meas, backend, fd).map_err(wrap)?;
            let g = green_app(&plateau, n, k, x_meas, x_meas).map_err(wrap)?;
            Ok((u.norm(), g.norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (amplitudes, reference): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    if amplitudes.iter().chain(&reference).any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::DataIntegrity("sweep amplitudes must be finite and positive".into()));
    }
    Ok(SweepResult {
        frequencies,
        amplitudes,
        reference,
    })
}

/// Index of the amplitude maximum refined by a parabola through the
/// log-amplitudes of its neighbours; returns the refined frequency.
fn explosion_frequency(s: &SweepResult) -> Result<(usize, f64)> {
    let amp = &s.amplitudes;
    if amp.len() < 3 {
        return Err(Error::Inconclusive("need at least 3 sweep points".into()));
    }
    let (i, &top) = amp
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    if i == 0 || i + 1 == amp.len() {
        return Err(Error::Inconclusive(format!(
            "amplitude peaks at the sweep edge (k = {})",
            s.frequencies[i]
        )));
    }
    let (y0, y1, y2) = (amp[i - 1].ln(), top.ln(), amp[i + 1].ln());
    let curvature = y0 - 2.0 * y1 + y2;
    if !(curvature < 0.0) {
        return Err(Error::Inconclusive("flat amplitude: no explosion".into()));
    }
    let (k0, k1, k2) = (s.frequencies[i - 1], s.frequencies[i], s.frequencies[i + 1]);
    // vertex of the parabola through three (possibly uneven) points
    let num = (k1 - k0).powi(2) * (y1 - y2) - (k1 - k2).powi(2) * (y1 - y0);
    let den = (k1 - k0) * (y1 - y2) - (k1 - k2) * (y1 - y0);
    let k_hat = if den != 0.0 { k1 - 0.5 * num / den } else { k1 };
    Ok((i, k_hat.clamp(k0, k2)))
}

/// `N pi / k_hat` at the amplitude explosion.
pub fn estimate_hmax(s: &SweepResult, n: ModeIndex) -> Result<f64> {
    let (_, k_hat) = explosion_frequency(s)?;
    Ok(cutoff(n, 1.0) / k_hat)
}

/// Least-squares slope of `y` against `x`.
fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Slope jumps of the log-residual `log(amp / ref)`: for each interior point,
/// the largest change between consecutive secant slopes inside the window of
/// `WINDOW` samples centred on it, compared to the least-squares trend of
/// the window.
fn slope_jumps(s: &SweepResult) -> Vec<f64> {
    let r: Vec<f64> = s
        .amplitudes
        .iter()
        .zip(&s.reference)
        .map(|(a, g)| (a / g).ln())
        .collect();
    let k = &s.frequencies;
    let half = WINDOW / 2;
    let mut jumps = vec![0.0; r.len()];
    for i in half..r.len().saturating_sub(half) {
        let lo = i - half;
        let hi = i + half;
        let trend = ls_slope(&k[lo..=hi], &r[lo..=hi]);
        jumps[i] = (lo..hi)
            .map(|j| ((r[j + 1] - r[j]) / (k[j + 1] - k[j]) - trend).abs())
            .fold(0.0, f64::max);
    }
    jumps
}

/// `N pi / k_hat` where the residual against the reference stops changing
/// behaviour, searched above the explosion.
pub fn estimate_hmin(s: &SweepResult, n: ModeIndex) -> Result<f64> {
    let (peak, _) = explosion_frequency(s)?;
    let jumps = slope_jumps(s);
    let half = WINDOW / 2;
    let mut sorted: Vec<f64> = jumps[half..jumps.len().saturating_sub(half)].to_vec();
    if sorted.iter().all(|j| *j == 0.0) {
        return Err(Error::Inconclusive("residual has no slope changes".into()));
    }
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let max = sorted[sorted.len() - 1];
    let threshold = JUMP_FACTOR * median + 1e-3 * max;
    let active: Vec<usize> = (peak + 1..jumps.len())
        .filter(|&i| jumps[i] > threshold)
        .collect();
    let Some(&last) = active.last() else {
        return Err(Error::Inconclusive(
            "no change point above the explosion".into(),
        ));
    };
    // a window centred at `last` still sees secants `half` samples back
    let edge = last.saturating_sub(half).max(peak + 1);
    if edge + 1 >= s.frequencies.len() {
        return Err(Error::Inconclusive("change point at the sweep edge".into()));
    }
    let k_hat = 0.5 * (s.frequencies[edge] + s.frequencies[edge + 1]);
    Ok(cutoff(n, 1.0) / k_hat)
}

/// Writes `k,amp,ref` rows, optionally after `# ...` comment lines.
pub fn write_sweep_csv(s: &SweepResult, path: &Path, comment: Option<&str>) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(file, "# {line}")?;
        }
    }
    {
        let mut w = csv::Writer::from_writer(&mut file);
        w.write_record(["k", "amp", "ref"])?;
        for ((k, a), g) in s.frequencies.iter().zip(&s.amplitudes).zip(&s.reference) {
            w.write_record([k.to_string(), a.to_string(), g.to_string()])?;
        }
        w.flush()?;
    }
    file.flush()?;
    Ok(())
}
