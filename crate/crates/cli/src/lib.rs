//! Run configuration and subcommand implementations for the `wavestrip`
//! binary. Every artifact embeds the resolved configuration, so equal
//! configurations give byte-identical files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use wavestrip::bounds::{estimate_hmax, estimate_hmin, sweep, sweep_source, write_sweep_csv, SweepResult};
use wavestrip::forward::{
    add_noise, read_measurements, synth_measurements, write_measurements, Backend, FdSettings, ModalMeasurementSet,
    SourceSpec,
};
use wavestrip::invert::{invert_measurements, linf_error, InversionReport, InversionSettings, UnwrapRule};
use wavestrip::profile::{BuiltinId, FrequencyGrid, ModeIndex, ProfileSpec, WidthProfile};
use wavestrip::specfun::PhiInverse;

pub const MEASUREMENTS: &str = "measurements";
pub const REPORT: &str = "report.json";
pub const H_APP: &str = "h_app.csv";
pub const SWEEP: &str = "sweep.csv";
pub const BOUNDS: &str = "bounds.json";
pub const NOISE_STUDY: &str = "noise_study.csv";
pub const SUMMARY: &str = "summary.csv";

/// Equispaced frequency grid `{a:b:count}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub a: f64,
    pub b: f64,
    pub count: usize,
}

/// Broadband sweep used to estimate the width bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub k_lo: f64,
    pub k_hi: f64,
    pub count: usize,
    pub backend: Backend,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            k_lo: 29.5,
            k_hi: 33.5,
            count: 91,
            backend: Backend::Airy,
        }
    }
}

/// Noise levels of the noise study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Explicit levels; when absent, `count` log-spaced levels on `[lo, hi]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<Vec<f64>>,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            sigmas: None,
            lo: 1.23e-4,
            hi: 54.6,
            count: 30,
        }
    }
}

impl NoiseConfig {
    /// Levels in ascending order.
    pub fn levels(&self) -> Vec<f64> {
        let mut out = match &self.sigmas {
            Some(s) => s.clone(),
            None if self.count == 1 => vec![self.lo],
            None => {
                let (a, b) = (self.lo.ln(), self.hi.ln());
                (0..self.count)
                    .map(|i| (a + (b - a) * i as f64 / (self.count - 1) as f64).exp())
                    .collect()
            }
        };
        out.sort_by(f64::total_cmp);
        out
    }
}

/// One JSON document describing a run. Missing fields take the defaults of
/// the reference experiment: profile h1 on its reference grid, 50 frequencies
/// thinned to 12, section at 6, sources at 6.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub profile: ProfileSpec,
    pub source: SourceSpec,
    pub mode: u32,
    /// Defaults to the reference band of a built-in profile.
    pub grid: Option<GridConfig>,
    pub keep: usize,
    pub x_meas: f64,
    pub backend: Backend,
    pub phi_inverse: PhiInverse,
    pub unwrap: UnwrapRule,
    pub sigma: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub fd: FdSettings,
    /// Width bounds; default to a previous `bounds` run, then to the profile.
    pub h_min: Option<f64>,
    pub h_max: Option<f64>,
    /// Support edges anchoring the reconstruction; default to the
    /// increasing part of the profile.
    pub x_right: Option<f64>,
    pub x_left: Option<f64>,
    pub sweep: SweepConfig,
    pub noise: NoiseConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            profile: ProfileSpec::Builtin(BuiltinId::H1),
            source: SourceSpec::default(),
            mode: 1,
            grid: None,
            keep: 12,
            x_meas: 6.0,
            backend: Backend::Simplified,
            phi_inverse: PhiInverse::Exact,
            unwrap: UnwrapRule::Increasing,
            sigma: 0.0,
            seed: 0,
            out_dir: PathBuf::from("out"),
            fd: FdSettings::default(),
            h_min: None,
            h_max: None,
            x_right: None,
            x_left: None,
            sweep: SweepConfig::default(),
            noise: NoiseConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn with_profile(mut self, id: BuiltinId) -> Self {
        self.profile = ProfileSpec::Builtin(id);
        self.grid = None;
        self
    }

    pub fn mode_index(&self) -> ModeIndex {
        ModeIndex(self.mode)
    }

    pub fn width_profile(&self) -> Result<WidthProfile> {
        WidthProfile::from_spec(&self.profile).context("profile")
    }

    /// Fills defaulted fields and checks every precondition, naming the
    /// offending field.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = self.clone();
        let p = cfg.width_profile()?;
        if cfg.mode == 0 {
            bail!("mode: the fundamental mode is never locally resonant; use mode >= 1");
        }
        let grid = match cfg.grid {
            Some(g) => g,
            None => match cfg.profile {
                ProfileSpec::Builtin(id) => {
                    let (a, b) = id.reference_band();
                    let (a, b) = (a * cfg.mode as f64, b * cfg.mode as f64);
                    GridConfig { a, b, count: 50 }
                }
                _ => bail!("grid: required for non built-in profiles"),
            },
        };
        cfg.grid = Some(grid);
        if grid.count < 2 {
            bail!("grid.count: need at least 2 frequencies, got {}", grid.count);
        }
        if !(cfg.keep >= 2 && cfg.keep <= grid.count) {
            bail!("keep: must lie in [2, {}], got {}", grid.count, cfg.keep);
        }
        if !cfg.x_meas.is_finite() {
            bail!("x_meas: must be finite");
        }
        if !(cfg.sigma >= 0.0 && cfg.sigma.is_finite()) {
            bail!("sigma: must be non-negative, got {}", cfg.sigma);
        }
        cfg.source.validate(cfg.x_meas).context("source")?;
        FrequencyGrid::new(grid.a, grid.b, grid.count, cfg.mode_index(), &p).context("grid")?;
        if let (Some(lo), Some(hi)) = (cfg.h_min, cfg.h_max) {
            if !(0.0 < lo && lo <= hi) {
                bail!("h_min/h_max: need 0 < h_min <= h_max, got {lo} and {hi}");
            }
        }
        let levels = cfg.noise.levels();
        if levels.is_empty() || levels.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            bail!("noise: levels must be a non-empty list of non-negative numbers");
        }
        Ok(cfg)
    }

    fn grid(&self, p: &WidthProfile) -> Result<FrequencyGrid> {
        let g = self.grid.context("grid: unresolved")?;
        FrequencyGrid::new(g.a, g.b, g.count, self.mode_index(), p).context("grid")
    }

    fn json(&self) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(self)?)
    }

    fn comment(&self) -> Result<String> {
        Ok(format!("seed: {}\nconfig: {}", self.seed, serde_json::to_string(self)?))
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn csv_writer(path: &Path, comment: &str) -> Result<csv::Writer<BufWriter<File>>> {
    let mut f = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for line in comment.lines() {
        writeln!(f, "# {line}")?;
    }
    Ok(csv::Writer::from_writer(f))
}

/// Paths of the measurement pair `<prefix>.csv` and `<prefix>.json`.
pub fn measurement_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    (prefix.with_extension("csv"), prefix.with_extension("json"))
}

/// Synthetic measurements for a resolved config, with noise when
/// `sigma > 0`.
pub fn simulate(cfg: &RunConfig) -> Result<ModalMeasurementSet> {
    let p = cfg.width_profile()?;
    let grid = cfg.grid(&p)?;
    let clean = synth_measurements(&p, &cfg.source, &grid, cfg.x_meas, cfg.backend, &cfg.fd)
        .context("simulating measurements")?;
    if cfg.sigma > 0.0 {
        Ok(add_noise(&clean, cfg.sigma, cfg.seed)?)
    } else {
        Ok(clean)
    }
}

/// `simulate`: writes `measurements.csv` and `measurements.json`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<PathBuf> {
    let cfg = cfg.resolve()?;
    let m = simulate(&cfg)?;
    ensure_dir(&cfg.out_dir)?;
    let prefix = cfg.out_dir.join(MEASUREMENTS);
    let (csv_path, json_path) = measurement_paths(&prefix);
    write_measurements(&m, &csv_path, &json_path, Some(&cfg.comment()?), Some(cfg.json()?))?;
    Ok(prefix)
}

/// Width bounds from a `bounds` run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsEstimate {
    pub h_min: f64,
    pub h_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct BoundsArtifact {
    config: RunConfig,
    estimate: BoundsEstimate,
}

/// Where the bounds used by an inversion came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsSource {
    Config,
    Sweep,
    Profile,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsUsed {
    pub h_min: f64,
    pub h_max: f64,
    pub source: BoundsSource,
}

fn bounds_for(cfg: &RunConfig, p: &WidthProfile) -> Result<BoundsUsed> {
    if let (Some(h_min), Some(h_max)) = (cfg.h_min, cfg.h_max) {
        return Ok(BoundsUsed {
            h_min,
            h_max,
            source: BoundsSource::Config,
        });
    }
    let path = cfg.out_dir.join(BOUNDS);
    let (mut used, source) = if path.exists() {
        let a: BoundsArtifact = serde_json::from_reader(File::open(&path)?)
            .with_context(|| format!("reading {}", path.display()))?;
        ((a.estimate.h_min, a.estimate.h_max), BoundsSource::Sweep)
    } else {
        ((p.h_min(), p.h_max()), BoundsSource::Profile)
    };
    let source = match (cfg.h_min, cfg.h_max) {
        (None, None) => source,
        _ => BoundsSource::Config,
    };
    if let Some(v) = cfg.h_min {
        used.0 = v;
    }
    if let Some(v) = cfg.h_max {
        used.1 = v;
    }
    Ok(BoundsUsed {
        h_min: used.0,
        h_max: used.1,
        source,
    })
}

/// Inversion knobs for a resolved config.
pub fn inversion_settings(cfg: &RunConfig, p: &WidthProfile) -> Result<(InversionSettings, BoundsUsed)> {
    let bounds = bounds_for(cfg, p)?;
    let (span_lo, span_hi) = p.increasing_span();
    Ok((
        InversionSettings {
            keep: cfg.keep,
            phi_inverse: cfg.phi_inverse,
            unwrap: cfg.unwrap,
            h_min: bounds.h_min,
            h_max: bounds.h_max,
            x_right: cfg.x_right.unwrap_or(span_hi),
            x_left: cfg.x_left.unwrap_or(span_lo),
        },
        bounds,
    ))
}

/// Everything written to `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertArtifact {
    pub config: RunConfig,
    pub seed: u64,
    pub bounds: BoundsUsed,
    pub x_right: f64,
    pub x_left: f64,
    /// The profile is not monotone: only its increasing part is recovered.
    pub partial_recovery: bool,
    pub recoverable_span: (f64, f64),
    pub e_inf: f64,
    pub warnings: Vec<String>,
    pub report: InversionReport,
}

/// Inverts `m` under `cfg` without touching the file system except for a
/// previous bounds estimate.
pub fn invert(cfg: &RunConfig, m: &ModalMeasurementSet) -> Result<InvertArtifact> {
    let p = cfg.width_profile()?;
    let (settings, bounds) = inversion_settings(cfg, &p)?;
    let report = invert_measurements(m, &cfg.source, &settings).with_context(|| {
        format!(
            "inverting with h_min = {}, h_max = {} (from {:?})",
            bounds.h_min, bounds.h_max, bounds.source
        )
    })?;
    let e_inf = linf_error(&report.reconstruction, &p);
    let mut warnings = report.reconstruction.warnings.clone();
    if !report.negative_v.is_empty() {
        warnings.push(format!(
            "{} negative distances: recovered points are not ordered",
            report.negative_v.len()
        ));
    }
    let partial_recovery = !p.is_monotone();
    if partial_recovery {
        warnings.push("profile is not monotone: only its increasing part is reconstructed".into());
    }
    Ok(InvertArtifact {
        config: cfg.clone(),
        seed: cfg.seed,
        bounds,
        x_right: settings.x_right,
        x_left: settings.x_left,
        partial_recovery,
        recoverable_span: p.increasing_span(),
        e_inf,
        warnings,
        report,
    })
}

/// `invert`: reads `<prefix>.csv/.json` (default `out_dir/measurements`),
/// writes `report.json` and `h_app.csv`.
pub fn cmd_invert(cfg: &RunConfig, prefix: Option<&Path>) -> Result<InvertArtifact> {
    let cfg = cfg.resolve()?;
    let prefix = prefix.map(Path::to_path_buf).unwrap_or_else(|| cfg.out_dir.join(MEASUREMENTS));
    let (csv_path, json_path) = measurement_paths(&prefix);
    let m = read_measurements(&csv_path, &json_path)
        .with_context(|| format!("reading measurements {}", prefix.display()))?;
    let art = invert(&cfg, &m)?;
    ensure_dir(&cfg.out_dir)?;
    write_json(&cfg.out_dir.join(REPORT), &art)?;
    let mut w = csv_writer(&cfg.out_dir.join(H_APP), &cfg.comment()?)?;
    w.write_record(["x", "h_app"])?;
    for (x, h) in &art.report.reconstruction.samples {
        w.write_record([x.to_string(), h.to_string()])?;
    }
    w.flush()?;
    Ok(art)
}

/// Sweep and both estimates for a resolved config.
pub fn bounds_sweep(cfg: &RunConfig) -> Result<(SweepResult, BoundsEstimate)> {
    let p = cfg.width_profile()?;
    let n = cfg.mode_index();
    let s = sweep(
        &p,
        &sweep_source(cfg.x_meas),
        n,
        cfg.sweep.k_lo,
        cfg.sweep.k_hi,
        cfg.sweep.count,
        cfg.x_meas,
        cfg.sweep.backend,
        &cfg.fd,
    )
    .context("sweep")?;
    let h_max = estimate_hmax(&s, n).context("estimating h_max")?;
    let h_min = estimate_hmin(&s, n).context("estimating h_min")?;
    Ok((s, BoundsEstimate { h_min, h_max }))
}

/// `bounds`: writes `sweep.csv` and `bounds.json`, which later `invert`
/// runs in the same directory pick up.
pub fn cmd_bounds(cfg: &RunConfig) -> Result<BoundsEstimate> {
    let cfg = cfg.resolve()?;
    let (s, estimate) = bounds_sweep(&cfg)?;
    ensure_dir(&cfg.out_dir)?;
    write_sweep_csv(&s, &cfg.out_dir.join(SWEEP), Some(&cfg.comment()?))?;
    write_json(
        &cfg.out_dir.join(BOUNDS),
        &BoundsArtifact {
            config: cfg.clone(),
            estimate,
        },
    )?;
    Ok(estimate)
}

/// One row of the noise study; `e_inf` is NaN when the inversion failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub sigma: f64,
    pub seed: u64,
    pub e_inf: f64,
    pub error: String,
}

/// One seeded inversion per noise level (seed `cfg.seed + i`), on clean
/// data from the configured backend.
pub fn noise_study(cfg: &RunConfig) -> Result<Vec<NoiseRow>> {
    let mut clean_cfg = cfg.clone();
    clean_cfg.sigma = 0.0;
    let clean = simulate(&clean_cfg)?;
    let p = cfg.width_profile()?;
    cfg.noise
        .levels()
        .into_iter()
        .enumerate()
        .map(|(i, sigma)| {
            let seed = cfg.seed + i as u64;
            let outcome = add_noise(&clean, sigma, seed)
                .map_err(anyhow::Error::from)
                .and_then(|m| invert(cfg, &m));
            Ok(match outcome {
                Ok(a) => NoiseRow {
                    sigma,
                    seed,
                    e_inf: linf_error(&a.report.reconstruction, &p),
                    error: String::new(),
                },
                Err(e) => NoiseRow {
                    sigma,
                    seed,
                    e_inf: f64::NAN,
                    error: format!("{e:#}"),
                },
            })
        })
        .collect()
}

/// `noise-study`: writes `noise_study.csv` with columns `sigma,seed,e_inf,error`.
pub fn cmd_noise_study(cfg: &RunConfig) -> Result<Vec<NoiseRow>> {
    let cfg = cfg.resolve()?;
    let rows = noise_study(&cfg)?;
    ensure_dir(&cfg.out_dir)?;
    let mut w = csv_writer(&cfg.out_dir.join(NOISE_STUDY), &cfg.comment()?)?;
    w.write_record(["sigma", "seed", "e_inf", "error"])?;
    for r in &rows {
        w.write_record([r.sigma.to_string(), r.seed.to_string(), r.e_inf.to_string(), r.error.clone()])?;
    }
    w.flush()?;
    Ok(rows)
}

/// Reference errors of the four increasing profiles and their pass
/// thresholds.
pub const REPRODUCTION: [(BuiltinId, f64, f64); 4] = [
    (BuiltinId::H1, 0.0097, 0.029),
    (BuiltinId::H2, 0.010, 0.030),
    (BuiltinId::H3, 0.011, 0.033),
    (BuiltinId::H4, 0.015, 0.045),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub profile: String,
    pub e_inf: f64,
    pub reference: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Simulates and inverts each increasing profile on its reference grid.
/// Artifacts go to `out_dir/<profile>/`.
pub fn reproduce(cfg: &RunConfig) -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    for (id, reference, threshold) in REPRODUCTION {
        let mut run = cfg.clone().with_profile(id);
        run.out_dir = cfg.out_dir.join(id.name());
        cmd_simulate(&run).with_context(|| format!("{}: simulate", id.name()))?;
        let art = cmd_invert(&run, None).with_context(|| format!("{}: invert", id.name()))?;
        rows.push(SummaryRow {
            profile: id.name().to_string(),
            e_inf: art.e_inf,
            reference,
            threshold,
            pass: art.e_inf <= threshold,
        });
    }
    Ok(rows)
}

/// `reproduce`: writes per-profile artifacts and `summary.csv`; fails
/// listing the profiles over threshold.
pub fn cmd_reproduce(cfg: &RunConfig) -> Result<Vec<SummaryRow>> {
    let base = cfg.resolve()?;
    let rows = reproduce(&base)?;
    ensure_dir(&base.out_dir)?;
    let mut w = csv_writer(&base.out_dir.join(SUMMARY), &base.comment()?)?;
    w.write_record(["profile", "e_inf", "reference", "threshold", "pass"])?;
    for r in &rows {
        w.write_record([
            r.profile.clone(),
            r.e_inf.to_string(),
            r.reference.to_string(),
            r.threshold.to_string(),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(rows)
}
