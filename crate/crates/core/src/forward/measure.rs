//! Measurement sets: synthesis over a frequency grid, noise, and CSV/JSON
//! persistence.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{modal_data, FdSettings, SourceSpec};
use crate::error::{Error, Result};
use crate::profile::{FrequencyGrid, ModeIndex, WidthProfile};

/// Forward model used to produce data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Airy,
    Simplified,
    Fd,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "airy" => Ok(Backend::Airy),
            "simplified" => Ok(Backend::Simplified),
            "fd" => Ok(Backend::Fd),
            other => Err(Error::InvalidInput(format!(
                "backend must be one of airy, simplified, fd; got `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Airy => "airy",
            Backend::Simplified => "simplified",
            Backend::Fd => "fd",
        })
    }
}

/// Origin of a measurement set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    AiryModel,
    SimplifiedModel,
    FdOracle,
    Noisy { sigma: f64, seed: u64, clean: Backend },
}

impl Provenance {
    pub fn of(backend: Backend) -> Self {
        match backend {
            Backend::Airy => Provenance::AiryModel,
            Backend::Simplified => Provenance::SimplifiedModel,
            Backend::Fd => Provenance::FdOracle,
        }
    }

    /// Backend that produced the underlying clean data.
    pub fn backend(&self) -> Backend {
        match self {
            Provenance::AiryModel => Backend::Airy,
            Provenance::SimplifiedModel => Backend::Simplified,
            Provenance::FdOracle => Backend::Fd,
            Provenance::Noisy { clean, .. } => *clean,
        }
    }
}

/// Modal values `u_{k,N}(x_meas)` on a frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalMeasurementSet {
    grid: FrequencyGrid,
    x_meas: f64,
    values: Vec<Complex64>,
    provenance: Provenance,
}

impl ModalMeasurementSet {
    pub fn new(
        grid: FrequencyGrid,
        x_meas: f64,
        values: Vec<Complex64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DataIntegrity(format!(
                "{} values for {} frequencies",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::DataIntegrity("non-finite measurement value".into()));
        }
        Ok(ModalMeasurementSet {
            grid,
            x_meas,
            values,
            provenance,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn mode(&self) -> ModeIndex {
        self.grid.mode()
    }

    pub fn x_meas(&self) -> f64 {
        self.x_meas
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Evaluates `backend` at every grid frequency, in parallel.
pub fn synth_measurements(
    p: &WidthProfile,
    src: &SourceSpec,
    grid: &FrequencyGrid,
    x_meas: f64,
    backend: Backend,
    fd: &FdSettings,
) -> Result<ModalMeasurementSet> {
    src.validate(x_meas)?;
    let values = grid
        .values()
        .par_iter()
        .enumerate()
        .map(|(index, &k)| {
            modal_data(p, src, grid.mode(), k, x_meas, backend, fd).map_err(|e| Error::AtFrequency {
                index,
                k,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ModalMeasurementSet::new(grid.clone(), x_meas, values, Provenance::of(backend))
}

/// Adds complex Gaussian noise of standard deviation `sigma` (each part
/// `sigma / sqrt 2`).
pub fn add_noise(m: &ModalMeasurementSet, sigma: f64, seed: u64) -> Result<ModalMeasurementSet> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!("sigma must be non-negative, got {sigma}")));
    }
    let mut out = m.clone();
    out.provenance = Provenance::Noisy {
        sigma,
        seed,
        clean: m.provenance.backend(),
    };
    if sigma == 0.0 {
        return Ok(out);
    }
    let normal = Normal::new(0.0, sigma / std::f64::consts::SQRT_2)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in out.values.iter_mut() {
        let re = normal.sample(&mut rng);
        let im = normal.sample(&mut rng);
        *v += Complex64::new(re, im);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct Row {
    k: f64,
    re_u: f64,
    im_u: f64,
}

/// Metadata stored next to the CSV values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSidecar {
    pub grid: FrequencyGrid,
    pub x_meas: f64,
    pub mode: ModeIndex,
    pub provenance: Provenance,
    pub seed: Option<u64>,
    /// Free-form context (the resolved run configuration).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

/// Writes `k,re_u,im_u` rows (shortest round-trip float formatting) and the
/// JSON sidecar. `comment` becomes a leading `# ...` line.
pub fn write_measurements(
    m: &ModalMeasurementSet,
    csv_path: &Path,
    json_path: &Path,
    comment: Option<&str>,
    config: Option<serde_json::Value>,
) -> Result<()> {
    let mut file = BufWriter::new(File::create(csv_path)?);
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(file, "# {line}")?;
        }
    }
    {
        let mut w = csv::Writer::from_writer(&mut file);
        for (k, v) in m.grid.values().iter().zip(&m.values) {
            w.serialize(Row {
                k: *k,
                re_u: v.re,
                im_u: v.im,
            })?;
        }
        w.flush()?;
    }
    file.flush()?;
    let seed = match m.provenance {
        Provenance::Noisy { seed, .. } => Some(seed),
        _ => None,
    };
    let sidecar = MeasurementSidecar {
        grid: m.grid.clone(),
        x_meas: m.x_meas,
        mode: m.mode(),
        provenance: m.provenance,
        seed,
        config,
    };
    let mut json = BufWriter::new(File::create(json_path)?);
    serde_json::to_writer_pretty(&mut json, &sidecar)?;
    writeln!(json)?;
    json.flush()?;
    Ok(())
}

/// Reads a set written by [`write_measurements`], checking that the CSV
/// frequencies are exactly the sidecar grid.
pub fn read_measurements(csv_path: &Path, json_path: &Path) -> Result<ModalMeasurementSet> {
    let sidecar: MeasurementSidecar = serde_json::from_reader(File::open(json_path)?)?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(csv_path)?;
    let mut values = Vec::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        let row = row?;
        let expected = sidecar.grid.values().get(i).copied();
        if expected != Some(row.k) {
            return Err(Error::DataIntegrity(format!(
                "row {i}: frequency {} does not match the grid ({expected:?})",
                row.k
            )));
        }
        values.push(Complex64::new(row.re_u, row.im_u));
    }
    if sidecar.mode != sidecar.grid.mode() {
        return Err(Error::DataIntegrity("sidecar mode disagrees with its grid".into()));
    }
    ModalMeasurementSet::new(sidecar.grid, sidecar.x_meas, values, sidecar.provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::BuiltinId;

    fn small_set() -> ModalMeasurementSet {
        let p = WidthProfile::builtin(BuiltinId::H1);
        let grid = FrequencyGrid::new(30.92, 31.93, 5, ModeIndex(1), &p).unwrap();
        synth_measurements(
            &p,
            &SourceSpec::default(),
            &grid,
            6.0,
            Backend::Simplified,
            &FdSettings::default(),
        )
        .unwrap()
    }

    #[test]
    fn noise_free_is_identity_and_seeded_noise_is_deterministic() {
        let m = small_set();
        let clean = add_noise(&m, 0.0, 3).unwrap();
        assert_eq!(clean.values(), m.values());
        let a = add_noise(&m, 0.1, 9).unwrap();
        let b = add_noise(&m, 0.1, 9).unwrap();
        assert_eq!(a.values(), b.values());
        assert_ne!(a.values(), m.values());
        assert_eq!(
            a.provenance(),
            Provenance::Noisy { sigma: 0.1, seed: 9, clean: Backend::Simplified }
        );
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let m = add_noise(&small_set(), 1e-3, 4).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("m.csv");
        let json = dir.path().join("m.json");
        write_measurements(&m, &csv, &json, Some("config {}"), None).unwrap();
        let back = read_measurements(&csv, &json).unwrap();
        assert_eq!(back, m);
        let text = std::fs::read_to_string(&csv).unwrap();
        assert!(text.starts_with("# config {}\nk,re_u,im_u\n"));
    }

    #[test]
    fn value_count_must_match_grid() {
        let m = small_set();
        let r = ModalMeasurementSet::new(m.grid().clone(), 6.0, vec![], Provenance::AiryModel);
        assert!(matches!(r, Err(Error::DataIntegrity(_))));
    }
}
