use num_complex::Complex64;
use wavestrip::bounds::{estimate_hmax, estimate_hmin, sweep, sweep_source, write_sweep_csv, SweepResult};
use wavestrip::forward::{Backend, FdSettings};
use wavestrip::profile::{BuiltinId, ModeIndex, WidthProfile};
use wavestrip::Error;

const N: ModeIndex = ModeIndex(1);

fn h1_sweep(backend: Backend) -> SweepResult {
    let p = WidthProfile::builtin(BuiltinId::H1);
    sweep(&p, &sweep_source(6.0), N, 29.5, 33.5, 91, 6.0, backend, &FdSettings::default()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn h1_estimates_within_half_percent() {
    for backend in [Backend::Airy, Backend::Fd] {
        let s = h1_sweep(backend);
        let hmax = estimate_hmax(&s, N).unwrap();
        let hmin = estimate_hmin(&s, N).unwrap();
        assert!(rel(hmax, 0.1016384) < 5e-3, "{backend}: h_max {hmax}");
        assert!(rel(hmin, 0.0983616) < 5e-3, "{backend}: h_min {hmin}");
        assert!(hmax >= hmin);
    }
}

#[test]
fn h1_peak_near_plateau_cutoff() {
    let s = h1_sweep(Backend::Airy);
    let (i, _) = s
        .amplitudes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    assert!(rel(s.frequencies[i], 31.01) < 5e-3, "peak at {}", s.frequencies[i]);
}

#[test]
fn sweep_amplitudes_finite_positive_and_guarded() {
    let s = h1_sweep(Backend::Airy);
    assert_eq!(s.frequencies.len(), 91);
    assert!(s.frequencies.windows(2).all(|w| w[0] < w[1]));
    assert!(s.amplitudes.iter().chain(&s.reference).all(|a| a.is_finite() && *a > 0.0));

    // a frequency exactly on the plateau cutoff is nudged, not rejected
    let p = WidthProfile::builtin(BuiltinId::H1);
    let k0 = std::f64::consts::PI / p.h_max();
    let one = sweep(&p, &sweep_source(6.0), N, k0, k0, 1, 6.0, Backend::Airy, &FdSettings::default())
        .unwrap();
    assert_eq!(one.frequencies.len(), 1);
    assert!(one.frequencies[0] > k0 && rel(one.frequencies[0], k0) < 2e-9);
    assert!(one.amplitudes[0].is_finite());
}

#[test]
fn constructed_pole_is_located() {
    let k_c = 31.2345;
    let frequencies: Vec<f64> = (0..81).map(|i| 30.0 + 0.05 * i as f64).collect();
    let amplitudes: Vec<f64> = frequencies.iter().map(|k| 1.0 / (k - k_c).abs().sqrt()).collect();
    let s = SweepResult {
        reference: vec![1.0; frequencies.len()],
        frequencies,
        amplitudes,
    };
    let hmax = estimate_hmax(&s, N).unwrap();
    let k_hat = std::f64::consts::PI / hmax;
    assert!((k_hat - k_c).abs() <= 0.05, "k_hat {k_hat}");
}

#[test]
fn flat_amplitude_is_inconclusive() {
    let frequencies: Vec<f64> = (0..20).map(|i| 30.0 + 0.1 * i as f64).collect();
    let s = SweepResult {
        amplitudes: vec![2.0; 20],
        reference: vec![1.0; 20],
        frequencies,
    };
    assert!(matches!(estimate_hmax(&s, N), Err(Error::Inconclusive(_))));
}

#[test]
fn edge_peak_is_inconclusive() {
    let frequencies: Vec<f64> = (0..20).map(|i| 30.0 + 0.1 * i as f64).collect();
    let amplitudes = frequencies.iter().map(|k| 1.0 / (k - 29.9)).collect();
    let s = SweepResult {
        amplitudes,
        reference: vec![1.0; 20],
        frequencies,
    };
    assert!(matches!(estimate_hmax(&s, N), Err(Error::Inconclusive(_))));
}

fn kinked(k_c: f64, with_kink: bool) -> SweepResult {
    let k_p = 30.52;
    let frequencies: Vec<f64> = (0..121).map(|i| 30.0 + 0.025 * i as f64).collect();
    let reference: Vec<f64> = frequencies.iter().map(|k| 1.0 / (k - k_p).abs().sqrt()).collect();
    let amplitudes = frequencies
        .iter()
        .zip(&reference)
        .map(|(k, g)| if with_kink { g * (0.8 * (k_c - k).max(0.0)).exp() } else { *g })
        .collect();
    SweepResult {
        frequencies,
        amplitudes,
        reference,
    }
}

#[test]
fn constructed_kink_is_located() {
    let k_c = 31.61;
    let hmin = estimate_hmin(&kinked(k_c, true), N).unwrap();
    let k_hat = std::f64::consts::PI / hmin;
    assert!((k_hat - k_c).abs() <= 5.0 * 0.025, "k_hat {k_hat}");
}

#[test]
fn zero_residual_is_inconclusive() {
    assert!(matches!(
        estimate_hmin(&kinked(31.61, false), N),
        Err(Error::Inconclusive(_))
    ));
}

#[test]
fn estimates_invariant_under_source_scaling() {
    let p = WidthProfile::builtin(BuiltinId::H1);
    let base = h1_sweep(Backend::Airy);
    let scaled_src = sweep_source(6.0).scaled(Complex64::new(-3.0, 7.5));
    let scaled = sweep(&p, &scaled_src, N, 29.5, 33.5, 91, 6.0, Backend::Airy, &FdSettings::default())
        .unwrap();
    assert!(rel(estimate_hmax(&scaled, N).unwrap(), estimate_hmax(&base, N).unwrap()) < 1e-12);
    assert!(rel(estimate_hmin(&scaled, N).unwrap(), estimate_hmin(&base, N).unwrap()) < 1e-12);
}

#[test]
fn hmax_not_below_hmin_on_builtins() {
    for id in [BuiltinId::H1, BuiltinId::H2, BuiltinId::H3, BuiltinId::H4] {
        let p = WidthProfile::builtin(id);
        let s = sweep(&p, &sweep_source(6.0), N, 29.5, 33.5, 91, 6.0, Backend::Airy, &FdSettings::default())
            .unwrap();
        if let (Ok(a), Ok(b)) = (estimate_hmax(&s, N), estimate_hmin(&s, N)) {
            assert!(a >= b, "{id:?}: {a} < {b}");
        }
    }
}

#[test]
fn simplified_backend_rejected() {
    let p = WidthProfile::builtin(BuiltinId::H1);
    let r = sweep(&p, &sweep_source(6.0), N, 29.5, 33.5, 5, 6.0, Backend::Simplified, &FdSettings::default());
    assert!(matches!(r, Err(Error::InvalidInput(_))));
}

#[test]
fn sweep_csv_has_three_columns() {
    let s = h1_sweep(Backend::Airy);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    write_sweep_csv(&s, &path, Some("h1 sweep")).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# h1 sweep"));
    assert_eq!(lines.next(), Some("k,amp,ref"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row, vec![s.frequencies[0], s.amplitudes[0], s.reference[0]]);
    assert_eq!(text.lines().count(), 93);
}
