use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use wavestrip::forward::Backend;
use wavestrip::invert::UnwrapRule;
use wavestrip::specfun::PhiInverse;
use wavestrip_cli::{cmd_bounds, cmd_invert, cmd_noise_study, cmd_reproduce, cmd_simulate, RunConfig};

/// Width reconstruction of a slowly varying waveguide from locally resonant
/// modal measurements.
#[derive(Parser)]
#[command(name = "wavestrip", version)]
struct Cli {
    /// JSON run configuration; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Forward model: airy, simplified or fd.
    #[arg(long, global = true)]
    backend: Option<Backend>,
    /// Noise seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Frequencies kept for the triangular solve.
    #[arg(long, global = true)]
    keep: Option<usize>,
    /// Phase inverse: exact or branch.
    #[arg(long, global = true)]
    phi_inverse: Option<PhiInverse>,
    /// Phase unwrapping rule: increasing or nearest.
    #[arg(long, global = true)]
    unwrap: Option<UnwrapRule>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize measurements on the configured grid.
    Simulate {
        /// Noise standard deviation.
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Invert saved measurements.
    Invert {
        /// Measurement prefix (reads PREFIX.csv and PREFIX.json).
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Estimate h_min and h_max from an amplitude sweep.
    Bounds,
    /// Reconstruction error against noise level.
    NoiseStudy {
        /// Comma-separated noise levels.
        #[arg(long, value_delimiter = ',')]
        sigmas: Option<Vec<f64>>,
    },
    /// Run the four increasing profiles and check their error thresholds.
    Reproduce,
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(b) = cli.backend {
        cfg.backend = b;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(k) = cli.keep {
        cfg.keep = k;
    }
    if let Some(v) = cli.phi_inverse {
        cfg.phi_inverse = v;
    }
    if let Some(u) = cli.unwrap {
        cfg.unwrap = u;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = config(&cli)?;
    match cli.command {
        Command::Simulate { sigma } => {
            if let Some(s) = sigma {
                cfg.sigma = s;
            }
            let prefix = cmd_simulate(&cfg)?;
            println!("wrote {}.csv and {}.json", prefix.display(), prefix.display());
        }
        Command::Invert { data } => {
            let art = cmd_invert(&cfg, data.as_deref())?;
            println!("ell = {}", art.report.ell);
            println!("E_inf = {:.6}", art.e_inf);
            for w in &art.warnings {
                println!("warning: {w}");
            }
        }
        Command::Bounds => {
            let b = cmd_bounds(&cfg)?;
            println!("h_max = {:.7}", b.h_max);
            println!("h_min = {:.7}", b.h_min);
        }
        Command::NoiseStudy { sigmas } => {
            if sigmas.is_some() {
                cfg.noise.sigmas = sigmas;
            }
            for r in cmd_noise_study(&cfg)? {
                if r.error.is_empty() {
                    println!("sigma = {:.4e}  E_inf = {:.6}", r.sigma, r.e_inf);
                } else {
                    println!("sigma = {:.4e}  failed: {}", r.sigma, r.error);
                }
            }
        }
        Command::Reproduce => {
            let rows = cmd_reproduce(&cfg)?;
            let mut failed = Vec::new();
            for r in &rows {
                println!(
                    "{}  E_inf = {:.4}  reference = {:.4}  threshold = {:.3}  {}",
                    r.profile,
                    r.e_inf,
                    r.reference,
                    r.threshold,
                    if r.pass { "pass" } else { "FAIL" }
                );
                if !r.pass {
                    failed.push(r.profile.as_str());
                }
            }
            if !failed.is_empty() {
                eprintln!("over threshold: {}", failed.join(", "));
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
