//! Flag/file/manifest layering into a concrete run configuration.
//! Precedence: command-line flags, then the key-value config file, then a
//! manifest being reproduced, then built-in defaults.

use std::collections::HashMap;
use std::path::Path;

use clap::Args;
use radlbm_core::rte::{RteConfig, SourceSegment, SourceSpec, StepMode};

use crate::manifest::RunManifest;
use crate::CliError;

/// Demo scenario defaults: absorbing/scattering medium with a centered
/// source window on 32 sites, stepped to t = 2.
pub const DEFAULT_KAPPA: f64 = 2.5;
pub const DEFAULT_SIGMA: f64 = 0.5;
pub const DEFAULT_MU: f64 = 1.0;
pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_N: usize = 5;
pub const DEFAULT_DT: f64 = 1.0 / 32.0;
pub const DEFAULT_T_FINAL: f64 = 2.0;
pub const DEFAULT_SHOTS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_MODE: &str = "quantum-exact";

#[derive(Args, Clone, Debug, Default)]
pub struct PhysicsArgs {
    /// Extinction coefficient kappa (1/time)
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Isotropic scattering gain sigma (1/time)
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Direction cosine mu
    #[arg(long)]
    pub mu: Option<f64>,
    /// Signal speed c
    #[arg(long)]
    pub c: Option<f64>,
    /// Lattice qubit count; the lattice has 2^n sites
    #[arg(long)]
    pub n: Option<usize>,
    /// Time step dt; the grid spacing is c * mu * dt
    #[arg(long)]
    pub dt: Option<f64>,
    /// Piecewise-constant source: lo:hi:val[,lo:hi:val...]
    #[arg(long)]
    pub source: Option<String>,
    /// Physical end time; the step count is t-final / dt
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Explicit step count (alternative to --t-final)
    #[arg(long, conflicts_with = "t_final")]
    pub steps: Option<usize>,
}

/// Values read from a `key = value` config file.
#[derive(Debug, Default)]
pub struct FileConfig {
    entries: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim().replace('-', "_");
            let known = [
                "kappa", "sigma", "mu", "c", "n", "dt", "source", "t_final", "steps", "mode",
                "shots", "seed",
            ];
            if !known.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "{}:{}: unknown config key '{key}'",
                    path.display(),
                    lineno + 1
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(FileConfig { entries })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Usage(format!("config value '{raw}' invalid for key '{key}'"))
            }),
        }
    }
}

/// Parse `lo:hi:val[,lo:hi:val...]` into a source spec.
pub fn parse_source(text: &str) -> Result<SourceSpec, CliError> {
    let mut segments = Vec::new();
    for part in text.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        if fields.len() != 3 {
            return Err(CliError::Usage(format!(
                "source segment '{part}' must be lo:hi:val"
            )));
        }
        let parse = |s: &str| -> Result<f64, CliError> {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid number '{s}' in source spec")))
        };
        segments.push(SourceSegment {
            x_lo: parse(fields[0])?,
            x_hi: parse(fields[1])?,
            value: parse(fields[2])?,
        });
    }
    SourceSpec::new(segments).map_err(CliError::from)
}

/// A fully layered configuration plus the solver name to run it with.
#[derive(Clone, Debug)]
pub struct ResolvedRun {
    pub config: RteConfig,
    pub mode_name: String,
}

pub struct RunOverrides {
    pub mode: Option<String>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
}

pub fn resolve_run(
    physics: &PhysicsArgs,
    overrides: &RunOverrides,
    file: Option<&FileConfig>,
    manifest: Option<&RunManifest>,
) -> Result<ResolvedRun, CliError> {
    let fallback = FileConfig::default();
    let file = file.unwrap_or(&fallback);
    let base = manifest.map(|m| m.config.clone());

    let kappa = pick(physics.kappa, file.get("kappa")?, base.as_ref().map(|b| b.kappa), DEFAULT_KAPPA);
    let sigma = pick(physics.sigma, file.get("sigma")?, base.as_ref().map(|b| b.sigma), DEFAULT_SIGMA);
    let mu = pick(physics.mu, file.get("mu")?, base.as_ref().map(|b| b.mu), DEFAULT_MU);
    let c = pick(physics.c, file.get("c")?, base.as_ref().map(|b| b.c), DEFAULT_C);
    let n = pick(physics.n, file.get("n")?, base.as_ref().map(|b| b.n), DEFAULT_N);
    let dt = pick(physics.dt, file.get("dt")?, base.as_ref().map(|b| b.dt), DEFAULT_DT);
    let shots = pick(overrides.shots, file.get("shots")?, base.as_ref().map(|b| b.shots), DEFAULT_SHOTS);
    let seed = pick(overrides.seed, file.get("seed")?, base.as_ref().map(|b| b.seed), DEFAULT_SEED);

    let source = match (&physics.source, file.entries.get("source")) {
        (Some(text), _) => parse_source(text)?,
        (None, Some(text)) => parse_source(text)?,
        (None, None) => base
            .as_ref()
            .map(|b| b.source.clone())
            .unwrap_or_else(|| SourceSpec::centered(1.0)),
    };

    let steps = resolve_steps(physics, file, base.as_ref().map(|b| b.steps), dt)?;

    let mode_name = overrides
        .mode
        .clone()
        .or(file.entries.get("mode").cloned())
        .or_else(|| manifest.map(|m| m.mode.clone()))
        .unwrap_or_else(|| DEFAULT_MODE.to_string());
    let mode = match mode_name.as_str() {
        "quantum-sampled" => StepMode::Sampled,
        _ => StepMode::Exact,
    };

    Ok(ResolvedRun {
        config: RteConfig {
            kappa,
            sigma,
            mu,
            c,
            n,
            dt,
            source,
            steps,
            mode,
            shots,
            seed,
        },
        mode_name,
    })
}

fn pick<T: Copy>(flag: Option<T>, file: Option<T>, manifest: Option<T>, default: T) -> T {
    flag.or(file).or(manifest).unwrap_or(default)
}

fn resolve_steps(
    physics: &PhysicsArgs,
    file: &FileConfig,
    manifest_steps: Option<usize>,
    dt: f64,
) -> Result<usize, CliError> {
    if let Some(steps) = physics.steps.or(file.get("steps")?) {
        return Ok(steps);
    }
    let t_final = physics.t_final.or(file.get("t_final")?);
    match (t_final, manifest_steps) {
        (Some(t), _) => steps_from_time(t, dt),
        (None, Some(steps)) => Ok(steps),
        (None, None) => steps_from_time(DEFAULT_T_FINAL, dt),
    }
}

fn steps_from_time(t_final: f64, dt: f64) -> Result<usize, CliError> {
    if !(t_final.is_finite() && t_final > 0.0 && dt > 0.0) {
        return Err(CliError::Usage("t-final and dt must be positive".into()));
    }
    let exact = t_final / dt;
    let steps = exact.round();
    if (exact - steps).abs() > 1e-6 * exact.max(1.0) {
        return Err(CliError::Usage(format!(
            "t-final {t_final} is not an integer multiple of dt {dt}"
        )));
    }
    Ok(steps as usize)
}

/// Cell centers x_i = (i + 1/2) dx for the run's grid.
pub fn cell_centers(config: &RteConfig) -> Vec<f64> {
    let dx = config.dx();
    (0..config.num_sites())
        .map(|i| (i as f64 + 0.5) * dx)
        .collect()
}
