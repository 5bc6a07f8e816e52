//! Subcommand implementations.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::Serialize;

use radlbm_core::analytic::solve_steady;
use radlbm_core::circuits::{
    build_absorption_emission, build_absorption_scattering, build_propagation, gate_count,
    GateCounts,
};
use radlbm_core::rte::{LatticeField, RteConfig, RunOutput, StepMode};
use radlbm_core::solver::SolverRegistry;

use crate::config::{cell_centers, resolve_run, FileConfig, PhysicsArgs, RunOverrides};
use crate::csvio::{read_profile, write_profile};
use crate::manifest::RunManifest;
use crate::CliError;

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Solver strategy; see the registry names in --help
    #[arg(long)]
    mode: Option<String>,
    /// Measurements per step in quantum-sampled mode
    #[arg(long)]
    shots: Option<u64>,
    /// RNG seed for quantum-sampled mode
    #[arg(long)]
    seed: Option<u64>,
    /// Key-value config file (key = value per line); flags win
    #[arg(long, conflicts_with = "from_manifest")]
    config: Option<PathBuf>,
    /// Reproduce a previous run from its manifest.json; flags win
    #[arg(long)]
    from_manifest: Option<PathBuf>,
    #[arg(long, env = "RADLBM_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Snapshot step indices, comma separated (0 = initial field)
    #[arg(long, value_delimiter = ',', conflicts_with = "every")]
    snapshots: Option<Vec<usize>>,
    /// Snapshot every k steps (the final step is always included)
    #[arg(long)]
    every: Option<usize>,
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let file = args
        .config
        .as_deref()
        .map(FileConfig::load)
        .transpose()?;
    let manifest = args
        .from_manifest
        .as_deref()
        .map(RunManifest::load)
        .transpose()?;
    let resolved = resolve_run(
        &args.physics,
        &RunOverrides {
            mode: args.mode.clone(),
            shots: args.shots,
            seed: args.seed,
        },
        file.as_ref(),
        manifest.as_ref(),
    )?;
    let registry = SolverRegistry::with_builtin();
    let solver = registry.get(&resolved.mode_name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown mode '{}'; available: {}",
            resolved.mode_name,
            registry.names().join(", ")
        ))
    })?;
    resolved.config.validate()?;

    let snapshots = resolve_snapshots(
        &args.snapshots,
        args.every,
        resolved.config.steps,
        manifest.as_ref(),
    )?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out_dir.display())))?;

    let output = solver.run(&resolved.config)?;
    let x = cell_centers(&resolved.config);
    let mut written = Vec::new();
    for &step in &snapshots {
        let field = output.field_at_step(step).expect("snapshot index validated");
        let name = format!("profile_{step}.csv");
        write_profile(&args.out_dir.join(&name), &x, field)?;
        written.push(name);
    }

    let manifest_out = RunManifest {
        tool: RunManifest::tool_info(),
        mode: resolved.mode_name.clone(),
        seed: resolved.config.seed,
        config: resolved.config.clone(),
        snapshots: snapshots.clone(),
        outputs: written.clone(),
        diagnostics: output.diagnostics.clone(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    manifest_out.save(&args.out_dir.join("manifest.json"))?;

    println!(
        "{} ran {} steps on {} sites; wrote {} and manifest.json in {}",
        resolved.mode_name,
        resolved.config.steps,
        resolved.config.num_sites(),
        written.join(", "),
        args.out_dir.display()
    );
    for (k, diag) in output.diagnostics.iter().enumerate() {
        log::debug!(
            "step {}: success probability {:.6}, norm {:.6e}",
            k + 1,
            diag.success_probability,
            diag.norm_phi
        );
    }
    Ok(())
}

fn resolve_snapshots(
    flag: &Option<Vec<usize>>,
    every: Option<usize>,
    steps: usize,
    manifest: Option<&RunManifest>,
) -> Result<Vec<usize>, CliError> {
    let mut snapshots = if let Some(list) = flag {
        list.clone()
    } else if let Some(k) = every {
        if k == 0 {
            return Err(CliError::Usage("--every must be positive".into()));
        }
        let mut list: Vec<usize> = (1..=steps / k).map(|j| j * k).collect();
        list.push(steps);
        list
    } else if let Some(m) = manifest {
        m.snapshots.clone()
    } else {
        vec![steps]
    };
    snapshots.sort_unstable();
    snapshots.dedup();
    if let Some(&bad) = snapshots.iter().find(|&&s| s > steps) {
        return Err(CliError::Usage(format!(
            "snapshot step {bad} exceeds the run's {steps} steps"
        )));
    }
    Ok(snapshots)
}

#[derive(Args, Debug)]
pub struct AnalyticArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    #[arg(long, env = "RADLBM_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
}

pub fn cmd_analytic(args: &AnalyticArgs) -> Result<(), CliError> {
    let resolved = resolve_run(
        &args.physics,
        &RunOverrides {
            mode: None,
            shots: None,
            seed: None,
        },
        None,
        None,
    )?;
    let config = &resolved.config;
    let solution = solve_steady(config.kappa, config.sigma, config.mu, &config.source)?;
    let x = cell_centers(config);
    let mut i_plus = Vec::with_capacity(x.len());
    let mut i_minus = Vec::with_capacity(x.len());
    for &xi in &x {
        let (p, m) = solution.evaluate(xi);
        i_plus.push(p);
        i_minus.push(m);
    }
    let m = x.len();
    let field = LatticeField::new(i_plus, i_minus, vec![0.0; m], vec![0.0; m])
        .map_err(CliError::from)?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let path = args.out_dir.join("profile_analytic.csv");
    write_profile(&path, &x, &field)?;
    println!(
        "steady state (omega {:.6}, plateau {:.6}) written to {}",
        solution.omega(),
        solution.particular(),
        path.display()
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    file_a: PathBuf,
    file_b: PathBuf,
    #[arg(long, env = "RADLBM_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Serialize)]
struct Norms {
    l_inf: f64,
    l2_rms: f64,
}

#[derive(Debug, Serialize)]
struct CompareReport {
    rows: usize,
    i_plus: Norms,
    i_minus: Norms,
    combined: Norms,
}

fn norms(a: &[f64], b: &[f64]) -> Norms {
    let mut l_inf = 0.0f64;
    let mut sq = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let d = (x - y).abs();
        l_inf = l_inf.max(d);
        sq += d * d;
    }
    Norms {
        l_inf,
        l2_rms: (sq / a.len() as f64).sqrt(),
    }
}

pub fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let a = read_profile(&args.file_a)?;
    let b = read_profile(&args.file_b)?;
    if a.x.len() != b.x.len() {
        return Err(CliError::Usage(format!(
            "row count mismatch: {} has {}, {} has {}",
            args.file_a.display(),
            a.x.len(),
            args.file_b.display(),
            b.x.len()
        )));
    }
    for (i, (xa, xb)) in a.x.iter().zip(&b.x).enumerate() {
        if (xa - xb).abs() > 1e-12 {
            return Err(CliError::Usage(format!(
                "x grid mismatch at row {i}: {xa} vs {xb}"
            )));
        }
    }
    let combined: (Vec<f64>, Vec<f64>) = (
        a.i_plus.iter().chain(&a.i_minus).copied().collect(),
        b.i_plus.iter().chain(&b.i_minus).copied().collect(),
    );
    let report = CompareReport {
        rows: a.x.len(),
        i_plus: norms(&a.i_plus, &b.i_plus),
        i_minus: norms(&a.i_minus, &b.i_minus),
        combined: norms(&combined.0, &combined.1),
    };
    println!("rows: {}", report.rows);
    println!(
        "I_plus:   L_inf {:e}  RMS {:e}",
        report.i_plus.l_inf, report.i_plus.l2_rms
    );
    println!(
        "I_minus:  L_inf {:e}  RMS {:e}",
        report.i_minus.l_inf, report.i_minus.l2_rms
    );
    println!(
        "combined: L_inf {:e}  RMS {:e}",
        report.combined.l_inf, report.combined.l2_rms
    );
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let path = args.out_dir.join("compare.json");
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?;
    std::fs::write(&path, json)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct ShotsStudyArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Shot counts to sweep, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    shots_list: Vec<u64>,
    /// Sampled replicas per shot count
    #[arg(long, default_value_t = 5)]
    replicas: u64,
    /// Base seed; replica seeds are derived deterministically
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, env = "RADLBM_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
}

/// SplitMix64 step: order-independent per-replica seed derivation.
fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rms_between(a: &LatticeField, b: &LatticeField) -> f64 {
    let m = a.num_sites();
    let mut acc = 0.0;
    for i in 0..m {
        acc += (a.i_plus[i] - b.i_plus[i]).powi(2);
        acc += (a.i_minus[i] - b.i_minus[i]).powi(2);
    }
    (acc / (2 * m) as f64).sqrt()
}

pub fn cmd_shots_study(args: &ShotsStudyArgs) -> Result<(), CliError> {
    if args.shots_list.is_empty() {
        return Err(CliError::Usage("--shots-list must be non-empty".into()));
    }
    if args.replicas == 0 {
        return Err(CliError::Usage("--replicas must be positive".into()));
    }
    let resolved = resolve_run(
        &args.physics,
        &RunOverrides {
            mode: None,
            shots: None,
            seed: Some(args.seed),
        },
        None,
        None,
    )?;
    let registry = SolverRegistry::with_builtin();
    let exact = registry
        .get("quantum-exact")
        .expect("builtin solver")
        .run(&resolved.config)?;
    let sampled_solver = registry.get("quantum-sampled").expect("builtin solver");

    let mut rows = Vec::new();
    for (si, &shots) in args.shots_list.iter().enumerate() {
        let mut acc = 0.0;
        for replica in 0..args.replicas {
            let config = RteConfig {
                shots,
                seed: derive_seed(args.seed, (si as u64) << 32 | replica),
                mode: StepMode::Sampled,
                ..resolved.config.clone()
            };
            let run: RunOutput = sampled_solver.run(&config)?;
            acc += rms_between(run.final_field(), exact.final_field());
        }
        let mean = acc / args.replicas as f64;
        rows.push((shots, mean));
        println!("shots {shots}: mean RMS error {mean:e} over {} replicas", args.replicas);
    }

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let path = args.out_dir.join("shots_study.csv");
    let mut csv = String::from("shots,rms_error\n");
    for (shots, rms) in &rows {
        csv.push_str(&format!("{shots},{rms}\n"));
    }
    std::fs::write(&path, csv)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct GateCountArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
}

pub fn cmd_gate_count(args: &GateCountArgs) -> Result<(), CliError> {
    let resolved = resolve_run(
        &args.physics,
        &RunOverrides {
            mode: None,
            shots: None,
            seed: None,
        },
        None,
        None,
    )?;
    let layout = resolved.config.layout()?;
    let params = resolved.config.lcu_params()?;
    let scattering = build_absorption_scattering(&layout, &params);
    let emission = build_absorption_emission(&layout);
    let propagation = build_propagation(&layout);
    let all: Vec<_> = scattering
        .iter()
        .chain(&emission)
        .chain(&propagation)
        .cloned()
        .collect();
    println!(
        "{:<24} {:>6} {:>14} {:>20} {:>12}",
        "stage", "total", "single-qubit", "multi-controlled-x", "controlled"
    );
    let print_row = |name: &str, counts: GateCounts| {
        println!(
            "{:<24} {:>6} {:>14} {:>20} {:>12}",
            name, counts.total, counts.single_qubit, counts.multi_controlled_x, counts.controlled
        );
    };
    print_row("absorption-scattering", gate_count(&scattering));
    print_row("absorption-emission", gate_count(&emission));
    print_row("propagation", gate_count(&propagation));
    print_row("full-step", gate_count(&all));
    Ok(())
}
