//! `gridwave`: build Gaussian wave-packet data for the 1-D Schrödinger
//! equation and its finite-difference semi-discretization, apply bigrid
//! filters, evolve exactly in Fourier space, and compare measurements with
//! the closed-form packet predictions.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 tolerance breach in
//! `compare --strict`.

use clap::{Parser, Subcommand};
use gridwave_cli::pipeline::{self, PipelineError, Prepared};
use gridwave_cli::scenario::{self, parse_number, Scenario};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gridwave",
    version,
    about = "Wave-packet laboratory for the semi-discrete Schrödinger equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write the outputs selected by the scenario.
    Simulate {
        /// Scenario file (text or JSON), or `preset:<name>`.
        config: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Emit the projected/filtered data and spectra only.
    Project {
        config: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Emit the case label and per-pick predictions only.
    Predict {
        config: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Measure the Strichartz and local-smoothing functionals.
    Norms {
        config: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Refine the mesh over a list of steps and report norm-ratio growth.
    Sweep {
        config: String,
        /// Comma-separated mesh steps, sorted descending (e.g. `2pi/128,2pi/256,2pi/512`).
        #[arg(long = "h-list", value_name = "LIST")]
        h_list: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run and compare measurements against predictions.
    Compare {
        config: String,
        /// Exit with code 3 if any packet exceeds the configured tolerances.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// List the built-in scenario presets.
    Presets,
}

fn load_scenarios(config: &str) -> Result<Vec<Scenario>, PipelineError> {
    if let Some(name) = config.strip_prefix("preset:") {
        return scenario::preset(name).ok_or_else(|| {
            PipelineError::Validation(vec![format!(
                "unknown preset '{name}' (try: {})",
                scenario::preset_names().join(", ")
            )])
        });
    }
    let text = std::fs::read_to_string(config).map_err(|e| {
        PipelineError::Validation(vec![format!("cannot read scenario file '{config}': {e}")])
    })?;
    scenario::parse_scenario(&text)
        .map(|sc| vec![sc])
        .map_err(PipelineError::Validation)
}

fn prepare_all(config: &str) -> Result<Vec<Prepared>, PipelineError> {
    load_scenarios(config)?
        .iter()
        .map(pipeline::prepare)
        .collect()
}

fn write(
    out: &Path,
    p: &Prepared,
    artifacts: &pipeline::RunArtifacts,
) -> Result<(), PipelineError> {
    pipeline::write_artifacts(out, &p.scenario.scenario_id, &artifacts.files)
        .map_err(|e| PipelineError::Internal(format!("writing outputs: {e}")))?;
    Ok(())
}

fn run_command(cmd: &Command) -> Result<ExitCode, PipelineError> {
    match cmd {
        Command::Presets => {
            for name in scenario::preset_names() {
                let count = scenario::preset(name).map(|s| s.len()).unwrap_or(0);
                println!("{name} ({count} scenarios)");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { config, out } => {
            for p in prepare_all(config)? {
                let artifacts = pipeline::run(&p)?;
                write(out, &p, &artifacts)?;
                println!(
                    "{}: {} packets predicted, outputs in {}",
                    p.scenario.scenario_id,
                    artifacts.report.predictions.len(),
                    out.join(&p.scenario.scenario_id).display()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Project { config, out } => {
            for p in prepare_all(config)? {
                let artifacts = pipeline::project_only(&p)?;
                write(out, &p, &artifacts)?;
                println!("{}: projection written", p.scenario.scenario_id);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Predict { config, out } => {
            for p in prepare_all(config)? {
                let artifacts = pipeline::predict_only(&p);
                write(out, &p, &artifacts)?;
                for pr in &artifacts.report.predictions {
                    println!(
                        "{}: pick {:+.6} velocity {:+.3} factor {:.6}",
                        p.scenario.scenario_id, pr.pick_eta, pr.velocity, pr.amplitude_factor
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Norms { config, out } => {
            for p in prepare_all(config)? {
                let (bundle, files) = pipeline::norms_only(&p)?;
                pipeline::write_artifacts(out, &p.scenario.scenario_id, &files)
                    .map_err(|e| PipelineError::Internal(format!("writing outputs: {e}")))?;
                println!(
                    "{}: strichartz ratio {:.6}, smoothing ratio {:.6}",
                    p.scenario.scenario_id, bundle.strichartz.ratio, bundle.smoothing.ratio
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            h_list,
            out,
        } => {
            let steps: Result<Vec<f64>, String> = h_list.split(',').map(parse_number).collect();
            let steps = steps.map_err(|e| PipelineError::Validation(vec![e]))?;
            for base in load_scenarios(config)? {
                let report = pipeline::sweep(&base, &steps)?;
                let mut text = serde_json::to_string_pretty(&report).expect("sweep serializes");
                text.push('\n');
                pipeline::write_artifacts(
                    out,
                    &format!("{}-sweep", base.scenario_id),
                    &[("sweep.json".to_string(), text)],
                )
                .map_err(|e| PipelineError::Internal(format!("writing outputs: {e}")))?;
                println!(
                    "{}: strichartz growth {:?}, smoothing growth {:?}, remainder drop {:?}",
                    base.scenario_id,
                    report.strichartz_growth,
                    report.smoothing_growth,
                    report.remainder_drop
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            config,
            strict,
            out,
        } => {
            let mut all_ok = true;
            for p in prepare_all(config)? {
                let artifacts = pipeline::run(&p)?;
                write(out, &p, &artifacts)?;
                if let Some(cmp) = &artifacts.report.comparison {
                    all_ok &= cmp.strict_ok;
                    for pkt in &cmp.packets {
                        println!(
                            "{}: pick {:+.6} v_pred {:+.4} v_meas {:+.4} (rel {:.4}) \
                             amp_pred {:.4} amp_meas {:.4}",
                            p.scenario.scenario_id,
                            pkt.pick_eta,
                            pkt.predicted_velocity,
                            pkt.measured_velocity,
                            pkt.rel_err_velocity,
                            pkt.predicted_amplitude_t0,
                            pkt.measured_amplitude_t0
                        );
                    }
                } else {
                    println!(
                        "{}: no packets above the pick threshold; nothing to compare",
                        p.scenario.scenario_id
                    );
                }
            }
            if *strict && !all_ok {
                eprintln!("comparison tolerances breached");
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(&cli.command) {
        Ok(code) => code,
        Err(PipelineError::Validation(errs)) => {
            eprintln!("invalid scenario ({} violations):", errs.len());
            for e in errs {
                eprintln!("  - {e}");
            }
            ExitCode::from(2)
        }
        Err(PipelineError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
