//! Command-line front end for the BCS quench experiment.

use anyhow::{Context, Result};
use bcs_star::circuit::validate_star;
use bcs_star::compiler::cost_report;
use bcs_star::experiment::{emit_outputs, run_experiment, ExperimentConfig, InitialState, Setup};
use bcs_star::trotter::TrotterOrder;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bcs-star", version, about = "BCS pairing dynamics on a star-connectivity qubit register")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    All,
    Meanfield,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Run the quench experiment and write CSV, JSON and SVG outputs.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        #[arg(long)]
        no_noise: bool,
    },
    /// Write the compiled circuit of one Trotter step in text form.
    Compile {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        emit: PathBuf,
        /// Grid interval to compile.
        #[arg(long, default_value_t = 0)]
        step: usize,
    },
    /// Print Trotter cost estimates for the initial Hamiltonian over `tau_max`.
    ReportCost {
        #[arg(long)]
        config: PathBuf,
        /// Error target; defaults to the config's `trotter.target_error`.
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

fn load(path: &PathBuf) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig::load(path)?)
}

fn simulate(
    config: PathBuf,
    out: Option<PathBuf>,
    variant: Option<Variant>,
    no_noise: bool,
) -> Result<()> {
    let mut cfg = load(&config)?;
    if let Some(v) = variant {
        cfg.initial_state = match v {
            Variant::All => InitialState::All,
            Variant::Meanfield => InitialState::Meanfield,
            Variant::Exact => InitialState::Exact,
        };
    }
    if no_noise {
        cfg.noise.enabled = false;
    }
    let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
    let result = run_experiment(&cfg)?;
    for path in emit_outputs(&result, &dir)? {
        println!("wrote {}", path.display());
    }
    let two: usize = result.steps.iter().map(|s| s.two_qubit).sum();
    let single: usize = result.steps.iter().map(|s| s.single_qubit).sum();
    let swaps: usize = result.steps.iter().map(|s| s.swaps).sum();
    println!(
        "{} steps, {single} single-qubit, {two} two-qubit ({swaps} swaps)",
        result.steps.len()
    );
    Ok(())
}

fn compile(config: PathBuf, emit: PathBuf, step: usize) -> Result<()> {
    let cfg = load(&config)?;
    let setup = Setup::new(&cfg)?;
    if step >= setup.plan.steps() {
        return Err(bcs_star::Error::config(
            "step",
            format!("plan has {} intervals", setup.plan.steps()),
        )
        .into());
    }
    let prog = setup.step_circuit(step)?;
    std::fs::write(&emit, prog.circuit.to_text())
        .with_context(|| format!("writing {}", emit.display()))?;
    let star = validate_star(&prog.circuit);
    println!(
        "step {step}: {} gates, {} two-qubit, {} swaps, star {}",
        prog.circuit.len(),
        prog.two_qubit_count,
        prog.swap_count,
        if star.ok { "ok" } else { "VIOLATED" }
    );
    Ok(())
}

fn report_cost(config: PathBuf, epsilon: Option<f64>) -> Result<()> {
    let cfg = load(&config)?;
    let setup = Setup::new(&cfg)?;
    let p = match cfg.trotter.order {
        TrotterOrder::First => 1,
        TrotterOrder::Second => 2,
    };
    let eps = epsilon.unwrap_or(cfg.trotter.target_error);
    let report = cost_report(&setup.params_at(0.0)?, cfg.tau_max, eps, p)?;
    print!("{}", report.to_text());
    Ok(())
}

fn is_validation(err: &anyhow::Error) -> bool {
    use bcs_star::Error as E;
    matches!(
        err.downcast_ref::<E>(),
        Some(
            E::Config { .. }
                | E::InvalidParameters(_)
                | E::NonphysicalNoise(_)
                | E::DegenerateLevels(..)
                | E::UnsupportedOrder(_)
                | E::DimensionOverflow { .. }
        )
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate {
            config,
            out,
            variant,
            no_noise,
        } => simulate(config, out, variant, no_noise),
        Command::Compile { config, emit, step } => compile(config, emit, step),
        Command::ReportCost { config, epsilon } => report_cost(config, epsilon),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_validation(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
