//! End-to-end quench experiment: configuration, parallel execution of the
//! oracle / ideal / noisy variants, and CSV + SVG output.

mod config;
mod output;
mod run;

pub use config::{ExperimentConfig, InitialState, NoiseConfig, OneOrMany, TrotterConfig};
pub use output::{emit_outputs, gates_csv, plot_svg, result_csv};
pub use run::{
    jobs, run_experiment, Backend, Curve, Setup, SimulationResult, StateKind, StepGates,
};
