use super::config::ExperimentConfig;
use crate::circuit::Circuit;
use crate::compiler::{compile_step, StepSettings};
use crate::hamiltonian::BcsParameters;
use crate::meanfield::{bcs_state_circuit, GapEquation, QuenchProfile};
use crate::oracle::{exact_evolve, exact_ground_state};
use crate::simulator::{apply_circuit, overlap, Mode, NoiseModel, QuantumState};
use crate::trotter::{plan_adaptive, plan_uniform, AdaptiveConstants, TrotterPlan};
use crate::linalg::C64;
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StateKind {
    Meanfield,
    Exact,
}

impl StateKind {
    pub fn label(self) -> &'static str {
        match self {
            StateKind::Meanfield => "meanfield",
            StateKind::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Backend {
    Oracle,
    Ideal,
    Noisy(NoiseModel),
}

impl Backend {
    pub fn label(&self) -> String {
        match self {
            Backend::Oracle => "oracle".into(),
            Backend::Ideal => "ideal".into(),
            Backend::Noisy(m) => format!("noisy_T2={:e}", m.t2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub kind: StateKind,
    pub backend: Backend,
    /// Return probability at every sample time.
    pub values: Vec<f64>,
}

impl Curve {
    pub fn variant(&self) -> String {
        format!("{}_{}", self.kind.label(), self.backend.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepGates {
    pub t: f64,
    pub dt: f64,
    pub g: f64,
    pub single_qubit: usize,
    pub two_qubit: usize,
    pub swaps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub samples: Vec<f64>,
    /// `g` at every sample time.
    pub coupling: Vec<f64>,
    pub curves: Vec<Curve>,
    pub steps: Vec<StepGates>,
    pub config: ExperimentConfig,
    pub version: String,
}

impl SimulationResult {
    pub fn curve(&self, kind: StateKind, backend_label: &str) -> Option<&Curve> {
        self.curves
            .iter()
            .find(|c| c.kind == kind && c.backend.label() == backend_label)
    }
}

/// Everything shared by the per-variant jobs.
pub struct Setup {
    pub levels: Vec<f64>,
    pub profile: QuenchProfile,
    pub plan: TrotterPlan,
    pub samples: Vec<f64>,
    /// Grid node of every sample.
    pub sample_nodes: Vec<usize>,
    pub prep: Circuit,
    pub unprep: Circuit,
    pub psi_meanfield: Vec<C64>,
    pub psi_exact: Vec<C64>,
    pub settings: Vec<StepSettings>,
}

impl Setup {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let levels: Vec<f64> = (0..cfg.n).map(|j| cfg.omega * (j as f64 + 0.5)).collect();
        let gap = GapEquation::new(&levels, cfg.temperature)?;
        let g0 = gap.g_from_delta(cfg.delta0)?;
        let gc = gap.g_from_delta(cfg.delta_c)?;
        let profile = QuenchProfile::new(cfg.t1, cfg.t2, cfg.gamma, g0, gc)?;

        let samples: Vec<f64> = (0..cfg.samples)
            .map(|i| cfg.tau_max * i as f64 / (cfg.samples - 1) as f64)
            .collect();
        let tc = &cfg.trotter;
        let base = if tc.adaptive {
            let constants = AdaptiveConstants::normalized(&profile, tc.refinement);
            plan_adaptive(&profile, 0.0, cfg.tau_max, tc.base_dt, tc.order, tc.target_error, constants)?
        } else {
            let steps = (cfg.tau_max / tc.base_dt).ceil().max(1.0) as usize;
            plan_uniform(0.0, cfg.tau_max, steps, tc.order, tc.target_error)?
        };
        let base = TrotterPlan::new(
            base.order,
            base.grid().to_vec(),
            vec![tc.min_substeps; base.steps()],
            base.target_error,
        )?;
        let plan = base.with_breakpoints(&samples);
        let sample_nodes = samples
            .iter()
            .map(|&t| nearest_node(plan.grid(), t))
            .collect();
        let settings = (0..plan.steps())
            .map(|i| StepSettings::from_plan(&plan, i, tc.heisenberg))
            .collect();

        let g_start = profile.value(0.0);
        let params0 = BcsParameters::new(levels.clone(), g_start, cfg.temperature)?;
        let solution = gap.solve(g_start)?;
        let prep = bcs_state_circuit(&solution, false);
        let unprep = bcs_state_circuit(&solution, true);
        let mut psi = QuantumState::zero_pure(cfg.n)?;
        apply_circuit(&mut psi, &prep, &NoiseModel::disabled())?;
        let psi_meanfield = psi.data().to_vec();
        let psi_exact = exact_ground_state(&params0)?;
        Ok(Self {
            levels,
            profile,
            plan,
            samples,
            sample_nodes,
            prep,
            unprep,
            psi_meanfield,
            psi_exact,
            settings,
        })
    }

    pub fn params_at(&self, t: f64) -> Result<BcsParameters> {
        BcsParameters::new(self.levels.clone(), self.profile.value(t), 0.0)
    }

    /// Compiled circuit for grid interval `i`.
    pub fn step_circuit(&self, i: usize) -> Result<crate::compiler::StepProgram> {
        let w = &self.plan.grid()[i..i + 2];
        compile_step(&self.params_at(w[0])?, w[1] - w[0], &self.settings[i], 0)
    }

    pub fn initial_vector(&self, kind: StateKind) -> &[C64] {
        match kind {
            StateKind::Meanfield => &self.psi_meanfield,
            StateKind::Exact => &self.psi_exact,
        }
    }

    pub fn run(&self, kind: StateKind, backend: Backend) -> Result<Curve> {
        let values = match backend {
            Backend::Oracle => {
                let tr = exact_evolve(
                    &self.params_at(0.0)?,
                    &self.profile,
                    self.initial_vector(kind),
                    self.plan.grid(),
                )?;
                self.sample_nodes.iter().map(|&i| tr.return_prob[i]).collect()
            }
            Backend::Ideal => self.run_circuit(kind, &NoiseModel::disabled())?,
            Backend::Noisy(model) => self.run_circuit(kind, &model)?,
        };
        Ok(Curve {
            kind,
            backend,
            values,
        })
    }

    fn run_circuit(&self, kind: StateKind, noise: &NoiseModel) -> Result<Vec<f64>> {
        let mode = if noise.enabled { Mode::Mixed } else { Mode::Pure };
        let mut state = match kind {
            StateKind::Meanfield => {
                let mut s = QuantumState::basis(self.levels.len(), 0, mode)?;
                apply_circuit(&mut s, &self.prep, noise)?;
                s
            }
            StateKind::Exact => {
                let s = QuantumState::from_amplitudes(self.psi_exact.clone())?;
                if noise.enabled {
                    s.to_mixed()?
                } else {
                    s
                }
            }
        };
        let measure = |state: &QuantumState| -> Result<f64> {
            match kind {
                StateKind::Meanfield => {
                    let mut s = state.clone();
                    apply_circuit(&mut s, &self.unprep, noise)?;
                    let mut zero = vec![C64::new(0.0, 0.0); s.dim()];
                    zero[0] = C64::new(1.0, 0.0);
                    overlap(&s, &zero)
                }
                StateKind::Exact => overlap(state, &self.psi_exact),
            }
        };
        let mut at_node = vec![None; self.plan.grid().len()];
        at_node[0] = Some(measure(&state)?);
        let last_needed = self.sample_nodes.iter().copied().max().unwrap_or(0);
        for i in 0..last_needed {
            let prog = self.step_circuit(i)?;
            apply_circuit(&mut state, &prog.circuit, noise)?;
            if self.sample_nodes.binary_search(&(i + 1)).is_ok() {
                at_node[i + 1] = Some(measure(&state)?);
            }
        }
        Ok(self
            .sample_nodes
            .iter()
            .map(|&i| at_node[i].expect("sample node measured"))
            .collect())
    }

    pub fn gate_table(&self) -> Result<Vec<StepGates>> {
        (0..self.plan.steps())
            .map(|i| {
                let prog = self.step_circuit(i)?;
                let w = &self.plan.grid()[i..i + 2];
                Ok(StepGates {
                    t: w[0],
                    dt: w[1] - w[0],
                    g: self.profile.value(w[0]),
                    single_qubit: prog.single_qubit_count,
                    two_qubit: prog.two_qubit_count,
                    swaps: prog.swap_count,
                })
            })
            .collect()
    }
}

fn nearest_node(grid: &[f64], t: f64) -> usize {
    let i = grid.partition_point(|&x| x < t);
    if i == 0 {
        0
    } else if i == grid.len() || (t - grid[i - 1]) <= (grid[i] - t) {
        i - 1
    } else {
        i
    }
}

/// Jobs implied by the config: oracle, ideal and one noisy run per `T2`, for
/// each requested initial state.
pub fn jobs(cfg: &ExperimentConfig) -> Vec<(StateKind, Backend)> {
    let mut kinds = Vec::new();
    if cfg.initial_state.includes_meanfield() {
        kinds.push(StateKind::Meanfield);
    }
    if cfg.initial_state.includes_exact() {
        kinds.push(StateKind::Exact);
    }
    let mut backends = vec![Backend::Oracle, Backend::Ideal];
    if cfg.noise.enabled {
        backends.extend(cfg.noise.models().into_iter().map(Backend::Noisy));
    }
    kinds
        .into_iter()
        .flat_map(|k| backends.iter().map(move |&b| (k, b)))
        .collect()
}

/// Runs every job in parallel. The output does not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<SimulationResult> {
    let setup = Setup::new(cfg)?;
    let jobs = jobs(cfg);
    let outcomes: Vec<Result<Curve>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(kind, backend)| {
                let setup = &setup;
                scope.spawn(move || setup.run(kind, backend))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::InvalidParameters("simulation job panicked".into())))
            })
            .collect()
    });
    let curves = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SimulationResult {
        coupling: setup.samples.iter().map(|&t| setup.profile.value(t)).collect(),
        samples: setup.samples.clone(),
        curves,
        steps: setup.gate_table()?,
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}
