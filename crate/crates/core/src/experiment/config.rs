use crate::circuit::HeisenbergVariant;
use crate::simulator::{NoiseModel, MIXED_QUBIT_LIMIT};
use crate::trotter::TrotterOrder;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    Meanfield,
    Exact,
    All,
}

impl InitialState {
    pub fn includes_meanfield(self) -> bool {
        matches!(self, InitialState::Meanfield | InitialState::All)
    }

    pub fn includes_exact(self) -> bool {
        matches!(self, InitialState::Exact | InitialState::All)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrotterConfig {
    pub order: TrotterOrder,
    pub base_dt: f64,
    pub adaptive: bool,
    /// Peak step refinement of the adaptive grid.
    pub refinement: f64,
    /// Substep error target inside each Gaudin term.
    pub target_error: f64,
    pub min_substeps: u32,
    pub heisenberg: HeisenbergVariant,
}

impl Default for TrotterConfig {
    fn default() -> Self {
        Self {
            order: TrotterOrder::Second,
            base_dt: 0.2,
            adaptive: true,
            refinement: crate::trotter::DEFAULT_REFINEMENT,
            target_error: 0.03,
            min_substeps: 1,
            heisenberg: HeisenbergVariant::BellCnot,
        }
    }
}

/// One coherence time or a list of them, one noisy curve each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(x) => vec![*x],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub enabled: bool,
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: OneOrMany,
    pub t_s: f64,
    pub t_t: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            t1: 1.25e-1,
            t2: OneOrMany::Many(vec![9e-2, 9e-3]),
            t_s: 5e-8,
            t_t: 5e-7,
        }
    }
}

impl NoiseConfig {
    pub fn models(&self) -> Vec<NoiseModel> {
        self.t2
            .values()
            .into_iter()
            .map(|t2| NoiseModel {
                t1: self.t1,
                t2,
                t_s: self.t_s,
                t_t: self.t_t,
                enabled: true,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Level spacing: `eps_j = omega (j + 1/2)`.
    pub omega: f64,
    pub delta0: f64,
    pub delta_c: f64,
    pub t1: f64,
    pub t2: f64,
    pub gamma: f64,
    pub tau_max: f64,
    pub temperature: f64,
    /// Uniform sample count on `[0, tau_max]`, both ends included.
    pub samples: usize,
    pub trotter: TrotterConfig,
    pub noise: NoiseConfig,
    pub initial_state: InitialState,
    /// Recorded for provenance; the pipeline has no random component.
    pub seed: u64,
    pub output_dir: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 5,
            omega: 5.0 / 3.0,
            delta0: 1.0,
            delta_c: 2.0,
            t1: 9.0,
            t2: 18.0,
            gamma: 0.1,
            tau_max: 27.0,
            temperature: 0.0,
            samples: 200,
            trotter: TrotterConfig::default(),
            noise: NoiseConfig::default(),
            initial_state: InitialState::All,
            seed: 0,
            output_dir: "out".into(),
        }
    }
}

fn positive(path: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be positive and finite, got {x}")))
    }
}

impl ExperimentConfig {
    pub fn from_json(src: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(src).map_err(|e| Error::config("$", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&src)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::config("n", "need at least two levels"));
        }
        let limit = if self.noise.enabled {
            MIXED_QUBIT_LIMIT
        } else {
            crate::linalg::DENSE_QUBIT_LIMIT
        };
        if self.n > limit {
            return Err(Error::config("n", format!("at most {limit} qubits supported")));
        }
        positive("omega", self.omega)?;
        positive("delta0", self.delta0)?;
        positive("delta_c", self.delta_c)?;
        positive("t1", self.t1)?;
        positive("t2", self.t2)?;
        positive("gamma", self.gamma)?;
        positive("tau_max", self.tau_max)?;
        if self.t2 <= self.t1 {
            return Err(Error::config("t2", "must exceed t1"));
        }
        if self.tau_max <= self.t2 {
            return Err(Error::config("tau_max", "must exceed t2"));
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(Error::config("temperature", "must be >= 0"));
        }
        if self.samples < 2 {
            return Err(Error::config("samples", "need at least two samples"));
        }
        positive("trotter.base_dt", self.trotter.base_dt)?;
        positive("trotter.target_error", self.trotter.target_error)?;
        if self.trotter.refinement < 1.0 {
            return Err(Error::config("trotter.refinement", "must be >= 1"));
        }
        if self.trotter.min_substeps == 0 {
            return Err(Error::config("trotter.min_substeps", "must be >= 1"));
        }
        if self.noise.enabled {
            positive("noise.T1", self.noise.t1)?;
            if self.noise.t2.values().is_empty() {
                return Err(Error::config("noise.T2", "need at least one value"));
            }
            for (i, model) in self.noise.models().iter().enumerate() {
                model
                    .validate()
                    .map_err(|e| Error::config(format!("noise.T2[{i}]"), e.to_string()))?;
            }
        }
        Ok(())
    }
}
