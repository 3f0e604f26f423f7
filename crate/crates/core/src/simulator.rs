//! Dense state-vector and density-matrix execution with an
//! amplitude-phase-damping channel applied after every scheduling moment.

use crate::circuit::kernels::SiteGate;
use crate::circuit::{Circuit, Gate, LayoutTracker};
use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub const PURE_QUBIT_LIMIT: usize = 24;
pub const MIXED_QUBIT_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Pure,
    Mixed,
}

/// `|psi>` as a `2^n` vector or `rho` as a row-major `2^n x 2^n` matrix.
/// Basis index bit `j` is qubit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: usize,
    mode: Mode,
    data: Vec<C64>,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl QuantumState {
    pub fn zero_pure(n: usize) -> Result<Self> {
        Self::basis(n, 0, Mode::Pure)
    }

    /// Computational basis state `index` in the requested mode.
    pub fn basis(n: usize, index: usize, mode: Mode) -> Result<Self> {
        let limit = match mode {
            Mode::Pure => PURE_QUBIT_LIMIT,
            Mode::Mixed => MIXED_QUBIT_LIMIT,
        };
        if n == 0 || n > limit {
            return Err(Error::DimensionOverflow { n, limit });
        }
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, n: dim });
        }
        let mut data = vec![zero(); if mode == Mode::Pure { dim } else { dim * dim }];
        data[if mode == Mode::Pure { index } else { index * dim + index }] = C64::new(1.0, 0.0);
        Ok(Self { n, mode, data })
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                found: dim,
            });
        }
        let n = dim.trailing_zeros() as usize;
        if n > PURE_QUBIT_LIMIT {
            return Err(Error::DimensionOverflow {
                n,
                limit: PURE_QUBIT_LIMIT,
            });
        }
        Ok(Self {
            n,
            mode: Mode::Pure,
            data: amplitudes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Amplitudes (pure) or row-major density matrix entries (mixed).
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// `|psi><psi|` for a pure state; a copy for a mixed one.
    pub fn to_mixed(&self) -> Result<Self> {
        if self.n > MIXED_QUBIT_LIMIT {
            return Err(Error::DimensionOverflow {
                n: self.n,
                limit: MIXED_QUBIT_LIMIT,
            });
        }
        match self.mode {
            Mode::Mixed => Ok(self.clone()),
            Mode::Pure => {
                let dim = self.dim();
                let mut data = vec![zero(); dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        data[r * dim + c] = self.data[r] * self.data[c].conj();
                    }
                }
                Ok(Self {
                    n: self.n,
                    mode: Mode::Mixed,
                    data,
                })
            }
        }
    }

    pub fn density_matrix(&self) -> CMatrix {
        let dim = self.dim();
        match self.mode {
            Mode::Pure => CMatrix::from_fn(dim, dim, |r, c| self.data[r] * self.data[c].conj()),
            Mode::Mixed => CMatrix::from_fn(dim, dim, |r, c| self.data[r * dim + c]),
        }
    }

    /// `||psi||^2` or `tr rho`.
    pub fn trace(&self) -> f64 {
        match self.mode {
            Mode::Pure => self.data.iter().map(|z| z.norm_sqr()).sum(),
            Mode::Mixed => {
                let dim = self.dim();
                (0..dim).map(|i| self.data[i * dim + i].re).sum()
            }
        }
    }

    fn apply_site_gate(&mut self, g: &SiteGate) {
        let dim = self.dim();
        match self.mode {
            Mode::Pure => g.apply(&mut self.data, dim, 1, 0),
            Mode::Mixed => {
                if let Some(phase) = diagonal_factor(g) {
                    let ph: Vec<C64> = (0..dim).map(phase).collect();
                    let ph_conj: Vec<C64> = ph.iter().map(|z| z.conj()).collect();
                    for (row, pr) in self.data.chunks_exact_mut(dim).zip(&ph) {
                        for (x, pc) in row.iter_mut().zip(&ph_conj) {
                            *x *= pr * pc;
                        }
                    }
                    return;
                }
                for c in 0..dim {
                    g.apply(&mut self.data, dim, dim, c);
                }
                let gc = g.conj();
                for r in 0..dim {
                    gc.apply(&mut self.data, dim, 1, r * dim);
                }
            }
        }
    }

    /// Combined amplitude-phase damping on `site`: populations relax with
    /// `gamma`, coherences shrink by `coherence`.
    fn damp(&mut self, site: usize, gamma: f64, coherence: f64) {
        let dim = self.dim();
        let bit = 1usize << site;
        for r in (0..dim).filter(|r| r & bit == 0) {
            let (row0, row1) = (r * dim, (r | bit) * dim);
            for c in (0..dim).filter(|c| c & bit == 0) {
                let c1 = c | bit;
                let excited = self.data[row1 + c1];
                self.data[row0 + c] += excited * gamma;
                self.data[row1 + c1] = excited * (1.0 - gamma);
                self.data[row0 + c1] *= coherence;
                self.data[row1 + c] *= coherence;
            }
        }
    }
}

/// Diagonal entry lookup for diagonal gates, so `rho` can be updated in one pass.
fn diagonal_factor(g: &SiteGate) -> Option<impl Fn(usize) -> C64> {
    let (cb, tb, d) = match *g {
        SiteGate::Diag1 { site, d } => (0usize, 1usize << site, d),
        SiteGate::ControlledDiag { control, target, d } => (1usize << control, 1usize << target, d),
        _ => return None,
    };
    let one = C64::new(1.0, 0.0);
    Some(move |i: usize| {
        if i & cb != cb {
            one
        } else {
            d[usize::from(i & tb != 0)]
        }
    })
}

pub fn prepare_basis(n: usize, bits: &str) -> Result<QuantumState> {
    if bits.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bits.len(),
        });
    }
    let mut index = 0usize;
    for (j, ch) in bits.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => index |= 1 << j,
            _ => {
                return Err(Error::InvalidParameters(format!(
                    "bitstring may only hold 0 and 1, got {bits:?}"
                )))
            }
        }
    }
    QuantumState::basis(n, index, Mode::Pure)
}

/// `<psi|O|psi>` or `tr(rho O)`, real part.
pub fn expectation(state: &QuantumState, op: &CMatrix) -> Result<f64> {
    let dim = state.dim();
    if op.nrows() != dim || op.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: op.nrows(),
        });
    }
    let d = &state.data;
    let mut acc = zero();
    match state.mode {
        Mode::Pure => {
            for r in 0..dim {
                let mut row = zero();
                for c in 0..dim {
                    row += op[(r, c)] * d[c];
                }
                acc += d[r].conj() * row;
            }
        }
        Mode::Mixed => {
            for r in 0..dim {
                for c in 0..dim {
                    acc += d[r * dim + c] * op[(c, r)];
                }
            }
        }
    }
    Ok(acc.re)
}

/// `|<phi|psi>|^2` or `<phi|rho|phi>`.
pub fn overlap(state: &QuantumState, phi: &[C64]) -> Result<f64> {
    let dim = state.dim();
    if phi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: phi.len(),
        });
    }
    let d = &state.data;
    Ok(match state.mode {
        Mode::Pure => phi
            .iter()
            .zip(d)
            .map(|(p, a)| p.conj() * a)
            .sum::<C64>()
            .norm_sqr(),
        Mode::Mixed => {
            let mut acc = zero();
            for r in 0..dim {
                let mut row = zero();
                for c in 0..dim {
                    row += d[r * dim + c] * phi[c];
                }
                acc += phi[r].conj() * row;
            }
            acc.re
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Relaxation time (s).
    pub t1: f64,
    /// Coherence time (s).
    pub t2: f64,
    /// Single-qubit gate time (s).
    pub t_s: f64,
    /// Two-qubit gate time (s).
    pub t_t: f64,
    pub enabled: bool,
}

impl NoiseModel {
    pub fn disabled() -> Self {
        Self {
            t1: f64::INFINITY,
            t2: f64::INFINITY,
            t_s: 0.0,
            t_t: 0.0,
            enabled: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.enabled {
            return Ok(());
        }
        let bad = |msg: String| Err(Error::NonphysicalNoise(msg));
        if !(self.t1 > 0.0) || !(self.t2 > 0.0) {
            return bad(format!("T1={} and T2={} must be positive", self.t1, self.t2));
        }
        if self.t2 > 2.0 * self.t1 * (1.0 + 1e-12) {
            return bad(format!("T2={} exceeds 2*T1={}", self.t2, 2.0 * self.t1));
        }
        if !(self.t_s >= 0.0) || !(self.t_t >= 0.0) {
            return bad(format!("gate times must be >= 0 (t_s={}, t_t={})", self.t_s, self.t_t));
        }
        Ok(())
    }

    pub fn gate_time(&self, gate: &Gate) -> f64 {
        gate.duration
            .unwrap_or(if gate.is_two_qubit() { self.t_t } else { self.t_s })
    }

    /// `(gamma, coherence factor)` for an idle interval `dt`.
    pub fn channel(&self, dt: f64) -> (f64, f64) {
        (1.0 - (-dt / self.t1).exp(), (-dt / self.t2).exp())
    }
}

/// Gates acting on disjoint sites, executed in parallel.
#[derive(Debug, Clone)]
pub struct Moment {
    pub gates: Vec<SiteGate>,
    pub duration: f64,
}

/// Greedy as-soon-as-possible layering on sites.
pub fn schedule_moments(circuit: &Circuit, noise: &NoiseModel) -> Vec<Moment> {
    let mut layout = LayoutTracker::identity(circuit.n());
    let mut next_free = vec![0usize; circuit.n()];
    let mut moments: Vec<Moment> = Vec::new();
    for gate in circuit.gates() {
        let sg = SiteGate::resolve(gate, &layout);
        layout.apply(gate);
        let (a, b) = sg.sites();
        let layer = b.map_or(next_free[a], |b| next_free[a].max(next_free[b]));
        next_free[a] = layer + 1;
        if let Some(b) = b {
            next_free[b] = layer + 1;
        }
        if layer == moments.len() {
            moments.push(Moment {
                gates: Vec::new(),
                duration: 0.0,
            });
        }
        let m = &mut moments[layer];
        m.gates.push(sg);
        m.duration = m.duration.max(noise.gate_time(gate));
    }
    moments
}

/// Wall-clock time of a circuit under the moment schedule.
pub fn circuit_duration(circuit: &Circuit, noise: &NoiseModel) -> f64 {
    schedule_moments(circuit, noise).iter().map(|m| m.duration).sum()
}

/// Decoheres every qubit for `duration` seconds.
pub fn apply_idle(state: &mut QuantumState, duration: f64, noise: &NoiseModel) -> Result<()> {
    noise.validate()?;
    if !noise.enabled || duration == 0.0 {
        return Ok(());
    }
    if state.mode != Mode::Mixed {
        return Err(Error::ModeMismatch("noise requires a density matrix"));
    }
    let (gamma, coherence) = noise.channel(duration);
    for site in 0..state.n {
        state.damp(site, gamma, coherence);
    }
    Ok(())
}

/// Runs `circuit` on `state`. Gates are ideal; with noise enabled every
/// qubit decoheres for the duration of each moment after its gates.
pub fn apply_circuit(state: &mut QuantumState, circuit: &Circuit, noise: &NoiseModel) -> Result<()> {
    if circuit.n() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            found: circuit.n(),
        });
    }
    noise.validate()?;
    if noise.enabled && state.mode != Mode::Mixed {
        return Err(Error::ModeMismatch("noise requires a density matrix"));
    }
    if !noise.enabled {
        let mut layout = LayoutTracker::identity(circuit.n());
        for gate in circuit.gates() {
            state.apply_site_gate(&SiteGate::resolve(gate, &layout));
            layout.apply(gate);
        }
        return Ok(());
    }
    for moment in schedule_moments(circuit, noise) {
        for g in &moment.gates {
            state.apply_site_gate(g);
        }
        apply_idle(state, moment.duration, noise)?;
    }
    Ok(())
}
