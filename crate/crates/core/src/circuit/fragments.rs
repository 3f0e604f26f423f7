//! Two-qubit evolution fragments `exp(-i a s_j.s_k)` and `exp(-i a Z_j Z_k)`
//! plus their controlled forms.
//!
//! Controlled fragments put every controlled rotation on `j`, the qubit that
//! occupies the star center, so the control itself only ever talks to the
//! center.

use super::{Circuit, Coupling, Gate, GateKind};
use crate::{Error, Result};

/// Gate list together with the scalar phase it omits:
/// `exp(i phase) * U(gates)` is the exact target operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    pub gates: Vec<Gate>,
    pub phase: f64,
}

impl Fragment {
    pub fn to_circuit(&self, n: usize) -> Result<Circuit> {
        let mut c = Circuit::new(n, Coupling::AllToAll);
        c.extend(self.gates.iter().copied())?;
        Ok(c)
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeisenbergVariant {
    /// Bell-basis change with CNOTs, z rotations, inverse change (4 CNOTs).
    #[default]
    BellCnot,
    /// Three-CNOT form: one CNOT fewer than the Bell-basis construction.
    ThreeCnot,
}

fn cnot(c: usize, t: usize) -> Gate {
    Gate::pair(GateKind::Cnot, c, t)
}

fn rz(q: usize, l: f64) -> Gate {
    Gate::single(GateKind::Rz(l), q)
}

fn crz(c: usize, t: usize, l: f64) -> Gate {
    Gate::pair(GateKind::CRz(l), c, t)
}

fn h(q: usize) -> Gate {
    Gate::single(GateKind::H, q)
}

/// `Ry(theta)` spelled in the native set: `S H Rz(theta) H Sdg`.
fn ry(q: usize, theta: f64) -> [Gate; 5] {
    [
        Gate::single(GateKind::Sdg, q),
        h(q),
        rz(q, theta),
        h(q),
        Gate::single(GateKind::S, q),
    ]
}

fn distinct(qs: &[usize]) -> Result<()> {
    for a in 0..qs.len() {
        for b in a + 1..qs.len() {
            if qs[a] == qs[b] {
                return Err(Error::InvalidGate(qs.to_vec(), "qubit indices clash".into()));
            }
        }
    }
    Ok(())
}

/// Maps the Bell basis onto the computational basis with `|psi->` on `|11>`.
fn bell_to_z(j: usize, k: usize) -> [Gate; 2] {
    [cnot(j, k), h(j)]
}

fn z_to_bell(j: usize, k: usize) -> [Gate; 2] {
    [h(j), cnot(j, k)]
}

/// `exp(-i alpha s_j.s_k)`.
///
/// In the Bell frame the operator is diagonal with phases
/// `exp(-i alpha)` on `phi+-, psi+` and `exp(3 i alpha)` on `psi-`, which is
/// `exp(-i alpha (Z_j + Z_k - Z_j Z_k))` once `psi-` sits on `|11>`.
pub fn heisenberg_gate(j: usize, k: usize, alpha: f64) -> Result<Fragment> {
    heisenberg_gate_with(j, k, alpha, HeisenbergVariant::BellCnot)
}

pub fn heisenberg_gate_with(
    j: usize,
    k: usize,
    alpha: f64,
    variant: HeisenbergVariant,
) -> Result<Fragment> {
    distinct(&[j, k])?;
    let beta = 4.0 * alpha;
    let mut gates = Vec::with_capacity(16);
    let mut phase = 0.0;
    match variant {
        HeisenbergVariant::BellCnot => {
            gates.extend(bell_to_z(j, k));
            gates.push(rz(j, beta / 2.0));
            gates.push(rz(k, beta / 2.0));
            gates.extend([cnot(k, j), rz(j, -beta / 2.0), cnot(k, j)]);
            gates.extend(z_to_bell(j, k));
        }
        HeisenbergVariant::ThreeCnot => {
            gates.extend(three_cnot_heisenberg(j, k, alpha));
            phase = std::f64::consts::FRAC_PI_4;
        }
    }
    Ok(Fragment { gates, phase })
}

/// Canonical three-CNOT circuit for `exp(-i alpha (XX + YY + ZZ))`.
fn three_cnot_heisenberg(j: usize, k: usize, alpha: f64) -> Vec<Gate> {
    use std::f64::consts::FRAC_PI_2;
    let mut g = Vec::with_capacity(20);
    g.push(rz(k, FRAC_PI_2));
    g.push(cnot(k, j));
    g.push(rz(j, FRAC_PI_2 + 2.0 * alpha));
    g.extend(ry(k, FRAC_PI_2 + 2.0 * alpha));
    g.push(cnot(j, k));
    g.extend(ry(k, -FRAC_PI_2 - 2.0 * alpha));
    g.push(cnot(k, j));
    g.push(rz(j, -FRAC_PI_2));
    g
}

/// `exp(-i alpha Z_j Z_k)`: parity onto `k`, rotate, uncompute.
pub fn ising_gate(j: usize, k: usize, alpha: f64) -> Result<Fragment> {
    distinct(&[j, k])?;
    let beta = 4.0 * alpha;
    Ok(Fragment {
        gates: vec![cnot(j, k), rz(k, beta / 2.0), cnot(j, k)],
        phase: 0.0,
    })
}

/// Controlled `exp(-i alpha Z_j Z_k)`. Control and target of the parity
/// CNOTs are exchanged relative to [`ising_gate`] so the controlled rotation
/// lands on the center qubit `j`.
pub fn controlled_ising_gate(ctrl: usize, j: usize, k: usize, alpha: f64) -> Result<Fragment> {
    distinct(&[ctrl, j, k])?;
    let beta = 4.0 * alpha;
    Ok(Fragment {
        gates: vec![cnot(k, j), crz(ctrl, j, beta / 2.0), cnot(k, j)],
        phase: 0.0,
    })
}

/// Controlled `exp(-i alpha s_j.s_k)`.
///
/// The Bell-frame diagonal needs `Z_j`, `Z_k` and `Z_j Z_k` rotations, each
/// controlled. With rotations restricted to `j`, the parity register is
/// walked through `j -> j^k -> k -> j` by alternating CNOTs, which returns
/// to the identity after six of them.
pub fn controlled_heisenberg_gate(
    ctrl: usize,
    j: usize,
    k: usize,
    alpha: f64,
) -> Result<Fragment> {
    distinct(&[ctrl, j, k])?;
    let beta = 4.0 * alpha;
    let mut gates = Vec::with_capacity(16);
    gates.extend(bell_to_z(j, k));
    gates.push(crz(ctrl, j, beta / 2.0)); // Z_j
    gates.push(cnot(k, j)); // j holds j^k
    gates.push(crz(ctrl, j, -beta / 2.0)); // Z_j Z_k
    gates.push(cnot(j, k)); // k holds j
    gates.push(cnot(k, j)); // j holds k
    gates.push(crz(ctrl, j, beta / 2.0)); // Z_k
    gates.push(cnot(j, k));
    gates.push(cnot(k, j));
    gates.push(cnot(j, k));
    gates.extend(z_to_bell(j, k));
    Ok(Fragment { gates, phase: 0.0 })
}
