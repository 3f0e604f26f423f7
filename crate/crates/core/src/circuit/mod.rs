//! Gate-level intermediate representation.
//!
//! Gate operands are logical qubit labels. A `SWAP` exchanges the physical
//! sites of its two operands, so the logical qubit that occupies the star
//! center changes as swaps are replayed. At the start of every circuit
//! logical qubit `i` sits on site `i`.

mod fragments;
pub mod kernels;
mod text;

pub use fragments::{
    controlled_heisenberg_gate, controlled_ising_gate, heisenberg_gate, heisenberg_gate_with,
    ising_gate, Fragment,
    HeisenbergVariant,
};

use crate::linalg::{CMatrix, C64, DENSE_QUBIT_LIMIT};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    SqrtX,
    SqrtXdg,
    Rz(f64),
    Cnot,
    Swap,
    CRz(f64),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap | GateKind::CRz(_) => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::SqrtX => "SqrtX",
            GateKind::SqrtXdg => "SqrtXdg",
            GateKind::Rz(_) => "Rz",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
            GateKind::CRz(_) => "CRz",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            GateKind::Rz(l) | GateKind::CRz(l) => Some(*l),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    qubits: [usize; 2],
    /// Overrides the noise model's default gate time (seconds).
    pub duration: Option<f64>,
}

impl Gate {
    pub fn single(kind: GateKind, q: usize) -> Self {
        debug_assert_eq!(kind.arity(), 1);
        Self {
            kind,
            qubits: [q, usize::MAX],
            duration: None,
        }
    }

    /// Two-qubit gate; the control comes first for CNOT and CRz.
    pub fn pair(kind: GateKind, a: usize, b: usize) -> Self {
        debug_assert_eq!(kind.arity(), 2);
        Self {
            kind,
            qubits: [a, b],
            duration: None,
        }
    }

    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::InvalidGate(
                qubits.to_vec(),
                format!("{} takes {} qubit(s)", kind.name(), kind.arity()),
            ));
        }
        if kind.arity() == 2 && qubits[0] == qubits[1] {
            return Err(Error::InvalidGate(
                qubits.to_vec(),
                "two-qubit gate needs distinct qubits".into(),
            ));
        }
        Ok(if kind.arity() == 1 {
            Self::single(kind, qubits[0])
        } else {
            Self::pair(kind, qubits[0], qubits[1])
        })
    }

    pub fn with_duration(mut self, seconds: f64) -> Self {
        self.duration = Some(seconds);
        self
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    AllToAll,
    /// Two-qubit gates only between the center site and any other site.
    Star { center: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    pub coupling: Coupling,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, coupling: Coupling) -> Self {
        Self {
            n,
            coupling,
            gates: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for &q in gate.qubits() {
            if q >= self.n {
                return Err(Error::IndexOutOfRange { index: q, n: self.n });
            }
        }
        if gate.is_two_qubit() && gate.qubits[0] == gate.qubits[1] {
            return Err(Error::InvalidGate(
                gate.qubits().to_vec(),
                "two-qubit gate needs distinct qubits".into(),
            ));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends another circuit over the same register.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn swap_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.kind, GateKind::Swap))
            .count()
    }

    /// All two-qubit gates, swaps included.
    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn single_qubit_count(&self) -> usize {
        self.gates.len() - self.two_qubit_count()
    }

    /// Site -> logical qubit map after replaying every swap.
    pub fn final_layout(&self) -> Vec<usize> {
        let mut tracker = LayoutTracker::identity(self.n);
        for g in &self.gates {
            tracker.apply(g);
        }
        tracker.site_to_logical
    }

    /// Replaces every `CRz(l)` by `Rz(l/2) CNOT Rz(-l/2) CNOT` on the target.
    pub fn expand_controlled_rotations(&self) -> Circuit {
        let mut out = Circuit::new(self.n, self.coupling);
        for g in &self.gates {
            match g.kind {
                GateKind::CRz(l) => {
                    let (c, t) = (g.qubits[0], g.qubits[1]);
                    out.gates.push(Gate::single(GateKind::Rz(l / 2.0), t));
                    out.gates.push(Gate::pair(GateKind::Cnot, c, t));
                    out.gates.push(Gate::single(GateKind::Rz(-l / 2.0), t));
                    out.gates.push(Gate::pair(GateKind::Cnot, c, t));
                }
                _ => out.gates.push(*g),
            }
        }
        out
    }

    /// Adjoint circuit (reversed order, inverted gates).
    pub fn inverse(&self) -> Circuit {
        let mut out = Circuit::new(self.n, self.coupling);
        out.gates = self
            .gates
            .iter()
            .rev()
            .map(|g| {
                let kind = match g.kind {
                    GateKind::S => GateKind::Sdg,
                    GateKind::Sdg => GateKind::S,
                    GateKind::SqrtX => GateKind::SqrtXdg,
                    GateKind::SqrtXdg => GateKind::SqrtX,
                    GateKind::Rz(l) => GateKind::Rz(-l),
                    GateKind::CRz(l) => GateKind::CRz(-l),
                    k => k,
                };
                Gate { kind, ..*g }
            })
            .collect();
        out
    }

    pub fn to_text(&self) -> String {
        text::write(self)
    }

    pub fn from_text(src: &str) -> Result<Circuit> {
        text::read(src)
    }
}

/// Tracks which logical qubit sits on which site while swaps are replayed.
#[derive(Debug, Clone)]
pub struct LayoutTracker {
    pub site_to_logical: Vec<usize>,
    pub logical_to_site: Vec<usize>,
}

impl LayoutTracker {
    pub fn identity(n: usize) -> Self {
        Self {
            site_to_logical: (0..n).collect(),
            logical_to_site: (0..n).collect(),
        }
    }

    pub fn site_of(&self, logical: usize) -> usize {
        self.logical_to_site[logical]
    }

    pub fn logical_at(&self, site: usize) -> usize {
        self.site_to_logical[site]
    }

    pub fn apply(&mut self, gate: &Gate) {
        if let GateKind::Swap = gate.kind {
            let (a, b) = (gate.qubits[0], gate.qubits[1]);
            let (sa, sb) = (self.logical_to_site[a], self.logical_to_site[b]);
            self.logical_to_site.swap(a, b);
            self.site_to_logical[sa] = b;
            self.site_to_logical[sb] = a;
        }
    }

    pub fn is_identity(&self) -> bool {
        self.site_to_logical.iter().enumerate().all(|(s, &l)| s == l)
    }
}

/// Dense unitary on sites, for a circuit starting from the identity layout.
pub fn unitary_of(circuit: &Circuit) -> Result<CMatrix> {
    let n = circuit.n();
    if n > DENSE_QUBIT_LIMIT {
        return Err(Error::DimensionOverflow {
            n,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    let dim = 1usize << n;
    let mut columns: Vec<Vec<C64>> = (0..dim)
        .map(|c| {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[c] = C64::new(1.0, 0.0);
            v
        })
        .collect();
    let mut layout = LayoutTracker::identity(n);
    for gate in circuit.gates() {
        let op = kernels::SiteGate::resolve(gate, &layout);
        for col in columns.iter_mut() {
            op.apply(col, dim, 1, 0);
        }
        layout.apply(gate);
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| columns[c][r]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarViolation {
    pub gate_index: usize,
    pub qubits: Vec<usize>,
    /// Logical qubit holding the center when the gate was reached.
    pub center_holder: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarReport {
    pub ok: bool,
    pub violations: Vec<StarViolation>,
}

/// Checks that every two-qubit gate touches the qubit currently on the
/// center site. All-to-all circuits are checked against center site 0.
pub fn validate_star(circuit: &Circuit) -> StarReport {
    let center = match circuit.coupling {
        Coupling::Star { center } => center,
        Coupling::AllToAll => 0,
    };
    let mut layout = LayoutTracker::identity(circuit.n());
    let mut violations = Vec::new();
    for (i, gate) in circuit.gates().iter().enumerate() {
        if gate.is_two_qubit() {
            let holder = layout.logical_at(center);
            if !gate.qubits().contains(&holder) {
                violations.push(StarViolation {
                    gate_index: i,
                    qubits: gate.qubits().to_vec(),
                    center_holder: holder,
                });
            }
        }
        layout.apply(gate);
    }
    StarReport {
        ok: violations.is_empty(),
        violations,
    }
}
