//! Operator-level objects over the Cooper-pair qubit space.
//!
//! An orbital `j` is empty (`|0>`) or holds one Cooper pair (`|1>`), and the
//! pair operators act as `K_j = sigma_j / 2`. With this mapping the pair
//! creation operator is `K+_j = Kx_j - i Ky_j = |1><0|`, which lowers `Kz`.

use crate::linalg::{self, CMatrix, C64, DENSE_QUBIT_LIMIT, I, ONE, ZERO};
use crate::{Error, Result};

/// Relative tolerance below which two energy levels count as degenerate.
pub const DEGENERACY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub matrix: CMatrix,
    pub label: String,
}

impl DenseOperator {
    pub fn new(matrix: CMatrix, label: impl Into<String>) -> Self {
        Self {
            matrix,
            label: label.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::hermiticity_defect(&self.matrix) <= tol
    }

    pub fn commutator_norm(&self, other: &DenseOperator) -> f64 {
        linalg::frobenius(&linalg::commutator(&self.matrix, &other.matrix))
    }
}

/// Physical input of the pairing model at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct BcsParameters {
    epsilon: Vec<f64>,
    g: f64,
    temperature: f64,
}

impl BcsParameters {
    /// Validates `n >= 2`, non-degenerate levels and non-negative `g`, `T`.
    pub fn new(epsilon: Vec<f64>, g: f64, temperature: f64) -> Result<Self> {
        let n = epsilon.len();
        if n < 2 {
            return Err(Error::InvalidParameters(format!(
                "need at least 2 orbitals, got {n}"
            )));
        }
        if n > DENSE_QUBIT_LIMIT {
            return Err(Error::DimensionOverflow {
                n,
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        if epsilon.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameters("non-finite energy level".into()));
        }
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParameters(format!(
                "coupling must be finite and non-negative, got {g}"
            )));
        }
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(Error::InvalidParameters(format!(
                "temperature must be non-negative, got {temperature}"
            )));
        }
        let tol = degeneracy_tol(&epsilon);
        for q in 0..n {
            for j in q + 1..n {
                if (epsilon[q] - epsilon[j]).abs() <= tol {
                    return Err(Error::DegenerateLevels(q, j));
                }
            }
        }
        Ok(Self {
            epsilon,
            g,
            temperature,
        })
    }

    /// Harmonic levels `eps_j = omega (j + 1/2)`.
    pub fn harmonic(n: usize, omega: f64, g: f64) -> Result<Self> {
        Self::new(
            (0..n).map(|j| omega * (j as f64 + 0.5)).collect(),
            g,
            0.0,
        )
    }

    pub fn n(&self) -> usize {
        self.epsilon.len()
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.epsilon.clone(), g, self.temperature)
    }

    /// Constant that turns the Gaudin-form matrix into the restricted
    /// fermionic Hamiltonian: `H_fermion = H_matrix + offset * 1`.
    pub fn constant_offset(&self) -> f64 {
        self.epsilon.iter().sum::<f64>() - 0.75 * self.n() as f64 * self.g
    }
}

pub fn degeneracy_tol(epsilon: &[f64]) -> f64 {
    DEGENERACY_REL_TOL * epsilon.iter().fold(0.0f64, |m, e| m.max(e.abs()))
}

fn check_dense(n: usize) -> Result<usize> {
    if n > DENSE_QUBIT_LIMIT {
        return Err(Error::DimensionOverflow {
            n,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    Ok(1usize << n)
}

/// Tensor product of Paulis at the assigned qubits, identity elsewhere.
pub fn pauli_string(n: usize, assignments: &[(usize, Pauli)]) -> Result<DenseOperator> {
    let dim = check_dense(n)?;
    let mut seen = vec![false; n];
    for &(q, _) in assignments {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
        if seen[q] {
            return Err(Error::InvalidParameters(format!(
                "qubit {q} assigned twice"
            )));
        }
        seen[q] = true;
    }
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut row = col;
        let mut amp = ONE;
        for &(q, p) in assignments {
            let bit = (col >> q) & 1;
            match p {
                Pauli::X => row ^= 1 << q,
                Pauli::Y => {
                    row ^= 1 << q;
                    amp *= if bit == 0 { I } else { -I };
                }
                Pauli::Z => {
                    if bit == 1 {
                        amp = -amp;
                    }
                }
            }
        }
        m[(row, col)] = amp;
    }
    let label = assignments
        .iter()
        .map(|(q, p)| format!("{p:?}{q}"))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(DenseOperator::new(
        m,
        if label.is_empty() { "I".into() } else { label },
    ))
}

/// `sigma_j . sigma_k = 2 SWAP_jk - 1`.
pub fn heisenberg_pair(n: usize, j: usize, k: usize) -> Result<CMatrix> {
    let dim = check_dense(n)?;
    for idx in [j, k] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    if j == k {
        return Err(Error::InvalidParameters("heisenberg pair needs j != k".into()));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let bj = (b >> j) & 1;
        let bk = (b >> k) & 1;
        if bj == bk {
            m[(b, b)] += ONE;
        } else {
            m[(b, b)] -= ONE;
            let swapped = b ^ (1 << j) ^ (1 << k);
            m[(swapped, b)] += linalg::real(2.0);
        }
    }
    Ok(m)
}

fn sigma_z_diag(n: usize, q: usize) -> CMatrix {
    let dim = 1usize << n;
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        (0..dim).map(|b| if (b >> q) & 1 == 0 { ONE } else { -ONE }),
    ))
}

/// Pseudo-spin operators of one orbital.
#[derive(Debug, Clone)]
pub struct KOperators {
    pub x: DenseOperator,
    pub y: DenseOperator,
    pub z: DenseOperator,
}

impl KOperators {
    /// Pair creation `Kx - i Ky`.
    pub fn plus(&self) -> CMatrix {
        &self.x.matrix - &self.y.matrix * I
    }

    /// Pair annihilation `Kx + i Ky`.
    pub fn minus(&self) -> CMatrix {
        &self.x.matrix + &self.y.matrix * I
    }
}

pub fn build_k_operators(n: usize, j: usize) -> Result<KOperators> {
    let half = linalg::real(0.5);
    let mk = |p: Pauli, name: &str| -> Result<DenseOperator> {
        let s = pauli_string(n, &[(j, p)])?;
        Ok(DenseOperator::new(s.matrix * half, format!("K{name}_{j}")))
    };
    Ok(KOperators {
        x: mk(Pauli::X, "x")?,
        y: mk(Pauli::Y, "y")?,
        z: mk(Pauli::Z, "z")?,
    })
}

/// Total pseudo-spin `L^z = sum_j sigma^z_j / 2`.
pub fn total_lz(n: usize) -> Result<DenseOperator> {
    let dim = check_dense(n)?;
    let diag = nalgebra::DVector::from_iterator(
        dim,
        (0..dim).map(|b| {
            let ones = b.count_ones() as f64;
            linalg::real(0.5 * (n as f64 - 2.0 * ones))
        }),
    );
    Ok(DenseOperator::new(CMatrix::from_diagonal(&diag), "Lz"))
}

/// The commuting family `H_q = sum_{j != q} sigma_q.sigma_j / (2(eps_q - eps_j)) + sigma^z_q / g`.
#[derive(Debug, Clone)]
pub struct GaudinSet {
    pub params: BcsParameters,
    pub gamma: f64,
    pub operators: Vec<DenseOperator>,
}

pub fn build_gaudin_set(params: &BcsParameters) -> Result<GaudinSet> {
    let g = params.g();
    if g <= 0.0 {
        return Err(Error::ZeroCoupling(g));
    }
    let n = params.n();
    let eps = params.epsilon();
    let mut operators = Vec::with_capacity(n);
    for q in 0..n {
        let mut h = sigma_z_diag(n, q) * linalg::real(1.0 / g);
        for j in (0..n).filter(|&j| j != q) {
            let coeff = 1.0 / (2.0 * (eps[q] - eps[j]));
            h += heisenberg_pair(n, q, j)? * linalg::real(coeff);
        }
        operators.push(DenseOperator::new(h, format!("H_{q}")));
    }
    Ok(GaudinSet {
        params: params.clone(),
        gamma: -2.0 / g,
        operators,
    })
}

#[derive(Debug, Clone)]
pub struct BcsHamiltonian {
    pub operator: DenseOperator,
    /// Add `offset * 1` to recover the restricted fermionic Hamiltonian.
    pub offset: f64,
}

/// `H = -g sum_q eps_q H_q + g L^z + g (L^z)^2`.
///
/// At `g = 0` the Gaudin operators are undefined; the matrix then takes its
/// continuous limit `-sum_q eps_q sigma^z_q`.
pub fn build_bcs_hamiltonian(params: &BcsParameters) -> Result<BcsHamiltonian> {
    let n = params.n();
    let g = params.g();
    let matrix = if g == 0.0 {
        let mut h = CMatrix::zeros(1 << n, 1 << n);
        for (q, &e) in params.epsilon().iter().enumerate() {
            h -= sigma_z_diag(n, q) * linalg::real(e);
        }
        h
    } else {
        let set = build_gaudin_set(params)?;
        let lz = total_lz(n)?.matrix;
        let mut h = &lz * linalg::real(g) + &lz * &lz * linalg::real(g);
        for (op, &e) in set.operators.iter().zip(params.epsilon()) {
            h -= &op.matrix * linalg::real(g * e);
        }
        h
    };
    Ok(BcsHamiltonian {
        operator: DenseOperator::new(matrix, "H_BCS"),
        offset: params.constant_offset(),
    })
}

/// Energy expectation `<psi|H|psi>` for a normalized state.
pub fn energy(h: &CMatrix, psi: &[C64]) -> f64 {
    let dim = psi.len();
    let mut acc = ZERO;
    for r in 0..dim {
        let mut row = ZERO;
        for c in 0..dim {
            row += h[(r, c)] * psi[c];
        }
        acc += psi[r].conj() * row;
    }
    acc.re
}
