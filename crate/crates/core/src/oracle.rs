//! Classical reference propagation by dense diagonalization.

use crate::hamiltonian::{build_bcs_hamiltonian, BcsParameters};
use crate::linalg::{self, CMatrix, C64, DENSE_QUBIT_LIMIT};
use crate::meanfield::QuenchProfile;
use crate::{Error, Result};
use nalgebra::DVector;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    /// `|<psi_0|psi(t)>|^2` at every grid time.
    pub return_prob: Vec<f64>,
}

impl ReferenceTrajectory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,return_prob\n");
        for (t, r) in self.times.iter().zip(&self.return_prob) {
            out.push_str(&format!("{t:.11e},{r:.11e}\n"));
        }
        out
    }
}

fn return_probability(psi0: &[C64], psi: &DVector<C64>) -> f64 {
    psi0.iter()
        .zip(psi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .norm_sqr()
}

/// Propagates `psi0` over `grid`, freezing the Hamiltonian at the left
/// endpoint of every interval: `psi_j = exp(-i H(t_{j-1}) dt) psi_{j-1}`.
pub fn evolve_piecewise<F>(psi0: &[C64], grid: &[f64], mut hamiltonian_at: F) -> Result<ReferenceTrajectory>
where
    F: FnMut(f64) -> Result<CMatrix>,
{
    let dim = psi0.len();
    if dim < 2 || !dim.is_power_of_two() || dim.trailing_zeros() as usize > DENSE_QUBIT_LIMIT {
        return Err(Error::DimensionOverflow {
            n: dim.trailing_zeros() as usize,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameters("empty time grid".into()));
    }
    let mut psi = DVector::from_column_slice(psi0);
    let mut times = vec![grid[0]];
    let mut states = vec![psi0.to_vec()];
    let mut return_prob = vec![return_probability(psi0, &psi)];
    for w in grid.windows(2) {
        let h = hamiltonian_at(w[0])?;
        if h.nrows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: h.nrows(),
            });
        }
        psi = linalg::expm_hermitian(&h, w[1] - w[0]) * psi;
        times.push(w[1]);
        return_prob.push(return_probability(psi0, &psi));
        states.push(psi.as_slice().to_vec());
    }
    Ok(ReferenceTrajectory {
        times,
        states,
        return_prob,
    })
}

/// Reference trajectory for the levels of `params` with coupling `profile(t)`.
pub fn exact_evolve(
    params: &BcsParameters,
    profile: &QuenchProfile,
    psi0: &[C64],
    grid: &[f64],
) -> Result<ReferenceTrajectory> {
    let expected = 1usize << params.n();
    if psi0.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: psi0.len(),
        });
    }
    evolve_piecewise(psi0, grid, |t| {
        let p = params.with_g(profile.value(t))?;
        Ok(build_bcs_hamiltonian(&p)?.operator.matrix)
    })
}

pub const DEGENERACY_GAP: f64 = 1e-10;

/// Lowest eigenvector of the BCS Hamiltonian, phase fixed so that its first
/// non-negligible amplitude is real and positive.
pub fn exact_ground_state(params: &BcsParameters) -> Result<Vec<C64>> {
    let h = build_bcs_hamiltonian(params)?.operator.matrix;
    let (vals, vecs) = linalg::hermitian_eigen(&h);
    let gap = vals[1] - vals[0];
    if gap < DEGENERACY_GAP {
        return Err(Error::DegenerateGroundState(gap));
    }
    let mut v: Vec<C64> = vecs.column(0).iter().copied().collect();
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-8 * scale).copied() {
        let fix = lead.conj() / lead.norm();
        for z in &mut v {
            *z *= fix;
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::energy;

    fn params() -> BcsParameters {
        BcsParameters::new(vec![0.4, 1.1, 1.7], 0.9, 0.0).unwrap()
    }

    #[test]
    fn eigenvector_is_stationary() {
        let p = params();
        let psi0 = exact_ground_state(&p).unwrap();
        let grid: Vec<f64> = (0..=20).map(|i| f64::from(i) * 0.25).collect();
        let tr = exact_evolve(&p, &QuenchProfile::constant(p.g()), &psi0, &grid).unwrap();
        for r in &tr.return_prob {
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_expansion_agrees() {
        let p = params();
        let h = build_bcs_hamiltonian(&p).unwrap().operator.matrix;
        let (vals, vecs) = linalg::hermitian_eigen(&h);
        let mut psi0 = vec![C64::new(0.0, 0.0); 8];
        psi0[0] = C64::new(0.6, 0.0);
        psi0[3] = C64::new(0.0, 0.8);
        let grid: Vec<f64> = (0..=10).map(|i| f64::from(i) * 0.37).collect();
        let tr = exact_evolve(&p, &QuenchProfile::constant(p.g()), &psi0, &grid).unwrap();
        let coeffs: Vec<C64> = (0..8)
            .map(|k| (0..8).map(|i| vecs[(i, k)].conj() * psi0[i]).sum())
            .collect();
        for (t, r) in tr.times.iter().zip(&tr.return_prob) {
            let amp: C64 = (0..8)
                .map(|k| C64::from_polar(coeffs[k].norm_sqr(), -vals[k] * t))
                .sum();
            assert!((amp.norm_sqr() - r).abs() < 1e-10);
        }
        for s in &tr.states {
            let norm: f64 = s.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn free_ground_state_is_vacuum() {
        let p = BcsParameters::new(vec![0.4, 1.1, 1.7], 0.0, 0.0).unwrap();
        let psi = exact_ground_state(&p).unwrap();
        assert!((psi[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ground_state_phase_convention() {
        let psi = exact_ground_state(&params()).unwrap();
        let lead = psi.iter().find(|z| z.norm() > 1e-8).unwrap();
        assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
        let h = build_bcs_hamiltonian(&params()).unwrap().operator.matrix;
        let (vals, _) = linalg::hermitian_eigen(&h);
        assert!((energy(&h, &psi) - vals[0]).abs() < 1e-10);
    }

    #[test]
    fn degenerate_ground_space_rejected() {
        let p = BcsParameters::new(vec![0.0, 1.0], 0.0, 0.0).unwrap();
        assert!(matches!(exact_ground_state(&p), Err(Error::DegenerateGroundState(_))));
    }

    #[test]
    fn csv_header() {
        let p = params();
        let psi0 = exact_ground_state(&p).unwrap();
        let tr = exact_evolve(&p, &QuenchProfile::constant(p.g()), &psi0, &[0.0, 1.0]).unwrap();
        assert!(tr.to_csv().starts_with("t,return_prob\n"));
        assert_eq!(tr.to_csv().lines().count(), 3);
    }
}
