//! Uniform-gap mean-field solution, its product-state preparation circuit and
//! the quench profile `g(t)`.

use crate::circuit::{Circuit, Coupling, Gate, GateKind};
use crate::hamiltonian::BcsParameters;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Gap equation `2/g = sum_k tanh(E_k / 2T) / E_k` with `E_k = sqrt(eps_k^2 + Delta^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapEquation {
    epsilon: Vec<f64>,
    temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolution {
    pub delta: f64,
    pub energies: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub temperature: f64,
}

const BISECTION_TOL: f64 = 1e-12;

impl GapEquation {
    pub fn new(epsilon: &[f64], temperature: f64) -> Result<Self> {
        if epsilon.is_empty() || epsilon.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameters(
                "gap equation needs finite levels".into(),
            ));
        }
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "temperature must be >= 0, got {temperature}"
            )));
        }
        Ok(Self {
            epsilon: epsilon.to_vec(),
            temperature,
        })
    }

    pub fn from_params(params: &BcsParameters) -> Self {
        Self {
            epsilon: params.epsilon().to_vec(),
            temperature: params.temperature(),
        }
    }

    fn term(&self, e: f64) -> f64 {
        if self.temperature == 0.0 {
            if e == 0.0 {
                f64::INFINITY
            } else {
                1.0 / e
            }
        } else if e < 1e-300 {
            1.0 / (2.0 * self.temperature)
        } else {
            (e / (2.0 * self.temperature)).tanh() / e
        }
    }

    /// `sum_k tanh(E_k / 2T) / E_k`
    pub fn kernel(&self, delta: f64) -> f64 {
        self.epsilon
            .iter()
            .map(|&eps| self.term(eps.hypot(delta)))
            .sum()
    }

    pub fn g_from_delta(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "gap must be positive, got {delta}"
            )));
        }
        Ok(2.0 / self.kernel(delta))
    }

    /// Largest gap solving the equation at coupling `g`, or 0 in the normal state.
    pub fn delta_from_g(&self, g: f64) -> Result<f64> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "coupling must be positive, got {g}"
            )));
        }
        let target = 2.0 / g;
        if self.kernel(0.0) <= target {
            return Ok(0.0);
        }
        let max_eps = self.epsilon.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let (mut lo, mut hi) = (0.0, g * self.epsilon.len() as f64 / 2.0 + max_eps);
        for _ in 0..200 {
            if hi - lo <= BISECTION_TOL {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.kernel(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn solution(&self, delta: f64) -> MeanFieldSolution {
        let mut energies = Vec::with_capacity(self.epsilon.len());
        let mut u = Vec::with_capacity(self.epsilon.len());
        let mut v = Vec::with_capacity(self.epsilon.len());
        for &eps in &self.epsilon {
            let e = eps.hypot(delta);
            let (uj, vj) = if e == 0.0 {
                (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
            } else {
                (
                    ((1.0 + eps / e) / 2.0).max(0.0).sqrt(),
                    ((1.0 - eps / e) / 2.0).max(0.0).sqrt(),
                )
            };
            energies.push(e);
            u.push(uj);
            v.push(vj);
        }
        MeanFieldSolution {
            delta,
            energies,
            u,
            v,
            temperature: self.temperature,
        }
    }

    pub fn solve(&self, g: f64) -> Result<MeanFieldSolution> {
        Ok(self.solution(self.delta_from_g(g)?))
    }
}

/// Circuit preparing `prod_j (u_j - v_j K_j^+) |0...0>`, or its adjoint.
///
/// Per qubit: `Sdg H Rz(theta) H Sdg` with `theta = 2 atan2(v, u)`, which maps
/// `|0>` to `u|0> - v|1>` exactly. Qubits with `v = 0` get no gates.
pub fn bcs_state_circuit(solution: &MeanFieldSolution, inverse: bool) -> Circuit {
    let n = solution.u.len();
    let mut c = Circuit::new(n, Coupling::AllToAll);
    for (j, (&u, &v)) in solution.u.iter().zip(&solution.v).enumerate() {
        if v == 0.0 {
            continue;
        }
        let theta = 2.0 * v.atan2(u);
        let seq = if inverse {
            [GateKind::S, GateKind::H, GateKind::Rz(-theta), GateKind::H, GateKind::S]
        } else {
            [GateKind::Sdg, GateKind::H, GateKind::Rz(theta), GateKind::H, GateKind::Sdg]
        };
        for kind in seq {
            c.push(Gate::single(kind, j)).expect("qubit in range");
        }
    }
    c
}

/// Double-arctan coupling ramp from `g0` to `gc` near `t1` and back near `t2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchProfile {
    pub t1: f64,
    pub t2: f64,
    pub gamma: f64,
    pub g0: f64,
    pub gc: f64,
}

impl QuenchProfile {
    pub fn new(t1: f64, t2: f64, gamma: f64, g0: f64, gc: f64) -> Result<Self> {
        if !(t2 > t1) || !(gamma > 0.0) || ![t1, t2, gamma, g0, gc].iter().all(|x| x.is_finite())
        {
            return Err(Error::InvalidParameters(format!(
                "quench needs t2 > t1 and gamma > 0 (t1={t1}, t2={t2}, gamma={gamma})"
            )));
        }
        Ok(Self { t1, t2, gamma, g0, gc })
    }

    /// Constant coupling `g` with dummy switching times.
    pub fn constant(g: f64) -> Self {
        Self {
            t1: 0.0,
            t2: 1.0,
            gamma: 1.0,
            g0: g,
            gc: g,
        }
    }

    fn scale(&self) -> f64 {
        (self.gc - self.g0) / (PI * PI)
    }

    // (A, A', A'') for the rising bracket and the same for the falling one.
    fn brackets(&self, t: f64) -> ([f64; 3], [f64; 3]) {
        let gm = self.gamma;
        let x = (t - self.t1) / gm;
        let y = (self.t2 - t) / gm;
        let rx = 1.0 + x * x;
        let ry = 1.0 + y * y;
        let a = [
            x.atan() + PI / 2.0,
            1.0 / (gm * rx),
            -2.0 * x / (gm * gm * rx * rx),
        ];
        let b = [
            y.atan() + PI / 2.0,
            -1.0 / (gm * ry),
            -2.0 * y / (gm * gm * ry * ry),
        ];
        (a, b)
    }

    pub fn value(&self, t: f64) -> f64 {
        let (a, b) = self.brackets(t);
        a[0] * b[0] * self.scale() + self.g0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let (a, b) = self.brackets(t);
        (a[1] * b[0] + a[0] * b[1]) * self.scale()
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        let (a, b) = self.brackets(t);
        (a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2]) * self.scale()
    }

    /// Numerical maxima of `|g'|` and `|g''|`, scanned around both switching times.
    pub fn derivative_peaks(&self) -> (f64, f64) {
        let mut d1 = 0.0f64;
        let mut d2 = 0.0f64;
        let h = self.gamma / 200.0;
        for centre in [self.t1, self.t2] {
            for i in -4000..=4000 {
                let t = centre + f64::from(i) * h;
                d1 = d1.max(self.derivative(t).abs());
                d2 = d2.max(self.second_derivative(t).abs());
            }
        }
        (d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::unitary_of;

    fn harmonic_eps(n: usize) -> Vec<f64> {
        (0..n).map(|j| 5.0 / 3.0 * (j as f64 + 0.5)).collect()
    }

    #[test]
    fn single_level_coupling() {
        let eq = GapEquation::new(&[0.0], 0.0).unwrap();
        assert!((eq.g_from_delta(1.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn quench_couplings_from_closed_form() {
        let eps = harmonic_eps(5);
        let eq = GapEquation::new(&eps, 0.0).unwrap();
        let direct: f64 = eps.iter().map(|e| 1.0 / (e * e + 1.0).sqrt()).sum();
        let g0 = eq.g_from_delta(1.0).unwrap();
        assert!((g0 - 2.0 / direct).abs() < 1e-14);
        let gc = eq.g_from_delta(2.0).unwrap();
        assert!(gc > g0);
    }

    #[test]
    fn round_trip_delta() {
        let eq = GapEquation::new(&harmonic_eps(5), 0.0).unwrap();
        for d in [0.5, 1.0, 2.0] {
            let g = eq.g_from_delta(d).unwrap();
            assert!((eq.delta_from_g(g).unwrap() - d).abs() < 1e-10);
        }
    }

    #[test]
    fn weak_coupling_is_normal() {
        let eq = GapEquation::new(&harmonic_eps(5), 0.0).unwrap();
        assert_eq!(eq.delta_from_g(1e-6).unwrap(), 0.0);
        assert!(eq.g_from_delta(0.0).is_err());
        assert!(eq.delta_from_g(-1.0).is_err());
    }

    #[test]
    fn gap_shrinks_with_temperature() {
        let eps = harmonic_eps(5);
        let g = GapEquation::new(&eps, 0.0).unwrap().g_from_delta(2.0).unwrap();
        let mut last = f64::INFINITY;
        for t in [0.0, 0.2, 0.5, 1.0, 2.0, 5.0] {
            let d = GapEquation::new(&eps, t).unwrap().delta_from_g(g).unwrap();
            assert!(d <= last + 1e-12);
            last = d;
        }
    }

    #[test]
    fn amplitudes_normalized() {
        let eq = GapEquation::new(&harmonic_eps(5), 0.0).unwrap();
        let s = eq.solution(1.3);
        for j in 0..5 {
            assert!((s.u[j].powi(2) + s.v[j].powi(2) - 1.0).abs() < 1e-12);
            assert!(s.energies[j] >= eq.epsilon[j].abs());
        }
    }

    #[test]
    fn single_qubit_preparation_signs() {
        let s = MeanFieldSolution {
            delta: 1.0,
            energies: vec![1.0],
            u: vec![FRAC_1_SQRT_2],
            v: vec![FRAC_1_SQRT_2],
            temperature: 0.0,
        };
        let u = unitary_of(&bcs_state_circuit(&s, false)).unwrap();
        assert!((u[(0, 0)].re - FRAC_1_SQRT_2).abs() < 1e-12 && u[(0, 0)].im.abs() < 1e-12);
        assert!((u[(1, 0)].re + FRAC_1_SQRT_2).abs() < 1e-12 && u[(1, 0)].im.abs() < 1e-12);
    }

    #[test]
    fn trivial_solution_gives_empty_circuit() {
        let s = MeanFieldSolution {
            delta: 0.0,
            energies: vec![1.0, 2.0],
            u: vec![1.0, 1.0],
            v: vec![0.0, 0.0],
            temperature: 0.0,
        };
        assert!(bcs_state_circuit(&s, false).is_empty());
    }

    #[test]
    fn preparation_then_inverse_is_identity() {
        let eq = GapEquation::new(&harmonic_eps(3), 0.0).unwrap();
        let s = eq.solution(1.0);
        let mut c = bcs_state_circuit(&s, false);
        c.append(&bcs_state_circuit(&s, true)).unwrap();
        let u = unitary_of(&c).unwrap();
        let id = crate::linalg::identity(8);
        assert!(crate::linalg::max_abs_diff(&u, &id) < 1e-12);
    }

    #[test]
    fn quench_profile_limits() {
        let p = QuenchProfile::new(9.0, 18.0, 0.1, 1.2, 1.6).unwrap();
        assert!((p.value(-1e9) - 1.2).abs() < 1e-6);
        assert!((p.value(0.0) - 1.2).abs() < 0.012);
        assert!((p.value(13.5) - 1.6).abs() < 0.016);
        let sharp = QuenchProfile::new(9.0, 18.0, 1e-9, 1.2, 1.6).unwrap();
        assert!((sharp.value(13.5) - 1.6).abs() < 1e-9);
        assert!(QuenchProfile::new(2.0, 1.0, 0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let p = QuenchProfile::new(1.0, 3.0, 0.3, 1.0, 2.0).unwrap();
        let h = 1e-5;
        for t in [0.0, 0.9, 1.1, 2.0, 2.95, 4.0] {
            let fd1 = (p.value(t + h) - p.value(t - h)) / (2.0 * h);
            let fd2 = (p.value(t + h) - 2.0 * p.value(t) + p.value(t - h)) / (h * h);
            assert!((p.derivative(t) - fd1).abs() < 1e-7);
            assert!((p.second_derivative(t) - fd2).abs() < 1e-3);
        }
    }
}
