//! Time grids for the piecewise-constant evolution and Trotter error bounds.

use crate::linalg::{self, CMatrix};
use crate::meanfield::QuenchProfile;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum TrotterOrder {
    First,
    Second,
}

impl TrotterOrder {
    pub fn as_u32(self) -> u32 {
        match self {
            TrotterOrder::First => 1,
            TrotterOrder::Second => 2,
        }
    }
}

impl TryFrom<u32> for TrotterOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            1 => Ok(TrotterOrder::First),
            2 => Ok(TrotterOrder::Second),
            other => Err(Error::UnsupportedOrder(other)),
        }
    }
}

impl From<TrotterOrder> for u32 {
    fn from(o: TrotterOrder) -> u32 {
        o.as_u32()
    }
}

/// Ordered time grid; the Hamiltonian is frozen at the left endpoint of
/// every interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterPlan {
    pub order: TrotterOrder,
    grid: Vec<f64>,
    /// Minimum Trotter substeps per interval. The compiler may raise it per
    /// Gaudin term to meet `target_error`.
    substeps: Vec<u32>,
    pub target_error: f64,
}

impl TrotterPlan {
    pub fn new(
        order: TrotterOrder,
        grid: Vec<f64>,
        substeps: Vec<u32>,
        target_error: f64,
    ) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidParameters("grid needs at least two times".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameters("grid must be strictly increasing".into()));
        }
        if substeps.len() != grid.len() - 1 || substeps.iter().any(|&m| m == 0) {
            return Err(Error::InvalidParameters(
                "one substep count >= 1 is needed per interval".into(),
            ));
        }
        if !(target_error > 0.0) {
            return Err(Error::InvalidParameters("target error must be positive".into()));
        }
        Ok(Self {
            order,
            grid,
            substeps,
            target_error,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn substeps(&self) -> &[u32] {
        &self.substeps
    }

    pub fn steps(&self) -> usize {
        self.grid.len() - 1
    }

    /// `(t_start, dt, min_substeps)` per interval.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, u32)> + '_ {
        self.grid
            .windows(2)
            .zip(&self.substeps)
            .map(|(w, &m)| (w[0], w[1] - w[0], m))
    }

    /// Splits intervals so every time in `points` becomes a grid node.
    /// Points outside the grid span or within `1e-12` of a node are ignored.
    pub fn with_breakpoints(&self, points: &[f64]) -> TrotterPlan {
        let span = self.grid[self.grid.len() - 1] - self.grid[0];
        let tol = 1e-12 * span.max(1.0);
        let mut grid = Vec::with_capacity(self.grid.len() + points.len());
        let mut substeps = Vec::with_capacity(self.substeps.len() + points.len());
        let mut sorted: Vec<f64> = points.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut p = sorted.into_iter().peekable();
        for (i, w) in self.grid.windows(2).enumerate() {
            grid.push(w[0]);
            substeps.push(self.substeps[i]);
            while let Some(&t) = p.peek() {
                if t <= w[0] + tol {
                    p.next();
                } else if t < w[1] - tol {
                    grid.push(t);
                    substeps.push(self.substeps[i]);
                    p.next();
                } else {
                    break;
                }
            }
        }
        grid.push(self.grid[self.grid.len() - 1]);
        TrotterPlan {
            order: self.order,
            grid,
            substeps,
            target_error: self.target_error,
        }
    }

    /// `t,dt,substeps` rows, one per interval.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,dt,substeps\n");
        for (t, dt, m) in self.intervals() {
            out.push_str(&format!("{t:.11e},{dt:.11e},{m}\n"));
        }
        out
    }
}

pub fn plan_uniform(
    t0: f64,
    t: f64,
    steps: usize,
    order: TrotterOrder,
    target_error: f64,
) -> Result<TrotterPlan> {
    if !(t > t0) {
        return Err(Error::InvalidParameters(format!(
            "time span must be positive, got [{t0}, {t}]"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidParameters("need at least one step".into()));
    }
    let dt = (t - t0) / steps as f64;
    let mut grid: Vec<f64> = (0..steps).map(|i| t0 + i as f64 * dt).collect();
    grid.push(t);
    TrotterPlan::new(order, grid, vec![1; steps], target_error)
}

/// Weights of the adaptive step rule
/// `dt(t) = base_dt / (1 + a |g'(t)| + b |g''(t)|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveConstants {
    pub a: f64,
    pub b: f64,
}

impl AdaptiveConstants {
    /// Scales `a` and `b` so each derivative term alone contributes at most
    /// `(refinement - 1) / 2` at its peak.
    pub fn normalized(profile: &QuenchProfile, refinement: f64) -> Self {
        let (d1, d2) = profile.derivative_peaks();
        let share = (refinement - 1.0).max(0.0) / 2.0;
        Self {
            a: if d1 > f64::EPSILON { share / d1 } else { 0.0 },
            b: if d2 > f64::EPSILON { share / d2 } else { 0.0 },
        }
    }
}

pub const DEFAULT_REFINEMENT: f64 = 5.0;

pub fn plan_adaptive(
    profile: &QuenchProfile,
    t0: f64,
    t: f64,
    base_dt: f64,
    order: TrotterOrder,
    target_error: f64,
    constants: AdaptiveConstants,
) -> Result<TrotterPlan> {
    if !(base_dt > 0.0) {
        return Err(Error::InvalidParameters("base_dt must be positive".into()));
    }
    if !(t > t0) {
        return Err(Error::InvalidParameters(format!(
            "time span must be positive, got [{t0}, {t}]"
        )));
    }
    let tol = 1e-9 * base_dt;
    let mut grid = vec![t0];
    let mut now = t0;
    loop {
        let local = base_dt
            / (1.0
                + constants.a * profile.derivative(now).abs()
                + constants.b * profile.second_derivative(now).abs());
        let next = now + local;
        if next >= t - tol {
            grid.push(t);
            break;
        }
        grid.push(next);
        now = next;
    }
    let steps = grid.len() - 1;
    TrotterPlan::new(order, grid, vec![1; steps], target_error)
}

/// Norms entering the leading Trotter error terms for `A + B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorNorms {
    /// `||[A, B]||`
    pub first: f64,
    /// `||[A + B/2, [A, B]]||`
    pub nested: f64,
}

impl CommutatorNorms {
    pub fn of(a: &CMatrix, b: &CMatrix) -> Self {
        let ab = linalg::commutator(a, b);
        let half = a + b * linalg::real(0.5);
        Self {
            first: linalg::spectral_norm(&ab),
            nested: linalg::spectral_norm(&linalg::commutator(&half, &ab)),
        }
    }
}

/// Leading-order splitting error over total time `t` with `m` steps.
pub fn error_bound(order: TrotterOrder, norms: CommutatorNorms, t: f64, m: u32) -> f64 {
    let m = f64::from(m.max(1));
    match order {
        TrotterOrder::First => t * t / (2.0 * m) * norms.first,
        TrotterOrder::Second => t.powi(3) / (12.0 * m * m) * norms.nested,
    }
}

/// Dense product formula for `exp(-i t (A + B))`:
/// `(e^{-iA dt} e^{-iB dt})^m` or `(e^{-iB dt/2} e^{-iA dt} e^{-iB dt/2})^m`.
pub fn split_evolution(a: &CMatrix, b: &CMatrix, t: f64, m: u32, order: TrotterOrder) -> CMatrix {
    let dt = t / f64::from(m);
    let step = match order {
        TrotterOrder::First => linalg::expm_hermitian(b, dt) * linalg::expm_hermitian(a, dt),
        TrotterOrder::Second => {
            let half_b = linalg::expm_hermitian(b, dt / 2.0);
            &half_b * linalg::expm_hermitian(a, dt) * &half_b
        }
    };
    let mut u = linalg::identity(a.nrows());
    for _ in 0..m {
        u = &step * u;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{pauli_string, Pauli};

    #[test]
    fn uniform_grid_quarters() {
        let p = plan_uniform(0.0, 1.0, 4, TrotterOrder::Second, 1e-3).unwrap();
        assert_eq!(p.grid(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(p.substeps(), &[1, 1, 1, 1]);
    }

    #[test]
    fn nonpositive_span_rejected() {
        assert!(plan_uniform(1.0, 1.0, 4, TrotterOrder::First, 1e-3).is_err());
        assert!(plan_uniform(0.0, 1.0, 0, TrotterOrder::First, 1e-3).is_err());
        assert!(TrotterOrder::try_from(4).is_err());
    }

    #[test]
    fn error_bound_plug_in() {
        let zero = CommutatorNorms { first: 0.0, nested: 0.0 };
        assert_eq!(error_bound(TrotterOrder::First, zero, 1.0, 3), 0.0);
        assert_eq!(error_bound(TrotterOrder::Second, zero, 1.0, 3), 0.0);
        let n = CommutatorNorms { first: 2.0, nested: 0.0 };
        assert!((error_bound(TrotterOrder::First, n, 1.0, 2) - 0.5).abs() < 1e-15);
        let half = error_bound(TrotterOrder::First, n, 1.0, 4);
        assert!((half - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pauli_commutator_norm() {
        let x = pauli_string(1, &[(0, Pauli::X)]).unwrap().matrix;
        let z = pauli_string(1, &[(0, Pauli::Z)]).unwrap().matrix;
        let n = CommutatorNorms::of(&x, &z);
        assert!((n.first - 2.0).abs() < 1e-12);
    }

    #[test]
    fn toy_splitting_errors_obey_bounds() {
        let x = pauli_string(1, &[(0, Pauli::X)]).unwrap().matrix;
        let z = pauli_string(1, &[(0, Pauli::Z)]).unwrap().matrix;
        let exact = linalg::expm_hermitian(&(&x + &z), 1.0);
        let norms = CommutatorNorms::of(&x, &z);
        for m in [10u32, 20, 40] {
            let u1 = split_evolution(&x, &z, 1.0, m, TrotterOrder::First);
            let err = linalg::spectral_norm(&(&u1 - &exact));
            assert!(err <= error_bound(TrotterOrder::First, norms, 1.0, m) * 1.1);
        }
        let e = |m| {
            let u = split_evolution(&x, &z, 1.0, m, TrotterOrder::Second);
            linalg::spectral_norm(&(&u - &exact))
        };
        let ratio = e(10) / e(20);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn breakpoints_split_intervals() {
        let p = plan_uniform(0.0, 1.0, 2, TrotterOrder::First, 1e-3).unwrap();
        let q = p.with_breakpoints(&[0.25, 0.5, 0.9, 2.0, -1.0]);
        assert_eq!(q.grid(), &[0.0, 0.25, 0.5, 0.9, 1.0]);
        assert_eq!(q.steps(), 4);
    }

    #[test]
    fn csv_has_one_row_per_interval() {
        let p = plan_uniform(0.0, 1.0, 2, TrotterOrder::First, 1e-3).unwrap();
        let csv = p.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("t,dt,substeps\n"));
    }
}
