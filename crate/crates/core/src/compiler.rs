//! Star-register compilation of one constant-parameter step
//! `exp(-i dt H_BCS)`.
//!
//! The step is `prod_q U(-g eps_q H_q)` (mutually commuting Gaudin terms),
//! then `exp(-i dt g (L^z)^2)` as per-qubit Ising stars, then
//! `exp(-i dt g L^z)` as an `Rz` layer. The Gaudin sweep walks every qubit
//! through the center with one swap each and the Ising sweep walks back, so
//! the layout is restored after `2(n-1)` swaps. Gate operands are logical
//! labels, so the level permutation induced by the swaps needs no parameter
//! bookkeeping: each fragment is addressed by the orbital it acts on.

use crate::circuit::{
    controlled_heisenberg_gate, controlled_ising_gate, heisenberg_gate_with, ising_gate,
    Circuit, Coupling, Fragment, Gate, GateKind, HeisenbergVariant, LayoutTracker,
};
use crate::hamiltonian::BcsParameters;
use crate::trotter::{TrotterOrder, TrotterPlan};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSettings {
    pub order: TrotterOrder,
    /// Floor on the number of Trotter substeps inside each `U(H_q)`.
    pub min_substeps: u32,
    /// Per-term substep error target driving `substeps_for`.
    pub target_error: f64,
    pub variant: HeisenbergVariant,
}

impl StepSettings {
    pub fn new(order: TrotterOrder, target_error: f64) -> Self {
        Self {
            order,
            min_substeps: 1,
            target_error,
            variant: HeisenbergVariant::default(),
        }
    }

    /// Settings for interval `i` of a plan.
    pub fn from_plan(plan: &TrotterPlan, i: usize, variant: HeisenbergVariant) -> Self {
        Self {
            order: plan.order,
            min_substeps: plan.substeps()[i],
            target_error: plan.target_error,
            variant,
        }
    }

    /// `max(floor, ceil(dt * Lambda_q / target^(1/order)))`.
    pub fn substeps_for(&self, dt: f64, lambda_q: f64) -> u32 {
        let root = self.target_error.powf(1.0 / f64::from(self.order.as_u32()));
        let m = (dt * lambda_q / root).ceil();
        let m = if m.is_finite() { m.min(f64::from(u32::MAX)) as u32 } else { 1 };
        m.max(self.min_substeps).max(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepProgram {
    pub circuit: Circuit,
    pub swap_count: usize,
    /// Two-qubit gates including swaps.
    pub two_qubit_count: usize,
    pub single_qubit_count: usize,
    /// Site -> logical map after the program.
    pub final_layout: Vec<usize>,
    /// `exp(i phase) * U(circuit)` is the intended operator.
    pub phase: f64,
}

impl StepProgram {
    fn seal(circuit: Circuit, phase: f64) -> Self {
        Self {
            swap_count: circuit.swap_count(),
            two_qubit_count: circuit.two_qubit_count(),
            single_qubit_count: circuit.single_qubit_count(),
            final_layout: circuit.final_layout(),
            circuit,
            phase,
        }
    }
}

/// `Lambda_q = sum_{j != q} |3 g eps_q / (2 (eps_q - eps_j))| + |eps_q / g|`.
pub fn lambda(params: &BcsParameters, q: usize) -> f64 {
    let eps = params.epsilon();
    let g = params.g();
    let pair: f64 = eps
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != q)
        .map(|(_, &ej)| (3.0 * g * eps[q] / (2.0 * (eps[q] - ej))).abs())
        .sum();
    let single = if g > 0.0 { (eps[q] / g).abs() } else { 0.0 };
    pair + single
}

/// One Trotterizable exponent of `U(H_q)`.
#[derive(Debug, Clone, Copy)]
enum Term {
    /// `exp(-i alpha s_q.s_j)` with the full-step alpha.
    Pair { j: usize, alpha: f64 },
    /// `exp(-i lambda Z_q / 2)` with the full-step angle.
    Z { angle: f64 },
}

fn gaudin_terms(params: &BcsParameters, q: usize, dt: f64) -> Vec<Term> {
    let eps = params.epsilon();
    let g = params.g();
    let mut terms: Vec<Term> = (0..params.n())
        .filter(|&j| j != q)
        .map(|j| Term::Pair {
            j,
            alpha: -dt * g * eps[q] / (2.0 * (eps[q] - eps[j])),
        })
        .collect();
    // exp(i dt g eps_q sigma^z_q / g)
    terms.push(Term::Z {
        angle: -2.0 * dt * eps[q],
    });
    terms
}

/// Product-formula schedule: `(term index, fraction of the full step)`.
/// Adjacent repeats of the same term are fused.
fn schedule(len: usize, m: u32, order: TrotterOrder) -> Vec<(usize, f64)> {
    let h = 1.0 / f64::from(m);
    let mut seq: Vec<(usize, f64)> = Vec::new();
    for _ in 0..m {
        match order {
            TrotterOrder::First => seq.extend((0..len).map(|i| (i, h))),
            TrotterOrder::Second => {
                seq.extend((0..len - 1).map(|i| (i, h / 2.0)));
                seq.push((len - 1, h));
                seq.extend((0..len - 1).rev().map(|i| (i, h / 2.0)));
            }
        }
    }
    let mut fused: Vec<(usize, f64)> = Vec::with_capacity(seq.len());
    for (i, f) in seq {
        match fused.last_mut() {
            Some(last) if last.0 == i => last.1 += f,
            _ => fused.push((i, f)),
        }
    }
    fused
}

fn check_step(params: &BcsParameters, dt: f64, center: usize) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameters(format!("dt must be positive, got {dt}")));
    }
    if center >= params.n() {
        return Err(Error::IndexOutOfRange {
            index: center,
            n: params.n(),
        });
    }
    if params.g() <= 0.0 {
        return Err(Error::ZeroCoupling(params.g()));
    }
    Ok(())
}

/// Visiting order of the Gaudin sweep: the initial center first.
fn sweep_order(n: usize, center: usize) -> Vec<usize> {
    std::iter::once(center)
        .chain((0..n).filter(|&q| q != center))
        .collect()
}

/// Emits `SWAP(holder, q)` when `q` is not on the center site.
fn bring_to_center(c: &mut Circuit, layout: &mut LayoutTracker, center: usize, q: usize) -> Result<()> {
    let holder = layout.logical_at(center);
    if holder != q {
        let s = Gate::pair(GateKind::Swap, holder, q);
        c.push(s)?;
        layout.apply(&s);
    }
    Ok(())
}

fn push_fragment(c: &mut Circuit, f: Fragment, phase: &mut f64) -> Result<()> {
    *phase += f.phase;
    c.extend(f.gates)
}

/// Compiles `exp(-i dt H)` with `H` the Pauli-matrix part of the BCS
/// Hamiltonian (constant offset excluded) for a star register centered on
/// `center`.
pub fn compile_step(
    params: &BcsParameters,
    dt: f64,
    settings: &StepSettings,
    center: usize,
) -> Result<StepProgram> {
    check_step(params, dt, center)?;
    let n = params.n();
    let g = params.g();
    let mut c = Circuit::new(n, Coupling::Star { center });
    let mut layout = LayoutTracker::identity(n);
    // Identity part of (L^z)^2.
    let mut phase = -dt * g * n as f64 / 4.0;
    let order = sweep_order(n, center);

    for &q in &order {
        bring_to_center(&mut c, &mut layout, center, q)?;
        let terms = gaudin_terms(params, q, dt);
        let m = settings.substeps_for(dt, lambda(params, q));
        for (i, frac) in schedule(terms.len(), m, settings.order) {
            match terms[i] {
                Term::Pair { j, alpha } => {
                    let f = heisenberg_gate_with(q, j, alpha * frac, settings.variant)?;
                    push_fragment(&mut c, f, &mut phase)?;
                }
                Term::Z { angle } => c.push(Gate::single(GateKind::Rz(angle * frac), q))?,
            }
        }
    }

    for &q in order.iter().rev() {
        bring_to_center(&mut c, &mut layout, center, q)?;
        for j in (0..n).filter(|&j| j != q) {
            push_fragment(&mut c, ising_gate(q, j, dt * g / 4.0)?, &mut phase)?;
        }
    }

    for q in 0..n {
        c.push(Gate::single(GateKind::Rz(dt * g), q))?;
    }
    Ok(StepProgram::seal(c, phase))
}

/// Controlled version of [`compile_step`] on `n + 1` qubits; the control is
/// logical qubit `n` on its own spoke and is never swapped.
///
/// Every rotation of the step becomes a `CRz` from the control onto the
/// center, the `L^z` layer is fused into the Ising sweep, and an `Rz` on the
/// control supplies the relative phase between the blocks. With
/// `include_offset` the constant energy offset is part of that phase, so the
/// `|1>` block is `exp(-i dt H_BCS)` for the full Hamiltonian.
pub fn compile_controlled_step(
    params: &BcsParameters,
    dt: f64,
    settings: &StepSettings,
    center: usize,
    include_offset: bool,
) -> Result<StepProgram> {
    check_step(params, dt, center)?;
    let n = params.n();
    let g = params.g();
    let ctrl = n;
    let mut c = Circuit::new(n + 1, Coupling::Star { center });
    let mut layout = LayoutTracker::identity(n + 1);
    let order = sweep_order(n, center);

    for &q in &order {
        bring_to_center(&mut c, &mut layout, center, q)?;
        let terms = gaudin_terms(params, q, dt);
        let m = settings.substeps_for(dt, lambda(params, q));
        for (i, frac) in schedule(terms.len(), m, settings.order) {
            match terms[i] {
                Term::Pair { j, alpha } => {
                    c.extend(controlled_heisenberg_gate(ctrl, q, j, alpha * frac)?.gates)?
                }
                Term::Z { angle } => c.push(Gate::pair(GateKind::CRz(angle * frac), ctrl, q))?,
            }
        }
    }

    for &q in order.iter().rev() {
        bring_to_center(&mut c, &mut layout, center, q)?;
        for j in (0..n).filter(|&j| j != q) {
            c.extend(controlled_ising_gate(ctrl, q, j, dt * g / 4.0)?.gates)?;
        }
        c.push(Gate::pair(GateKind::CRz(dt * g), ctrl, q))?;
    }

    let mut relative = -dt * g * n as f64 / 4.0;
    if include_offset {
        relative -= dt * params.constant_offset();
    }
    c.push(Gate::single(GateKind::Rz(relative), ctrl))?;
    Ok(StepProgram::seal(c, relative / 2.0))
}

/// Two-qubit gate count of the naive controlled circuit in which every gate
/// of `program` receives the control: single-qubit gates become one
/// controlled gate, CNOTs Toffolis (6 CNOTs), swaps Fredkins (8 CNOTs) and
/// `CRz` doubly controlled rotations (4 two-qubit gates).
pub fn naive_controlled_two_qubit_count(program: &StepProgram) -> usize {
    program
        .circuit
        .gates()
        .iter()
        .map(|g| match g.kind {
            GateKind::Cnot => 6,
            GateKind::Swap => 8,
            GateKind::CRz(_) => 4,
            _ => 1,
        })
        .sum()
}

/// Star schedule for `prod_{j in M} prod_{k in S_j} f_jk`: each `j` is
/// swapped onto the center, its fragments are emitted, and the swaps are
/// undone in reverse at the end. Uses at most `2|M|` swaps.
pub fn schedule_double_product<F>(
    n: usize,
    center: usize,
    members: &[usize],
    partners: &[Vec<usize>],
    mut builder: F,
) -> Result<StepProgram>
where
    F: FnMut(usize, usize) -> Result<Fragment>,
{
    if members.is_empty() {
        return Err(Error::InvalidParameters("double product needs a nonempty M".into()));
    }
    if partners.len() != members.len() {
        return Err(Error::DimensionMismatch {
            expected: members.len(),
            found: partners.len(),
        });
    }
    if center >= n {
        return Err(Error::IndexOutOfRange { index: center, n });
    }
    let mut c = Circuit::new(n, Coupling::Star { center });
    let mut layout = LayoutTracker::identity(n);
    let mut phase = 0.0;
    let mut swaps: Vec<Gate> = Vec::new();
    for (&j, ks) in members.iter().zip(partners) {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        let before = c.len();
        bring_to_center(&mut c, &mut layout, center, j)?;
        if c.len() > before {
            swaps.push(c.gates()[before]);
        }
        for &k in ks {
            push_fragment(&mut c, builder(j, k)?, &mut phase)?;
        }
    }
    for s in swaps.into_iter().rev() {
        c.push(s)?;
    }
    Ok(StepProgram::seal(c, phase))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub n: usize,
    pub order: u32,
    pub time: f64,
    pub epsilon: f64,
    /// Counts for one step with a single substep per Gaudin term.
    pub step_swaps: usize,
    pub step_two_qubit: usize,
    pub step_single_qubit: usize,
    pub lambda: Vec<f64>,
    pub r: Vec<f64>,
    /// `max_q r_q * n^2`
    pub bound: f64,
}

impl CostReport {
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:.6e}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "n={}\norder={}\ntime={}\nepsilon={}\nstep_swaps={}\nstep_two_qubit={}\n\
             step_single_qubit={}\nlambda={}\nr={}\nbound=O(max_q r_q n^2) ~ {:.6e}\n",
            self.n,
            self.order,
            self.time,
            self.epsilon,
            self.step_swaps,
            self.step_two_qubit,
            self.step_single_qubit,
            list(&self.lambda),
            list(&self.r),
            self.bound
        )
    }
}

/// `r_q ~ p 25^p / 3^(p-1) * ((Lambda_q t)^(2p+1) / eps)^(1/2p)` for the
/// order-`2p` product formula.
pub fn trotter_steps_estimate(lambda_q: f64, t: f64, epsilon: f64, p: u32) -> f64 {
    let p = f64::from(p);
    p * 25f64.powf(p) / 3f64.powf(p - 1.0) * ((lambda_q * t).powf(2.0 * p + 1.0) / epsilon).powf(1.0 / (2.0 * p))
}

pub fn cost_report(params: &BcsParameters, t: f64, epsilon: f64, p: u32) -> Result<CostReport> {
    if p == 0 {
        return Err(Error::UnsupportedOrder(p));
    }
    if !(t > 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "cost report needs t > 0 and epsilon > 0 (t={t}, epsilon={epsilon})"
        )));
    }
    let n = params.n();
    let lambda: Vec<f64> = (0..n).map(|q| lambda(params, q)).collect();
    let r: Vec<f64> = lambda
        .iter()
        .map(|&l| trotter_steps_estimate(l, t, epsilon, p))
        .collect();
    let order = if p == 1 { TrotterOrder::First } else { TrotterOrder::Second };
    let settings = StepSettings {
        order,
        min_substeps: 1,
        target_error: f64::INFINITY,
        variant: HeisenbergVariant::default(),
    };
    let step = compile_step(params, t, &settings, 0)?;
    let rmax = r.iter().cloned().fold(0.0, f64::max);
    Ok(CostReport {
        n,
        order: p,
        time: t,
        epsilon,
        step_swaps: step.swap_count,
        step_two_qubit: step.two_qubit_count,
        step_single_qubit: step.single_qubit_count,
        lambda,
        r,
        bound: rmax * (n * n) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{unitary_of, validate_star};
    use crate::hamiltonian::build_bcs_hamiltonian;
    use crate::linalg::{self, C64};

    fn settings(order: TrotterOrder) -> StepSettings {
        StepSettings::new(order, 1e-6)
    }

    fn step_error(params: &BcsParameters, dt: f64, s: &StepSettings) -> f64 {
        let prog = compile_step(params, dt, s, 0).unwrap();
        let u = unitary_of(&prog.circuit).unwrap() * C64::from_polar(1.0, prog.phase);
        let h = build_bcs_hamiltonian(params).unwrap();
        let exact = linalg::expm_hermitian(&h.operator.matrix, dt);
        linalg::spectral_norm(&(u - exact))
    }

    #[test]
    fn two_level_step_swaps_twice() {
        let p = BcsParameters::new(vec![0.3, 1.1], 0.7, 0.0).unwrap();
        let prog = compile_step(&p, 0.1, &settings(TrotterOrder::First), 0).unwrap();
        assert_eq!(prog.swap_count, 2);
        assert_eq!(prog.final_layout, vec![0, 1]);
    }

    #[test]
    fn five_level_step_is_star_valid() {
        let p = BcsParameters::harmonic(5, 5.0 / 3.0, 1.2).unwrap();
        let prog = compile_step(&p, 0.05, &settings(TrotterOrder::Second), 0).unwrap();
        assert_eq!(prog.swap_count, 8);
        assert!(validate_star(&prog.circuit).ok);
        assert_eq!(prog.final_layout, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn tiny_step_matches_exponential() {
        let p = BcsParameters::new(vec![0.5, 1.3, 2.0], 0.8, 0.0).unwrap();
        let err = step_error(&p, 1e-3, &settings(TrotterOrder::Second));
        assert!(err <= 1e-6, "err={err}");
    }

    #[test]
    fn heisenberg_variants_give_the_same_step() {
        let p = BcsParameters::new(vec![0.5, 1.3, 2.1], 0.8, 0.0).unwrap();
        let run = |variant| {
            let s = StepSettings { variant, ..StepSettings::new(TrotterOrder::Second, 1e-2) };
            let prog = compile_step(&p, 0.3, &s, 0).unwrap();
            unitary_of(&prog.circuit).unwrap() * C64::from_polar(1.0, prog.phase)
        };
        let a = run(HeisenbergVariant::BellCnot);
        let b = run(HeisenbergVariant::ThreeCnot);
        let d = linalg::max_abs_diff(&a, &b);
        assert!(d < 1e-12, "diff {d}");
    }

    #[test]
    fn second_order_error_cubic() {
        let p = BcsParameters::new(vec![0.4, 1.0, 1.9, 2.6], 1.1, 0.0).unwrap();
        let s = StepSettings {
            target_error: f64::INFINITY,
            ..settings(TrotterOrder::Second)
        };
        let e1 = step_error(&p, 1e-2, &s);
        let e2 = step_error(&p, 5e-3, &s);
        assert!(e1 / e2 >= 6.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn nonzero_center_works() {
        let p = BcsParameters::new(vec![0.5, 1.3, 2.0], 0.8, 0.0).unwrap();
        let prog = compile_step(&p, 1e-3, &settings(TrotterOrder::Second), 2).unwrap();
        assert!(validate_star(&prog.circuit).ok);
        assert_eq!(prog.final_layout, vec![0, 1, 2]);
    }

    #[test]
    fn schedule_fuses_boundaries() {
        let s = schedule(3, 2, TrotterOrder::Second);
        let total: Vec<f64> = (0..3)
            .map(|i| s.iter().filter(|(t, _)| *t == i).map(|(_, f)| f).sum())
            .collect();
        for t in total {
            assert!((t - 1.0).abs() < 1e-15);
        }
        assert!(s.windows(2).all(|w| w[0].0 != w[1].0));
    }

    #[test]
    fn controlled_step_blocks() {
        let p = BcsParameters::new(vec![0.5, 1.3, 2.0], 0.8, 0.0).unwrap();
        let s = settings(TrotterOrder::Second);
        let dt = 0.05;
        let plain = compile_step(&p, dt, &s, 0).unwrap();
        let target = unitary_of(&plain.circuit).unwrap()
            * C64::from_polar(1.0, plain.phase - dt * p.constant_offset());
        let prog = compile_controlled_step(&p, dt, &s, 0, true).unwrap();
        assert!(validate_star(&prog.circuit).ok);
        let u = unitary_of(&prog.circuit).unwrap() * C64::from_polar(1.0, prog.phase);
        let dim = 8;
        let block0 = u.view((0, 0), (dim, dim)).into_owned();
        let block1 = u.view((dim, dim), (dim, dim)).into_owned();
        assert!(linalg::max_abs_diff(&block0, &linalg::identity(dim)) < 1e-10);
        assert!(linalg::max_abs_diff(&block1, &target) < 1e-10);
        assert!(u.view((dim, 0), (dim, dim)).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn controlled_beats_naive_control() {
        let p = BcsParameters::new(vec![0.5, 1.3], 0.8, 0.0).unwrap();
        let s = settings(TrotterOrder::First);
        let plain = compile_step(&p, 0.1, &s, 0).unwrap();
        let ctrl = compile_controlled_step(&p, 0.1, &s, 0, false).unwrap();
        assert!(ctrl.two_qubit_count < naive_controlled_two_qubit_count(&plain));
    }

    #[test]
    fn double_product_swap_counts() {
        let ising = |j, k| ising_gate(j, k, 0.1);
        let a = schedule_double_product(4, 0, &[0], &[vec![1, 2, 3]], ising).unwrap();
        assert_eq!(a.swap_count, 0);
        let b = schedule_double_product(4, 0, &[0, 1], &[vec![2], vec![3]], ising).unwrap();
        assert!(b.swap_count <= 2);
        assert!(validate_star(&b.circuit).ok);
        assert_eq!(b.final_layout, vec![0, 1, 2, 3]);
        assert!(schedule_double_product(4, 0, &[], &[], ising).is_err());
    }

    #[test]
    fn lambda_examples() {
        let p = BcsParameters::new(vec![0.0, 1.0], 1.0, 0.0).unwrap();
        assert_eq!(lambda(&p, 0), 0.0);
        let p = BcsParameters::new(vec![0.3, 1.2, 2.2], 0.9, 0.0).unwrap();
        let p2 = BcsParameters::new(vec![0.6, 2.4, 4.4], 1.8, 0.0).unwrap();
        // The pair sum is homogeneous of degree one, |eps_q / g| of degree zero.
        for q in 0..3 {
            let single = (p.epsilon()[q] / p.g()).abs();
            let doubled = 2.0 * (lambda(&p, q) - single) + single;
            assert!((lambda(&p2, q) - doubled).abs() < 1e-12);
        }
    }

    #[test]
    fn cost_grows_with_time() {
        let p = BcsParameters::harmonic(4, 1.0, 1.0).unwrap();
        let a = cost_report(&p, 1.0, 1e-3, 1).unwrap();
        let b = cost_report(&p, 2.0, 1e-3, 1).unwrap();
        for q in 0..4 {
            assert!(b.r[q] > a.r[q]);
        }
        assert!(a.to_text().contains("lambda="));
    }
}
