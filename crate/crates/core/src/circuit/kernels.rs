//! In-place gate kernels on strided complex vectors.

use super::{Gate, GateKind, LayoutTracker};
use crate::linalg::C64;
use std::f64::consts::FRAC_1_SQRT_2;

type M2 = [[C64; 2]; 2];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn single_qubit_matrix(kind: GateKind) -> Option<M2> {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let h = c(FRAC_1_SQRT_2, 0.0);
    Some(match kind {
        GateKind::X => [[o, l], [l, o]],
        GateKind::Y => [[o, -i], [i, o]],
        GateKind::Z => [[l, o], [o, -l]],
        GateKind::H => [[h, h], [h, -h]],
        GateKind::S => [[l, o], [o, i]],
        GateKind::Sdg => [[l, o], [o, -i]],
        GateKind::SqrtX => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::SqrtXdg => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
        GateKind::Rz(l) => [
            [C64::from_polar(1.0, -l / 2.0), o],
            [o, C64::from_polar(1.0, l / 2.0)],
        ],
        _ => return None,
    })
}

/// A gate resolved onto physical sites.
#[derive(Debug, Clone, Copy)]
pub enum SiteGate {
    Dense1 { site: usize, m: M2 },
    Diag1 { site: usize, d: [C64; 2] },
    Cnot { control: usize, target: usize },
    Swap { a: usize, b: usize },
    /// Diagonal on `target`, applied only where `control` is set.
    ControlledDiag { control: usize, target: usize, d: [C64; 2] },
}

impl SiteGate {
    pub fn resolve(gate: &Gate, layout: &LayoutTracker) -> SiteGate {
        let q = gate.qubits();
        let s0 = layout.site_of(q[0]);
        match gate.kind {
            GateKind::Cnot => SiteGate::Cnot {
                control: s0,
                target: layout.site_of(q[1]),
            },
            GateKind::Swap => SiteGate::Swap {
                a: s0,
                b: layout.site_of(q[1]),
            },
            GateKind::CRz(l) => SiteGate::ControlledDiag {
                control: s0,
                target: layout.site_of(q[1]),
                d: [C64::from_polar(1.0, -l / 2.0), C64::from_polar(1.0, l / 2.0)],
            },
            kind => {
                let m = single_qubit_matrix(kind).expect("single-qubit kind");
                if m[0][1] == c(0.0, 0.0) && m[1][0] == c(0.0, 0.0) {
                    SiteGate::Diag1 {
                        site: s0,
                        d: [m[0][0], m[1][1]],
                    }
                } else {
                    SiteGate::Dense1 { site: s0, m }
                }
            }
        }
    }

    pub fn sites(&self) -> (usize, Option<usize>) {
        match *self {
            SiteGate::Dense1 { site, .. } | SiteGate::Diag1 { site, .. } => (site, None),
            SiteGate::Cnot { control, target } => (control, Some(target)),
            SiteGate::Swap { a, b } => (a, Some(b)),
            SiteGate::ControlledDiag { control, target, .. } => (control, Some(target)),
        }
    }

    /// Element-wise complex conjugate of the gate matrix.
    pub fn conj(&self) -> SiteGate {
        match *self {
            SiteGate::Dense1 { site, m } => SiteGate::Dense1 {
                site,
                m: [
                    [m[0][0].conj(), m[0][1].conj()],
                    [m[1][0].conj(), m[1][1].conj()],
                ],
            },
            SiteGate::Diag1 { site, d } => SiteGate::Diag1 {
                site,
                d: [d[0].conj(), d[1].conj()],
            },
            SiteGate::ControlledDiag { control, target, d } => SiteGate::ControlledDiag {
                control,
                target,
                d: [d[0].conj(), d[1].conj()],
            },
            other => other,
        }
    }

    /// Applies the gate to the vector `v[offset + i * stride]`, `i < dim`.
    pub fn apply(&self, data: &mut [C64], dim: usize, stride: usize, offset: usize) {
        let at = |i: usize| offset + i * stride;
        match *self {
            SiteGate::Dense1 { site, m } => {
                let bit = 1usize << site;
                for i in 0..dim {
                    if i & bit == 0 {
                        let (i0, i1) = (at(i), at(i | bit));
                        let (a, b) = (data[i0], data[i1]);
                        data[i0] = m[0][0] * a + m[0][1] * b;
                        data[i1] = m[1][0] * a + m[1][1] * b;
                    }
                }
            }
            SiteGate::Diag1 { site, d } => {
                let bit = 1usize << site;
                for i in 0..dim {
                    let k = at(i);
                    data[k] *= d[usize::from(i & bit != 0)];
                }
            }
            SiteGate::Cnot { control, target } => {
                let (cb, tb) = (1usize << control, 1usize << target);
                for i in 0..dim {
                    if i & cb != 0 && i & tb == 0 {
                        data.swap(at(i), at(i | tb));
                    }
                }
            }
            SiteGate::Swap { a, b } => {
                let (ab, bb) = (1usize << a, 1usize << b);
                for i in 0..dim {
                    if i & ab != 0 && i & bb == 0 {
                        data.swap(at(i), at(i ^ ab ^ bb));
                    }
                }
            }
            SiteGate::ControlledDiag { control, target, d } => {
                let (cb, tb) = (1usize << control, 1usize << target);
                for i in 0..dim {
                    if i & cb != 0 {
                        let k = at(i);
                        data[k] *= d[usize::from(i & tb != 0)];
                    }
                }
            }
        }
    }
}
