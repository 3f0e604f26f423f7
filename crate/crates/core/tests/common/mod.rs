//! Reference constructions used by the integration tests. Nothing here calls
//! into the library's operator builders or exponentials.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::Rng;

pub type M = DMatrix<C>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli(label: char) -> M {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match label {
        'I' => M::from_row_slice(2, 2, &[l, o, o, l]),
        'X' => M::from_row_slice(2, 2, &[o, l, l, o]),
        'Y' => M::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => M::from_row_slice(2, 2, &[l, o, o, -l]),
        _ => panic!("unknown Pauli {label}"),
    }
}

/// Kronecker product with qubit 0 as the least significant factor.
pub fn embed(n: usize, ops: &[(usize, M)]) -> M {
    let mut out = M::from_element(1, 1, c(1.0, 0.0));
    for q in (0..n).rev() {
        let f = ops
            .iter()
            .find(|(k, _)| *k == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| pauli('I'));
        out = out.kronecker(&f);
    }
    out
}

pub fn pauli_on(n: usize, q: usize, label: char) -> M {
    embed(n, &[(q, pauli(label))])
}

pub fn sigma_dot(n: usize, j: usize, k: usize) -> M {
    ['X', 'Y', 'Z']
        .iter()
        .map(|&p| pauli_on(n, j, p) * pauli_on(n, k, p))
        .fold(M::zeros(1 << n, 1 << n), |a, b| a + b)
}

fn one_norm(a: &M) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` by scaling and squaring of a truncated Taylor series.
pub fn expm_taylor(a: &M) -> M {
    let norm = one_norm(a);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / c(2f64.powi(s), 0.0);
    let dim = a.nrows();
    let mut term = M::identity(dim, dim);
    let mut sum = M::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &scaled / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i t h)`.
pub fn evolve(h: &M, t: f64) -> M {
    expm_taylor(&(h * c(0.0, -t)))
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frob(a: &M) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral norm as the largest singular value.
pub fn norm2(a: &M) -> f64 {
    a.clone().singular_values().max()
}

/// `min_phi ||a - e^{i phi} b||_2` up to the phase estimate from the trace.
pub fn phase_free_norm(a: &M, b: &M) -> f64 {
    let tr: C = (b.adjoint() * a).trace();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { c(1.0, 0.0) };
    norm2(&(a - b * phase))
}

/// BCS Hamiltonian in the pair basis from bit manipulations:
/// `sum_j 2 eps_j n_j - g sum_{j,k} b_j^dag b_k`, where `b_j^dag` flips bit `j`
/// from 0 to 1.
pub fn brute_force_bcs(eps: &[f64], g: f64) -> M {
    let n = eps.len();
    let dim = 1usize << n;
    let mut h = M::zeros(dim, dim);
    for s in 0..dim {
        let diag: f64 = (0..n).filter(|j| s >> j & 1 == 1).map(|j| 2.0 * eps[j]).sum();
        h[(s, s)] += c(diag, 0.0);
        for k in 0..n {
            if s >> k & 1 == 0 {
                continue;
            }
            for j in 0..n {
                // b_j^dag b_k |s>
                let t = s & !(1 << k);
                if t >> j & 1 == 1 {
                    continue;
                }
                let t = t | (1 << j);
                h[(t, s)] -= c(g, 0.0);
            }
        }
    }
    h
}

/// `prod_j (u_j - v_j b_j^dag)|0...0>` expanded amplitude by amplitude.
pub fn bcs_product_amplitudes(u: &[f64], v: &[f64]) -> Vec<C> {
    let n = u.len();
    (0..1usize << n)
        .map(|s| {
            let mut a = 1.0;
            for j in 0..n {
                a *= if s >> j & 1 == 1 { -v[j] } else { u[j] };
            }
            c(a, 0.0)
        })
        .collect()
}

/// `diag(I, u)` with the control as the most significant qubit.
pub fn controlled(u: &M) -> M {
    let d = u.nrows();
    let mut out = M::zeros(2 * d, 2 * d);
    for i in 0..d {
        out[(i, i)] = c(1.0, 0.0);
    }
    out.view_mut((d, d), (d, d)).copy_from(u);
    out
}

pub fn harmonic_levels(n: usize, omega: f64) -> Vec<f64> {
    (0..n).map(|j| omega * (j as f64 + 0.5)).collect()
}

/// Sorted levels with neighbouring gaps of at least `0.05`.
pub fn random_levels(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut x = rng.gen_range(-1.0..0.0);
    (0..n)
        .map(|_| {
            x += rng.gen_range(0.05..1.5);
            x
        })
        .collect()
}
