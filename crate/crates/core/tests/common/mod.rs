//! Reference implementations used only as test oracles. None of these call
//! into the library's linear algebra.
#![allow(dead_code)]

use monogamy_core::state::PureTripartiteState;
use nalgebra::{Complex, DMatrix};

pub type C = Complex<f64>;
pub type M = DMatrix<C>;

/// Reduced state by explicit index loops over the traced parties.
pub fn naive_partial_trace(state: &PureTripartiteState<f64>, keep: &[usize]) -> M {
    let d = state.dim();
    let traced: Vec<usize> = (0..3).filter(|p| !keep.contains(p)).collect();
    let n = d.pow(keep.len() as u32);
    let t = d.pow(traced.len() as u32);
    let mut rho = M::zeros(n, n);
    let index = |row: usize, rest: usize| {
        let mut idx = [0usize; 3];
        let mut r = row;
        for &p in keep.iter().rev() {
            idx[p] = r % d;
            r /= d;
        }
        let mut r = rest;
        for &p in traced.iter().rev() {
            idx[p] = r % d;
            r /= d;
        }
        idx
    };
    for a in 0..n {
        for b in 0..n {
            let mut acc = C::new(0.0, 0.0);
            for rest in 0..t {
                let ia = index(a, rest);
                let ib = index(b, rest);
                acc += state.amplitude(ia[0], ia[1], ia[2]) * state.amplitude(ib[0], ib[1], ib[2]).conj();
            }
            rho[(a, b)] = acc;
        }
    }
    rho
}

/// Determinant by cofactor expansion along the first row.
pub fn laplace_det(m: &M) -> C {
    let n = m.nrows();
    if n == 1 {
        return m[(0, 0)];
    }
    let mut total = C::new(0.0, 0.0);
    for col in 0..n {
        let minor = M::from_fn(n - 1, n - 1, |i, j| m[(i + 1, if j < col { j } else { j + 1 })]);
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        total += m[(0, col)] * laplace_det(&minor) * sign;
    }
    total
}

/// Cyclic complex Jacobi eigen-solver for Hermitian matrices. Returns
/// eigenvalues (descending) and eigenvectors as columns.
pub fn jacobi_eigen(m: &M) -> (Vec<f64>, M) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = M::identity(n, n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                // Phase-rotate q so the pivot is real, then a real Jacobi
                // rotation with tan 2θ = 2|a_pq| / (a_pp − a_qq).
                let phase = (apq / mag).conj();
                let theta = 0.5 * (2.0 * mag).atan2(a[(p, p)].re - a[(q, q)].re);
                let (s, c) = theta.sin_cos();
                let mut g = M::identity(n, n);
                g[(p, p)] = C::new(c, 0.0);
                g[(p, q)] = C::new(-s, 0.0);
                g[(q, p)] = phase * s;
                g[(q, q)] = phase * c;
                // a ← g† a g zeroes entry (p, q) for this choice of angle.
                let gh = g.adjoint();
                a = &gh * &a * &g;
                v = &v * &g;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.partial_cmp(&a[(x, x)].re).unwrap());
    let vals = order.iter().map(|&k| a[(k, k)].re).collect();
    let vecs = M::from_fn(n, n, |i, j| v[(i, order[j])]);
    (vals, vecs)
}

pub fn jacobi_eigenvalues(m: &M) -> Vec<f64> {
    jacobi_eigen(m).0
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn wootters_concurrence(rho: &M) -> f64 {
    let (vals, vecs) = jacobi_eigen(rho);
    let sqrt_rho = {
        let diag = M::from_diagonal(&nalgebra::DVector::from_iterator(
            4,
            vals.iter().map(|&x| C::new(x.max(0.0).sqrt(), 0.0)),
        ));
        &vecs * diag * vecs.adjoint()
    };
    // ρ̃ = (σy⊗σy) ρ* (σy⊗σy)
    let i = C::new(0.0, 1.0);
    let z = C::new(0.0, 0.0);
    let sy = M::from_row_slice(2, 2, &[z, -i, i, z]);
    let yy = sy.kronecker(&sy);
    let tilde = &yy * rho.map(|x| x.conj()) * &yy;
    let r = &sqrt_rho * tilde * &sqrt_rho;
    let r = (&r + r.adjoint()).map(|x| x * 0.5);
    let mut l: Vec<f64> = jacobi_eigenvalues(&r).into_iter().map(|x| x.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

pub fn op_norm_diff(a: &M, b: &M) -> f64 {
    let diff = a - b;
    let herm = (&diff + diff.adjoint()).map(|x| x * 0.5);
    jacobi_eigenvalues(&herm).into_iter().fold(0.0, |acc, x| acc.max(x.abs()))
}
