//! Small dense complex kernels shared by the state, measure and roof code.

use nalgebra::{Complex, ComplexField, DMatrix, SymmetricEigen};

use crate::scalar::{cr, Real};

pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Eigenvalues of a Hermitian matrix, descending. Only the lower triangle is
/// read, so callers should check hermiticity first.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut vals: Vec<T> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    vals
}

/// Eigenpairs of a Hermitian matrix, sorted by descending eigenvalue.
/// Column `k` of the returned matrix is the eigenvector of `values[k]`.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Largest entrywise deviation `|m - m†|`.
pub fn hermitian_deviation<T: Real>(m: &CMatrix<T>) -> T {
    let mut worst = T::zero();
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let dev = (m[(i, j)] - m[(j, i)].conj()).modulus();
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}

/// Determinant of the `n × n` row-major matrix in `buf` by Gaussian
/// elimination with partial pivoting. `buf` is overwritten.
pub fn det_in_place<T: Real>(buf: &mut [Complex<T>], n: usize) -> Complex<T> {
    debug_assert_eq!(buf.len(), n * n);
    let mut det = cr(T::one());
    for col in 0..n {
        let mut pivot = col;
        let mut best = buf[col * n + col].norm_sqr();
        for row in col + 1..n {
            let mag = buf[row * n + col].norm_sqr();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best == T::zero() {
            return cr(T::zero());
        }
        if pivot != col {
            for k in 0..n {
                buf.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let p = buf[col * n + col];
        det *= p;
        let inv = cr(T::one()) / p;
        for row in col + 1..n {
            let factor = buf[row * n + col] * inv;
            if factor == cr(T::zero()) {
                continue;
            }
            for k in col + 1..n {
                let sub = factor * buf[col * n + k];
                buf[row * n + k] -= sub;
            }
        }
    }
    det
}

/// Determinant of a square complex matrix.
pub fn det<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    let n = m.nrows();
    let mut buf: Vec<Complex<T>> = (0..n * n).map(|idx| m[(idx / n, idx % n)]).collect();
    det_in_place(&mut buf, n)
}

/// Q factor of the thin QR decomposition, with column phases chosen so that
/// `R` has a non-negative real diagonal. The phase choice makes the map
/// continuous, so `orthonormalize(U + εZ) → U` as `ε → 0` for orthonormal `U`.
pub fn orthonormalize<T: Real>(m: CMatrix<T>) -> CMatrix<T> {
    let cols = m.ncols();
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let diag = r[(j, j)];
        let modulus = diag.modulus();
        if modulus > T::zero() {
            let phase = diag / cr(modulus);
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Max entrywise deviation of `m† m` from the identity.
pub fn orthonormality_defect<T: Real>(m: &CMatrix<T>) -> T {
    let gram = m.adjoint() * m;
    let mut worst = T::zero();
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { cr(T::one()) } else { cr(T::zero()) };
            let dev = (gram[(i, j)] - target).modulus();
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}

/// Spectral norm of a Hermitian matrix (largest absolute eigenvalue).
pub fn hermitian_operator_norm<T: Real>(m: &CMatrix<T>) -> T {
    hermitian_eigenvalues(m).into_iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}
