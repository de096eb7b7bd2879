//! Concurrence monotones and G-concurrence.
//!
//! For a pure `d ⊗ d` state with Schmidt coefficients `λ` the k-th monotone is
//! `C_k = e_k(λ)^{1/k}`, `e_k` the elementary symmetric polynomial. The
//! normalized scale multiplies by `d / binom(d,k)^{1/k}` so a maximally
//! entangled state scores 1 in every slot. G-concurrence is the last slot on
//! that scale, `G = d·(∏λ)^{1/d}`, which makes `G^d = d^d det ρ_A` hold
//! identically for the marginal `ρ_A`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det, hermitian_deviation, hermitian_eigenvalues, CMatrix};
use crate::scalar::Real;
use crate::state::{psd_determinant, schmidt_decompose, BipartitePureState, DensityMatrix};

/// `C_1..C_d` on both the raw and the normalized scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneVector<T: Real> {
    pub dim: usize,
    /// `e_k(λ)^{1/k}` for `k = 1..=d`.
    pub raw: Vec<T>,
    /// `d · (e_k(λ) / binom(d,k))^{1/k}` for `k = 1..=d`.
    pub normalized: Vec<T>,
}

impl<T: Real> MonotoneVector<T> {
    /// Maclaurin's chain: `normalized[k]` is non-increasing in `k`.
    pub fn satisfies_maclaurin(&self, tol: T) -> bool {
        self.normalized.windows(2).all(|w| w[1] <= w[0] + tol)
    }

    /// The G-concurrence slot.
    pub fn g(&self) -> T {
        *self.normalized.last().expect("dim >= 1")
    }
}

/// G-concurrence together with its d-th power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GValue<T: Real> {
    pub g: T,
    pub g_pow_d: T,
}

impl<T: Real> GValue<T> {
    pub fn from_g(g: T, dim: usize) -> Self {
        GValue { g, g_pow_d: g.powi(dim as i32) }
    }

    pub fn from_pow_d(g_pow_d: T, dim: usize) -> Self {
        let g = if g_pow_d > T::zero() { g_pow_d.powf(T::one() / T::lit(dim as f64)) } else { T::zero() };
        GValue { g, g_pow_d }
    }

    pub fn zero() -> Self {
        GValue { g: T::zero(), g_pow_d: T::zero() }
    }
}

/// `e_0..e_n` of `values`.
pub fn elementary_symmetric<T: Real>(values: &[T]) -> Vec<T> {
    let mut e = vec![T::zero(); values.len() + 1];
    e[0] = T::one();
    for (count, &x) in values.iter().enumerate() {
        for k in (1..=count + 1).rev() {
            let prev = e[k - 1];
            e[k] += prev * x;
        }
    }
    e
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn square_dim<T: Real>(state: &BipartitePureState<T>) -> Result<usize> {
    let (da, db) = state.dims();
    if da != db {
        return Err(Error::NotSquare(da, db));
    }
    Ok(da)
}

fn schmidt_probabilities<T: Real>(state: &BipartitePureState<T>) -> Vec<T> {
    schmidt_decompose(state).coefficients.into_iter().map(|l| l.max(T::zero())).collect()
}

/// Monotones from a probability vector `λ` of length `d`.
pub fn monotones_from_coefficients<T: Real>(lambda: &[T]) -> MonotoneVector<T> {
    let d = lambda.len();
    let e = elementary_symmetric(lambda);
    let dt = T::lit(d as f64);
    let mut raw = Vec::with_capacity(d);
    let mut normalized = Vec::with_capacity(d);
    for k in 1..=d {
        let inv_k = T::one() / T::lit(k as f64);
        let ek = e[k].max(T::zero());
        raw.push(ek.powf(inv_k));
        normalized.push(dt * (ek / T::lit(binomial(d, k))).powf(inv_k));
    }
    MonotoneVector { dim: d, raw, normalized }
}

/// All `d` concurrence monotones of a square pure state.
pub fn concurrence_monotones<T: Real>(state: &BipartitePureState<T>) -> Result<MonotoneVector<T>> {
    square_dim(state)?;
    Ok(monotones_from_coefficients(&schmidt_probabilities(state)))
}

/// `G = d·(∏λ)^{1/d}` of a square pure state.
pub fn g_concurrence_pure<T: Real>(state: &BipartitePureState<T>) -> Result<GValue<T>> {
    let d = square_dim(state)?;
    Ok(GValue::from_g(g_from_coefficients(&schmidt_probabilities(state)), d))
}

pub(crate) fn g_from_coefficients<T: Real>(lambda: &[T]) -> T {
    let d = lambda.len();
    let prod = lambda.iter().fold(T::one(), |acc, &l| acc * l.max(T::zero()));
    if prod == T::zero() {
        return T::zero();
    }
    T::lit(d as f64) * prod.powf(T::one() / T::lit(d as f64))
}

/// `G^d = d^d det ρ` for the single-party marginal `ρ` of a globally pure
/// state. The caller vouches for global purity; for other inputs the result
/// is not the convex-roof G-concurrence.
pub fn g_concurrence_marginal<T: Real>(rho: &DensityMatrix<T>, dim: usize) -> Result<GValue<T>> {
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: rho.dim() });
    }
    let det = psd_determinant(rho)?;
    let scale = T::lit((dim as f64).powi(dim as i32));
    Ok(GValue::from_pow_d(scale * det, dim))
}

/// Outcome of the determinant superadditivity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Superadditivity<T: Real> {
    pub holds: bool,
    /// `det(X+Y) − det X − det Y`.
    pub slack: T,
}

fn check_psd<T: Real>(m: &CMatrix<T>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let tol = T::contract_tol();
    let dev = hermitian_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian(dev.to_f64_lossy()));
    }
    if let Some(&lowest) = hermitian_eigenvalues(m).last() {
        if lowest < -tol {
            return Err(Error::NotPositive(lowest.to_f64_lossy()));
        }
    }
    Ok(())
}

/// `det(X+Y) ≥ det X + det Y` for PSD `X`, `Y` of equal size.
pub fn det_superadditivity_check<T: Real>(x: &CMatrix<T>, y: &CMatrix<T>) -> Result<Superadditivity<T>> {
    check_psd(x)?;
    check_psd(y)?;
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch { expected: x.nrows(), actual: y.nrows() });
    }
    let sum = x + y;
    let slack = det(&sum).re - det(x).re - det(y).re;
    Ok(Superadditivity { holds: slack >= -T::contract_tol(), slack })
}
