//! Seeded random states, unitaries and density matrices.
//!
//! All randomness flows from `ChaCha8Rng` seeded through [`derive_seed`], so a
//! `(seed, index, ...)` tuple always reproduces the same draw regardless of
//! thread scheduling.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, CMatrix};
use crate::scalar::Real;
use crate::state::{BipartitePureState, DensityMatrix, PureTripartiteState};

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed from a root seed and a path of indices.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(seed), |acc, &p| mix(acc ^ mix(p)))
}

/// The generator used everywhere in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard complex Gaussian, `E|z|² = 2`.
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    let entries: Vec<Complex<T>> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    CMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed `n × n` unitary (QR of a Ginibre matrix with the
/// phase convention of [`orthonormalize`]).
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    orthonormalize(ginibre(n, n, rng))
}

/// Haar-random `rows × cols` matrix with orthonormal columns.
pub fn random_isometry<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    orthonormalize(ginibre(rows, cols, rng))
}

/// Haar-random pure state on `C^d ⊗ C^d ⊗ C^d`: i.i.d. complex Gaussian
/// amplitudes, normalized. Deterministic in `seed`.
pub fn haar_random_tripartite<T: Real>(dim: usize, seed: u64) -> Result<PureTripartiteState<T>> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let mut rng = rng_from_seed(seed);
    let amps = (0..dim * dim * dim).map(|_| complex_gaussian(&mut rng)).collect();
    PureTripartiteState::new(dim, amps, true)
}

/// Haar-random pure state on `C^{d_A} ⊗ C^{d_B}`.
pub fn haar_random_bipartite<T: Real, R: Rng + ?Sized>(d_a: usize, d_b: usize, rng: &mut R) -> BipartitePureState<T> {
    BipartitePureState::normalized(ginibre(d_a, d_b, rng)).expect("Gaussian draw is nonzero")
}

/// Random density matrix `A A† / tr(A A†)` with `A` an `n × rank` Ginibre
/// matrix.
pub fn random_density_matrix<T: Real, R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> DensityMatrix<T> {
    let a = ginibre::<T, _>(n, rank, rng);
    let raw = &a * a.adjoint();
    let tr = raw.trace();
    DensityMatrix::from_raw(raw.map(|x| x / tr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(7, &[0]);
        let b = derive_seed(7, &[1]);
        let c = derive_seed(8, &[0]);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(7, &[0]));
        assert_ne!(derive_seed(7, &[0, 1]), derive_seed(7, &[1, 0]));
    }

    #[test]
    fn haar_state_is_seeded() {
        let a = haar_random_tripartite::<f64>(3, 1).unwrap();
        let b = haar_random_tripartite::<f64>(3, 1).unwrap();
        let c = haar_random_tripartite::<f64>(3, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(haar_random_tripartite::<f64>(1, 0), Err(Error::DimensionTooSmall(1)));
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rng_from_seed(3);
        let u = haar_unitary::<f64, _>(4, &mut rng);
        assert!(crate::linalg::orthonormality_defect(&u) < 1e-13);
    }
}
