//! Pure tripartite states, pure bipartite states and density matrices.
//!
//! Tripartite amplitudes are stored flat with `k` fastest: the coefficient of
//! `|ijk⟩` lives at `i·d² + j·d + k`. Bipartite amplitudes are a `d_A × d_B`
//! matrix `M` with `|ψ⟩ = Σ M_ij |i⟩|j⟩`.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_deviation, hermitian_eigenvalues, CMatrix};
use crate::scalar::{cr, Real};

/// One of the three parties of a tripartite state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "usize", try_from = "usize")]
pub enum Party {
    One,
    Two,
    Three,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::One, Party::Two, Party::Three];

    /// Zero-based tensor axis.
    pub fn axis(self) -> usize {
        match self {
            Party::One => 0,
            Party::Two => 1,
            Party::Three => 2,
        }
    }

    /// One-based label, as used on the command line.
    pub fn label(self) -> usize {
        self.axis() + 1
    }

    /// The two parties other than `self`, in ascending order.
    pub fn others(self) -> (Party, Party) {
        match self {
            Party::One => (Party::Two, Party::Three),
            Party::Two => (Party::One, Party::Three),
            Party::Three => (Party::One, Party::Two),
        }
    }
}

impl TryFrom<usize> for Party {
    type Error = Error;

    fn try_from(label: usize) -> Result<Self> {
        match label {
            1 => Ok(Party::One),
            2 => Ok(Party::Two),
            3 => Ok(Party::Three),
            other => Err(Error::BadParty(other)),
        }
    }
}

impl From<Party> for usize {
    fn from(p: Party) -> usize {
        p.label()
    }
}

impl std::fmt::Display for Party {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn norm_sqr<T: Real>(amps: &[Complex<T>]) -> T {
    amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
}

/// A normalized pure state on `C^d ⊗ C^d ⊗ C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureTripartiteState<T: Real> {
    dim: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureTripartiteState<T> {
    /// Builds a state from flat amplitudes (`k` fastest).
    ///
    /// Inputs whose norm is within the ingestion tolerance of 1 are rescaled
    /// to unit norm. Anything further off is rejected unless `renormalize`
    /// is set, in which case any nonzero vector is accepted and rescaled.
    pub fn new(dim: usize, amplitudes: Vec<Complex<T>>, renormalize: bool) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        let expected = dim * dim * dim;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: amplitudes.len() });
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == T::zero() {
            return Err(Error::ZeroVector);
        }
        if !renormalize && (norm - T::one()).abs() > T::lit(T::INGEST_TOL) {
            return Err(Error::NotNormalized { norm: norm.to_f64_lossy(), tol: T::INGEST_TOL });
        }
        let inv = cr(T::one() / norm);
        let amplitudes = amplitudes.into_iter().map(|a| a * inv).collect();
        Ok(PureTripartiteState { dim, amplitudes })
    }

    /// Builds a state from a sparse list of `((i, j, k), amplitude)` terms.
    pub fn from_terms(dim: usize, terms: &[((usize, usize, usize), Complex<T>)]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        let mut amps = vec![cr(T::zero()); dim * dim * dim];
        for &((i, j, k), a) in terms {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: i.max(j).max(k) + 1 });
            }
            amps[(i * dim + j) * dim + k] += a;
        }
        Self::new(dim, amps, false)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize, j: usize, k: usize) -> Complex<T> {
        let d = self.dim;
        self.amplitudes[(i * d + j) * d + k]
    }

    pub fn norm(&self) -> T {
        norm_sqr(&self.amplitudes).sqrt()
    }

    /// Relabels parties: party `p` of the result is party `order[p]` of `self`.
    pub fn permute_parties(&self, order: [Party; 3]) -> Self {
        let d = self.dim;
        let mut out = vec![cr(T::zero()); d * d * d];
        let mut src = [0usize; 3];
        for (flat, slot) in out.iter_mut().enumerate() {
            let dst = [flat / (d * d), (flat / d) % d, flat % d];
            for (p, party) in order.iter().enumerate() {
                src[party.axis()] = dst[p];
            }
            *slot = self.amplitude(src[0], src[1], src[2]);
        }
        PureTripartiteState { dim: d, amplitudes: out }
    }

    /// Amplitudes regrouped as a matrix whose rows index the `keep` parties
    /// (ascending) and whose columns index the rest.
    fn grouped(&self, keep: &[Party]) -> CMatrix<T> {
        let d = self.dim;
        let traced: Vec<Party> = Party::ALL.iter().copied().filter(|p| !keep.contains(p)).collect();
        let rows = d.pow(keep.len() as u32);
        let cols = d.pow(traced.len() as u32);
        CMatrix::from_fn(rows, cols, |r, c| {
            let mut idx = [0usize; 3];
            let mut rest = r;
            for p in keep.iter().rev() {
                idx[p.axis()] = rest % d;
                rest /= d;
            }
            let mut rest = c;
            for p in traced.iter().rev() {
                idx[p.axis()] = rest % d;
                rest /= d;
            }
            self.amplitude(idx[0], idx[1], idx[2])
        })
    }

    /// Reduced state on the parties in `keep`, ordered ascending by party.
    pub fn partial_trace(&self, keep: &[Party]) -> Result<DensityMatrix<T>> {
        let mut keep: Vec<Party> = keep.to_vec();
        keep.sort();
        keep.dedup();
        if keep.is_empty() || keep.len() == 3 {
            return Err(Error::BadSubsystems);
        }
        let a = self.grouped(&keep);
        Ok(DensityMatrix::from_raw(&a * a.adjoint()))
    }

    /// The pure state across the cut `pivot | rest`, as a `d × d²` matrix.
    pub fn bipartition(&self, pivot: Party) -> BipartitePureState<T> {
        BipartitePureState { amplitudes: self.grouped(&[pivot]) }
    }
}

/// A normalized pure state on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitePureState<T: Real> {
    amplitudes: CMatrix<T>,
}

impl<T: Real> BipartitePureState<T> {
    /// Wraps an amplitude matrix. The Frobenius norm must be 1 within the
    /// contract tolerance.
    pub fn new(amplitudes: CMatrix<T>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroVector);
        }
        let norm = amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt();
        if (norm - T::one()).abs() > T::contract_tol() {
            return Err(Error::NotNormalized { norm: norm.to_f64_lossy(), tol: T::CONTRACT_TOL });
        }
        Ok(BipartitePureState { amplitudes })
    }

    /// Rescales any nonzero amplitude matrix to unit norm.
    pub fn normalized(amplitudes: CMatrix<T>) -> Result<Self> {
        let norm = amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt();
        if norm == T::zero() {
            return Err(Error::ZeroVector);
        }
        Ok(BipartitePureState { amplitudes: amplitudes.map(|a| a / cr(norm)) })
    }

    /// Row-major amplitudes: index `i·d_B + j` holds the coefficient of `|ij⟩`.
    pub fn from_vector(d_a: usize, d_b: usize, amplitudes: &[Complex<T>]) -> Result<Self> {
        if amplitudes.len() != d_a * d_b {
            return Err(Error::LengthMismatch { expected: d_a * d_b, actual: amplitudes.len() });
        }
        Self::new(CMatrix::from_row_slice(d_a, d_b, amplitudes))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.amplitudes.nrows(), self.amplitudes.ncols())
    }

    pub fn amplitudes(&self) -> &CMatrix<T> {
        &self.amplitudes
    }

    /// Row-major flattening, the inverse of [`Self::from_vector`].
    pub fn to_vector(&self) -> Vec<Complex<T>> {
        let (da, db) = self.dims();
        (0..da * db).map(|idx| self.amplitudes[(idx / db, idx % db)]).collect()
    }

    /// `ρ_A = M M†`.
    pub fn marginal_a(&self) -> DensityMatrix<T> {
        DensityMatrix::from_raw(&self.amplitudes * self.amplitudes.adjoint())
    }

    /// `ρ_B = Mᵀ M̄`.
    pub fn marginal_b(&self) -> DensityMatrix<T> {
        let t = self.amplitudes.transpose();
        DensityMatrix::from_raw(&t * t.adjoint())
    }

    /// `|ψ⟩⟨ψ|` on the full `d_A·d_B` space.
    pub fn projector(&self) -> DensityMatrix<T> {
        let v = CMatrix::from_column_slice(self.amplitudes.len(), 1, &self.to_vector());
        DensityMatrix::from_raw(&v * v.adjoint())
    }

    /// Applies `U ⊗ V`: `M ↦ U M Vᵀ`.
    pub fn apply_local(&self, u: &CMatrix<T>, v: &CMatrix<T>) -> Self {
        BipartitePureState { amplitudes: u * &self.amplitudes * v.transpose() }
    }
}

/// A Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    entries: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity, unit trace and positivity (eigenvalues no
    /// lower than minus the contract tolerance).
    pub fn new(entries: CMatrix<T>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare(entries.nrows(), entries.ncols()));
        }
        if entries.nrows() == 0 {
            return Err(Error::ZeroVector);
        }
        let tol = T::contract_tol();
        let dev = hermitian_deviation(&entries);
        if dev > tol {
            return Err(Error::NotHermitian(dev.to_f64_lossy()));
        }
        let trace = entries.trace();
        if (trace.re - T::one()).abs() > tol || trace.im.abs() > tol {
            return Err(Error::BadTrace(trace.re.to_f64_lossy()));
        }
        let rho = DensityMatrix { entries };
        if let Some(&lowest) = rho.eigenvalues().last() {
            if lowest < -tol {
                return Err(Error::NotPositive(lowest.to_f64_lossy()));
            }
        }
        Ok(rho)
    }

    /// For matrices built as `A A†` from normalized amplitudes.
    pub(crate) fn from_raw(entries: CMatrix<T>) -> Self {
        DensityMatrix { entries }
    }

    /// `I / n`.
    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix { entries: CMatrix::<T>::identity(n, n).map(|x| x / cr(T::lit(n as f64))) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn trace(&self) -> T {
        self.entries.trace().re
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.entries)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr())
    }

    /// Number of eigenvalues above `threshold · tr ρ`.
    pub fn rank(&self, threshold: T) -> usize {
        let cut = threshold * self.trace();
        self.eigenvalues().into_iter().filter(|&v| v > cut).count()
    }
}

/// Schmidt coefficients (probabilities, descending) with matching bases:
/// `|ψ⟩ = Σ_i √λ_i |u_i⟩|v_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition<T: Real> {
    pub coefficients: Vec<T>,
    pub left_basis: Vec<Vec<Complex<T>>>,
    pub right_basis: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SchmidtDecomposition<T> {
    /// Number of coefficients above `threshold`.
    pub fn rank(&self, threshold: T) -> usize {
        self.coefficients.iter().filter(|&&l| l > threshold).count()
    }

    /// Amplitude matrix `Σ_i √λ_i u_i v_iᵀ`.
    pub fn reconstruct(&self) -> CMatrix<T> {
        let da = self.left_basis.first().map_or(0, Vec::len);
        let db = self.right_basis.first().map_or(0, Vec::len);
        let mut m = CMatrix::zeros(da, db);
        for ((lam, u), v) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            let s = cr(lam.sqrt());
            for i in 0..da {
                for j in 0..db {
                    m[(i, j)] += s * u[i] * v[j];
                }
            }
        }
        m
    }
}

/// Schmidt decomposition via the SVD of the amplitude matrix: `λ_i = σ_i²`.
pub fn schmidt_decompose<T: Real>(state: &BipartitePureState<T>) -> SchmidtDecomposition<T> {
    let m = state.amplitudes();
    let (da, db) = state.dims();
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap_or(std::cmp::Ordering::Equal)
    });
    let coefficients = order.iter().map(|&s| svd.singular_values[s].powi(2)).collect();
    let left_basis = order.iter().map(|&s| (0..da).map(|i| u[(i, s)]).collect()).collect();
    let right_basis = order.iter().map(|&s| (0..db).map(|j| v_t[(s, j)]).collect()).collect();
    SchmidtDecomposition { coefficients, left_basis, right_basis }
}

/// Product of eigenvalues of a density matrix. Eigenvalues in the clamp
/// window `[-tol, 0)` count as zero; anything lower is an error.
pub fn psd_determinant<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let tol = T::contract_tol();
    let mut det = T::one();
    for v in rho.eigenvalues() {
        if v < -tol {
            return Err(Error::NotPositive(v.to_f64_lossy()));
        }
        det *= v.max(T::zero());
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn basis000(d: usize) -> PureTripartiteState<f64> {
        PureTripartiteState::from_terms(d, &[((0, 0, 0), cr(1.0))]).unwrap()
    }

    #[test]
    fn product_state_is_accepted() {
        let s = basis000(2);
        assert_eq!(s.amplitudes().len(), 8);
        assert_eq!(s.amplitude(0, 0, 0), cr(1.0));
    }

    #[test]
    fn flat_index_puts_k_fastest() {
        let s = PureTripartiteState::<f64>::from_terms(3, &[((0, 1, 2), cr(1.0))]).unwrap();
        assert_eq!(s.amplitudes()[5], cr(1.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            PureTripartiteState::<f64>::new(3, vec![cr(0.0); 26], false),
            Err(Error::LengthMismatch { expected: 27, actual: 26 })
        );
        assert_eq!(PureTripartiteState::<f64>::new(2, vec![cr(0.0); 8], true), Err(Error::ZeroVector));
        assert_eq!(PureTripartiteState::<f64>::new(1, vec![cr(1.0)], false), Err(Error::DimensionTooSmall(1)));
        let mut amps = vec![cr(0.0); 8];
        amps[0] = cr(1.001);
        assert!(matches!(PureTripartiteState::new(2, amps.clone(), false), Err(Error::NotNormalized { .. })));
        let s = PureTripartiteState::new(2, amps, true).unwrap();
        assert_eq!(s.norm(), 1.0);
    }

    #[test]
    fn small_drift_is_renormalized() {
        let mut amps = vec![cr(0.0); 8];
        amps[0] = cr(1.0 + 5e-7);
        let s = PureTripartiteState::new(2, amps, false).unwrap();
        assert_eq!(s.amplitude(0, 0, 0), cr(1.0));
    }

    #[test]
    fn partial_trace_rejects_empty_and_full() {
        let s = basis000(2);
        assert_eq!(s.partial_trace(&[]), Err(Error::BadSubsystems));
        assert_eq!(s.partial_trace(&Party::ALL), Err(Error::BadSubsystems));
    }

    #[test]
    fn product_state_two_party_marginal_is_pure() {
        let rho = basis000(2).partial_trace(&[Party::One, Party::Two]).unwrap();
        assert_eq!(rho.dim(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert!((rho.entries()[(i, j)] - cr(expected)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn bell_and_product_schmidt_coefficients() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = BipartitePureState::from_vector(2, 2, &[cr(h), cr(0.0), cr(0.0), cr(h)]).unwrap();
        let sd = schmidt_decompose(&bell);
        assert!((sd.coefficients[0] - 0.5).abs() < 1e-15);
        assert!((sd.coefficients[1] - 0.5).abs() < 1e-15);

        let prod = BipartitePureState::from_vector(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]).unwrap();
        let sd = schmidt_decompose(&prod);
        assert_eq!(sd.coefficients, vec![1.0, 0.0]);
        assert!((sd.reconstruct() - prod.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn bipartite_requires_unit_norm() {
        let m = CMatrix::from_row_slice(1, 2, &[cr(1.0), c(0.0, 1.0)]);
        assert!(matches!(BipartitePureState::<f64>::new(m.clone()), Err(Error::NotNormalized { .. })));
        assert!(BipartitePureState::<f64>::normalized(m).is_ok());
    }

    #[test]
    fn psd_determinant_edge_cases() {
        let mixed = DensityMatrix::<f64>::maximally_mixed(3);
        assert!((psd_determinant(&mixed).unwrap() - 1.0 / 27.0).abs() < 1e-15);

        let pure = basis000(2).partial_trace(&[Party::One]).unwrap();
        assert_eq!(psd_determinant(&pure).unwrap(), 0.0);

        let mut bad = CMatrix::<f64>::zeros(2, 2);
        bad[(0, 0)] = cr(1.5);
        bad[(1, 1)] = cr(-0.5);
        assert!(matches!(DensityMatrix::new(bad.clone()), Err(Error::NotPositive(_))));
        assert!(matches!(psd_determinant(&DensityMatrix::from_raw(bad)), Err(Error::NotPositive(_))));
    }

    #[test]
    fn tiny_negative_eigenvalue_is_clamped() {
        let mut m = CMatrix::<f64>::zeros(2, 2);
        m[(0, 0)] = cr(1.0 + 5e-11);
        m[(1, 1)] = cr(-5e-11);
        let rho = DensityMatrix::new(m).unwrap();
        assert_eq!(psd_determinant(&rho).unwrap(), 0.0);
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = CMatrix::<f64>::zeros(2, 2);
        m[(0, 0)] = cr(0.5);
        m[(1, 1)] = cr(0.5);
        m[(0, 1)] = c(0.1, 0.1);
        assert!(matches!(DensityMatrix::new(m.clone()), Err(Error::NotHermitian(_))));
        m[(1, 0)] = c(0.1, -0.1);
        assert!(DensityMatrix::new(m.clone()).is_ok());
        m[(1, 1)] = cr(0.6);
        assert!(matches!(DensityMatrix::new(m), Err(Error::BadTrace(_))));
    }

    #[test]
    fn permute_swaps_labels() {
        let s = PureTripartiteState::<f64>::from_terms(3, &[((0, 1, 2), cr(1.0))]).unwrap();
        let t = s.permute_parties([Party::Two, Party::One, Party::Three]);
        assert_eq!(t.amplitude(1, 0, 2), cr(1.0));
        let r = s.permute_parties([Party::Three, Party::One, Party::Two]);
        assert_eq!(r.amplitude(2, 0, 1), cr(1.0));
    }

    #[test]
    fn party_labels_round_trip() {
        for p in Party::ALL {
            assert_eq!(Party::try_from(p.label()).unwrap(), p);
        }
        assert_eq!(Party::try_from(0), Err(Error::BadParty(0)));
        assert_eq!(Party::try_from(4), Err(Error::BadParty(4)));
    }
}
