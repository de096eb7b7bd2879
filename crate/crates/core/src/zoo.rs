//! Named tripartite states: GHZ, the antisymmetric qutrit state `|χ⟩`, and the
//! generalized W class on three qutrits.

use nalgebra::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling::complex_gaussian;
use crate::scalar::{cr, Real};
use crate::state::PureTripartiteState;

/// `(1/√d) Σ_i |iii⟩`.
pub fn ghz<T: Real>(dim: usize) -> Result<PureTripartiteState<T>> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let a = cr(T::one() / T::lit(dim as f64).sqrt());
    let terms: Vec<_> = (0..dim).map(|i| ((i, i, i), a)).collect();
    PureTripartiteState::from_terms(dim, &terms)
}

/// `(|012⟩ − |021⟩ + |120⟩ − |102⟩ + |201⟩ − |210⟩)/√6`, the totally
/// antisymmetric state of three qutrits.
pub fn antisymmetric_chi<T: Real>() -> PureTripartiteState<T> {
    let a = T::one() / T::lit(6.0).sqrt();
    let (plus, minus) = (cr(a), cr(-a));
    PureTripartiteState::from_terms(
        3,
        &[
            ((0, 1, 2), plus),
            ((0, 2, 1), minus),
            ((1, 2, 0), plus),
            ((1, 0, 2), minus),
            ((2, 0, 1), plus),
            ((2, 1, 0), minus),
        ],
    )
    .expect("unit-norm constant state")
}

/// Coefficients `a_{ij}` of the generalized W-class state: party `i ∈ {1,2,3}`
/// is excited to level `j ∈ {1,2}` while the others sit in `|0⟩`.
/// Stored zero-based as `a[i-1][j-1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WClassCoefficients<T: Real> {
    pub a: [[Complex<T>; 2]; 3],
}

impl<T: Real> WClassCoefficients<T> {
    /// All six coefficients equal to `1/√6`: the W state.
    pub fn uniform() -> Self {
        let a = cr(T::one() / T::lit(6.0).sqrt());
        WClassCoefficients { a: [[a; 2]; 3] }
    }

    /// Normalized complex Gaussian coefficients.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut a = [[cr(T::zero()); 2]; 3];
        a.iter_mut().flatten().for_each(|x| *x = complex_gaussian(rng));
        let norm = a.iter().flatten().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt();
        a.iter_mut().flatten().for_each(|x| *x /= cr(norm));
        WClassCoefficients { a }
    }

    pub fn norm_sqr(&self) -> T {
        self.a.iter().flatten().fold(T::zero(), |acc, x| acc + x.norm_sqr())
    }
}

/// `a11|100⟩ + a12|200⟩ + a21|010⟩ + a22|020⟩ + a31|001⟩ + a32|002⟩`.
pub fn w_class<T: Real>(coeffs: &WClassCoefficients<T>) -> Result<PureTripartiteState<T>> {
    let norm = coeffs.norm_sqr().sqrt();
    if (norm - T::one()).abs() > T::contract_tol() {
        return Err(Error::NotNormalized { norm: norm.to_f64_lossy(), tol: T::CONTRACT_TOL });
    }
    let mut terms = Vec::with_capacity(6);
    for (party, levels) in coeffs.a.iter().enumerate() {
        for (level, &amp) in levels.iter().enumerate() {
            let mut idx = [0usize; 3];
            idx[party] = level + 1;
            terms.push(((idx[0], idx[1], idx[2]), amp));
        }
    }
    PureTripartiteState::from_terms(3, &terms)
}

/// States reachable by name from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZooState {
    Ghz,
    Chi,
    W,
}

impl std::str::FromStr for ZooState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ghz" => Ok(ZooState::Ghz),
            "chi" => Ok(ZooState::Chi),
            "w" => Ok(ZooState::W),
            other => Err(Error::Config(format!("unknown zoo state `{other}` (expected ghz, chi or w)"))),
        }
    }
}

impl ZooState {
    /// Builds the named state. `dim` only affects GHZ; `chi` and `w` are
    /// qutrit states and reject any other explicit dimension.
    pub fn build<T: Real>(self, dim: Option<usize>) -> Result<PureTripartiteState<T>> {
        match (self, dim) {
            (ZooState::Ghz, d) => ghz(d.unwrap_or(3)),
            (ZooState::Chi, None | Some(3)) => Ok(antisymmetric_chi()),
            (ZooState::W, None | Some(3)) => w_class(&WClassCoefficients::uniform()),
            (_, Some(d)) => Err(Error::WrongDimension { expected: 3, actual: d }),
        }
    }
}
