//! Floating-point scalar abstraction.
//!
//! Every numerical routine in this crate is written against [`Real`], so the
//! same code runs in `f32` or `f64`. The contract tolerances scale with the
//! precision of the scalar: the published `f64` values are the ones the
//! acceptance suite pins.

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// A real floating-point scalar usable throughout the crate.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + std::fmt::Debug + 'static {
    /// Slack on internal contracts: unit norm, hermiticity, unit trace,
    /// and the negative-eigenvalue clamp window for determinants.
    const CONTRACT_TOL: f64;
    /// Allowed norm drift on user-supplied amplitudes before renormalizing.
    const INGEST_TOL: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn contract_tol() -> Self {
        Self::lit(Self::CONTRACT_TOL)
    }
}

impl Real for f64 {
    const CONTRACT_TOL: f64 = 1e-10;
    const INGEST_TOL: f64 = 1e-6;
}

impl Real for f32 {
    const CONTRACT_TOL: f64 = 1e-5;
    const INGEST_TOL: f64 = 1e-4;
}

/// `re + i·im` shorthand.
#[inline]
pub fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Real scalar promoted to a complex number.
#[inline]
pub fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
