//! Entanglement measures for qudit states built around G-concurrence.
//!
//! The numerical core ([`state`], [`measures`], [`roof`], [`zoo`]) is generic
//! over the floating-point scalar through [`Real`]; the aliases below fix it to
//! `f64`, which is what the monogamy harness, file formats and CLI use.
//!
//! ```
//! use monogamy_core::{zoo, monogamy, roof::RoofConfig, Party};
//!
//! let ghz = zoo::ghz::<f64>(3).unwrap();
//! let report = monogamy::monogamy_residual(&ghz, Party::One, &RoofConfig::default()).unwrap();
//! assert!((report.residual - 1.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod monogamy;
pub mod roof;
pub mod sampling;
pub mod scalar;
pub mod state;
pub mod zoo;

pub use error::{Error, Result};
pub use scalar::Real;
pub use state::Party;

pub type TripartiteState = state::PureTripartiteState<f64>;
pub type BipartiteState = state::BipartitePureState<f64>;
pub type Density = state::DensityMatrix<f64>;
pub type Schmidt = state::SchmidtDecomposition<f64>;
pub type Monotones = measures::MonotoneVector<f64>;
pub type G = measures::GValue<f64>;
pub type Decomposition = roof::EnsembleDecomposition<f64>;
pub type Roof = roof::RoofResult<f64>;
pub type WCoefficients = zoo::WClassCoefficients<f64>;
