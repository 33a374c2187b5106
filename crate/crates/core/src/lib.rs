//! Numerical laboratory for Toeplitz operators on truncated holomorphic,
//! anti-holomorphic and pluriharmonic Bergman and Segal-Bargmann spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`spaces`]: domains, weights, orthonormal monomial bases, kernels, metrics.
//! * [`quadrature`]: tensor Gauss rules exact for `dv_λ` moments.
//! * [`symbol`]: a small expression language for symbol functions.
//! * [`operators`]: truncated Toeplitz matrices, block maps, (semi-)commutators.
//! * [`berezin`]: Berezin transforms of symbols and operators, oscillation diagnostics.
//! * [`asymptotics`]: λ-sweeps probing the quantization properties.
//! * [`spectral`]: essential-spectrum estimates and the `𝔹²` block decomposition.
//! * [`report`]: CSV and JSON emission shared by the CLI.

pub mod asymptotics;
pub mod berezin;
mod error;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod spaces;
pub mod special;
pub mod spectral;
pub mod symbol;

pub use error::{Error, Result};
pub use nalgebra::{Complex, DMatrix, DVector};
pub use operators::{BlockMap, OperatorMatrix};
pub use quadrature::QuadratureRule;
pub use spaces::{BasisIndex, DomainKind, Point, SpaceFlavor, SpaceSpec, Truncation};
pub use symbol::{Symbol, SymbolExpr};

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;

/// Version string embedded in every emitted report.
pub const VERSION: &str = concat!("plurispec ", env!("CARGO_PKG_VERSION"));
