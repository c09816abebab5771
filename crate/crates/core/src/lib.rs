//! Numerical toolkit for planar channel flow past the unit disk.
//!
//! The library computes and cross-verifies the explicit quantities attached
//! to the pierced rectangle `(-R,R) x (-h,h) \ B1`:
//!
//! * two-sided bounds on the optimal constant of the embedding
//!   `H^1_0 ⊂ L^4` ([`bounds`]), including the infinite-strip limit,
//! * the separated-variables upper bound on the strip built from the
//!   Jacobi elliptic cosine ([`strip`]),
//! * an explicit divergence-free extension of constant inflow data with
//!   closed-form gradient and `L^4` norms ([`extension`]),
//! * the resulting Reynolds-number threshold below which the stationary
//!   Navier-Stokes problem has a unique, mirror-symmetric weak solution
//!   ([`threshold`]),
//! * a discrete minimizer of the Sobolev quotient exhibiting the symmetry
//!   breaking of the minimizers as the channel lengthens ([`minimizer`]).
//!
//! Every closed form is checked against deterministic Gauss-Legendre panel
//! quadrature ([`quadrature`]), which acts as the independent oracle.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`];
//! the crate root exposes `f64` aliases for the report types.

pub mod bounds;
pub mod error;
pub mod extension;
pub mod geometry;
pub mod minimizer;
pub mod quadrature;
mod roots;
pub mod scalar;
pub mod specfun;
pub mod strip;
pub mod threshold;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations of the main domain types.
pub type ChannelGeometry64 = geometry::ChannelGeometry<f64>;
pub type FlowParams64 = geometry::FlowParams<f64>;
pub type StripGeometry64 = geometry::StripGeometry<f64>;
pub type SpectralConstants64 = specfun::SpectralConstants<f64>;
pub type QuadratureRule64 = quadrature::QuadratureRule<f64>;
pub type BoundsReport64 = bounds::BoundsReport<f64>;
pub type StripMinimizerResult64 = strip::StripMinimizerResult<f64>;
pub type ExtensionField64 = extension::ExtensionField<f64>;
pub type ThresholdReport64 = threshold::ThresholdReport<f64>;
pub type GridField64 = minimizer::GridField<f64>;
pub type MinimizeResult64 = minimizer::MinimizeResult<f64>;
