//! Stable norms of flat slit tori.
//!
//! The library computes the stable norm on the square torus with a vertical
//! slit (and on sheared, rational-slit, and irrational-slit tori, and on
//! half-translation surfaces glued from them) through Farey-sequence closed
//! forms, and cross-validates every formula against a brute-force
//! shortest-path oracle on the abelian cover.
//!
//! All combinatorial decisions are exact; lengths are generic over the
//! floating-point width through [`scalar::Float`], with `f64` aliases at
//! the crate root.
//!
//! ```
//! use slit_norm::{CoverScene, HClass, Rational, VerticalSlitTorus};
//!
//! let rho: Rational = "2/5".parse().unwrap();
//! let torus = VerticalSlitTorus::new(rho.clone()).unwrap();
//!
//! // (3,1) is not visible; its minimizer bends once at a slit endpoint.
//! let cert = torus.stable_norm::<f64>(HClass::new(3, 1)).unwrap();
//! assert!((cert.value - 3.165094).abs() < 1e-6);
//!
//! // The shortest-path oracle on the abelian cover agrees.
//! let scene = CoverScene::vertical(rho).unwrap();
//! let observed = scene.oracle_norm::<f64>(HClass::new(3, 1)).unwrap();
//! assert!((observed - cert.value).abs() < 1e-9);
//! ```

// Error payloads carry exact rationals for diagnostics.
#![allow(clippy::result_large_err)]

pub mod ball;
pub mod counting;
pub mod farey;
pub mod general;
pub mod glued;
pub mod oracle;
pub mod scalar;
pub mod torus;

pub use farey::{FareyError, Rational};
pub use oracle::{CoverScene, OracleError, PathResult};
pub use scalar::Float;
pub use torus::{CertificateKind, DirectionKind, HClass, NormCertificate, NormError, VerticalSlitTorus};

/// Double-precision aliases for the generic result types.
pub type Certificate64 = NormCertificate<f64>;
pub type Path64 = PathResult<f64>;
pub type VertexList64 = ball::VertexList<f64>;
pub type GluedNorm64 = glued::GluedNorm<f64>;

/// Single-precision variants.
pub type Certificate32 = NormCertificate<f32>;
pub type Path32 = PathResult<f32>;
