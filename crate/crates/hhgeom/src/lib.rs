//! Convex-geometry toolkit for sharp volume and concavity inequalities.
//!
//! The crate builds polytopes in up to eight dimensions, takes their
//! projections, sections, and Schwarz symmetrizations, integrates concave
//! functions composed with convex gauges over them, and verifies a family of
//! Hermite-Hadamard-type inequalities with certified tolerances, including
//! the sharp slab bound with constant `2^n / n` and its equality bodies.
//!
//! ```
//! use hhgeom::polytope::{make_body, BodyFamily};
//!
//! let cube = make_body(&BodyFamily::Cube { dim: 3 }).unwrap();
//! assert_eq!(cube.vertex_count(), 8);
//! assert!((cube.volume().unwrap() - 8.0).abs() < 1e-12);
//! ```

pub mod concave;
pub mod error;
pub mod functional;
pub mod gauge;
pub mod guide;
pub mod integrate;
pub mod jsonio;
pub mod linalg;
pub(crate) mod lp;
pub mod marginals;
pub mod polytope;
pub mod report;
pub mod subspace;
pub mod symmetrize;
pub mod tol;
pub mod verify;

pub use concave::ConcaveFn;
pub use error::{Error, Result};
pub use gauge::ConvexGauge;
pub use integrate::{IntegralEstimate, IntegrationMethod};
pub use polytope::Polytope;
pub use report::{InequalityReport, Verdict};
pub use subspace::Subspace;
