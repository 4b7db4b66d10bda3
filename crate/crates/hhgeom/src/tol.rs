//! Centralized numeric tolerances.
//!
//! Every comparison in the crate goes through one of these constants so that
//! the accuracy contract lives in a single place. Exact combinatorial
//! geometry (hulls, facets, round trips) is held to [`GEOM`]; sampled or
//! quadrature-based quantities are held to the looser [`NUM`].

/// Tolerance for exact geometric predicates: facet tightness, vertex
/// deduplication, round-trip vertex recovery, symmetry of vertex sets.
///
/// Polytope data in this crate is O(1)-scaled and passes through short
/// chains of f64 arithmetic (dot products, small determinants, one linear
/// solve), so errors stay near 1e-13; 1e-9 leaves three orders of headroom
/// without masking genuine degeneracies.
pub const GEOM: f64 = 1e-9;

/// Tolerance for numerically estimated quantities: concavity margins along
/// sampled segments, gauge evaluations near domain edges, quadrature-vs-
/// closed-form agreement.
///
/// These values accumulate error over thousands of operations (profiles,
/// integrals), so they get two fewer digits than [`GEOM`].
pub const NUM: f64 = 1e-7;

/// Orthonormality defect allowed in a subspace frame after
/// re-orthonormalization. QR of a well-conditioned n x i matrix (n <= 8)
/// is accurate to a few ulps; 1e-12 is generous.
pub const FRAME: f64 = 1e-12;

/// Largest ambient dimension the crate accepts. Facet enumeration and
/// triangulation are exponential in the dimension; 8 keeps every operation
/// interactive while covering every case the checks need.
pub const MAX_DIM: usize = 8;

/// Scale-aware geometric tolerance: `GEOM * max(1, scale)`.
///
/// `scale` should be a magnitude representative of the data being compared
/// (e.g. the largest vertex norm), so that bodies a few orders of magnitude
/// larger than unit size are not held to an absolute 1e-9.
pub fn geom_for(scale: f64) -> f64 {
    GEOM * scale.abs().max(1.0)
}
