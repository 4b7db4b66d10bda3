//! Small dense linear-algebra helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tol;

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Returns an orthonormal basis of the span of `vectors`; linearly dependent
/// inputs are dropped. The result satisfies `|<q_i, q_j> - delta_ij| <= tol::FRAME`.
pub fn orthonormalize(vectors: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        // Two projection sweeps keep the defect near machine epsilon even
        // for nearly dependent inputs.
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&w);
                w.axpy(-c, q, 1.0);
            }
        }
        let norm = w.norm();
        if norm > 1e-12 * v.norm().max(1.0) {
            basis.push(w / norm);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `basis` in R^n.
///
/// `basis` must already be orthonormal.
pub fn orthonormal_complement(basis: &[DVector<f64>], n: usize) -> Vec<DVector<f64>> {
    let mut all: Vec<DVector<f64>> = basis.to_vec();
    let mut complement = Vec::with_capacity(n - basis.len());
    for k in 0..n {
        let mut e = DVector::zeros(n);
        e[k] = 1.0;
        for _ in 0..2 {
            for q in &all {
                let c = q.dot(&e);
                e.axpy(-c, q, 1.0);
            }
        }
        let norm = e.norm();
        if norm > 1e-10 {
            let q = e / norm;
            all.push(q.clone());
            complement.push(q);
            if complement.len() == n - basis.len() {
                break;
            }
        }
    }
    complement
}

/// Orthonormal chart for the affine hull of a point set.
///
/// Maps between ambient coordinates and coordinates on the hull:
/// `ambient = origin + frame * local`. For a full-dimensional set the frame
/// is the identity and the origin is zero, so the chart is a no-op.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChart {
    pub origin: DVector<f64>,
    /// n x d matrix with orthonormal columns spanning the hull direction.
    pub frame: DMatrix<f64>,
}

impl AffineChart {
    /// Identity chart on R^n.
    pub fn identity(n: usize) -> Self {
        AffineChart {
            origin: DVector::zeros(n),
            frame: DMatrix::identity(n, n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn is_identity(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn to_local(&self, ambient: &DVector<f64>) -> DVector<f64> {
        self.frame.tr_mul(&(ambient - &self.origin))
    }

    pub fn to_ambient(&self, local: &DVector<f64>) -> DVector<f64> {
        &self.origin + &self.frame * local
    }

    /// Distance from `ambient` to the chart's affine subspace.
    pub fn residual(&self, ambient: &DVector<f64>) -> f64 {
        let local = self.to_local(ambient);
        (self.to_ambient(&local) - ambient).norm()
    }
}

/// Orthonormal basis for the span of `columns` by Gram-Schmidt with greedy
/// column pivoting: the largest remaining residual is normalized next, and
/// the process stops once every residual is at most `cutoff`.
///
/// By construction every input column is within `cutoff` of the returned
/// span, which is the property chart construction and rank detection need;
/// a factored decomposition cannot promise this when its vectors lose
/// orthogonality.
fn pivoted_span_basis(columns: &[DVector<f64>], cutoff: f64) -> Vec<DVector<f64>> {
    let mut work: Vec<DVector<f64>> = columns.to_vec();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    loop {
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for (i, w) in work.iter().enumerate() {
            let n = w.norm();
            if n > best_norm {
                best_norm = n;
                best = i;
            }
        }
        if best_norm <= cutoff || basis.len() == columns[0].len() {
            return basis;
        }
        let q = work.swap_remove(best).unscale(best_norm);
        for w in &mut work {
            // Two sweeps keep the residuals orthogonal to q at machine
            // accuracy even when w is nearly parallel to it.
            for _ in 0..2 {
                let c = q.dot(w);
                w.axpy(-c, &q, 1.0);
            }
        }
        basis.push(q);
    }
}

/// Chart for the affine hull of `points`, from a pivoted orthonormalization
/// of the centered point matrix.
///
/// Directions whose residual falls below `tol::GEOM * scale` are treated as
/// degenerate and excluded, so the chart dimension is the numerical affine
/// dimension of the set and every input point is within that tolerance of
/// the chart subspace.
pub fn affine_chart(points: &[DVector<f64>]) -> Result<AffineChart> {
    let m = points.len();
    if m == 0 {
        return Err(Error::EmptyInput("affine_chart"));
    }
    let n = points[0].len();
    let mut origin = DVector::zeros(n);
    for p in points {
        origin += p;
    }
    origin /= m as f64;

    let scale = points
        .iter()
        .map(|p| (p - &origin).norm())
        .fold(0.0f64, f64::max);
    if scale <= tol::GEOM {
        // All points coincide: zero-dimensional hull.
        return Ok(AffineChart {
            origin,
            frame: DMatrix::zeros(n, 0),
        });
    }

    let centered: Vec<DVector<f64>> = points.iter().map(|p| p - &origin).collect();
    let basis = pivoted_span_basis(&centered, tol::GEOM * scale);
    if basis.len() == n {
        return Ok(AffineChart::identity(n));
    }
    let mut frame = DMatrix::zeros(n, basis.len());
    for (j, q) in basis.iter().enumerate() {
        frame.set_column(j, q);
    }
    Ok(AffineChart { origin, frame })
}

/// Determinant of the matrix whose columns are `vecs[i] - base`.
pub fn simplex_det(base: &DVector<f64>, vecs: &[DVector<f64>]) -> f64 {
    let d = vecs.len();
    let mut m = DMatrix::zeros(d, d);
    for (j, v) in vecs.iter().enumerate() {
        m.set_column(j, &(v - base));
    }
    m.determinant()
}

/// Numerical rank of the matrix with the given columns: the size of a
/// pivoted orthonormal basis with residual cutoff `rel` times the largest
/// column norm.
pub fn rank_of(columns: &[DVector<f64>], rel: f64) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let top = columns.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if top <= 0.0 {
        return 0;
    }
    pivoted_span_basis(columns, rel * top).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormalize_drops_dependent() {
        let v1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let v2 = DVector::from_vec(vec![1.0, 1.0, 0.0]);
        let v3 = DVector::from_vec(vec![2.0, 1.0, 0.0]); // dependent on v1, v2
        let basis = orthonormalize(&[v1, v2, v3]);
        assert_eq!(basis.len(), 2);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.dot(b) - want).abs() < tol::FRAME);
            }
        }
    }

    #[test]
    fn complement_spans_rest() {
        let q = orthonormalize(&[DVector::from_vec(vec![1.0, 2.0, 2.0, 0.0])]);
        let c = orthonormal_complement(&q, 4);
        assert_eq!(c.len(), 3);
        for v in &c {
            assert!(q[0].dot(v).abs() < tol::FRAME);
        }
    }

    #[test]
    fn chart_of_planar_points_has_dim_two() {
        let pts = vec![
            DVector::from_vec(vec![0.0, 0.0, 1.0]),
            DVector::from_vec(vec![1.0, 0.0, 1.0]),
            DVector::from_vec(vec![0.0, 1.0, 1.0]),
            DVector::from_vec(vec![1.0, 1.0, 1.0]),
        ];
        let chart = affine_chart(&pts).unwrap();
        assert_eq!(chart.dim(), 2);
        for p in &pts {
            assert!(chart.residual(p) < 1e-12);
        }
    }

    #[test]
    fn chart_interpolates_awkward_facet_triple() {
        // Three nearly isosceles points whose centered matrix once defeated a
        // factored decomposition: the chart must contain its defining points.
        let pts = vec![
            DVector::from_vec(vec![
                0.39412772187506084,
                -0.03150916733645509,
                -1.4039937275329581,
            ]),
            DVector::from_vec(vec![
                0.4219602372113364,
                0.16027319357739828,
                -1.4018782581107665,
            ]),
            DVector::from_vec(vec![
                0.29451384752728665,
                0.01097648242292193,
                -1.2177907633799268,
            ]),
        ];
        let chart = affine_chart(&pts).unwrap();
        assert_eq!(chart.dim(), 2);
        for p in &pts {
            assert!(chart.residual(p) < 1e-12, "residual {}", chart.residual(p));
        }
    }

    #[test]
    fn chart_full_dim_is_identity() {
        let pts = vec![
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
        ];
        let chart = affine_chart(&pts).unwrap();
        assert!(chart.is_identity());
    }
}
