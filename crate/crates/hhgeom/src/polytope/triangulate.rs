//! Simplices and fan triangulation of convex polytopes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::facets::facets_of;

/// A nondegenerate d-simplex: d+1 affinely independent points in R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<DVector<f64>>,
}

impl Simplex {
    /// Validates the vertex count and affine independence.
    pub fn new(vertices: Vec<DVector<f64>>) -> Result<Simplex> {
        if vertices.is_empty() {
            return Err(Error::EmptyInput("simplex vertices"));
        }
        let d = vertices[0].len();
        if vertices.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                got: vertices.len(),
            });
        }
        for v in &vertices {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
        }
        let s = Simplex { vertices };
        if d > 0 {
            let scale = s.vertices.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
            if s.signed_volume().abs() <= 1e-14 * scale.powi(d as i32) {
                return Err(Error::Degenerate(
                    "simplex vertices are affinely dependent".into(),
                ));
            }
        }
        Ok(s)
    }

    pub(crate) fn new_unchecked(vertices: Vec<DVector<f64>>) -> Simplex {
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    fn signed_volume(&self) -> f64 {
        let d = self.dim();
        if d == 0 {
            return 1.0;
        }
        let det = linalg::simplex_det(&self.vertices[0], &self.vertices[1..]);
        let mut fact = 1.0;
        for k in 2..=d {
            fact *= k as f64;
        }
        det / fact
    }

    /// Lebesgue volume; a 0-simplex (a point in R^0) has volume 1 by the
    /// counting-measure convention.
    pub fn volume(&self) -> f64 {
        self.signed_volume().abs()
    }

    /// Barycenter (average of the vertices).
    pub fn centroid(&self) -> DVector<f64> {
        let mut c = DVector::zeros(self.dim());
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    /// Barycentric membership test: all coordinates `>= -tol`.
    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        let d = self.dim();
        if d == 0 {
            return true;
        }
        let mut m = DMatrix::zeros(d, d);
        for j in 0..d {
            m.set_column(j, &(&self.vertices[j + 1] - &self.vertices[0]));
        }
        let Some(lam) = m.lu().solve(&(x - &self.vertices[0])) else {
            return false;
        };
        lam.iter().all(|&l| l >= -tol) && lam.sum() <= 1.0 + tol
    }
}

/// Fan triangulation of a full-dimensional convex polytope given by its
/// extreme points, anchored at the vertex average.
///
/// Facets are triangulated recursively in their own hyperplane charts;
/// polygons and segments terminate the recursion without facet enumeration.
pub(crate) fn triangulate_full(vertices: &[DVector<f64>], dim: usize) -> Result<Vec<Simplex>> {
    if vertices.is_empty() {
        return Err(Error::EmptyInput("triangulate"));
    }
    if dim == 0 {
        return Ok(vec![Simplex::new_unchecked(vec![vertices[0].clone()])]);
    }
    if dim == 1 {
        let mut lo = &vertices[0];
        let mut hi = &vertices[0];
        for v in vertices {
            if v[0] < lo[0] {
                lo = v;
            }
            if v[0] > hi[0] {
                hi = v;
            }
        }
        return Ok(vec![Simplex::new_unchecked(vec![lo.clone(), hi.clone()])]);
    }
    if vertices.len() == dim + 1 {
        return Ok(vec![Simplex::new_unchecked(vertices.to_vec())]);
    }
    let mut anchor = DVector::zeros(dim);
    for v in vertices {
        anchor += v;
    }
    anchor /= vertices.len() as f64;

    if dim == 2 {
        // Convex polygon: order by angle about the interior anchor, fan over
        // the boundary edges.
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        let angle = |i: usize| -> f64 {
            let r = &vertices[i] - &anchor;
            r[1].atan2(r[0])
        };
        order.sort_by(|&a, &b| angle(a).partial_cmp(&angle(b)).unwrap());
        let mut tris = Vec::with_capacity(order.len());
        for k in 0..order.len() {
            let a = &vertices[order[k]];
            let b = &vertices[order[(k + 1) % order.len()]];
            tris.push(Simplex::new_unchecked(vec![
                anchor.clone(),
                a.clone(),
                b.clone(),
            ]));
        }
        return Ok(tris);
    }

    let facets = facets_of(vertices, dim)?;
    let mut simplices = Vec::new();
    for facet in &facets {
        let fverts: Vec<DVector<f64>> = facet
            .vertex_ids
            .iter()
            .map(|&i| vertices[i].clone())
            .collect();
        let chart = linalg::affine_chart(&fverts)?;
        if chart.dim() != dim - 1 {
            return Err(Error::Degenerate(format!(
                "facet has affine dimension {} instead of {}",
                chart.dim(),
                dim - 1
            )));
        }
        let local: Vec<DVector<f64>> = fverts.iter().map(|v| chart.to_local(v)).collect();
        for sub in triangulate_full(&local, dim - 1)? {
            let mut cone = Vec::with_capacity(dim + 1);
            cone.push(anchor.clone());
            for lv in sub.vertices() {
                cone.push(chart.to_ambient(lv));
            }
            // Slivers can appear when the anchor is coplanar with a facet of
            // a nearly degenerate body; they contribute nothing to volume.
            let s = Simplex::new_unchecked(cone);
            if s.volume() > 0.0 {
                simplices.push(s);
            }
        }
    }
    if simplices.is_empty() {
        return Err(Error::Degenerate("triangulation produced no simplices".into()));
    }
    Ok(simplices)
}

/// Total volume of a triangulation.
pub(crate) fn total_volume(simplices: &[Simplex]) -> f64 {
    simplices.iter().map(Simplex::volume).sum()
}

/// Volume-weighted centroid of a triangulation.
pub(crate) fn weighted_centroid(simplices: &[Simplex], dim: usize) -> DVector<f64> {
    let mut c = DVector::zeros(dim);
    let mut total = 0.0;
    for s in simplices {
        let v = s.volume();
        c += s.centroid() * v;
        total += v;
    }
    if total > 0.0 {
        c / total
    } else {
        // Zero-volume fallback: plain vertex average keeps the result finite.
        let mut c = DVector::zeros(dim);
        let mut k = 0usize;
        for s in simplices {
            for v in s.vertices() {
                c += v;
                k += 1;
            }
        }
        c / k as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(coords)
    }

    #[test]
    fn square_triangulates_to_full_area() {
        let verts = vec![
            v(&[1.0, 1.0]),
            v(&[-1.0, 1.0]),
            v(&[-1.0, -1.0]),
            v(&[1.0, -1.0]),
        ];
        let tris = triangulate_full(&verts, 2).unwrap();
        assert!((total_volume(&tris) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cube_volume_eight() {
        let mut verts = Vec::new();
        for mask in 0..8u32 {
            verts.push(v(&[
                if mask & 1 != 0 { 1.0 } else { -1.0 },
                if mask & 2 != 0 { 1.0 } else { -1.0 },
                if mask & 4 != 0 { 1.0 } else { -1.0 },
            ]));
        }
        let tris = triangulate_full(&verts, 3).unwrap();
        assert!((total_volume(&tris) - 8.0).abs() < 1e-10);
        let c = weighted_centroid(&tris, 3);
        assert!(c.norm() < 1e-12);
    }

    #[test]
    fn simplex_contains_and_volume() {
        let s = Simplex::new(vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        assert!((s.volume() - 0.5).abs() < 1e-15);
        assert!(s.contains(&v(&[0.2, 0.2]), 1e-12));
        assert!(!s.contains(&v(&[0.6, 0.6]), 1e-12));
    }

    #[test]
    fn degenerate_simplex_rejected() {
        assert!(Simplex::new(vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[2.0, 0.0])]).is_err());
    }
}
