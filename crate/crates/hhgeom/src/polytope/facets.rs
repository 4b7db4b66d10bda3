//! Facet enumeration for full-dimensional vertex sets.
//!
//! Facets of `conv(V)` are the vertices of the polar dual taken about an
//! interior point (the vertex average), so one vertex enumeration of the
//! dual system `{y : <v_i - c, y> <= 1}` yields the complete minimal
//! halfspace description. Each dual vertex maps back to a facet normal; the
//! offset is then refit against the true vertices so facet planes interpolate
//! the data to machine accuracy rather than inheriting dual rounding.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::polytope::dd;
use crate::polytope::halfspace::Halfspace;
use crate::tol;

/// One facet: its supporting halfspace and the vertices lying on it
/// (indices into the vertex slice handed to [`facets_of`]).
#[derive(Debug, Clone, PartialEq)]
pub struct FacetData {
    pub halfspace: Halfspace,
    pub vertex_ids: Vec<usize>,
}

/// Minimal facet description of the full-dimensional polytope `conv(vertices)`.
///
/// `vertices` must be the extreme points (no duplicates, no interior points)
/// and must affinely span R^dim; otherwise the dual region degenerates and
/// an error is returned.
pub fn facets_of(vertices: &[DVector<f64>], dim: usize) -> Result<Vec<FacetData>> {
    let m = vertices.len();
    if m < dim + 1 {
        return Err(Error::Degenerate(format!(
            "{m} vertices cannot span {dim} dimensions"
        )));
    }

    let mut center = DVector::zeros(dim);
    for v in vertices {
        center += v;
    }
    center /= m as f64;

    let rays: Vec<DVector<f64>> = vertices.iter().map(|v| v - &center).collect();
    let scale = rays.iter().map(|r| r.norm()).fold(0.0f64, f64::max);
    if scale <= tol::GEOM {
        return Err(Error::Degenerate("vertex set has zero extent".into()));
    }

    let dual: Vec<Halfspace> = rays
        .iter()
        .map(|r| Halfspace::new(r.clone(), 1.0))
        .collect::<Result<_>>()
        .map_err(|_| Error::Degenerate("vertex coincides with the interior anchor".into()))?;

    // Dual vertex magnitudes are inverse distances from the anchor to the
    // facet planes; grow the enclosing box until it provably contains them.
    let mut bound = 1e3 / scale;
    let mut out = None;
    for _ in 0..3 {
        let attempt = dd::enumerate(dim, &dual, bound)?;
        if !attempt.touched_box {
            out = Some(attempt);
            break;
        }
        bound *= 100.0;
    }
    let out = out.ok_or_else(|| {
        Error::Degenerate("facet enumeration failed: dual region is unbounded".into())
    })?;
    if out.vertices.len() < dim + 1 {
        return Err(Error::Degenerate(
            "vertex set does not span the ambient dimension".into(),
        ));
    }

    let vscale = vertices.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
    let vtol = tol::GEOM * vscale;
    let mut facets = Vec::with_capacity(out.vertices.len());
    for dv in &out.vertices {
        let norm = dv.point.norm();
        if norm <= tol::GEOM / scale {
            return Err(Error::Degenerate("dual vertex at the origin".into()));
        }
        let normal = &dv.point / norm;
        let offset = vertices
            .iter()
            .map(|v| normal.dot(v))
            .fold(f64::NEG_INFINITY, f64::max);
        let vertex_ids: Vec<usize> = vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| normal.dot(v) >= offset - vtol)
            .map(|(i, _)| i)
            .collect();
        if vertex_ids.len() < dim {
            return Err(Error::Degenerate(format!(
                "facet supported by only {} of the required {} vertices",
                vertex_ids.len(),
                dim
            )));
        }
        facets.push(FacetData {
            halfspace: Halfspace {
                normal,
                offset,
            },
            vertex_ids,
        });
    }
    Ok(facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(coords)
    }

    #[test]
    fn square_has_four_facets() {
        let verts = vec![
            v(&[1.0, 1.0]),
            v(&[-1.0, 1.0]),
            v(&[-1.0, -1.0]),
            v(&[1.0, -1.0]),
        ];
        let facets = facets_of(&verts, 2).unwrap();
        assert_eq!(facets.len(), 4);
        for f in &facets {
            assert!((f.halfspace.offset - 1.0).abs() < 1e-12);
            assert_eq!(f.vertex_ids.len(), 2);
        }
    }

    #[test]
    fn cube_has_six_facets_each_with_four_vertices() {
        let mut verts = Vec::new();
        for mask in 0..8 {
            verts.push(v(&[
                if mask & 1 != 0 { 1.0 } else { -1.0 },
                if mask & 2 != 0 { 1.0 } else { -1.0 },
                if mask & 4 != 0 { 1.0 } else { -1.0 },
            ]));
        }
        let facets = facets_of(&verts, 3).unwrap();
        assert_eq!(facets.len(), 6);
        for f in &facets {
            assert_eq!(f.vertex_ids.len(), 4);
            // Axis-aligned unit normals.
            let n = &f.halfspace.normal;
            let big = n.iter().filter(|c| c.abs() > 0.5).count();
            assert_eq!(big, 1);
            assert!((f.halfspace.offset - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn octahedron_has_eight_facets() {
        let mut verts = Vec::new();
        for k in 0..3 {
            let mut p = [0.0; 3];
            p[k] = 1.0;
            verts.push(v(&p));
            p[k] = -1.0;
            verts.push(v(&p));
        }
        let facets = facets_of(&verts, 3).unwrap();
        assert_eq!(facets.len(), 8);
        for f in &facets {
            assert_eq!(f.vertex_ids.len(), 3);
            assert!((f.halfspace.offset - 1.0 / 3.0f64.sqrt()).abs() < 1e-12);
        }
    }
}
