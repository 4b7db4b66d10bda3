//! Vertex enumeration of bounded halfspace intersections by the double
//! description method.
//!
//! The region is intersected with a large bounding box, whose corners seed
//! the vertex list; constraints are then inserted one at a time. Each vertex
//! carries the set of constraints tight at it, and two surviving vertices
//! are recognized as edge-adjacent when their common tight normals span a
//! hyperplane (rank d-1). That algebraic test keeps the enumeration correct
//! on degenerate inputs (cubes, prisms, cones) where vertices lie on more
//! than d facets.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::halfspace::Halfspace;
use crate::tol;

/// A vertex of the intersection together with the indices of the input
/// halfspaces tight at it (box constraints excluded, sorted ascending).
#[derive(Debug, Clone)]
pub struct DdVertex {
    pub point: DVector<f64>,
    /// Read by consumers that need incidence (and by the unit tests); facet
    /// enumeration rescans tightness after refitting offsets instead.
    #[allow(dead_code)]
    pub tight: Vec<u32>,
}

#[derive(Debug)]
pub struct DdOutput {
    pub vertices: Vec<DdVertex>,
    /// True when some final vertex is supported by a bounding-box facet,
    /// i.e. the box was too small (or the input region is unbounded).
    pub touched_box: bool,
}

struct Candidate {
    point: DVector<f64>,
    tight: Vec<u32>, // over box indices 0..2d followed by inputs 2d..
}

/// Enumerate the vertices of `{x : <a_k, x> <= b_k} /\ [-bound, bound]^d`.
///
/// `bound` must strictly enclose the (bounded) input region for the result
/// to describe it exactly; `touched_box` reports when it does not.
pub fn enumerate(dim: usize, halfspaces: &[Halfspace], bound: f64) -> Result<DdOutput> {
    if dim == 0 || dim > tol::MAX_DIM {
        return Err(Error::DimensionOutOfRange(dim));
    }
    for h in halfspaces {
        if h.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: h.dim(),
            });
        }
    }

    // Classification tolerance: membership evaluations are signed distances
    // (unit normals), with rounding proportional to the coordinate scale.
    let etol = tol::GEOM * (1.0 + 1e-3 * bound);
    let dedup = etol;

    // Box corners; box constraint 2k is x_k <= bound, 2k+1 is -x_k <= bound.
    let nbox = 2 * dim;
    let mut verts: Vec<Candidate> = Vec::with_capacity(1 << dim);
    for mask in 0..(1usize << dim) {
        let mut p = DVector::zeros(dim);
        let mut tight = Vec::with_capacity(dim);
        for k in 0..dim {
            if mask & (1 << k) != 0 {
                p[k] = bound;
                tight.push(2 * k as u32);
            } else {
                p[k] = -bound;
                tight.push(2 * k as u32 + 1);
            }
        }
        tight.sort_unstable();
        verts.push(Candidate { point: p, tight });
    }

    // All constraint normals, box first, for the adjacency rank test.
    let mut normals: Vec<DVector<f64>> = Vec::with_capacity(nbox + halfspaces.len());
    for k in 0..dim {
        let mut e = DVector::zeros(dim);
        e[k] = 1.0;
        normals.push(e.clone());
        normals.push(-e);
    }

    for (raw_idx, h) in halfspaces.iter().enumerate() {
        let idx = (nbox + raw_idx) as u32;
        normals.push(h.normal.clone());

        let evals: Vec<f64> = verts.iter().map(|v| h.signed_distance(&v.point)).collect();
        let any_out = evals.iter().any(|&e| e > etol);
        if !any_out {
            // Constraint is redundant or merely touching: record tightness.
            for (v, &e) in verts.iter_mut().zip(&evals) {
                if e.abs() <= etol {
                    insert_sorted(&mut v.tight, idx);
                }
            }
            continue;
        }
        let any_kept = evals.iter().any(|&e| e <= etol);
        if !any_kept {
            return Ok(DdOutput {
                vertices: Vec::new(),
                touched_box: false,
            });
        }

        let mut next: Vec<Candidate> = Vec::with_capacity(verts.len());
        let ins: Vec<usize> = (0..verts.len()).filter(|&i| evals[i] < -etol).collect();
        let outs: Vec<usize> = (0..verts.len()).filter(|&i| evals[i] > etol).collect();

        // Crossing edges spawn the new vertices on the cutting hyperplane.
        for &iu in &ins {
            for &iw in &outs {
                let common = intersect_sorted(&verts[iu].tight, &verts[iw].tight);
                if common.len() < dim - 1 {
                    continue;
                }
                if dim > 1 && !spans_hyperplane(&common, &normals, dim) {
                    continue;
                }
                let (eu, ew) = (evals[iu], evals[iw]);
                let lambda = eu / (eu - ew);
                let point = &verts[iu].point + (&verts[iw].point - &verts[iu].point) * lambda;
                let mut tight = common;
                insert_sorted(&mut tight, idx);
                next.push(Candidate { point, tight });
            }
        }

        for (i, v) in verts.into_iter().enumerate() {
            if evals[i] > etol {
                continue;
            }
            let mut v = v;
            if evals[i].abs() <= etol {
                insert_sorted(&mut v.tight, idx);
            }
            next.push(v);
        }

        // Merge coincident points; degenerate cuts reach the same geometric
        // vertex along several edges and the union of their tight sets is
        // the honest description.
        verts = merge_duplicates(next, dedup);
    }

    // Chained edge interpolation accumulates rounding well above machine
    // precision, so each vertex is re-solved from its tight constraints by
    // least squares before being handed out. Points that converge onto the
    // same polished vertex are merged once more.
    for v in &mut verts {
        polish(v, &normals, halfspaces, nbox, bound);
    }
    let verts = merge_duplicates(verts, dedup);

    let mut touched_box = false;
    let vertices = verts
        .into_iter()
        .map(|v| {
            let mut tight = Vec::with_capacity(v.tight.len());
            for &t in &v.tight {
                if (t as usize) < nbox {
                    touched_box = true;
                } else {
                    tight.push(t - nbox as u32);
                }
            }
            DdVertex {
                point: v.point,
                tight,
            }
        })
        .collect();
    Ok(DdOutput {
        vertices,
        touched_box,
    })
}

/// Least-squares re-solve of a vertex from its tight constraints. Rows are
/// unit normals with residuals at classification-tolerance scale, so the
/// correction is tiny wherever the tight system is well conditioned; the
/// singular-value cutoff leaves ill-determined directions where the
/// enumeration put them, and a wildly large correction is dropped entirely.
fn polish(v: &mut Candidate, normals: &[DVector<f64>], halfspaces: &[Halfspace], nbox: usize, bound: f64) {
    let dim = v.point.len();
    if v.tight.len() < dim {
        return;
    }
    let mut a = DMatrix::zeros(v.tight.len(), dim);
    let mut r = DVector::zeros(v.tight.len());
    for (j, &t) in v.tight.iter().enumerate() {
        let t = t as usize;
        let offset = if t < nbox {
            bound
        } else {
            halfspaces[t - nbox].offset
        };
        a.set_row(j, &normals[t].transpose());
        r[j] = offset - normals[t].dot(&v.point);
    }
    let svd = a.svd(true, true);
    if let Ok(delta) = svd.solve(&r, 1e-9) {
        let dn = delta.norm();
        if dn.is_finite() && dn <= 1e-3 * (1.0 + v.point.norm()) {
            v.point += delta;
        }
    }
}

/// Do the normals indexed by `tight` span a (d-1)-dimensional space?
fn spans_hyperplane(tight: &[u32], normals: &[DVector<f64>], dim: usize) -> bool {
    let cols: Vec<DVector<f64>> = tight.iter().map(|&i| normals[i as usize].clone()).collect();
    linalg::rank_of(&cols, 1e-9) >= dim - 1
}

fn insert_sorted(v: &mut Vec<u32>, x: u32) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn union_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

fn merge_duplicates(cands: Vec<Candidate>, dedup: f64) -> Vec<Candidate> {
    let mut merged: Vec<Candidate> = Vec::with_capacity(cands.len());
    'outer: for c in cands {
        for m in &mut merged {
            if (&m.point - &c.point).norm() <= dedup {
                m.tight = union_sorted(&m.tight, &c.tight);
                continue 'outer;
            }
        }
        merged.push(c);
    }
    merged
}
