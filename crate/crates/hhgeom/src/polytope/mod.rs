//! Convex polytopes in R^n (n <= 8): construction, facet structure,
//! triangulation, volume, centroid, and uniform sampling.
//!
//! A [`Polytope`] is stored in canonical V-form (extreme points only) with a
//! chart for its affine hull; facets, triangulation, volume, and centroid
//! are computed on demand and cached. Volume follows the affine-hull
//! convention: a segment in R^3 reports its length, a polygon its area. Use
//! [`Polytope::ambient_volume`] when lower-dimensional bodies should count
//! as zero instead.

mod bodies;
mod dd;
mod facets;
mod halfspace;
mod sample;
mod triangulate;

pub use bodies::{make_body, regular_polygon, unit_box, BodyFamily};
pub use facets::FacetData;
pub use halfspace::Halfspace;
pub use sample::sample_uniform;
pub(crate) use sample::{batch_rng, UniformSampler, BATCH};
pub use triangulate::Simplex;

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, AffineChart};
use crate::lp;
use crate::tol;

/// A bounded convex polytope, canonically represented by its extreme points.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<DVector<f64>>,
    chart: AffineChart,
    facets: OnceLock<Result<Vec<FacetData>>>,
    tri: OnceLock<Result<Vec<Simplex>>>,
    centroid: OnceLock<Result<DVector<f64>>>,
}

impl Polytope {
    /// Convex hull of a point list.
    ///
    /// Coincident points are deduplicated silently; redundant (non-extreme)
    /// points are removed by a per-point convex-combination feasibility
    /// test. The affine dimension of the result is recorded and may be lower
    /// than the ambient dimension.
    pub fn hull(points: &[DVector<f64>]) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::EmptyInput("hull of no points"));
        }
        let dim = points[0].len();
        if dim == 0 || dim > tol::MAX_DIM {
            return Err(Error::DimensionOutOfRange(dim));
        }
        let mut scale = 1.0f64;
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::Instance("non-finite coordinate".into()));
            }
            scale = scale.max(p.norm());
        }
        let dtol = tol::GEOM * scale;
        let mut dedup: Vec<DVector<f64>> = Vec::with_capacity(points.len());
        for p in points {
            if dedup.iter().all(|q| (q - p).norm() > dtol) {
                dedup.push(p.clone());
            }
        }

        let chart = linalg::affine_chart(&dedup)?;
        let extreme = if dedup.len() == chart.dim() + 1 {
            dedup
        } else {
            let local: Vec<DVector<f64>> = dedup.iter().map(|p| chart.to_local(p)).collect();
            let mut keep = Vec::with_capacity(dedup.len());
            for i in 0..dedup.len() {
                let others: Vec<DVector<f64>> = local
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| q.clone())
                    .collect();
                if !lp::in_convex_hull(&local[i], &others)? {
                    keep.push(dedup[i].clone());
                }
            }
            keep
        };
        if extreme.is_empty() {
            return Err(Error::Degenerate("no extreme points survived".into()));
        }
        Ok(Self::assemble(dim, extreme, chart))
    }

    /// Convenience: hull of row slices.
    pub fn hull_from_rows(rows: &[Vec<f64>]) -> Result<Polytope> {
        let pts: Vec<DVector<f64>> = rows
            .iter()
            .map(|r| DVector::from_row_slice(r))
            .collect();
        Self::hull(&pts)
    }

    /// Vertex enumeration of a halfspace intersection.
    ///
    /// Returns the empty polytope when the system is infeasible and an error
    /// when it is unbounded.
    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Polytope> {
        if halfspaces.is_empty() {
            return Err(Error::EmptyInput("halfspace list"));
        }
        if dim == 0 || dim > tol::MAX_DIM {
            return Err(Error::DimensionOutOfRange(dim));
        }
        let rows: Vec<(DVector<f64>, f64)> = halfspaces
            .iter()
            .map(|h| (h.normal.clone(), h.offset))
            .collect();
        let mut reach = 0.0f64;
        for k in 0..dim {
            let mut e = DVector::zeros(dim);
            e[k] = 1.0;
            for dir in [1.0, -1.0] {
                match lp::maximize(&(&e * dir), &rows) {
                    Ok(Some((_, val))) => reach = reach.max(val.abs()),
                    Ok(None) => return Ok(Polytope::empty(dim)),
                    Err(Error::LpStalled) => {
                        return Err(Error::Degenerate(
                            "halfspace intersection is unbounded".into(),
                        ))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Self::from_halfspaces_bounded(dim, halfspaces, reach * 1.1 + 1.0)
    }

    /// Vertex enumeration when a bounding radius for the region is already
    /// known (skips the boundedness linear programs).
    pub(crate) fn from_halfspaces_bounded(
        dim: usize,
        halfspaces: &[Halfspace],
        bound: f64,
    ) -> Result<Polytope> {
        let out = dd::enumerate(dim, halfspaces, bound)?;
        if out.touched_box {
            return Err(Error::Degenerate(
                "halfspace intersection exceeded its bounding box".into(),
            ));
        }
        if out.vertices.is_empty() {
            return Ok(Polytope::empty(dim));
        }
        let pts: Vec<DVector<f64>> = out.vertices.into_iter().map(|v| v.point).collect();
        // Enumeration can emit near-duplicate points straddling a degenerate
        // vertex of the region; hull() filters to true extreme points, which
        // later facet enumeration requires.
        Self::hull(&pts)
    }

    /// The empty polytope in R^dim (no points; volume zero).
    pub fn empty(dim: usize) -> Polytope {
        Polytope {
            dim,
            vertices: Vec::new(),
            chart: AffineChart::identity(dim),
            facets: OnceLock::new(),
            tri: OnceLock::new(),
            centroid: OnceLock::new(),
        }
    }

    fn assemble(dim: usize, vertices: Vec<DVector<f64>>, chart: AffineChart) -> Polytope {
        Polytope {
            dim,
            vertices,
            chart,
            facets: OnceLock::new(),
            tri: OnceLock::new(),
            centroid: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Chart of the affine hull (identity for full-dimensional bodies).
    pub fn chart(&self) -> &AffineChart {
        &self.chart
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.chart.dim()
        }
    }

    pub fn is_full_dim(&self) -> bool {
        !self.is_empty() && self.chart.dim() == self.dim
    }

    /// Largest vertex norm (0 for the empty polytope); the scale used for
    /// relative tolerances.
    pub fn vertex_scale(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Facets in affine-hull chart coordinates; for full-dimensional bodies
    /// these are the ambient facets.
    pub fn facets(&self) -> Result<&[FacetData]> {
        if self.is_empty() {
            return Err(Error::EmptyInput("facets of the empty polytope"));
        }
        let r = self.facets.get_or_init(|| {
            let local: Vec<DVector<f64>> = if self.chart.is_identity() {
                self.vertices.clone()
            } else {
                self.vertices.iter().map(|v| self.chart.to_local(v)).collect()
            };
            if self.chart.dim() == 0 {
                return Err(Error::Degenerate(
                    "a single point has no facet description".into(),
                ));
            }
            if self.chart.dim() == 1 {
                // A segment in its chart: two endpoint constraints.
                let xs: Vec<f64> = local.iter().map(|p| p[0]).collect();
                let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lo_id = xs.iter().position(|&x| x == lo).unwrap();
                let hi_id = xs.iter().position(|&x| x == hi).unwrap();
                return Ok(vec![
                    FacetData {
                        halfspace: Halfspace {
                            normal: DVector::from_vec(vec![1.0]),
                            offset: hi,
                        },
                        vertex_ids: vec![hi_id],
                    },
                    FacetData {
                        halfspace: Halfspace {
                            normal: DVector::from_vec(vec![-1.0]),
                            offset: -lo,
                        },
                        vertex_ids: vec![lo_id],
                    },
                ]);
            }
            facets::facets_of(&local, self.chart.dim())
        });
        match r {
            Ok(f) => Ok(f),
            Err(e) => Err(e.clone()),
        }
    }

    /// Minimal halfspace description in ambient coordinates.
    ///
    /// Errors for lower-dimensional bodies, whose ambient description would
    /// need equality constraints.
    pub fn hrep(&self) -> Result<&[FacetData]> {
        if !self.is_full_dim() {
            return Err(Error::Degenerate(
                "halfspace description requires a full-dimensional body".into(),
            ));
        }
        self.facets()
    }

    /// Fan triangulation in chart coordinates (ambient coordinates for
    /// full-dimensional bodies). Simplices partition the body up to a
    /// measure-zero overlap.
    pub fn triangulation(&self) -> Result<&[Simplex]> {
        if self.is_empty() {
            return Err(Error::EmptyInput("triangulation of the empty polytope"));
        }
        let r = self.tri.get_or_init(|| {
            let local: Vec<DVector<f64>> = if self.chart.is_identity() {
                self.vertices.clone()
            } else {
                self.vertices.iter().map(|v| self.chart.to_local(v)).collect()
            };
            triangulate::triangulate_full(&local, self.chart.dim())
        });
        match r {
            Ok(t) => Ok(t),
            Err(e) => Err(e.clone()),
        }
    }

    /// Volume in the affine-hull convention: computed within aff(K), so a
    /// segment in R^3 reports its length. The empty polytope has volume 0;
    /// a single point has volume 1 (counting measure on a 0-dimensional
    /// hull).
    pub fn volume(&self) -> Result<f64> {
        if self.is_empty() {
            return Ok(0.0);
        }
        Ok(triangulate::total_volume(self.triangulation()?))
    }

    /// Volume as a full-dimensional subset of the ambient space: zero for
    /// anything of lower affine dimension.
    pub fn ambient_volume(&self) -> Result<f64> {
        if !self.is_full_dim() {
            return Ok(0.0);
        }
        self.volume()
    }

    /// Volume-weighted centroid (vertex average when the body has zero
    /// volume in its own affine hull).
    pub fn centroid(&self) -> Result<DVector<f64>> {
        if self.is_empty() {
            return Err(Error::EmptyInput("centroid of the empty polytope"));
        }
        let r = self.centroid.get_or_init(|| {
            if self.chart.dim() == 0 {
                return Ok(self.vertices[0].clone());
            }
            let tri = self.triangulation()?;
            let local = triangulate::weighted_centroid(tri, self.chart.dim());
            Ok(if self.chart.is_identity() {
                local
            } else {
                self.chart.to_ambient(&local)
            })
        });
        match r {
            Ok(c) => Ok(c.clone()),
            Err(e) => Err(e.clone()),
        }
    }

    /// Support function `h(K, u) = max_x <u, x>`.
    pub fn support(&self, direction: &DVector<f64>) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyInput("support of the empty polytope"));
        }
        if direction.norm() <= 1e-14 {
            return Err(Error::ZeroDirection);
        }
        Ok(self
            .vertices
            .iter()
            .map(|v| direction.dot(v))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Membership test with absolute tolerance `tol` on facet distances.
    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        if self.is_empty() {
            return Ok(false);
        }
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if self.chart.dim() == 0 {
            return Ok((x - &self.vertices[0]).norm() <= tol);
        }
        if !self.chart.is_identity() && self.chart.residual(x) > tol {
            return Ok(false);
        }
        let local = if self.chart.is_identity() {
            x.clone()
        } else {
            self.chart.to_local(x)
        };
        Ok(self
            .facets()?
            .iter()
            .all(|f| f.halfspace.contains(&local, tol)))
    }

    /// Is the vertex set symmetric about the origin?
    pub fn is_zero_symmetric(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        let tol = tol::geom_for(self.vertex_scale());
        self.vertices.iter().all(|v| {
            let neg = -v;
            self.vertices.iter().any(|w| (w - &neg).norm() <= tol)
        })
    }

    /// Image under `x -> a x + t`, re-hulled (so `a` may be singular).
    pub fn affine_image(&self, a: &DMatrix<f64>, t: &DVector<f64>) -> Result<Polytope> {
        if self.is_empty() {
            return Ok(Polytope::empty(t.len()));
        }
        let pts: Vec<DVector<f64>> = self.vertices.iter().map(|v| a * v + t).collect();
        Polytope::hull(&pts)
    }

    /// Translate by `t`; extremeness is preserved, so no re-hull is needed.
    pub fn translate(&self, t: &DVector<f64>) -> Result<Polytope> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: t.len(),
            });
        }
        if self.is_empty() {
            return Ok(Polytope::empty(self.dim));
        }
        let vertices: Vec<DVector<f64>> = self.vertices.iter().map(|v| v + t).collect();
        let chart = linalg::affine_chart(&vertices)?;
        Ok(Self::assemble(self.dim, vertices, chart))
    }

    /// Do two polytopes have the same vertex set up to `tol`?
    pub fn same_vertex_set(&self, other: &Polytope, tol: f64) -> bool {
        if self.dim != other.dim || self.vertices.len() != other.vertices.len() {
            return false;
        }
        self.vertices.iter().all(|v| {
            other.vertices.iter().any(|w| (v - w).norm() <= tol)
        })
    }
}
