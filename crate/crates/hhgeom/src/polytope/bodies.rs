//! Catalog of test bodies: the structured families every check exercises.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::tol;

/// Recipe for a polytope from one of the supported families.
///
/// Families with nested bodies take them as already-built polytopes of the
/// appropriate ambient dimension.
#[derive(Debug, Clone)]
pub enum BodyFamily {
    /// `[-1, 1]^dim`.
    Cube { dim: usize },
    /// `conv(+-e_1, ..., +-e_dim)`.
    CrossPolytope { dim: usize },
    /// Regular m-gon inscribed in the unit circle of the (x1, x2)-plane,
    /// extruded along x3 over `[-1, 1]`.
    RegularMgonPrism { m: usize },
    /// `conv(base x {0} U {apex})`; `base` lives in R^(n-1), `apex` in R^n.
    ConeOverBase { base: Polytope, apex: Vec<f64> },
    /// `[-x0, x0] + ({0} x base)`: a generalized cylinder with a
    /// 0-symmetric base in R^(n-1) and segment direction `x0`.
    GeneralizedCylinder { x0: Vec<f64>, base: Polytope },
    /// The slab-to-scaled-copy body: slices `{t} x c0 x (1+t) c1` for
    /// `t in [-1, 1]`. `c0` (0-symmetric, in R^(i-1)) is `None` exactly when
    /// `i = 1`; `c1` lives in R^(n-i).
    ScaledSlab {
        n: usize,
        i: usize,
        c0: Option<Polytope>,
        c1: Polytope,
    },
    /// Hull of `points` uniform draws from `[-1, 1]^dim`; with `symmetric`
    /// the draws are mirrored through the origin first.
    RandomHull {
        dim: usize,
        points: usize,
        seed: u64,
        symmetric: bool,
    },
}

/// Build a body from its family recipe.
pub fn make_body(family: &BodyFamily) -> Result<Polytope> {
    match family {
        BodyFamily::Cube { dim } => cube(*dim),
        BodyFamily::CrossPolytope { dim } => cross_polytope(*dim),
        BodyFamily::RegularMgonPrism { m } => {
            let gon = regular_polygon(*m)?;
            let mut pts = Vec::with_capacity(2 * m);
            for v in gon.vertices() {
                for s in [-1.0, 1.0] {
                    pts.push(DVector::from_vec(vec![v[0], v[1], s]));
                }
            }
            Polytope::hull(&pts)
        }
        BodyFamily::ConeOverBase { base, apex } => {
            let n = base.dim() + 1;
            if apex.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: apex.len(),
                });
            }
            let mut pts: Vec<DVector<f64>> = base
                .vertices()
                .iter()
                .map(|v| {
                    let mut p = DVector::zeros(n);
                    for k in 0..n - 1 {
                        p[k] = v[k];
                    }
                    p
                })
                .collect();
            pts.push(DVector::from_row_slice(apex));
            Polytope::hull(&pts)
        }
        BodyFamily::GeneralizedCylinder { x0, base } => {
            let n = base.dim() + 1;
            if x0.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: x0.len(),
                });
            }
            if x0[0].abs() <= tol::GEOM {
                return Err(Error::Degenerate(
                    "cylinder direction must have a nonzero first coordinate".into(),
                ));
            }
            if !base.is_zero_symmetric() {
                return Err(Error::Precondition {
                    check: "generalized_cylinder",
                    condition: "base must be 0-symmetric".into(),
                });
            }
            let shift = DVector::from_row_slice(x0);
            let mut pts = Vec::with_capacity(2 * base.vertex_count());
            for v in base.vertices() {
                let mut lifted = DVector::zeros(n);
                for k in 0..n - 1 {
                    lifted[k + 1] = v[k];
                }
                pts.push(&lifted + &shift);
                pts.push(&lifted - &shift);
            }
            Polytope::hull(&pts)
        }
        BodyFamily::ScaledSlab { n, i, c0, c1 } => scaled_slab(*n, *i, c0.as_ref(), c1),
        BodyFamily::RandomHull {
            dim,
            points,
            seed,
            symmetric,
        } => {
            if *dim == 0 || *dim > tol::MAX_DIM {
                return Err(Error::DimensionOutOfRange(*dim));
            }
            if *points < dim + 1 {
                return Err(Error::Instance(format!(
                    "{points} points cannot span {dim} dimensions"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut pts = Vec::with_capacity(points * 2);
            for _ in 0..*points {
                let p =
                    DVector::from_fn(*dim, |_, _| rng.random_range(-1.0..1.0));
                if *symmetric {
                    pts.push(-&p);
                }
                pts.push(p);
            }
            Polytope::hull(&pts)
        }
    }
}

fn cube(dim: usize) -> Result<Polytope> {
    if dim == 0 || dim > tol::MAX_DIM {
        return Err(Error::DimensionOutOfRange(dim));
    }
    let mut pts = Vec::with_capacity(1 << dim);
    for mask in 0..(1usize << dim) {
        pts.push(DVector::from_fn(dim, |k, _| {
            if mask & (1 << k) != 0 {
                1.0
            } else {
                -1.0
            }
        }));
    }
    Polytope::hull(&pts)
}

fn cross_polytope(dim: usize) -> Result<Polytope> {
    if dim == 0 || dim > tol::MAX_DIM {
        return Err(Error::DimensionOutOfRange(dim));
    }
    let mut pts = Vec::with_capacity(2 * dim);
    for k in 0..dim {
        let mut p = DVector::zeros(dim);
        p[k] = 1.0;
        pts.push(p.clone());
        p[k] = -1.0;
        pts.push(p);
    }
    Polytope::hull(&pts)
}

/// Regular m-gon in the plane, inscribed in the unit circle with a vertex
/// at angle zero. 0-symmetric exactly when `m` is even.
pub fn regular_polygon(m: usize) -> Result<Polytope> {
    if m < 3 {
        return Err(Error::Instance(format!(
            "a polygon needs at least 3 vertices, got {m}"
        )));
    }
    let pts: Vec<DVector<f64>> = (0..m)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            DVector::from_vec(vec![th.cos(), th.sin()])
        })
        .collect();
    Polytope::hull(&pts)
}

/// `[0, 1]^d`.
pub fn unit_box(d: usize) -> Result<Polytope> {
    if d == 0 || d > tol::MAX_DIM {
        return Err(Error::DimensionOutOfRange(d));
    }
    let mut pts = Vec::with_capacity(1 << d);
    for mask in 0..(1u32 << d) {
        let mut p = DVector::zeros(d);
        for c in 0..d {
            if mask & (1 << c) != 0 {
                p[c] = 1.0;
            }
        }
        pts.push(p);
    }
    Polytope::hull(&pts)
}

fn scaled_slab(n: usize, i: usize, c0: Option<&Polytope>, c1: &Polytope) -> Result<Polytope> {
    if n < 2 || n > tol::MAX_DIM {
        return Err(Error::DimensionOutOfRange(n));
    }
    if i == 0 || i >= n {
        return Err(Error::Instance(format!(
            "slab parameter i = {i} must satisfy 1 <= i <= n-1 = {}",
            n - 1
        )));
    }
    match (i, c0) {
        (1, Some(_)) => {
            return Err(Error::Instance(
                "i = 1 admits no c0 factor (it would be 0-dimensional)".into(),
            ))
        }
        (1, None) => {}
        (_, None) => {
            return Err(Error::Instance(format!(
                "i = {i} requires a c0 factor of dimension {}",
                i - 1
            )))
        }
        (_, Some(c0)) => {
            if c0.dim() != i - 1 {
                return Err(Error::DimensionMismatch {
                    expected: i - 1,
                    got: c0.dim(),
                });
            }
            if !c0.is_zero_symmetric() {
                return Err(Error::Precondition {
                    check: "scaled_slab_body",
                    condition: "c0 must be 0-symmetric".into(),
                });
            }
        }
    }
    if c1.dim() != n - i {
        return Err(Error::DimensionMismatch {
            expected: n - i,
            got: c1.dim(),
        });
    }

    // Vertices of the two end slices t = -1 (c1 factor collapses to 0) and
    // t = +1 (c1 factor scaled by 2).
    let c0_verts: Vec<Vec<f64>> = match c0 {
        None => vec![Vec::new()],
        Some(c0) => c0
            .vertices()
            .iter()
            .map(|v| v.iter().copied().collect())
            .collect(),
    };
    let mut pts = Vec::new();
    for v0 in &c0_verts {
        let mut low = DVector::zeros(n);
        low[0] = -1.0;
        for (k, &c) in v0.iter().enumerate() {
            low[1 + k] = c;
        }
        pts.push(low);
        for v1 in c1.vertices() {
            let mut high = DVector::zeros(n);
            high[0] = 1.0;
            for (k, &c) in v0.iter().enumerate() {
                high[1 + k] = c;
            }
            for k in 0..n - i {
                high[i + k] = 2.0 * v1[k];
            }
            pts.push(high);
        }
    }
    Polytope::hull(&pts)
}
