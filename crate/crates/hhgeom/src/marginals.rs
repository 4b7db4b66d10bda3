//! Orthogonal projections of polytopes onto subspaces, sections by affine
//! flats, the associated concave section profile, and Fubini consistency
//! between the two.
//!
//! Projections are returned in subspace coordinates (dimension `i`) and
//! sections in complement coordinates (dimension `n - i`), with the frames
//! fixed by the [`Subspace`]. Sections are computed by substituting the
//! flat's parametrization into the body's halfspace description, which
//! avoids any vertex-edge case analysis.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::integrate::{self, IntegralEstimate};
use crate::polytope::{sample_uniform, Halfspace, Polytope};
use crate::subspace::Subspace;
use crate::tol;

/// Orthogonal projection of `k` onto `h`, in subspace coordinates.
pub fn project(k: &Polytope, h: &Subspace) -> Result<Polytope> {
    if k.dim() != h.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: h.ambient_dim(),
            got: k.dim(),
        });
    }
    if k.is_empty() {
        return Ok(Polytope::empty(h.dim()));
    }
    let shadow: Vec<DVector<f64>> = k.vertices().iter().map(|v| h.project_coords(v)).collect();
    Polytope::hull(&shadow)
}

/// Section of `k` by the flat through `lift(x)` orthogonal to `h`, in
/// complement coordinates: `{y : lift(x) + complement * y in k}`.
///
/// A point `x` outside the projection yields the empty polytope, not an
/// error. The body must be full-dimensional (the flat is intersected with
/// its halfspace description).
pub fn section(k: &Polytope, h: &Subspace, x: &DVector<f64>) -> Result<Polytope> {
    if k.dim() != h.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: h.ambient_dim(),
            got: k.dim(),
        });
    }
    if x.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: x.len(),
        });
    }
    if k.is_empty() {
        return Ok(Polytope::empty(h.codim()));
    }
    let base = h.lift(x);
    let drop_tol = 1e-12;
    let miss_tol = tol::geom_for(base.norm().max(k.vertex_scale()));
    let mut rows: Vec<Halfspace> = Vec::new();
    for f in k.hrep()? {
        let a = &f.halfspace.normal;
        let b = f.halfspace.offset - a.dot(&base);
        let a_comp = h.complement_coords(a);
        if a_comp.norm() <= drop_tol {
            // Constraint is constant along the flat: either irrelevant or
            // the flat misses the body entirely.
            if b < -miss_tol {
                return Ok(Polytope::empty(h.codim()));
            }
            continue;
        }
        rows.push(Halfspace::new(a_comp, b)?);
    }
    if rows.is_empty() {
        return Err(Error::Degenerate(
            "section inherited no bounding constraints".into(),
        ));
    }
    // Every section point y satisfies |y| <= max_v |v - base| because
    // base + complement*y lies in k and the distance to base is maximized
    // at a vertex.
    let bound = k
        .vertices()
        .iter()
        .map(|v| (v - &base).norm())
        .fold(0.0f64, f64::max)
        + 1.0;
    Polytope::from_halfspaces_bounded(h.codim(), &rows, bound)
}

/// Is the projection of `k` onto `h` symmetric about the origin?
pub fn is_projection_symmetric(k: &Polytope, h: &Subspace) -> Result<bool> {
    Ok(project(k, h)?.is_zero_symmetric())
}

/// The section-volume profile `x -> |k cut by (x + complement)|^(1/(n-i))`,
/// a concave function of `x` on the projection of `k`.
#[derive(Debug, Clone)]
pub struct BrunnProfile {
    body: Polytope,
    subspace: Subspace,
}

impl BrunnProfile {
    /// The body must be full-dimensional; its halfspace description is
    /// computed once here and reused by every evaluation.
    pub fn new(body: Polytope, subspace: Subspace) -> Result<BrunnProfile> {
        if body.dim() != subspace.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: subspace.ambient_dim(),
                got: body.dim(),
            });
        }
        body.hrep()?;
        Ok(BrunnProfile { body, subspace })
    }

    pub fn body(&self) -> &Polytope {
        &self.body
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    /// The concavity exponent `1/(n-i)`.
    pub fn exponent(&self) -> f64 {
        1.0 / self.subspace.codim() as f64
    }

    /// Profile value at subspace coordinates `x`; zero outside the
    /// projection and at lower-dimensional sections.
    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        let s = section(&self.body, &self.subspace, x)?;
        Ok(s.ambient_volume()?.powf(self.exponent()))
    }
}

/// Result of a sampled concavity test along random segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityReport {
    pub trials: usize,
    /// Largest observed `(1-l)f(x) + l f(y) - f((1-l)x + l y)`; negative
    /// when every tested segment was strictly concave.
    pub worst: f64,
    /// Count of trials exceeding `tolerance`.
    pub violations: usize,
    pub tolerance: f64,
}

/// Samples `trials` random segments in the projection of `k` and verifies
/// midpoint concavity of the section profile on each.
pub fn check_brunn_concavity(
    k: &Polytope,
    h: &Subspace,
    trials: usize,
    seed: u64,
) -> Result<ConcavityReport> {
    if trials == 0 {
        return Err(Error::Precondition {
            check: "trials >= 1",
            condition: "no concavity trials requested".into(),
        });
    }
    let profile = BrunnProfile::new(k.clone(), h.clone())?;
    let proj = project(k, h)?;
    let pts = sample_uniform(&proj, 2 * trials, seed)?;
    // Interpolation weights come from stream 0, which the batched sampler
    // never uses, so the two draws stay independent and reproducible.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for j in 0..trials {
        let x = &pts[2 * j];
        let y = &pts[2 * j + 1];
        let l: f64 = rng.random();
        let mid = x * (1.0 - l) + y * l;
        let combo = (1.0 - l) * profile.eval(x)? + l * profile.eval(y)?;
        let gap = combo - profile.eval(&mid)?;
        worst = worst.max(gap);
        if gap > tol::NUM {
            violations += 1;
        }
    }
    Ok(ConcavityReport {
        trials,
        worst,
        violations,
        tolerance: tol::NUM,
    })
}

/// Integral of the section volume over the projection, which must equal the
/// volume of `k`.
///
/// For a line (`dim = 1`) the integrand is piecewise polynomial with breaks
/// only at vertex heights, so it is integrated by per-piece Gauss panels
/// (`grid` panels in total, exact for ambient dimension <= 8). For higher
/// `dim` the integral is estimated by `grid` Monte Carlo samples over the
/// projection with a CLT standard error.
pub fn fubini_volume(
    k: &Polytope,
    h: &Subspace,
    grid: usize,
    seed: u64,
) -> Result<IntegralEstimate> {
    if grid < 2 {
        return Err(Error::Precondition {
            check: "grid >= 2",
            condition: format!("grid = {grid}"),
        });
    }
    if k.dim() != h.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: h.ambient_dim(),
            got: k.dim(),
        });
    }
    if h.dim() == 1 {
        let mut breaks: Vec<f64> = k
            .vertices()
            .iter()
            .map(|v| h.project_coords(v)[0])
            .collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let lo = breaks[0];
        let hi = *breaks.last().unwrap();
        if hi - lo <= tol::GEOM {
            // The body is flat across the axis; the 1-d integral is zero.
            return Ok(IntegralEstimate::quadrature(0.0, 0));
        }
        breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (hi - lo));
        let g = |t: f64| -> Result<f64> {
            section(k, h, &DVector::from_vec(vec![t]))?.ambient_volume()
        };
        let mut value = 0.0;
        let mut evals = 0usize;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let panels = (((b - a) / (hi - lo)) * grid as f64).ceil().max(1.0) as usize;
            let ph = (b - a) / panels as f64;
            for p in 0..panels {
                let mut err = None;
                let pa = a + ph * p as f64;
                value += integrate::gauss5(
                    |t| match g(t) {
                        Ok(v) => v,
                        Err(e) => {
                            err = Some(e);
                            0.0
                        }
                    },
                    pa,
                    pa + ph,
                );
                if let Some(e) = err {
                    return Err(e);
                }
                evals += 5;
            }
        }
        return Ok(IntegralEstimate::quadrature(value, evals));
    }

    let proj = project(k, h)?;
    let pvol = proj.volume()?;
    let est = integrate::mc_mean(
        &proj,
        |x| match section(k, h, x).and_then(|s| s.ambient_volume()) {
            Ok(v) => v,
            // Sampled interior points cannot fail geometrically; surface a
            // poisoned value rather than panicking inside the fold.
            Err(_) => f64::NAN,
        },
        grid,
        seed,
    )?;
    if !est.value.is_finite() {
        return Err(Error::Degenerate(
            "section volume failed inside the projection".into(),
        ));
    }
    Ok(est.scaled(pvol))
}
