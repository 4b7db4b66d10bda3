//! Schwarz symmetrization along an axis, the associated cylinder family,
//! and the volume-matching slab parameter.
//!
//! The symmetrization of a body about the line through `u` is the revolution
//! body whose section at height `t` is the (n-1)-ball with the same volume
//! as the body's section. It is represented here purely by its radius
//! profile `t -> r_t`: every downstream quantity (volumes, inclusions, the
//! bisection target) needs only radii, so the revolution body is never
//! materialized as a polytope.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::marginals;
use crate::polytope::Polytope;
use crate::subspace::Subspace;
use crate::tol;

/// Default knot count for profiles built by the command-line tools.
pub const DEFAULT_KNOTS: usize = 2001;

/// Volume of the unit ball in `dim` dimensions.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        k => 2.0 * std::f64::consts::PI / k as f64 * unit_ball_volume(k - 2),
    }
}

/// Radius profile of the Schwarz symmetrization of a body about an axis.
///
/// Knots are uniform over the support interval `[-h(K,-u), h(K,u)]`; the
/// radius at knot `t` satisfies `|K cut at t| = r_t^(n-1) * w_(n-1)` with
/// `w` the unit-ball volume. Sections that are nonempty but lower
/// dimensional (faces touched by the flat) have radius zero.
#[derive(Debug, Clone)]
pub struct SchwarzProfile {
    axis: Subspace,
    ambient: usize,
    ball: f64,
    knots: Vec<(f64, f64)>,
    t_range: (f64, f64),
}

/// Builds the radius profile of `k` about the line through `u` from
/// `knot_count` equally spaced sections.
pub fn schwarz_profile(k: &Polytope, u: &DVector<f64>, knot_count: usize) -> Result<SchwarzProfile> {
    if knot_count < 3 {
        return Err(Error::Precondition {
            check: "knot_count >= 3",
            condition: format!("knot_count = {knot_count}"),
        });
    }
    let n = k.dim();
    if n < 2 {
        return Err(Error::DimensionOutOfRange(n));
    }
    let axis = Subspace::line(u)?;
    if axis.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: axis.ambient_dim(),
        });
    }
    k.hrep()?;
    let dir = axis.basis()[0].clone();
    let hi = k.support(&dir)?;
    let lo = -k.support(&(-&dir))?;
    if hi - lo <= tol::geom_for(k.vertex_scale()) {
        return Err(Error::Degenerate("body is flat along the axis".into()));
    }
    let ball = unit_ball_volume(n - 1);
    let inv = 1.0 / (n - 1) as f64;
    let step = (hi - lo) / (knot_count - 1) as f64;
    let knots: Vec<(f64, f64)> = (0..knot_count)
        .into_par_iter()
        .map(|j| -> Result<(f64, f64)> {
            let t = if j + 1 == knot_count { hi } else { lo + step * j as f64 };
            let v = marginals::section(k, &axis, &DVector::from_vec(vec![t]))?
                .ambient_volume()?;
            Ok((t, (v / ball).powf(inv)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SchwarzProfile {
        axis,
        ambient: n,
        ball,
        knots,
        t_range: (lo, hi),
    })
}

impl SchwarzProfile {
    /// Unit vector spanning the symmetrization axis.
    pub fn axis(&self) -> &DVector<f64> {
        &self.axis.basis()[0]
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Stored `(t, r_t)` pairs in increasing `t`.
    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Support interval of the body along the axis.
    pub fn t_range(&self) -> (f64, f64) {
        self.t_range
    }

    /// Radius at `t` by linear interpolation between knots; zero outside the
    /// support interval.
    pub fn radius_at(&self, t: f64) -> f64 {
        let (lo, hi) = self.t_range;
        let slack = 1e-12 * (hi - lo);
        if t < lo - slack || t > hi + slack {
            return 0.0;
        }
        let t = t.clamp(lo, hi);
        let step = (hi - lo) / (self.knots.len() - 1) as f64;
        let j = (((t - lo) / step) as usize).min(self.knots.len() - 2);
        let (ta, ra) = self.knots[j];
        let (tb, rb) = self.knots[j + 1];
        let w = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
        ra + w * (rb - ra)
    }

    /// Section volume at `t`: `r_t^(n-1)` times the unit-ball volume.
    pub fn section_volume_at(&self, t: f64) -> f64 {
        self.ball * self.radius_at(t).powi((self.ambient - 1) as i32)
    }
}

/// Volume of the symmetrized body: composite Simpson quadrature of the
/// section volume over the stored knots (with a 3/8 tail when the interval
/// count is odd). Agrees with the volume of the original body up to
/// quadrature error.
pub fn schwarz_volume(p: &SchwarzProfile) -> f64 {
    let g: Vec<f64> = p
        .knots
        .iter()
        .map(|&(_, r)| p.ball * r.powi((p.ambient - 1) as i32))
        .collect();
    let m = g.len() - 1;
    let h = (p.t_range.1 - p.t_range.0) / m as f64;
    let (even_end, tail) = if m % 2 == 0 {
        (m, 0.0)
    } else {
        let a = m - 3;
        let t = 3.0 * h / 8.0 * (g[a] + 3.0 * g[a + 1] + 3.0 * g[a + 2] + g[m]);
        (a, t)
    };
    let mut acc = 0.0;
    let mut j = 0;
    while j + 2 <= even_end {
        acc += h / 3.0 * (g[j] + 4.0 * g[j + 1] + g[j + 2]);
        j += 2;
    }
    acc + tail
}

/// One member of the nested cylinder family over a symmetrized body: the
/// cylinder of radius `r(t)` and axial extent `[-t0, t0]`, where `t0` is the
/// body's support height and `r` its Schwarz radius profile.
#[derive(Debug, Clone)]
pub struct CylinderFamily {
    base_profile: SchwarzProfile,
    t0: f64,
    t: f64,
}

impl CylinderFamily {
    /// Family member at parameter `t in [0, t0]`; `t0` is read off the
    /// profile's support interval.
    pub fn new(base_profile: SchwarzProfile, t: f64) -> Result<CylinderFamily> {
        let t0 = base_profile.t_range().1;
        if t0 <= 0.0 {
            return Err(Error::Degenerate(
                "cylinder family needs positive support height".into(),
            ));
        }
        if t < 0.0 || t > t0 {
            return Err(Error::OutsideDomain(if t < 0.0 { -t } else { t - t0 }));
        }
        Ok(CylinderFamily {
            base_profile,
            t0,
            t,
        })
    }

    /// Same family, different parameter.
    pub fn with_t(&self, t: f64) -> Result<CylinderFamily> {
        Self::new(self.base_profile.clone(), t)
    }

    pub fn base_profile(&self) -> &SchwarzProfile {
        &self.base_profile
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// Volume of the family member: cross-section `r(t)^(n-1) * w_(n-1)` swept
/// over the axial extent `2 t0`.
pub fn cylinder_slice_volume(fam: &CylinderFamily) -> f64 {
    fam.base_profile.section_volume_at(fam.t) * 2.0 * fam.t0
}

/// Smallest `t* in [0, t0]` at which the cylinder volume meets the
/// symmetrized body's volume, located by bisection to within `tol`.
///
/// The map `t -> |R_t|` is nonincreasing, so a leftmost match is well
/// defined; a flat stretch at the target (every cylinder already has the
/// right volume, as for a cube) resolves to its left endpoint.
pub fn find_tstar(fam: &CylinderFamily, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Precondition {
            check: "tol > 0",
            condition: format!("tol = {tol}"),
        });
    }
    let target = schwarz_volume(&fam.base_profile);
    let vol = |t: f64| cylinder_slice_volume(&CylinderFamily {
        base_profile: fam.base_profile.clone(),
        t0: fam.t0,
        t,
    });
    let v_hi = vol(0.0);
    let v_lo = vol(fam.t0);
    if target > v_hi + tol || target < v_lo - tol {
        return Err(Error::TargetOutOfRange {
            target,
            lo: v_lo,
            hi: v_hi,
        });
    }
    let eps = 1e-9 * (1.0 + target.abs());
    let hit = |t: f64| vol(t) <= target + eps;
    if hit(0.0) {
        return Ok(0.0);
    }
    if !hit(fam.t0) {
        // Within the range tolerance but never reaching the target: the
        // closest parameter is the right endpoint.
        return Ok(fam.t0);
    }
    let mut lo = 0.0;
    let mut hi = fam.t0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if hit(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Result of the sampled inclusion test for the cylinder sandwich
/// `R_(t0) inside C' inside R_0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipReport {
    pub samples: usize,
    /// Sampled points of the innermost cylinder falling outside the
    /// symmetrized body.
    pub inner_violations: usize,
    /// Sampled points of the symmetrized body falling outside the outermost
    /// cylinder.
    pub outer_violations: usize,
    /// Largest observed signed exclusion gap (radius or height excess).
    pub worst_gap: f64,
    pub tolerance: f64,
    /// Whether the input body was 0-symmetric; the sandwich is only
    /// guaranteed when it is, so `false` here explains any violations.
    pub symmetric_input: bool,
}

/// Samples the sandwich inclusions `R_(t0) inside C' inside R_0` by radius
/// comparison and reports violations.
///
/// The sandwich holds for 0-symmetric bodies; an asymmetric input is not an
/// error but is flagged in the report, and the violated inclusion shows up
/// in the counts.
pub fn slab_membership_check(
    k: &Polytope,
    fam: &CylinderFamily,
    samples: usize,
    seed: u64,
) -> Result<MembershipReport> {
    if samples == 0 {
        return Err(Error::Precondition {
            check: "samples >= 1",
            condition: "no membership samples requested".into(),
        });
    }
    let p = &fam.base_profile;
    let (lo, hi) = p.t_range();
    let t0 = fam.t0;
    let r_inner = p.radius_at(t0);
    let r_outer = p.radius_at(0.0);
    let eps = tol::NUM * (1.0 + r_outer.max(t0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inner_violations = 0usize;
    let mut outer_violations = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        // A point of the innermost cylinder: height over the full axial
        // extent, radius up to its constant cross-section.
        let s: f64 = -t0 + 2.0 * t0 * rng.random::<f64>();
        let rho = r_inner * rng.random::<f64>();
        let gap = rho - p.radius_at(s);
        worst = worst.max(gap);
        if gap > eps {
            inner_violations += 1;
        }
        // A point of the symmetrized body: height over its support, radius
        // up to the local profile; must fit the outer cylinder in both
        // radius and height.
        let s2 = lo + (hi - lo) * rng.random::<f64>();
        let rho2 = p.radius_at(s2) * rng.random::<f64>();
        let gap2 = (rho2 - r_outer).max(s2.abs() - t0);
        worst = worst.max(gap2);
        if gap2 > eps {
            outer_violations += 1;
        }
    }
    Ok(MembershipReport {
        samples,
        inner_violations,
        outer_violations,
        worst_gap: worst,
        tolerance: eps,
        symmetric_input: k.is_zero_symmetric(),
    })
}
