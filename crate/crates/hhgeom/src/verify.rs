//! The geometric inequality suite: the sharp section-projection bound, its
//! slab normalization with constant `2^n / n`, the two centroid-section
//! bounds, the segment-of-centers refinement, equality-case constructors,
//! and a randomized tightness search.
//!
//! Every check here uses exact triangulation volumes, so equality verdicts
//! are decidable at the geometric tolerance; only the functional module
//! carries Monte Carlo error.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::concave::ConcaveFn;
use crate::error::{Error, Result};
use crate::functional::check_gauge_hh;
use crate::gauge::ConvexGauge;
use crate::integrate::IntegrationMethod;
use crate::jsonio::{body_to_json, subspace_to_json};
use crate::marginals::{is_projection_symmetric, project, section};
use crate::polytope::{make_body, unit_box, BodyFamily, Polytope};
use crate::report::InequalityReport;
use crate::subspace::Subspace;
use crate::tol;

fn check_subspace_fits(k: &Polytope, h: &Subspace) -> Result<()> {
    if h.ambient_dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: h.ambient_dim(),
        });
    }
    if h.dim() == 0 || h.dim() >= k.dim() {
        return Err(Error::Precondition {
            check: "1 <= dim H <= n - 1",
            condition: format!("dim H = {} in ambient dimension {}", h.dim(), k.dim()),
        });
    }
    Ok(())
}

fn geometry_instance(k: &Polytope, h: &Subspace) -> serde_json::Value {
    json!({
        "body": body_to_json(k),
        "subspace": subspace_to_json(h),
    })
}

/// The sharp bound `|K| <= 2^(n-i)/(n-i+1) |P_H K| |K cap H_perp|` for
/// bodies whose projection onto `H` is 0-symmetric. Equality holds exactly
/// for the scaled-slab bodies of [`construct_equality_slab`].
pub fn check_section_projection_bound(k: &Polytope, h: &Subspace) -> Result<InequalityReport> {
    check_subspace_fits(k, h)?;
    if !is_projection_symmetric(k, h)? {
        return Err(Error::Precondition {
            check: "P_H K = -P_H K",
            condition: "the projection of the body onto H is not 0-symmetric".into(),
        });
    }
    let n = k.dim();
    let i = h.dim();
    let lhs = k.volume()?;
    let pvol = project(k, h)?.volume()?;
    let svol = section(k, h, &DVector::zeros(i))?.volume()?;
    let constant = 2f64.powi((n - i) as i32) / (n - i + 1) as f64;
    let rhs = constant * pvol * svol;
    let mut instance = geometry_instance(k, h);
    instance["constant"] = json!(constant);
    instance["projection_volume"] = json!(pvol);
    instance["section_volume"] = json!(svol);
    Ok(InequalityReport::new(
        "section-projection",
        lhs,
        rhs,
        tol::geom_for(lhs.abs().max(rhs.abs())),
        IntegrationMethod::ClosedForm,
        IntegrationMethod::ClosedForm,
        instance,
        0,
    ))
}

/// The slab-normalized specialization: when `P_{lin e1} K = [-1, 1]`, the
/// bound reads `|K| <= (2^n / n) |K cap e1_perp|`, and the constant is the
/// optimal answer to the smallest-constant question for slabs.
pub fn check_santos_bound(k: &Polytope) -> Result<InequalityReport> {
    let n = k.dim();
    if n < 2 {
        return Err(Error::DimensionOutOfRange(n));
    }
    let h = Subspace::coordinate(n, &[0])?;
    let p = project(k, &h)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in p.vertices() {
        lo = lo.min(v[0]);
        hi = hi.max(v[0]);
    }
    if (lo + 1.0).abs() > tol::GEOM || (hi - 1.0).abs() > tol::GEOM {
        return Err(Error::Precondition {
            check: "P_{lin e1} K = [-1, 1]",
            condition: format!("the first-coordinate projection is [{lo}, {hi}]"),
        });
    }
    let lhs = k.volume()?;
    let svol = section(k, &h, &DVector::zeros(1))?.volume()?;
    let c_n = 2f64.powi(n as i32) / n as f64;
    let rhs = c_n * svol;
    // The same inequality via the general constant and the measured
    // projection volume must agree; the slab normalization makes the two
    // readings one bound.
    let general_constant = 2f64.powi((n - 1) as i32) / n as f64;
    let rhs_general = general_constant * (hi - lo) * svol;
    if (rhs - rhs_general).abs() > 1e-12 * rhs.abs().max(1.0) {
        return Err(Error::Precondition {
            check: "P_{lin e1} K = [-1, 1]",
            condition: format!(
                "projection length {} leaves the slab and general bounds {} apart",
                hi - lo,
                (rhs - rhs_general).abs()
            ),
        });
    }
    let mut instance = geometry_instance(k, &h);
    instance["constant"] = json!(c_n);
    instance["general_constant"] = json!(general_constant);
    instance["rhs_general"] = json!(rhs_general);
    instance["section_volume"] = json!(svol);
    Ok(InequalityReport::new(
        "slab-sharp",
        lhs,
        rhs,
        tol::geom_for(lhs.abs().max(rhs.abs())),
        IntegrationMethod::ClosedForm,
        IntegrationMethod::ClosedForm,
        instance,
        0,
    ))
}

/// The centroid-section bound `|K| <= |P_H K| |K cap (x_K + H_perp)|`,
/// valid for every convex body and subspace. `samples` and `seed` are
/// recorded for interface parity with the sampled checks; the volumes and
/// the centroid are exact.
pub fn check_milman_pajor(
    k: &Polytope,
    h: &Subspace,
    samples: usize,
    seed: u64,
) -> Result<InequalityReport> {
    check_subspace_fits(k, h)?;
    let lhs = k.volume()?;
    let center = h.project_coords(&k.centroid()?);
    let pvol = project(k, h)?.volume()?;
    let svol = section(k, h, &center)?.volume()?;
    let rhs = pvol * svol;
    let mut instance = geometry_instance(k, h);
    instance["center"] = json!(center.iter().copied().collect::<Vec<_>>());
    instance["projection_volume"] = json!(pvol);
    instance["section_volume"] = json!(svol);
    instance["samples"] = json!(samples);
    Ok(InequalityReport::new(
        "centroid-section",
        lhs,
        rhs,
        tol::geom_for(lhs.abs().max(rhs.abs())),
        IntegrationMethod::ClosedForm,
        IntegrationMethod::ClosedForm,
        instance,
        seed,
    ))
}

/// The hyperplane variant that centers the section at the centroid of the
/// projection instead: `|K| <= |P_H K| |K cap (x_{P_H K} + H_perp)|`,
/// stated for `dim H = n - 1`.
pub fn check_projection_centroid(k: &Polytope, h: &Subspace) -> Result<InequalityReport> {
    check_subspace_fits(k, h)?;
    if h.dim() != k.dim() - 1 {
        return Err(Error::Precondition {
            check: "dim H = n - 1",
            condition: format!("dim H = {} in ambient dimension {}", h.dim(), k.dim()),
        });
    }
    let lhs = k.volume()?;
    let p = project(k, h)?;
    let center = p.centroid()?;
    let pvol = p.volume()?;
    let svol = section(k, h, &center)?.volume()?;
    let rhs = pvol * svol;
    let mut instance = geometry_instance(k, h);
    instance["center"] = json!(center.iter().copied().collect::<Vec<_>>());
    instance["projection_volume"] = json!(pvol);
    instance["section_volume"] = json!(svol);
    Ok(InequalityReport::new(
        "projection-centroid",
        lhs,
        rhs,
        tol::geom_for(lhs.abs().max(rhs.abs())),
        IntegrationMethod::ClosedForm,
        IntegrationMethod::ClosedForm,
        instance,
        0,
    ))
}

/// Segment-of-centers refinement: if the sections through `x0` and `x1`
/// both carry at least `|K| / |P_H K|`, then so does the section through
/// every convex combination. Verifies the bound on a uniform grid of
/// `grid` points and reports the weakest section found; the report's slack
/// equals the minimum over the grid of `section - |K|/|P_H K|`.
///
/// `x0`, `x1` are given in the subspace's basis coordinates, as for
/// [`crate::marginals::section`].
pub fn check_center_segment(
    k: &Polytope,
    h: &Subspace,
    x0: &DVector<f64>,
    x1: &DVector<f64>,
    grid: usize,
) -> Result<InequalityReport> {
    check_subspace_fits(k, h)?;
    if x0.len() != h.dim() || x1.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: if x0.len() != h.dim() { x0.len() } else { x1.len() },
        });
    }
    if grid < 2 {
        return Err(Error::Precondition {
            check: "grid >= 2",
            condition: format!("a {grid}-point grid cannot cover both endpoints"),
        });
    }
    let lhs = k.volume()?;
    let pvol = project(k, h)?.volume()?;
    let base = lhs / pvol;
    let eps = tol::geom_for(base);
    let section_at = |x: &DVector<f64>| -> Result<f64> { section(k, h, x)?.volume() };
    for (label, x) in [("x0", x0), ("x1", x1)] {
        let v = section_at(x)?;
        if v < base - eps {
            return Err(Error::Precondition {
                check: "|K|/|P_H K| <= |K cap (x_j + H_perp)| at both endpoints",
                condition: format!(
                    "endpoint {label} fails: section volume {v} is below {base}"
                ),
            });
        }
    }
    let mut sections = Vec::with_capacity(grid);
    let mut min_section = f64::INFINITY;
    for j in 0..grid {
        let lam = j as f64 / (grid - 1) as f64;
        let x = x0 * (1.0 - lam) + x1 * lam;
        let v = section_at(&x)?;
        min_section = min_section.min(v);
        sections.push(v);
    }
    let mut instance = geometry_instance(k, h);
    instance["x0"] = json!(x0.iter().copied().collect::<Vec<_>>());
    instance["x1"] = json!(x1.iter().copied().collect::<Vec<_>>());
    instance["sections"] = json!(sections);
    Ok(InequalityReport::new(
        "center-segment",
        base,
        min_section,
        eps,
        IntegrationMethod::ClosedForm,
        IntegrationMethod::ClosedForm,
        instance,
        0,
    ))
}

/// The equality bodies of the section-projection bound: the slab over
/// `[-1, 1]` whose cross-section scales affinely from a point at `t = -1`
/// to `2 C1` at `t = 1`, paired with the coordinate subspace
/// `lin{e1, ..., e_i}`. `c0` must be `None` exactly when `i = 1`.
pub fn construct_equality_slab(
    n: usize,
    i: usize,
    c0: Option<&Polytope>,
    c1: &Polytope,
) -> Result<(Polytope, Subspace)> {
    let body = make_body(&BodyFamily::ScaledSlab {
        n,
        i,
        c0: c0.cloned(),
        c1: c1.clone(),
    })?;
    let dims: Vec<usize> = (0..i).collect();
    let h = Subspace::coordinate(n, &dims)?;
    Ok((body, h))
}

/// Which inequality a tightness search drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    SectionProjection,
    SlabSharp,
    CentroidSection,
    GaugeMean,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::SectionProjection => "section-projection",
            CheckKind::SlabSharp => "slab-sharp",
            CheckKind::CentroidSection => "centroid-section",
            CheckKind::GaugeMean => "gauge-hh",
        }
    }
}

/// Random instance generators for the tightness search.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchFamily {
    /// 0-symmetric hull of random points, checked against the coordinate
    /// subspace of the given dimension.
    SymmetricHull {
        dim: usize,
        points: usize,
        subspace_dim: usize,
    },
    /// Symmetric hull rescaled so its first-coordinate projection is
    /// exactly `[-1, 1]`.
    SlabNormalizedHull { dim: usize, points: usize },
    /// Equality slab with the scaled factor's coordinates jittered by a
    /// uniform offset of the given magnitude. The jitter leaves the
    /// projection onto `lin{e1..e_i}` untouched, so the precondition
    /// survives. At `i = 1` the slab is a cone and any jittered copy is
    /// again a cone, hence still an equality body; for `i >= 2` the jitter
    /// breaks the product structure and the ratio drops strictly below 1,
    /// tending back to 1 as the magnitude shrinks.
    PerturbedSlab { n: usize, i: usize, magnitude: f64 },
    /// Random piecewise-affine concave functions on the cube, driving the
    /// gauge bound with a power gauge.
    GaugeOnCube {
        dim: usize,
        pieces: usize,
        alpha: f64,
        samples: usize,
    },
}

/// Outcome of a randomized tightness search: the supremum of observed
/// ratios, the instance attaining it, and a fixed-width histogram of all
/// ratios (bin `j` covers `[j w, (j+1) w)` for width `w`; the last bin
/// absorbs everything above).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightnessResult {
    pub best_ratio: f64,
    pub best_instance: serde_json::Value,
    pub trials: usize,
    pub failures: usize,
    pub ratio_histogram: Vec<usize>,
    pub bin_width: f64,
}

const HISTOGRAM_BINS: usize = 44;
const HISTOGRAM_BIN_WIDTH: f64 = 0.025;

fn trial_seed(master: u64, t: u64) -> u64 {
    let mut z = master.wrapping_add(t.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn perturbed_slab(n: usize, i: usize, magnitude: f64, seed: u64) -> Result<(Polytope, Subspace)> {
    let c0 = if i >= 2 {
        Some(make_body(&BodyFamily::Cube { dim: i - 1 })?)
    } else {
        None
    };
    let c1 = unit_box(n - i)?;
    let (slab, h) = construct_equality_slab(n, i, c0.as_ref(), &c1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<DVector<f64>> = slab
        .vertices()
        .iter()
        .map(|v| {
            let mut p = v.clone();
            for c in i..n {
                p[c] += magnitude * (rng.random::<f64>() - 0.5) * 2.0;
            }
            p
        })
        .collect();
    Ok((Polytope::hull(&pts)?, h))
}

fn slab_normalized_hull(dim: usize, points: usize, seed: u64) -> Result<Polytope> {
    let k = make_body(&BodyFamily::RandomHull {
        dim,
        points,
        seed,
        symmetric: true,
    })?;
    let m = k
        .vertices()
        .iter()
        .map(|v| v[0].abs())
        .fold(0.0f64, f64::max);
    if m <= tol::GEOM {
        return Err(Error::Degenerate(
            "random hull is flat along the first coordinate".into(),
        ));
    }
    let mut scale = nalgebra::DMatrix::identity(dim, dim);
    scale[(0, 0)] = 1.0 / m;
    k.affine_image(&scale, &DVector::zeros(dim))
}

fn run_trial(
    family: &SearchFamily,
    check: CheckKind,
    seed: u64,
) -> Result<(InequalityReport, serde_json::Value)> {
    let (report, provenance) = match family {
        SearchFamily::SymmetricHull {
            dim,
            points,
            subspace_dim,
        } => {
            let k = make_body(&BodyFamily::RandomHull {
                dim: *dim,
                points: *points,
                seed,
                symmetric: true,
            })?;
            let dims: Vec<usize> = (0..*subspace_dim).collect();
            let h = Subspace::coordinate(*dim, &dims)?;
            let report = match check {
                CheckKind::SectionProjection => check_section_projection_bound(&k, &h)?,
                CheckKind::CentroidSection => check_milman_pajor(&k, &h, 0, seed)?,
                CheckKind::SlabSharp | CheckKind::GaugeMean => {
                    return Err(Error::Instance(format!(
                        "family symmetric-hull cannot drive check {}",
                        check.name()
                    )))
                }
            };
            (report, geometry_instance(&k, &h))
        }
        SearchFamily::SlabNormalizedHull { dim, points } => {
            let k = slab_normalized_hull(*dim, *points, seed)?;
            let h = Subspace::coordinate(*dim, &[0])?;
            let report = match check {
                CheckKind::SectionProjection => check_section_projection_bound(&k, &h)?,
                CheckKind::SlabSharp => check_santos_bound(&k)?,
                CheckKind::CentroidSection => check_milman_pajor(&k, &h, 0, seed)?,
                CheckKind::GaugeMean => {
                    return Err(Error::Instance(
                        "family slab-normalized-hull cannot drive check gauge-hh".into(),
                    ))
                }
            };
            (report, geometry_instance(&k, &h))
        }
        SearchFamily::PerturbedSlab { n, i, magnitude } => {
            let (k, h) = perturbed_slab(*n, *i, *magnitude, seed)?;
            let report = match check {
                CheckKind::SectionProjection => check_section_projection_bound(&k, &h)?,
                CheckKind::SlabSharp if *i == 1 => check_santos_bound(&k)?,
                CheckKind::CentroidSection => check_milman_pajor(&k, &h, 0, seed)?,
                _ => {
                    return Err(Error::Instance(format!(
                        "family perturbed-slab (i = {i}) cannot drive check {}",
                        check.name()
                    )))
                }
            };
            (report, geometry_instance(&k, &h))
        }
        SearchFamily::GaugeOnCube {
            dim,
            pieces,
            alpha,
            samples,
        } => {
            if check != CheckKind::GaugeMean {
                return Err(Error::Instance(format!(
                    "family gauge-on-cube cannot drive check {}",
                    check.name()
                )));
            }
            let cube = make_body(&BodyFamily::Cube { dim: *dim })?;
            let f = ConcaveFn::random(cube.clone(), *pieces, seed)?;
            let phi = ConvexGauge::power(*alpha)?;
            let report = check_gauge_hh(&cube, &f, &phi, *samples, seed)?;
            let provenance = json!({
                "body": body_to_json(&cube),
                "function": crate::jsonio::concave_to_json(&f),
                "gauge": crate::jsonio::gauge_to_json(&phi),
            });
            (report, provenance)
        }
    };
    Ok((report, provenance))
}

/// Runs `check` over `trials` random instances drawn from `family`,
/// tracking the supremum of the ratio `lhs / rhs`. Deterministic in
/// `seed`: trials carry seeds derived from (seed, index) and are merged in
/// index order regardless of scheduling.
pub fn tightness_search(
    family: &SearchFamily,
    check: CheckKind,
    trials: usize,
    seed: u64,
) -> Result<TightnessResult> {
    if trials == 0 {
        return Err(Error::EmptyInput("tightness search needs trials >= 1"));
    }
    let outcomes: Vec<(InequalityReport, serde_json::Value)> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(family, check, trial_seed(seed, t as u64)))
        .collect::<Result<_>>()?;
    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_instance = serde_json::Value::Null;
    let mut histogram = vec![0usize; HISTOGRAM_BINS];
    let mut failures = 0usize;
    for (t, (report, provenance)) in outcomes.into_iter().enumerate() {
        let bin = ((report.ratio / HISTOGRAM_BIN_WIDTH).floor() as usize)
            .min(HISTOGRAM_BINS - 1);
        histogram[bin] += 1;
        if report.verdict.is_fail() {
            failures += 1;
        }
        if report.ratio > best_ratio {
            best_ratio = report.ratio;
            best_instance = json!({
                "trial": t,
                "seed": report.seed,
                "ratio": report.ratio,
                "report": serde_json::to_value(&report).expect("report serializes"),
                "provenance": provenance,
            });
        }
    }
    Ok(TightnessResult {
        best_ratio,
        best_instance,
        trials,
        failures,
        ratio_histogram: histogram,
        bin_width: HISTOGRAM_BIN_WIDTH,
    })
}
