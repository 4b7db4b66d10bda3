//! Acceptance gate: the headline constants, closed forms, and property
//! suites, one printed pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hhgeom::functional::{check_gauge_hh, check_log_concave_mean, check_power_mean_bound};
use hhgeom::marginals::{check_brunn_concavity, fubini_volume, project, section};
use hhgeom::polytope::{make_body, unit_box, BodyFamily};
use hhgeom::symmetrize::{find_tstar, schwarz_profile, schwarz_volume, CylinderFamily};
use hhgeom::verify::{
    check_milman_pajor, check_projection_centroid, check_santos_bound,
    check_section_projection_bound, construct_equality_slab, tightness_search, CheckKind,
    SearchFamily,
};
use hhgeom::{ConcaveFn, ConvexGauge, IntegrationMethod, Polytope, Subspace, Verdict};

fn conclude(name: &str, started: Instant, failures: Vec<String>) {
    let secs = started.elapsed().as_secs_f64();
    if failures.is_empty() {
        println!("acceptance {name}: pass ({secs:.1}s)");
    } else {
        println!("acceptance {name}: fail ({secs:.1}s)");
        for f in &failures {
            println!("  {f}");
        }
        panic!("{name}: {} check(s) failed", failures.len());
    }
}

fn v(coords: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(coords)
}

fn e1(n: usize) -> DVector<f64> {
    let mut u = DVector::zeros(n);
    u[0] = 1.0;
    u
}

/// Slab bound |K| <= (2^n/n) |K cap e1^perp|: exact equality on the scaled
/// slabs, and no random slab-normalized hull beats the constant.
#[test]
fn slab_constant_is_sharp() {
    let started = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=5usize {
        let base = unit_box(n - 1).unwrap();
        let (k, _h) = construct_equality_slab(n, 1, None, &base).unwrap();
        let rep = check_santos_bound(&k).unwrap();
        if (rep.ratio - 1.0).abs() > 1e-9 {
            bad.push(format!("equality slab n={n}: ratio {}", rep.ratio));
        }
        let family = SearchFamily::SlabNormalizedHull {
            dim: n,
            points: n + 4,
        };
        let res = tightness_search(&family, CheckKind::SlabSharp, 1000, 0xA11CE + n as u64)
            .unwrap();
        if res.failures != 0 || res.best_ratio > 1.0 + 1e-9 {
            bad.push(format!(
                "random slab-normalized n={n}: {} failures, best ratio {}",
                res.failures, res.best_ratio
            ));
        }
    }
    conclude("slab sharpness (constant 2^n/n)", started, bad);
}

/// Section-projection bound at n = 4, i in {1, 2}: the equality slabs hit
/// the constant 2^(n-i)/(n-i+1), and 500 random symmetric hulls all pass.
#[test]
fn section_projection_constant_is_sharp_in_dim_four() {
    let started = Instant::now();
    let mut bad = Vec::new();
    let seg = make_body(&BodyFamily::Cube { dim: 1 }).unwrap();
    for i in [1usize, 2] {
        let c0 = if i == 1 { None } else { Some(&seg) };
        let c1 = unit_box(4 - i).unwrap();
        let (k, h) = construct_equality_slab(4, i, c0, &c1).unwrap();
        let rep = check_section_projection_bound(&k, &h).unwrap();
        if (rep.ratio - 1.0).abs() > 1e-9 {
            bad.push(format!("equality slab i={i}: ratio {}", rep.ratio));
        }
        let want = 2f64.powi((4 - i) as i32) / (4 - i + 1) as f64;
        let got = rep.instance["constant"].as_f64().unwrap();
        if (got - want).abs() > 1e-15 {
            bad.push(format!("i={i}: constant {got}, expected {want}"));
        }
        let family = SearchFamily::SymmetricHull {
            dim: 4,
            points: 12,
            subspace_dim: i,
        };
        let res = tightness_search(&family, CheckKind::SectionProjection, 250, 77 + i as u64)
            .unwrap();
        if res.failures != 0 || res.best_ratio > 1.0 + 1e-9 {
            bad.push(format!(
                "random symmetric hulls i={i}: {} failures, best ratio {}",
                res.failures, res.best_ratio
            ));
        }
    }
    conclude("section-projection constant 2^(n-i)/(n-i+1)", started, bad);
}

/// Gauge mean bound on 200 random instances (dims 2..4, min-of-3-affine f,
/// the four stock gauges) at 2e5 samples, plus the cylinder equality family
/// driven through the Monte Carlo path.
#[test]
fn gauge_mean_bound_survives_random_instances() {
    let started = Instant::now();
    let mut bad = Vec::new();
    let gauges = [
        ConvexGauge::power(1.0).unwrap(),
        ConvexGauge::power(2.0).unwrap(),
        ConvexGauge::power(3.0).unwrap(),
        ConvexGauge::exp_minus_one(),
    ];
    for idx in 0..200usize {
        let dim = 2 + idx % 3;
        let body = make_body(&BodyFamily::RandomHull {
            dim,
            points: dim + 5,
            seed: 9000 + idx as u64,
            symmetric: true,
        })
        .unwrap();
        let f = ConcaveFn::random(body.clone(), 3, 500 + idx as u64).unwrap();
        let phi = &gauges[idx % 4];
        let rep = check_gauge_hh(&body, &f, phi, 200_000, 31_000 + idx as u64).unwrap();
        if rep.verdict.is_fail() {
            bad.push(format!(
                "instance {idx} dim {dim} gauge {}: ratio {}, slack {}",
                phi.describe(),
                rep.ratio,
                rep.slack
            ));
        }
    }
    let base = make_body(&BodyFamily::CrossPolytope { dim: 2 }).unwrap();
    let cyl = make_body(&BodyFamily::GeneralizedCylinder {
        x0: vec![1.0, 0.0, 0.0],
        base,
    })
    .unwrap();
    // min(1 + x1, 10) equals 1 + x1 on the cylinder but is not a single
    // piece, which forces the sampling path on the equality family.
    let f = ConcaveFn::new(
        vec![
            (v(&[1.0, 0.0, 0.0]), 1.0),
            (v(&[0.0, 0.0, 0.0]), 10.0),
        ],
        cyl.clone(),
    )
    .unwrap();
    for (j, phi) in gauges.iter().enumerate() {
        let rep = check_gauge_hh(&cyl, &f, phi, 200_000, 600 + j as u64).unwrap();
        if (rep.lhs - rep.rhs).abs() > rep.tolerance {
            bad.push(format!(
                "cylinder equality gauge {}: |lhs - rhs| = {} > tolerance {}",
                phi.describe(),
                (rep.lhs - rep.rhs).abs(),
                rep.tolerance
            ));
        }
    }
    conclude("gauge mean bound on random instances", started, bad);
}

/// f = 1 + t on [-1, 1] with the power gauges: both sides equal
/// 2^a/(a+1) through the exact path.
#[test]
fn segment_power_closed_forms_are_exact() {
    let started = Instant::now();
    let mut bad = Vec::new();
    let seg = make_body(&BodyFamily::Cube { dim: 1 }).unwrap();
    let f = ConcaveFn::affine(v(&[1.0]), 1.0, seg.clone()).unwrap();
    for alpha in [1.0, 2.0, 3.0] {
        let rep = check_power_mean_bound(&seg, &f, alpha, 0, 0).unwrap();
        let want = 2f64.powf(alpha) / (alpha + 1.0);
        if (rep.lhs - want).abs() > 1e-12 || (rep.rhs - want).abs() > 1e-12 {
            bad.push(format!(
                "alpha {alpha}: lhs {} rhs {} want {want}",
                rep.lhs, rep.rhs
            ));
        }
        if rep.verdict != Verdict::Equality {
            bad.push(format!("alpha {alpha}: verdict {:?}", rep.verdict));
        }
    }
    conclude("segment power closed form 2^a/(a+1)", started, bad);
}

/// Log-concave means: u = 1 + t on [-1, 1] gives (e^2 - 1)/2 on both sides,
/// and the separable square gives e - 2 + 1/e <= sinh(1). Exact paths at
/// closed-form precision, sampled paths within their tolerance.
#[test]
fn log_concave_mean_closed_forms() {
    let started = Instant::now();
    let mut bad = Vec::new();
    let e = std::f64::consts::E;
    let seg = make_body(&BodyFamily::Cube { dim: 1 }).unwrap();

    let u = ConcaveFn::new_signed(vec![(v(&[1.0]), 1.0)], seg.clone()).unwrap();
    let rep = check_log_concave_mean(&seg, &u, 0, 0).unwrap();
    let half_e2 = (e * e - 1.0) / 2.0;
    if (rep.lhs - half_e2).abs() > 1e-9 || (rep.rhs - half_e2).abs() > 1e-12 {
        bad.push(format!(
            "segment exact: lhs {} rhs {} want {half_e2}",
            rep.lhs, rep.rhs
        ));
    }
    if rep.verdict != Verdict::Equality {
        bad.push(format!("segment exact verdict {:?}", rep.verdict));
    }
    // min(1 + t, 5) equals 1 + t on the segment but defeats the exact path.
    let u_mc =
        ConcaveFn::new_signed(vec![(v(&[1.0]), 1.0), (v(&[0.0]), 5.0)], seg.clone()).unwrap();
    let rep = check_log_concave_mean(&seg, &u_mc, 200_000, 3).unwrap();
    if (rep.lhs - half_e2).abs() > rep.tolerance {
        bad.push(format!(
            "segment sampled: lhs {} off closed form by {} > tolerance {}",
            rep.lhs,
            (rep.lhs - half_e2).abs(),
            rep.tolerance
        ));
    }

    let sq = make_body(&BodyFamily::Cube { dim: 2 }).unwrap();
    let u = ConcaveFn::new_signed(vec![(v(&[0.5, 0.5]), 0.0)], sq.clone()).unwrap();
    let rep = check_log_concave_mean(&sq, &u, 0, 0).unwrap();
    let lhs_closed = e - 2.0 + 1.0 / e;
    let rhs_closed = (e - 1.0 / e) / 2.0;
    if (rep.lhs - lhs_closed).abs() > 1e-9 || (rep.rhs - rhs_closed).abs() > 1e-12 {
        bad.push(format!(
            "square exact: lhs {} (want {lhs_closed}), rhs {} (want {rhs_closed})",
            rep.lhs, rep.rhs
        ));
    }
    if rep.lhs > rep.rhs || rep.verdict.is_fail() {
        bad.push(format!("square exact: lhs {} > rhs {}", rep.lhs, rep.rhs));
    }
    let u_mc =
        ConcaveFn::new_signed(vec![(v(&[0.5, 0.5]), 0.0), (v(&[0.0, 0.0]), 5.0)], sq.clone())
            .unwrap();
    let rep = check_log_concave_mean(&sq, &u_mc, 200_000, 5).unwrap();
    if (rep.lhs - lhs_closed).abs() > rep.tolerance {
        bad.push(format!(
            "square sampled: lhs {} off closed form by {} > tolerance {}",
            rep.lhs,
            (rep.lhs - lhs_closed).abs(),
            rep.tolerance
        ));
    }
    conclude("log-concave mean closed forms", started, bad);
}

/// Cone comparison at n = 3: centroid heights 1/4 and 1/3, section lengths
/// 3/2 and 4/3 on the pyramid over the square, and the strict ratio chain
/// centroid-section < projection-centroid < 1 on the m-gon cones.
#[test]
fn cone_centers_sections_and_ratio_ordering() {
    let started = Instant::now();
    let mut bad = Vec::new();
    let base = make_body(&BodyFamily::Cube { dim: 2 }).unwrap();
    let pyr = make_body(&BodyFamily::ConeOverBase {
        base,
        apex: vec![0.0, 0.0, 1.0],
    })
    .unwrap();
    let h = Subspace::coordinate(3, &[0, 2]).unwrap();

    let c = pyr.centroid().unwrap();
    if (c[2] - 0.25).abs() > 1e-9 || c[0].abs() > 1e-9 || c[1].abs() > 1e-9 {
        bad.push(format!("pyramid centroid {:?}", c.as_slice()));
    }
    let pc = project(&pyr, &h).unwrap().centroid().unwrap();
    if (pc[1] - 1.0 / 3.0).abs() > 1e-9 {
        bad.push(format!("projection centroid height {}", pc[1]));
    }
    let s_body = section(&pyr, &h, &v(&[0.0, 0.25]))
        .unwrap()
        .ambient_volume()
        .unwrap();
    if (s_body - 1.5).abs() > 1e-9 {
        bad.push(format!("section at body centroid: {s_body}, want 3/2"));
    }
    let s_proj = section(&pyr, &h, &v(&[0.0, 1.0 / 3.0]))
        .unwrap()
        .ambient_volume()
        .unwrap();
    if (s_proj - 4.0 / 3.0).abs() > 1e-9 {
        bad.push(format!("section at projection centroid: {s_proj}, want 4/3"));
    }
    // The square base has area 4, so the projection-centroid bound is tight
    // on the pyramid while the centroid-section bound stays strictly below.
    let mp = check_milman_pajor(&pyr, &h, 0, 0).unwrap();
    let pcb = check_projection_centroid(&pyr, &h).unwrap();
    if !(mp.ratio < pcb.ratio - 1e-6 && (pcb.ratio - 1.0).abs() <= 1e-9) {
        bad.push(format!(
            "pyramid ratios: centroid-section {} projection-centroid {}",
            mp.ratio, pcb.ratio
        ));
    }
    // Regular m-gon bases are inscribed in the unit disk, so their area is
    // strictly below 4 and the whole chain is strict.
    for m in [4usize, 8, 12] {
        let gon = hhgeom::polytope::regular_polygon(m).unwrap();
        let cone = make_body(&BodyFamily::ConeOverBase {
            base: gon,
            apex: vec![0.0, 0.0, 1.0],
        })
        .unwrap();
        let mp = check_milman_pajor(&cone, &h, 0, 0).unwrap();
        let pcb = check_projection_centroid(&cone, &h).unwrap();
        if !(mp.ratio < pcb.ratio - 1e-6 && pcb.ratio < 1.0 - 1e-6) {
            bad.push(format!(
                "{m}-gon cone ratios: centroid-section {} projection-centroid {}",
                mp.ratio, pcb.ratio
            ));
        }
    }
    conclude("cone center comparison", started, bad);
}

/// Schwarz symmetrization at 4001 knots preserves volume to 1e-4 relative
/// on the cube, the cross-polytope, and 50 random hulls; the cross-polytope
/// cylinder threshold sits at 1 - 1/sqrt(3).
#[test]
fn schwarz_symmetrization_preserves_volume() {
    let started = Instant::now();
    let mut bad = Vec::new();
    let mut check_body = |label: String, k: &Polytope| {
        let p = schwarz_profile(k, &e1(k.dim()), 4001).unwrap();
        let vol = k.volume().unwrap();
        let rel = (schwarz_volume(&p) / vol - 1.0).abs();
        if rel > 1e-4 {
            bad.push(format!("{label}: relative volume drift {rel}"));
        }
    };
    check_body(
        "cube".into(),
        &make_body(&BodyFamily::Cube { dim: 3 }).unwrap(),
    );
    let cross = make_body(&BodyFamily::CrossPolytope { dim: 3 }).unwrap();
    check_body("cross-polytope".into(), &cross);
    for j in 0..50u64 {
        let dim = 3 + (j % 2) as usize;
        let k = make_body(&BodyFamily::RandomHull {
            dim,
            points: dim + 6,
            seed: 4242 + j,
            symmetric: false,
        })
        .unwrap();
        check_body(format!("random body {j} (dim {dim})"), &k);
    }

    let p = schwarz_profile(&cross, &e1(3), 4001).unwrap();
    let fam = CylinderFamily::new(p, 0.0).unwrap();
    let t = find_tstar(&fam, 1e-9).unwrap();
    let want = 1.0 - 1.0 / 3.0f64.sqrt();
    if (t - want).abs() > 1e-6 {
        bad.push(format!("cross-polytope threshold {t}, want {want}"));
    }
    conclude("schwarz volume preservation", started, bad);
}

/// Property suites: Brunn-profile concavity over 1e4 segments, the
/// four-point gauge inequality over 1e4 triples per gauge, Fubini
/// consistency per method, and affine equivariance at 1e-9.
#[test]
fn geometric_property_suites() {
    let started = Instant::now();
    let mut bad = Vec::new();

    let cube3 = make_body(&BodyFamily::Cube { dim: 3 }).unwrap();
    let cross3 = make_body(&BodyFamily::CrossPolytope { dim: 3 }).unwrap();
    let rand4 = make_body(&BodyFamily::RandomHull {
        dim: 4,
        points: 10,
        seed: 77,
        symmetric: true,
    })
    .unwrap();
    let pyr = make_body(&BodyFamily::ConeOverBase {
        base: make_body(&BodyFamily::Cube { dim: 2 }).unwrap(),
        apex: vec![0.0, 0.0, 1.0],
    })
    .unwrap();

    let pairs: [(&str, &Polytope, Subspace); 4] = [
        ("cube", &cube3, Subspace::coordinate(3, &[0, 1]).unwrap()),
        ("cross", &cross3, Subspace::coordinate(3, &[0]).unwrap()),
        ("random 4d", &rand4, Subspace::coordinate(4, &[0, 1]).unwrap()),
        ("pyramid", &pyr, Subspace::coordinate(3, &[0, 2]).unwrap()),
    ];
    for (label, k, h) in &pairs {
        let rep = check_brunn_concavity(k, h, 2500, 13).unwrap();
        if rep.violations != 0 || rep.tolerance > 1e-7 {
            bad.push(format!(
                "brunn concavity on {label}: {} violations (worst {})",
                rep.violations, rep.worst
            ));
        }
    }

    let gauges = [
        ConvexGauge::power(1.0).unwrap(),
        ConvexGauge::power(2.0).unwrap(),
        ConvexGauge::power(3.0).unwrap(),
        ConvexGauge::exp_minus_one(),
        ConvexGauge::random_max_affine(4, 1).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for phi in &gauges {
        let mut violations = 0usize;
        for _ in 0..10_000 {
            let a = 3.0 * rng.random::<f64>();
            let gamma = 1.0 + 3.0 * rng.random::<f64>();
            let r = rng.random::<f64>() * a / gamma;
            if !phi.four_point(a, r, gamma).unwrap() {
                violations += 1;
            }
        }
        if violations != 0 {
            bad.push(format!(
                "four-point on {}: {violations} violations",
                phi.describe()
            ));
        }
    }

    let fubini_cases: [(&str, &Polytope, Subspace); 3] = [
        ("cube/e1", &cube3, Subspace::line(&e1(3)).unwrap()),
        (
            "pyramid/e3",
            &pyr,
            Subspace::line(&v(&[0.0, 0.0, 1.0])).unwrap(),
        ),
        (
            "random 4d/2d",
            &rand4,
            Subspace::coordinate(4, &[0, 1]).unwrap(),
        ),
    ];
    for (label, k, h) in &fubini_cases {
        let grid = if h.dim() == 1 { 512 } else { 200_000 };
        let est = fubini_volume(k, h, grid, 21).unwrap();
        let vol = k.volume().unwrap();
        let tol = match est.method {
            IntegrationMethod::MonteCarlo => 3.0 * est.std_error,
            _ => 1e-6 * vol,
        };
        if (est.value - vol).abs() > tol {
            bad.push(format!(
                "fubini on {label}: estimate {} vs volume {vol} (tol {tol})",
                est.value
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4141);
    let bodies = [&cube3, &cross3, &rand4];
    for trial in 0..20 {
        let k = bodies[trial % 3];
        let n = k.dim();
        let a = DMatrix::from_fn(n, n, |r, c| {
            let jitter = rng.random::<f64>() - 0.5;
            if r == c {
                1.5 + jitter
            } else {
                jitter
            }
        });
        let t = DVector::from_fn(n, |_, _| 2.0 * rng.random::<f64>() - 1.0);
        let image = k.affine_image(&a, &t).unwrap();
        let want_vol = a.determinant().abs() * k.volume().unwrap();
        let got_vol = image.volume().unwrap();
        if (got_vol - want_vol).abs() > 1e-9 * want_vol.max(1.0) {
            bad.push(format!(
                "affine volume trial {trial}: {got_vol} vs {want_vol}"
            ));
        }
        let want_c = &a * k.centroid().unwrap() + &t;
        let got_c = image.centroid().unwrap();
        if (&got_c - &want_c).norm() > 1e-9 * (1.0 + want_c.norm()) {
            bad.push(format!("affine centroid trial {trial}: drift {}", (&got_c - &want_c).norm()));
        }
    }

    conclude("property suites", started, bad);
}
