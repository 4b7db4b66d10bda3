//! Randomized invariants over the public API. Case counts are modest;
//! the heavy sweeps live in the acceptance target.

use nalgebra::DVector;
use proptest::prelude::*;

use hhgeom::marginals::{project, section};
use hhgeom::polytope::{make_body, BodyFamily};
use hhgeom::{ConcaveFn, ConvexGauge, Polytope, Subspace};

fn pt(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, dim)
}

fn cloud(dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(pt(dim), dim + 2..dim + 9)
}

fn hull_of(rows: &[Vec<f64>]) -> Option<Polytope> {
    let p = Polytope::hull_from_rows(rows).ok()?;
    p.is_full_dim().then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Vertex -> halfspace -> vertex round trip reproduces the vertex set.
    #[test]
    fn hrep_round_trip(rows in (2usize..4).prop_flat_map(cloud)) {
        if let Some(p) = hull_of(&rows) {
            let facets: Vec<_> = p.hrep().unwrap().iter().map(|f| f.halfspace.clone()).collect();
            let q = Polytope::from_halfspaces(p.dim(), &facets).unwrap();
            prop_assert!(p.same_vertex_set(&q, 1e-7));
        }
    }

    /// Volume is translation invariant and scales like |c|^d.
    #[test]
    fn volume_translation_and_scaling(
        rows in (2usize..4).prop_flat_map(cloud),
        shift in pt(3),
        c in prop_oneof![-2.5f64..-0.5, 0.5f64..2.5],
    ) {
        if let Some(p) = hull_of(&rows) {
            let d = p.dim();
            let vol = p.volume().unwrap();
            let t = DVector::from_row_slice(&shift[..d]);
            let moved = p.translate(&t).unwrap();
            prop_assert!((moved.volume().unwrap() - vol).abs() <= 1e-9 * vol.max(1.0));
            let scale = nalgebra::DMatrix::identity(d, d) * c;
            let scaled = p.affine_image(&scale, &DVector::zeros(d)).unwrap();
            let want = c.abs().powi(d as i32) * vol;
            prop_assert!((scaled.volume().unwrap() - want).abs() <= 1e-9 * want.max(1.0));
        }
    }

    /// The centroid lies inside the body.
    #[test]
    fn centroid_is_interior(rows in (2usize..5).prop_flat_map(cloud)) {
        if let Some(p) = hull_of(&rows) {
            let c = p.centroid().unwrap();
            prop_assert!(p.contains(&c, 1e-9).unwrap());
        }
    }

    /// Support of the projection equals support of the body along the
    /// lifted direction.
    #[test]
    fn projection_preserves_support(
        rows in (2usize..4).prop_flat_map(cloud),
        raw_dir in pt(2),
    ) {
        if let Some(p) = hull_of(&rows) {
            let d = p.dim();
            let h = Subspace::coordinate(d, &[0, 1][..d.min(2) - 1]).unwrap();
            let mut dir = DVector::from_row_slice(&raw_dir[..h.dim()]);
            if dir.norm() < 1e-6 {
                dir[0] = 1.0;
            }
            let proj = project(&p, &h).unwrap();
            let a = proj.support(&dir).unwrap();
            let b = p.support(&h.lift(&dir)).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    /// Section vertices, lifted back to the ambient space, lie in the body.
    #[test]
    fn sections_lie_inside_the_body(rows in (3usize..4).prop_flat_map(cloud)) {
        if let Some(p) = hull_of(&rows) {
            let h = Subspace::coordinate(p.dim(), &[0]).unwrap();
            let proj = project(&p, &h).unwrap();
            let x = proj.centroid().unwrap();
            let s = section(&p, &h, &x).unwrap();
            let base = h.lift(&x);
            for y in s.vertices() {
                let ambient = &base + h.lift_complement(y);
                prop_assert!(p.contains(&ambient, 1e-7).unwrap());
            }
        }
    }

    /// The four-point inequality holds for every stock gauge on admissible
    /// triples.
    #[test]
    fn four_point_inequality(
        a in 0.0f64..3.0,
        gamma in 1.0f64..4.0,
        frac in 0.0f64..1.0,
        alpha in 1.0f64..4.0,
        seed in 0u64..64,
    ) {
        let r = frac * a / gamma;
        for phi in [
            ConvexGauge::power(alpha).unwrap(),
            ConvexGauge::exp_minus_one(),
            ConvexGauge::random_max_affine(3, seed).unwrap(),
        ] {
            prop_assert!(phi.four_point(a, r, gamma).unwrap());
        }
    }

    /// Gauges are nondecreasing on [0, inf).
    #[test]
    fn gauges_are_nondecreasing(
        s in 0.0f64..5.0,
        step in 0.0f64..5.0,
        alpha in 1.0f64..4.0,
        seed in 0u64..64,
    ) {
        for phi in [
            ConvexGauge::power(alpha).unwrap(),
            ConvexGauge::exp_minus_one(),
            ConvexGauge::random_max_affine(3, seed).unwrap(),
        ] {
            prop_assert!(phi.eval(s).unwrap() <= phi.eval(s + step).unwrap() + 1e-12);
        }
    }

    /// Piecewise-affine minima are midpoint concave on their domain.
    #[test]
    fn concave_functions_are_midpoint_concave(
        seed in 0u64..256,
        wa in 0.01f64..1.0,
        wb in 0.01f64..1.0,
    ) {
        let cube = make_body(&BodyFamily::Cube { dim: 2 }).unwrap();
        let f = ConcaveFn::random(cube.clone(), 3, seed).unwrap();
        // Two random points as convex combinations of the square's corners.
        let vs = cube.vertices();
        let x = (&vs[0] * wa + &vs[3] * (1.0 - wa)).clone_owned();
        let y = (&vs[1] * wb + &vs[2] * (1.0 - wb)).clone_owned();
        let mid = (&x + &y) * 0.5;
        let fx = f.eval(&x).unwrap();
        let fy = f.eval(&y).unwrap();
        let fm = f.eval(&mid).unwrap();
        prop_assert!(fm >= 0.5 * (fx + fy) - 1e-9);
    }
}
