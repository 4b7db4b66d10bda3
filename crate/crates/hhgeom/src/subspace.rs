//! Linear subspaces of R^n carrying explicit orthonormal frames for both
//! the subspace and its orthogonal complement.
//!
//! A [`Subspace`] fixes once and for all the coordinates used for
//! projections (subspace frame) and sections (complement frame), so
//! geometric operations never have to re-derive or re-align bases. Frames
//! satisfy the orthonormality invariant `|<q_i, q_j> - delta_ij| <= 1e-12`
//! jointly across both bases.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tol;

/// A proper nonzero linear subspace `H` of R^n with orthonormal bases of
/// `H` and `H^perp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<DVector<f64>>,
    complement: Vec<DVector<f64>>,
}

impl Subspace {
    /// Subspace spanned by `spanning` (need not be independent or
    /// normalized); the complement frame is completed automatically.
    ///
    /// The span must be proper: neither `{0}` nor all of R^n, since both
    /// projection and section coordinates must exist.
    pub fn new(ambient: usize, spanning: &[DVector<f64>]) -> Result<Subspace> {
        if ambient == 0 || ambient > tol::MAX_DIM {
            return Err(Error::DimensionOutOfRange(ambient));
        }
        for v in spanning {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: v.len(),
                });
            }
        }
        let basis = linalg::orthonormalize(spanning);
        if basis.is_empty() {
            return Err(Error::Degenerate("subspace span is zero".into()));
        }
        if basis.len() == ambient {
            return Err(Error::Degenerate(
                "subspace equals the ambient space; no complement remains".into(),
            ));
        }
        let complement = linalg::orthonormal_complement(&basis, ambient);
        Self::from_frames_unchecked(ambient, basis, complement)
    }

    /// Subspace from explicit orthonormal frames for `H` and `H^perp`.
    ///
    /// Use this when coordinates in the complement must match a frame chosen
    /// elsewhere (for example a rotated copy of another subspace); the
    /// joint orthonormality invariant is verified.
    pub fn from_frames(
        ambient: usize,
        basis: Vec<DVector<f64>>,
        complement: Vec<DVector<f64>>,
    ) -> Result<Subspace> {
        if ambient == 0 || ambient > tol::MAX_DIM {
            return Err(Error::DimensionOutOfRange(ambient));
        }
        if basis.is_empty() || complement.is_empty() || basis.len() + complement.len() != ambient {
            return Err(Error::Degenerate(format!(
                "frames of sizes {} and {} cannot split R^{}",
                basis.len(),
                complement.len(),
                ambient
            )));
        }
        let s = Subspace {
            ambient,
            basis,
            complement,
        };
        let defect = s.frame_defect();
        if defect > tol::FRAME {
            return Err(Error::Precondition {
                check: "orthonormal frames",
                condition: format!("joint frame defect {defect:.3e} exceeds {:.0e}", tol::FRAME),
            });
        }
        Ok(s)
    }

    fn from_frames_unchecked(
        ambient: usize,
        basis: Vec<DVector<f64>>,
        complement: Vec<DVector<f64>>,
    ) -> Result<Subspace> {
        let s = Subspace {
            ambient,
            basis,
            complement,
        };
        debug_assert!(s.frame_defect() <= tol::FRAME);
        Ok(s)
    }

    /// Coordinate subspace spanned by the unit vectors with the given
    /// indices; complement spanned by the remaining unit vectors in
    /// increasing index order.
    pub fn coordinate(ambient: usize, dims: &[usize]) -> Result<Subspace> {
        if ambient == 0 || ambient > tol::MAX_DIM {
            return Err(Error::DimensionOutOfRange(ambient));
        }
        if dims.is_empty() || dims.len() >= ambient {
            return Err(Error::Degenerate(format!(
                "{} coordinate directions do not form a proper subspace of R^{}",
                dims.len(),
                ambient
            )));
        }
        let mut seen = vec![false; ambient];
        let mut basis = Vec::with_capacity(dims.len());
        for &d in dims {
            if d >= ambient {
                return Err(Error::DimensionOutOfRange(d));
            }
            if seen[d] {
                return Err(Error::Degenerate(format!(
                    "coordinate direction {d} repeated"
                )));
            }
            seen[d] = true;
            let mut e = DVector::zeros(ambient);
            e[d] = 1.0;
            basis.push(e);
        }
        let complement = (0..ambient)
            .filter(|&k| !seen[k])
            .map(|k| {
                let mut e = DVector::zeros(ambient);
                e[k] = 1.0;
                e
            })
            .collect();
        Self::from_frames_unchecked(ambient, basis, complement)
    }

    /// The line spanned by `direction`.
    pub fn line(direction: &DVector<f64>) -> Result<Subspace> {
        if direction.norm() <= 1e-14 {
            return Err(Error::ZeroDirection);
        }
        Self::new(direction.len(), std::slice::from_ref(direction))
    }

    /// Uniformly random `dim`-dimensional subspace: orthonormalized Gaussian
    /// directions, deterministic per seed.
    pub fn random(ambient: usize, dim: usize, seed: u64) -> Result<Subspace> {
        if ambient == 0 || ambient > tol::MAX_DIM {
            return Err(Error::DimensionOutOfRange(ambient));
        }
        if dim == 0 || dim >= ambient {
            return Err(Error::Degenerate(format!(
                "requested subspace dimension {dim} in R^{ambient}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Rejection on near-dependence is theoretical-only for Gaussian
        // draws but keeps the constructor total.
        for _ in 0..16 {
            let spanning: Vec<DVector<f64>> = (0..dim)
                .map(|_| DVector::from_fn(ambient, |_, _| StandardNormal.sample(&mut rng)))
                .collect();
            let basis = linalg::orthonormalize(&spanning);
            if basis.len() == dim {
                let complement = linalg::orthonormal_complement(&basis, ambient);
                return Self::from_frames_unchecked(ambient, basis, complement);
            }
        }
        Err(Error::Sampling(
            "random subspace directions degenerate".into(),
        ))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the orthogonal complement.
    pub fn codim(&self) -> usize {
        self.complement.len()
    }

    pub fn basis(&self) -> &[DVector<f64>] {
        &self.basis
    }

    pub fn complement_basis(&self) -> &[DVector<f64>] {
        &self.complement
    }

    /// Subspace coordinates of the orthogonal projection of `x`.
    pub fn project_coords(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.basis.len(), |k, _| self.basis[k].dot(x))
    }

    /// Complement coordinates of the orthogonal projection of `x` onto
    /// `H^perp`.
    pub fn complement_coords(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.complement.len(), |k, _| self.complement[k].dot(x))
    }

    /// Ambient point of subspace coordinates.
    pub fn lift(&self, coords: &DVector<f64>) -> DVector<f64> {
        let mut x = DVector::zeros(self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            x.axpy(*c, b, 1.0);
        }
        x
    }

    /// Ambient point of complement coordinates.
    pub fn lift_complement(&self, coords: &DVector<f64>) -> DVector<f64> {
        let mut x = DVector::zeros(self.ambient);
        for (c, b) in coords.iter().zip(&self.complement) {
            x.axpy(*c, b, 1.0);
        }
        x
    }

    /// Ambient point with the given subspace and complement coordinates.
    pub fn point_from(&self, sub: &DVector<f64>, comp: &DVector<f64>) -> DVector<f64> {
        self.lift(sub) + self.lift_complement(comp)
    }

    /// Largest deviation of the joint frame from exact orthonormality.
    pub fn frame_defect(&self) -> f64 {
        let all: Vec<&DVector<f64>> = self.basis.iter().chain(&self.complement).collect();
        let mut worst = 0.0f64;
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.dot(b) - want).abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(coords)
    }

    #[test]
    fn coordinate_subspace_round_trips_points() {
        let h = Subspace::coordinate(4, &[0, 2]).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.codim(), 2);
        let x = v(&[1.0, 2.0, 3.0, 4.0]);
        let sub = h.project_coords(&x);
        let comp = h.complement_coords(&x);
        assert_eq!(sub.as_slice(), &[1.0, 3.0]);
        assert_eq!(comp.as_slice(), &[2.0, 4.0]);
        assert!((h.point_from(&sub, &comp) - &x).norm() < 1e-15);
    }

    #[test]
    fn skew_span_is_orthonormalized() {
        let h = Subspace::new(3, &[v(&[1.0, 1.0, 0.0]), v(&[1.0, 2.0, 0.0])]).unwrap();
        assert_eq!(h.dim(), 2);
        assert!(h.frame_defect() <= tol::FRAME);
        // Complement must be the e3 line up to sign.
        assert!((h.complement_basis()[0][2].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_subspaces_satisfy_frame_invariant() {
        for seed in 0..50u64 {
            let h = Subspace::random(5, 2, seed).unwrap();
            assert!(h.frame_defect() <= tol::FRAME, "seed {seed}");
        }
        let a = Subspace::random(4, 2, 7).unwrap();
        let b = Subspace::random(4, 2, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_improper_spans() {
        assert!(Subspace::new(3, &[]).is_err());
        assert!(Subspace::new(3, &[v(&[0.0, 0.0, 0.0])]).is_err());
        assert!(Subspace::new(
            2,
            &[v(&[1.0, 0.0]), v(&[0.0, 1.0])],
        )
        .is_err());
        assert!(Subspace::coordinate(3, &[1, 1]).is_err());
        assert!(Subspace::coordinate(3, &[3]).is_err());
    }

    #[test]
    fn from_frames_checks_joint_orthonormality() {
        let ok = Subspace::from_frames(
            3,
            vec![v(&[1.0, 0.0, 0.0])],
            vec![v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])],
        );
        assert!(ok.is_ok());
        let bad = Subspace::from_frames(
            3,
            vec![v(&[1.0, 0.0, 0.0])],
            vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 0.0, 1.0])],
        );
        assert!(bad.is_err());
    }
}
