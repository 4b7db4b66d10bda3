//! Concave functions as minima of affine pieces over a polytope domain.
//!
//! The min-of-affines shape is closed under everything the checks build
//! (supporting affine functions, fitted section profiles), its minimum over
//! a polytope sits at a vertex, and single pieces admit exact integration.
//! Nonnegative functions are certified at construction: the vertex minimum
//! must clear `-1e-7`, after which evaluation clamps at zero so gauges with
//! domain `[0, inf)` never see a stray negative.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::tol;

#[derive(Debug, Clone)]
pub struct ConcaveFn {
    pieces: Vec<(DVector<f64>, f64)>,
    domain: Polytope,
    clamped: bool,
}

impl ConcaveFn {
    /// A nonnegative concave function: certifies `min >= -1e-7` over the
    /// domain's vertices (the minimum of a concave function over a polytope
    /// is attained there), then clamps evaluations at zero.
    pub fn new(pieces: Vec<(DVector<f64>, f64)>, domain: Polytope) -> Result<ConcaveFn> {
        let f = Self::new_signed(pieces, domain)?;
        let min = f.min_vertex_value();
        if min < -tol::NUM {
            return Err(Error::NotNonnegative { min, tol: tol::NUM });
        }
        Ok(ConcaveFn { clamped: true, ..f })
    }

    /// A concave function with no sign requirement (used as the exponent of
    /// log-concave densities). Evaluations are not clamped.
    pub fn new_signed(pieces: Vec<(DVector<f64>, f64)>, domain: Polytope) -> Result<ConcaveFn> {
        if pieces.is_empty() {
            return Err(Error::EmptyInput("concave function with no pieces"));
        }
        if !domain.is_full_dim() {
            return Err(Error::Degenerate(
                "concave function domain must be full-dimensional".into(),
            ));
        }
        for (a, b) in &pieces {
            if a.len() != domain.dim() {
                return Err(Error::DimensionMismatch {
                    expected: domain.dim(),
                    got: a.len(),
                });
            }
            if a.iter().any(|c| !c.is_finite()) || !b.is_finite() {
                return Err(Error::Instance("non-finite affine piece".into()));
            }
        }
        domain.hrep()?;
        Ok(ConcaveFn {
            pieces,
            domain,
            clamped: false,
        })
    }

    /// Single affine piece `<a, x> + b`, certified nonnegative.
    pub fn affine(a: DVector<f64>, b: f64, domain: Polytope) -> Result<ConcaveFn> {
        Self::new(vec![(a, b)], domain)
    }

    /// Deterministic random nonnegative concave function: `piece_count`
    /// pieces with Gaussian-ish slopes, intercepts shifted up until the
    /// vertex minimum clears 0.05.
    pub fn random(domain: Polytope, piece_count: usize, seed: u64) -> Result<ConcaveFn> {
        let n = domain.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pieces: Vec<(DVector<f64>, f64)> = (0..piece_count.max(1))
            .map(|_| {
                let a = DVector::from_fn(n, |_, _| 0.8 * (rng.random::<f64>() - 0.5));
                let b = 0.8 + 0.4 * rng.random::<f64>();
                (a, b)
            })
            .collect();
        let f = Self::new_signed(pieces.clone(), domain.clone())?;
        let min = f.min_vertex_value();
        if min < 0.05 {
            for p in &mut pieces {
                p.1 += 0.05 - min;
            }
        }
        Self::new(pieces, domain)
    }

    pub fn pieces(&self) -> &[(DVector<f64>, f64)] {
        &self.pieces
    }

    pub fn domain(&self) -> &Polytope {
        &self.domain
    }

    pub fn is_single_piece(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn is_clamped(&self) -> bool {
        self.clamped
    }

    /// The min-of-affines value with no clamp and no domain test.
    pub(crate) fn raw_value(&self, x: &DVector<f64>) -> f64 {
        self.pieces
            .iter()
            .map(|(a, b)| a.dot(x) + b)
            .fold(f64::INFINITY, f64::min)
    }

    /// Function value with the clamp applied (when certified nonnegative)
    /// but no domain test; integrators call this on points they already
    /// know to be inside.
    pub(crate) fn value_unchecked(&self, x: &DVector<f64>) -> f64 {
        let v = self.raw_value(x);
        if self.clamped {
            v.max(0.0)
        } else {
            v
        }
    }

    /// Value at `x`, which must lie in the domain (within the geometric
    /// tolerance at the domain's scale).
    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.dim(),
                got: x.len(),
            });
        }
        let eps = tol::geom_for(self.domain.vertex_scale().max(x.norm()));
        let worst = self
            .domain
            .hrep()?
            .iter()
            .map(|f| f.halfspace.signed_distance(x))
            .fold(f64::NEG_INFINITY, f64::max);
        if worst > eps {
            return Err(Error::OutsideDomain(worst));
        }
        Ok(self.value_unchecked(x))
    }

    /// Minimum of the (unclamped) function over the domain's vertices,
    /// which is its minimum over the whole domain.
    pub fn min_vertex_value(&self) -> f64 {
        self.domain
            .vertices()
            .iter()
            .map(|v| self.raw_value(v))
            .fold(f64::INFINITY, f64::min)
    }
}
