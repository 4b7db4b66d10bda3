use nalgebra::DVector;

use crate::error::{Error, Result};

/// Closed halfspace `{x : <normal, x> <= offset}` with unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: DVector<f64>,
    pub offset: f64,
}

impl Halfspace {
    /// Build a halfspace from an unnormalized inequality `<a, x> <= b`.
    ///
    /// The pair is rescaled so the normal has unit length; a zero normal is
    /// rejected.
    pub fn new(a: DVector<f64>, b: f64) -> Result<Halfspace> {
        let norm = a.norm();
        if norm <= 1e-14 {
            return Err(Error::ZeroDirection);
        }
        Ok(Halfspace {
            normal: a / norm,
            offset: b / norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Signed distance of `x` to the boundary hyperplane: negative inside.
    pub fn signed_distance(&self, x: &DVector<f64>) -> f64 {
        self.normal.dot(x) - self.offset
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.signed_distance(x) <= tol
    }
}
