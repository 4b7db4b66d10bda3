//! Uniform sampling from polytopes.
//!
//! Points are drawn by picking a triangulation simplex with probability
//! proportional to its volume, then a Dirichlet(1, ..., 1) barycentric
//! combination of its vertices. Draws consume a fixed number of RNG values,
//! and the stream is partitioned into fixed-size batches seeded from
//! `(seed, batch index)`, so results are identical for any execution order
//! or thread count.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polytope::{Polytope, Simplex};

/// Number of draws per RNG stream; `(seed, batch)` determines the stream.
pub(crate) const BATCH: usize = 8192;

/// RNG for batch `k` of a sampling run.
pub(crate) fn batch_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k.wrapping_add(1));
    rng
}

/// Volume-weighted simplex chooser over a triangulation.
pub(crate) struct UniformSampler<'a> {
    body: &'a Polytope,
    simplices: &'a [Simplex],
    cumulative: Vec<f64>,
    total: f64,
}

impl<'a> UniformSampler<'a> {
    pub(crate) fn new(body: &'a Polytope) -> Result<UniformSampler<'a>> {
        let simplices = body.triangulation()?;
        let mut cumulative = Vec::with_capacity(simplices.len());
        let mut total = 0.0;
        for s in simplices {
            total += s.volume();
            cumulative.push(total);
        }
        if total <= 0.0 {
            return Err(Error::Sampling(
                "cannot sample a polytope of zero volume".into(),
            ));
        }
        Ok(UniformSampler {
            body,
            simplices,
            cumulative,
            total,
        })
    }

    /// One uniform draw, in ambient coordinates.
    pub(crate) fn draw(&self, rng: &mut ChaCha8Rng) -> DVector<f64> {
        let u: f64 = rng.random::<f64>() * self.total;
        let idx = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.min(self.simplices.len() - 1),
        };
        let verts = self.simplices[idx].vertices();
        // Dirichlet(1,...,1) via normalized exponentials.
        let mut weights = Vec::with_capacity(verts.len());
        let mut sum = 0.0;
        for _ in 0..verts.len() {
            let e = -(1.0 - rng.random::<f64>()).ln();
            weights.push(e);
            sum += e;
        }
        let d = verts[0].len();
        let mut local = DVector::zeros(d);
        for (w, v) in weights.iter().zip(verts) {
            local.axpy(w / sum, v, 1.0);
        }
        if self.body.chart().is_identity() {
            local
        } else {
            self.body.chart().to_ambient(&local)
        }
    }
}

/// `count` independent uniform points from `body`, deterministic in `seed`.
///
/// `count = 0` returns an empty list. Sampling is uniform with respect to
/// Lebesgue measure on the affine hull, so lower-dimensional bodies are
/// sampled within their hull.
pub fn sample_uniform(body: &Polytope, count: usize, seed: u64) -> Result<Vec<DVector<f64>>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let sampler = UniformSampler::new(body)?;
    let mut out = Vec::with_capacity(count);
    let batches = count.div_ceil(BATCH);
    for k in 0..batches {
        let mut rng = batch_rng(seed, k as u64);
        let n = BATCH.min(count - k * BATCH);
        for _ in 0..n {
            out.push(sampler.draw(&mut rng));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{make_body, BodyFamily};

    #[test]
    fn samples_lie_inside_and_are_deterministic() {
        let p = make_body(&BodyFamily::CrossPolytope { dim: 3 }).unwrap();
        let a = sample_uniform(&p, 500, 7).unwrap();
        let b = sample_uniform(&p, 500, 7).unwrap();
        assert_eq!(a.len(), 500);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
        for x in &a {
            assert!(p.contains(x, 1e-9).unwrap());
        }
    }

    #[test]
    fn sample_mean_approaches_centroid() {
        let p = Polytope::hull_from_rows(&[
            vec![0.0, 0.0],
            vec![3.0, 0.0],
            vec![0.0, 3.0],
        ])
        .unwrap();
        let pts = sample_uniform(&p, 40_000, 11).unwrap();
        let mut mean = DVector::zeros(2);
        for x in &pts {
            mean += x;
        }
        mean /= pts.len() as f64;
        let c = p.centroid().unwrap();
        // Component std dev is ~0.7; 3 sigma of the mean over 4e4 samples.
        assert!((mean - c).norm() < 3.0 * 0.75 / (pts.len() as f64).sqrt() * 2.0);
    }

    #[test]
    fn zero_count_is_empty_and_zero_volume_errors() {
        let p = make_body(&BodyFamily::Cube { dim: 2 }).unwrap();
        assert!(sample_uniform(&p, 0, 1).unwrap().is_empty());

        let seg = Polytope::hull_from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        // A segment in the plane still samples: volume lives on its hull.
        let pts = sample_uniform(&seg, 10, 1).unwrap();
        assert_eq!(pts.len(), 10);
        for x in &pts {
            assert!(x[1].abs() < 1e-12);
        }
    }
}
