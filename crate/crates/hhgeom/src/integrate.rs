//! Integral estimates and the deterministic integration engines shared by
//! the inequality checks: batched Monte Carlo means over polytopes and
//! low-order quadrature rules.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::polytope::{batch_rng, Polytope, UniformSampler, BATCH};

/// How an [`IntegralEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMethod {
    /// Analytic value; no numerical error beyond rounding.
    ClosedForm,
    /// Deterministic quadrature; error controlled by the rule, not sampling.
    Quadrature,
    /// Seeded Monte Carlo; `std_error` is the CLT standard error.
    MonteCarlo,
}

/// A numerical integral with an error model attached.
///
/// `std_error` is zero exactly when the method is deterministic, so verdicts
/// can use `value ± 3 std_error` uniformly across paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: IntegrationMethod,
    /// Sample count (Monte Carlo) or evaluation count (quadrature); 0 for
    /// closed forms.
    pub samples: usize,
}

impl IntegralEstimate {
    pub fn closed_form(value: f64) -> IntegralEstimate {
        IntegralEstimate {
            value,
            std_error: 0.0,
            method: IntegrationMethod::ClosedForm,
            samples: 0,
        }
    }

    pub fn quadrature(value: f64, evaluations: usize) -> IntegralEstimate {
        IntegralEstimate {
            value,
            std_error: 0.0,
            method: IntegrationMethod::Quadrature,
            samples: evaluations,
        }
    }

    pub fn monte_carlo(value: f64, std_error: f64, samples: usize) -> IntegralEstimate {
        IntegralEstimate {
            value,
            std_error,
            method: IntegrationMethod::MonteCarlo,
            samples,
        }
    }

    /// Rescale the estimate (and its error) by a nonnegative constant.
    pub fn scaled(self, c: f64) -> IntegralEstimate {
        IntegralEstimate {
            value: self.value * c,
            std_error: self.std_error * c.abs(),
            ..self
        }
    }
}

/// Monte Carlo mean of `g` over the uniform distribution on `body`.
///
/// Draws are organized in fixed-size batches with per-batch RNG streams and
/// folded in batch order, so the result is bit-identical for any execution
/// schedule. Error is the CLT standard error of the mean.
pub(crate) fn mc_mean<G: Fn(&DVector<f64>) -> f64>(
    body: &Polytope,
    g: G,
    samples: usize,
    seed: u64,
) -> Result<IntegralEstimate> {
    assert!(samples > 0, "monte carlo needs at least one sample");
    let sampler = UniformSampler::new(body)?;
    let batches = samples.div_ceil(BATCH);
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    for k in 0..batches {
        let mut rng = batch_rng(seed, k as u64);
        let n = BATCH.min(samples - k * BATCH);
        let mut bsum = 0.0f64;
        let mut bsumsq = 0.0f64;
        for _ in 0..n {
            let x = sampler.draw(&mut rng);
            let v = g(&x);
            bsum += v;
            bsumsq += v * v;
        }
        sum += bsum;
        sumsq += bsumsq;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    Ok(IntegralEstimate::monte_carlo(
        mean,
        (var / n).sqrt(),
        samples,
    ))
}

/// Composite Simpson rule with `intervals` uniform panels (rounded up to
/// even). Exact for cubics on each panel.
#[cfg(test)]
pub(crate) fn simpson<G: FnMut(f64) -> f64>(mut g: G, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals.max(2).next_multiple_of(2);
    let h = (b - a) / m as f64;
    let mut acc = g(a) + g(b);
    for k in 1..m {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(a + h * k as f64);
    }
    acc * h / 3.0
}

/// Five-point Gauss-Legendre rule on `[a, b]`; exact through degree 9.
pub(crate) fn gauss5<G: FnMut(f64) -> f64>(mut g: G, a: f64, b: f64) -> f64 {
    const X: [f64; 5] = [
        -0.906179845938664,
        -0.5384693101056831,
        0.0,
        0.5384693101056831,
        0.906179845938664,
    ];
    const W: [f64; 5] = [
        0.23692688505618908,
        0.47862867049936647,
        0.5688888888888889,
        0.47862867049936647,
        0.23692688505618908,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in X.iter().zip(W) {
        acc += w * g(mid + half * x);
    }
    acc * half
}
