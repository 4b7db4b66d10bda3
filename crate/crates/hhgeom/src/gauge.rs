//! Convex gauges: the outer functions of every averaged bound.
//!
//! A gauge is convex on `[0, inf)`, vanishes at zero, and is nondecreasing;
//! the three shapes here (powers, shifted exponential, maxima of
//! nonnegative-slope affine pieces) cover everything the checks need while
//! keeping closed-form right-hand sides available.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexGauge {
    /// `t^alpha` with `alpha >= 1`.
    Power { alpha: f64 },
    /// `e^t - 1`.
    ExpMinusOne,
    /// `max_k (m_k t + c_k)` with every slope `m_k >= 0`, shifted so the
    /// value at zero is exactly zero.
    MaxAffine { pieces: Vec<(f64, f64)> },
}

impl ConvexGauge {
    pub fn power(alpha: f64) -> Result<ConvexGauge> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidGauge(format!(
                "power exponent {alpha} below one"
            )));
        }
        Ok(ConvexGauge::Power { alpha })
    }

    pub fn exp_minus_one() -> ConvexGauge {
        ConvexGauge::ExpMinusOne
    }

    /// Builds the max-affine gauge, normalizing the intercepts so the value
    /// at zero is zero. Slopes must be nonnegative and not all zero.
    pub fn max_affine(pieces: &[(f64, f64)]) -> Result<ConvexGauge> {
        if pieces.is_empty() {
            return Err(Error::InvalidGauge("no affine pieces".into()));
        }
        let mut at_zero = f64::NEG_INFINITY;
        for &(m, c) in pieces {
            if !m.is_finite() || !c.is_finite() {
                return Err(Error::InvalidGauge("non-finite piece".into()));
            }
            if m < 0.0 {
                return Err(Error::InvalidGauge(format!(
                    "negative slope {m} breaks monotonicity"
                )));
            }
            at_zero = at_zero.max(c);
        }
        if pieces.iter().all(|&(m, _)| m == 0.0) {
            return Err(Error::InvalidGauge("identically zero after shift".into()));
        }
        let shifted: Vec<(f64, f64)> = pieces.iter().map(|&(m, c)| (m, c - at_zero)).collect();
        Ok(ConvexGauge::MaxAffine { pieces: shifted })
    }

    /// Deterministic random max-affine gauge for property sweeps.
    pub fn random_max_affine(piece_count: usize, seed: u64) -> Result<ConvexGauge> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pieces: Vec<(f64, f64)> = (0..piece_count.max(1))
            .map(|_| (2.0 * rng.random::<f64>(), rng.random::<f64>() - 0.5))
            .collect();
        Self::max_affine(&pieces)
    }

    /// Value at `t >= 0`; negative arguments are outside the domain.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::GaugeDomain(t));
        }
        Ok(self.value(t))
    }

    /// Value without the domain test; callers guarantee `t >= 0`.
    pub(crate) fn value(&self, t: f64) -> f64 {
        match self {
            ConvexGauge::Power { alpha } => power_value(t, *alpha),
            ConvexGauge::ExpMinusOne => t.exp_m1(),
            ConvexGauge::MaxAffine { pieces } => pieces
                .iter()
                .map(|&(m, c)| m * t + c)
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// The four-point comparison: spreading two symmetric sample points
    /// further from their midpoint cannot decrease the sum of gauge values.
    /// Requires `r >= 0`, `gamma >= 1`, and the widened pair to stay in the
    /// domain (`a - gamma r >= 0`).
    pub fn four_point(&self, a: f64, r: f64, gamma: f64) -> Result<bool> {
        if r < 0.0 || gamma < 1.0 || a - gamma * r < 0.0 {
            return Err(Error::Precondition {
                check: "a - gamma*r >= 0, r >= 0, gamma >= 1",
                condition: format!("a = {a}, r = {r}, gamma = {gamma}"),
            });
        }
        let narrow = self.value(a - r) + self.value(a + r);
        let wide = self.value(a - gamma * r) + self.value(a + gamma * r);
        Ok(narrow <= wide + tol::NUM)
    }

    /// Short descriptor for reports.
    pub fn describe(&self) -> String {
        match self {
            ConvexGauge::Power { alpha } => format!("power({alpha})"),
            ConvexGauge::ExpMinusOne => "exp_minus_one".into(),
            ConvexGauge::MaxAffine { pieces } => format!("max_affine({} pieces)", pieces.len()),
        }
    }
}

/// `t^alpha`, routed through integer powers when the exponent is one so the
/// frozen closed-form cases come out bit-exact.
pub(crate) fn power_value(t: f64, alpha: f64) -> f64 {
    let k = alpha.round();
    if (alpha - k).abs() < 1e-12 && (1.0..=32.0).contains(&k) {
        t.powi(k as i32)
    } else {
        t.powf(alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_gauges() -> Vec<ConvexGauge> {
        vec![
            ConvexGauge::power(1.0).unwrap(),
            ConvexGauge::power(2.0).unwrap(),
            ConvexGauge::power(3.5).unwrap(),
            ConvexGauge::exp_minus_one(),
            ConvexGauge::max_affine(&[(1.0, 0.0), (3.0, -1.0), (0.5, 0.2)]).unwrap(),
        ]
    }

    #[test]
    fn point_values() {
        assert_eq!(ConvexGauge::power(2.0).unwrap().eval(3.0).unwrap(), 9.0);
        assert_eq!(ConvexGauge::exp_minus_one().eval(0.0).unwrap(), 0.0);
        let g = ConvexGauge::max_affine(&[(1.0, 0.5), (2.0, 0.0)]).unwrap();
        // Intercepts shifted by the value at zero (0.5).
        assert_eq!(g.eval(0.0).unwrap(), 0.0);
        assert_eq!(g.eval(1.0).unwrap(), 1.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ConvexGauge::power(0.5).is_err());
        assert!(ConvexGauge::power(f64::NAN).is_err());
        assert!(ConvexGauge::max_affine(&[]).is_err());
        assert!(ConvexGauge::max_affine(&[(-1.0, 0.0)]).is_err());
        assert!(ConvexGauge::max_affine(&[(0.0, 1.0), (0.0, -2.0)]).is_err());
        assert!(ConvexGauge::power(2.0).unwrap().eval(-0.1).is_err());
    }

    #[test]
    fn gauges_vanish_at_zero_and_are_nondecreasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in all_gauges() {
            assert!(g.eval(0.0).unwrap().abs() < 1e-15);
            for _ in 0..2000 {
                let t1 = 4.0 * rng.random::<f64>();
                let t2 = t1 + 4.0 * rng.random::<f64>();
                assert!(g.eval(t1).unwrap() <= g.eval(t2).unwrap() + 1e-12, "{g:?}");
            }
        }
    }

    #[test]
    fn four_point_spreading_holds_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in all_gauges() {
            for _ in 0..10_000 {
                let a = 3.0 * rng.random::<f64>();
                let gamma = 1.0 + 2.0 * rng.random::<f64>();
                let r = a / gamma * rng.random::<f64>();
                assert!(g.four_point(a, r, gamma).unwrap(), "{g:?} a={a} r={r}");
            }
        }
    }

    #[test]
    fn four_point_worked_example_and_domain_guard() {
        let g = ConvexGauge::power(2.0).unwrap();
        // 0.25 + 2.25 on the narrow pair against 0 + 4 on the wide one.
        assert!(g.four_point(1.0, 0.5, 2.0).unwrap());
        assert!(g.four_point(1.0, 0.6, 2.0).is_err());
    }

    #[test]
    fn random_max_affine_is_deterministic_and_valid() {
        let a = ConvexGauge::random_max_affine(4, 9).unwrap();
        let b = ConvexGauge::random_max_affine(4, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.eval(0.0).unwrap().abs() < 1e-15);
    }
}
