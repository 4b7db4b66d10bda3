//! Integration of gauges of concave functions over bodies and the averaged
//! inequality checks built on it.
//!
//! The central bound compares the mean of `phi(f(x))` over a 0-symmetric
//! body against the one-dimensional average `(1/2) int_{-1}^{1}
//! phi(f(0)(1+t)) dt`, which collapses to a closed form for every gauge
//! kind in the crate. Left-hand sides use exact per-simplex integration
//! whenever `f` is a single affine piece (polynomial moments for power
//! gauges, a fast-converging series for exponentials) and seeded Monte
//! Carlo otherwise.

use nalgebra::DVector;

use crate::concave::ConcaveFn;
use crate::error::{Error, Result};
use crate::gauge::{power_value, ConvexGauge};
use crate::integrate::{self, IntegralEstimate, IntegrationMethod};
use crate::polytope::{batch_rng, Polytope, UniformSampler, BATCH};
use crate::report::InequalityReport;
use crate::tol;

/// Distinct stream for helper estimates that must not reuse the caller's
/// sample stream (the weighted centroid inside the moment bound).
const SEED_SPLIT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Complete homogeneous symmetric polynomials `h_0..h_k` of `vals`.
fn h_poly_all(vals: &[f64], k: usize) -> Vec<f64> {
    let mut h = vec![0.0; k + 1];
    h[0] = 1.0;
    for &x in vals {
        for d in 1..=k {
            h[d] += x * h[d - 1];
        }
    }
    h
}

/// Exact mean of `(<a,x> + b)^alpha` over `c` via the simplex moment
/// formula: the mean over a simplex with vertex values `y` is
/// `h_alpha(y) * alpha! d! / (alpha+d)!`.
fn mean_power_affine(
    c: &Polytope,
    a: &DVector<f64>,
    b: f64,
    alpha: usize,
) -> Result<(f64, usize)> {
    let chart = c.chart();
    let mut num = 0.0;
    let mut den = 0.0;
    let mut evals = 0usize;
    for s in c.triangulation()? {
        let vals: Vec<f64> = s
            .vertices()
            .iter()
            .map(|lv| a.dot(&chart.to_ambient(lv)) + b)
            .collect();
        let d = vals.len() - 1;
        let mut coef = 1.0;
        for j in 1..=alpha {
            coef *= j as f64 / (d + j) as f64;
        }
        num += s.volume() * coef * h_poly_all(&vals, alpha)[alpha];
        den += s.volume();
        evals += vals.len();
    }
    Ok((num / den, evals))
}

/// Exact mean of `exp(<a,x> + b)` over `c`: per simplex, after centering
/// the vertex values, the mean is `e^m sum_k h_k / ((d+1)...(d+k))`, a
/// series dominated by `w^k / k!` for centered spread `w`.
fn mean_exp_affine(c: &Polytope, a: &DVector<f64>, b: f64) -> Result<(f64, usize)> {
    let chart = c.chart();
    let mut num = 0.0;
    let mut den = 0.0;
    let mut evals = 0usize;
    for s in c.triangulation()? {
        let vals: Vec<f64> = s
            .vertices()
            .iter()
            .map(|lv| a.dot(&chart.to_ambient(lv)) + b)
            .collect();
        let d = vals.len() - 1;
        let m = vals.iter().sum::<f64>() / vals.len() as f64;
        let centered: Vec<f64> = vals.iter().map(|v| v - m).collect();
        let w = centered.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let mut k_max = 0usize;
        let mut t = 1.0;
        while t > 1e-18 && k_max < 130 {
            k_max += 1;
            t *= w / k_max as f64;
        }
        let hs = h_poly_all(&centered, k_max);
        let mut sum = 0.0;
        let mut fac = 1.0;
        for (k, hk) in hs.iter().enumerate() {
            if k > 0 {
                fac *= (d + k) as f64;
            }
            sum += hk / fac;
        }
        num += s.volume() * m.exp() * sum;
        den += s.volume();
        evals += vals.len();
    }
    Ok((num / den, evals))
}

fn certify_nonnegative_on(c: &Polytope, f: &ConcaveFn) -> Result<()> {
    let min = c
        .vertices()
        .iter()
        .map(|v| f.value_unchecked(v))
        .fold(f64::INFINITY, f64::min);
    if min < -tol::NUM {
        return Err(Error::NotNonnegative { min, tol: tol::NUM });
    }
    Ok(())
}

fn require_samples(samples: usize) -> Result<()> {
    if samples < 100 {
        return Err(Error::Sampling(format!(
            "Monte Carlo path needs samples >= 100, got {samples}"
        )));
    }
    Ok(())
}

fn require_symmetric(c: &Polytope) -> Result<()> {
    if !c.is_zero_symmetric() {
        return Err(Error::Precondition {
            check: "C = -C",
            condition: "the averaged bound needs a 0-symmetric domain".into(),
        });
    }
    Ok(())
}

/// Mean of `phi(f(x))` over `c`.
///
/// Exact when `f` is a single affine piece and the gauge is an integer
/// power or the shifted exponential; Monte Carlo with a CLT standard error
/// otherwise. `f` must be nonnegative on `c` (certified over the vertices).
pub fn integrate_gauge_concave(
    c: &Polytope,
    f: &ConcaveFn,
    phi: &ConvexGauge,
    samples: usize,
    seed: u64,
) -> Result<IntegralEstimate> {
    certify_nonnegative_on(c, f)?;
    if f.is_single_piece() {
        let (a, b) = &f.pieces()[0];
        match phi {
            ConvexGauge::Power { alpha } => {
                let k = alpha.round();
                if (alpha - k).abs() < 1e-12 && (1.0..=20.0).contains(&k) {
                    let (mean, evals) = mean_power_affine(c, a, *b, k as usize)?;
                    return Ok(IntegralEstimate::quadrature(mean, evals));
                }
            }
            ConvexGauge::ExpMinusOne => {
                let (mean, evals) = mean_exp_affine(c, a, *b)?;
                return Ok(IntegralEstimate::quadrature(mean - 1.0, evals));
            }
            ConvexGauge::MaxAffine { .. } => {}
        }
    }
    require_samples(samples)?;
    // The clamp guard keeps a certified-but-slightly-negative value out of
    // fractional powers.
    integrate::mc_mean(c, |x| phi.value(f.value_unchecked(x).max(0.0)), samples, seed)
}

/// Mean of `exp(u(x))` over `c`; exact for a single affine piece.
pub fn integrate_exp_concave(
    c: &Polytope,
    u: &ConcaveFn,
    samples: usize,
    seed: u64,
) -> Result<IntegralEstimate> {
    if u.is_single_piece() {
        let (a, b) = &u.pieces()[0];
        let (mean, evals) = mean_exp_affine(c, a, *b)?;
        return Ok(IntegralEstimate::quadrature(mean, evals));
    }
    require_samples(samples)?;
    integrate::mc_mean(c, |x| u.value_unchecked(x).exp(), samples, seed)
}

/// The one-dimensional average `(1/2) int_{-1}^{1} phi(f0 (1+t)) dt` in
/// closed form: the right-hand side of the gauge bound.
pub fn hh_rhs(phi: &ConvexGauge, f0: f64) -> Result<f64> {
    if f0 < 0.0 {
        return Err(Error::GaugeDomain(f0));
    }
    Ok(match phi {
        ConvexGauge::Power { alpha } => {
            power_value(f0, *alpha) * power_value(2.0, *alpha) / (alpha + 1.0)
        }
        ConvexGauge::ExpMinusOne => {
            if f0 == 0.0 {
                0.0
            } else {
                (2.0 * f0).exp_m1() / (2.0 * f0) - 1.0
            }
        }
        ConvexGauge::MaxAffine { pieces } => {
            if f0 == 0.0 {
                return Ok(0.0);
            }
            // Piecewise-exact: trapezoids between envelope breakpoints,
            // where the active affine piece changes.
            let hi = 2.0 * f0;
            let mut cuts = vec![0.0, hi];
            for (i, &(mi, ci)) in pieces.iter().enumerate() {
                for &(mj, cj) in &pieces[i + 1..] {
                    if (mi - mj).abs() > 1e-14 {
                        let s = (cj - ci) / (mi - mj);
                        if s > 0.0 && s < hi {
                            cuts.push(s);
                        }
                    }
                }
            }
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * hi);
            let mut integral = 0.0;
            for w in cuts.windows(2) {
                integral += (w[1] - w[0]) * 0.5 * (phi.value(w[0]) + phi.value(w[1]));
            }
            integral / hi
        }
    })
}

fn merge_instance(mut base: serde_json::Value, extra: serde_json::Value) -> serde_json::Value {
    if let (Some(b), Some(e)) = (base.as_object_mut(), extra.as_object()) {
        for (k, v) in e {
            b.insert(k.clone(), v.clone());
        }
    }
    base
}

fn gauge_report(
    name: &str,
    c: &Polytope,
    f: &ConcaveFn,
    phi: &ConvexGauge,
    samples: usize,
    seed: u64,
    extra: serde_json::Value,
) -> Result<InequalityReport> {
    require_symmetric(c)?;
    let lhs = integrate_gauge_concave(c, f, phi, samples, seed)?;
    let f0 = f.value_unchecked(&DVector::zeros(c.dim())).max(0.0);
    let rhs = hh_rhs(phi, f0)?;
    let instance = merge_instance(
        serde_json::json!({
            "dim": c.dim(),
            "vertices": c.vertex_count(),
            "pieces": f.pieces().len(),
            "gauge": phi.describe(),
            "f0": f0,
            "samples": lhs.samples,
        }),
        extra,
    );
    Ok(InequalityReport::new(
        name,
        lhs.value,
        rhs,
        3.0 * lhs.std_error + tol::NUM,
        lhs.method,
        IntegrationMethod::ClosedForm,
        instance,
        seed,
    ))
}

/// The gauge form of the Hermite-Hadamard bound on a 0-symmetric body:
/// mean of `phi(f)` against the one-dimensional closed form at `f(0)`.
pub fn check_gauge_hh(
    c: &Polytope,
    f: &ConcaveFn,
    phi: &ConvexGauge,
    samples: usize,
    seed: u64,
) -> Result<InequalityReport> {
    gauge_report("gauge-hh", c, f, phi, samples, seed, serde_json::Value::Null)
}

/// Power specialization: mean of `f^alpha` against
/// `2^alpha/(alpha+1) f(0)^alpha`, for `alpha >= 1`.
pub fn check_power_mean_bound(
    c: &Polytope,
    f: &ConcaveFn,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<InequalityReport> {
    let phi = ConvexGauge::power(alpha)?;
    gauge_report(
        "power-mean",
        c,
        f,
        &phi,
        samples,
        seed,
        serde_json::json!({"alpha": alpha}),
    )
}

/// Log-concave mean bound: for `f = e^u` with `u` concave on a 0-symmetric
/// body, the mean of `f` is at most
/// `f_min ((f(0)/f_min)^2 - 1) / log((f(0)/f_min)^2)`, degenerating to
/// `f_min` when `f(0) = f_min`.
pub fn check_log_concave_mean(
    c: &Polytope,
    u: &ConcaveFn,
    samples: usize,
    seed: u64,
) -> Result<InequalityReport> {
    require_symmetric(c)?;
    let lhs = integrate_exp_concave(c, u, samples, seed)?;
    // u is concave, so its minimum over c sits at a vertex.
    let u_min = c
        .vertices()
        .iter()
        .map(|v| u.value_unchecked(v))
        .fold(f64::INFINITY, f64::min);
    let u0 = u.value_unchecked(&DVector::zeros(c.dim()));
    let f_min = u_min.exp();
    let ratio = (u0 - u_min).exp();
    let rhs = if (ratio - 1.0).abs() < 1e-8 {
        f_min
    } else {
        f_min * (ratio * ratio - 1.0) / (2.0 * (u0 - u_min))
    };
    let instance = serde_json::json!({
        "dim": c.dim(),
        "vertices": c.vertex_count(),
        "pieces": u.pieces().len(),
        "f_min": f_min,
        "f0": u0.exp(),
        "samples": lhs.samples,
    });
    Ok(InequalityReport::new(
        "log-concave-mean",
        lhs.value,
        rhs,
        3.0 * lhs.std_error + tol::NUM,
        lhs.method,
        IntegrationMethod::ClosedForm,
        instance,
        seed,
    ))
}

/// Classical Hermite-Hadamard: the mean of a concave function is at most
/// its value at the centroid, on any body. Equality within tolerance is
/// expected exactly when `f` is affine, and the verdict reflects it.
pub fn check_classical_hh(
    c: &Polytope,
    f: &ConcaveFn,
    samples: usize,
    seed: u64,
) -> Result<InequalityReport> {
    let lhs = if f.is_single_piece() {
        let (a, b) = &f.pieces()[0];
        let (mean, evals) = mean_power_affine(c, a, *b, 1)?;
        IntegralEstimate::quadrature(mean, evals)
    } else {
        require_samples(samples)?;
        integrate::mc_mean(c, |x| f.value_unchecked(x), samples, seed)?
    };
    let rhs = f.value_unchecked(&c.centroid()?);
    let instance = serde_json::json!({
        "dim": c.dim(),
        "vertices": c.vertex_count(),
        "pieces": f.pieces().len(),
        "single_piece": f.is_single_piece(),
        "samples": lhs.samples,
    });
    Ok(InequalityReport::new(
        "classical-hh",
        lhs.value,
        rhs,
        3.0 * lhs.std_error + tol::NUM,
        lhs.method,
        IntegrationMethod::ClosedForm,
        instance,
        seed,
    ))
}

/// Self-normalized Monte Carlo estimate of the `f^m`-weighted centroid
/// `int_C x f^m / int_C f^m`. Deterministic in `seed` with the same batch
/// folding as every other sampling path.
pub fn weighted_centroid(
    c: &Polytope,
    f: &ConcaveFn,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<DVector<f64>> {
    if m < 1 {
        return Err(Error::Precondition {
            check: "m >= 1",
            condition: "weight exponent must be positive".into(),
        });
    }
    require_samples(samples)?;
    let sampler = UniformSampler::new(c)?;
    let n = c.dim();
    let mut num = DVector::zeros(n);
    let mut den = 0.0;
    let mut drawn = 0usize;
    let mut k = 0u64;
    while drawn < samples {
        let take = BATCH.min(samples - drawn);
        let mut rng = batch_rng(seed, k);
        let mut bnum = DVector::zeros(n);
        let mut bden = 0.0;
        for _ in 0..take {
            let x = sampler.draw(&mut rng);
            let w = power_value(f.value_unchecked(&x).max(0.0), m as f64);
            bnum.axpy(w, &x, 1.0);
            bden += w;
        }
        num += bnum;
        den += bden;
        drawn += take;
        k += 1;
    }
    if den <= 0.0 {
        return Err(Error::Precondition {
            check: "integral of f^m > 0",
            condition: "sampled mass vanished; the function is zero on the body".into(),
        });
    }
    Ok(num / den)
}

/// Moment form of the centroid bound: the mean of `f^m` is at most the
/// function's value at the `f^m`-weighted centroid, raised to `m`.
pub fn check_moment_center_bound(
    c: &Polytope,
    f: &ConcaveFn,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<InequalityReport> {
    if m < 1 {
        return Err(Error::Precondition {
            check: "m >= 1",
            condition: "weight exponent must be positive".into(),
        });
    }
    let phi = ConvexGauge::power(m as f64)?;
    let lhs = integrate_gauge_concave(c, f, &phi, samples, seed)?;
    let xhat = weighted_centroid(c, f, m, samples, seed.wrapping_add(SEED_SPLIT))?;
    let rhs = power_value(f.value_unchecked(&xhat).max(0.0), m as f64);
    let instance = serde_json::json!({
        "dim": c.dim(),
        "vertices": c.vertex_count(),
        "pieces": f.pieces().len(),
        "m": m,
        "samples": lhs.samples,
    });
    Ok(InequalityReport::new(
        "moment-center",
        lhs.value,
        rhs,
        3.0 * lhs.std_error + tol::NUM,
        lhs.method,
        IntegrationMethod::MonteCarlo,
        instance,
        seed,
    ))
}
