//! Profile maximum-likelihood estimate of an unknown Weibull shape.

use crate::error::{Error, Result};

const MAX_ITER: usize = 100;
const SCORE_TOL: f64 = 1e-10;

/// Profile-likelihood shape estimate for a single sample.
///
/// Solves `sum x^k ln x / sum x^k - 1/k - mean(ln x) = 0`.
pub fn fit_weibull_shape(data: &[f64]) -> Result<f64> {
    fit_weibull_shape_shared(&[data])
}

/// Shape estimate for several groups that share one shape but each have
/// their own scale (each scale is profiled out at `lambda_g^k = mean_g x^k`).
///
/// With one group this is the usual single-sample estimator.
pub fn fit_weibull_shape_shared(groups: &[&[f64]]) -> Result<f64> {
    let mut prepared = Vec::with_capacity(groups.len());
    let mut n_total = 0usize;
    let mut any_spread = false;
    for g in groups.iter().filter(|g| !g.is_empty()) {
        if let Some(&bad) = g.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Support {
                family: "weibull".into(),
                x: bad,
            });
        }
        // scale each group by its maximum; the score is invariant to this
        let max = g.iter().cloned().fold(f64::MIN, f64::max);
        let logs: Vec<f64> = g.iter().map(|x| (x / max).ln()).collect();
        any_spread |= logs.iter().any(|&l| l != logs[0]);
        n_total += g.len();
        prepared.push(logs);
    }
    if n_total < 2 || !any_spread {
        return Err(Error::Degenerate(
            "shape estimation needs at least two distinct values".into(),
        ));
    }
    let n = n_total as f64;

    // normalised score S(k)/n and its derivative; S is strictly decreasing
    let score = |k: f64| -> (f64, f64) {
        let mut s = n / k;
        let mut ds = -n / (k * k);
        for logs in &prepared {
            let (mut s0, mut s1, mut s2, mut sl) = (0.0, 0.0, 0.0, 0.0);
            for &l in logs {
                let w = (k * l).exp();
                s0 += w;
                s1 += w * l;
                s2 += w * l * l;
                sl += l;
            }
            let m = logs.len() as f64;
            s += sl - m * s1 / s0;
            ds -= m * (s2 * s0 - s1 * s1) / (s0 * s0);
        }
        (s / n, ds / n)
    };

    // moment start from the spread of log x: Var(ln X) = pi^2 / (6 k^2)
    let mut pooled_var = 0.0;
    for logs in &prepared {
        let m = logs.iter().sum::<f64>() / logs.len() as f64;
        pooled_var += logs.iter().map(|l| (l - m) * (l - m)).sum::<f64>();
    }
    pooled_var /= n;
    let mut k = if pooled_var > 0.0 {
        std::f64::consts::PI / (6.0 * pooled_var).sqrt()
    } else {
        1.0
    };

    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..MAX_ITER {
        let (s, ds) = score(k);
        if !s.is_finite() {
            return Err(Error::NonConvergence {
                iterations: MAX_ITER,
            });
        }
        if s.abs() < SCORE_TOL {
            return Ok(k);
        }
        if s > 0.0 {
            lo = lo.max(k);
        } else {
            hi = hi.min(k);
        }
        let newton = k - s / ds;
        k = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else if hi.is_finite() {
            0.5 * (lo + hi)
        } else {
            2.0 * k
        };
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITER,
    })
}
