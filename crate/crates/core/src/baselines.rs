//! Reference classifiers on a scalar feature: LDA, QDA and logistic
//! regression.

use nalgebra::{DMatrix, DVector};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numeric::{argmax, log_sum_exp, logistic, softmax};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

fn check_scalar(data: &Dataset, classes: usize) -> Result<Vec<Vec<f64>>> {
    if data.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: data.dim(),
        });
    }
    if classes < 2 {
        return Err(Error::Invalid(format!("need at least 2 classes, got {classes}")));
    }
    data.split_feature(0, classes)
}

/// Gaussian class-conditional model: LDA when `pooled`, QDA otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianClassModel {
    pub priors: Vec<f64>,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    pub pooled: bool,
    /// Per class: the variance hit the floor.
    pub floored: Vec<bool>,
}

impl GaussianClassModel {
    /// Pooled-variance fit; the variance is the within-class mean squared
    /// deviation over all `n` samples.
    pub fn fit_lda(data: &Dataset, classes: usize) -> Result<Self> {
        Self::fit(data, classes, true)
    }

    /// Per-class variances, each divided by its class count.
    pub fn fit_qda(data: &Dataset, classes: usize) -> Result<Self> {
        Self::fit(data, classes, false)
    }

    fn fit(data: &Dataset, classes: usize, pooled: bool) -> Result<Self> {
        let groups = check_scalar(data, classes)?;
        let n = data.len();
        if pooled && n < classes + 1 {
            return Err(Error::Invalid(format!(
                "pooled variance needs more than {classes} samples, got {n}"
            )));
        }
        let xs = data.features();
        let (lo, hi) = xs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let range = hi - lo;
        let floor = 1e-12 * if range > 0.0 { range * range } else { 1.0 };

        let means: Vec<f64> = groups
            .iter()
            .map(|g| g.iter().sum::<f64>() / g.len() as f64)
            .collect();
        let ss: Vec<f64> = groups
            .iter()
            .zip(&means)
            .map(|(g, m)| g.iter().map(|x| (x - m) * (x - m)).sum::<f64>())
            .collect();
        let (variances, floored) = if pooled {
            let v = ss.iter().sum::<f64>() / n as f64;
            let f = v.is_nan() || v < floor;
            (vec![v.max(floor); classes], vec![f; classes])
        } else {
            ss.iter()
                .zip(&groups)
                .map(|(s, g)| {
                    let v = s / g.len() as f64;
                    (v.max(floor), v.is_nan() || v < floor)
                })
                .unzip()
        };
        Ok(GaussianClassModel {
            priors: groups.iter().map(|g| g.len() as f64 / n as f64).collect(),
            means,
            variances,
            pooled,
            floored,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.priors.len()
    }

    /// `log pi_k + log N(x; mu_k, sigma_k^2)` per class.
    pub fn scores(&self, x: f64) -> Vec<f64> {
        self.priors
            .iter()
            .zip(self.means.iter().zip(&self.variances))
            .map(|(p, (m, v))| p.ln() - 0.5 * (LN_2PI + v.ln()) - (x - m) * (x - m) / (2.0 * v))
            .collect()
    }

    pub fn posteriors(&self, x: f64) -> Vec<f64> {
        softmax(&self.scores(x))
    }

    pub fn predict(&self, x: f64) -> usize {
        argmax(&self.scores(x))
    }

    /// Log-odds of class 1 over class 0.
    pub fn log_odds(&self, x: f64) -> f64 {
        let s = self.scores(x);
        s[1] - s[0]
    }

    /// `(intercept, slope)` of the LDA log-odds of class 1 over class 0,
    /// which is linear in `x` because the variance is shared.
    pub fn linear_log_odds(&self) -> Result<(f64, f64)> {
        if !self.pooled || self.num_classes() != 2 {
            return Err(Error::Unsupported("linear log-odds of a non-LDA model".into()));
        }
        let v = self.variances[0];
        let (m0, m1) = (self.means[0], self.means[1]);
        let slope = (m1 - m0) / v;
        let intercept = (self.priors[1] / self.priors[0]).ln() - (m1 * m1 - m0 * m0) / (2.0 * v);
        Ok((intercept, slope))
    }
}

const LR_MAX_ITER: usize = 100;
const LR_GRAD_TOL: f64 = 1e-8;
const LR_MAX_HALVINGS: usize = 50;

/// Logistic regression on the features `(1, x)`.
///
/// `coefficients[k] = [a_k, b_k]` gives the class-`k` score `a_k + b_k x`;
/// class 0 is the reference with both coefficients zero. For two classes
/// `coefficients[1]` is the usual `(intercept, slope)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogisticModel {
    pub coefficients: Vec<[f64; 2]>,
    pub converged: bool,
    pub iterations: usize,
    /// Average log-likelihood after each accepted step, starting from the
    /// initial point.
    pub loglik_trace: Vec<f64>,
}

struct Problem<'a> {
    xs: &'a [f64],
    ys: &'a [usize],
    classes: usize,
}

impl Problem<'_> {
    /// Free parameters are `(a_k, b_k)` for classes `1..K`.
    fn scores(&self, theta: &[f64], x: f64, out: &mut [f64]) {
        out[0] = 0.0;
        for k in 1..self.classes {
            out[k] = theta[2 * (k - 1)] + theta[2 * (k - 1) + 1] * x;
        }
    }

    fn loglik(&self, theta: &[f64]) -> f64 {
        let mut s = vec![0.0; self.classes];
        let mut total = 0.0;
        for (&x, &y) in self.xs.iter().zip(self.ys) {
            self.scores(theta, x, &mut s);
            total += s[y] - log_sum_exp(&s);
        }
        total / self.xs.len() as f64
    }

    /// Gradient and negative Hessian of the average log-likelihood.
    fn derivatives(&self, theta: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let m = 2 * (self.classes - 1);
        let mut g = DVector::zeros(m);
        let mut h = DMatrix::zeros(m, m);
        let mut s = vec![0.0; self.classes];
        for (&x, &y) in self.xs.iter().zip(self.ys) {
            self.scores(theta, x, &mut s);
            let p = softmax(&s);
            let f = [1.0, x];
            for j in 1..self.classes {
                let r = f64::from(u8::from(y == j)) - p[j];
                for a in 0..2 {
                    g[2 * (j - 1) + a] += r * f[a];
                }
                for l in 1..self.classes {
                    let w = p[j] * (f64::from(u8::from(j == l)) - p[l]);
                    for a in 0..2 {
                        for b in 0..2 {
                            h[(2 * (j - 1) + a, 2 * (l - 1) + b)] += w * f[a] * f[b];
                        }
                    }
                }
            }
        }
        let n = self.xs.len() as f64;
        (g / n, h / n)
    }
}

impl LogisticModel {
    /// Unregularised maximum likelihood by Newton's method (IRLS) with
    /// step-halving. Stops when the gradient max-norm of the average
    /// log-likelihood is at most `1e-8` and the Newton step is negligible, or
    /// after 100 iterations. Under complete separation the coefficients
    /// diverge, the cap is reached and `converged` is false.
    pub fn fit(data: &Dataset, classes: usize) -> Result<Self> {
        check_scalar(data, classes)?;
        let problem = Problem {
            xs: data.features(),
            ys: data.labels(),
            classes,
        };
        let m = 2 * (classes - 1);
        let mut theta = vec![0.0; m];
        let mut ll = problem.loglik(&theta);
        let mut trace = vec![ll];
        let mut converged = false;
        let mut iterations = 0;
        while iterations < LR_MAX_ITER {
            let (g, h) = problem.derivatives(&theta);
            let step = match h.clone().cholesky() {
                Some(c) => c.solve(&g),
                None => match h.lu().solve(&g) {
                    Some(s) => s,
                    None => break,
                },
            };
            if !step.iter().all(|v| v.is_finite()) {
                break;
            }
            let scale = 1.0 + theta.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if g.amax() <= LR_GRAD_TOL && step.amax() <= 1e-6 * scale {
                converged = true;
                break;
            }
            iterations += 1;
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..LR_MAX_HALVINGS {
                let candidate: Vec<f64> = theta.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
                let cll = problem.loglik(&candidate);
                if cll >= ll {
                    theta = candidate;
                    ll = cll;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
            trace.push(ll);
        }
        let mut coefficients = vec![[0.0, 0.0]; classes];
        for k in 1..classes {
            coefficients[k] = [theta[2 * (k - 1)], theta[2 * (k - 1) + 1]];
        }
        Ok(LogisticModel {
            coefficients,
            converged,
            iterations,
            loglik_trace: trace,
        })
    }

    pub fn from_coefficients(coefficients: Vec<[f64; 2]>) -> Result<Self> {
        if coefficients.len() < 2 || coefficients.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("logistic coefficients must be finite, K >= 2".into()));
        }
        Ok(LogisticModel {
            coefficients,
            converged: true,
            iterations: 0,
            loglik_trace: Vec::new(),
        })
    }

    pub fn num_classes(&self) -> usize {
        self.coefficients.len()
    }

    pub fn intercept(&self) -> f64 {
        self.coefficients[1][0] - self.coefficients[0][0]
    }

    pub fn slope(&self) -> f64 {
        self.coefficients[1][1] - self.coefficients[0][1]
    }

    pub fn scores(&self, x: f64) -> Vec<f64> {
        self.coefficients.iter().map(|[a, b]| a + b * x).collect()
    }

    pub fn posteriors(&self, x: f64) -> Vec<f64> {
        if self.num_classes() == 2 {
            let p = logistic(self.log_odds(x));
            return vec![1.0 - p, p];
        }
        softmax(&self.scores(x))
    }

    pub fn predict(&self, x: f64) -> usize {
        argmax(&self.scores(x))
    }

    /// Score of class 1 minus class 0.
    pub fn log_odds(&self, x: f64) -> f64 {
        self.intercept() + self.slope() * x
    }
}
