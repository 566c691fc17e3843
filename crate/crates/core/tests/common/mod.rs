//! Independent oracles shared by the integration tests: finite differences,
//! adaptive quadrature, brute-force likelihood search, a hand-written Naive
//! Bayes scorer and the Monte-Carlo property suites.

#![allow(dead_code)]

use efda::baselines::GaussianClassModel;
use efda::efda::{BinaryModel, MulticlassModel, ProductModel};
use efda::expfam::FamilySpec;
use efda::metrics::{ece, ConfidenceMode};
use efda::sim::{draw_fixed_counts, trial_rng};
use efda::{Dataset, NaturalParam, SuffStatMean};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `|a - b| <= tol * max(1, |b|)`
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs()
}

/// Every family, some with two settings of the auxiliary parameter.
pub fn all_specs() -> Vec<FamilySpec> {
    vec![
        FamilySpec::normal_known_var(1.5).unwrap(),
        FamilySpec::NormalFull,
        FamilySpec::laplace(0.5).unwrap(),
        FamilySpec::Exponential,
        FamilySpec::gamma(2.5).unwrap(),
        FamilySpec::gamma(0.7).unwrap(),
        FamilySpec::weibull(3.0).unwrap(),
        FamilySpec::weibull(0.8).unwrap(),
        FamilySpec::Poisson,
        FamilySpec::Bernoulli,
        FamilySpec::neg_binomial(3.0).unwrap(),
    ]
}

/// Twenty natural parameters spread over the interior of the parameter space.
pub fn eta_grid(spec: &FamilySpec) -> Vec<NaturalParam> {
    let neg = |a: f64, b: f64| -> Vec<NaturalParam> {
        linspace(a, b, 20).into_iter().map(|u| NaturalParam::Scalar(-u.exp())).collect()
    };
    let lin = |a: f64, b: f64| -> Vec<NaturalParam> {
        linspace(a, b, 20).into_iter().map(NaturalParam::Scalar).collect()
    };
    match spec {
        FamilySpec::NormalKnownVar { .. } => lin(-3.0, 3.0),
        FamilySpec::NormalFull => linspace(-2.0, 2.0, 20)
            .into_iter()
            .zip(linspace(-2.0, 1.0, 20).into_iter().rev())
            .map(|(a, u)| NaturalParam::Pair([a, -u.exp()]))
            .collect(),
        FamilySpec::LaplaceKnownLoc { .. } => neg(-1.5, 1.5),
        FamilySpec::Exponential | FamilySpec::GammaKnownShape { .. } => neg(-2.0, 2.0),
        FamilySpec::WeibullKnownShape { shape } if *shape >= 1.0 => neg(-4.0, 1.0),
        FamilySpec::WeibullKnownShape { .. } => neg(-1.5, 1.5),
        FamilySpec::Poisson => lin(-2.0, 3.4),
        FamilySpec::Bernoulli => lin(-4.0, 4.0),
        FamilySpec::NegBinomialKnownR { .. } => neg(-3.0, 1.0),
    }
}

/// Central differences with one Richardson step.
fn richardson(f: impl Fn(f64) -> f64, h: f64, second: bool) -> f64 {
    let d = |h: f64| {
        if second {
            (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h)
        } else {
            (f(h) - f(-h)) / (2.0 * h)
        }
    };
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// Finite-difference gradient of `A` and, for scalar families, `A''`.
pub fn fd_moments(spec: &FamilySpec, eta: &NaturalParam) -> (Vec<f64>, Option<f64>) {
    let c = eta.components().to_vec();
    let a_at = |delta: &[f64]| {
        let shifted: Vec<f64> = c.iter().zip(delta).map(|(x, d)| x + d).collect();
        spec.log_partition(&NaturalParam::from_components(&shifted).unwrap()).unwrap()
    };
    let mut grad = Vec::new();
    for j in 0..c.len() {
        let h = 1e-3 * c[j].abs().max(0.1);
        grad.push(richardson(
            |d| {
                let mut delta = vec![0.0; c.len()];
                delta[j] = d;
                a_at(&delta)
            },
            h,
            false,
        ));
    }
    let second = (c.len() == 1).then(|| richardson(|d| a_at(&[d]), 1e-3 * c[0].abs().max(0.1), true));
    (grad, second)
}

fn density(spec: &FamilySpec, eta: &NaturalParam, x: f64) -> f64 {
    spec.log_density(eta, x).unwrap().exp()
}

/// `integral_c^inf f` via `x = c + s t / (1 - t)`.
fn upper_tail(f: &dyn Fn(f64) -> f64, c: f64, s: f64) -> f64 {
    quadrature::double_exponential::integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let x = c + s * t / (1.0 - t);
            let v = f(x) * s / ((1.0 - t) * (1.0 - t));
            if v.is_finite() { v } else { 0.0 }
        },
        0.0,
        1.0,
        1e-12,
    )
    .integral
}

/// Total probability mass: a sum over the support for discrete families,
/// tanh-sinh quadrature for continuous ones.
pub fn total_mass(spec: &FamilySpec, eta: &NaturalParam) -> f64 {
    let e = eta.components()[0];
    match spec {
        FamilySpec::Bernoulli => density(spec, eta, 0.0) + density(spec, eta, 1.0),
        FamilySpec::Poisson | FamilySpec::NegBinomialKnownR { .. } => {
            let mean = spec.mean_suffstat(eta).unwrap().components()[0];
            // successive-term ratio bound: lambda / (x + 1) or p (x + r) / (x + 1)
            let ratio_bound = |x: f64| match spec {
                FamilySpec::Poisson => e.exp() / (x + 1.0),
                FamilySpec::NegBinomialKnownR { r } => e.exp() * (x + r) / (x + 1.0),
                _ => unreachable!(),
            };
            let mut total = 0.0;
            let mut x = 0.0;
            loop {
                let p = density(spec, eta, x);
                total += p;
                let q = ratio_bound(x);
                if x > mean && q < 1.0 && p * q / (1.0 - q) < 1e-13 {
                    return total;
                }
                x += 1.0;
            }
        }
        _ => {
            let f = |x: f64| density(spec, eta, x);
            match spec {
                FamilySpec::NormalKnownVar { sigma } => {
                    let mu = e * sigma;
                    upper_tail(&f, mu, *sigma) + upper_tail(&|x| f(2.0 * mu - x), mu, *sigma)
                }
                FamilySpec::NormalFull => {
                    let var = -0.5 / eta.components()[1];
                    let mu = e * var;
                    let sd = var.sqrt();
                    upper_tail(&f, mu, sd) + upper_tail(&|x| f(2.0 * mu - x), mu, sd)
                }
                FamilySpec::LaplaceKnownLoc { mu } => {
                    let b = -1.0 / e;
                    upper_tail(&f, *mu, b) + upper_tail(&|x| f(2.0 * mu - x), *mu, b)
                }
                _ => {
                    let s = spec.mean_suffstat(eta).unwrap().components()[0];
                    // the statistic's mean sets a scale for x: x^k for Weibull
                    let scale = match spec {
                        FamilySpec::WeibullKnownShape { shape } => s.powf(1.0 / shape),
                        _ => s,
                    };
                    let head = quadrature::double_exponential::integrate(
                        |x| if x <= 0.0 { 0.0 } else { f(x) },
                        0.0,
                        scale,
                        1e-12,
                    )
                    .integral;
                    head + upper_tail(&f, scale, scale)
                }
            }
        }
    }
}

fn log_lik(spec: &FamilySpec, eta: &NaturalParam, xs: &[f64]) -> f64 {
    xs.iter().map(|&x| spec.log_density(eta, x).unwrap()).sum()
}

/// Outcome of the brute-force likelihood check on one dataset.
#[derive(Debug, PartialEq)]
pub enum ArgmaxCheck {
    Agrees,
    /// The class data sat on the boundary; the closed form does not apply.
    Boundary,
    Beaten { eta: Vec<f64>, gain: f64 },
}

/// Compares the closed-form MLE on `xs` with a dense grid of natural
/// parameters around it.
pub fn brute_force_argmax(spec: &FamilySpec, xs: &[f64]) -> ArgmaxCheck {
    let mean = SuffStatMean::from_values(spec, xs).unwrap();
    let Ok(hat) = spec.mle_from_mean(&mean) else {
        return ArgmaxCheck::Boundary;
    };
    let best = log_lik(spec, &hat, xs);
    let c = hat.components().to_vec();
    let offsets: Vec<f64> = {
        let mut v: Vec<f64> = linspace(-0.5, 0.5, 201);
        for p in [1e-5, 1e-4, 1e-3, 1e-2] {
            v.push(p);
            v.push(-p);
        }
        v
    };
    let candidates: Vec<Vec<f64>> = if c.len() == 1 {
        offsets.iter().map(|d| vec![c[0] + d * c[0].abs().max(0.2)]).collect()
    } else {
        let grid = linspace(-0.5, 0.5, 41);
        grid.iter()
            .flat_map(|a| grid.iter().map(move |b| (*a, *b)))
            .map(|(a, b)| vec![c[0] + a * c[0].abs().max(0.2), c[1] + b * c[1].abs()])
            .collect()
    };
    for cand in candidates {
        let eta = NaturalParam::from_components(&cand).unwrap();
        if !spec.in_domain(&eta) {
            continue;
        }
        let ll = log_lik(spec, &eta, xs);
        if ll > best + 1e-9 * best.abs().max(1.0) {
            return ArgmaxCheck::Beaten {
                eta: cand,
                gain: ll - best,
            };
        }
    }
    ArgmaxCheck::Agrees
}

/// Posterior of class 1 from an independent Poisson Naive Bayes written out
/// by hand (class means as rates, empirical priors, full log-pmf).
pub fn poisson_naive_bayes_log_odds(data: &Dataset, x: &[f64]) -> f64 {
    let mut score = [0.0f64; 2];
    for (k, s) in score.iter_mut().enumerate() {
        let rows: Vec<&[f64]> = data.iter().filter(|(_, y)| *y == k).map(|(r, _)| r).collect();
        let n_k = rows.len() as f64;
        *s = (n_k / data.len() as f64).ln();
        for (j, &xj) in x.iter().enumerate() {
            let rate = rows.iter().map(|r| r[j]).sum::<f64>() / n_k;
            *s += xj * rate.ln() - rate - ln_gamma(xj + 1.0);
        }
    }
    score[1] - score[0]
}

/// A two-class setting used by the property suites.
#[derive(Clone, Copy, Debug)]
pub struct Setting {
    pub name: &'static str,
    pub spec: FamilySpec,
    pub eta: [NaturalParam; 2],
    pub alpha: f64,
}

pub fn property_settings() -> Vec<Setting> {
    let s = |name, spec: FamilySpec, p0: f64, p1: f64, alpha| Setting {
        name,
        spec,
        eta: [
            spec.natural_from_params(&[p0]).unwrap(),
            spec.natural_from_params(&[p1]).unwrap(),
        ],
        alpha,
    };
    vec![
        s("weibull", FamilySpec::weibull(3.0).unwrap(), 4.0, 2.0, 0.7),
        s("gamma", FamilySpec::gamma(2.0).unwrap(), 1.0, 2.0, 0.5),
        s("poisson", FamilySpec::Poisson, 3.0, 7.0, 0.5),
        s("exponential", FamilySpec::Exponential, 1.0, 3.0, 0.5),
    ]
}

fn counts(n: usize, alpha: f64) -> [usize; 2] {
    let n1 = (n as f64 * alpha).floor() as usize;
    [n - n1, n1]
}

fn draw(setting: &Setting, counts: [usize; 2], seed: u64, trial: u64) -> Dataset {
    let mut rng = trial_rng(seed, trial);
    draw_fixed_counts(&setting.spec, &setting.eta, &counts, &mut rng).unwrap()
}

/// Fraction of seeds for which EFDA fitted on `n` draws has test ECE (10
/// bins, `n` test draws) below 3%.
pub fn calibration_pass_rate(setting: &Setting, n: usize, trials: usize, seed: u64) -> (f64, f64) {
    let eces: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let train = draw(setting, counts(n, setting.alpha), seed, 2 * t);
            let test = draw(setting, counts(n, setting.alpha), seed, 2 * t + 1);
            let model = BinaryModel::fit(setting.spec, &train).unwrap();
            let records: Vec<_> = test
                .iter()
                .map(|(x, y)| ConfidenceMode::PositiveClass.record(model.posterior(x[0]).unwrap(), y))
                .collect();
            ece(&records, 10).unwrap()
        })
        .collect();
    let pass = eces.iter().filter(|e| **e < 0.03).count() as f64 / trials as f64;
    let worst = eces.iter().cloned().fold(0.0, f64::max);
    (pass, worst)
}

/// Per-class `|eta_hat - eta*| sqrt(N_k A''(eta*))` for each trial.
pub fn standardized_errors(setting: &Setting, n: usize, trials: usize, seed: u64) -> Vec<[f64; 2]> {
    let c = counts(n, setting.alpha);
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let data = draw(setting, c, seed, t);
            let groups = data.split_feature(0, 2).unwrap();
            let mut out = [0.0; 2];
            for k in 0..2 {
                let mean = SuffStatMean::from_values(&setting.spec, &groups[k]).unwrap();
                let hat = setting.spec.mle_from_mean(&mean).unwrap().components()[0];
                let truth = setting.eta[k].components()[0];
                let info = setting.spec.var_suffstat(&setting.eta[k]).unwrap();
                out[k] = (hat - truth) * (c[k] as f64 * info).sqrt();
            }
            out
        })
        .collect()
}

/// `Var(eta_hat_k) N_k A''(eta*_k)` per class.
pub fn efficiency_ratios(setting: &Setting, n: usize, trials: usize, seed: u64) -> [f64; 2] {
    let z = standardized_errors(setting, n, trials, seed);
    let mut out = [0.0; 2];
    for k in 0..2 {
        let v: Vec<f64> = z.iter().map(|r| r[k]).collect();
        let m = v.iter().sum::<f64>() / v.len() as f64;
        out[k] = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64;
    }
    out
}

/// Largest absolute difference between EFDA(NormalKnownVar, pooled sigma)
/// and LDA log-odds coefficients `(intercept, slope)`.
pub fn lda_identity_gap(data: &Dataset) -> f64 {
    let lda = GaussianClassModel::fit_lda(data, 2).unwrap();
    let (b0, b1) = lda.linear_log_odds().unwrap();
    let sigma = lda.variances[0].sqrt();
    let efda = BinaryModel::fit(FamilySpec::normal_known_var(sigma).unwrap(), data).unwrap();
    let e0 = efda.log_odds(0.0).unwrap();
    let e1 = efda.log_odds(1.0).unwrap() - e0;
    (e0 - b0).abs().max((e1 - b1).abs())
}

/// Largest difference between the d = 1 product-model scores and the
/// multiclass scores on the given points.
pub fn product_reduction_gap(spec: FamilySpec, data: &Dataset, classes: usize, points: &[f64]) -> f64 {
    let multi = MulticlassModel::fit(spec, data, classes).unwrap();
    let product = ProductModel::fit(vec![spec], data, classes).unwrap();
    points
        .iter()
        .flat_map(|&x| {
            let a = multi.scores(x).unwrap();
            let b = product.scores(&[x]).unwrap();
            a.into_iter().zip(b).map(|(u, v)| (u - v).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}
