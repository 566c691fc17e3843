//! Accuracy/ECE benchmarks and their sweeps.

use rayon::prelude::*;

use super::config::{ExperimentConfig, Method, ShapeEstimator};
use super::generate::generate_trial;
use super::table::{BenchmarkRow, BenchmarkTable, TrialRow};
use crate::baselines::{GaussianClassModel, LogisticModel};
use crate::data::Dataset;
use crate::efda::MulticlassModel;
use crate::error::{Error, Result};
use crate::expfam::{fit_weibull_shape, fit_weibull_shape_shared, FamilySpec};
use crate::metrics::{accuracy, ece, mean_sd, PredictionRecord};

/// A fitted classifier of any kind, behind one interface.
#[derive(Clone, Debug)]
pub enum FittedModel {
    Efda(MulticlassModel),
    Gaussian(GaussianClassModel),
    Logistic(LogisticModel),
}

impl FittedModel {
    pub fn fit(
        method: Method,
        family: &FamilySpec,
        train: &Dataset,
        classes: usize,
        shape_estimator: ShapeEstimator,
    ) -> Result<Self> {
        Ok(match method {
            Method::Efda => FittedModel::Efda(MulticlassModel::fit(*family, train, classes)?),
            Method::EfdaEstimatedShape => {
                let k = match shape_estimator {
                    ShapeEstimator::Shared => {
                        let groups = train.split_feature(0, classes)?;
                        let refs: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();
                        fit_weibull_shape_shared(&refs)?
                    }
                    ShapeEstimator::Pooled => fit_weibull_shape(train.features())?,
                };
                FittedModel::Efda(MulticlassModel::fit(FamilySpec::weibull(k)?, train, classes)?)
            }
            Method::Lda => FittedModel::Gaussian(GaussianClassModel::fit_lda(train, classes)?),
            Method::Qda => FittedModel::Gaussian(GaussianClassModel::fit_qda(train, classes)?),
            Method::Lr => FittedModel::Logistic(LogisticModel::fit(train, classes)?),
        })
    }

    pub fn posteriors(&self, x: f64) -> Result<Vec<f64>> {
        match self {
            FittedModel::Efda(m) => m.posteriors(x),
            FittedModel::Gaussian(m) => Ok(m.posteriors(x)),
            FittedModel::Logistic(m) => Ok(m.posteriors(x)),
        }
    }

    /// Log-odds of class 1 over class 0.
    pub fn log_odds(&self, x: f64) -> Result<f64> {
        match self {
            FittedModel::Efda(m) => m.pairwise_log_odds(0, 1, x),
            FittedModel::Gaussian(m) => Ok(m.log_odds(x)),
            FittedModel::Logistic(m) => Ok(m.log_odds(x)),
        }
    }
}

/// Accuracy and ECE of `model` on `test`. Two-class tasks use the
/// configured binary confidence for ECE; more classes use top-label.
pub fn evaluate(model: &FittedModel, test: &Dataset, exp: &ExperimentConfig, classes: usize) -> Result<(f64, f64)> {
    let mut predictions = Vec::with_capacity(test.len());
    let mut calibration = Vec::with_capacity(test.len());
    for (x, y) in test.iter() {
        let p = model.posteriors(x[0])?;
        predictions.push(PredictionRecord::top_label(&p, y));
        if classes == 2 {
            calibration.push(exp.binary_confidence.record(p[1], y));
        }
    }
    let calib = if classes == 2 { &calibration } else { &predictions };
    Ok((accuracy(&predictions)?, ece(calib, exp.ece_bins)?))
}

type Outcome = std::result::Result<(f64, f64), String>;

fn run_trial(exp: &ExperimentConfig, n_train: usize, priors: &[f64], trial: usize) -> Vec<Outcome> {
    let classes = exp.num_classes();
    let data = generate_trial(exp, n_train, priors, trial);
    exp.methods
        .iter()
        .map(|&m| {
            let (train, test) = data.as_ref().map_err(|e| e.to_string())?;
            FittedModel::fit(m, &exp.family, train, classes, exp.shape_estimator)
                .and_then(|model| evaluate(&model, test, exp, classes))
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// Runs all trials of one setting (in parallel, aggregated in trial order).
fn run_point(exp: &ExperimentConfig, n_train: usize, priors: &[f64]) -> BenchmarkTable {
    let outcomes: Vec<Vec<Outcome>> = (0..exp.trials)
        .into_par_iter()
        .map(|t| run_trial(exp, n_train, priors, t))
        .collect();
    let classes = exp.num_classes();
    let alpha = (classes == 2).then(|| priors[1]);
    let mut table = BenchmarkTable::default();
    for (j, &method) in exp.methods.iter().enumerate() {
        let mut accs = Vec::new();
        let mut eces = Vec::new();
        for (trial, per_method) in outcomes.iter().enumerate() {
            let outcome = &per_method[j];
            if let Ok((a, e)) = outcome {
                accs.push(*a);
                eces.push(*e);
            }
            table.trials.push(TrialRow {
                experiment: exp.label.clone(),
                n_train,
                alpha,
                trial,
                method,
                accuracy: outcome.as_ref().ok().map(|o| o.0),
                ece: outcome.as_ref().ok().map(|o| o.1),
                error: outcome.as_ref().err().cloned(),
            });
        }
        let (accuracy_mean, accuracy_sd) = mean_sd(&accs);
        let (ece_mean, ece_sd) = mean_sd(&eces);
        table.rows.push(BenchmarkRow {
            experiment: exp.label.clone(),
            classes,
            n_train,
            n_test: exp.n_test,
            alpha,
            method,
            trials: accs.len(),
            failed: exp.trials - accs.len(),
            accuracy_mean,
            accuracy_sd,
            ece_mean,
            ece_sd,
        });
    }
    table
}

fn require_classes(exp: &ExperimentConfig, binary: bool) -> Result<()> {
    exp.validate()?;
    if binary && exp.num_classes() != 2 {
        return Err(Error::Config(format!(
            "experiment `{}` has {} classes; this run needs 2",
            exp.label,
            exp.num_classes()
        )));
    }
    Ok(())
}

/// Two-class benchmark at the configured `n_train` and `alpha`.
pub fn run_binary_benchmark(exp: &ExperimentConfig) -> Result<BenchmarkTable> {
    require_classes(exp, true)?;
    Ok(run_point(exp, exp.n_train, &exp.class_priors()?))
}

/// K-class benchmark: MAP accuracy and top-label ECE.
pub fn run_multiclass_benchmark(exp: &ExperimentConfig) -> Result<BenchmarkTable> {
    require_classes(exp, false)?;
    Ok(run_point(exp, exp.n_train, &exp.class_priors()?))
}

/// Two-class benchmark repeated at each of `n_values` (or just `n_train`).
pub fn run_sample_size_sweep(exp: &ExperimentConfig) -> Result<BenchmarkTable> {
    require_classes(exp, true)?;
    let priors = exp.class_priors()?;
    let ns = if exp.n_values.is_empty() {
        vec![exp.n_train]
    } else {
        exp.n_values.clone()
    };
    let mut table = BenchmarkTable::default();
    for n in ns {
        table.extend(run_point(exp, n, &priors));
    }
    Ok(table)
}

/// Two-class benchmark repeated at each `P(Y = 1)` in `alpha_values` (or
/// just the configured prior).
pub fn run_imbalance_sweep(exp: &ExperimentConfig) -> Result<BenchmarkTable> {
    require_classes(exp, true)?;
    let alphas = if exp.alpha_values.is_empty() {
        vec![exp.class_priors()?[1]]
    } else {
        exp.alpha_values.clone()
    };
    let mut table = BenchmarkTable::default();
    for a in alphas {
        table.extend(run_point(exp, exp.n_train, &[1.0 - a, a]));
    }
    Ok(table)
}

/// Known-shape versus estimated-shape EFDA over the sample-size sweep.
pub fn run_unknown_k_ablation(exp: &ExperimentConfig) -> Result<BenchmarkTable> {
    if !matches!(exp.family, FamilySpec::WeibullKnownShape { .. }) {
        return Err(Error::Config(format!(
            "experiment `{}`: the shape ablation needs a weibull family",
            exp.label
        )));
    }
    if !exp.methods.contains(&Method::EfdaEstimatedShape) {
        return Err(Error::Config(format!(
            "experiment `{}`: the shape ablation needs method efda-khat",
            exp.label
        )));
    }
    run_sample_size_sweep(exp)
}
