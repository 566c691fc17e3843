//! Variance and MSE of the estimated log-odds against the Cramer-Rao bound.

use rayon::prelude::*;

use super::bench::FittedModel;
use super::config::ExperimentConfig;
use super::generate::{efficiency_grid, fixed_counts, generate_efficiency};
use super::table::{EfficiencyRow, EfficiencyTable, EstimateRow};
use crate::error::{Error, Result};
use crate::metrics::{cr_bound_log_odds, estimator_stats, true_log_odds, CRInputs};

/// For each training size in `n_values` (or `n_train`), fits every method on
/// `trials` fixed-count datasets and summarises the log-odds estimates at a
/// fixed grid of evaluation points drawn from both classes.
pub fn run_efficiency(exp: &ExperimentConfig) -> Result<EfficiencyTable> {
    exp.validate()?;
    if exp.num_classes() != 2 || exp.family.dim() != 1 {
        return Err(Error::Config(format!(
            "experiment `{}`: efficiency runs need two classes and a scalar family",
            exp.label
        )));
    }
    if exp.trials < 2 {
        return Err(Error::Config("efficiency runs need at least 2 trials".into()));
    }
    let etas = exp.class_etas()?;
    let alpha = exp.class_priors()?[1];
    let grid = efficiency_grid(exp)?;
    let truth = grid
        .iter()
        .map(|&x| true_log_odds(&exp.family, etas[0], etas[1], alpha, x))
        .collect::<Result<Vec<_>>>()?;
    let ns = if exp.n_values.is_empty() {
        vec![exp.n_train]
    } else {
        exp.n_values.clone()
    };

    let mut table = EfficiencyTable::default();
    for n in ns {
        let (n0, n1) = fixed_counts(n, alpha);
        let mut cr = 0.0;
        for &x0 in &grid {
            cr += cr_bound_log_odds(&CRInputs {
                spec: exp.family,
                eta0: etas[0],
                eta1: etas[1],
                n0,
                n1,
                x0,
            })?;
        }
        cr /= grid.len() as f64;

        let per_trial: Vec<Vec<std::result::Result<Vec<f64>, String>>> = (0..exp.trials)
            .into_par_iter()
            .map(|t| {
                let data = generate_efficiency(exp, n, t);
                exp.methods
                    .iter()
                    .map(|&m| {
                        let data = data.as_ref().map_err(|e| e.to_string())?;
                        let model = FittedModel::fit(m, &exp.family, data, 2, exp.shape_estimator)
                            .map_err(|e| e.to_string())?;
                        grid.iter()
                            .map(|&x| model.log_odds(x))
                            .collect::<Result<Vec<_>>>()
                            .map_err(|e| e.to_string())
                    })
                    .collect()
            })
            .collect();

        for (j, &method) in exp.methods.iter().enumerate() {
            let ok: Vec<(usize, &Vec<f64>)> = per_trial
                .iter()
                .enumerate()
                .filter_map(|(t, r)| r[j].as_ref().ok().map(|v| (t, v)))
                .collect();
            let (mut var, mut mse, mut bias_sq) = (f64::NAN, f64::NAN, f64::NAN);
            if ok.len() >= 2 {
                (var, mse, bias_sq) = (0.0, 0.0, 0.0);
                for (g, &t0) in truth.iter().enumerate() {
                    let column: Vec<f64> = ok.iter().map(|(_, v)| v[g]).collect();
                    let s = estimator_stats(&column, t0)?;
                    var += s.variance;
                    mse += s.mse;
                    bias_sq += s.bias * s.bias;
                }
                let m = grid.len() as f64;
                (var, mse, bias_sq) = (var / m, mse / m, bias_sq / m);
            }
            for (t, v) in &ok {
                for (g, (&x0, &estimate)) in grid.iter().zip(v.iter()).enumerate() {
                    table.estimates.push(EstimateRow {
                        experiment: exp.label.clone(),
                        n_train: n,
                        trial: *t,
                        method,
                        grid_index: g,
                        x0,
                        estimate,
                    });
                }
            }
            table.rows.push(EfficiencyRow {
                experiment: exp.label.clone(),
                n_train: n,
                n0,
                n1,
                method,
                trials: ok.len(),
                failed: exp.trials - ok.len(),
                mean_variance: var,
                mean_mse: mse,
                mean_bias_sq: bias_sq,
                cr_bound: cr,
                variance_ratio: var / cr,
            });
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expfam::FamilySpec;
    use crate::sim::Method;

    #[test]
    fn mse_decomposes_and_efda_is_unbiased_in_the_limit() {
        let mut e = ExperimentConfig::new("w", FamilySpec::weibull(3.0).unwrap(), vec![vec![4.0], vec![2.0]], 1000);
        e.alpha = Some(0.7);
        e.trials = 40;
        e.grid_per_class = 5;
        let t = run_efficiency(&e).unwrap();
        for r in &t.rows {
            assert!((r.mean_mse - (r.mean_variance + r.mean_bias_sq)).abs() <= 1e-12 * r.mean_mse.max(1.0));
            assert_eq!((r.n0, r.n1, r.failed), (300, 700, 0));
        }
        let efda = t.select("w", Method::Efda).next().unwrap();
        let lda = t.select("w", Method::Lda).next().unwrap();
        assert!(efda.mean_mse < lda.mean_mse);
        assert_eq!(t.estimates.len(), 4 * 40 * 10);
    }
}
