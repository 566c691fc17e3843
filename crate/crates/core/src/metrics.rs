//! Accuracy, expected calibration error, the Cramer-Rao bound for the EFDA
//! log-odds, and Monte-Carlo estimator summaries.

use crate::efda::BinaryModel;
use crate::error::{Error, Result};
use crate::expfam::{FamilySpec, NaturalParam};
use crate::numeric::argmax;

/// One scored prediction as seen by the calibration metrics: the model
/// claims `predicted` with probability `confidence`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictionRecord {
    pub confidence: f64,
    pub predicted: usize,
    pub actual: usize,
}

impl PredictionRecord {
    /// Top-label record: the MAP class and its posterior probability.
    pub fn top_label(posteriors: &[f64], actual: usize) -> Self {
        let predicted = argmax(posteriors);
        PredictionRecord {
            confidence: posteriors[predicted],
            predicted,
            actual,
        }
    }

    /// Positive-class record for binary tasks: the event `Y = 1` with
    /// probability `p1`, whatever the MAP decision.
    pub fn positive_class(p1: f64, actual: usize) -> Self {
        PredictionRecord {
            confidence: p1,
            predicted: 1,
            actual,
        }
    }

    pub fn is_correct(&self) -> bool {
        self.predicted == self.actual
    }
}

/// Which probability a binary classifier reports to the calibration metric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfidenceMode {
    /// `P(Y = 1 | x)` scored against the indicator `Y = 1`.
    #[default]
    PositiveClass,
    /// Probability of the predicted class scored against correctness.
    TopLabel,
}

impl ConfidenceMode {
    pub fn record(self, p1: f64, actual: usize) -> PredictionRecord {
        match self {
            ConfidenceMode::PositiveClass => PredictionRecord::positive_class(p1, actual),
            ConfidenceMode::TopLabel => PredictionRecord::top_label(&[1.0 - p1, p1], actual),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConfidenceMode::PositiveClass => "positive-class",
            ConfidenceMode::TopLabel => "top-label",
        }
    }
}

impl std::str::FromStr for ConfidenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive-class" => Ok(ConfidenceMode::PositiveClass),
            "top-label" => Ok(ConfidenceMode::TopLabel),
            _ => Err(Error::Config(format!(
                "unknown confidence mode `{s}` (expected positive-class or top-label)"
            ))),
        }
    }
}

/// Summary of one reliability bin `(lower, upper]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub mean_confidence: f64,
    pub accuracy: f64,
}

/// Bin of `conf` among `bins` equal-width right-closed bins; 0 goes to the
/// first bin.
pub fn bin_index(conf: f64, bins: usize) -> usize {
    let b = bins as f64;
    let mut idx = ((conf * b).ceil() as usize).saturating_sub(1).min(bins - 1);
    // correct for rounding in conf * b so that the edge rule is exact
    while idx > 0 && conf <= idx as f64 / b {
        idx -= 1;
    }
    while idx + 1 < bins && conf > (idx + 1) as f64 / b {
        idx += 1;
    }
    idx
}

fn check_records(records: &[PredictionRecord], bins: usize) -> Result<()> {
    if bins == 0 {
        return Err(Error::Invalid("number of bins must be at least 1".into()));
    }
    if records.is_empty() {
        return Err(Error::Invalid("no prediction records".into()));
    }
    if let Some(r) = records.iter().find(|r| !(0.0..=1.0).contains(&r.confidence)) {
        return Err(Error::Invalid(format!("confidence {} outside [0, 1]", r.confidence)));
    }
    Ok(())
}

/// Per-bin counts, mean confidence and accuracy. Empty bins have zero
/// confidence and accuracy.
pub fn reliability(records: &[PredictionRecord], bins: usize) -> Result<Vec<ReliabilityBin>> {
    check_records(records, bins)?;
    let mut count = vec![0usize; bins];
    let mut conf = vec![0.0; bins];
    let mut hits = vec![0usize; bins];
    for r in records {
        let b = bin_index(r.confidence, bins);
        count[b] += 1;
        conf[b] += r.confidence;
        hits[b] += usize::from(r.is_correct());
    }
    Ok((0..bins)
        .map(|b| {
            let c = count[b].max(1) as f64;
            ReliabilityBin {
                lower: b as f64 / bins as f64,
                upper: (b + 1) as f64 / bins as f64,
                count: count[b],
                mean_confidence: conf[b] / c,
                accuracy: hits[b] as f64 / c,
            }
        })
        .collect())
}

/// Expected calibration error with `bins` equal-width bins:
/// `sum_b |B_b| / n * |mean confidence - accuracy|`.
pub fn ece(records: &[PredictionRecord], bins: usize) -> Result<f64> {
    let n = records.len() as f64;
    Ok(reliability(records, bins)?
        .iter()
        .map(|b| b.count as f64 / n * (b.mean_confidence - b.accuracy).abs())
        .sum())
}

/// Fraction of records with `predicted == actual`.
pub fn accuracy(records: &[PredictionRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::Invalid("no prediction records".into()));
    }
    Ok(records.iter().filter(|r| r.is_correct()).count() as f64 / records.len() as f64)
}

/// EFDA log-odds evaluated at the true parameters.
pub fn true_log_odds(
    spec: &FamilySpec,
    eta0: NaturalParam,
    eta1: NaturalParam,
    alpha: f64,
    x0: f64,
) -> Result<f64> {
    BinaryModel::from_parts(*spec, alpha, eta0, eta1)?.log_odds(x0)
}

/// Inputs to the delta-method variance of the EFDA log-odds at `x0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CRInputs {
    pub spec: FamilySpec,
    pub eta0: NaturalParam,
    pub eta1: NaturalParam,
    pub n0: usize,
    pub n1: usize,
    pub x0: f64,
}

/// `sum_k [T(x0) - A'(eta_k)]^2 / (N_k I(eta_k))`, the asymptotic variance
/// of the EFDA log-odds estimate at `x0` (prior estimation excluded).
pub fn cr_bound_log_odds(inputs: &CRInputs) -> Result<f64> {
    let spec = &inputs.spec;
    if inputs.n0 == 0 || inputs.n1 == 0 {
        return Err(Error::Invalid("class counts must be positive".into()));
    }
    let t = spec
        .suff_stat(inputs.x0)?
        .scalar()
        .ok_or_else(|| Error::Unsupported("log-odds bound for a vector statistic".into()))?;
    let mut total = 0.0;
    for (eta, n) in [(inputs.eta0, inputs.n0), (inputs.eta1, inputs.n1)] {
        let mean = spec.mean_suffstat(&eta)?.scalar().unwrap_or(f64::NAN);
        let info = spec.var_suffstat(&eta)?;
        total += (t - mean).powi(2) / (n as f64 * info);
    }
    Ok(total)
}

/// Spread of Monte-Carlo estimates around a known truth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorStats {
    /// Population variance (divide by the number of trials).
    pub variance: f64,
    pub mse: f64,
    pub bias: f64,
}

pub fn estimator_stats(estimates: &[f64], truth: f64) -> Result<EstimatorStats> {
    if estimates.len() < 2 {
        return Err(Error::Invalid("need at least two estimates".into()));
    }
    let m = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / m;
    let variance = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / m;
    let bias = mean - truth;
    Ok(EstimatorStats {
        variance,
        mse: variance + bias * bias,
        bias,
    })
}

/// Mean and sample standard deviation (`n - 1` denominator; zero for a
/// single value).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(confidence: f64, correct: bool) -> PredictionRecord {
        PredictionRecord {
            confidence,
            predicted: 1,
            actual: usize::from(correct),
        }
    }

    #[test]
    fn ece_examples() {
        assert_eq!(ece(&[rec(1.0, true), rec(1.0, true)], 10).unwrap(), 0.0);
        let e = ece(&[rec(0.9, true), rec(0.9, false)], 10).unwrap();
        assert!((e - 0.4).abs() < 1e-15);
        let rs: Vec<_> = (0..1000).map(|i| rec(0.8, i < 600)).collect();
        assert!((ece(&rs, 10).unwrap() - 0.2).abs() < 1e-12);
        assert!(ece(&[], 10).is_err());
        assert!(ece(&[rec(1.5, true)], 10).is_err());
    }

    #[test]
    fn bins_are_right_closed() {
        assert_eq!(bin_index(0.0, 10), 0);
        assert_eq!(bin_index(0.1, 10), 0);
        assert_eq!(bin_index(0.1000001, 10), 1);
        assert_eq!(bin_index(0.3, 10), 2);
        assert_eq!(bin_index(0.7, 10), 6);
        assert_eq!(bin_index(1.0, 10), 9);
        assert_eq!(bin_index(0.37, 1), 0);
    }

    #[test]
    fn one_bin_is_global_gap() {
        let rs = [rec(0.2, true), rec(0.9, false), rec(0.6, true), rec(0.55, true)];
        let mc = rs.iter().map(|r| r.confidence).sum::<f64>() / 4.0;
        let e = ece(&rs, 1).unwrap();
        assert!((e - (mc - accuracy(&rs).unwrap()).abs()).abs() < 1e-15);
    }

    #[test]
    fn accuracy_examples() {
        let rs = [rec(0.5, true), rec(0.5, true), rec(0.5, false), rec(0.5, true)];
        assert_eq!(accuracy(&rs).unwrap(), 0.75);
    }

    #[test]
    fn binary_confidence_modes() {
        let r = ConfidenceMode::TopLabel.record(0.3, 0);
        assert_eq!((r.predicted, r.confidence), (0, 0.7));
        let r = ConfidenceMode::PositiveClass.record(0.3, 0);
        assert_eq!((r.predicted, r.confidence), (1, 0.3));
        assert_eq!(ConfidenceMode::TopLabel.record(0.5, 0).predicted, 0);
    }

    #[test]
    fn cr_bound_weibull_example() {
        let spec = FamilySpec::weibull(3.0).unwrap();
        let inputs = CRInputs {
            spec,
            eta0: NaturalParam::Scalar(-1.0 / 64.0),
            eta1: NaturalParam::Scalar(-0.125),
            n0: 300,
            n1: 700,
            x0: 2.0,
        };
        let v = cr_bound_log_odds(&inputs).unwrap();
        let expected = (56.0f64 / 64.0).powi(2) / 300.0;
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.002552).abs() < 1e-6);
        let doubled = cr_bound_log_odds(&CRInputs { n0: 600, n1: 1400, ..inputs }).unwrap();
        assert!((doubled - v / 2.0).abs() < 1e-15);
    }

    #[test]
    fn estimator_stats_examples() {
        let s = estimator_stats(&[2.0, 2.0], 2.0).unwrap();
        assert_eq!((s.variance, s.mse, s.bias), (0.0, 0.0, 0.0));
        let s = estimator_stats(&[3.0, 3.0], 1.0).unwrap();
        assert_eq!((s.variance, s.mse, s.bias), (0.0, 4.0, 2.0));
        let s = estimator_stats(&[1.0, 3.0], 0.0).unwrap();
        assert_eq!((s.variance, s.mse, s.bias), (1.0, 5.0, 2.0));
    }

    #[test]
    fn true_log_odds_exponential_density_ratio() {
        // theta0 = 2, theta1 = 1: log f1/f0 = log(theta0/theta1) + x (1/theta0 - 1/theta1)
        for x in [2.0 * 2f64.ln(), 3.0] {
            let v = true_log_odds(
                &FamilySpec::Exponential,
                NaturalParam::Scalar(-0.5),
                NaturalParam::Scalar(-1.0),
                0.5,
                x,
            )
            .unwrap();
            assert!((v - (2f64.ln() - 0.5 * x)).abs() < 1e-12);
        }
    }
}
