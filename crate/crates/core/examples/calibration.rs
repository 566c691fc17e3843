//! Reliability diagram and ECE of EFDA versus LDA on skewed data.

use efda::baselines::GaussianClassModel;
use efda::efda::BinaryModel;
use efda::expfam::FamilySpec;
use efda::metrics::{ece, reliability, ConfidenceMode, PredictionRecord};
use efda::sim::{generate_binary, ExperimentConfig};

fn main() -> efda::Result<()> {
    let spec = FamilySpec::Exponential;
    let mut exp = ExperimentConfig::new("exponential", spec, vec![vec![1.0], vec![3.0]], 1000);
    exp.n_test = 20_000;
    let (train, test) = generate_binary(&exp, 0)?;
    let efda = BinaryModel::fit(spec, &train)?;
    let lda = GaussianClassModel::fit_lda(&train, 2)?;
    let mode = ConfidenceMode::PositiveClass;
    let mut rec_efda = Vec::new();
    let mut rec_lda = Vec::new();
    for (x, y) in test.iter() {
        rec_efda.push(mode.record(efda.posterior(x[0])?, y));
        rec_lda.push(mode.record(lda.posteriors(x[0])[1], y));
    }
    report("EFDA", &rec_efda)?;
    report("LDA", &rec_lda)?;
    Ok(())
}

fn report(name: &str, records: &[PredictionRecord]) -> efda::Result<()> {
    println!("{name}: ECE = {:.2}%", 100.0 * ece(records, 10)?);
    for b in reliability(records, 10)?.iter().filter(|b| b.count > 0) {
        println!(
            "  ({:.1}, {:.1}]  n={:>5}  confidence {:.3}  frequency {:.3}",
            b.lower, b.upper, b.count, b.mean_confidence, b.accuracy
        );
    }
    Ok(())
}
