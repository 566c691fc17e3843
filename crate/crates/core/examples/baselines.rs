//! LDA, QDA and logistic regression next to EFDA on the same Gamma data.

use efda::baselines::{GaussianClassModel, LogisticModel};
use efda::efda::BinaryModel;
use efda::expfam::FamilySpec;
use efda::sim::{generate_binary, ExperimentConfig};

fn main() -> efda::Result<()> {
    let spec = FamilySpec::gamma(2.0)?;
    let exp = ExperimentConfig::new("gamma", spec, vec![vec![1.0], vec![2.0]], 1000);
    let (train, _) = generate_binary(&exp, 0)?;
    let efda = BinaryModel::fit(spec, &train)?;
    let lda = GaussianClassModel::fit_lda(&train, 2)?;
    let qda = GaussianClassModel::fit_qda(&train, 2)?;
    let lr = LogisticModel::fit(&train, 2)?;
    let (b0, b1) = lda.linear_log_odds()?;
    println!("EFDA log-odds = {:+.4} {:+.4} x  (exact in T(x) = x)", efda.intercept(), efda.slope()[0]);
    println!("LDA  log-odds = {b0:+.4} {b1:+.4} x");
    println!("LR   log-odds = {:+.4} {:+.4} x  (converged {}, {} iterations)", lr.intercept(), lr.slope(), lr.converged, lr.iterations);
    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "x", "efda", "lda", "qda", "lr");
    for x in [0.5, 2.0, 4.0, 8.0] {
        println!(
            "{x:>6} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            efda.log_odds(x)?,
            lda.log_odds(x),
            qda.log_odds(x),
            lr.log_odds(x)
        );
    }
    Ok(())
}
