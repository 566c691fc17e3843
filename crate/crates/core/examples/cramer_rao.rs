//! Monte-Carlo variance of the EFDA log-odds at one point against its
//! Cramer-Rao bound, with fixed class counts.

use efda::efda::BinaryModel;
use efda::expfam::FamilySpec;
use efda::metrics::{cr_bound_log_odds, estimator_stats, true_log_odds, CRInputs};
use efda::sim::{generate_efficiency, ExperimentConfig};

fn main() -> efda::Result<()> {
    let spec = FamilySpec::weibull(3.0)?;
    let mut exp = ExperimentConfig::new("weibull", spec, vec![vec![4.0], vec![2.0]], 1000);
    exp.alpha = Some(0.7);
    let etas = exp.class_etas()?;
    let x0 = 2.5;
    let truth = true_log_odds(&spec, etas[0], etas[1], 0.7, x0)?;
    for n in [100, 1000, 10_000] {
        let mut estimates = Vec::new();
        for trial in 0..300 {
            let data = generate_efficiency(&exp, n, trial)?;
            estimates.push(BinaryModel::fit(spec, &data)?.log_odds(x0)?);
        }
        let n1 = (n as f64 * 0.7).floor() as usize;
        let bound = cr_bound_log_odds(&CRInputs {
            spec,
            eta0: etas[0],
            eta1: etas[1],
            n0: n - n1,
            n1,
            x0,
        })?;
        let s = estimator_stats(&estimates, truth)?;
        println!(
            "n = {n:>6}: variance {:.5}, CR bound {:.5}, ratio {:.3}, bias {:+.5}",
            s.variance,
            bound,
            s.variance / bound,
            s.bias
        );
    }
    Ok(())
}
