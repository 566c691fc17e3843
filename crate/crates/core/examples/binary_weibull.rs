//! Two-class EFDA on Weibull data: closed-form fit, the linear log-odds in
//! T(x) = x^k, and posteriors.

use efda::efda::BinaryModel;
use efda::expfam::FamilySpec;
use efda::sim::{generate_binary, ExperimentConfig};

fn main() -> efda::Result<()> {
    let spec = FamilySpec::weibull(3.0)?;
    let mut exp = ExperimentConfig::new("weibull", spec, vec![vec![4.0], vec![2.0]], 1000);
    exp.alpha = Some(0.7);
    let (train, test) = generate_binary(&exp, 0)?;
    let model = BinaryModel::fit(spec, &train)?;
    println!("alpha_hat = {:.4}", model.alpha());
    println!("eta_hat   = {:?} / {:?}", model.eta(0), model.eta(1));
    println!("log-odds  = {:.4} + {:.6} * x^3", model.intercept(), model.slope()[0]);
    for x in [0.5, 1.5, 2.5, 3.5] {
        println!("P(Y=1 | x={x}) = {:.4}", model.posterior(x)?);
    }
    let correct = test
        .iter()
        .filter(|(x, y)| model.predict(x[0]).map(|p| p == *y).unwrap_or(false))
        .count();
    println!("test accuracy = {:.4}", correct as f64 / test.len() as f64);
    Ok(())
}
