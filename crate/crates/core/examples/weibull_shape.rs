//! Estimating an unknown Weibull shape before fitting EFDA.

use efda::efda::BinaryModel;
use efda::expfam::{fit_weibull_shape, fit_weibull_shape_shared, FamilySpec};
use efda::sim::{generate_binary, ExperimentConfig};

fn main() -> efda::Result<()> {
    let truth = FamilySpec::weibull(3.0)?;
    let mut exp = ExperimentConfig::new("weibull", truth, vec![vec![4.0], vec![2.0]], 1000);
    exp.alpha = Some(0.7);
    let (train, _) = generate_binary(&exp, 0)?;
    let groups = train.split_feature(0, 2)?;
    let shared = fit_weibull_shape_shared(&[&groups[0], &groups[1]])?;
    let pooled = fit_weibull_shape(train.features())?;
    println!("shared-shape estimate (class-specific scales): k = {shared:.4}");
    println!("single Weibull fitted to all features:         k = {pooled:.4}");
    for k in [3.0, shared, pooled] {
        let m = BinaryModel::fit(FamilySpec::weibull(k)?, &train)?;
        println!("k = {k:.4}: log-odds at x = 3 is {:+.4}", m.log_odds(3.0)?);
    }
    Ok(())
}
