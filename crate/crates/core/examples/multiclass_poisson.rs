//! K-class EFDA with the MAP rule and softmax posteriors on count data.

use efda::efda::MulticlassModel;
use efda::expfam::FamilySpec;
use efda::sim::{generate_trial, ExperimentConfig};

fn main() -> efda::Result<()> {
    let exp = ExperimentConfig::new(
        "poisson-k3",
        FamilySpec::Poisson,
        vec![vec![2.0], vec![5.0], vec![10.0]],
        2000,
    );
    let priors = exp.class_priors()?;
    let (train, test) = generate_trial(&exp, exp.n_train, &priors, 0)?;
    let model = MulticlassModel::fit(FamilySpec::Poisson, &train, 3)?;
    println!("priors = {:.4?}", model.priors());
    for (k, c) in model.class_fits().iter().enumerate() {
        println!("class {k}: eta = {:.4?}, rate = {:.4}", c.eta.components(), c.eta.components()[0].exp());
    }
    for x in [0.0, 3.0, 7.0, 15.0] {
        println!("x = {x:>4}: MAP class {} posteriors {:.3?}", model.predict(x)?, model.posteriors(x)?);
    }
    let mut hits = 0;
    for (x, y) in test.iter() {
        hits += usize::from(model.predict(x[0])? == y);
    }
    println!("test accuracy = {:.4}", hits as f64 / test.len() as f64);
    Ok(())
}
