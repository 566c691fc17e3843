//! Product model over features from different families (exponential-family
//! Naive Bayes).

use efda::efda::ProductModel;
use efda::expfam::FamilySpec;
use efda::Dataset;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> efda::Result<()> {
    let specs = vec![FamilySpec::Poisson, FamilySpec::gamma(2.0)?];
    // class-wise (Poisson rate, Gamma scale)
    let truth = [(3.0, 1.0), (6.0, 2.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut data = Dataset::new(2);
    for (label, &(rate, scale)) in truth.iter().enumerate() {
        let counts = specs[0].sample(&specs[0].natural_from_params(&[rate])?, &mut rng, 500)?;
        let sizes = specs[1].sample(&specs[1].natural_from_params(&[scale])?, &mut rng, 500)?;
        for (c, s) in counts.iter().zip(&sizes) {
            data.push(&[*c, *s], label)?;
        }
    }
    let model = ProductModel::fit(specs, &data, 2)?;
    for x in [[2.0, 0.5], [5.0, 2.0], [9.0, 6.0]] {
        println!("x = {x:?}: log-odds {:+.4}, posteriors {:.4?}", model.log_odds(&x)?, model.posteriors(&x)?);
    }
    for j in 0..2 {
        let m = model.marginal_binary(j)?;
        println!("feature {j} alone: intercept {:+.4}, slope {:+.4?}", m.intercept(), m.slope());
    }
    Ok(())
}
