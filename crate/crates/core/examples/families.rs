//! Log-partition, moments, closed-form MLE and sampling for every family.

use efda::expfam::FamilySpec;
use efda::SuffStatMean;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> efda::Result<()> {
    let cases = [
        (FamilySpec::normal_known_var(2.0)?, vec![1.5]),
        (FamilySpec::NormalFull, vec![1.0, 4.0]),
        (FamilySpec::laplace(0.0)?, vec![1.5]),
        (FamilySpec::Exponential, vec![2.0]),
        (FamilySpec::gamma(2.0)?, vec![1.5]),
        (FamilySpec::weibull(3.0)?, vec![2.0]),
        (FamilySpec::Poisson, vec![4.0]),
        (FamilySpec::Bernoulli, vec![0.3]),
        (FamilySpec::neg_binomial(5.0)?, vec![0.4]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("{:<22} {:>10} {:>10} {:>10} {:>12}", "family", "A(eta)", "E[T]", "Var[T]", "MLE(n=1e5)");
    for (spec, params) in cases {
        let eta = spec.natural_from_params(&params)?;
        let xs = spec.sample(&eta, &mut rng, 100_000)?;
        let fitted = spec.mle_from_mean(&SuffStatMean::from_values(&spec, &xs)?)?;
        let var = spec.var_suffstat(&eta).map(|v| format!("{v:.4}")).unwrap_or_else(|_| "-".into());
        println!(
            "{:<22} {:>10.4} {:>10.4} {:>10} {:>12}",
            spec.to_string(),
            spec.log_partition(&eta)?,
            spec.mean_suffstat(&eta)?.components()[0],
            var,
            format!("{:.4?}", fitted.components()),
        );
        println!("{:<22} true eta = {:.4?}", "", eta.components());
    }
    Ok(())
}
