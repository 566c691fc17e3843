//! A small seeded benchmark built in code, printed as CSV.

use efda::expfam::FamilySpec;
use efda::sim::{run_binary_benchmark, ExperimentConfig};

fn main() -> efda::Result<()> {
    let mut exp = ExperimentConfig::new("weibull", FamilySpec::weibull(3.0)?, vec![vec![4.0], vec![2.0]], 1000);
    exp.alpha = Some(0.7);
    exp.trials = 20;
    let table = run_binary_benchmark(&exp)?;
    table.write_csv(std::io::stdout())?;
    Ok(())
}
