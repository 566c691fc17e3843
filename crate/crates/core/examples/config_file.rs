//! Parsing an experiment config and running a sample-size sweep from it.

use efda::sim::{run_sample_size_sweep, ConfigFile};

const CONFIG: &str = r#"
name = "demo"

[[experiment]]
label = "poisson"
family = "poisson"
class_params = [[3.0], [5.0]]
n_train = 100
n_test = 1000
trials = 10
n_values = [50, 200, 800]
"#;

fn main() -> efda::Result<()> {
    let cfg = ConfigFile::parse(CONFIG)?;
    for exp in &cfg.experiments {
        let table = run_sample_size_sweep(exp)?;
        for r in &table.rows {
            println!(
                "{} n={:>4} {:<4} accuracy {:.3} ECE {:.3}",
                r.experiment, r.n_train, r.method, r.accuracy_mean, r.ece_mean
            );
        }
    }
    Ok(())
}
