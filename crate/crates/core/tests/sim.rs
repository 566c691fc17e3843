use std::path::Path;

use efda::metrics::mean_sd;
use efda::sim::{
    run_binary_benchmark, run_efficiency, BenchmarkTable, ConfigFile, EfficiencyTable, Method,
};

fn config(name: &str) -> ConfigFile {
    ConfigFile::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.toml"))).unwrap()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn tables_do_not_depend_on_thread_count() {
    let mut exp = config("binary").experiments[0].clone();
    exp.trials = 24;
    let a = in_pool(1, || run_binary_benchmark(&exp).unwrap());
    let b = in_pool(3, || run_binary_benchmark(&exp).unwrap());
    assert_eq!(a, b);
}

#[test]
fn per_trial_rows_reproduce_aggregates_after_csv_round_trip() {
    let mut exp = config("binary").experiments[1].clone();
    exp.trials = 30;
    let table = run_binary_benchmark(&exp).unwrap();
    let mut rows = Vec::new();
    let mut trials = Vec::new();
    table.write_csv(&mut rows).unwrap();
    table.write_trials_csv(&mut trials).unwrap();
    let back = BenchmarkTable::read_csv(rows.as_slice()).unwrap();
    let trial_rows = BenchmarkTable::read_trials_csv(trials.as_slice()).unwrap();
    assert_eq!(back.rows, table.rows);
    for r in &back.rows {
        let mine: Vec<_> = trial_rows.iter().filter(|t| t.method == r.method).collect();
        let acc: Vec<f64> = mine.iter().filter_map(|t| t.accuracy).collect();
        let ece: Vec<f64> = mine.iter().filter_map(|t| t.ece).collect();
        assert_eq!(acc.len(), r.trials);
        assert_eq!(mine.len() - acc.len(), r.failed);
        assert_eq!(mean_sd(&acc), (r.accuracy_mean, r.accuracy_sd));
        assert_eq!(mean_sd(&ece), (r.ece_mean, r.ece_sd));
    }
}

#[test]
fn empty_table_writes_header_only() {
    let mut buf = Vec::new();
    BenchmarkTable::default().write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("experiment,classes,n_train"));
    let mut buf = Vec::new();
    EfficiencyTable::default().write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
}

#[test]
fn efda_mse_is_an_order_below_misspecified_baselines() {
    let cfg = config("efficiency");
    let table = run_efficiency(&cfg.experiments[0]).unwrap();
    let mse = |m| table.select("weibull", m).find(|r| r.n_train == 10_000).unwrap().mean_mse;
    let efda = mse(Method::Efda);
    for m in [Method::Lda, Method::Lr] {
        assert!(10.0 * efda <= mse(m), "{m}: {} vs EFDA {efda}", mse(m));
    }
    assert!(table.rows.iter().all(|r| r.failed == 0));
}

#[test]
fn shipped_configs_parse() {
    for name in ["binary", "multiclass", "efficiency", "sweep_n", "sweep_alpha", "ablate_shape"] {
        let cfg = config(name);
        assert_eq!(cfg.name, name);
        assert!(cfg.experiments.iter().all(|e| e.seed == 42));
    }
}
