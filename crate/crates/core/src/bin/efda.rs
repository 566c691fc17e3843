use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use efda::baselines::{GaussianClassModel, LogisticModel};
use efda::efda::{BinaryModel, MulticlassModel, ProductModel};
use efda::expfam::{fit_weibull_shape_shared, FamilySpec};
use efda::io::{read_table, Table, BarChart, LinePlot, Model, Series};
use efda::sim::{
    run_binary_benchmark, run_efficiency, run_imbalance_sweep, run_multiclass_benchmark,
    run_sample_size_sweep, run_unknown_k_ablation, BenchmarkTable, ConfigFile, EfficiencyTable,
    ExperimentConfig,
};
use efda::{Error, Result};

#[derive(Parser)]
#[command(name = "efda", version, about = "Exponential-family discriminant analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a classifier to a delimited data file (features..., label).
    Fit(FitArgs),
    /// Write class posteriors for each row of a data file.
    Predict(PredictArgs),
    /// Two-class accuracy/ECE benchmark.
    BenchBinary(RunArgs),
    /// Multiclass accuracy/ECE benchmark.
    BenchMulticlass(RunArgs),
    /// Log-odds variance and MSE against the Cramer-Rao bound.
    Efficiency(RunArgs),
    /// Benchmark over training sizes.
    SweepN(RunArgs),
    /// Benchmark over class priors.
    SweepAlpha(RunArgs),
    /// Known versus estimated Weibull shape.
    AblateShape(RunArgs),
    /// Render a result CSV as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the seed of every experiment.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of ECE bins.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bins: Option<u64>,
    /// Worker threads for the trials.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Also write per-trial rows to `<name>_trials.csv`.
    #[arg(long)]
    per_trial: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitMethod {
    Efda,
    #[value(name = "efda-khat")]
    EfdaKhat,
    Lda,
    Qda,
    Lr,
}

#[derive(Args)]
struct FitArgs {
    /// Training data; the last column holds labels 0..K.
    #[arg(long)]
    data: PathBuf,
    /// Family such as `weibull:3`; a comma list gives one family per feature.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_enum, default_value = "efda")]
    method: FitMethod,
    /// Number of classes (default: largest label + 1).
    #[arg(long)]
    classes: Option<usize>,
    /// Output directory; the model is written to `model.txt`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Feature rows, optionally followed by a label column.
    #[arg(long)]
    data: PathBuf,
    /// Output directory; posteriors are written to `predictions.csv`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    EceByFamily,
    AccuracyByFamily,
    EceVsN,
    AccuracyVsN,
    EceVsAlpha,
    EfficiencyVariance,
    EfficiencyMse,
}

#[derive(Args)]
struct PlotArgs {
    /// A CSV written by one of the experiment subcommands.
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, value_enum)]
    figure: Figure,
    /// Output directory; the chart is written to `<figure>.svg`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Fit(a) => fit(a),
        Command::Predict(a) => predict(a),
        Command::BenchBinary(a) => run_benchmark(a, run_binary_benchmark),
        Command::BenchMulticlass(a) => run_benchmark(a, run_multiclass_benchmark),
        Command::SweepN(a) => run_benchmark(a, run_sample_size_sweep),
        Command::SweepAlpha(a) => run_benchmark(a, run_imbalance_sweep),
        Command::AblateShape(a) => run_benchmark(a, run_unknown_k_ablation),
        Command::Efficiency(a) => efficiency(a),
        Command::Plot(a) => plot(a),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, msg } => Error::Invalid(format!("{}:{line}: {msg}", path.display())),
        other => other,
    }
}

fn create_out(dir: &Path, file: &str) -> Result<fs::File> {
    fs::create_dir_all(dir)?;
    Ok(fs::File::create(dir.join(file))?)
}

fn load_config(a: &RunArgs) -> Result<ConfigFile> {
    let mut cfg = ConfigFile::load(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.set_seed(seed);
    }
    if let Some(bins) = a.bins {
        cfg.set_bins(bins as usize)?;
    }
    Ok(cfg)
}

fn in_pool<T: Send>(threads: Option<u64>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n as usize);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start thread pool: {e}")))?;
    pool.install(f)
}

fn run_benchmark(a: RunArgs, runner: fn(&ExperimentConfig) -> Result<BenchmarkTable>) -> Result<()> {
    let cfg = load_config(&a)?;
    let table = in_pool(a.threads, || {
        let mut table = BenchmarkTable::default();
        for exp in &cfg.experiments {
            table.extend(runner(exp)?);
        }
        Ok(table)
    })?;
    table.write_csv(create_out(&a.out, &format!("{}.csv", cfg.name))?)?;
    if a.per_trial {
        table.write_trials_csv(create_out(&a.out, &format!("{}_trials.csv", cfg.name))?)?;
    }
    Ok(())
}

fn efficiency(a: RunArgs) -> Result<()> {
    let cfg = load_config(&a)?;
    let table = in_pool(a.threads, || {
        let mut table = EfficiencyTable::default();
        for exp in &cfg.experiments {
            table.extend(run_efficiency(exp)?);
        }
        Ok(table)
    })?;
    table.write_csv(create_out(&a.out, &format!("{}.csv", cfg.name))?)?;
    if a.per_trial {
        table.write_trials_csv(create_out(&a.out, &format!("{}_trials.csv", cfg.name))?)?;
    }
    Ok(())
}

fn parse_families(list: &str) -> Result<Vec<FamilySpec>> {
    list.split(',').map(|s| s.trim().parse()).collect()
}

fn check_support(table: &Table, specs: &[FamilySpec], path: &Path) -> Result<()> {
    for (row, line) in table.rows.iter().zip(&table.lines) {
        for (spec, &x) in specs.iter().zip(row) {
            spec.check_support(x)
                .map_err(|e| Error::Invalid(format!("{}:{line}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn fit(a: FitArgs) -> Result<()> {
    let table = read_table(&read_file(&a.data)?).map_err(|e| with_path(&a.data, e))?;
    let data = table.labeled().map_err(|e| with_path(&a.data, e))?;
    let classes = a.classes.unwrap_or_else(|| data.num_classes());
    if classes < 2 {
        return Err(Error::Invalid("need at least two classes".into()));
    }
    let scalar_only = |what: &str| -> Result<()> {
        if data.dim() != 1 {
            return Err(Error::Invalid(format!("{what} needs a single feature column")));
        }
        Ok(())
    };
    let model = match a.method {
        FitMethod::Efda => {
            let list = a
                .family
                .as_deref()
                .ok_or_else(|| Error::Invalid("--family is required for efda".into()))?;
            let mut specs = parse_families(list)?;
            if specs.len() == 1 && data.dim() > 1 {
                specs = vec![specs[0]; data.dim()];
            }
            if specs.len() != data.dim() {
                return Err(Error::Dimension {
                    expected: data.dim(),
                    got: specs.len(),
                });
            }
            check_support(&table, &specs, &a.data)?;
            if data.dim() > 1 {
                Model::Product(ProductModel::fit(specs, &data, classes)?)
            } else if classes == 2 {
                Model::Binary(BinaryModel::fit(specs[0], &data)?)
            } else {
                Model::Multiclass(MulticlassModel::fit(specs[0], &data, classes)?)
            }
        }
        FitMethod::EfdaKhat => {
            scalar_only("efda-khat")?;
            check_support(&table, &[FamilySpec::weibull(1.0)?], &a.data)?;
            let groups = data.split_feature(0, classes)?;
            let refs: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();
            let spec = FamilySpec::weibull(fit_weibull_shape_shared(&refs)?)?;
            if classes == 2 {
                Model::Binary(BinaryModel::fit(spec, &data)?)
            } else {
                Model::Multiclass(MulticlassModel::fit(spec, &data, classes)?)
            }
        }
        FitMethod::Lda => {
            scalar_only("lda")?;
            Model::Gaussian(GaussianClassModel::fit_lda(&data, classes)?)
        }
        FitMethod::Qda => {
            scalar_only("qda")?;
            Model::Gaussian(GaussianClassModel::fit_qda(&data, classes)?)
        }
        FitMethod::Lr => {
            scalar_only("lr")?;
            let m = LogisticModel::fit(&data, classes)?;
            if !m.converged {
                eprintln!("warning: logistic regression did not converge after {} iterations", m.iterations);
            }
            Model::Logistic(m)
        }
    };
    create_out(&a.out, "model.txt")?.write_all(model.to_text().as_bytes())?;
    Ok(())
}

fn predict(a: PredictArgs) -> Result<()> {
    let model = Model::from_text(&read_file(&a.model)?).map_err(|e| with_path(&a.model, e))?;
    let table = read_table(&read_file(&a.data)?).map_err(|e| with_path(&a.data, e))?;
    let (rows, labels) = table.features(model.num_features())?;
    let k = model.num_classes();
    let mut w = csv::Writer::from_writer(create_out(&a.out, "predictions.csv")?);
    let mut header = vec!["row".to_string(), "predicted".to_string()];
    header.extend((0..k).map(|c| format!("p{c}")));
    if labels.is_some() {
        header.push("actual".into());
    }
    let csv_err = |e: csv::Error| Error::Invalid(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for (i, x) in rows.iter().enumerate() {
        let p = model.posteriors(x).map_err(|e| match e {
            Error::Support { .. } | Error::Domain { .. } => Error::Invalid(format!(
                "{}:{}: {e}",
                a.data.display(),
                table.lines[i]
            )),
            other => other,
        })?;
        let mut rec = vec![i.to_string(), efda::numeric::argmax(&p).to_string()];
        rec.extend(p.iter().map(|v| format!("{v:?}")));
        if let Some(l) = &labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Groups benchmark rows into one series per (experiment, method), in order
/// of first appearance.
fn benchmark_series(
    table: &BenchmarkTable,
    x: impl Fn(&efda::sim::BenchmarkRow) -> Option<f64>,
    y: impl Fn(&efda::sim::BenchmarkRow) -> (f64, f64),
) -> Result<Vec<Series>> {
    let experiments = unique(table.rows.iter().map(|r| r.experiment.clone()));
    let mut out = Vec::new();
    for exp in &experiments {
        for method in unique(table.rows.iter().filter(|r| &r.experiment == exp).map(|r| r.method)) {
            let mut points = Vec::new();
            let mut errors = Vec::new();
            for r in table.select(exp, method) {
                let xv = x(r).ok_or_else(|| Error::Invalid(format!("row for `{exp}` has no x value")))?;
                let (m, s) = y(r);
                points.push((xv, m));
                errors.push(s);
            }
            let name = if experiments.len() > 1 {
                format!("{exp} {method}")
            } else {
                method.to_string()
            };
            out.push(Series {
                name,
                points,
                errors: Some(errors),
            });
        }
    }
    Ok(out)
}

fn unique<T: PartialEq>(it: impl Iterator<Item = T>) -> Vec<T> {
    let mut v = Vec::new();
    for x in it {
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v
}

fn plot(a: PlotArgs) -> Result<()> {
    let file = fs::File::open(&a.csv).map_err(|e| Error::Invalid(format!("{}: {e}", a.csv.display())))?;
    let pct = |m: f64, s: f64| (100.0 * m, 100.0 * s);
    let svg = match a.figure {
        Figure::EceByFamily | Figure::AccuracyByFamily => {
            let t = BenchmarkTable::read_csv(file).map_err(|e| with_path(&a.csv, e))?;
            let ece = matches!(a.figure, Figure::EceByFamily);
            let groups = unique(t.rows.iter().map(|r| r.experiment.clone()));
            let methods = unique(t.rows.iter().map(|r| r.method));
            let series = methods
                .iter()
                .map(|&m| {
                    let values = groups
                        .iter()
                        .map(|g| {
                            t.select(g, m)
                                .next()
                                .map(|r| 100.0 * if ece { r.ece_mean } else { r.accuracy_mean })
                                .unwrap_or(0.0)
                        })
                        .collect();
                    (m.to_string(), values)
                })
                .collect();
            BarChart {
                title: if ece { "ECE by distribution" } else { "Accuracy by distribution" }.into(),
                y_label: if ece { "ECE (%)" } else { "accuracy (%)" }.into(),
                groups,
                series,
            }
            .render()?
        }
        Figure::EceVsN | Figure::AccuracyVsN | Figure::EceVsAlpha => {
            let t = BenchmarkTable::read_csv(file).map_err(|e| with_path(&a.csv, e))?;
            let by_alpha = matches!(a.figure, Figure::EceVsAlpha);
            let ece = !matches!(a.figure, Figure::AccuracyVsN);
            let series = benchmark_series(
                &t,
                |r| if by_alpha { r.alpha } else { Some(r.n_train as f64) },
                |r| {
                    if ece {
                        pct(r.ece_mean, r.ece_sd)
                    } else {
                        pct(r.accuracy_mean, r.accuracy_sd)
                    }
                },
            )?;
            LinePlot {
                title: match a.figure {
                    Figure::EceVsN => "ECE vs training size",
                    Figure::AccuracyVsN => "Accuracy vs training size",
                    _ => "ECE vs class prior",
                }
                .into(),
                x_label: if by_alpha { "alpha = P(Y=1)" } else { "n (training size)" }.into(),
                y_label: if ece { "ECE (%)" } else { "accuracy (%)" }.into(),
                log_x: !by_alpha,
                log_y: false,
                series,
            }
            .render()?
        }
        Figure::EfficiencyVariance | Figure::EfficiencyMse => {
            let t = EfficiencyTable::read_csv(file).map_err(|e| with_path(&a.csv, e))?;
            let variance = matches!(a.figure, Figure::EfficiencyVariance);
            let experiments = unique(t.rows.iter().map(|r| r.experiment.clone()));
            let mut series = Vec::new();
            for exp in &experiments {
                let prefix = if experiments.len() > 1 { format!("{exp} ") } else { String::new() };
                let methods = unique(t.rows.iter().filter(|r| &r.experiment == exp).map(|r| r.method));
                for &m in &methods {
                    series.push(Series {
                        name: format!("{prefix}{m}"),
                        points: t
                            .select(exp, m)
                            .map(|r| (r.n_train as f64, if variance { r.mean_variance } else { r.mean_mse }))
                            .collect(),
                        errors: None,
                    });
                }
                if let Some(&m) = methods.first() {
                    series.push(Series {
                        name: format!("{prefix}CR bound"),
                        points: t.select(exp, m).map(|r| (r.n_train as f64, r.cr_bound)).collect(),
                        errors: None,
                    });
                }
            }
            LinePlot {
                title: if variance { "Variance of estimated log-odds" } else { "MSE of estimated log-odds" }.into(),
                x_label: "n (training size)".into(),
                y_label: if variance { "mean variance" } else { "mean MSE" }.into(),
                log_x: true,
                log_y: !variance,
                series,
            }
            .render()?
        }
    };
    let name = a
        .figure
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_else(|| "figure".into());
    create_out(&a.out, &format!("{name}.svg"))?.write_all(svg.as_bytes())?;
    Ok(())
}
