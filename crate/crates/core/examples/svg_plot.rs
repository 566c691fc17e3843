//! Rendering a log-x line plot and a grouped bar chart to SVG strings.

use efda::io::{BarChart, LinePlot, Series};

fn main() -> efda::Result<()> {
    let line = LinePlot {
        title: "Variance vs n".into(),
        x_label: "n".into(),
        y_label: "variance".into(),
        log_x: true,
        log_y: true,
        series: vec![Series {
            name: "1/n".into(),
            points: [100.0, 1000.0, 10000.0].iter().map(|&n| (n, 1.0 / n)).collect(),
            errors: None,
        }],
    };
    let bars = BarChart {
        title: "ECE".into(),
        y_label: "ECE (%)".into(),
        groups: vec!["weibull".into(), "gamma".into()],
        series: vec![("efda".into(), vec![1.8, 2.6]), ("lda".into(), vec![4.6, 3.6])],
    };
    let a = line.render()?;
    let b = bars.render()?;
    println!("line plot: {} bytes; bar chart: {} bytes", a.len(), b.len());
    println!("{}", a.lines().next().unwrap_or_default());
    Ok(())
}
