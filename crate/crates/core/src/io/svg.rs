//! Minimal deterministic SVG charts: line plots (optionally log-scaled) and
//! grouped bar charts. Coordinates are printed with two decimals so the same
//! input always produces the same bytes.

use std::fmt::Write as _;

use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// One named line: `(x, y)` points with optional symmetric error bars.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub errors: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BarChart {
    pub title: String,
    pub y_label: String,
    pub groups: Vec<String>,
    /// `(series name, one value per group)`
    pub series: Vec<(String, Vec<f64>)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.to_string() }
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    mag * if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    }
}

/// An axis mapping data values onto a pixel interval.
struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, log: bool, zero: bool) -> Result<Self> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            if !v.is_finite() || (log && v <= 0.0) {
                return Err(Error::Invalid(format!("cannot plot value {v}")));
            }
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Err(Error::Invalid("nothing to plot".into()));
        }
        if log {
            lo = lo.floor();
            hi = hi.ceil().max(lo + 1.0);
        } else {
            if zero {
                lo = lo.min(0.0);
            }
            if hi - lo < 1e-12 {
                hi = lo + 1.0;
            }
            let step = nice_step(hi - lo);
            lo = (lo / step).floor() * step;
            hi = (hi / step).ceil() * step;
        }
        Ok(Axis { lo, hi, log })
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            (self.lo as i32..=self.hi as i32).map(|e| 10f64.powi(e)).collect()
        } else {
            let step = nice_step(self.hi - self.lo);
            let n = ((self.hi - self.lo) / step).round() as i32;
            (0..=n).map(|i| self.lo + step * i as f64).collect()
        }
    }
}

struct Canvas {
    out: String,
}

impl Canvas {
    fn new(title: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
            escape(title)
        );
        Canvas { out }
    }

    fn px(&self, fx: f64) -> f64 {
        LEFT + fx * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, fy: f64) -> f64 {
        HEIGHT - BOTTOM - fy * (HEIGHT - TOP - BOTTOM)
    }

    fn frame(&mut self, x_label: &str, y_label: &str) {
        let (x0, x1, y0, y1) = (self.px(0.0), self.px(1.0), self.py(0.0), self.py(1.0));
        let _ = writeln!(
            self.out,
            r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        let _ = writeln!(
            self.out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 18.0,
            escape(x_label)
        );
        let _ = writeln!(
            self.out,
            r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
            (y0 + y1) / 2.0,
            escape(y_label)
        );
    }

    fn y_ticks(&mut self, axis: &Axis) {
        for t in axis.ticks() {
            let y = self.py(axis.frac(t));
            let _ = writeln!(
                self.out,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##,
                self.px(0.0),
                self.px(1.0)
            );
            let _ = writeln!(
                self.out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                self.px(0.0) - 6.0,
                y + 4.0,
                tick_label(t)
            );
        }
    }

    fn legend(&mut self, names: &[&str]) {
        for (i, name) in names.iter().enumerate() {
            let y = TOP + 10.0 + 20.0 * i as f64;
            let x = WIDTH - RIGHT + 16.0;
            let _ = writeln!(
                self.out,
                r#"<rect x="{x:.2}" y="{:.2}" width="14" height="10" fill="{}"/>"#,
                y - 9.0,
                PALETTE[i % PALETTE.len()]
            );
            let _ = writeln!(
                self.out,
                r#"<text x="{:.2}" y="{y:.2}">{}</text>"#,
                x + 20.0,
                escape(name)
            );
        }
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

impl LinePlot {
    pub fn render(&self) -> Result<String> {
        let xs = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
        let x_axis = Axis::new(xs, self.log_x, false)?;
        let ys = self.series.iter().flat_map(|s| {
            s.points.iter().enumerate().flat_map(move |(i, p)| {
                let e = s.errors.as_ref().map_or(0.0, |e| e[i]);
                let lo = if self.log_y { p.1 } else { p.1 - e };
                [lo, p.1 + e]
            })
        });
        let y_axis = Axis::new(ys, self.log_y, !self.log_y)?;
        for s in &self.series {
            if s.errors.as_ref().is_some_and(|e| e.len() != s.points.len()) {
                return Err(Error::Dimension {
                    expected: s.points.len(),
                    got: s.errors.as_ref().map_or(0, Vec::len),
                });
            }
        }

        let mut c = Canvas::new(&self.title);
        c.y_ticks(&y_axis);
        for t in x_axis.ticks() {
            let x = c.px(x_axis.frac(t));
            let _ = writeln!(
                c.out,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                c.py(0.0) + 18.0,
                tick_label(t)
            );
        }
        c.frame(&self.x_label, &self.y_label);
        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .map(|&(x, y)| (c.px(x_axis.frac(x)), c.py(y_axis.frac(y))))
                .collect();
            let path = pts
                .iter()
                .map(|(x, y)| format!("{x:.2},{y:.2}"))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(
                c.out,
                r#"<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2"/>"#
            );
            for (j, (x, y)) in pts.iter().enumerate() {
                let _ = writeln!(c.out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
                if let Some(err) = &s.errors {
                    let (_, v) = s.points[j];
                    let lo = if self.log_y { v } else { v - err[j] };
                    let _ = writeln!(
                        c.out,
                        r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{color}"/>"#,
                        c.py(y_axis.frac(lo)),
                        c.py(y_axis.frac(v + err[j]))
                    );
                }
            }
        }
        let names: Vec<&str> = self.series.iter().map(|s| s.name.as_str()).collect();
        c.legend(&names);
        Ok(c.finish())
    }
}

impl BarChart {
    pub fn render(&self) -> Result<String> {
        for (name, values) in &self.series {
            if values.len() != self.groups.len() {
                return Err(Error::Invalid(format!(
                    "series `{name}` has {} values for {} groups",
                    values.len(),
                    self.groups.len()
                )));
            }
        }
        let values = self.series.iter().flat_map(|s| s.1.iter().copied());
        let y_axis = Axis::new(values, false, true)?;
        let mut c = Canvas::new(&self.title);
        c.y_ticks(&y_axis);
        c.frame("", &self.y_label);
        let g = self.groups.len() as f64;
        let s = self.series.len().max(1) as f64;
        let group_w = 1.0 / g;
        let bar_w = 0.8 * group_w / s;
        for (gi, group) in self.groups.iter().enumerate() {
            let center = c.px(group_w * (gi as f64 + 0.5));
            let _ = writeln!(
                c.out,
                r#"<text x="{center:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                c.py(0.0) + 18.0,
                escape(group)
            );
            for (si, (_, vals)) in self.series.iter().enumerate() {
                let fx = group_w * gi as f64 + 0.1 * group_w + bar_w * si as f64;
                let x0 = c.px(fx);
                let x1 = c.px(fx + bar_w);
                let y_base = c.py(y_axis.frac(0.0));
                let y_top = c.py(y_axis.frac(vals[gi]));
                let _ = writeln!(
                    c.out,
                    r#"<rect x="{x0:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    y_top.min(y_base),
                    x1 - x0,
                    (y_base - y_top).abs(),
                    PALETTE[si % PALETTE.len()]
                );
            }
        }
        let names: Vec<&str> = self.series.iter().map(|s| s.0.as_str()).collect();
        c.legend(&names);
        Ok(c.finish())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(log: bool) -> LinePlot {
        LinePlot {
            title: "t <1>".into(),
            x_label: "n".into(),
            y_label: "ECE".into(),
            log_x: log,
            log_y: log,
            series: vec![Series {
                name: "a".into(),
                points: vec![(100.0, 0.02), (1000.0, 0.01), (10000.0, 0.005)],
                errors: Some(vec![0.001, 0.001, 0.001]),
            }],
        }
    }

    #[test]
    fn line_plot_is_deterministic_and_escaped() {
        for log in [false, true] {
            let a = plot(log).render().unwrap();
            assert_eq!(a, plot(log).render().unwrap());
            assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
            assert!(a.contains("t &lt;1&gt;"));
            assert_eq!(a.matches("<circle").count(), 3);
        }
    }

    #[test]
    fn log_axis_rejects_non_positive() {
        let mut p = plot(true);
        p.series[0].points[0].1 = 0.0;
        assert!(p.render().is_err());
    }

    #[test]
    fn bar_chart_draws_one_rect_per_value() {
        let b = BarChart {
            title: "ECE".into(),
            y_label: "%".into(),
            groups: vec!["g1".into(), "g2".into()],
            series: vec![("x".into(), vec![1.0, 2.0]), ("y".into(), vec![3.0, 0.5])],
        };
        let svg = b.render().unwrap();
        // background + frame + 4 bars + 2 legend swatches
        assert_eq!(svg.matches("<rect").count(), 8);
        let bad = BarChart {
            series: vec![("x".into(), vec![1.0])],
            ..b
        };
        assert!(bad.render().is_err());
    }

    #[test]
    fn tick_labels_are_compact() {
        assert_eq!(tick_label(0.5), "0.5");
        assert_eq!(tick_label(2.0), "2");
        assert_eq!(tick_label(1e6), "1e6");
        assert_eq!(tick_label(0.0), "0");
    }
}
