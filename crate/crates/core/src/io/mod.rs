//! File formats: model files, delimited data files and SVG figures.

pub mod data;
pub mod model;
pub mod svg;

pub use data::{read_table, Table};
pub use model::Model;
pub use svg::{BarChart, LinePlot, Series};
