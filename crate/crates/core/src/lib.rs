//! Exponential-family discriminant analysis (EFDA): generative classifiers
//! whose class-conditional densities are fitted in closed form, together with
//! the baselines, calibration metrics and simulation harness used to compare
//! them.

pub mod baselines;
pub mod data;
pub mod efda;
pub mod error;
pub mod expfam;
pub mod io;
pub mod metrics;
pub mod numeric;
pub mod sim;

pub use data::{Dataset, LabeledSample};
pub use error::{Error, Result};
pub use expfam::{FamilySpec, NaturalParam, SuffStat, SuffStatMean};
