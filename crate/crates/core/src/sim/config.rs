//! Experiment configuration files.
//!
//! A config is TOML with a `name` (used for the output file stem) and one
//! `[[experiment]]` table per setting:
//!
//! ```toml
//! name = "binary"
//!
//! [[experiment]]
//! label = "weibull"
//! family = "weibull:3"            # family string, see FamilySpec
//! class_params = [[4.0], [2.0]]   # usual parameters of each class
//! alpha = 0.7                     # P(Y = 1); or `priors = [...]`
//! n_train = 1000
//! n_test = 2000
//! trials = 100
//! seed = 42
//! methods = ["efda", "lda", "qda", "lr"]
//! ece_bins = 10
//! ```
//!
//! Optional keys: `binary_confidence` (`positive-class` or `top-label`),
//! `n_values` / `alpha_values` (sweep points), `grid_per_class` (efficiency
//! evaluation points per class) and `shape_estimator` (`shared` or `pooled`).

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::expfam::{FamilySpec, NaturalParam};
use crate::metrics::ConfidenceMode;

/// A classifier compared in the benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize, Serialize)]
pub enum Method {
    #[serde(rename = "efda")]
    Efda,
    /// EFDA on a Weibull family whose shape is estimated from the training
    /// data.
    #[serde(rename = "efda-khat")]
    EfdaEstimatedShape,
    #[serde(rename = "lda")]
    Lda,
    #[serde(rename = "qda")]
    Qda,
    #[serde(rename = "lr")]
    Lr,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Efda,
        Method::EfdaEstimatedShape,
        Method::Lda,
        Method::Qda,
        Method::Lr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Efda => "efda",
            Method::EfdaEstimatedShape => "efda-khat",
            Method::Lda => "lda",
            Method::Qda => "qda",
            Method::Lr => "lr",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

/// How the unknown Weibull shape is estimated for `efda-khat`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeEstimator {
    /// One shape shared by the classes, each class keeping its own scale.
    #[default]
    Shared,
    /// A single Weibull fitted to all training features, ignoring labels.
    Pooled,
}

fn de_family<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<FamilySpec, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

fn default_n_test() -> usize {
    2000
}
fn default_trials() -> usize {
    100
}
fn default_seed() -> u64 {
    42
}
fn default_methods() -> Vec<Method> {
    vec![Method::Efda, Method::Lda, Method::Qda, Method::Lr]
}
fn default_bins() -> usize {
    10
}
fn default_grid() -> usize {
    50
}

/// One experimental setting.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub label: String,
    #[serde(deserialize_with = "de_family")]
    pub family: FamilySpec,
    pub class_params: Vec<Vec<f64>>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub priors: Option<Vec<f64>>,
    pub n_train: usize,
    #[serde(default = "default_n_test")]
    pub n_test: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_bins")]
    pub ece_bins: usize,
    #[serde(default)]
    pub binary_confidence: ConfidenceMode,
    #[serde(default)]
    pub n_values: Vec<usize>,
    #[serde(default)]
    pub alpha_values: Vec<f64>,
    #[serde(default = "default_grid")]
    pub grid_per_class: usize,
    #[serde(default)]
    pub shape_estimator: ShapeEstimator,
}

impl ExperimentConfig {
    /// A config with the defaults above and the given class parameters.
    pub fn new(label: &str, family: FamilySpec, class_params: Vec<Vec<f64>>, n_train: usize) -> Self {
        ExperimentConfig {
            label: label.to_string(),
            family,
            class_params,
            alpha: None,
            priors: None,
            n_train,
            n_test: default_n_test(),
            trials: default_trials(),
            seed: default_seed(),
            methods: default_methods(),
            ece_bins: default_bins(),
            binary_confidence: ConfidenceMode::default(),
            n_values: Vec::new(),
            alpha_values: Vec::new(),
            grid_per_class: default_grid(),
            shape_estimator: ShapeEstimator::default(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.class_params.len()
    }

    /// True natural parameter of every class.
    pub fn class_etas(&self) -> Result<Vec<NaturalParam>> {
        self.class_params
            .iter()
            .map(|p| self.family.natural_from_params(p))
            .collect()
    }

    /// Class priors: `priors` if given, else `[1 - alpha, alpha]` for two
    /// classes, else uniform.
    pub fn class_priors(&self) -> Result<Vec<f64>> {
        let k = self.num_classes();
        let priors = match (&self.priors, self.alpha) {
            (Some(_), Some(_)) => {
                return Err(self.err("give either alpha or priors, not both"));
            }
            (Some(p), None) => p.clone(),
            (None, Some(a)) if k == 2 => vec![1.0 - a, a],
            (None, Some(_)) => return Err(self.err("alpha applies to two classes only")),
            (None, None) => vec![1.0 / k as f64; k],
        };
        let total: f64 = priors.iter().sum();
        if priors.len() != k || priors.iter().any(|p| !(*p > 0.0 && *p < 1.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(self.err(&format!("invalid class priors {priors:?}")));
        }
        Ok(priors)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Config(format!("experiment `{}`: {msg}", self.label))
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        let k = self.num_classes();
        if k < 2 {
            return Err(self.err("need parameters for at least two classes"));
        }
        self.class_etas().map_err(|e| self.err(&e.to_string()))?;
        self.class_priors()?;
        if self.trials == 0 {
            return Err(self.err("trials must be at least 1"));
        }
        for &n in std::iter::once(&self.n_train).chain(&self.n_values) {
            if n < 2 * k {
                return Err(self.err(&format!("n_train = {n} is below 2K = {}", 2 * k)));
            }
        }
        if self.n_test == 0 {
            return Err(self.err("n_test must be positive"));
        }
        if self.methods.is_empty() {
            return Err(self.err("no methods selected"));
        }
        if self.ece_bins == 0 {
            return Err(self.err("ece_bins must be at least 1"));
        }
        if let Some(a) = self.alpha_values.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(self.err(&format!("alpha value {a} outside (0, 1)")));
        }
        let weibull = matches!(self.family, FamilySpec::WeibullKnownShape { .. });
        if self.methods.contains(&Method::EfdaEstimatedShape) && !weibull {
            return Err(self.err("efda-khat needs a weibull family"));
        }
        if self.family.dim() != 1 && self.methods.iter().any(|m| *m != Method::Efda) {
            return Err(self.err("baselines need a scalar sufficient statistic"));
        }
        Ok(())
    }
}

/// A parsed config file.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub name: String,
    #[serde(rename = "experiment")]
    pub experiments: Vec<ExperimentConfig>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.experiments.is_empty() {
            return Err(Error::Config("no [[experiment]] sections".into()));
        }
        if cfg.name.is_empty() || cfg.name.contains(['/', '\\']) {
            return Err(Error::Config(format!("invalid config name `{}`", cfg.name)));
        }
        for e in &cfg.experiments {
            e.validate()?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Replaces the seed of every experiment.
    pub fn set_seed(&mut self, seed: u64) {
        for e in &mut self.experiments {
            e.seed = seed;
        }
    }

    pub fn set_bins(&mut self, bins: usize) -> Result<()> {
        if bins == 0 {
            return Err(Error::Config("bins must be at least 1".into()));
        }
        for e in &mut self.experiments {
            e.ece_bins = bins;
        }
        Ok(())
    }
}
