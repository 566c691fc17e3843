//! EFDA classifiers: each class-conditional density is an exponential-family
//! member fitted by its closed-form MLE, and priors are class frequencies.
//!
//! * [`BinaryModel`]: two classes, log-odds linear in `T(x)`.
//! * [`MulticlassModel`]: K classes, MAP rule and softmax posteriors.
//! * [`ProductModel`]: independent per-feature families (mixed types allowed),
//!   which is exactly Naive Bayes with exponential-family marginals.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::expfam::{FamilySpec, NaturalParam, SuffStatMean};
use crate::numeric::{argmax, logistic, softmax};

/// Fitted parameters of one class-conditional density.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassFit {
    pub eta: NaturalParam,
    /// `A(eta)`, cached because every score needs it.
    pub log_partition: f64,
    /// The MLE hit the boundary of the moment space and was shrunk inward.
    pub degenerate: bool,
}

impl ClassFit {
    pub fn fit(spec: &FamilySpec, xs: &[f64]) -> Result<Self> {
        let mean = SuffStatMean::from_values(spec, xs)?;
        let (eta, degenerate) = spec.mle_with_fallback(&mean)?;
        Ok(ClassFit {
            eta,
            log_partition: spec.log_partition(&eta)?,
            degenerate,
        })
    }

    pub fn from_eta(spec: &FamilySpec, eta: NaturalParam) -> Result<Self> {
        Ok(ClassFit {
            eta,
            log_partition: spec.log_partition(&eta)?,
            degenerate: false,
        })
    }
}

fn check_priors(priors: &[f64]) -> Result<()> {
    let total: f64 = priors.iter().sum();
    if priors.iter().any(|p| !(p.is_finite() && *p > 0.0)) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!(
            "priors must be positive and sum to 1, got {priors:?}"
        )));
    }
    Ok(())
}

fn class_frequencies(counts: &[usize]) -> Vec<f64> {
    let n: usize = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / n as f64).collect()
}

fn scalar_feature(data: &Dataset) -> Result<()> {
    if data.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: data.dim(),
        });
    }
    Ok(())
}

/// Two-class EFDA model.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryModel {
    spec: FamilySpec,
    alpha: f64,
    classes: [ClassFit; 2],
}

impl BinaryModel {
    /// Fits on scalar features with labels in `{0, 1}`; `alpha` is the
    /// fraction of class 1.
    pub fn fit(spec: FamilySpec, data: &Dataset) -> Result<Self> {
        scalar_feature(data)?;
        let groups = data.split_feature(0, 2)?;
        Self::fit_groups(spec, &groups[0], &groups[1])
    }

    /// Fits from the class-0 and class-1 observations directly.
    pub fn fit_groups(spec: FamilySpec, class0: &[f64], class1: &[f64]) -> Result<Self> {
        spec.validate()?;
        for (k, g) in [class0, class1].iter().enumerate() {
            if g.is_empty() {
                return Err(Error::EmptyClass(k));
            }
        }
        let n = (class0.len() + class1.len()) as f64;
        Ok(BinaryModel {
            spec,
            alpha: class1.len() as f64 / n,
            classes: [ClassFit::fit(&spec, class0)?, ClassFit::fit(&spec, class1)?],
        })
    }

    pub fn from_parts(spec: FamilySpec, alpha: f64, eta0: NaturalParam, eta1: NaturalParam) -> Result<Self> {
        spec.validate()?;
        check_priors(&[1.0 - alpha, alpha])?;
        Ok(BinaryModel {
            spec,
            alpha,
            classes: [ClassFit::from_eta(&spec, eta0)?, ClassFit::from_eta(&spec, eta1)?],
        })
    }

    /// Marks classes whose fit fell back from a boundary MLE.
    pub fn with_degenerate(mut self, flags: [bool; 2]) -> Self {
        self.classes[0].degenerate = flags[0];
        self.classes[1].degenerate = flags[1];
        self
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// Estimated `P(Y = 1)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eta(&self, class: usize) -> NaturalParam {
        self.classes[class].eta
    }

    pub fn class_fit(&self, class: usize) -> &ClassFit {
        &self.classes[class]
    }

    pub fn degenerate(&self) -> [bool; 2] {
        [self.classes[0].degenerate, self.classes[1].degenerate]
    }

    /// Constant term `log(alpha / (1 - alpha)) + A(eta0) - A(eta1)`.
    pub fn intercept(&self) -> f64 {
        (self.alpha / (1.0 - self.alpha)).ln() + self.classes[0].log_partition
            - self.classes[1].log_partition
    }

    /// Coefficients `eta1 - eta0` multiplying `T(x)`.
    pub fn slope(&self) -> Vec<f64> {
        self.classes[1]
            .eta
            .components()
            .iter()
            .zip(self.classes[0].eta.components())
            .map(|(a, b)| a - b)
            .collect()
    }

    /// `log P(Y=1|x) / P(Y=0|x)`.
    pub fn log_odds(&self, x: f64) -> Result<f64> {
        let t = self.spec.suff_stat(x)?;
        let slope: f64 = t
            .components()
            .iter()
            .zip(self.classes[1].eta.components().iter().zip(self.classes[0].eta.components()))
            .map(|(t, (e1, e0))| t * (e1 - e0))
            .sum();
        Ok(self.intercept() + slope)
    }

    /// `P(Y = 1 | x)`.
    pub fn posterior(&self, x: f64) -> Result<f64> {
        Ok(logistic(self.log_odds(x)?))
    }

    pub fn predict(&self, x: f64) -> Result<usize> {
        Ok(usize::from(self.log_odds(x)? > 0.0))
    }

    /// True when both classes got identical parameters and equal priors, so
    /// the posterior is 1/2 everywhere.
    pub fn is_symmetric(&self) -> bool {
        self.alpha == 0.5 && self.classes[0].eta == self.classes[1].eta
    }

    pub fn to_multiclass(&self) -> MulticlassModel {
        MulticlassModel {
            spec: self.spec,
            priors: vec![1.0 - self.alpha, self.alpha],
            log_priors: vec![(1.0 - self.alpha).ln(), self.alpha.ln()],
            classes: self.classes.to_vec(),
        }
    }
}

/// K-class EFDA model with one scalar feature.
#[derive(Clone, Debug, PartialEq)]
pub struct MulticlassModel {
    spec: FamilySpec,
    priors: Vec<f64>,
    log_priors: Vec<f64>,
    classes: Vec<ClassFit>,
}

impl MulticlassModel {
    /// Fits a `classes`-class model; every class must be observed.
    pub fn fit(spec: FamilySpec, data: &Dataset, classes: usize) -> Result<Self> {
        scalar_feature(data)?;
        spec.validate()?;
        if classes < 2 {
            return Err(Error::Invalid(format!("need at least 2 classes, got {classes}")));
        }
        let groups = data.split_feature(0, classes)?;
        let counts: Vec<usize> = groups.iter().map(Vec::len).collect();
        let fits = groups
            .iter()
            .map(|g| ClassFit::fit(&spec, g))
            .collect::<Result<Vec<_>>>()?;
        let priors = class_frequencies(&counts);
        Ok(MulticlassModel {
            spec,
            log_priors: priors.iter().map(|p| p.ln()).collect(),
            priors,
            classes: fits,
        })
    }

    pub fn from_parts(spec: FamilySpec, priors: Vec<f64>, etas: &[NaturalParam]) -> Result<Self> {
        spec.validate()?;
        check_priors(&priors)?;
        if priors.len() != etas.len() {
            return Err(Error::Dimension {
                expected: priors.len(),
                got: etas.len(),
            });
        }
        let classes = etas
            .iter()
            .map(|e| ClassFit::from_eta(&spec, *e))
            .collect::<Result<Vec<_>>>()?;
        Ok(MulticlassModel {
            spec,
            log_priors: priors.iter().map(|p| p.ln()).collect(),
            priors,
            classes,
        })
    }

    pub fn with_degenerate(mut self, flags: &[bool]) -> Self {
        for (c, &f) in self.classes.iter_mut().zip(flags) {
            c.degenerate = f;
        }
        self
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn class_fits(&self) -> &[ClassFit] {
        &self.classes
    }

    /// Per-class discriminants `log pi_k + eta_k . T(x) - A(eta_k)`; the
    /// shared `log h(x)` is dropped.
    pub fn scores(&self, x: f64) -> Result<Vec<f64>> {
        let t = self.spec.suff_stat(x)?;
        Ok(self
            .classes
            .iter()
            .zip(&self.log_priors)
            .map(|(c, lp)| lp + t.dot(&c.eta) - c.log_partition)
            .collect())
    }

    /// `log P(Y=k|x) / P(Y=j|x)`, computed directly from the parameters.
    pub fn pairwise_log_odds(&self, j: usize, k: usize, x: f64) -> Result<f64> {
        let t = self.spec.suff_stat(x)?;
        let (cj, ck) = (&self.classes[j], &self.classes[k]);
        let slope: f64 = t
            .components()
            .iter()
            .zip(ck.eta.components().iter().zip(cj.eta.components()))
            .map(|(t, (ek, ej))| t * (ek - ej))
            .sum();
        Ok(self.log_priors[k] - self.log_priors[j] + cj.log_partition - ck.log_partition + slope)
    }

    /// MAP class; ties go to the lowest index.
    pub fn predict(&self, x: f64) -> Result<usize> {
        Ok(argmax(&self.scores(x)?))
    }

    pub fn posteriors(&self, x: f64) -> Result<Vec<f64>> {
        Ok(softmax(&self.scores(x)?))
    }
}

/// Multivariate EFDA with independent features, each with its own family.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductModel {
    specs: Vec<FamilySpec>,
    priors: Vec<f64>,
    log_priors: Vec<f64>,
    /// `classes[k][j]` is feature `j` under class `k`.
    classes: Vec<Vec<ClassFit>>,
}

impl ProductModel {
    pub fn fit(specs: Vec<FamilySpec>, data: &Dataset, classes: usize) -> Result<Self> {
        if specs.len() != data.dim() {
            return Err(Error::Dimension {
                expected: specs.len(),
                got: data.dim(),
            });
        }
        if classes < 2 {
            return Err(Error::Invalid(format!("need at least 2 classes, got {classes}")));
        }
        let counts = data.class_counts(classes)?;
        if let Some(k) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass(k));
        }
        let mut fits = vec![Vec::with_capacity(specs.len()); classes];
        for (j, spec) in specs.iter().enumerate() {
            spec.validate()?;
            let groups = data.split_feature(j, classes)?;
            for (k, g) in groups.iter().enumerate() {
                fits[k].push(ClassFit::fit(spec, g)?);
            }
        }
        let priors = class_frequencies(&counts);
        Ok(ProductModel {
            specs,
            log_priors: priors.iter().map(|p| p.ln()).collect(),
            priors,
            classes: fits,
        })
    }

    pub fn from_parts(specs: Vec<FamilySpec>, priors: Vec<f64>, etas: &[Vec<NaturalParam>]) -> Result<Self> {
        check_priors(&priors)?;
        if etas.len() != priors.len() {
            return Err(Error::Dimension {
                expected: priors.len(),
                got: etas.len(),
            });
        }
        let classes = etas
            .iter()
            .map(|row| {
                if row.len() != specs.len() {
                    return Err(Error::Dimension {
                        expected: specs.len(),
                        got: row.len(),
                    });
                }
                row.iter()
                    .zip(&specs)
                    .map(|(e, s)| ClassFit::from_eta(s, *e))
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductModel {
            specs,
            log_priors: priors.iter().map(|p| p.ln()).collect(),
            priors,
            classes,
        })
    }

    /// `flags[k][j]` marks a fallback fit of feature `j` in class `k`.
    pub fn with_degenerate(mut self, flags: &[Vec<bool>]) -> Self {
        for (row, fr) in self.classes.iter_mut().zip(flags) {
            for (c, &f) in row.iter_mut().zip(fr) {
                c.degenerate = f;
            }
        }
        self
    }

    pub fn specs(&self) -> &[FamilySpec] {
        &self.specs
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Fitted parameters, indexed `[class][feature]`.
    pub fn class_fits(&self) -> &[Vec<ClassFit>] {
        &self.classes
    }

    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.specs.len() {
            return Err(Error::Dimension {
                expected: self.specs.len(),
                got: x.len(),
            });
        }
        let stats = x
            .iter()
            .zip(&self.specs)
            .map(|(&v, s)| s.suff_stat(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(self
            .classes
            .iter()
            .zip(&self.log_priors)
            .map(|(fits, lp)| {
                lp + fits
                    .iter()
                    .zip(&stats)
                    .map(|(c, t)| t.dot(&c.eta) - c.log_partition)
                    .sum::<f64>()
            })
            .collect())
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.scores(x)?))
    }

    pub fn posteriors(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(softmax(&self.scores(x)?))
    }

    /// Log-odds of class 1 against class 0 (two-class models only).
    pub fn log_odds(&self, x: &[f64]) -> Result<f64> {
        if self.classes.len() != 2 {
            return Err(Error::Unsupported(format!(
                "log-odds of a {}-class model",
                self.classes.len()
            )));
        }
        let s = self.scores(x)?;
        Ok(s[1] - s[0])
    }

    /// The single-feature binary model for feature `j`, using this model's
    /// priors.
    pub fn marginal_binary(&self, j: usize) -> Result<BinaryModel> {
        if self.classes.len() != 2 {
            return Err(Error::Unsupported("marginal of a multiclass model".into()));
        }
        BinaryModel::from_parts(
            self.specs[j],
            self.priors[1],
            self.classes[0][j].eta,
            self.classes[1][j].eta,
        )
    }
}
