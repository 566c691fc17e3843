//! Labelled training and test data.

use crate::error::{Error, Result};

/// One observation: feature vector and class label.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: usize,
}

/// A sequence of labelled samples with a fixed feature dimension, stored
/// row-major.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    dim: usize,
    features: Vec<f64>,
    labels: Vec<usize>,
}

impl Dataset {
    pub fn new(dim: usize) -> Self {
        Dataset {
            dim,
            features: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// One scalar feature per sample.
    pub fn from_scalar(xs: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        if xs.len() != labels.len() {
            return Err(Error::Dimension {
                expected: xs.len(),
                got: labels.len(),
            });
        }
        Ok(Dataset {
            dim: 1,
            features: xs,
            labels,
        })
    }

    pub fn from_samples(samples: &[LabeledSample]) -> Result<Self> {
        let dim = samples.first().map_or(1, |s| s.features.len());
        let mut d = Dataset::new(dim);
        for s in samples {
            d.push(&s.features, s.label)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, features: &[f64], label: usize) -> Result<()> {
        if features.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: features.len(),
            });
        }
        self.features.extend_from_slice(features);
        self.labels.push(label);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Flat row-major features; for `dim == 1` this is the feature column.
    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], usize)> + '_ {
        self.features
            .chunks(self.dim.max(1))
            .zip(self.labels.iter().copied())
    }

    /// One more than the largest label.
    pub fn num_classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Values of feature `j` grouped by class `0..classes`. Fails on labels
    /// outside that range or on an empty class.
    pub fn split_feature(&self, j: usize, classes: usize) -> Result<Vec<Vec<f64>>> {
        let mut groups = vec![Vec::new(); classes];
        for (row, label) in self.iter() {
            if label >= classes {
                return Err(Error::LabelOutOfRange { label, classes });
            }
            groups[label].push(row[j]);
        }
        if let Some(k) = groups.iter().position(|g| g.is_empty()) {
            return Err(Error::EmptyClass(k));
        }
        Ok(groups)
    }

    pub fn class_counts(&self, classes: usize) -> Result<Vec<usize>> {
        let mut counts = vec![0; classes];
        for &label in &self.labels {
            if label >= classes {
                return Err(Error::LabelOutOfRange { label, classes });
            }
            counts[label] += 1;
        }
        Ok(counts)
    }
}
