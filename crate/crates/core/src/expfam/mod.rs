//! One-dimensional exponential families in canonical form
//! `f(x | eta) = h(x) exp(eta . T(x) - A(eta))`.
//!
//! [`FamilySpec`] bundles a family with its known auxiliary parameters and
//! exposes the log-partition `A`, its first two derivatives, the sufficient
//! statistic `T`, the log base measure `log h`, the closed-form maximum
//! likelihood estimate and a sampler.
//!
//! The Weibull shape is written `k` throughout; it is the same quantity that
//! is sometimes written `k'` when the family is tabulated next to others.

mod sample;
mod weibull_shape;

use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

pub use sample::Sampler;
pub use weibull_shape::{fit_weibull_shape, fit_weibull_shape_shared};

/// Natural parameter. Scalar for every family except the full Normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NaturalParam {
    Scalar(f64),
    Pair([f64; 2]),
}

impl NaturalParam {
    pub fn components(&self) -> &[f64] {
        match self {
            NaturalParam::Scalar(v) => std::slice::from_ref(v),
            NaturalParam::Pair(v) => v,
        }
    }

    pub fn dim(&self) -> usize {
        self.components().len()
    }

    /// The scalar value, or `None` for a pair.
    pub fn scalar(&self) -> Option<f64> {
        match *self {
            NaturalParam::Scalar(v) => Some(v),
            NaturalParam::Pair(_) => None,
        }
    }

    pub fn from_components(c: &[f64]) -> Result<Self> {
        match *c {
            [v] => Ok(NaturalParam::Scalar(v)),
            [a, b] => Ok(NaturalParam::Pair([a, b])),
            _ => Err(Error::Dimension {
                expected: 1,
                got: c.len(),
            }),
        }
    }

    fn is_finite(&self) -> bool {
        self.components().iter().all(|v| v.is_finite())
    }
}

/// Value of the sufficient statistic (or of its mean).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SuffStat {
    Scalar(f64),
    Pair([f64; 2]),
}

impl SuffStat {
    pub fn components(&self) -> &[f64] {
        match self {
            SuffStat::Scalar(v) => std::slice::from_ref(v),
            SuffStat::Pair(v) => v,
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match *self {
            SuffStat::Scalar(v) => Some(v),
            SuffStat::Pair(_) => None,
        }
    }

    /// `eta . T`
    pub fn dot(&self, eta: &NaturalParam) -> f64 {
        self.components()
            .iter()
            .zip(eta.components())
            .map(|(t, e)| t * e)
            .sum()
    }
}

/// Class-conditional average of `T(X_i)` together with the number of
/// observations it was computed from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuffStatMean {
    pub value: SuffStat,
    pub count: usize,
}

impl SuffStatMean {
    /// Averages `T(x)` over `xs`, checking that each value lies in the support.
    pub fn from_values(spec: &FamilySpec, xs: &[f64]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::Invalid("cannot average zero observations".into()));
        }
        let n = xs.len() as f64;
        for &x in xs {
            spec.check_support(x)?;
        }
        let value = match spec {
            FamilySpec::NormalFull => {
                // two-pass variance keeps the second moment consistent with the mean
                let mean = xs.iter().sum::<f64>() / n;
                let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
                SuffStat::Pair([mean, var + mean * mean])
            }
            _ => {
                let mut acc = 0.0;
                for &x in xs {
                    acc += spec.scalar_stat(x);
                }
                SuffStat::Scalar(acc / n)
            }
        };
        Ok(SuffStatMean {
            value,
            count: xs.len(),
        })
    }
}

/// One of the nine supported exponential families with its known auxiliary
/// parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilySpec {
    /// Normal with known standard deviation; `T(x) = x / sigma`.
    NormalKnownVar { sigma: f64 },
    /// Normal with unknown mean and variance; `T(x) = (x, x^2)`.
    NormalFull,
    /// Laplace with known location; `T(x) = |x - mu|`.
    LaplaceKnownLoc { mu: f64 },
    Exponential,
    /// Gamma with known shape `a`.
    GammaKnownShape { shape: f64 },
    /// Weibull with known shape `k`; `T(x) = x^k`.
    WeibullKnownShape { shape: f64 },
    Poisson,
    Bernoulli,
    /// Negative binomial with known number of failures `r`.
    NegBinomialKnownR { r: f64 },
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Numerically stable `1 / (1 + exp(-x))`.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl FamilySpec {
    pub fn weibull(shape: f64) -> Result<Self> {
        let s = FamilySpec::WeibullKnownShape { shape };
        s.validate()?;
        Ok(s)
    }

    pub fn gamma(shape: f64) -> Result<Self> {
        let s = FamilySpec::GammaKnownShape { shape };
        s.validate()?;
        Ok(s)
    }

    pub fn normal_known_var(sigma: f64) -> Result<Self> {
        let s = FamilySpec::NormalKnownVar { sigma };
        s.validate()?;
        Ok(s)
    }

    pub fn laplace(mu: f64) -> Result<Self> {
        let s = FamilySpec::LaplaceKnownLoc { mu };
        s.validate()?;
        Ok(s)
    }

    pub fn neg_binomial(r: f64) -> Result<Self> {
        let s = FamilySpec::NegBinomialKnownR { r };
        s.validate()?;
        Ok(s)
    }

    /// Checks that the auxiliary parameters are finite (and positive where
    /// required).
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!(
                    "{} must be finite and positive, got {v}",
                    name
                )))
            }
        };
        match *self {
            FamilySpec::NormalKnownVar { sigma } => positive("sigma", sigma),
            FamilySpec::LaplaceKnownLoc { mu } if !mu.is_finite() => Err(Error::InvalidSpec(
                format!("location must be finite, got {mu}"),
            )),
            FamilySpec::GammaKnownShape { shape } => positive("gamma shape", shape),
            FamilySpec::WeibullKnownShape { shape } => positive("weibull shape", shape),
            FamilySpec::NegBinomialKnownR { r } => positive("r", r),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::NormalKnownVar { .. } => "normal-known-var",
            FamilySpec::NormalFull => "normal",
            FamilySpec::LaplaceKnownLoc { .. } => "laplace",
            FamilySpec::Exponential => "exponential",
            FamilySpec::GammaKnownShape { .. } => "gamma",
            FamilySpec::WeibullKnownShape { .. } => "weibull",
            FamilySpec::Poisson => "poisson",
            FamilySpec::Bernoulli => "bernoulli",
            FamilySpec::NegBinomialKnownR { .. } => "negbin",
        }
    }

    /// The auxiliary parameter, if the family has one.
    pub fn aux(&self) -> Option<f64> {
        match *self {
            FamilySpec::NormalKnownVar { sigma } => Some(sigma),
            FamilySpec::LaplaceKnownLoc { mu } => Some(mu),
            FamilySpec::GammaKnownShape { shape } => Some(shape),
            FamilySpec::WeibullKnownShape { shape } => Some(shape),
            FamilySpec::NegBinomialKnownR { r } => Some(r),
            _ => None,
        }
    }

    /// Dimension of `T(x)` and of the natural parameter.
    pub fn dim(&self) -> usize {
        match self {
            FamilySpec::NormalFull => 2,
            _ => 1,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            FamilySpec::Poisson | FamilySpec::Bernoulli | FamilySpec::NegBinomialKnownR { .. }
        )
    }

    fn domain_err(&self, eta: &NaturalParam) -> Error {
        Error::Domain {
            family: self.to_string(),
            eta: eta.components().to_vec(),
        }
    }

    pub fn in_domain(&self, eta: &NaturalParam) -> bool {
        if !eta.is_finite() || eta.dim() != self.dim() {
            return false;
        }
        let c = eta.components();
        match self {
            FamilySpec::NormalKnownVar { .. } | FamilySpec::Poisson | FamilySpec::Bernoulli => {
                true
            }
            FamilySpec::NormalFull => c[1] < 0.0,
            _ => c[0] < 0.0,
        }
    }

    pub fn check_domain(&self, eta: &NaturalParam) -> Result<()> {
        if self.in_domain(eta) {
            Ok(())
        } else {
            Err(self.domain_err(eta))
        }
    }

    pub fn in_support(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        match self {
            FamilySpec::NormalKnownVar { .. }
            | FamilySpec::NormalFull
            | FamilySpec::LaplaceKnownLoc { .. } => true,
            FamilySpec::Exponential
            | FamilySpec::GammaKnownShape { .. }
            | FamilySpec::WeibullKnownShape { .. } => x > 0.0,
            FamilySpec::Poisson | FamilySpec::NegBinomialKnownR { .. } => {
                x >= 0.0 && x.fract() == 0.0
            }
            FamilySpec::Bernoulli => x == 0.0 || x == 1.0,
        }
    }

    pub fn check_support(&self, x: f64) -> Result<()> {
        if self.in_support(x) {
            Ok(())
        } else {
            Err(Error::Support {
                family: self.to_string(),
                x,
            })
        }
    }

    /// `T(x)` for scalar families, without support checks.
    fn scalar_stat(&self, x: f64) -> f64 {
        match *self {
            FamilySpec::NormalKnownVar { sigma } => x / sigma,
            FamilySpec::LaplaceKnownLoc { mu } => (x - mu).abs(),
            FamilySpec::WeibullKnownShape { shape } => x.powf(shape),
            _ => x,
        }
    }

    /// Sufficient statistic `T(x)`.
    pub fn suff_stat(&self, x: f64) -> Result<SuffStat> {
        self.check_support(x)?;
        Ok(match self {
            FamilySpec::NormalFull => SuffStat::Pair([x, x * x]),
            _ => SuffStat::Scalar(self.scalar_stat(x)),
        })
    }

    /// Log-partition function `A(eta)`.
    pub fn log_partition(&self, eta: &NaturalParam) -> Result<f64> {
        self.check_domain(eta)?;
        let c = eta.components();
        let e = c[0];
        Ok(match *self {
            FamilySpec::NormalKnownVar { .. } => 0.5 * e * e,
            FamilySpec::NormalFull => {
                let (e1, e2) = (c[0], c[1]);
                -e1 * e1 / (4.0 * e2) - 0.5 * (-2.0 * e2).ln()
            }
            FamilySpec::LaplaceKnownLoc { .. } => (-2.0 / e).ln(),
            FamilySpec::Exponential => -(-e).ln(),
            FamilySpec::GammaKnownShape { shape } => -shape * (-e).ln(),
            FamilySpec::WeibullKnownShape { shape } => -(-e * shape).ln(),
            FamilySpec::Poisson => e.exp(),
            FamilySpec::Bernoulli => softplus(e),
            FamilySpec::NegBinomialKnownR { r } => -r * (-e.exp_m1()).ln(),
        })
    }

    /// Gradient of the log-partition, i.e. `E_eta[T(X)]`.
    pub fn mean_suffstat(&self, eta: &NaturalParam) -> Result<SuffStat> {
        self.check_domain(eta)?;
        let c = eta.components();
        let e = c[0];
        Ok(match *self {
            FamilySpec::NormalFull => {
                let (e1, e2) = (c[0], c[1]);
                SuffStat::Pair([
                    -e1 / (2.0 * e2),
                    e1 * e1 / (4.0 * e2 * e2) - 1.0 / (2.0 * e2),
                ])
            }
            FamilySpec::NormalKnownVar { .. } => SuffStat::Scalar(e),
            FamilySpec::LaplaceKnownLoc { .. }
            | FamilySpec::Exponential
            | FamilySpec::WeibullKnownShape { .. } => SuffStat::Scalar(-1.0 / e),
            FamilySpec::GammaKnownShape { shape } => SuffStat::Scalar(-shape / e),
            FamilySpec::Poisson => SuffStat::Scalar(e.exp()),
            FamilySpec::Bernoulli => SuffStat::Scalar(logistic(e)),
            FamilySpec::NegBinomialKnownR { r } => SuffStat::Scalar(r * e.exp() / -e.exp_m1()),
        })
    }

    /// Second derivative of the log-partition, `Var_eta[T(X)]`, which is also
    /// the per-observation Fisher information. Scalar families only.
    pub fn var_suffstat(&self, eta: &NaturalParam) -> Result<f64> {
        if let FamilySpec::NormalFull = self {
            return Err(Error::Unsupported(
                "scalar Fisher information of the two-parameter normal".into(),
            ));
        }
        self.check_domain(eta)?;
        let e = eta.components()[0];
        Ok(match *self {
            FamilySpec::NormalKnownVar { .. } => 1.0,
            FamilySpec::LaplaceKnownLoc { .. }
            | FamilySpec::Exponential
            | FamilySpec::WeibullKnownShape { .. } => 1.0 / (e * e),
            FamilySpec::GammaKnownShape { shape } => shape / (e * e),
            FamilySpec::Poisson => e.exp(),
            FamilySpec::Bernoulli => {
                let p = logistic(e);
                p * (1.0 - p)
            }
            FamilySpec::NegBinomialKnownR { r } => {
                let q = -e.exp_m1();
                r * e.exp() / (q * q)
            }
            FamilySpec::NormalFull => unreachable!(),
        })
    }

    /// `log h(x)`, including all normalising constants.
    pub fn log_base_measure(&self, x: f64) -> Result<f64> {
        self.check_support(x)?;
        const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
        Ok(match *self {
            FamilySpec::NormalKnownVar { sigma } => {
                -LN_SQRT_2PI - sigma.ln() - x * x / (2.0 * sigma * sigma)
            }
            FamilySpec::NormalFull => -LN_SQRT_2PI,
            FamilySpec::LaplaceKnownLoc { .. }
            | FamilySpec::Exponential
            | FamilySpec::Bernoulli => 0.0,
            FamilySpec::GammaKnownShape { shape } => (shape - 1.0) * x.ln() - ln_gamma(shape),
            // the factor k is carried by A(eta) = -ln(-eta k)
            FamilySpec::WeibullKnownShape { shape } => (shape - 1.0) * x.ln(),
            FamilySpec::Poisson => -ln_gamma(x + 1.0),
            FamilySpec::NegBinomialKnownR { r } => {
                ln_gamma(x + r) - ln_gamma(r) - ln_gamma(x + 1.0)
            }
        })
    }

    /// `log f(x | eta) = log h(x) + eta . T(x) - A(eta)`.
    pub fn log_density(&self, eta: &NaturalParam, x: f64) -> Result<f64> {
        let a = self.log_partition(eta)?;
        let t = self.suff_stat(x)?;
        Ok(self.log_base_measure(x)? + t.dot(eta) - a)
    }

    /// Closed-form MLE: the unique `eta` with `grad A(eta) = mean`.
    ///
    /// Fails with [`Error::Degenerate`] when the mean sits on the boundary of
    /// the moment space (all-zero counts, a Bernoulli mean of 0 or 1, zero
    /// sample variance).
    pub fn mle_from_mean(&self, mean: &SuffStatMean) -> Result<NaturalParam> {
        let c = mean.value.components();
        if c.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: c.len(),
            });
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("non-finite sufficient-statistic mean {c:?}")));
        }
        let degenerate = |what: &str| Err(Error::Degenerate(format!("{}: {what}", self.name())));
        let m = c[0];
        let eta = match *self {
            FamilySpec::NormalKnownVar { .. } => m,
            FamilySpec::NormalFull => {
                let var = c[1] - m * m;
                if var <= 0.0 {
                    return degenerate("zero sample variance");
                }
                return Ok(NaturalParam::Pair([m / var, -0.5 / var]));
            }
            FamilySpec::LaplaceKnownLoc { .. }
            | FamilySpec::Exponential
            | FamilySpec::WeibullKnownShape { .. } => {
                if m <= 0.0 {
                    return degenerate("mean sufficient statistic is not positive");
                }
                -1.0 / m
            }
            FamilySpec::GammaKnownShape { shape } => {
                if m <= 0.0 {
                    return degenerate("mean is not positive");
                }
                -shape / m
            }
            FamilySpec::Poisson => {
                if m <= 0.0 {
                    return degenerate("all counts are zero");
                }
                m.ln()
            }
            FamilySpec::Bernoulli => {
                if m <= 0.0 || m >= 1.0 {
                    return degenerate("mean is 0 or 1");
                }
                (m / (1.0 - m)).ln()
            }
            FamilySpec::NegBinomialKnownR { r } => {
                if m <= 0.0 {
                    return degenerate("all counts are zero");
                }
                // log(m / (r + m))
                -(r / m).ln_1p()
            }
        };
        Ok(NaturalParam::Scalar(eta))
    }

    /// Like [`mle_from_mean`](Self::mle_from_mean), but on boundary data
    /// shrinks the mean slightly into the interior (pseudo-count 0.5 for
    /// counts and indicators, a `1e-12`-scale floor for continuous spreads)
    /// and reports `true` as the second element.
    pub fn mle_with_fallback(&self, mean: &SuffStatMean) -> Result<(NaturalParam, bool)> {
        match self.mle_from_mean(mean) {
            Ok(eta) => Ok((eta, false)),
            Err(Error::Degenerate(_)) => {
                let n = mean.count.max(1) as f64;
                let c = mean.value.components();
                let m = c[0];
                let shrunk = match *self {
                    FamilySpec::Bernoulli => {
                        let p = if m <= 0.0 {
                            0.5 / (n + 1.0)
                        } else {
                            (n + 0.5) / (n + 1.0)
                        };
                        SuffStat::Scalar(p)
                    }
                    FamilySpec::Poisson | FamilySpec::NegBinomialKnownR { .. } => {
                        SuffStat::Scalar(0.5 / n)
                    }
                    FamilySpec::LaplaceKnownLoc { mu } => {
                        SuffStat::Scalar(1e-12 * mu.abs().max(1.0))
                    }
                    FamilySpec::NormalFull => {
                        let var = 1e-12 * (m * m).max(1.0);
                        SuffStat::Pair([m, m * m + var])
                    }
                    _ => SuffStat::Scalar(1e-12),
                };
                let eta = self.mle_from_mean(&SuffStatMean {
                    value: shrunk,
                    count: mean.count,
                })?;
                Ok((eta, true))
            }
            Err(e) => Err(e),
        }
    }

    /// Maps the usual parameterisation of each family to its natural
    /// parameter:
    ///
    /// | family | parameters |
    /// |---|---|
    /// | normal-known-var | mean |
    /// | normal | mean, standard deviation |
    /// | laplace | scale `b` |
    /// | exponential, gamma | scale `theta` |
    /// | weibull | scale `lambda` |
    /// | poisson | rate |
    /// | bernoulli | success probability |
    /// | negbin | `p` in `(0, 1)`, with mean `r p / (1 - p)` |
    pub fn natural_from_params(&self, params: &[f64]) -> Result<NaturalParam> {
        let bad = || {
            Error::Config(format!(
                "invalid parameters {params:?} for family {}",
                self
            ))
        };
        let eta = match (*self, params) {
            (FamilySpec::NormalFull, &[mu, sd]) if sd > 0.0 => {
                let v = sd * sd;
                NaturalParam::Pair([mu / v, -0.5 / v])
            }
            (FamilySpec::NormalFull, _) => return Err(bad()),
            (_, &[p]) => NaturalParam::Scalar(match *self {
                FamilySpec::NormalKnownVar { sigma } => p / sigma,
                FamilySpec::LaplaceKnownLoc { .. } | FamilySpec::Exponential if p > 0.0 => {
                    -1.0 / p
                }
                FamilySpec::GammaKnownShape { .. } if p > 0.0 => -1.0 / p,
                FamilySpec::WeibullKnownShape { shape } if p > 0.0 => -p.powf(-shape),
                FamilySpec::Poisson if p > 0.0 => p.ln(),
                FamilySpec::Bernoulli if p > 0.0 && p < 1.0 => (p / (1.0 - p)).ln(),
                FamilySpec::NegBinomialKnownR { .. } if p > 0.0 && p < 1.0 => p.ln(),
                _ => return Err(bad()),
            }),
            _ => return Err(bad()),
        };
        self.check_domain(&eta).map_err(|_| bad())?;
        Ok(eta)
    }

    /// Draws `n` i.i.d. values from `f(. | eta)`.
    pub fn sample<R: rand::Rng + ?Sized>(
        &self,
        eta: &NaturalParam,
        rng: &mut R,
        n: usize,
    ) -> Result<Vec<f64>> {
        self.check_domain(eta)?;
        let mut sampler = Sampler::new(*self, *eta);
        Ok((0..n).map(|_| sampler.draw(rng)).collect())
    }
}

impl fmt::Display for FamilySpec {
    /// `name` or `name:aux`, e.g. `weibull:3`; parsed back by `FromStr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.aux() {
            Some(v) => write!(f, "{}:{}", self.name(), v),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, aux) = match s.split_once(':') {
            Some((n, a)) => {
                let v: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad parameter in `{s}`")))?;
                (n.trim(), Some(v))
            }
            None => (s, None),
        };
        let need = || {
            aux.ok_or_else(|| {
                Error::InvalidSpec(format!("family `{name}` needs a parameter, e.g. `{name}:1`"))
            })
        };
        let none = |spec: FamilySpec| {
            if aux.is_some() {
                Err(Error::InvalidSpec(format!("family `{name}` takes no parameter")))
            } else {
                Ok(spec)
            }
        };
        let spec = match name.to_ascii_lowercase().as_str() {
            "normal-known-var" => FamilySpec::NormalKnownVar { sigma: need()? },
            "normal" => none(FamilySpec::NormalFull)?,
            "laplace" => FamilySpec::LaplaceKnownLoc { mu: need()? },
            "exponential" => none(FamilySpec::Exponential)?,
            "gamma" => FamilySpec::GammaKnownShape { shape: need()? },
            "weibull" => FamilySpec::WeibullKnownShape { shape: need()? },
            "poisson" => none(FamilySpec::Poisson)?,
            "bernoulli" => none(FamilySpec::Bernoulli)?,
            "negbin" => FamilySpec::NegBinomialKnownR { r: need()? },
            other => return Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: f64) -> NaturalParam {
        NaturalParam::Scalar(v)
    }

    fn mean(v: f64) -> SuffStatMean {
        SuffStatMean {
            value: SuffStat::Scalar(v),
            count: 10,
        }
    }

    #[test]
    fn log_partition_examples() {
        assert_eq!(FamilySpec::Poisson.log_partition(&s(0.0)).unwrap(), 1.0);
        assert_eq!(FamilySpec::Exponential.log_partition(&s(-1.0)).unwrap(), 0.0);
        let w = FamilySpec::weibull(3.0).unwrap();
        let a = w.log_partition(&s(-1.0)).unwrap();
        assert!((a - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!((a + 1.098612).abs() < 1e-6);
    }

    #[test]
    fn log_partition_rejects_outside_domain() {
        assert!(matches!(
            FamilySpec::Exponential.log_partition(&s(0.0)),
            Err(Error::Domain { .. })
        ));
        assert!(FamilySpec::NormalFull
            .log_partition(&NaturalParam::Pair([1.0, 0.5]))
            .is_err());
        assert!(FamilySpec::Poisson
            .log_partition(&NaturalParam::Pair([1.0, -0.5]))
            .is_err());
    }

    #[test]
    fn mean_and_variance_examples() {
        let m = FamilySpec::Poisson.mean_suffstat(&s(2f64.ln())).unwrap();
        assert!((m.scalar().unwrap() - 2.0).abs() < 1e-15);
        let m = FamilySpec::Exponential.mean_suffstat(&s(-0.5)).unwrap();
        assert_eq!(m.scalar().unwrap(), 2.0);
        let m = FamilySpec::Bernoulli.mean_suffstat(&s(0.0)).unwrap();
        assert_eq!(m.scalar().unwrap(), 0.5);

        assert_eq!(FamilySpec::Poisson.var_suffstat(&s(0.0)).unwrap(), 1.0);
        let w = FamilySpec::weibull(3.0).unwrap();
        assert_eq!(w.var_suffstat(&s(-0.25)).unwrap(), 16.0);
        assert_eq!(FamilySpec::Exponential.var_suffstat(&s(-2.0)).unwrap(), 0.25);
        assert!(matches!(
            FamilySpec::NormalFull.var_suffstat(&NaturalParam::Pair([0.0, -0.5])),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn suff_stat_examples() {
        let w = FamilySpec::weibull(3.0).unwrap();
        assert_eq!(w.suff_stat(2.0).unwrap(), SuffStat::Scalar(8.0));
        assert_eq!(
            FamilySpec::NormalFull.suff_stat(3.0).unwrap(),
            SuffStat::Pair([3.0, 9.0])
        );
        let l = FamilySpec::laplace(1.0).unwrap();
        assert_eq!(l.suff_stat(-2.0).unwrap(), SuffStat::Scalar(3.0));
    }

    #[test]
    fn support_errors() {
        let w = FamilySpec::weibull(3.0).unwrap();
        assert!(matches!(w.suff_stat(0.0), Err(Error::Support { .. })));
        assert!(FamilySpec::Bernoulli.suff_stat(0.5).is_err());
        assert!(FamilySpec::Poisson.suff_stat(1.5).is_err());
        assert!(FamilySpec::Poisson.suff_stat(-1.0).is_err());
        assert!(FamilySpec::NormalFull.suff_stat(f64::NAN).is_err());
    }

    #[test]
    fn log_density_examples() {
        let v = FamilySpec::Exponential.log_density(&s(-1.0), 1.0).unwrap();
        assert_eq!(v, -1.0);
        let v = FamilySpec::Poisson.log_density(&s(0.0), 0.0).unwrap();
        assert!((v + 1.0).abs() < 1e-15);
        let v = FamilySpec::Bernoulli.log_density(&s(0.0), 1.0).unwrap();
        assert!((v - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn weibull_density_matches_closed_form() {
        let (k, lambda, x) = (3.0f64, 2.0f64, 1.7f64);
        let spec = FamilySpec::weibull(k).unwrap();
        let eta = spec.natural_from_params(&[lambda]).unwrap();
        let expected = (k / lambda) * (x / lambda).powf(k - 1.0) * (-(x / lambda).powf(k)).exp();
        let got = spec.log_density(&eta, x).unwrap().exp();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn mle_examples() {
        let e = FamilySpec::Poisson.mle_from_mean(&mean(2.0)).unwrap();
        assert!((e.scalar().unwrap() - 2f64.ln()).abs() < 1e-15);
        let e = FamilySpec::Bernoulli.mle_from_mean(&mean(0.5)).unwrap();
        assert_eq!(e.scalar().unwrap(), 0.0);
        let w = FamilySpec::weibull(3.0).unwrap();
        assert_eq!(w.mle_from_mean(&mean(8.0)).unwrap().scalar().unwrap(), -0.125);
        let nb = FamilySpec::neg_binomial(2.0).unwrap();
        let e = nb.mle_from_mean(&mean(2.0)).unwrap().scalar().unwrap();
        assert!((e - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn mle_boundary_is_degenerate() {
        for (spec, m) in [
            (FamilySpec::Bernoulli, 0.0),
            (FamilySpec::Bernoulli, 1.0),
            (FamilySpec::Poisson, 0.0),
        ] {
            assert!(matches!(
                spec.mle_from_mean(&mean(m)),
                Err(Error::Degenerate(_))
            ));
            let (eta, flagged) = spec.mle_with_fallback(&mean(m)).unwrap();
            assert!(flagged);
            assert!(spec.in_domain(&eta));
        }
        let zero_var = SuffStatMean::from_values(&FamilySpec::NormalFull, &[2.0, 2.0, 2.0]).unwrap();
        assert!(FamilySpec::NormalFull.mle_from_mean(&zero_var).is_err());
        let (eta, flagged) = FamilySpec::NormalFull.mle_with_fallback(&zero_var).unwrap();
        assert!(flagged && FamilySpec::NormalFull.in_domain(&eta));
    }

    #[test]
    fn bernoulli_fallback_uses_half_pseudo_count() {
        let m = SuffStatMean {
            value: SuffStat::Scalar(1.0),
            count: 9,
        };
        let (eta, _) = FamilySpec::Bernoulli.mle_with_fallback(&m).unwrap();
        let p = logistic(eta.scalar().unwrap());
        assert!((p - 9.5 / 10.0).abs() < 1e-12);
    }

    #[test]
    fn family_strings_round_trip() {
        for spec in [
            FamilySpec::NormalKnownVar { sigma: 1.5 },
            FamilySpec::NormalFull,
            FamilySpec::LaplaceKnownLoc { mu: -0.25 },
            FamilySpec::Exponential,
            FamilySpec::GammaKnownShape { shape: 2.0 },
            FamilySpec::WeibullKnownShape { shape: 3.0 },
            FamilySpec::Poisson,
            FamilySpec::Bernoulli,
            FamilySpec::NegBinomialKnownR { r: 0.1 + 0.2 },
        ] {
            let text = spec.to_string();
            assert_eq!(text.parse::<FamilySpec>().unwrap(), spec, "{text}");
        }
        assert!("weibull".parse::<FamilySpec>().is_err());
        assert!("weibull:-1".parse::<FamilySpec>().is_err());
        assert!("poisson:2".parse::<FamilySpec>().is_err());
        assert!("cauchy".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn natural_from_params_matches_table() {
        let w = FamilySpec::weibull(3.0).unwrap();
        assert_eq!(w.natural_from_params(&[2.0]).unwrap(), s(-0.125));
        assert_eq!(w.natural_from_params(&[4.0]).unwrap(), s(-1.0 / 64.0));
        let g = FamilySpec::gamma(2.0).unwrap();
        assert_eq!(g.natural_from_params(&[0.5]).unwrap(), s(-2.0));
        assert!(FamilySpec::Poisson.natural_from_params(&[0.0]).is_err());
        assert_eq!(
            FamilySpec::NormalFull.natural_from_params(&[1.0, 2.0]).unwrap(),
            NaturalParam::Pair([0.25, -0.125])
        );
    }
}
