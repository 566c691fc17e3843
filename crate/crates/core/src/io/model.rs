//! Plain-text model files.
//!
//! One `key = value` pair per line; blank lines and lines starting with `#`
//! are ignored. Lists are space-separated; for product models the
//! per-feature entries of a class are separated by `;`. Floats are written in
//! shortest round-trip form, so a saved model reloads bit-for-bit.
//!
//! ```text
//! kind = efda
//! family = weibull:3
//! classes = 2
//! priors = 0.3 0.7
//! eta.0 = -0.015625
//! eta.1 = -0.125
//! degenerate = false false
//! ```
//!
//! Kinds: `efda` (one scalar feature, any K), `efda-product` (key
//! `families = poisson weibull:3 ...`), `lda` / `qda` (keys `means`,
//! `variances`, `floored`) and `logistic` (keys `coef.k = a b`, `converged`,
//! `iterations`).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::baselines::{GaussianClassModel, LogisticModel};
use crate::efda::{BinaryModel, MulticlassModel, ProductModel};
use crate::error::{Error, Result};
use crate::expfam::{FamilySpec, NaturalParam};

/// Any model the command-line tool can fit, save and apply.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Binary(BinaryModel),
    Multiclass(MulticlassModel),
    Product(ProductModel),
    Gaussian(GaussianClassModel),
    Logistic(LogisticModel),
}

fn fmt_list<T: std::fmt::Debug>(v: &[T]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

fn fmt_eta(eta: &NaturalParam) -> String {
    fmt_list(eta.components())
}

impl Model {
    pub fn num_classes(&self) -> usize {
        match self {
            Model::Binary(_) => 2,
            Model::Multiclass(m) => m.num_classes(),
            Model::Product(m) => m.num_classes(),
            Model::Gaussian(m) => m.num_classes(),
            Model::Logistic(m) => m.num_classes(),
        }
    }

    pub fn num_features(&self) -> usize {
        match self {
            Model::Product(m) => m.specs().len(),
            _ => 1,
        }
    }

    /// Class posteriors at one feature vector.
    pub fn posteriors(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.num_features() {
            return Err(Error::Dimension {
                expected: self.num_features(),
                got: x.len(),
            });
        }
        match self {
            Model::Binary(m) => {
                let p = m.posterior(x[0])?;
                Ok(vec![1.0 - p, p])
            }
            Model::Multiclass(m) => m.posteriors(x[0]),
            Model::Product(m) => m.posteriors(x),
            Model::Gaussian(m) => Ok(m.posteriors(x[0])),
            Model::Logistic(m) => Ok(m.posteriors(x[0])),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        match self {
            Model::Binary(m) => {
                put("kind", "efda".into());
                put("family", m.spec().to_string());
                put("classes", "2".into());
                put("priors", fmt_list(&[1.0 - m.alpha(), m.alpha()]));
                put("alpha", format!("{:?}", m.alpha()));
                put("eta.0", fmt_eta(&m.eta(0)));
                put("eta.1", fmt_eta(&m.eta(1)));
                put("degenerate", fmt_list(&m.degenerate()));
            }
            Model::Multiclass(m) => {
                put("kind", "efda".into());
                put("family", m.spec().to_string());
                put("classes", m.num_classes().to_string());
                put("priors", fmt_list(m.priors()));
                for (k, c) in m.class_fits().iter().enumerate() {
                    put(&format!("eta.{k}"), fmt_eta(&c.eta));
                }
                let flags: Vec<bool> = m.class_fits().iter().map(|c| c.degenerate).collect();
                put("degenerate", fmt_list(&flags));
            }
            Model::Product(m) => {
                put("kind", "efda-product".into());
                let fams: Vec<String> = m.specs().iter().map(|s| s.to_string()).collect();
                put("families", fams.join(" "));
                put("classes", m.num_classes().to_string());
                put("priors", fmt_list(m.priors()));
                for (k, row) in m.class_fits().iter().enumerate() {
                    let parts: Vec<String> = row.iter().map(|c| fmt_eta(&c.eta)).collect();
                    put(&format!("eta.{k}"), parts.join(" ; "));
                }
                for (k, row) in m.class_fits().iter().enumerate() {
                    let flags: Vec<bool> = row.iter().map(|c| c.degenerate).collect();
                    put(&format!("degenerate.{k}"), fmt_list(&flags));
                }
            }
            Model::Gaussian(m) => {
                put("kind", if m.pooled { "lda" } else { "qda" }.into());
                put("classes", m.num_classes().to_string());
                put("priors", fmt_list(&m.priors));
                put("means", fmt_list(&m.means));
                put("variances", fmt_list(&m.variances));
                put("floored", fmt_list(&m.floored));
            }
            Model::Logistic(m) => {
                put("kind", "logistic".into());
                put("classes", m.num_classes().to_string());
                for (k, c) in m.coefficients.iter().enumerate() {
                    put(&format!("coef.{k}"), fmt_list(c));
                }
                put("converged", m.converged.to_string());
                put("iterations", m.iterations.to_string());
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        let classes: usize = kv.scalar("classes")?;
        if classes < 2 {
            return Err(kv.err("classes", "need at least 2 classes"));
        }
        let priors = || -> Result<Vec<f64>> { kv.list_len("priors", classes) };
        let model = match kv.get("kind")?.1.as_str() {
            "efda" => {
                let spec: FamilySpec = kv.scalar("family")?;
                let etas = (0..classes)
                    .map(|k| kv.eta(&format!("eta.{k}")))
                    .collect::<Result<Vec<_>>>()?;
                let flags: Vec<bool> = kv.list_len("degenerate", classes)?;
                if classes == 2 && kv.has("alpha") {
                    let alpha: f64 = kv.scalar("alpha")?;
                    Model::Binary(
                        BinaryModel::from_parts(spec, alpha, etas[0], etas[1])?
                            .with_degenerate([flags[0], flags[1]]),
                    )
                } else {
                    Model::Multiclass(MulticlassModel::from_parts(spec, priors()?, &etas)?.with_degenerate(&flags))
                }
            }
            "efda-product" => {
                let specs: Vec<FamilySpec> = kv.list("families")?;
                let mut etas = Vec::with_capacity(classes);
                let mut flags = Vec::with_capacity(classes);
                for k in 0..classes {
                    let key = format!("eta.{k}");
                    let (line, raw) = kv.get(&key)?;
                    let row = raw
                        .split(';')
                        .map(|part| {
                            let c: Vec<f64> = parse_list(part, *line)?;
                            NaturalParam::from_components(&c).map_err(|e| Error::Parse {
                                line: *line,
                                msg: e.to_string(),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    etas.push(row);
                    flags.push(kv.list_len(&format!("degenerate.{k}"), specs.len())?);
                }
                Model::Product(ProductModel::from_parts(specs, priors()?, &etas)?.with_degenerate(&flags))
            }
            kind @ ("lda" | "qda") => {
                let variances: Vec<f64> = kv.list_len("variances", classes)?;
                if variances.iter().any(|v| v.is_nan() || *v <= 0.0) {
                    return Err(kv.err("variances", "variances must be positive"));
                }
                Model::Gaussian(GaussianClassModel {
                    priors: priors()?,
                    means: kv.list_len("means", classes)?,
                    variances,
                    pooled: kind == "lda",
                    floored: kv.list_len("floored", classes)?,
                })
            }
            "logistic" => {
                let coefficients = (0..classes)
                    .map(|k| {
                        let c: Vec<f64> = kv.list_len(&format!("coef.{k}"), 2)?;
                        Ok([c[0], c[1]])
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut m = LogisticModel::from_coefficients(coefficients)?;
                m.converged = kv.scalar("converged")?;
                m.iterations = kv.scalar("iterations")?;
                Model::Logistic(m)
            }
            other => return Err(kv.err("kind", &format!("unknown model kind `{other}`"))),
        };
        Ok(model)
    }
}

fn parse_list<T: std::str::FromStr>(raw: &str, line: usize) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    raw.split_whitespace()
        .map(|tok| {
            tok.parse().map_err(|e: T::Err| Error::Parse {
                line,
                msg: format!("cannot parse `{tok}`: {e}"),
            })
        })
        .collect()
}

struct KeyValues(BTreeMap<String, (usize, String)>);

impl KeyValues {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = k.trim().to_string();
            if map.insert(key.clone(), (i + 1, v.trim().to_string())).is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(KeyValues(map))
    }

    fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    fn get(&self, key: &str) -> Result<&(usize, String)> {
        self.0
            .get(key)
            .ok_or_else(|| Error::Invalid(format!("model file is missing `{key}`")))
    }

    fn err(&self, key: &str, msg: &str) -> Error {
        match self.0.get(key) {
            Some((line, _)) => Error::Parse {
                line: *line,
                msg: msg.to_string(),
            },
            None => Error::Invalid(msg.to_string()),
        }
    }

    fn scalar<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let (line, raw) = self.get(key)?;
        raw.parse().map_err(|e: T::Err| Error::Parse {
            line: *line,
            msg: format!("`{key}`: {e}"),
        })
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let (line, raw) = self.get(key)?;
        parse_list(raw, *line)
    }

    fn list_len<T: std::str::FromStr>(&self, key: &str, n: usize) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.list(key)?;
        if v.len() != n {
            return Err(self.err(key, &format!("`{key}` needs {n} values, got {}", v.len())));
        }
        Ok(v)
    }

    fn eta(&self, key: &str) -> Result<NaturalParam> {
        let c: Vec<f64> = self.list(key)?;
        NaturalParam::from_components(&c).map_err(|e| self.err(key, &e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;

    fn data() -> Dataset {
        Dataset::from_scalar(vec![1.0, 2.0, 3.5, 6.0, 0.5, 7.0, 9.0], vec![0, 0, 0, 1, 0, 1, 1]).unwrap()
    }

    #[test]
    fn every_kind_round_trips() {
        let d = data();
        let spec = FamilySpec::weibull(1.5).unwrap();
        let mut product = Dataset::new(2);
        for (x, y) in d.iter() {
            product.push(&[x[0], (x[0] * 3.0).round()], y).unwrap();
        }
        let models = vec![
            Model::Binary(BinaryModel::fit(spec, &d).unwrap()),
            Model::Multiclass(MulticlassModel::fit(FamilySpec::NormalFull, &d, 2).unwrap()),
            Model::Product(ProductModel::fit(vec![spec, FamilySpec::Poisson], &product, 2).unwrap()),
            Model::Gaussian(GaussianClassModel::fit_lda(&d, 2).unwrap()),
            Model::Gaussian(GaussianClassModel::fit_qda(&d, 2).unwrap()),
        ];
        for m in models {
            let back = Model::from_text(&m.to_text()).unwrap();
            assert_eq!(back, m, "{}", m.to_text());
        }
        let lr = LogisticModel::fit(&d, 2).unwrap();
        let Model::Logistic(back) = Model::from_text(&Model::Logistic(lr.clone()).to_text()).unwrap() else {
            panic!("wrong kind");
        };
        assert_eq!(back.coefficients, lr.coefficients);
        assert_eq!((back.converged, back.iterations), (lr.converged, lr.iterations));
    }

    #[test]
    fn symmetric_model_predicts_one_half() {
        let text = "kind = efda\nfamily = exponential\nclasses = 2\npriors = 0.5 0.5\nalpha = 0.5\neta.0 = -1.0\neta.1 = -1.0\ndegenerate = false false\n";
        let m = Model::from_text(text).unwrap();
        for x in [0.1, 1.0, 10.0] {
            assert_eq!(m.posteriors(&[x]).unwrap(), vec![0.5, 0.5]);
        }
    }

    #[test]
    fn errors_name_the_line() {
        let text = "kind = efda\nfamily = exponential\nclasses = 2\neta.0 = -1.0\neta.1 = oops\n";
        match Model::from_text(text) {
            Err(Error::Parse { line: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        let text = "kind = efda\nfamily = exponential\nclasses = 2\neta.0 = 1.0\neta.1 = -1.0\npriors = 0.5 0.5\ndegenerate = false false\n";
        assert!(matches!(Model::from_text(text), Err(Error::Domain { .. })));
    }
}
