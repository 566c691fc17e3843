//! Random variate generation for each family.
//!
//! Exponential, Weibull, Laplace and Bernoulli use inversion; normals use
//! Box-Muller; gamma uses Marsaglia-Tsang (with the `U^(1/a)` boost for
//! `a < 1`); Poisson uses sequential search below a mean of 30 and Hormann's
//! PTRS transformed rejection above it; the negative binomial is drawn as a
//! gamma-Poisson mixture.

use rand::distr::Open01;
use rand::Rng;
use statrs::function::gamma::ln_gamma;

use super::{logistic, FamilySpec, NaturalParam};

const POISSON_SEARCH_LIMIT: f64 = 30.0;

/// Stateful sampler for a fixed `(family, eta)`. Keeps the spare Box-Muller
/// normal so that pairs are not wasted.
#[derive(Clone, Debug)]
pub struct Sampler {
    spec: FamilySpec,
    eta: NaturalParam,
    spare: Option<f64>,
}

fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

impl Sampler {
    /// `eta` must already be in the natural-parameter space of `spec`.
    pub fn new(spec: FamilySpec, eta: NaturalParam) -> Self {
        Sampler {
            spec,
            eta,
            spare: None,
        }
    }

    fn std_normal<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = open01(rng);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang.
    fn std_gamma<R: Rng + ?Sized>(&mut self, rng: &mut R, shape: f64) -> f64 {
        if shape < 1.0 {
            let g = self.std_gamma(rng, shape + 1.0);
            return g * open01(rng).powf(1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.std_normal(rng);
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = open01(rng);
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
        if mean <= 0.0 {
            return 0.0;
        }
        if mean < POISSON_SEARCH_LIMIT {
            // inversion by sequential search
            let u: f64 = rng.random();
            let mut k = 0.0;
            let mut p = (-mean).exp();
            let mut cdf = p;
            while u > cdf {
                k += 1.0;
                p *= mean / k;
                let next = cdf + p;
                if next == cdf {
                    break;
                }
                cdf = next;
            }
            return k;
        }
        // PTRS (Hormann 1993)
        let slam = mean.sqrt();
        let loglam = mean.ln();
        let b = 0.931 + 2.53 * slam;
        let a = -0.059 + 0.02483 * b;
        let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        let vr = 0.9277 - 3.6224 / (b - 2.0);
        loop {
            let u = rng.random::<f64>() - 0.5;
            let v: f64 = rng.random();
            let us = 0.5 - u.abs();
            let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
            if us >= 0.07 && v <= vr {
                return k;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            if v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln()
                <= -mean + k * loglam - ln_gamma(k + 1.0)
            {
                return k;
            }
        }
    }

    /// One draw from the configured distribution.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        let c = self.eta.components();
        let e = c[0];
        match self.spec {
            FamilySpec::NormalKnownVar { sigma } => e * sigma + sigma * self.std_normal(rng),
            FamilySpec::NormalFull => {
                let var = -0.5 / c[1];
                let mu = c[0] * var;
                mu + var.sqrt() * self.std_normal(rng)
            }
            FamilySpec::LaplaceKnownLoc { mu } => {
                let b = -1.0 / e;
                let u = open01(rng) - 0.5;
                mu - b * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            FamilySpec::Exponential => open01(rng).ln() / e,
            FamilySpec::GammaKnownShape { shape } => -self.std_gamma(rng, shape) / e,
            FamilySpec::WeibullKnownShape { shape } => {
                // lambda^k = -1/eta, so x = (-ln U * lambda^k)^(1/k)
                (open01(rng).ln() / e).powf(1.0 / shape)
            }
            FamilySpec::Poisson => Self::poisson(rng, e.exp()),
            FamilySpec::Bernoulli => {
                if rng.random::<f64>() < logistic(e) {
                    1.0
                } else {
                    0.0
                }
            }
            FamilySpec::NegBinomialKnownR { r } => {
                // p = e^eta; lambda ~ Gamma(r, p / (1 - p))
                let odds = e.exp() / -e.exp_m1();
                let lambda = self.std_gamma(rng, r) * odds;
                Self::poisson(rng, lambda)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn zero_draws_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs = FamilySpec::Poisson
            .sample(&NaturalParam::Scalar(0.0), &mut rng, 0)
            .unwrap();
        assert!(xs.is_empty());
    }

    #[test]
    fn sampling_is_deterministic_given_seed() {
        let spec = FamilySpec::gamma(0.7).unwrap();
        let eta = NaturalParam::Scalar(-1.3);
        let a = spec.sample(&eta, &mut ChaCha8Rng::seed_from_u64(9), 500).unwrap();
        let b = spec.sample(&eta, &mut ChaCha8Rng::seed_from_u64(9), 500).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exponential_mean_within_three_standard_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 1_000_000;
        let xs = FamilySpec::Exponential
            .sample(&NaturalParam::Scalar(-0.5), &mut rng, n)
            .unwrap();
        let (m, _) = moments(&xs);
        // sd of an Exp(mean 2) draw is 2
        assert!((m - 2.0).abs() < 3.0 * 2.0 / (n as f64).sqrt(), "mean {m}");
    }

    #[test]
    fn poisson_variance_within_three_standard_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 1_000_000;
        let xs = FamilySpec::Poisson
            .sample(&NaturalParam::Scalar(3f64.ln()), &mut rng, n)
            .unwrap();
        let (_, v) = moments(&xs);
        // Var(S^2) = mu4/n - sigma^4 (n-3)/(n(n-1)); Poisson mu4 = lambda(1 + 3 lambda)
        let lambda = 3.0;
        let se = ((lambda * (1.0 + 3.0 * lambda) - lambda * lambda) / n as f64).sqrt();
        assert!((v - 3.0).abs() < 3.0 * se, "variance {v}, se {se}");
    }

    #[test]
    fn ptrs_branch_matches_large_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 200_000;
        let lambda: f64 = 80.0;
        let xs = FamilySpec::Poisson
            .sample(&NaturalParam::Scalar(lambda.ln()), &mut rng, n)
            .unwrap();
        assert!(xs.iter().all(|x| x.fract() == 0.0 && *x >= 0.0));
        let (m, v) = moments(&xs);
        assert!((m - lambda).abs() < 4.0 * (lambda / n as f64).sqrt());
        assert!((v / lambda - 1.0).abs() < 0.02);
    }
}
