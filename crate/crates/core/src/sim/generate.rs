//! Seeded synthetic data.
//!
//! Every trial owns a ChaCha8 stream: the generator is seeded from the
//! experiment seed and `set_stream(trial)` selects the trial. A trial's data
//! therefore depends only on `(seed, trial)`, never on scheduling, and the
//! same trial index sees the same random numbers at every sweep point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use crate::data::Dataset;
use crate::error::Result;
use crate::expfam::{FamilySpec, NaturalParam, Sampler};

/// Stream reserved for the efficiency evaluation grid.
pub const GRID_STREAM: u64 = u64::MAX;

pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn samplers(spec: &FamilySpec, etas: &[NaturalParam]) -> Result<Vec<Sampler>> {
    etas.iter()
        .map(|eta| {
            spec.check_domain(eta)?;
            Ok(Sampler::new(*spec, *eta))
        })
        .collect()
}

fn categorical(priors: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, p) in priors.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    priors.len() - 1
}

/// `n` samples with i.i.d. categorical labels; each sample draws its label
/// and then its feature.
pub fn draw_labeled<R: Rng + ?Sized>(
    spec: &FamilySpec,
    etas: &[NaturalParam],
    priors: &[f64],
    n: usize,
    rng: &mut R,
) -> Result<Dataset> {
    let mut samplers = samplers(spec, etas)?;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let y = categorical(priors, rng.random());
        xs.push(samplers[y].draw(rng));
        ys.push(y);
    }
    Dataset::from_scalar(xs, ys)
}

/// Exactly `counts[k]` samples of class `k`, in class order.
pub fn draw_fixed_counts<R: Rng + ?Sized>(
    spec: &FamilySpec,
    etas: &[NaturalParam],
    counts: &[usize],
    rng: &mut R,
) -> Result<Dataset> {
    let mut samplers = samplers(spec, etas)?;
    let mut xs = Vec::with_capacity(counts.iter().sum());
    let mut ys = Vec::with_capacity(xs.capacity());
    for (k, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            xs.push(samplers[k].draw(rng));
            ys.push(k);
        }
    }
    Dataset::from_scalar(xs, ys)
}

/// Training and test sets for one benchmark trial, with `n_train` and
/// `priors` overriding the config (for sweeps).
pub fn generate_trial(
    exp: &ExperimentConfig,
    n_train: usize,
    priors: &[f64],
    trial: usize,
) -> Result<(Dataset, Dataset)> {
    let etas = exp.class_etas()?;
    let mut rng = trial_rng(exp.seed, trial as u64);
    let train = draw_labeled(&exp.family, &etas, priors, n_train, &mut rng)?;
    let test = draw_labeled(&exp.family, &etas, priors, exp.n_test, &mut rng)?;
    Ok((train, test))
}

/// Benchmark-mode data for a trial of the configured setting.
pub fn generate_binary(exp: &ExperimentConfig, trial: usize) -> Result<(Dataset, Dataset)> {
    generate_trial(exp, exp.n_train, &exp.class_priors()?, trial)
}

/// `(N0, N1)` with `N1 = floor(n alpha)`.
pub fn fixed_counts(n: usize, alpha: f64) -> (usize, usize) {
    // the small offset keeps e.g. 1000 * 0.7 = 699.999... from rounding down
    let n1 = ((n as f64) * alpha + 1e-9).floor() as usize;
    (n - n1.min(n), n1.min(n))
}

/// Efficiency-mode training data: fixed class counts.
pub fn generate_efficiency(exp: &ExperimentConfig, n: usize, trial: usize) -> Result<Dataset> {
    let priors = exp.class_priors()?;
    let (n0, n1) = fixed_counts(n, priors[1]);
    let mut rng = trial_rng(exp.seed, trial as u64);
    draw_fixed_counts(&exp.family, &exp.class_etas()?, &[n0, n1], &mut rng)
}

/// Evaluation points: `grid_per_class` draws from each class, sorted.
pub fn efficiency_grid(exp: &ExperimentConfig) -> Result<Vec<f64>> {
    let mut rng = trial_rng(exp.seed, GRID_STREAM);
    let counts = vec![exp.grid_per_class; exp.num_classes()];
    let mut grid = draw_fixed_counts(&exp.family, &exp.class_etas()?, &counts, &mut rng)?
        .features()
        .to_vec();
    grid.sort_by(f64::total_cmp);
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weibull() -> ExperimentConfig {
        let mut e = ExperimentConfig::new("w", FamilySpec::weibull(3.0).unwrap(), vec![vec![4.0], vec![2.0]], 1000);
        e.alpha = Some(0.7);
        e
    }

    #[test]
    fn fixed_counts_follow_floor() {
        assert_eq!(fixed_counts(1000, 0.7), (300, 700));
        assert_eq!(fixed_counts(100, 0.7), (30, 70));
        assert_eq!(fixed_counts(10, 0.55), (5, 5));
        let d = generate_efficiency(&weibull(), 1000, 0).unwrap();
        assert_eq!(d.class_counts(2).unwrap(), vec![300, 700]);
    }

    #[test]
    fn trials_are_reproducible_and_distinct() {
        let e = weibull();
        let (a, _) = generate_binary(&e, 3).unwrap();
        let (b, _) = generate_binary(&e, 3).unwrap();
        let (c, _) = generate_binary(&e, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn label_fraction_tracks_alpha() {
        let mut e = weibull();
        e.alpha = Some(0.5);
        e.n_test = 1;
        let mut ones = 0usize;
        let mut total = 0usize;
        for t in 0..50 {
            let (train, _) = generate_binary(&e, t).unwrap();
            ones += train.labels().iter().sum::<usize>();
            total += train.len();
        }
        let frac = ones as f64 / total as f64;
        // 50k Bernoulli(0.5) draws: sd 0.0022
        assert!((frac - 0.5).abs() < 0.01, "{frac}");
    }

    #[test]
    fn grid_has_both_classes() {
        let g = efficiency_grid(&weibull()).unwrap();
        assert_eq!(g.len(), 100);
        assert!(g.windows(2).all(|w| w[0] <= w[1]));
    }
}
