//! Monte-Carlo verification of the closed forms and quadratures.
//!
//! Per-mode densities are sampled (Gaussian directly, Hermite-weighted by
//! rejection against a matched-variance Gaussian envelope) and expectation
//! values estimated empirically. The ChaCha12 generator makes every batch
//! reproducible from its recorded seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::entropy::{EntropyMethod, EntropyValue};
use crate::error::{Error, Result};
use crate::states::ModeDensity;
use crate::util::kahan_sum;

/// A reproducible batch of per-mode samples in reduced units.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    /// Fraction of rejection proposals accepted; 1 for direct sampling.
    pub acceptance_rate: f64,
}

/// Unbiased sample statistics with jackknife standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub stderr_mean: f64,
    pub stderr_var: f64,
}

/// Draws `count` samples from a per-mode density.
pub fn sample_mode(density: &ModeDensity, count: usize, seed: u64) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::EmptySampleRequest);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    match *density {
        ModeDensity::Gaussian { variance, mean } => {
            let normal = Normal::new(mean, variance.sqrt()).expect("positive variance");
            let values = (0..count).map(|_| normal.sample(&mut rng)).collect();
            Ok(SampleBatch {
                values,
                seed,
                acceptance_rate: 1.0,
            })
        }
        ModeDensity::HermiteWeighted { .. } => {
            sample_hermite_weighted(density, count, seed, &mut rng, envelope_constant(density))
        }
    }
}

/// Rejection envelope: the zero-mean Gaussian with the density's exact
/// variance `(1 + 2n) * base`. Its tails match the target's, so the
/// acceptance constant is finite.
fn envelope(density: &ModeDensity) -> ModeDensity {
    ModeDensity::Gaussian {
        variance: density.variance(),
        mean: 0.0,
    }
}

/// `c = max_x p(x) / envelope(x)`, located by a fine grid scan with
/// parabolic refinement over the quadrature window. The ratio is even in x
/// and decays to zero in the tails, so the grid brackets the maximum.
fn envelope_constant(density: &ModeDensity) -> f64 {
    let env = envelope(density);
    let (_, hi) = density.window();
    let steps = 20_000usize;
    let h = hi / steps as f64;
    let ratio = |x: f64| (density.log_density(x) - env.log_density(x)).exp();
    let mut best_x = 0.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=steps {
        let x = i as f64 * h;
        let r = ratio(x);
        if r > best {
            best = r;
            best_x = x;
        }
    }
    // parabolic refinement around the best grid point
    let (xl, xc, xr) = (best_x - h, best_x, best_x + h);
    let (fl, fc, fr) = (ratio(xl), ratio(xc), ratio(xr));
    let denom = fl - 2.0 * fc + fr;
    let refined = if denom.abs() > 0.0 {
        let dx = 0.5 * h * (fl - fr) / denom;
        ratio(xc + dx.clamp(-h, h)).max(fc)
    } else {
        fc
    };
    // headroom for the residual grid error of the smooth maximum
    refined * (1.0 + 1e-9)
}

fn sample_hermite_weighted(
    density: &ModeDensity,
    count: usize,
    seed: u64,
    rng: &mut ChaCha12Rng,
    constant: f64,
) -> Result<SampleBatch> {
    let env = envelope(density);
    let env_sigma = env.variance().sqrt();
    let normal = Normal::new(0.0, env_sigma).expect("positive variance");
    let ln_constant = constant.ln();
    let mut values = Vec::with_capacity(count);
    let mut proposals = 0u64;
    while values.len() < count {
        let x: f64 = normal.sample(rng);
        proposals += 1;
        let ln_target = density.log_density(x);
        let ln_cap = ln_constant + env.log_density(x);
        if ln_target > ln_cap + 1e-12 {
            return Err(Error::EnvelopeViolation {
                x,
                density: ln_target.exp(),
                envelope: ln_cap.exp(),
            });
        }
        let u: f64 = rng.random();
        // accept iff u * c * env(x) <= p(x)
        if u.ln() + ln_cap <= ln_target {
            values.push(x);
        }
    }
    Ok(SampleBatch {
        values,
        seed,
        acceptance_rate: count as f64 / proposals as f64,
    })
}

/// Monte-Carlo estimate of `int p (ln p - ln q)` from samples of `p`, with
/// the standard error of the mean as the error estimate.
pub fn mc_relative_entropy(
    p: &ModeDensity,
    q: &ModeDensity,
    count: usize,
    seed: u64,
) -> Result<EntropyValue> {
    if !q.is_gaussian() {
        return Err(Error::NonGaussianReference);
    }
    let batch = sample_mode(p, count, seed)?;
    let terms: Vec<f64> = batch
        .values
        .iter()
        .map(|&x| p.log_density(x) - q.log_density(x))
        .collect();
    let n = terms.len() as f64;
    let mean = kahan_sum(terms.iter().copied()) / n;
    let var = kahan_sum(terms.iter().map(|t| (t - mean) * (t - mean))) / (n - 1.0).max(1.0);
    Ok(EntropyValue {
        value: mean,
        method: EntropyMethod::MonteCarlo,
        error_estimate: (var / n).sqrt(),
    })
}

/// Unbiased mean and variance of a batch with jackknife standard errors.
pub fn empirical_moments(batch: &SampleBatch) -> Result<Moments> {
    let n = batch.values.len();
    if n == 0 {
        return Err(Error::EmptyBatch);
    }
    let nf = n as f64;
    let mean = kahan_sum(batch.values.iter().copied()) / nf;
    if n == 1 {
        return Ok(Moments {
            mean,
            variance: 0.0,
            stderr_mean: 0.0,
            stderr_var: 0.0,
        });
    }
    // centered data keeps the leave-one-out algebra numerically stable
    let centered: Vec<f64> = batch.values.iter().map(|&v| v - mean).collect();
    let s1 = kahan_sum(centered.iter().copied());
    let s2 = kahan_sum(centered.iter().map(|&c| c * c));
    let variance = (s2 - s1 * s1 / nf) / (nf - 1.0);

    let stderr_mean = (variance / nf).sqrt();
    if n < 3 {
        return Ok(Moments {
            mean,
            variance,
            stderr_mean,
            stderr_var: 0.0,
        });
    }
    // leave-one-out variances from the precomputed sums
    let loo: Vec<f64> = centered
        .iter()
        .map(|&c| {
            let s1_i = s1 - c;
            let s2_i = s2 - c * c;
            (s2_i - s1_i * s1_i / (nf - 1.0)) / (nf - 2.0)
        })
        .collect();
    let loo_mean = kahan_sum(loo.iter().copied()) / nf;
    let ss = kahan_sum(loo.iter().map(|&t| (t - loo_mean) * (t - loo_mean)));
    let stderr_var = ((nf - 1.0) / nf * ss).sqrt();
    Ok(Moments {
        mean,
        variance,
        stderr_mean,
        stderr_var,
    })
}
