//! Differential entropies and relative entropies of per-mode densities.
//!
//! Gaussian values are closed form. The Hermite-weighted densities of
//! excited modes go through adaptive quadrature with panels split at the
//! polynomial roots, where the `p ln p` integrand is continuously extended
//! by zero. Everything is reported in nats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeModel;
use crate::quad::{adaptive_with_breakpoints, QuadOptions};
use crate::states::{vacuum_variance, ModeDensity, Sector, StateSpec};
use crate::util::kahan_sum;

/// How an entropy value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntropyMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

/// An entropy in nats together with its numerical error estimate
/// (zero for closed forms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub value: f64,
    pub method: EntropyMethod,
    pub error_estimate: f64,
}

impl EntropyValue {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            method: EntropyMethod::ClosedForm,
            error_estimate: 0.0,
        }
    }
}

/// Differential entropy of a normal density: `(1/2) ln(2 pi e sigma^2)`.
pub fn gaussian_entropy(variance: f64) -> Result<f64> {
    if variance <= 0.0 {
        return Err(Error::NonPositiveVariance(variance));
    }
    Ok(0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * variance).ln())
}

/// Functional entropy of a Gaussian-family state in one sector: the sum of
/// per-mode Gaussian entropies. Diagnostic only: it grows with the mode
/// count, which is exactly the divergence the relative entropies avoid.
pub fn functional_entropy(
    spec: &StateSpec,
    model: &LatticeModel,
    sector: Sector,
) -> Result<EntropyValue> {
    spec.check_model(model)?;
    if !spec.is_gaussian() {
        return Err(Error::NonGaussianEntropy);
    }
    let terms = model
        .modes()
        .iter()
        .zip(spec.moments())
        .map(|(&mode, moments)| {
            let base = vacuum_variance(model, mode, sector)?;
            gaussian_entropy(base * moments.ratio(sector))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(EntropyValue::closed_form(kahan_sum(terms)))
}

/// Per-mode relative entropy of a Gaussian with variance ratio `r` against a
/// Gaussian reference sharing the vacuum variance:
/// `(1/2)(r - 1 - ln r) + (1/2) s^2 / mbar`, with the mean term supplied as
/// the already-reduced `s^2 / mbar`.
pub fn gaussian_relative_entropy(ratio: f64, mean_offset_sq_over_var: f64) -> Result<f64> {
    if ratio <= 0.0 {
        return Err(Error::NonPositiveRatio(ratio));
    }
    if mean_offset_sq_over_var < 0.0 {
        return Err(Error::NegativeMeanOffset(mean_offset_sq_over_var));
    }
    Ok(0.5 * (ratio - 1.0 - ratio.ln()) + 0.5 * mean_offset_sq_over_var)
}

/// Relative entropy `int p (ln p - ln q)` by adaptive quadrature. The
/// reference `q` must be Gaussian, which guarantees the support condition;
/// the integrand is extended by zero where `p` vanishes.
pub fn relative_entropy_quadrature(p: &ModeDensity, q: &ModeDensity) -> Result<EntropyValue> {
    if !q.is_gaussian() {
        return Err(Error::NonGaussianReference);
    }
    let (a, b) = p.window();
    let breakpoints = p.breakpoints();
    let opts = QuadOptions::default();
    let f = |x: f64| {
        let lp = p.log_density(x);
        if lp == f64::NEG_INFINITY {
            return 0.0;
        }
        let pv = lp.exp();
        if pv == 0.0 {
            return 0.0;
        }
        pv * (lp - q.log_density(x))
    };
    let r = adaptive_with_breakpoints(f, a, b, &breakpoints, &opts)?;
    Ok(EntropyValue {
        value: r.value,
        method: EntropyMethod::Quadrature,
        error_estimate: r.error,
    })
}

/// Both sides' relative entropies `S[F || F_alpha]` and `S[G || G_alpha]`
/// against the optimal coherent reference, the coherent state sharing the
/// state's expectation values, so the mean terms vanish identically.
///
/// Gaussian families are closed form; occupied modes of an excited state go
/// through quadrature against the vacuum Gaussian of that mode, and
/// unoccupied modes contribute exactly zero.
pub fn state_relative_entropy_to_optimal_coherent(
    spec: &StateSpec,
    model: &LatticeModel,
) -> Result<(EntropyValue, EntropyValue)> {
    spec.check_model(model)?;
    let mut out = [EntropyValue::closed_form(0.0); 2];
    for (slot, sector) in out.iter_mut().zip(Sector::BOTH) {
        *slot = if spec.is_gaussian() {
            let terms = spec
                .moments()
                .iter()
                .map(|m| gaussian_relative_entropy(m.ratio(sector), 0.0))
                .collect::<Result<Vec<f64>>>()?;
            EntropyValue::closed_form(kahan_sum(terms))
        } else {
            let mut value = 0.0;
            let mut error = 0.0;
            for &mode in spec.occupations().keys() {
                let p = crate::states::mode_density_sector(spec, model, mode, sector)?;
                let q = ModeDensity::Gaussian {
                    variance: vacuum_variance(model, mode, sector)?,
                    mean: 0.0,
                };
                let term = relative_entropy_quadrature(&p, &q)?;
                value += term.value;
                error += term.error_estimate;
            }
            EntropyValue {
                value,
                method: EntropyMethod::Quadrature,
                error_estimate: error,
            }
        };
    }
    Ok((out[0], out[1]))
}
