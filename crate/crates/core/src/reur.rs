//! The relative entropic uncertainty relation and its diagnostics.
//!
//! For any product state with per-mode variance ratios `r`, the sum of the
//! two relative entropies against the optimal coherent reference is bounded
//! by the trace of covariance differences,
//!
//! ```text
//! S[F || F_a] + S[G || G_a]  <=  (1/2) sum_l [ (r_phi,l - 1) + (r_pi,l - 1) ].
//! ```
//!
//! The bound involves only differences to the vacuum covariance, so it does
//! not scale with the number of modes.

use serde::{Deserialize, Serialize};

use crate::entropy::{relative_entropy_quadrature, state_relative_entropy_to_optimal_coherent};
use crate::error::{Error, Result};
use crate::lattice::{dispersion_continuum, LatticeModel};
use crate::quad::{adaptive_with_breakpoints, QuadOptions, QuadResult};
use crate::states::{
    bose_einstein, mode_density_sector, vacuum_variance, ModeDensity, Sector, StateSpec,
};
use crate::util::kahan_sum;

/// Absolute deficit below which a report is flagged tight. Closed-form paths
/// are exact to rounding; quadrature paths carry their own error estimate.
pub const TIGHTNESS_TOLERANCE: f64 = 1e-9;

/// Both sides of the uncertainty relation plus derived diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReurReport {
    /// Sum of the two relative entropies, in nats.
    pub lhs: f64,
    /// The trace bound, in nats.
    pub rhs: f64,
    /// `rhs - lhs`; non-negative up to `lhs_error` on every valid state.
    pub deficit: f64,
    /// `det(M N) / det(Mbar Nbar)`, the Heisenberg determinant ratio.
    pub heisenberg_ratio: f64,
    /// Numerical error estimate attached to `lhs`.
    pub lhs_error: f64,
    /// True when the bound is saturated within [`TIGHTNESS_TOLERANCE`].
    pub tight: bool,
}

impl ReurReport {
    /// The REUR-violation detector: a negative deficit beyond the numerical
    /// budget signals an implementation bug, never physics.
    pub fn validate(&self) -> Result<()> {
        let budget = self.lhs_error + TIGHTNESS_TOLERANCE;
        if self.deficit < -budget {
            return Err(Error::ReurViolation {
                lhs: self.lhs,
                rhs: self.rhs,
                budget,
            });
        }
        Ok(())
    }
}

/// Right-hand side of the relation:
/// `(1/2) sum_l [(r_phi,l - 1) + (r_pi,l - 1)]`. Exact: the measure factors
/// cancel in the reduced representation, and unexcited modes contribute a
/// floating-point zero, so the value is bit-identical across mode counts.
pub fn reur_bound(spec: &StateSpec) -> f64 {
    0.5 * kahan_sum(
        spec.moments()
            .iter()
            .map(|m| (m.ratio_phi - 1.0) + (m.ratio_pi - 1.0)),
    )
}

/// Full evaluation of the relation for a state.
pub fn reur_report(spec: &StateSpec, model: &LatticeModel) -> Result<ReurReport> {
    spec.check_model(model)?;
    let (f, g) = state_relative_entropy_to_optimal_coherent(spec, model)?;
    let lhs = f.value + g.value;
    let lhs_error = f.error_estimate + g.error_estimate;
    let rhs = reur_bound(spec);
    let deficit = rhs - lhs;
    Ok(ReurReport {
        lhs,
        rhs,
        deficit,
        heisenberg_ratio: heisenberg_ratio(spec),
        lhs_error,
        tight: deficit.abs() <= TIGHTNESS_TOLERANCE + lhs_error,
    })
}

/// Closed forms of both sides for the thermal state:
/// `lhs = sum_l [2 n_BE - ln(1 + 2 n_BE)]`, `rhs = sum_l 2 n_BE`.
pub fn thermal_closed_forms(model: &LatticeModel, beta: f64) -> Result<(f64, f64)> {
    if beta <= 0.0 {
        return Err(Error::NonPositiveBeta(beta));
    }
    let occupations = model
        .omegas()
        .iter()
        .map(|&w| bose_einstein(w, beta))
        .collect::<Result<Vec<f64>>>()?;
    let lhs = kahan_sum(occupations.iter().map(|&n| 2.0 * n - (2.0 * n).ln_1p()));
    let rhs = kahan_sum(occupations.iter().map(|&n| 2.0 * n));
    Ok((lhs, rhs))
}

/// Heisenberg determinant ratio `prod_l r_phi,l r_pi,l`; the determinants
/// collapse to this product in the diagonal mode basis.
pub fn heisenberg_ratio(spec: &StateSpec) -> f64 {
    log_heisenberg_ratio(spec).exp()
}

fn log_heisenberg_ratio(spec: &StateSpec) -> f64 {
    kahan_sum(
        spec.moments()
            .iter()
            .map(|m| m.ratio_phi.ln() + m.ratio_pi.ln()),
    )
}

/// Result of the inequality chain
/// `det(M N)/det(Mbar Nbar) >= e^{2 (S[F||Ftilde] + S[G||Gtilde])} >= 1`,
/// where the tilde references are the Gaussians matching the state's means
/// and covariances, so the exponent measures non-Gaussianity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub ratio: f64,
    pub exp_term: f64,
    /// `S[F||Ftilde] + S[G||Gtilde]`, zero exactly for Gaussian states.
    pub non_gaussianity: f64,
    pub error_estimate: f64,
    pub holds: bool,
}

/// Verifies the determinant chain for a state. Gaussian states have
/// `exp_term = 1` exactly; excited states integrate each occupied mode
/// against the Gaussian with the same (inflated) variance.
pub fn heisenberg_chain_check(spec: &StateSpec, model: &LatticeModel) -> Result<ChainCheck> {
    spec.check_model(model)?;
    let (non_gaussianity, error_estimate) = if spec.is_gaussian() {
        (0.0, 0.0)
    } else {
        let mut value = 0.0;
        let mut error = 0.0;
        for (&mode, &n) in spec.occupations() {
            for sector in Sector::BOTH {
                let p = mode_density_sector(spec, model, mode, sector)?;
                let base = vacuum_variance(model, mode, sector)?;
                let q = ModeDensity::Gaussian {
                    variance: (1.0 + 2.0 * f64::from(n)) * base,
                    mean: 0.0,
                };
                let term = relative_entropy_quadrature(&p, &q)?;
                value += term.value;
                error += term.error_estimate;
            }
        }
        (value, error)
    };
    let log_ratio = log_heisenberg_ratio(spec);
    let tolerance = 1e-7 + 2.0 * error_estimate;
    let holds =
        log_ratio + tolerance >= 2.0 * non_gaussianity && 2.0 * non_gaussianity >= -tolerance;
    Ok(ChainCheck {
        ratio: log_ratio.exp(),
        exp_term: (2.0 * non_gaussianity).exp(),
        non_gaussianity,
        error_estimate,
        holds,
    })
}

/// The trace bound with units restored:
/// `(1/2) sum_l [(r_phi,l / hbar - 1) + (r_pi,l / hbar - 1)]` for a state
/// whose physical covariances are held fixed. Diverges as `hbar -> 0`,
/// showing the bound is of quantum origin. Diagnostic only.
pub fn classical_limit_bound(spec: &StateSpec, hbar: f64) -> Result<f64> {
    if hbar <= 0.0 {
        return Err(Error::NonPositiveHbar(hbar));
    }
    Ok(0.5
        * kahan_sum(
            spec.moments()
                .iter()
                .map(|m| (m.ratio_phi / hbar - 1.0) + (m.ratio_pi / hbar - 1.0)),
        ))
}

/// Thermal bound per unit length, `(1/L) sum_l 2 n_BE(omega_l)`, on a fixed
/// interval of length `length` for each mode count in `n_list`. Converges to
/// the infinite-volume density as the resolution increases.
pub fn thermal_bound_density_sweep(
    length: f64,
    mass: f64,
    beta: f64,
    n_list: &[usize],
) -> Result<Vec<(usize, f64)>> {
    if mass <= 0.0 {
        return Err(Error::NonPositiveMass(mass));
    }
    n_list
        .iter()
        .map(|&n| {
            let model = LatticeModel::new(n, length / n as f64, mass)?;
            let density = kahan_sum(
                model
                    .omegas()
                    .iter()
                    .map(|&w| 2.0 * bose_einstein(w, beta).unwrap_or(0.0)),
            ) / length;
            Ok((n, density))
        })
        .collect()
}

/// Infinite-volume thermal bound density `2 int dp/(2 pi) n_BE(omega(p))`
/// by adaptive quadrature.
pub fn thermal_bound_density_continuum(mass: f64, beta: f64) -> Result<QuadResult> {
    if mass <= 0.0 {
        return Err(Error::NonPositiveMass(mass));
    }
    if beta <= 0.0 {
        return Err(Error::NonPositiveBeta(beta));
    }
    // n_BE underflows to zero beyond beta*omega ~ 700; omega >= p.
    let p_max = 710.0 / beta;
    // Geometric breakpoints resolve the scale near the origin before the
    // adaptive pass sees the long exponential tail.
    let mut breaks = Vec::new();
    let mut s = mass.max(1.0 / beta).min(p_max / 2.0);
    while s < p_max {
        breaks.push(s);
        s *= 2.0;
    }
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        max_subdivisions: 8192,
    };
    let f = |p: f64| {
        let x = beta * dispersion_continuum(p, mass);
        if x > 700.0 {
            0.0
        } else {
            1.0 / x.exp_m1()
        }
    };
    let half = adaptive_with_breakpoints(f, 0.0, p_max, &breaks, &opts)?;
    // even integrand: full-line integral is twice the half line
    Ok(QuadResult {
        value: 2.0 * (2.0 * half.value) / (2.0 * std::f64::consts::PI),
        error: 2.0 * (2.0 * half.error) / (2.0 * std::f64::consts::PI),
    })
}
