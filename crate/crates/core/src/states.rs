//! Per-mode state descriptions and their one-dimensional densities.
//!
//! Every state handled here is a product over decoupled momentum modes. A
//! mode is summarized by its variance ratios relative to the vacuum and its
//! reduced means; the densities are either Gaussian or a squared Hermite
//! polynomial times the vacuum Gaussian.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeModel;
use crate::util::ln_factorial;

/// Maximum occupation per mode. Quadrature panels are split at the Hermite
/// roots, so the cap keeps root tables at desk scale.
pub const MAX_OCCUPATION: u32 = 64;

const LN_2PI: f64 = 1.8378770664093453;

/// Which quadrature a per-mode quantity refers to: the field `phi` or the
/// conjugate momentum field `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    Field,
    Momentum,
}

impl Sector {
    pub const BOTH: [Sector; 2] = [Sector::Field, Sector::Momentum];
}

/// Reduced description of one mode: variance ratios `r = M_ll / Mbar_ll`
/// (and the momentum analog) plus reduced means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeMoments {
    pub ratio_phi: f64,
    pub ratio_pi: f64,
    pub mean_phi: f64,
    pub mean_pi: f64,
}

impl ModeMoments {
    pub fn vacuum() -> Self {
        Self {
            ratio_phi: 1.0,
            ratio_pi: 1.0,
            mean_phi: 0.0,
            mean_pi: 0.0,
        }
    }

    pub fn ratio(&self, sector: Sector) -> f64 {
        match sector {
            Sector::Field => self.ratio_phi,
            Sector::Momentum => self.ratio_pi,
        }
    }

    pub fn mean(&self, sector: Sector) -> f64 {
        match sector {
            Sector::Field => self.mean_phi,
            Sector::Momentum => self.mean_pi,
        }
    }
}

/// State family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateKind {
    Vacuum,
    Coherent,
    Thermal,
    Excited,
}

/// A product state over the modes of a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    kind: StateKind,
    moments: Vec<ModeMoments>,
    occupations: BTreeMap<i64, u32>,
    beta: Option<f64>,
}

impl StateSpec {
    /// Ground state: all ratios one, all means zero.
    pub fn vacuum(model: &LatticeModel) -> Self {
        Self {
            kind: StateKind::Vacuum,
            moments: vec![ModeMoments::vacuum(); model.n_modes()],
            occupations: BTreeMap::new(),
            beta: None,
        }
    }

    /// Thermal state at inverse temperature `beta`: every ratio is
    /// `1 + 2 n_BE(omega_l)`.
    pub fn thermal(model: &LatticeModel, beta: f64) -> Result<Self> {
        if beta <= 0.0 {
            return Err(Error::NonPositiveBeta(beta));
        }
        let moments = model
            .omegas()
            .iter()
            .map(|&w| {
                let r = 1.0 + 2.0 * bose_einstein(w, beta)?;
                Ok(ModeMoments {
                    ratio_phi: r,
                    ratio_pi: r,
                    mean_phi: 0.0,
                    mean_pi: 0.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind: StateKind::Thermal,
            moments,
            occupations: BTreeMap::new(),
            beta: Some(beta),
        })
    }

    /// Excited state with `n_k` quanta on each mode of the index set. Both
    /// quadrature ratios become `1 + 2 n_k` on occupied modes. An empty set
    /// is the vacuum.
    pub fn excited(model: &LatticeModel, occupations: &[(i64, u32)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(mode, n) in occupations {
            model.mode_index(mode)?;
            if n == 0 {
                return Err(Error::ZeroOccupation { mode });
            }
            if n > MAX_OCCUPATION {
                return Err(Error::OccupationTooLarge {
                    mode,
                    got: n,
                    max: MAX_OCCUPATION,
                });
            }
            map.insert(mode, n);
        }
        if map.is_empty() {
            return Ok(Self::vacuum(model));
        }
        let mut moments = vec![ModeMoments::vacuum(); model.n_modes()];
        for (&mode, &n) in &map {
            let r = 1.0 + 2.0 * f64::from(n);
            let idx = model.mode_index(mode)?;
            moments[idx] = ModeMoments {
                ratio_phi: r,
                ratio_pi: r,
                mean_phi: 0.0,
                mean_pi: 0.0,
            };
        }
        Ok(Self {
            kind: StateKind::Excited,
            moments,
            occupations: map,
            beta: None,
        })
    }

    /// Coherent state: vacuum covariances displaced to the given reduced
    /// means.
    pub fn coherent(model: &LatticeModel, mean_phi: &[f64], mean_pi: &[f64]) -> Result<Self> {
        let n = model.n_modes();
        if mean_phi.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: mean_phi.len(),
            });
        }
        if mean_pi.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: mean_pi.len(),
            });
        }
        let moments = mean_phi
            .iter()
            .zip(mean_pi)
            .map(|(&p, &q)| ModeMoments {
                ratio_phi: 1.0,
                ratio_pi: 1.0,
                mean_phi: p,
                mean_pi: q,
            })
            .collect();
        Ok(Self {
            kind: StateKind::Coherent,
            moments,
            occupations: BTreeMap::new(),
            beta: None,
        })
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    /// True for the state families with Gaussian functional densities.
    pub fn is_gaussian(&self) -> bool {
        self.kind != StateKind::Excited
    }

    pub fn moments(&self) -> &[ModeMoments] {
        &self.moments
    }

    pub fn n_modes(&self) -> usize {
        self.moments.len()
    }

    /// Occupation map of an excited state; empty for the other kinds.
    pub fn occupations(&self) -> &BTreeMap<i64, u32> {
        &self.occupations
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    /// Errors unless this state was built for a lattice of the same size.
    pub fn check_model(&self, model: &LatticeModel) -> Result<()> {
        if self.moments.len() != model.n_modes() {
            return Err(Error::LengthMismatch {
                expected: model.n_modes(),
                got: self.moments.len(),
            });
        }
        Ok(())
    }

    /// The minimal stored form (kind plus defining parameters).
    pub fn params(&self) -> StateParams {
        StateParams {
            kind: self.kind,
            beta: self.beta,
            occupations: if self.occupations.is_empty() {
                None
            } else {
                Some(
                    self.occupations
                        .iter()
                        .map(|(&mode, &n)| OccupationEntry { mode, n })
                        .collect(),
                )
            },
            means: if self.kind == StateKind::Coherent {
                Some(
                    self.moments
                        .iter()
                        .map(|m| MeanPair {
                            phi: m.mean_phi,
                            pi: m.mean_pi,
                        })
                        .collect(),
                )
            } else {
                None
            },
        }
    }

    /// Rebuilds a spec from its stored form against a lattice.
    pub fn from_params(model: &LatticeModel, params: &StateParams) -> Result<Self> {
        match params.kind {
            StateKind::Vacuum => Ok(Self::vacuum(model)),
            StateKind::Thermal => {
                let beta = params.beta.ok_or(Error::NonPositiveBeta(0.0))?;
                Self::thermal(model, beta)
            }
            StateKind::Excited => {
                let occ: Vec<(i64, u32)> = params
                    .occupations
                    .as_deref()
                    .unwrap_or(&[])
                    .iter()
                    .map(|e| (e.mode, e.n))
                    .collect();
                Self::excited(model, &occ)
            }
            StateKind::Coherent => {
                let means = params.means.as_deref().unwrap_or(&[]);
                let phi: Vec<f64> = means.iter().map(|m| m.phi).collect();
                let pi: Vec<f64> = means.iter().map(|m| m.pi).collect();
                Self::coherent(model, &phi, &pi)
            }
        }
    }
}

/// Serialized occupation entry `{mode, n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupationEntry {
    pub mode: i64,
    pub n: u32,
}

/// Serialized reduced means of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanPair {
    pub phi: f64,
    pub pi: f64,
}

/// The JSON form of a state: `{kind, beta?, occupations?, means?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occupations: Option<Vec<OccupationEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub means: Option<Vec<MeanPair>>,
}

/// Bose-Einstein occupation `1 / (e^{beta omega} - 1)`, underflow-safe for
/// large `beta omega`.
pub fn bose_einstein(omega: f64, beta: f64) -> Result<f64> {
    if omega <= 0.0 {
        return Err(Error::NonPositiveOmega(omega));
    }
    if beta <= 0.0 {
        return Err(Error::NonPositiveBeta(beta));
    }
    let x = beta * omega;
    if x > 700.0 {
        return Ok(0.0);
    }
    Ok(1.0 / x.exp_m1())
}

/// Vacuum variance of one mode in reduced variables: `1/(2 omega)` for the
/// field sector, `omega/2` for the momentum sector. Their product is exactly
/// 1/4. Rejects the singular zero mode of a massless lattice.
pub fn vacuum_variance(model: &LatticeModel, mode: i64, sector: Sector) -> Result<f64> {
    let w = model.omega(mode)?;
    if w == 0.0 {
        return Err(Error::MasslessZeroMode);
    }
    Ok(match sector {
        Sector::Field => 1.0 / (2.0 * w),
        Sector::Momentum => w / 2.0,
    })
}

/// Probabilist's Hermite polynomial by the stable recurrence
/// `H_{a+1}(x) = x H_a(x) - a H_{a-1}(x)`.
pub fn hermite(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0f64;
    let mut cur = x;
    for a in 1..n {
        let next = x * cur - a as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Probabilist's Hermite polynomial from the explicit finite sum
/// `n! sum_g (-1)^g x^{n-2g} / (g! (n-2g)! 2^g)`. Test oracle for
/// [`hermite`]; limited to `n <= 20` where f64 factorials stay accurate.
pub fn hermite_explicit(n: u32, x: f64) -> Result<f64> {
    const MAX_N: u32 = 20;
    if n > MAX_N {
        return Err(Error::HermiteOrderTooLarge { got: n, max: MAX_N });
    }
    let factorial = |k: u32| -> f64 { (1..=u64::from(k)).map(|v| v as f64).product() };
    let mut sum = 0.0;
    for g in 0..=(n / 2) {
        let sign = if g % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * x.powi((n - 2 * g) as i32)
            / (factorial(g) * factorial(n - 2 * g) * 2f64.powi(g as i32));
        sum += term;
    }
    Ok(factorial(n) * sum)
}

/// All `n` real roots of the probabilist's Hermite polynomial, ascending.
/// Located by sign-change scanning plus bisection; used as quadrature panel
/// boundaries and accurate to ~1e-14 absolute.
pub fn hermite_roots(n: u32) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let bound = (4.0 * n as f64 + 2.0).sqrt();
    // Minimal root spacing is ~pi/sqrt(n); a grid of 40n points oversamples it.
    let steps = (40 * n as usize).max(64);
    let h = 2.0 * bound / steps as f64;
    let mut roots = Vec::with_capacity(n as usize);
    let mut x_prev = -bound;
    let mut f_prev = hermite(n, x_prev);
    for i in 1..=steps {
        let x = -bound + i as f64 * h;
        let f = hermite(n, x);
        if f == 0.0 {
            roots.push(x);
        } else if f_prev != 0.0 && f_prev.signum() != f.signum() {
            let (mut lo, mut hi) = (x_prev, x);
            let mut f_lo = f_prev;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let f_mid = hermite(n, mid);
                if f_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if f_lo.signum() == f_mid.signum() {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x_prev = x;
        f_prev = f;
    }
    debug_assert_eq!(roots.len(), n as usize);
    roots
}

/// One-dimensional per-mode probability density, evaluable in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeDensity {
    /// Plain normal density.
    Gaussian { variance: f64, mean: f64 },
    /// `H_n^2(x / sqrt(base)) / n!` times the zero-mean Gaussian of variance
    /// `base`; the density of an `n`-fold excited mode.
    HermiteWeighted { n: u32, base_variance: f64 },
}

impl ModeDensity {
    /// Natural log of the density; `-inf` at Hermite zeros and in far tails.
    pub fn log_density(&self, x: f64) -> f64 {
        match *self {
            ModeDensity::Gaussian { variance, mean } => {
                let d = x - mean;
                -0.5 * d * d / variance - 0.5 * (LN_2PI + variance.ln())
            }
            ModeDensity::HermiteWeighted { n, base_variance } => {
                let z = x / base_variance.sqrt();
                let h = hermite(n, z);
                if h == 0.0 {
                    return f64::NEG_INFINITY;
                }
                2.0 * h.abs().ln()
                    - ln_factorial(n)
                    - 0.5 * z * z
                    - 0.5 * (LN_2PI + base_variance.ln())
            }
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        self.log_density(x).exp()
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ModeDensity::Gaussian { mean, .. } => mean,
            ModeDensity::HermiteWeighted { .. } => 0.0,
        }
    }

    /// Exact second central moment: `sigma^2`, or `(1 + 2n)` times the base
    /// variance for the Hermite-weighted case.
    pub fn variance(&self) -> f64 {
        match *self {
            ModeDensity::Gaussian { variance, .. } => variance,
            ModeDensity::HermiteWeighted { n, base_variance } => {
                (1.0 + 2.0 * f64::from(n)) * base_variance
            }
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, ModeDensity::Gaussian { .. })
    }

    /// Interior quadrature breakpoints (the scaled Hermite roots).
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match *self {
            ModeDensity::Gaussian { .. } => Vec::new(),
            ModeDensity::HermiteWeighted { n, base_variance } => {
                let s = base_variance.sqrt();
                hermite_roots(n).into_iter().map(|r| r * s).collect()
            }
        }
    }

    /// Integration window covering everything above tail weight ~1e-22.
    pub(crate) fn window(&self) -> (f64, f64) {
        let half = 10.0 * self.variance().sqrt();
        let c = self.mean();
        (c - half, c + half)
    }
}

/// Field-sector density of one mode of a state (the `phi` marginal).
pub fn mode_density(spec: &StateSpec, model: &LatticeModel, mode: i64) -> Result<ModeDensity> {
    mode_density_sector(spec, model, mode, Sector::Field)
}

/// Per-mode density in either sector. Gaussian-family states give a Gaussian
/// with the vacuum variance scaled by the mode's ratio; occupied modes of an
/// excited state give the Hermite-weighted density on the vacuum variance.
pub fn mode_density_sector(
    spec: &StateSpec,
    model: &LatticeModel,
    mode: i64,
    sector: Sector,
) -> Result<ModeDensity> {
    spec.check_model(model)?;
    let idx = model.mode_index(mode)?;
    let base = vacuum_variance(model, mode, sector)?;
    if let Some(&n) = spec.occupations.get(&mode) {
        return Ok(ModeDensity::HermiteWeighted {
            n,
            base_variance: base,
        });
    }
    let m = &spec.moments[idx];
    Ok(ModeDensity::Gaussian {
        variance: base * m.ratio(sector),
        mean: m.mean(sector),
    })
}
