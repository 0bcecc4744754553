//! Regularized scalar field theory on a periodic one-dimensional lattice.
//!
//! A chain of `N` sites with spacing `eps` and mass `m` diagonalizes into
//! decoupled momentum modes labelled by integers `-N/2 <= l < N/2`, with
//! frequencies
//!
//! ```text
//! omega_l = sqrt( (4 / eps^2) * sin^2(pi l / N) + m^2 ).
//! ```
//!
//! All per-mode quantities elsewhere in the crate live in reduced variables
//! `u_l = sqrt(dk / 2 pi) * phi_l`, which absorb the functional-measure
//! factors so that every entropy is a plain sum of one-dimensional entropies.

use nalgebra::DMatrix;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::util::kahan_sum;

/// The discretized theory: mode bookkeeping and dispersion table.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeModel {
    n_modes: usize,
    spacing: f64,
    mass: f64,
    length: f64,
    dk: f64,
    modes: Vec<i64>,
    omegas: Vec<f64>,
}

/// Relativistic continuum dispersion `sqrt(p^2 + m^2)`.
pub fn dispersion_continuum(p: f64, mass: f64) -> f64 {
    p.hypot(mass)
}

impl LatticeModel {
    /// Builds the lattice for a massive theory. `n_modes` must be even and
    /// at least 2; use [`LatticeModel::massless`] to opt into `m = 0` and
    /// [`LatticeModel::single_mode`] for the one-oscillator convention.
    pub fn new(n_modes: usize, spacing: f64, mass: f64) -> Result<Self> {
        if mass == 0.0 {
            return Err(Error::ZeroMassWithoutFlag);
        }
        if mass < 0.0 {
            return Err(Error::NegativeMass(mass));
        }
        Self::build(n_modes, spacing, mass)
    }

    /// Massless lattice. The zero mode has `omega_0 = 0`, so its vacuum
    /// covariance is singular; density and entropy paths reject it while
    /// dispersion, energies and bounds remain available.
    pub fn massless(n_modes: usize, spacing: f64) -> Result<Self> {
        Self::build(n_modes, spacing, 0.0)
    }

    /// Single-oscillator convention: `N = L = eps = 1`, `dk = 2 pi`, one mode
    /// `l = 0` with the given frequency.
    pub fn single_mode(omega: f64) -> Result<Self> {
        if omega <= 0.0 {
            return Err(Error::NonPositiveOmega(omega));
        }
        Ok(Self {
            n_modes: 1,
            spacing: 1.0,
            mass: omega,
            length: 1.0,
            dk: 2.0 * std::f64::consts::PI,
            modes: vec![0],
            omegas: vec![omega],
        })
    }

    fn build(n_modes: usize, spacing: f64, mass: f64) -> Result<Self> {
        if n_modes < 2 || !n_modes.is_multiple_of(2) {
            return Err(Error::OddModeCount(n_modes));
        }
        if spacing <= 0.0 {
            return Err(Error::NonPositiveSpacing(spacing));
        }
        let length = n_modes as f64 * spacing;
        let dk = 2.0 * std::f64::consts::PI / length;
        let half = (n_modes / 2) as i64;
        let modes: Vec<i64> = (-half..half).collect();
        // dk * l * eps / 2 reduces to pi * l / N exactly.
        let omegas: Vec<f64> = modes
            .iter()
            .map(|&l| {
                let angle = std::f64::consts::PI * l as f64 / n_modes as f64;
                let s = angle.sin();
                ((4.0 / (spacing * spacing)) * s * s + mass * mass).sqrt()
            })
            .collect();
        Ok(Self {
            n_modes,
            spacing,
            mass,
            length,
            dk,
            modes,
            omegas,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// System length `L = N * eps`.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Momentum-space spacing `dk = 2 pi / L`.
    pub fn dk(&self) -> f64 {
        self.dk
    }

    pub fn is_massless(&self) -> bool {
        self.mass == 0.0
    }

    /// Mode labels in ascending order, `-N/2 <= l < N/2`.
    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    /// Dispersion table aligned with [`LatticeModel::modes`].
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Storage index of mode `l`.
    pub fn mode_index(&self, mode: i64) -> Result<usize> {
        let half = (self.n_modes / 2) as i64;
        if mode < -half || mode >= self.n_modes as i64 - half {
            return Err(Error::ModeOutOfRange(mode));
        }
        Ok((mode + half) as usize)
    }

    /// Frequency of mode `l`.
    pub fn omega(&self, mode: i64) -> Result<f64> {
        Ok(self.omegas[self.mode_index(mode)?])
    }

    /// Zero-point energy `(1/2) sum_l omega_l`. Diagnostic: grows without
    /// bound as the mode count increases.
    pub fn vacuum_energy(&self) -> f64 {
        0.5 * kahan_sum(self.omegas.iter().copied())
    }

    /// Position-space covariance `<u_j u_j'>` for a state with the given
    /// per-mode variances, in reduced variables on both sides (the physical
    /// `<phi_j phi_j'>` is this matrix divided by `eps`).
    ///
    /// The diagonal mode covariance is conjugated with the orthogonal
    /// composition of the discrete Fourier transform and the real-mode
    /// rotation, so the spectrum of the result is exactly the input
    /// variances. Modes `l = 0` and `l = -N/2` have no partner and pass
    /// through the real-mode rotation unchanged.
    pub fn position_space_covariance(&self, mode_variances: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.n_modes;
        if mode_variances.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: mode_variances.len(),
            });
        }
        if let Some(&bad) = mode_variances.iter().find(|&&v| v < 0.0) {
            return Err(Error::NonPositiveVariance(bad));
        }

        let basis = self.position_mode_basis();
        let diag = DMatrix::from_fn(n, n, |r, c| if r == c { mode_variances[r] } else { 0.0 });
        Ok(&basis * diag * basis.transpose())
    }

    /// Orthogonal matrix whose column `c` carries mode `modes[c]` into
    /// position space.
    fn position_mode_basis(&self) -> DMatrix<f64> {
        let n = self.n_modes;
        let norm = 1.0 / (n as f64).sqrt();
        let mut basis = DMatrix::zeros(n, n);
        for (c, &l) in self.modes.iter().enumerate() {
            for j in 0..n {
                let theta = 2.0 * std::f64::consts::PI * l as f64 * j as f64 / n as f64;
                let v = if l == 0 {
                    1.0
                } else if 2 * l == -(n as i64) {
                    // Nyquist mode: e^{i theta} is (-1)^j, already real.
                    if j % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                } else {
                    // signed theta separates the +l and -l members of a pair
                    theta.cos() - theta.sin()
                };
                basis[(j, c)] = v * norm;
            }
        }
        basis
    }
}

impl Serialize for LatticeModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeParams {
            n_modes: self.n_modes,
            spacing: self.spacing,
            mass: self.mass,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let params = LatticeParams::deserialize(deserializer)?;
        params.build().map_err(D::Error::custom)
    }
}

/// The stored form of a lattice: derived fields are recomputed on load. A
/// stored mass of zero is an explicit massless opt-in; `n_modes = 1` selects
/// the single-oscillator convention with `mass` as the frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub n_modes: usize,
    pub spacing: f64,
    pub mass: f64,
}

impl LatticeParams {
    pub fn build(&self) -> Result<LatticeModel> {
        if self.n_modes == 1 {
            if self.spacing != 1.0 {
                return Err(Error::SingleModeSpacing(self.spacing));
            }
            LatticeModel::single_mode(self.mass)
        } else if self.mass == 0.0 {
            LatticeModel::massless(self.n_modes, self.spacing)
        } else {
            LatticeModel::new(self.n_modes, self.spacing, self.mass)
        }
    }
}

impl From<&LatticeModel> for LatticeParams {
    fn from(model: &LatticeModel) -> Self {
        Self {
            n_modes: model.n_modes,
            spacing: model.spacing,
            mass: model.mass,
        }
    }
}
