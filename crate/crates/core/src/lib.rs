//! Numerical toolkit for entropic uncertainty of a free scalar field on a
//! periodic lattice.
//!
//! The crate builds the discretized theory ([`lattice`]), the per-mode
//! statistical description of its canonical states ([`states`]), their
//! differential and relative entropies ([`entropy`]), and evaluates both
//! sides of the relative entropic uncertainty relation together with its
//! closed-form special cases and the Heisenberg determinant chain
//! ([`reur`]). Averaged-field wave packets live in [`smearing`], and
//! [`oracle`] cross-checks every closed form by Monte-Carlo sampling.
//!
//! All per-mode quantities are expressed in reduced variables that absorb
//! the functional-measure factors, so entropies are plain sums of
//! one-dimensional entropies and the uncertainty bound is an ordinary
//! finite sum over variance-ratio differences.

pub mod entropy;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod quad;
pub mod reur;
pub mod smearing;
pub mod states;
mod util;

pub use entropy::{
    functional_entropy, gaussian_entropy, gaussian_relative_entropy, relative_entropy_quadrature,
    state_relative_entropy_to_optimal_coherent, EntropyMethod, EntropyValue,
};
pub use error::{Error, Result};
pub use lattice::{dispersion_continuum, LatticeModel, LatticeParams};
pub use oracle::{empirical_moments, mc_relative_entropy, sample_mode, Moments, SampleBatch};
pub use quad::{QuadOptions, QuadResult};
pub use reur::{
    classical_limit_bound, heisenberg_chain_check, heisenberg_ratio, reur_bound, reur_report,
    thermal_bound_density_continuum, thermal_bound_density_sweep, thermal_closed_forms, ChainCheck,
    ReurReport, TIGHTNESS_TOLERANCE,
};
pub use smearing::{
    field_sector_bound_for_profile, momentum_sector_bound_for_profile,
    smeared_momentum_sector_bound, smeared_one_particle_bound, smeared_one_particle_reur,
    smeared_vacuum_variance, WavePacket,
};
pub use states::{
    bose_einstein, hermite, hermite_explicit, hermite_roots, mode_density, mode_density_sector,
    vacuum_variance, MeanPair, ModeDensity, ModeMoments, OccupationEntry, Sector, StateKind,
    StateParams, StateSpec, MAX_OCCUPATION,
};

/// Euler-Mascheroni constant; enters the exact single-excitation relative
/// entropy `4 - ln 4 - 2 gamma`.
pub const EULER_GAMMA: f64 = 0.5772156649015329;
