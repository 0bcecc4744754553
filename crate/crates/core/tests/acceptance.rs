//! Acceptance suite. Each test evaluates one release criterion at its stated
//! tolerance and runtime budget and prints a single pass/fail line.
//!
//! Run with `cargo test -p reur-core --test acceptance -- --nocapture`.

use std::panic::UnwindSafe;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use reur_core::{
    bose_einstein, empirical_moments, field_sector_bound_for_profile, functional_entropy,
    gaussian_relative_entropy, heisenberg_chain_check, hermite, hermite_explicit,
    mc_relative_entropy, relative_entropy_quadrature, reur_bound, reur_report, sample_mode,
    smeared_one_particle_bound, thermal_bound_density_continuum, thermal_bound_density_sweep,
    thermal_closed_forms, LatticeModel, ModeDensity, QuadOptions, Sector, StateSpec, WavePacket,
    EULER_GAMMA,
};

fn run_criterion(id: u32, name: &str, budget: Duration, body: impl FnOnce() + UnwindSafe) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(body);
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) => println!("criterion {id}: PASS ({elapsed:.2?}) - {name}"),
        Err(cause) => {
            println!("criterion {id}: FAIL ({elapsed:.2?}) - {name}");
            std::panic::resume_unwind(cause);
        }
    }
    assert!(
        elapsed <= budget,
        "criterion {id} exceeded runtime budget {budget:?}: {elapsed:?}"
    );
}

const MC_SAMPLES: usize = 1_000_000;

#[test]
fn criterion_1_single_excitation_reur() {
    run_criterion(
        1,
        "single-excitation REUR values",
        Duration::from_secs(1),
        || {
            let expect_lhs = 4.0 - 4f64.ln() - 2.0 * EULER_GAMMA;
            let model = LatticeModel::single_mode(2.0).unwrap();
            let spec = StateSpec::excited(&model, &[(0, 1)]).unwrap();
            let report = reur_report(&spec, &model).unwrap();
            assert_eq!(report.rhs, 2.0, "rhs must be exact");
            assert!(
                (report.lhs - expect_lhs).abs() < 1e-6,
                "quadrature lhs {} vs {expect_lhs}",
                report.lhs
            );

            // Monte-Carlo route: one n = 1 mode per sector.
            let mut mc = 0.0;
            let mut se_sq = 0.0;
            for (sector_seed, base) in [(101u64, 0.25), (202, 1.0)] {
                let p = ModeDensity::HermiteWeighted {
                    n: 1,
                    base_variance: base,
                };
                let q = ModeDensity::Gaussian {
                    variance: base,
                    mean: 0.0,
                };
                let e = mc_relative_entropy(&p, &q, MC_SAMPLES, sector_seed).unwrap();
                mc += e.value;
                se_sq += e.error_estimate * e.error_estimate;
            }
            let se = se_sq.sqrt();
            assert!(
                (mc - expect_lhs).abs() < 5.0 * se,
                "MC lhs {mc} vs {expect_lhs} (5 SE = {})",
                5.0 * se
            );
        },
    );
}

#[test]
fn criterion_2_excited_bound_n_independence() {
    run_criterion(
        2,
        "excited bound independent of mode count",
        Duration::from_secs(1),
        || {
            for (occupations, expect) in
                [(vec![(1i64, 1u32)], 2.0f64), (vec![(1, 2), (2, 3)], 10.0)]
            {
                let mut bits = Vec::new();
                for n in [8usize, 64, 512, 4096] {
                    let model = LatticeModel::new(n, 1.0, 1.0).unwrap();
                    let spec = StateSpec::excited(&model, &occupations).unwrap();
                    bits.push(reur_bound(&spec).to_bits());
                }
                assert!(
                    bits.iter().all(|&b| b == expect.to_bits()),
                    "bound drifted: {bits:?}"
                );
            }
        },
    );
}

#[test]
fn criterion_3_thermal_curve_identities() {
    run_criterion(
        3,
        "single-mode thermal curves over the beta grid",
        Duration::from_secs(1),
        || {
            let model = LatticeModel::single_mode(1.0).unwrap();
            let points = 50usize;
            let (beta_min, beta_max) = (0.05f64, 10.0f64);
            let mut last = (f64::NAN, f64::NAN);
            for i in 0..points {
                let beta = beta_min + (beta_max - beta_min) * i as f64 / (points - 1) as f64;
                let n = bose_einstein(1.0, beta).unwrap();
                let expect_lhs = 2.0 * n - (1.0 + 2.0 * n).ln();
                let expect_rhs = 2.0 * n;
                let report =
                    reur_report(&StateSpec::thermal(&model, beta).unwrap(), &model).unwrap();
                assert!((report.lhs - expect_lhs).abs() <= 1e-12, "beta={beta}");
                assert!((report.rhs - expect_rhs).abs() <= 1e-12, "beta={beta}");
                assert!(report.deficit >= 0.0, "beta={beta}");
                let (cf_lhs, cf_rhs) = thermal_closed_forms(&model, beta).unwrap();
                assert!((cf_lhs - expect_lhs).abs() <= 1e-12);
                assert!((cf_rhs - expect_rhs).abs() <= 1e-12);
                last = (report.lhs, report.rhs);
            }
            assert!(
                last.0 < 1e-3 && last.1 < 1e-3,
                "curves at beta = 10: {last:?}"
            );
        },
    );
}

#[test]
fn criterion_4_bbm_vacuum_saturation() {
    run_criterion(
        4,
        "vacuum saturates the mode-scaling entropy bound",
        Duration::from_secs(1),
        || {
            let bbm_per_mode = 1.0 + std::f64::consts::PI.ln();
            for n in [1usize, 10, 100, 10_000] {
                let model = if n == 1 {
                    LatticeModel::single_mode(1.0).unwrap()
                } else {
                    LatticeModel::new(n, 1.0, 1.0).unwrap()
                };
                let spec = StateSpec::vacuum(&model);
                let total = functional_entropy(&spec, &model, Sector::Field)
                    .unwrap()
                    .value
                    + functional_entropy(&spec, &model, Sector::Momentum)
                        .unwrap()
                        .value;
                let expect = n as f64 * bbm_per_mode;
                assert!(
                    (total - expect).abs() <= 1e-10 * n as f64,
                    "N={n}: {total} vs {expect}"
                );
                assert_eq!(reur_bound(&spec), 0.0, "vacuum bound must be exactly zero");
            }
        },
    );
}

#[test]
fn criterion_5_heisenberg_chain_on_random_specs() {
    run_criterion(
        5,
        "determinant chain on 200 randomized specs",
        Duration::from_secs(30),
        || {
            let mut rng = ChaCha12Rng::seed_from_u64(0x5EED);
            for case in 0..200 {
                let n_modes = 2 * rng.random_range(1..=8usize);
                let spacing = rng.random_range(0.3..2.0);
                let mass = rng.random_range(0.2..3.0);
                let model = LatticeModel::new(n_modes, spacing, mass).unwrap();
                let spec = if case % 2 == 0 {
                    StateSpec::thermal(&model, rng.random_range(0.05..20.0)).unwrap()
                } else {
                    let half = (n_modes / 2) as i64;
                    let count = rng.random_range(1..=4usize);
                    let mut occupations = Vec::new();
                    for _ in 0..count {
                        occupations
                            .push((rng.random_range(-half..half), rng.random_range(1..=8u32)));
                    }
                    StateSpec::excited(&model, &occupations).unwrap()
                };
                let chain = heisenberg_chain_check(&spec, &model).unwrap();
                assert!(chain.holds, "case {case}: {chain:?}");
                if spec.is_gaussian() {
                    assert_eq!(chain.exp_term, 1.0, "Gaussian spec must sit exactly at one");
                }
            }
        },
    );
}

#[test]
fn criterion_6_thermal_continuum_limit() {
    run_criterion(
        6,
        "thermal bound density approaches the continuum",
        Duration::from_secs(5),
        || {
            let reference = thermal_bound_density_continuum(1.0, 1.0).unwrap();
            assert!(
                reference.error < 1e-10,
                "reference error {}",
                reference.error
            );
            let sweep = thermal_bound_density_sweep(10.0, 1.0, 1.0, &[64, 256, 1024]).unwrap();
            let mut prev = f64::INFINITY;
            for &(n, density) in &sweep {
                let err = (density - reference.value).abs();
                assert!(err < prev, "error not decreasing at N={n}: {err} vs {prev}");
                prev = err;
            }
            assert!(prev < 1e-4, "N=1024 error {prev}");
        },
    );
}

#[test]
fn criterion_7_smeared_one_particle_bound() {
    run_criterion(
        7,
        "smeared one-particle bound and scale invariance",
        Duration::from_secs(2),
        || {
            for (k, sigma) in [(0.0, 1.0), (2.0, 0.5), (5.0, 0.1)] {
                let wp = WavePacket::new(k, sigma).unwrap();
                let bound = smeared_one_particle_bound(&wp, 1.0).unwrap();
                assert!((bound - 1.0).abs() <= 1e-7, "packet ({k},{sigma}): {bound}");
                let scaled =
                    field_sector_bound_for_profile(|p| 3.0 * wp.amplitude(p), wp.window(), 1.0)
                        .unwrap();
                assert!(
                    (bound - scaled).abs() <= 1e-7,
                    "scale invariance ({k},{sigma})"
                );
            }
        },
    );
}

#[test]
fn criterion_8_oracle_equivalence() {
    run_criterion(
        8,
        "oracle equivalence battery",
        Duration::from_secs(60),
        || {
            // Closed form vs quadrature vs Monte Carlo on Gaussian ratio states.
            for (ratio, seed) in [(0.4f64, 1u64), (2.2, 2), (5.0, 3)] {
                let base = 0.6;
                let p = ModeDensity::Gaussian {
                    variance: ratio * base,
                    mean: 0.0,
                };
                let q = ModeDensity::Gaussian {
                    variance: base,
                    mean: 0.0,
                };
                let closed = gaussian_relative_entropy(ratio, 0.0).unwrap();
                let quad = relative_entropy_quadrature(&p, &q).unwrap();
                assert!((quad.value - closed).abs() < 1e-8, "quad r={ratio}");
                let mc = mc_relative_entropy(&p, &q, MC_SAMPLES, seed).unwrap();
                assert!(
                    (mc.value - closed).abs() < 5.0 * mc.error_estimate,
                    "mc r={ratio}: {} vs {closed}",
                    mc.value
                );
            }

            // Excited modes: quadrature against the analytic n = 1 value and MC
            // against quadrature for higher occupations.
            let base = 0.5;
            let q = ModeDensity::Gaussian {
                variance: base,
                mean: 0.0,
            };
            for (n, seed) in [(1u32, 7u64), (2, 8), (3, 9)] {
                let p = ModeDensity::HermiteWeighted {
                    n,
                    base_variance: base,
                };
                let quad = relative_entropy_quadrature(&p, &q).unwrap();
                if n == 1 {
                    let analytic = 2.0 - EULER_GAMMA - 2f64.ln();
                    assert!((quad.value - analytic).abs() < 1e-8);
                }
                let mc = mc_relative_entropy(&p, &q, MC_SAMPLES, seed).unwrap();
                assert!(
                    (mc.value - quad.value).abs() < 5.0 * mc.error_estimate,
                    "n={n}: {} vs {}",
                    mc.value,
                    quad.value
                );
                // second moment from samples
                let batch = sample_mode(&p, MC_SAMPLES, seed + 100).unwrap();
                let m = empirical_moments(&batch).unwrap();
                assert!((m.variance - p.variance()).abs() < 5.0 * m.stderr_var);
            }

            // Hermite recurrence against the explicit sum.
            for n in 0..=12u32 {
                for i in 0..=200 {
                    let x = -5.0 + 0.05 * i as f64;
                    let a = hermite(n, x);
                    let b = hermite_explicit(n, x).unwrap();
                    assert!(
                        (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0),
                        "n={n} x={x}"
                    );
                }
            }

            // Hermite orthogonality.
            let opts = QuadOptions {
                abs_tol: 1e-9,
                ..QuadOptions::default()
            };
            for a in 0..=6u32 {
                for b in a..=6u32 {
                    let f = |x: f64| hermite(a, x) * hermite(b, x) * (-0.5 * x * x).exp();
                    let r =
                        reur_core::quad::adaptive_with_breakpoints(f, -20.0, 20.0, &[0.0], &opts)
                            .unwrap();
                    let expect = if a == b {
                        (2.0 * std::f64::consts::PI).sqrt()
                            * (1..=u64::from(a)).map(|k| k as f64).product::<f64>()
                    } else {
                        0.0
                    };
                    assert!(
                        (r.value - expect).abs() < 1e-7 * expect.abs().max(1.0),
                        "orthogonality a={a} b={b}"
                    );
                }
            }

            // Position-space covariance spectrum.
            let model = LatticeModel::new(8, 0.5, 0.9).unwrap();
            let vars = vec![0.1, 0.5, 1.0, 2.0, 3.0, 0.25, 0.75, 1.5];
            let cov = model.position_space_covariance(&vars).unwrap();
            let mut eig: Vec<f64> = cov.symmetric_eigen().eigenvalues.iter().copied().collect();
            let mut expect = vars.clone();
            eig.sort_by(f64::total_cmp);
            expect.sort_by(f64::total_cmp);
            for (e, v) in eig.iter().zip(&expect) {
                assert!((e - v).abs() <= 1e-10 * v.max(1.0), "spectrum: {e} vs {v}");
            }
        },
    );
}

#[test]
fn criterion_9_violation_detector() {
    run_criterion(
        9,
        "perturbed state trips the violation detector",
        Duration::from_secs(5),
        || {
            let model = LatticeModel::single_mode(1.0).unwrap();
            let spec = StateSpec::excited(&model, &[(0, 1)]).unwrap();
            let mut report = reur_report(&spec, &model).unwrap();
            report.validate().expect("unperturbed report is valid");
            // +0.6 nats pushes the lhs past the ~0.54 deficit
            report.lhs += 0.6;
            report.deficit = report.rhs - report.lhs;
            assert!(
                report.validate().is_err(),
                "detector must fire after perturbation"
            );
        },
    );
}
