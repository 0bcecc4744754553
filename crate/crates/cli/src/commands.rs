//! Command implementations. Every command prints human-readable lines
//! followed by one machine-readable JSON line, and optionally writes a
//! CSV/JSON/SVG file.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use reur_core::{
    bose_einstein, empirical_moments, gaussian_relative_entropy, hermite, hermite_explicit,
    mc_relative_entropy, relative_entropy_quadrature, reur_bound, reur_report, sample_mode,
    smeared_momentum_sector_bound, smeared_one_particle_bound, smeared_one_particle_reur,
    smeared_vacuum_variance, thermal_closed_forms, LatticeModel, ModeDensity, ReurReport,
    StateKind, StateSpec, EULER_GAMMA,
};

use crate::config::{CommandKind, OutputFormat, OutputSpec, RunConfig, SweepOptions};
use crate::svg::{line_chart, Series};

#[derive(Debug, Clone, Copy, Serialize)]
struct SweepRow {
    param: f64,
    lhs: f64,
    rhs: f64,
    deficit: f64,
}

/// Runs the configured command. `Ok(true)` means every requested check
/// passed; `Ok(false)` maps to a nonzero exit code.
pub fn execute(config: &RunConfig) -> Result<bool> {
    match config.command {
        CommandKind::Report => cmd_report(config),
        CommandKind::ThermalSweep => cmd_thermal_sweep(config),
        CommandKind::NSweep => cmd_n_sweep(config),
        CommandKind::Smeared => cmd_smeared(config),
        CommandKind::Fig1 => cmd_fig1(config),
        CommandKind::Verify => cmd_verify(config),
    }
}

fn build_state(config: &RunConfig, model: &LatticeModel) -> Result<StateSpec> {
    StateSpec::from_params(model, &config.state)
        .with_context(|| "building the state from its parameters")
}

fn print_report(report: &ReurReport) {
    println!(
        "lhs              = {:.12}  (error estimate {:.3e})",
        report.lhs, report.lhs_error
    );
    println!("rhs              = {:.12}", report.rhs);
    println!("deficit          = {:.12}", report.deficit);
    println!("heisenberg ratio = {:.12}", report.heisenberg_ratio);
    println!("tight            = {}", report.tight);
}

fn cmd_report(config: &RunConfig) -> Result<bool> {
    let model = config.lattice.build()?;
    let spec = build_state(config, &model)?;
    let mut report = reur_report(&spec, &model)?;
    if let Some(bias) = config.inject_lhs_bias {
        println!("negative control: injecting {bias} nats into the lhs");
        report.lhs += bias;
        report.deficit = report.rhs - report.lhs;
        report.tight = report.deficit.abs() <= reur_core::TIGHTNESS_TOLERANCE + report.lhs_error;
    }
    println!("state  : {:?}", spec.kind());
    println!(
        "lattice: N = {}, spacing = {}, mass = {}",
        model.n_modes(),
        model.spacing(),
        model.mass()
    );
    print_report(&report);
    let payload = json!({
        "command": "report",
        "lattice": &model,
        "state": spec.params(),
        "report": report,
    });
    emit(config.output.as_ref(), &payload, None)?;
    println!("{payload}");
    if let Err(violation) = report.validate() {
        eprintln!("{violation}");
        return Ok(false);
    }
    Ok(true)
}

fn beta_grid(sweep: &SweepOptions) -> Vec<f64> {
    let points = sweep.points.max(2);
    (0..points)
        .map(|i| {
            sweep.beta_min + (sweep.beta_max - sweep.beta_min) * i as f64 / (points - 1) as f64
        })
        .collect()
}

fn cmd_thermal_sweep(config: &RunConfig) -> Result<bool> {
    let model = config.lattice.build()?;
    let sweep = config.sweep.clone().unwrap_or_default();
    let rows: Vec<SweepRow> = beta_grid(&sweep)
        .into_iter()
        .map(|beta| {
            let (lhs, rhs) = thermal_closed_forms(&model, beta)?;
            Ok(SweepRow {
                param: beta,
                lhs,
                rhs,
                deficit: rhs - lhs,
            })
        })
        .collect::<Result<_>>()?;
    print_rows("beta", &rows);
    let payload = json!({
        "command": "thermal-sweep",
        "lattice": &model,
        "rows": rows,
    });
    emit(config.output.as_ref(), &payload, Some(&rows))?;
    println!("{payload}");
    Ok(true)
}

fn cmd_n_sweep(config: &RunConfig) -> Result<bool> {
    let sweep = config.sweep.clone().unwrap_or_default();
    if config.state.kind == StateKind::Coherent {
        bail!("the mode-count sweep supports vacuum, thermal and excited states");
    }
    let rows: Vec<SweepRow> = sweep
        .n_list
        .iter()
        .map(|&n| {
            let spacing = match sweep.length {
                Some(length) => length / n as f64,
                None => config.lattice.spacing,
            };
            let model = LatticeModel::new(n, spacing, config.lattice.mass)?;
            let spec = StateSpec::from_params(&model, &config.state)?;
            let report = reur_report(&spec, &model)?;
            let scale = if sweep.per_length {
                model.length()
            } else {
                1.0
            };
            Ok(SweepRow {
                param: n as f64,
                lhs: report.lhs / scale,
                rhs: report.rhs / scale,
                deficit: report.deficit / scale,
            })
        })
        .collect::<Result<_>>()?;
    print_rows("N", &rows);
    let payload = json!({
        "command": "n-sweep",
        "state": &config.state,
        "per_length": sweep.per_length,
        "rows": rows,
    });
    emit(config.output.as_ref(), &payload, Some(&rows))?;
    println!("{payload}");
    Ok(true)
}

fn cmd_smeared(config: &RunConfig) -> Result<bool> {
    let Some(packet) = config.packet else {
        bail!("the smeared command needs --packet k,sigma");
    };
    let mass = config.lattice.mass;
    let variance = smeared_vacuum_variance(&packet, mass)?;
    let field_bound = smeared_one_particle_bound(&packet, mass)?;
    let momentum_bound = smeared_momentum_sector_bound(&packet, mass)?;
    let report = smeared_one_particle_reur(&packet, mass)?;
    println!(
        "packet : center = {}, width = {}, mass = {}",
        packet.center(),
        packet.width(),
        mass
    );
    println!("smeared vacuum variance = {variance:.12}");
    println!("field-sector bound      = {field_bound:.12}");
    println!("momentum-sector bound   = {momentum_bound:.12}");
    print_report(&report);
    let payload = json!({
        "command": "smeared",
        "packet": packet,
        "mass": mass,
        "vacuum_variance": variance,
        "field_sector_bound": field_bound,
        "momentum_sector_bound": momentum_bound,
        "report": report,
    });
    emit(config.output.as_ref(), &payload, None)?;
    println!("{payload}");
    if let Err(violation) = report.validate() {
        eprintln!("{violation}");
        return Ok(false);
    }
    Ok(true)
}

fn cmd_fig1(config: &RunConfig) -> Result<bool> {
    let model = config.lattice.build()?;
    if model.n_modes() != 1 {
        bail!("the thermal-curve figure uses the single-mode convention; pass --omega");
    }
    let sweep = config.sweep.clone().unwrap_or_default();
    let rows: Vec<SweepRow> = beta_grid(&sweep)
        .into_iter()
        .map(|beta| {
            let (lhs, rhs) = thermal_closed_forms(&model, beta)?;
            Ok(SweepRow {
                param: beta,
                lhs,
                rhs,
                deficit: rhs - lhs,
            })
        })
        .collect::<Result<_>>()?;
    print_rows("beta", &rows);

    if let Some(output) = &config.output {
        match output.format {
            OutputFormat::Svg => {
                let chart = render_fig1(&rows, model.omega(0)?);
                fs::write(&output.path, chart)
                    .with_context(|| format!("writing {}", output.path.display()))?;
                let csv_path = output.path.with_extension("csv");
                write_csv(&csv_path, &rows)?;
                println!("wrote {} and {}", output.path.display(), csv_path.display());
            }
            OutputFormat::Csv => {
                write_csv(&output.path, &rows)?;
                println!("wrote {}", output.path.display());
            }
            OutputFormat::Json => {
                write_json(&output.path, &json!({ "rows": rows }))?;
                println!("wrote {}", output.path.display());
            }
        }
    }
    let payload = json!({
        "command": "fig1",
        "omega": model.omega(0)?,
        "rows": rows,
    });
    println!("{payload}");
    Ok(true)
}

fn render_fig1(rows: &[SweepRow], omega: f64) -> String {
    let lhs: Vec<(f64, f64)> = rows.iter().map(|r| (r.param, r.lhs)).collect();
    let rhs: Vec<(f64, f64)> = rows.iter().map(|r| (r.param, r.rhs)).collect();
    line_chart(
        &format!("Thermal state, one mode with omega = {omega}"),
        "beta",
        "nats",
        &[
            Series {
                label: "bound (rhs)",
                color: "#d62728",
                points: &rhs,
            },
            Series {
                label: "relative entropies (lhs)",
                color: "#1f77b4",
                points: &lhs,
            },
        ],
    )
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
    /// `{value, stderr, count, seed}` of a Monte-Carlo estimate, when one
    /// backs the check.
    mc_report: Option<(f64, f64, usize, u64)>,
}

fn check(checks: &mut Vec<Check>, name: &'static str, pass: bool, detail: String) {
    checks.push(Check {
        name,
        pass,
        detail,
        mc_report: None,
    });
}

fn check_mc(
    checks: &mut Vec<Check>,
    name: &'static str,
    pass: bool,
    detail: String,
    mc_report: (f64, f64, usize, u64),
) {
    checks.push(Check {
        name,
        pass,
        detail,
        mc_report: Some(mc_report),
    });
}

fn cmd_verify(config: &RunConfig) -> Result<bool> {
    let mc = config.mc.unwrap_or_default();
    let mut checks: Vec<Check> = Vec::new();

    // Hermite recurrence against the explicit sum.
    {
        let mut worst = 0.0f64;
        for n in 0..=12u32 {
            for i in 0..=100 {
                let x = -5.0 + 0.1 * i as f64;
                let a = hermite(n, x);
                let b = hermite_explicit(n, x)?;
                worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
            }
        }
        check(
            &mut checks,
            "hermite recurrence vs explicit sum",
            worst <= 1e-9,
            format!("max rel dev {worst:.2e}"),
        );
    }

    // Hermite orthogonality.
    {
        let opts = reur_core::QuadOptions {
            abs_tol: 1e-9,
            ..Default::default()
        };
        let mut worst = 0.0f64;
        for a in 0..=6u32 {
            for b in a..=6u32 {
                let f = |x: f64| hermite(a, x) * hermite(b, x) * (-0.5 * x * x).exp();
                let r = reur_core::quad::adaptive_with_breakpoints(f, -20.0, 20.0, &[0.0], &opts)?;
                let expect = if a == b {
                    (2.0 * std::f64::consts::PI).sqrt()
                        * (1..=u64::from(a)).map(|k| k as f64).product::<f64>()
                } else {
                    0.0
                };
                worst = worst.max((r.value - expect).abs() / expect.abs().max(1.0));
            }
        }
        check(
            &mut checks,
            "hermite orthogonality",
            worst <= 1e-7,
            format!("max rel dev {worst:.2e}"),
        );
    }

    // Density normalization and second moments.
    {
        let opts = reur_core::QuadOptions::default();
        let mut worst_norm = 0.0f64;
        let mut worst_var = 0.0f64;
        for n in 0..=5u32 {
            let d = ModeDensity::HermiteWeighted {
                n,
                base_variance: 0.37,
            };
            let half = 10.0 * d.variance().sqrt();
            let roots: Vec<f64> = reur_core::hermite_roots(n)
                .into_iter()
                .map(|r| r * 0.37f64.sqrt())
                .collect();
            let norm = reur_core::quad::adaptive_with_breakpoints(
                |x| d.density(x),
                -half,
                half,
                &roots,
                &opts,
            )?;
            worst_norm = worst_norm.max((norm.value - 1.0).abs());
            let second = reur_core::quad::adaptive_with_breakpoints(
                |x| x * x * d.density(x),
                -half,
                half,
                &roots,
                &opts,
            )?;
            worst_var = worst_var.max((second.value - d.variance()).abs());
        }
        check(
            &mut checks,
            "density normalization (n <= 5)",
            worst_norm <= 1e-8,
            format!("max dev {worst_norm:.2e}"),
        );
        check(
            &mut checks,
            "density second moment (n <= 5)",
            worst_var <= 1e-7,
            format!("max dev {worst_var:.2e}"),
        );
    }

    // Closed form vs quadrature on Gaussian ratio states.
    {
        let mut worst = 0.0f64;
        for ratio in [0.2, 0.5, 1.0, 1.7, 3.0, 6.0] {
            for mean in [0.0, 0.4, -0.9] {
                let base = 0.8;
                let p = ModeDensity::Gaussian {
                    variance: ratio * base,
                    mean,
                };
                let q = ModeDensity::Gaussian {
                    variance: base,
                    mean: 0.0,
                };
                let quad = relative_entropy_quadrature(&p, &q)?;
                let closed = gaussian_relative_entropy(ratio, mean * mean / base)?;
                worst = worst.max((quad.value - closed).abs());
            }
        }
        check(
            &mut checks,
            "gaussian closed form vs quadrature",
            worst <= 1e-8,
            format!("max dev {worst:.2e}"),
        );
    }

    // The analytic single-excitation value per sector.
    {
        let p = ModeDensity::HermiteWeighted {
            n: 1,
            base_variance: 0.5,
        };
        let q = ModeDensity::Gaussian {
            variance: 0.5,
            mean: 0.0,
        };
        let quad = relative_entropy_quadrature(&p, &q)?;
        let expect = 2.0 - EULER_GAMMA - 2f64.ln();
        let dev = (quad.value - expect).abs();
        check(
            &mut checks,
            "single-excitation sector value",
            dev <= 1e-8,
            format!("dev {dev:.2e}"),
        );
    }

    // Single-excitation report end to end.
    {
        let model = LatticeModel::single_mode(2.0)?;
        let spec = StateSpec::excited(&model, &[(0, 1)])?;
        let report = reur_report(&spec, &model)?;
        let expect = 4.0 - 4f64.ln() - 2.0 * EULER_GAMMA;
        let pass = report.rhs == 2.0 && (report.lhs - expect).abs() < 1e-6;
        check(
            &mut checks,
            "single-excitation report",
            pass,
            format!("lhs {:.9}, rhs {}", report.lhs, report.rhs),
        );
    }

    // Thermal closed forms against the generic path.
    {
        let model = LatticeModel::new(6, 0.4, 1.1)?;
        let beta = 1.3;
        let (lhs, rhs) = thermal_closed_forms(&model, beta)?;
        let report = reur_report(&StateSpec::thermal(&model, beta)?, &model)?;
        let dev = (lhs - report.lhs).abs().max((rhs - report.rhs).abs());
        check(
            &mut checks,
            "thermal closed forms vs report",
            dev <= 1e-10,
            format!("max dev {dev:.2e}"),
        );
    }

    // Position-space covariance spectrum.
    {
        let model = LatticeModel::new(8, 0.5, 0.9)?;
        let vars = [0.1, 0.5, 1.0, 2.0, 3.0, 0.25, 0.75, 1.5];
        let cov = model.position_space_covariance(&vars)?;
        let mut eig: Vec<f64> = cov.symmetric_eigen().eigenvalues.iter().copied().collect();
        let mut expect = vars.to_vec();
        eig.sort_by(f64::total_cmp);
        expect.sort_by(f64::total_cmp);
        let worst = eig
            .iter()
            .zip(&expect)
            .map(|(e, v)| (e - v).abs() / v.max(1.0))
            .fold(0.0f64, f64::max);
        check(
            &mut checks,
            "covariance spectrum preservation",
            worst <= 1e-10,
            format!("max rel dev {worst:.2e}"),
        );
    }

    // Monte-Carlo estimates against closed forms.
    {
        let base = 0.5;
        let p = ModeDensity::HermiteWeighted {
            n: 1,
            base_variance: base,
        };
        let q = ModeDensity::Gaussian {
            variance: base,
            mean: 0.0,
        };
        let est = mc_relative_entropy(&p, &q, mc.samples, mc.seed)?;
        let expect = 2.0 - EULER_GAMMA - 2f64.ln();
        let dev = (est.value - expect).abs();
        check_mc(
            &mut checks,
            "mc single-excitation divergence",
            dev <= 5.0 * est.error_estimate,
            format!("dev {dev:.2e} vs 5 SE {:.2e}", 5.0 * est.error_estimate),
            (est.value, est.error_estimate, mc.samples, mc.seed),
        );

        let batch = sample_mode(&p, mc.samples, mc.seed.wrapping_add(1))?;
        let moments = empirical_moments(&batch)?;
        let dev = (moments.variance - p.variance()).abs();
        check_mc(
            &mut checks,
            "mc sample variance",
            dev <= 5.0 * moments.stderr_var,
            format!("dev {dev:.2e} vs 5 SE {:.2e}", 5.0 * moments.stderr_var),
            (moments.variance, moments.stderr_var, mc.samples, batch.seed),
        );
        check(
            &mut checks,
            "mc rejection acceptance rate",
            batch.acceptance_rate > 0.15,
            format!("rate {:.3}", batch.acceptance_rate),
        );

        let ratio = 2.2;
        let pg = ModeDensity::Gaussian {
            variance: ratio * base,
            mean: 0.0,
        };
        let est = mc_relative_entropy(&pg, &q, mc.samples, mc.seed.wrapping_add(2))?;
        let closed = gaussian_relative_entropy(ratio, 0.0)?;
        let dev = (est.value - closed).abs();
        check_mc(
            &mut checks,
            "mc thermal-ratio divergence",
            dev <= 5.0 * est.error_estimate,
            format!("dev {dev:.2e} vs 5 SE {:.2e}", 5.0 * est.error_estimate),
            (
                est.value,
                est.error_estimate,
                mc.samples,
                mc.seed.wrapping_add(2),
            ),
        );
    }

    // Negative control: the violation detector must fire on a perturbed report.
    {
        let model = LatticeModel::single_mode(1.0)?;
        let spec = StateSpec::excited(&model, &[(0, 1)])?;
        let mut report = reur_report(&spec, &model)?;
        report.lhs += 0.6;
        report.deficit = report.rhs - report.lhs;
        check(
            &mut checks,
            "violation detector negative control",
            report.validate().is_err(),
            "perturbed lhs by +0.6 nats".to_string(),
        );
    }

    // Bound sanity on the configured state, exercised through the bound path.
    {
        let model = config.lattice.build()?;
        let spec = build_state(config, &model)?;
        let bound = reur_bound(&spec);
        let expect: f64 = match spec.kind() {
            StateKind::Vacuum | StateKind::Coherent => 0.0,
            StateKind::Excited => {
                2.0 * spec
                    .occupations()
                    .values()
                    .map(|&n| f64::from(n))
                    .sum::<f64>()
            }
            StateKind::Thermal => {
                let beta = spec.beta().unwrap_or(1.0);
                2.0 * model
                    .omegas()
                    .iter()
                    .map(|&w| bose_einstein(w, beta).unwrap_or(0.0))
                    .sum::<f64>()
            }
        };
        let dev = (bound - expect).abs();
        check(
            &mut checks,
            "configured-state bound identity",
            dev <= 1e-10,
            format!("dev {dev:.2e}"),
        );
    }

    let all_pass = checks.iter().all(|c| c.pass);
    println!("{:<44} {:<6} detail", "check", "result");
    for c in &checks {
        println!(
            "{:<44} {:<6} {}",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    println!(
        "verify: {}",
        if all_pass {
            "all checks passed"
        } else {
            "FAILURES present"
        }
    );
    let payload = json!({
        "command": "verify",
        "mc": { "samples": mc.samples, "seed": mc.seed },
        "checks": checks.iter().map(|c| {
            let mut entry = json!({
                "name": c.name,
                "pass": c.pass,
                "detail": c.detail,
            });
            if let Some((value, stderr, count, seed)) = c.mc_report {
                entry["mc"] = json!({
                    "value": value,
                    "stderr": stderr,
                    "count": count,
                    "seed": seed,
                });
            }
            entry
        }).collect::<Vec<_>>(),
        "all_pass": all_pass,
    });
    emit(config.output.as_ref(), &payload, None)?;
    println!("{payload}");
    Ok(all_pass)
}

fn print_rows(param_name: &str, rows: &[SweepRow]) {
    println!(
        "{:>12} {:>18} {:>18} {:>18}",
        param_name, "lhs", "rhs", "deficit"
    );
    for r in rows {
        println!(
            "{:>12.6} {:>18.12} {:>18.12} {:>18.12}",
            r.param, r.lhs, r.rhs, r.deficit
        );
    }
}

fn emit(
    output: Option<&OutputSpec>,
    payload: &serde_json::Value,
    rows: Option<&[SweepRow]>,
) -> Result<()> {
    let Some(output) = output else { return Ok(()) };
    match output.format {
        OutputFormat::Json => write_json(&output.path, payload)?,
        OutputFormat::Csv => {
            let Some(rows) = rows else {
                bail!("this command has no tabular output; use --format json");
            };
            write_csv(&output.path, rows)?;
        }
        OutputFormat::Svg => bail!("only fig1 renders SVG"),
    }
    println!("wrote {}", output.path.display());
    Ok(())
}

fn write_json(path: &Path, payload: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(payload)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Comma-separated, header row, `.` decimals, LF line endings.
fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut text = String::from("param,lhs,rhs,deficit\n");
    for r in rows {
        text.push_str(&format!("{},{},{},{}\n", r.param, r.lhs, r.rhs, r.deficit));
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
