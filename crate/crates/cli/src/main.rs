//! `reur`: evaluate the relative entropic uncertainty relation for lattice
//! scalar field states from the command line.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use reur_core::{LatticeParams, MeanPair, OccupationEntry, StateKind, StateParams, WavePacket};

use config::{CommandKind, McOptions, OutputFormat, OutputSpec, RunConfig, SweepOptions};

#[derive(Parser)]
#[command(
    name = "reur",
    version,
    about = "Relative entropic uncertainty for lattice scalar field states",
    after_help = "A JSON run configuration (--config) replaces all flags; \
                  see the README for the schema."
)]
struct Cli {
    /// JSON run configuration; used instead of a subcommand.
    #[arg(long, value_name = "FILE", global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate both sides of the uncertainty relation for one state.
    Report(ReportArgs),
    /// Sweep the inverse temperature on a fixed lattice.
    ThermalSweep(ThermalSweepArgs),
    /// Sweep the mode count (bound constancy, density convergence).
    NSweep(NSweepArgs),
    /// Averaged-field wave-packet diagnostics.
    Smeared(SmearedArgs),
    /// Single-mode thermal curves as CSV and an SVG chart.
    Fig1(Fig1Args),
    /// Run the full oracle cross-check battery.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Mode count N (even, or 1 together with --omega).
    #[arg(long)]
    modes: Option<usize>,
    /// Lattice spacing.
    #[arg(long, default_value_t = 1.0)]
    spacing: f64,
    /// Mass (inverse length units).
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Opt into the massless theory (singular zero mode).
    #[arg(long)]
    massless: bool,
    /// Single-oscillator convention: one mode with this frequency.
    #[arg(long, conflicts_with_all = ["mass", "massless"])]
    omega: Option<f64>,
}

impl ModelArgs {
    fn to_params(&self) -> Result<LatticeParams> {
        if let Some(omega) = self.omega {
            if self.modes.is_some_and(|n| n != 1) {
                bail!("--omega selects the single-mode convention; --modes must be 1 or absent");
            }
            return Ok(LatticeParams {
                n_modes: 1,
                spacing: 1.0,
                mass: omega,
            });
        }
        let n_modes = self.modes.context("--modes (or --omega) is required")?;
        let mass = if self.massless { 0.0 } else { self.mass };
        Ok(LatticeParams {
            n_modes,
            spacing: self.spacing,
            mass,
        })
    }
}

#[derive(Args, Clone)]
struct StateArgs {
    /// Ground state (the default).
    #[arg(long)]
    vacuum: bool,
    /// Thermal state; requires --beta.
    #[arg(long)]
    thermal: bool,
    /// Inverse temperature.
    #[arg(long)]
    beta: Option<f64>,
    /// Excited state occupations, e.g. 0:1 or 1:2,-3:1.
    #[arg(long, value_name = "K:N[,K:N...]")]
    excite: Option<String>,
    /// Coherent state: JSON file with reduced means [{"phi":..,"pi":..},..].
    #[arg(long, value_name = "FILE")]
    coherent_means: Option<PathBuf>,
}

impl StateArgs {
    fn to_params(&self) -> Result<StateParams> {
        let selected = [
            self.vacuum,
            self.thermal,
            self.excite.is_some(),
            self.coherent_means.is_some(),
        ]
        .iter()
        .filter(|&&s| s)
        .count();
        if selected > 1 {
            bail!("choose one of --vacuum, --thermal, --excite, --coherent-means");
        }
        if self.thermal {
            let beta = self.beta.context("--thermal requires --beta")?;
            return Ok(StateParams {
                kind: StateKind::Thermal,
                beta: Some(beta),
                occupations: None,
                means: None,
            });
        }
        if let Some(spec) = &self.excite {
            let occupations = parse_occupations(spec)?;
            return Ok(StateParams {
                kind: StateKind::Excited,
                beta: None,
                occupations: Some(occupations),
                means: None,
            });
        }
        if let Some(path) = &self.coherent_means {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let means: Vec<MeanPair> = serde_json::from_str(&text)
                .with_context(|| format!("parsing means from {}", path.display()))?;
            return Ok(StateParams {
                kind: StateKind::Coherent,
                beta: None,
                occupations: None,
                means: Some(means),
            });
        }
        Ok(StateParams {
            kind: StateKind::Vacuum,
            beta: None,
            occupations: None,
            means: None,
        })
    }
}

fn parse_occupations(spec: &str) -> Result<Vec<OccupationEntry>> {
    spec.split(',')
        .map(|pair| {
            let (mode, n) = pair
                .split_once(':')
                .with_context(|| format!("expected K:N, got {pair:?}"))?;
            Ok(OccupationEntry {
                mode: mode
                    .trim()
                    .parse()
                    .with_context(|| format!("bad mode index {mode:?}"))?,
                n: n.trim()
                    .parse()
                    .with_context(|| format!("bad occupation {n:?}"))?,
            })
        })
        .collect()
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output file format.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

impl OutputArgs {
    fn to_spec(&self) -> Option<OutputSpec> {
        self.out.as_ref().map(|path| OutputSpec {
            path: path.clone(),
            format: self.format,
        })
    }
}

#[derive(Args, Clone)]
struct McArgs {
    /// Monte-Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
    /// RNG seed; identical seeds reproduce outputs byte for byte.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Negative control: add this many nats to the lhs before validation.
    #[arg(long, value_name = "NATS")]
    inject_lhs_bias: Option<f64>,
}

#[derive(Args)]
struct ThermalSweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value_t = 0.05)]
    beta_min: f64,
    #[arg(long, default_value_t = 10.0)]
    beta_max: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
}

#[derive(Args)]
struct NSweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Mode counts to visit.
    #[arg(long, value_delimiter = ',', default_value = "8,64,512,4096")]
    n_list: Vec<usize>,
    /// Hold this total length fixed (spacing = length / N).
    #[arg(long)]
    length: Option<f64>,
    /// Report per-length values.
    #[arg(long)]
    per_length: bool,
}

#[derive(Args)]
struct SmearedArgs {
    /// Wave packet as center,width.
    #[arg(long, value_name = "K,SIGMA")]
    packet: String,
    /// Mass of the continuum theory.
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct Fig1Args {
    /// Mode frequency.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value_t = 0.05)]
    beta_min: f64,
    #[arg(long, default_value_t = 10.0)]
    beta_max: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    mc: McArgs,
}

fn parse_packet(text: &str) -> Result<WavePacket> {
    let (k, sigma) = text.split_once(',').context("expected --packet k,sigma")?;
    let center: f64 = k.trim().parse().context("bad packet center")?;
    let width: f64 = sigma.trim().parse().context("bad packet width")?;
    Ok(WavePacket::new(center, width)?)
}

fn vacuum_params() -> StateParams {
    StateParams {
        kind: StateKind::Vacuum,
        beta: None,
        occupations: None,
        means: None,
    }
}

fn config_from_cli(cli: &Cli) -> Result<RunConfig> {
    if let Some(path) = &cli.config {
        if cli.command.is_some() {
            bail!("--config replaces the subcommand; pass one or the other");
        }
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return serde_json::from_str(&text)
            .with_context(|| format!("parsing run configuration {}", path.display()));
    }
    let Some(command) = &cli.command else {
        bail!("a subcommand or --config file is required (try --help)");
    };
    Ok(match command {
        Command::Report(args) => RunConfig {
            lattice: args.model.to_params()?,
            state: args.state.to_params()?,
            command: CommandKind::Report,
            output: args.output.to_spec(),
            mc: None,
            sweep: None,
            packet: None,
            inject_lhs_bias: args.inject_lhs_bias,
        },
        Command::ThermalSweep(args) => RunConfig {
            lattice: args.model.to_params()?,
            state: StateParams {
                kind: StateKind::Thermal,
                beta: Some(args.beta_min),
                occupations: None,
                means: None,
            },
            command: CommandKind::ThermalSweep,
            output: args.output.to_spec(),
            mc: None,
            sweep: Some(SweepOptions {
                beta_min: args.beta_min,
                beta_max: args.beta_max,
                points: args.points,
                ..Default::default()
            }),
            packet: None,
            inject_lhs_bias: None,
        },
        Command::NSweep(args) => RunConfig {
            // spacing/mass seed the per-N models; the mode count comes from n_list
            lattice: LatticeParams {
                n_modes: args.n_list.first().copied().unwrap_or(8),
                spacing: args.model.spacing,
                mass: if args.model.massless {
                    0.0
                } else {
                    args.model.mass
                },
            },
            state: args.state.to_params()?,
            command: CommandKind::NSweep,
            output: args.output.to_spec(),
            mc: None,
            sweep: Some(SweepOptions {
                n_list: args.n_list.clone(),
                length: args.length,
                per_length: args.per_length,
                ..Default::default()
            }),
            packet: None,
            inject_lhs_bias: None,
        },
        Command::Smeared(args) => RunConfig {
            lattice: LatticeParams {
                n_modes: 1,
                spacing: 1.0,
                mass: args.mass,
            },
            state: vacuum_params(),
            command: CommandKind::Smeared,
            output: args.output.to_spec(),
            mc: None,
            sweep: None,
            packet: Some(parse_packet(&args.packet)?),
            inject_lhs_bias: None,
        },
        Command::Fig1(args) => RunConfig {
            lattice: LatticeParams {
                n_modes: 1,
                spacing: 1.0,
                mass: args.omega,
            },
            state: StateParams {
                kind: StateKind::Thermal,
                beta: Some(args.beta_min),
                occupations: None,
                means: None,
            },
            command: CommandKind::Fig1,
            output: args.output.to_spec(),
            mc: None,
            sweep: Some(SweepOptions {
                beta_min: args.beta_min,
                beta_max: args.beta_max,
                points: args.points,
                ..Default::default()
            }),
            packet: None,
            inject_lhs_bias: None,
        },
        Command::Verify(args) => RunConfig {
            lattice: args.model.to_params().unwrap_or(LatticeParams {
                n_modes: 4,
                spacing: 1.0,
                mass: 1.0,
            }),
            state: args.state.to_params()?,
            command: CommandKind::Verify,
            output: args.output.to_spec(),
            mc: Some(McOptions {
                samples: args.mc.mc_samples,
                seed: args.mc.seed,
            }),
            sweep: None,
            packet: None,
            inject_lhs_bias: None,
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match config_from_cli(&cli) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    match commands::execute(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupation_parsing() {
        let occ = parse_occupations("0:1").unwrap();
        assert_eq!(occ, vec![OccupationEntry { mode: 0, n: 1 }]);
        let occ = parse_occupations("1:2,-3:1").unwrap();
        assert_eq!(occ.len(), 2);
        assert_eq!(occ[1].mode, -3);
        assert!(parse_occupations("1").is_err());
        assert!(parse_occupations("a:b").is_err());
    }

    #[test]
    fn packet_parsing() {
        let wp = parse_packet("2,0.5").unwrap();
        assert_eq!(wp.center(), 2.0);
        assert_eq!(wp.width(), 0.5);
        assert!(parse_packet("2").is_err());
        assert!(parse_packet("2,-1").is_err());
    }

    #[test]
    fn omega_selects_single_mode() {
        let args = ModelArgs {
            modes: Some(1),
            spacing: 1.0,
            mass: 1.0,
            massless: false,
            omega: Some(2.0),
        };
        let params = args.to_params().unwrap();
        assert_eq!(
            params,
            LatticeParams {
                n_modes: 1,
                spacing: 1.0,
                mass: 2.0
            }
        );

        let bad = ModelArgs {
            modes: Some(4),
            spacing: 1.0,
            mass: 1.0,
            massless: false,
            omega: Some(2.0),
        };
        assert!(bad.to_params().is_err());
    }

    #[test]
    fn cli_parses_spec_examples() {
        Cli::try_parse_from([
            "reur", "report", "--modes", "1", "--omega", "2", "--excite", "0:1",
        ])
        .unwrap();
        Cli::try_parse_from(["reur", "report", "--modes", "4", "--vacuum"]).unwrap();
        Cli::try_parse_from([
            "reur",
            "report",
            "--thermal",
            "--beta",
            "1",
            "--modes",
            "1",
            "--omega",
            "1",
        ])
        .unwrap();
        Cli::try_parse_from(["reur", "smeared", "--packet", "2,0.5", "--mass", "1"]).unwrap();
        Cli::try_parse_from([
            "reur", "fig1", "--omega", "1", "--out", "f.svg", "--format", "svg",
        ])
        .unwrap();
        Cli::try_parse_from([
            "reur",
            "verify",
            "--modes",
            "4",
            "--mc-samples",
            "1000",
            "--seed",
            "7",
        ])
        .unwrap();
    }
}
