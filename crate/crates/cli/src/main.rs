use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regnet::registry::PresetArgs;
use regnet::{run, Command, Numeric, RandomParams, RunConfig, Source, Status};
use regnet_core::{EngineMode, Rational, Sign};

fn rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "1" | "+1" => Ok(Sign::Plus),
        "-" | "-1" => Ok(Sign::Minus),
        _ => Err(format!("`{s}` is not a sign (use + or -)")),
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    ItineraryExact,
    InjectiveFast,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NumericArg {
    Rational,
    Float,
}

/// Exact complexity, structure and attractor analysis of discrete-time
/// regulatory networks.
#[derive(Debug, Parser)]
#[command(name = "regnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Preset network name.
    #[arg(long, global = true, conflicts_with = "network")]
    preset: Option<String>,
    /// TOML network file.
    #[arg(long, global = true)]
    network: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 100)]
    t_max: usize,
    #[arg(long, global = true, value_enum, default_value = "itinerary-exact")]
    mode: ModeArg,
    #[arg(long, global = true, value_enum, default_value = "rational")]
    numeric: NumericArg,
    /// Near-cut tolerance in float mode.
    #[arg(long, global = true, default_value_t = 1e-12)]
    epsilon: f64,
    /// Output directory; nothing is written without it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed of the random preset.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_atoms: usize,
    #[arg(long, global = true)]
    max_seconds: Option<f64>,
    /// Contraction rate of the preset.
    #[arg(long, global = true, value_parser = rational, allow_hyphen_values = true)]
    a: Option<Rational>,
    /// One threshold for all arrows or one per arrow, comma separated.
    #[arg(long = "threshold", global = true, value_parser = rational, value_delimiter = ',')]
    thresholds: Vec<Rational>,
    /// Circuit signs, comma separated.
    #[arg(long, global = true, value_parser = sign, value_delimiter = ',', allow_hyphen_values = true)]
    signs: Vec<Sign>,
    /// Circuit length or random dimension.
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Arrow density of the random preset.
    #[arg(long, global = true, default_value_t = 0.5)]
    density: f64,
    /// Draw the random preset's `a` below its injectivity threshold.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    below_a0: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check a network against the model's constraints.
    Validate,
    /// Complexity trace C(t).
    Complexity {
        /// Also write the final generation's atoms.
        #[arg(long)]
        dump_atoms: bool,
    },
    /// Underlying digraph, head-independent sets, 2-loops, splits.
    Structure {
        /// Measure degeneracies and driving multiplicities up to --t-max.
        #[arg(long)]
        dynamic: bool,
    },
    /// Trace against every applicable complexity bound.
    Bounds,
    /// Stabilization, successor map and exact periodic orbits.
    Attractor {
        /// Also simulate the orbit of this point.
        #[arg(long, value_parser = rational, value_delimiter = ',')]
        x0: Option<Vec<Rational>>,
    },
    /// Self-inhibitor rotation number.
    Rotation {
        #[arg(long, value_parser = rational, default_value = "0")]
        x0: Rational,
    },
    /// One trace summary per (a, T) cell of a preset.
    Sweep {
        #[arg(long = "a-values", value_parser = rational, value_delimiter = ',', required = true)]
        a_values: Vec<Rational>,
        #[arg(long = "t-values", value_parser = rational, value_delimiter = ',', required = true)]
        t_values: Vec<Rational>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.common;
    let args = PresetArgs {
        a: c.a,
        thresholds: c.thresholds,
        signs: c.signs,
        d: c.d,
        random: RandomParams {
            d: c.d.unwrap_or(RandomParams::default().d),
            density: c.density,
            seed: c.seed,
            below_a0: c.below_a0,
        },
    };
    let source = match (c.preset, c.network) {
        (_, Some(path)) => Source::File(path),
        (Some(name), None) => Source::Preset { name, args },
        (None, None) => {
            eprintln!("error: give --preset <name> or --network <file>");
            return ExitCode::from(Status::Failure.code() as u8);
        }
    };
    let preset_name = match &source {
        Source::Preset { name, .. } => Some(name.clone()),
        Source::File(_) => None,
    };
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Complexity { dump_atoms } => Command::Complexity { dump_atoms },
        Cmd::Structure { dynamic } => Command::Structure { dynamic },
        Cmd::Bounds => Command::Bounds,
        Cmd::Attractor { x0 } => Command::Attractor { x0 },
        Cmd::Rotation { x0 } => Command::Rotation { x0 },
        Cmd::Sweep { a_values, t_values } => match preset_name {
            Some(preset) => Command::Sweep { preset, a_values, t_values },
            None => {
                eprintln!("error: sweep needs --preset");
                return ExitCode::from(Status::Failure.code() as u8);
            }
        },
    };
    let config = RunConfig {
        source,
        t_max: c.t_max,
        numeric: match c.numeric {
            NumericArg::Rational => Numeric::Rational,
            NumericArg::Float => Numeric::Float { epsilon: c.epsilon },
        },
        mode: match c.mode {
            ModeArg::ItineraryExact => EngineMode::ItineraryExact,
            ModeArg::InjectiveFast => EngineMode::InjectiveFast,
        },
        out: c.out,
        max_atoms: c.max_atoms,
        max_seconds: c.max_seconds,
    };
    match run(&config, &command) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(outcome.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
