use std::path::PathBuf;

use chialvo_core::table::Format;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Fixed points, bifurcations, Misiurewicz parameters and chaos scans for
/// the Chialvo neuron map.
#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[command(name = "chialvo", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Global {
    /// Output file. Defaults to `<subcommand>.<format>` inside
    /// $CHIALVO_OUT_DIR, or the working directory if that is unset.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    pub format: OutFormat,
    /// Seed for randomly drawn initial conditions.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Evaluate scans on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Flip,
    Fold,
}

#[derive(Debug, Clone, Copy, Args, Serialize, Deserialize)]
pub struct Point {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub k: f64,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// All fixed points with multipliers and stability.
    FixedPoints(Point),
    /// The invariant interval carrying the nontrivial dynamics.
    Core(Point),
    /// Period-doubling point for fixed k.
    Flip {
        #[arg(long, default_value_t = 0.0)]
        k: f64,
    },
    /// Saddle-node points in r for fixed k (requires k < 3 - 2√2).
    Fold {
        #[arg(long, default_value_t = 0.0)]
        k: f64,
    },
    /// Saddle-node point in k for fixed r.
    FoldK {
        #[arg(long)]
        r: f64,
    },
    /// Locate a flip or fold in r on a bracket without closed forms.
    BifurcateNumeric {
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        #[arg(long)]
        r_lo: f64,
        #[arg(long)]
        r_hi: f64,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Misiurewicz parameter r* where f³(c) lands on the fixed point above c.
    Misiurewicz {
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        /// Bracket for r*; scanned from [2, 3.2] when omitted.
        #[arg(long, requires = "r_hi")]
        r_lo: Option<f64>,
        #[arg(long, requires = "r_lo")]
        r_hi: Option<f64>,
    },
    /// r*, Γ and their ingredients along k.
    GammaTable {
        #[arg(long, default_value_t = 0.58)]
        k_max: f64,
        #[arg(long, default_value_t = 0.001, value_parser = positive)]
        k_step: f64,
    },
    /// The chaos condition f²(c) < f³(c) < c < f(c) on an (r, k) grid.
    ChaosScan {
        #[arg(long, default_value_t = 2.0)]
        r_min: f64,
        #[arg(long, default_value_t = 14.0)]
        r_max: f64,
        #[arg(long, default_value_t = 0.025, value_parser = positive)]
        r_step: f64,
        #[arg(long, default_value_t = 0.0)]
        k_min: f64,
        #[arg(long, default_value_t = 0.35)]
        k_max: f64,
        #[arg(long, default_value_t = 0.002, value_parser = positive)]
        k_step: f64,
    },
    /// Kneading sequence, or the itinerary of --x0 when given.
    Kneading {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long)]
        x0: Option<f64>,
    },
    /// Attractor reached by the critical orbit.
    Attractor {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 64)]
        max_period: usize,
        #[arg(long, default_value_t = 100_000)]
        n_iter: usize,
    },
    /// Lyapunov exponent of one orbit, or of --samples random orbits drawn
    /// from the dynamical core.
    Lyapunov {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 2.0)]
        x0: f64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1_000)]
        transient: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Plain Birkhoff average without cycle locking.
        #[arg(long)]
        raw: bool,
    },
    /// Orbit histogram over the dynamical core.
    Histogram {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 2.3)]
        x0: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        bins: usize,
    },
    /// Bifurcation diagram in r (with --k) or in k (with --r).
    Bifdiag(BifdiagArgs),
    /// Cobweb segments for external plotting.
    Cobweb {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 2.0)]
        x0: f64,
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
    /// Trajectory of the two-dimensional model.
    Simulate2d {
        #[arg(long, default_value_t = 0.876)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 0.28)]
        c: f64,
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        #[arg(long, default_value_t = 5.0)]
        x0: f64,
        #[arg(long, default_value_t = 3.0)]
        y0: f64,
        #[arg(long, default_value_t = 80)]
        n: usize,
    },
    /// Voltage trace of the reduced map showing mixed-mode oscillations.
    Mmo {
        #[arg(long, default_value_t = 2.45)]
        r: f64,
        #[arg(long, default_value_t = 0.2)]
        k: f64,
        #[arg(long, default_value_t = 2.25)]
        x0: f64,
        #[arg(long, default_value_t = 300)]
        n: usize,
    },
    /// Re-run the command recorded in a manifest.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BifdiagArgs {
    /// Fixed r; sweeps k.
    #[arg(long, conflicts_with = "k", required_unless_present = "k")]
    pub r: Option<f64>,
    /// Fixed k; sweeps r.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 1.5)]
    pub r_min: f64,
    #[arg(long, default_value_t = 3.2)]
    pub r_max: f64,
    #[arg(long, default_value_t = 0.001, value_parser = positive)]
    pub r_step: f64,
    #[arg(long, default_value_t = 0.0)]
    pub k_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k_max: f64,
    #[arg(long, default_value_t = 0.001, value_parser = positive)]
    pub k_step: f64,
    #[arg(long, default_value_t = 1_000)]
    pub transient: usize,
    #[arg(long, default_value_t = 200)]
    pub record: usize,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a positive number, got {s}"))
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FixedPoints(_) => "fixed-points",
            Command::Core(_) => "core",
            Command::Flip { .. } => "flip",
            Command::Fold { .. } => "fold",
            Command::FoldK { .. } => "fold-k",
            Command::BifurcateNumeric { .. } => "bifurcate-numeric",
            Command::Misiurewicz { .. } => "misiurewicz",
            Command::GammaTable { .. } => "gamma-table",
            Command::ChaosScan { .. } => "chaos-scan",
            Command::Kneading { .. } => "kneading",
            Command::Attractor { .. } => "attractor",
            Command::Lyapunov { .. } => "lyapunov",
            Command::Histogram { .. } => "histogram",
            Command::Bifdiag(_) => "bifdiag",
            Command::Cobweb { .. } => "cobweb",
            Command::Simulate2d { .. } => "simulate2d",
            Command::Mmo { .. } => "mmo",
            Command::Replay { .. } => "replay",
        }
    }
}
