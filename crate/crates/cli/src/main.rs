mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use impact_games::{Error, Pricing, TimeGrid, DEFAULT_INTERVALS};

/// Competing position builders under linear temporary and permanent impact.
#[derive(Parser, Debug)]
#[command(name = "impact-games", version)]
struct Cli {
    /// Grid intervals on [0, 1]; even and at least 10.
    #[arg(long, global = true, env = "IMPACT_GAMES_GRID", default_value_t = DEFAULT_INTERVALS)]
    grid: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file; stdout when absent. CSV written to a file gets a
    /// `<output>.json` sidecar.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Explicit sidecar path (CSV only).
    #[arg(long, global = true)]
    sidecar: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate one closed-form strategy.
    Strategy {
        #[arg(long, value_enum)]
        family: FamilyName,
        #[command(flatten)]
        model: Model,
    },
    /// Unit trader's best response to a λ-scaled adversary.
    BestResponse {
        #[arg(long, value_enum)]
        adversary: FamilyName,
        #[command(flatten)]
        model: Model,
    },
    /// Two-trader equilibrium.
    Equilibrium {
        #[command(flatten)]
        model: Model,
    },
    /// Adversary shape against which `--a` is the best response.
    InverseB {
        #[arg(long, value_enum)]
        a: FamilyName,
        #[command(flatten)]
        model: Model,
    },
    /// Unit strategy against which `λ·(--b)` is the adversary's best response.
    InverseA {
        #[arg(long, value_enum)]
        b: FamilyName,
        #[command(flatten)]
        model: Model,
    },
    /// Two-trader equilibrium with holding risk.
    RiskEquilibrium {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value_t = 0.0)]
        xi_a: f64,
        #[arg(long, default_value_t = 0.0)]
        xi_b: f64,
    },
    /// Mean and variance of the equilibrium cost over a log-normal adversary size.
    ExpectedCost {
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 0.25)]
        sigma_ln: f64,
        #[arg(long, default_value_t = 32)]
        n_quad: usize,
        /// Also estimate by Monte Carlo with this many draws.
        #[arg(long)]
        draws: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reproduce the result tables.
    Tables {
        #[command(subcommand)]
        which: Table,
    },
}

#[derive(Subcommand, Debug)]
enum Table {
    /// Adversary's cost for each pair of beliefs.
    CostMatrix {
        #[arg(long, default_value_t = 25.0)]
        kappa: f64,
        #[arg(long, default_value_t = 5.0)]
        lambda: f64,
    },
    /// Equilibrium cost when κ is shifted by `--shrink`.
    Misestimation {
        #[arg(long, default_value_t = 5.0)]
        lambda: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.5, 1.0, 5.0, 25.0, 100.0])]
        kappa: Vec<f64>,
        #[arg(long, default_value_t = 0.75)]
        shrink: f64,
        /// Price the shifted strategy at the original κ.
        #[arg(long)]
        fixed_truth: bool,
        #[arg(long, value_enum, default_value_t = PricingArg::UnitAdversary)]
        pricing: PricingArg,
    },
    /// Best response vs linear trading against an eager adversary.
    TempPerm {
        #[arg(long, default_value_t = 4.0)]
        sigma: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 3.0, 10.0, 25.0])]
        lambda: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.25, 2.5, 10.0, 25.0])]
        kappa: Vec<f64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PricingArg {
    Scaled,
    UnitAdversary,
}

impl From<PricingArg> for Pricing {
    fn from(p: PricingArg) -> Self {
        match p {
            PricingArg::Scaled => Pricing::Scaled,
            PricingArg::UnitAdversary => Pricing::UnitAdversary,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyName {
    RiskNeutral,
    RiskAverse,
    Eager,
    Parabolic,
    AlmgrenChriss,
    TwoTraderA,
    TwoTraderB,
    MultiTrader,
    MultiLimit,
    #[value(name = "case1b-a")]
    Case1bA,
    #[value(name = "case1b-b")]
    Case1bB,
    BrRiskAverse,
    BrRiskNeutral,
    BrEager,
}

/// Market parameters plus the shape parameters some families need.
#[derive(Args, Debug, Clone, Copy)]
pub struct Model {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Shape of the sinh and exponential families.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Root of the parabolic family.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Number of traders for `multi-trader`.
    #[arg(long, default_value_t = 2)]
    pub traders: u32,
}

#[derive(Debug)]
pub enum Failure {
    Model(Error),
    Io(std::io::Error),
    Csv(csv::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Csv(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Model(Error::Tolerance { .. } | Error::Singular(_)) => 3,
            Failure::Model(_) => 2,
            Failure::Io(_) | Failure::Csv(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Model(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o: {e}"),
            Failure::Csv(e) => write!(f, "csv: {e}"),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let grid = TimeGrid::new(cli.grid)?;
    let (report, check) = commands::dispatch(cli.command, &grid)?;
    let out = cli.output.as_deref();
    match cli.format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&report.to_json()).expect("json");
            text.push('\n');
            table::write_to(out, text.as_bytes())?;
        }
        Format::Csv => {
            table::write_to(out, &report.to_csv()?)?;
            let sidecar = cli.sidecar.clone().or_else(|| {
                out.map(|p| {
                    let mut s = p.as_os_str().to_owned();
                    s.push(".json");
                    PathBuf::from(s)
                })
            });
            if let Some(path) = sidecar {
                let mut text = serde_json::to_string_pretty(&report.sidecar()).expect("json");
                text.push('\n');
                std::fs::write(path, text)?;
            }
        }
    }
    // Output is kept even when the solver misses its tolerance, for diagnosis.
    check.map_err(Failure::from)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("impact-games: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
