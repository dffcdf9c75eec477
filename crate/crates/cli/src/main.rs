mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

/// Exact computations for rational forms of compact Lie algebra representations.
///
/// Weights are comma-separated fundamental-weight coordinates in Bourbaki
/// order, so `--type A --rank 3 --weight 0,1,0` is the second fundamental
/// weight of A3. Simple-root indices on the command line are 1-based.
#[derive(Parser, Debug)]
#[command(name = "qforma", version)]
pub struct Cli {
    /// Seed for randomized subroutines (sampled Jacobi checks, commutant spin-up).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Root system data.
    Rootsys {
        #[command(subcommand)]
        cmd: RootsysCmd,
    },
    /// Chevalley basis checks and export.
    Chevalley {
        #[command(subcommand)]
        cmd: ChevalleyCmd,
    },
    /// Irreducible highest-weight modules.
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// Q-form verdicts and commutants.
    Rationality {
        #[command(subcommand)]
        cmd: RationalityCmd,
    },
    /// The obstruction classification over simple types.
    Classify {
        #[command(subcommand)]
        cmd: ClassifyCmd,
    },
    /// Quaternion algebras over Q.
    Quat {
        #[command(subcommand)]
        cmd: QuatCmd,
    },
    /// Worked examples.
    Demo {
        #[command(subcommand)]
        cmd: DemoCmd,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TypeArgs {
    /// Cartan type letter (A through G).
    #[arg(long = "type")]
    pub letter: String,
    #[arg(long)]
    pub rank: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    /// Highest weight in fundamental coordinates, e.g. `0,1,0`.
    #[arg(long)]
    pub weight: String,
    /// Largest module dimension to build (default: QFORMA_DIM_CAP or 200).
    #[arg(long)]
    pub dim_cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum RootsysCmd {
    Show(TypeArgs),
}

#[derive(Subcommand, Debug)]
pub enum ChevalleyCmd {
    /// Jacobi identity and the N = ±(p+1) pattern.
    Verify {
        #[command(flatten)]
        ty: TypeArgs,
        /// Check every basis triple instead of a seeded sample.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Structure constants as `alpha beta N` rows (0-based root indices).
    Export(TypeArgs),
}

#[derive(Subcommand, Debug)]
pub enum RepCmd {
    Build {
        #[command(flatten)]
        module: ModuleArgs,
        /// Include the E_i and F_i matrices.
        #[arg(long)]
        emit: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum RationalityCmd {
    /// Decide whether the real module has a Q-form for the chosen Q-form of the algebra.
    Check {
        #[command(flatten)]
        module: ModuleArgs,
        /// `standard` or `twisted:τ` with τ a 1-based simple root index.
        #[arg(long, default_value = "standard")]
        form: String,
    },
    /// Weight-only criteria: self-duality, coefficient sum, root lattice.
    Weight {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        weight: String,
    },
    /// Commutant of the module viewed as a rational representation.
    Commutant {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value = "standard")]
        form: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ClassifyCmd {
    Table {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// so(n) and su(n) rows with the predicted residues.
    Relabel {
        #[arg(long, default_value_t = 17)]
        max_so: usize,
        #[arg(long, default_value_t = 9)]
        max_su: usize,
    },
    /// B2 ⊕ B5 with spin weights on both factors.
    DirectSum,
}

#[derive(Subcommand, Debug)]
pub enum QuatCmd {
    /// Places where (a, b)_Q ramifies, with every tested Hilbert symbol.
    Ramify {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum DemoCmd {
    /// A3 with highest weight ω2 under the standard and the twisted Q-form.
    Badgq,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            eprintln!("run `qforma --help` for usage");
            ExitCode::from(1)
        }
        Err(CliError::Refusal(m)) => {
            eprintln!("refused: {m}");
            ExitCode::from(2)
        }
    }
}
