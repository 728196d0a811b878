use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod certify;
mod cmd;
mod oracle;
mod suite;

#[derive(Parser, Debug)]
#[command(name = "treespace", version, about = "Exact norms, dual norms and certified constructions on tree spaces")]
pub struct Cli {
    /// Space tag: T, TINF, M, CHAINS, SINGLETONS, ALL or LAMBDA.
    #[arg(long, global = true, default_value = "T")]
    pub space: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized suites; deterministic commands ignore it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Re-check every certificate with independent code.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Norm of a vector with an attaining family member.
    Norm {
        #[arg(long)]
        vector: PathBuf,
    },
    /// Dual norm of a functional with an attaining signed antichain.
    DualNorm {
        #[arg(long)]
        functional: PathBuf,
    },
    /// Supremum of a functional over BX, BPLUS, SIGMA, SIGMA_PLUS, C or D.
    Sup {
        #[arg(long)]
        set: String,
        #[arg(long)]
        functional: PathBuf,
    },
    /// Extreme point, point of continuity and set memberships of a vector.
    Classify {
        #[arg(long)]
        vector: PathBuf,
    },
    /// The renormed value together with the original norm.
    Gauge {
        #[arg(long)]
        vector: PathBuf,
    },
    /// Signs keeping every row sum within 2^k.
    Balance {
        #[arg(long)]
        rows: PathBuf,
    },
    /// y in the positive ball and the slice with ‖x + y‖ = 2.
    Daugavet {
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        slice: PathBuf,
    },
    /// One point per positive slice, all summing to n along a chain.
    DefySlices {
        #[arg(long)]
        slices: PathBuf,
    },
    /// One point per neighbourhood of SIGMA, with signs summing to n.
    DefyPibase {
        #[arg(long)]
        nbhds: PathBuf,
    },
    /// y strongly exposed in a slice of BX and θ with ‖x + θy‖ = 2.
    Adp {
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        slice: PathBuf,
    },
    /// Positive slice defiance with points orthogonal to x.
    OmegaWitness {
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        slices: PathBuf,
    },
    /// Points of the slices of C whose convex combinations stay far from x.
    CWitness {
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        slices: PathBuf,
    },
    /// A point of continuity of BX small on every functional.
    PcApprox {
        #[arg(long)]
        functionals: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// A point of continuity of BX inside a weak neighbourhood.
    PcNear {
        #[arg(long)]
        nbhd: PathBuf,
    },
    /// Finitely branching subtree carrying all but ε of a functional on T∞.
    ReduceInfty {
        #[arg(long)]
        functional: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// A basic open set of B_{X_T∞} inside a weak neighbourhood.
    PibaseInfty {
        #[arg(long)]
        nbhd: PathBuf,
    },
    /// Averaged D-combinations around 0 and their norm r(n, k).
    ScdZero {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value = "argmax")]
        selector: String,
    },
    /// max over θ of ‖½(e_m + e_n) + θy‖ against the 3/2 + 2ε bound.
    SuperAdp {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// Randomized property suites against brute-force oracles.
    Suite {
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cmd::run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", out.json),
                Format::Text => print!("{}", out.text),
            }
            if out.failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cmd::exit_code(&e))
        }
    }
}
