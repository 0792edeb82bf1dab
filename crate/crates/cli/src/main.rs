//! `grossen`: class groups, unit groups, modulus characters, Groessencharacters,
//! q-expansions and the classification tables, all as JSON.

mod commands;
mod config;
mod modulus;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "grossen", version, about = "Groessencharacters and CM newforms over imaginary quadratic fields")]
struct Cli {
    /// Write JSON here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class group of Q(sqrt D).
    Classgroup {
        #[arg(short = 'd', long, allow_hyphen_values = true)]
        delta: i64,
    },
    /// Structure of (o/m)^x.
    Units(FieldModulus),
    /// Characters of (o/m)^x, optionally of a given order and compatible with u^l on units.
    Chars {
        #[command(flatten)]
        fm: FieldModulus,
        #[arg(long)]
        order: Option<u64>,
        #[arg(short = 'l', long)]
        ell: Option<u32>,
    },
    /// Build or evaluate a Groessencharacter.
    Gross {
        #[command(subcommand)]
        action: GrossAction,
    },
    /// q-expansion of the attached CM form, with Hecke checks.
    Qexp {
        #[command(flatten)]
        spec: PsiSpec,
        #[arg(short = 'B', long = "bound")]
        bound: usize,
    },
    /// Classification tables.
    Table {
        which: TableKind,
        /// When positive, also search all moduli up to this norm for order-four characters
        /// over the fields with 8 | D.
        #[arg(long, default_value_t = 0)]
        conductor_norm_bound: i64,
    },
    /// Run the acceptance criteria.
    Verify {
        what: VerifyWhat,
    },
}

#[derive(Args, Debug, Clone)]
struct FieldModulus {
    #[arg(short = 'd', long, allow_hyphen_values = true)]
    delta: i64,
    /// n, nd (n times d_E), a,b,s (HNF triple) or gen:x,y.
    #[arg(short = 'm', long)]
    modulus: String,
}

#[derive(Args, Debug, Clone)]
struct PsiSpec {
    #[command(flatten)]
    fm: FieldModulus,
    #[arg(short = 'l', long)]
    ell: u32,
    /// Exact order of the modulus character.
    #[arg(long)]
    order: Option<u64>,
    /// Which admissible modulus character to use, in enumeration order.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Require trivial nebentypus.
    #[arg(long)]
    trivial_nebentypus: bool,
}

#[derive(Subcommand, Debug)]
enum GrossAction {
    Build(PsiSpec),
    Eval {
        #[command(flatten)]
        spec: PsiSpec,
        /// Ideal to evaluate at, in the same syntax as the modulus; repeatable.
        #[arg(long = "at", required = true)]
        at: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableKind {
    Deg2,
    Deg3,
    Quadodd,
    Quadeven,
    Quade3,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyWhat {
    All,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::Mismatch) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
