//! `stickel`: Stickelberger elements, Iwasawa-algebra operations and
//! verification suites from the command line.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "stickel",
    version,
    about = "Stickelberger elements over abelian fields"
)]
pub struct Cli {
    /// Odd prime l for l-adic commands.
    #[arg(long, global = true)]
    pub ell: Option<u64>,
    /// l-adic precision M.
    #[arg(long = "prec-M", global = true, default_value_t = 16)]
    pub prec_m: u32,
    /// Truncation degree N in T = gamma - 1.
    #[arg(long = "tdeg-N", global = true, default_value_t = 9)]
    pub tdeg_n: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for JSON caches (Bernoulli numbers).
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// An abelian field: conductor and generators of the kernel in (Z/fZ)^x.
#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub f: u64,
    #[arg(long = "H", value_delimiter = ',', allow_negative_numbers = true)]
    pub h: Vec<i64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stickelberger element, twist factor, twisted element and restriction check.
    Stick {
        #[command(flatten)]
        field: FieldArgs,
        /// Twist c (odd, prime to f).
        #[arg(long, allow_negative_numbers = true)]
        c: Option<i64>,
        /// Conductor of a subfield K for the restriction identity.
        #[arg(long)]
        restrict: Option<u64>,
        /// Kernel generators of K.
        #[arg(
            long = "restrict-H",
            value_delimiter = ',',
            allow_negative_numbers = true
        )]
        restrict_h: Vec<i64>,
    },
    /// Operations in the Iwasawa algebra of the cyclotomic Z_l-tower.
    Iwasawa {
        #[command(flatten)]
        field: FieldArgs,
        #[command(subcommand)]
        action: IwasawaAction,
    },
    /// Run a verification suite; exit status 0 on full pass.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ElementArgs {
    /// Twist c of the limit Stickelberger element acted on.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<i64>,
    /// Act on T = gamma - 1 instead of the Stickelberger element.
    #[arg(long)]
    pub gamma: bool,
}

#[derive(Subcommand, Debug)]
pub enum IwasawaAction {
    Mirror {
        #[command(flatten)]
        element: ElementArgs,
        /// Check mirror(mirror(x)) = x and multiplicativity.
        #[arg(long)]
        selftest: bool,
    },
    Twist {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long, allow_negative_numbers = true)]
        i: i64,
    },
    Symmetrize {
        #[command(flatten)]
        element: ElementArgs,
    },
    Reduce {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        n: u32,
    },
    Index {
        /// Twists c, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        c: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Tate twist index.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        i: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// chi(sigma_F) = B_{1, conj chi} over imaginary subfields of Q(zeta_f), f <= fmax.
    Bernoulli {
        #[arg(long, default_value_t = 60)]
        fmax: u64,
    },
    /// Kummer congruences for one prime (--ell) or all odd primes below 100.
    Kummer,
    /// Relative class number of Q(zeta_p); all p <= 67 without --p.
    Hminus {
        #[arg(long)]
        p: Option<u64>,
    },
    /// Eigenspace valuations of the twisted Stickelberger element of Q(zeta_l).
    Consistency {
        #[arg(long, allow_negative_numbers = true)]
        c: Option<i64>,
    },
    /// Degree-zero invariant on seeded random rationals.
    DegreeZero {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Restriction identities for nested subfields of Q(zeta_f), f <= fmax.
    Restriction {
        #[arg(long, default_value_t = 40)]
        fmax: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.report).unwrap()),
                Format::Text => print!("{}", out.text),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
