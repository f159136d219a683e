use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod input;

#[derive(Parser, Debug)]
#[command(name = "nazeta", version, about = "Parabolic combinatorics, lattice stability, cone integrals and rank-2 zeta numerics")]
pub struct Cli {
    /// Seed for randomized verifications.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random trials.
    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Decimal digits for numeric verbs.
    #[arg(long, global = true, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=15))]
    pub precision: u32,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Simple roots, fundamental weights, coroots, rho and standard parabolics of SL_r.
    Roots {
        #[arg(long)]
        r: usize,
    },
    /// Random checks of the chamber identities; counterexamples are printed as JSON lines.
    VerifyLemma {
        #[arg(long)]
        r: usize,
    },
    /// Both sides of the bridge between chamber conditions and the polygon order.
    Bridge {
        /// Polygon file (one line of r+1 rationals); stdin if omitted.
        #[arg(long)]
        polygon: Option<PathBuf>,
        /// Block sizes, e.g. 1,2,1; every standard parabolic if omitted.
        #[arg(long)]
        parabolic: Option<String>,
        /// A single point H of the apartment; random points if omitted.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Cone matrix, its inverse and the indicator cone forms.
    ConeForms {
        #[arg(long)]
        polygon: Option<PathBuf>,
        #[arg(long)]
        parabolic: String,
    },
    /// Harder-Narasimhan filtration of a lattice given by its Gram matrix.
    Hn {
        /// Lattice file; stdin if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Both sides of the Fundamental Relation for a volume-1 lattice of rank <= 3.
    Fundrel {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        polygon: PathBuf,
    },
    /// Regularized integral of an exponential polynomial over a cone.
    ConeInt {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Truncated Eisenstein period over the modular fundamental domain.
    Period {
        /// Complex s, e.g. 0.75+0.3i.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long = "T", default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_enum, default_value_t = PeriodMethod::Analytic)]
        method: PeriodMethod,
    },
    /// Rank-2 zeta function at a single point.
    Zeta2 {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        im: f64,
        #[arg(long, value_enum, default_value_t = ZetaMethod::Quadrature)]
        method: ZetaMethod,
    },
    /// Scan of the rank-2 zeta function on the critical line.
    Zeta2Scan {
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 30.0)]
        t1: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Write the samples t, Re, Im to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PeriodMethod {
    /// Integral of the analytically truncated series over the fundamental domain.
    Analytic,
    /// Integral of the series over the part of the fundamental domain below T.
    Geometric,
    /// Closed form through the constant term.
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ZetaMethod {
    Quadrature,
    Closed,
}

/// Outcome of a verb that ran to completion.
pub enum Status {
    Ok,
    Counterexample,
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
    let out: Box<dyn Write> = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match commands::run(&cli, out) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Counterexample) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
