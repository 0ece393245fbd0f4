use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod run;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "polarbranch", version, about = "Higher order polars of generic plane branches")]
pub struct Cli {
    /// Output format; not every subcommand supports dot or svg.
    #[arg(long, global = true, value_enum, env = "POLARBRANCH_FORMAT", default_value = "text")]
    pub format: Format,
    /// Suppress the banner line of text output.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CharArg {
    /// Characteristic b0,b1,...,bh.
    #[arg(value_name = "CHAR", conflicts_with = "char")]
    pub positional: Option<String>,
    /// Characteristic b0,b1,...,bh.
    #[arg(long = "char", value_name = "CHAR")]
    pub char: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factorization of the generic k-th polar of a class.
    Predict {
        #[command(flatten)]
        char: CharArg,
        #[arg(long)]
        k: u64,
        /// Leave the branch and its semiroots out of the Eggers-Wall tree.
        #[arg(long)]
        polar_only: bool,
    },
    /// Check the prediction on explicit branches.
    Verify {
        #[command(flatten)]
        char: CharArg,
        #[arg(long)]
        k: u64,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
        /// Terms of the sampled root past b_h, in steps of e_h (default b0).
        #[arg(long)]
        trunc_extra: Option<u64>,
        /// x-truncation of the minimal polynomial.
        #[arg(long)]
        x_trunc: Option<u64>,
        /// Seeds tried in total before reporting that all were degenerate.
        #[arg(long, default_value_t = 8)]
        max_seeds: usize,
        /// Check this root instead of sampled ones, e.g. "x^(4/3)+x^2+x^(31/12)".
        #[arg(long, conflicts_with = "seeds")]
        root: Option<String>,
    },
    /// Newton diagram operations.
    Diagram {
        #[command(subcommand)]
        action: DiagramAction,
    },
    /// Continued fraction of m/n with its convergents.
    Contfrac {
        /// A ratio m/n of positive integers.
        ratio: String,
    },
    /// The two worked examples: ex1 = (12,16,31), ex2 = (10,14,15).
    Example {
        #[arg(value_parser = ["ex1", "ex2"])]
        name: String,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        polar_only: bool,
    },
}

#[derive(Debug, Args)]
pub struct DiagramInput {
    /// Elementary diagram m/n.
    #[arg(long, conflicts_with_all = ["vertices", "input"])]
    pub elementary: Option<String>,
    /// Vertices "x,y;x,y;..." from left to right.
    #[arg(long, conflicts_with = "input")]
    pub vertices: Option<String>,
    /// JSON file holding {"vertices":...} or {"offset":...,"parts":...,"long":...}.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DiagramAction {
    /// Symbolic k-th derivative.
    Derive {
        #[command(flatten)]
        diagram: DiagramInput,
        #[arg(long)]
        k: u64,
        /// Use the lattice definition instead of the closed form.
        #[arg(long)]
        lattice: bool,
    },
    /// Canonical decomposition into elementary diagrams.
    Canonical {
        #[command(flatten)]
        diagram: DiagramInput,
        /// Split every part into primitive copies.
        #[arg(long)]
        long: bool,
    },
    /// Newton diagram of a finite support "i,j;i,j;...".
    Hull { points: String },
    /// Minkowski sum of two diagrams given by vertices.
    Sum { a: String, b: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let format = cli.format;
    match run::run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.body).map_err(anyhow::Error::from),
                None => {
                    print!("{}", out.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                run::report_error(format, &e);
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            run::report_error(format, &e);
            ExitCode::from(1)
        }
    }
}
