use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

#[derive(Parser)]
#[command(
    name = "ortholog",
    version,
    about = "Skew-symmetric logarithms and geodesics of orthogonal matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Orthogonality / skewness tolerance
    #[arg(long, global = true)]
    pub tol_orth: Option<f64>,
    /// Angle clustering tolerance
    #[arg(long, global = true)]
    pub tol_cluster: Option<f64>,
    /// Snapping tolerance for angles near π
    #[arg(long, global = true)]
    pub tol_pi: Option<f64>,
    /// Reconstruction tolerance
    #[arg(long, global = true)]
    pub tol_recon: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
pub enum Command {
    /// Exponential of a skew-symmetric matrix
    Exp { a: String },
    /// SVD system of a skew-symmetric matrix
    SvdSkew { a: String },
    /// Pfaffian of an even-order skew-symmetric matrix
    Pfaffian { a: String },
    /// Canonical angle-block form of R ∈ SO(n)
    Canon { r: String },
    /// Principal logarithm of R and the structure of all of them
    Plog { r: String },
    /// Sample principal logarithms when −1 is an eigenvalue
    SampleAplog {
        r: String,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Enumerate logarithms of a generic R inside a Frobenius ball
    Logs {
        r: String,
        #[arg(long)]
        radius: f64,
    },
    /// Check that A is a logarithm of R and extract its general form
    VerifyLog { r: String, a: String },
    /// Riemannian distance between G and H
    Dist { g: String, h: String },
    /// Sample the geodesic t ↦ G·exp(tA)
    Geodesic {
        g: String,
        /// Generator A, or the end point H with --between
        a: String,
        /// Treat the second matrix as the end point and use a minimal arc
        #[arg(long)]
        between: bool,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t_max: f64,
        /// Largest denominator tried when testing for periodicity
        #[arg(long, default_value_t = 64)]
        max_den: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Component, (weak) diametrality and Grassmann signature of a pair
    ClassifyPair { g: String, h: String },
    /// Einstein constants of O(n), and the sectional curvature of span{X, Y}
    Curvature {
        n: usize,
        x: Option<String>,
        y: Option<String>,
    },
    /// Diameter of a component of O(n)
    Diameter { n: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.global) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "code": e.code(), "message": e.to_string() });
            eprintln!("{body}");
            ExitCode::from(match e {
                CliError::Lib(_) => 2,
                CliError::Io(_) | CliError::Parse(_) => 1,
            })
        }
    }
}
