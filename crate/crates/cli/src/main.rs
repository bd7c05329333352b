use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use puiseux::expansion::{DEFAULT_DEPTH_CAP, DEFAULT_TERMS};
use puiseux::numeric::DEFAULT_PRECISION;
use puiseux_cli::{
    cmd_branches, cmd_factored, cmd_triple, cmd_verify, parse_point, CliError, Outcome, RunConfig,
    EXIT_BAD_INPUT,
};

const AFTER_HELP: &str = "\
Polynomials use x, y, +, -, *, /, ^, parentheses, I, sqrt(...) and decimals,
e.g. \"2*y^6 + (sqrt(3)-2)/8*x^10\". Exponents of x may be fractions: x^(3/2).

JSON coefficients are decimal strings with floor(bits * log10 2) + 3
significant digits, so they read back to the same value at the same --prec.

Exit codes: 0 ok, 1 verify check failed, 2 curve not reduced,
3 bad input, 4 numerical failure, 5 not a triple point with a triple tangent.";

#[derive(Parser)]
#[command(
    name = "puiseux",
    version,
    about = "Puiseux expansions of plane curve branches"
)]
#[command(after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Working precision in bits.
    #[arg(long, global = true, env = "PUISEUX_PREC", default_value_t = DEFAULT_PRECISION)]
    prec: usize,
    /// Zero tolerance (default 2^(-prec/2)).
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Nonzero terms to keep per branch.
    #[arg(long, global = true, default_value_t = DEFAULT_TERMS)]
    terms: usize,
    /// Give up on a path after this many steps.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    /// Skip the exact squarefree check.
    #[arg(long, global = true)]
    assume_reduced: bool,
    /// Expand at "a,b" instead of the origin.
    #[arg(long, global = true, allow_hyphen_values = true)]
    point: Option<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the Newton polygon SVG here.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Also write one SVG per expansion node, named STEM-PATH-STEP.svg.
    #[arg(long, global = true)]
    svg_all: bool,
    /// Explore expansion paths in parallel.
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List every branch at the point.
    Branches {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Classify a triple point with a triple tangent.
    Triple {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Branches of a product given as "<multiplicity> <polynomial>" lines.
    Factored { file: PathBuf },
    /// Back-substitute branch JSON (text or file) into the polynomial.
    Verify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        branch_json: String,
    },
}

fn config(opts: &Opts) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        precision_bits: opts.prec,
        eps: opts.eps,
        terms: opts.terms,
        depth_cap: opts.depth_cap,
        assume_reduced: opts.assume_reduced,
        point: opts.point.as_deref().map(parse_point).transpose()?,
        json: opts.json,
        svg_path: opts.svg.clone(),
        svg_all: opts.svg_all,
        parallel: opts.parallel,
    })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = config(&cli.opts)?;
    match &cli.command {
        Command::Branches { poly } => cmd_branches(poly, &cfg),
        Command::Triple { poly } => cmd_triple(poly, &cfg),
        Command::Factored { file } => cmd_factored(file, &cfg),
        Command::Verify { poly, branch_json } => cmd_verify(poly, branch_json, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_BAD_INPUT as u8
            } else {
                0
            });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
