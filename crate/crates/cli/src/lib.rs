//! Library half of the `puiseux` command: configuration, the four
//! subcommands, and their text/JSON renderings. `main.rs` only parses
//! arguments and turns an [`Outcome`] or [`CliError`] into a process exit.

pub mod commands;
pub mod json;
pub mod render;

use std::path::PathBuf;
use std::sync::Arc;

use puiseux::expansion::{ExpandOptions, ExpansionError, DEFAULT_DEPTH_CAP, DEFAULT_TERMS};
use puiseux::numeric::{Coeff, Ctx, DEFAULT_PRECISION};
use puiseux::poly::{parse_poly_full, rat_int, ParseError};
use puiseux::triple::TripleError;

pub use commands::{cmd_branches, cmd_factored, cmd_triple, cmd_verify};

pub const EXIT_OK: i32 = 0;
/// verify: the residual order is too low.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_NOT_REDUCED: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_NOT_TRIPLE: i32 = 5;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision_bits: usize,
    /// Zero tolerance; `None` means 2^(-bits/2).
    pub eps: Option<f64>,
    pub terms: usize,
    pub depth_cap: usize,
    pub assume_reduced: bool,
    /// Expansion point as two coefficient expressions.
    pub point: Option<(String, String)>,
    pub json: bool,
    pub svg_path: Option<PathBuf>,
    pub svg_all: bool,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: DEFAULT_PRECISION,
            eps: None,
            terms: DEFAULT_TERMS,
            depth_cap: DEFAULT_DEPTH_CAP,
            assume_reduced: false,
            point: None,
            json: false,
            svg_path: None,
            svg_all: false,
            parallel: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision_bits < 32 {
            return Err(CliError::input("--prec must be at least 32 bits"));
        }
        if let Some(e) = self.eps {
            if !(e > 0.0 && e < 1.0) {
                return Err(CliError::input("--eps must lie strictly between 0 and 1"));
            }
        }
        if self.terms == 0 {
            return Err(CliError::input("--terms must be at least 1"));
        }
        if self.depth_cap == 0 {
            return Err(CliError::input("--depth-cap must be at least 1"));
        }
        if self.svg_all && self.svg_path.is_none() {
            return Err(CliError::input(
                "--svg-all needs --svg PATH as the base name",
            ));
        }
        Ok(())
    }

    pub fn ctx(&self) -> Arc<Ctx> {
        Arc::new(match self.eps {
            Some(e) => Ctx::with_eps(self.precision_bits, e),
            None => Ctx::new(self.precision_bits),
        })
    }

    pub fn expand_options(&self) -> ExpandOptions {
        ExpandOptions {
            terms: self.terms,
            depth_cap: self.depth_cap,
            parallel: self.parallel,
            assume_reduced: self.assume_reduced,
        }
    }

    /// Decimal digits that round-trip a float at the run precision.
    pub fn digits(&self) -> usize {
        self.precision_bits * 30103 / 100000 + 3
    }

    /// The expansion point, (0, 0) unless given.
    pub fn point(&self, ctx: &Arc<Ctx>) -> Result<(Coeff, Coeff), CliError> {
        let Some((a, b)) = &self.point else {
            return Ok((ctx.zero(), ctx.zero()));
        };
        Ok((constant(a, ctx)?, constant(b, ctx)?))
    }

    pub fn at_origin(&self) -> bool {
        self.point.is_none()
    }
}

fn constant(text: &str, ctx: &Arc<Ctx>) -> Result<Coeff, CliError> {
    let p = parse_poly_full(text, ctx).map_err(|e| CliError::parse(text, &e))?;
    let p = p.poly;
    if p.terms().any(|((i, j), _)| *j != 0 || *i != rat_int(0)) {
        return Err(CliError::input(format!(
            "point coordinate '{text}' is not a constant"
        )));
    }
    Ok(p.at_origin())
}

/// Split "a,b" into its two coordinates.
pub fn parse_point(text: &str) -> Result<(String, String), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(CliError::input(format!(
            "point must look like \"a,b\", got \"{text}\""
        ))),
    }
}

/// Text written to stdout plus the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            code: EXIT_OK,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(EXIT_BAD_INPUT, message)
    }

    pub fn parse(text: &str, e: &ParseError) -> Self {
        let caret = format!("{}^", " ".repeat(e.pos));
        Self::input(format!("parse error: {e}\n  {text}\n  {caret}"))
    }
}

impl From<ExpansionError> for CliError {
    fn from(e: ExpansionError) -> Self {
        let code = match &e {
            ExpansionError::NotReduced | ExpansionError::NotExact => EXIT_NOT_REDUCED,
            ExpansionError::NotOnCurve => EXIT_BAD_INPUT,
            ExpansionError::Roots(_)
            | ExpansionError::Polygon(_)
            | ExpansionError::DepthCapReached { .. }
            | ExpansionError::Invariant(_) => EXIT_NUMERIC,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<TripleError> for CliError {
    fn from(e: TripleError) -> Self {
        let code = match &e {
            TripleError::NotTriple(_) | TripleError::NotTripleTangent => EXIT_NOT_TRIPLE,
            TripleError::NonPolynomial => EXIT_BAD_INPUT,
            TripleError::NonReducedSuspected(_) => EXIT_NOT_REDUCED,
            TripleError::Expansion(inner) => return inner.clone().into(),
            TripleError::UnclassifiableShape(_)
            | TripleError::NoSuchExponent
            | TripleError::NotThreeBranch(_)
            | TripleError::UnexpectedTrace(_) => EXIT_NUMERIC,
        };
        CliError::new(code, e.to_string())
    }
}
