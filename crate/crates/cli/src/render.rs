//! Plain-text reports. Coefficients are chopped to zero below ε and printed
//! with a fixed number of digits so repeated runs give identical bytes.

use std::fmt::Write;

use puiseux::expansion::{Branch, BranchSet};
use puiseux::numeric::{format_complex, Coeff, Ctx};
use puiseux::triple::{Structure, TripleReport};

/// Significant digits in text output.
pub const TEXT_DIGITS: usize = 16;

fn coeff(ctx: &Ctx, c: &Coeff) -> String {
    format_complex(&ctx.chop(c), TEXT_DIGITS)
}

fn power(e: u32) -> String {
    match e {
        0 => String::new(),
        1 => "T".to_string(),
        _ => format!("T^{e}"),
    }
}

/// Σ c_k T^k as "c1*T^2 - c2*T^5 + …".
pub fn series(ctx: &Ctx, terms: &[(Coeff, u32)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (n, (c, e)) in terms.iter().enumerate() {
        let body = coeff(ctx, c);
        let (neg, mag) = match body.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, body),
        };
        let t = power(*e);
        let piece = match (mag.as_str(), t.is_empty()) {
            ("1", false) => t,
            (_, true) => mag,
            _ => format!("{mag}*{t}"),
        };
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&piece);
    }
    out
}

fn tangent(ctx: &Ctx, b: &Branch) -> String {
    let (c, d) = &b.tangent;
    if ctx.is_zero(c) {
        return "x = 0".to_string();
    }
    let slope = ctx.chop(&d.div(c));
    match coeff(ctx, &slope).as_str() {
        "0" => "y = 0".to_string(),
        "1" => "y = x".to_string(),
        "-1" => "y = -x".to_string(),
        s => format!("y = {s}*x"),
    }
}

fn branch(out: &mut String, ctx: &Ctx, k: usize, n: usize, b: &Branch) {
    let _ = write!(
        out,
        "branch {k} of {n}: multiplicity {}, r = {}",
        b.branch_mult, b.r
    );
    if b.repetition > 1 {
        let _ = write!(out, ", counted {} times", b.repetition);
    }
    out.push('\n');
    if b.vertical {
        out.push_str("  x = 0, y = T (vertical)\n");
        return;
    }
    let _ = writeln!(out, "  x = {}", power(b.r));
    let _ = writeln!(out, "  y = {}", series(ctx, &b.terms));
    let _ = writeln!(out, "  tangent: {}", tangent(ctx, b));
    if b.exact {
        out.push_str("  exact: the series terminates\n");
    } else {
        let _ = writeln!(
            out,
            "  truncated after T^{} ({})",
            b.truncation_order, b.stop
        );
    }
}

pub fn branch_set(ctx: &Ctx, point: &str, set: &BranchSet) -> String {
    let mut out = String::new();
    let n = set.branches.len();
    let _ = writeln!(
        out,
        "point {point}: multiplicity {}, {n} branch class{}",
        set.point_multiplicity,
        if n == 1 { "" } else { "es" }
    );
    for (k, b) in set.branches.iter().enumerate() {
        branch(&mut out, ctx, k + 1, n, b);
    }
    out
}

pub fn triple(ctx: &Ctx, point: &str, rep: &TripleReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "triple point {point}: {}", rep.structure);
    let labels: Vec<String> = rep.trace.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(out, "trace [{}]", labels.join(", "));
    if let Structure::ThreeBranch(s) = rep.structure {
        let _ = writeln!(out, "type {s}");
    }
    if rep.n_423_steps > 0 {
        let _ = writeln!(out, "leading C4_2_3 steps: {}", rep.n_423_steps);
    }
    let _ = writeln!(out, "normalization: {}", rep.transform);
    let _ = writeln!(out, "normal form: {}", rep.normal_form);
    out.push_str(&branch_set(ctx, "O of the normal form", &rep.branches));
    out
}
