use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use puiseux::expansion::{branches_at_origin, branches_factored, BranchSet};
use puiseux::numeric::{format_complex, Coeff, Ctx};
use puiseux::poly::{parse_poly_full, ExactPoly, PuiseuxPoly, TOrder};
use puiseux::polygon::build_polygon;
use puiseux::svg::polygon_svg;
use puiseux::triple::classify_triple_point;

use crate::json::{records_from_str, to_pretty, BranchRecordJson, BranchesJson, TripleJson};
use crate::{render, CliError, Outcome, RunConfig, EXIT_CHECK_FAILED, EXIT_OK};

/// Exact branches must vanish through this power of T.
pub const EXACT_CHECK_ORDER: usize = 200;
/// Extra T-powers computed past the last term for truncated branches.
pub const VERIFY_MARGIN: usize = 16;

fn parse(
    text: &str,
    ctx: &std::sync::Arc<Ctx>,
) -> Result<(PuiseuxPoly, Option<ExactPoly>), CliError> {
    let p = parse_poly_full(text, ctx).map_err(|e| CliError::parse(text, &e))?;
    Ok((p.poly, p.exact))
}

fn point_label(config: &RunConfig) -> String {
    match &config.point {
        Some((a, b)) => format!("({a}, {b})"),
        None => "(0, 0)".to_string(),
    }
}

/// f moved so the configured point sits at the origin.
fn moved(
    f: &PuiseuxPoly,
    config: &RunConfig,
    point: &(Coeff, Coeff),
) -> Result<PuiseuxPoly, CliError> {
    if config.at_origin() {
        return Ok(f.clone());
    }
    if !f.has_integer_exponents() {
        return Err(CliError::input(
            "--point needs a polynomial with integer exponents",
        ));
    }
    Ok(f.translate(&point.0, &point.1))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn svg_node_path(base: &Path, path_idx: usize, step: usize) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "polygon".to_string());
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "svg".to_string());
    base.with_file_name(format!("{stem}-{path_idx}-{step}.{ext}"))
}

/// Level-0 polygon at `base`; with `all`, one more file per expansion node.
fn write_svgs(base: &Path, all: bool, f: &PuiseuxPoly, set: &BranchSet) -> Result<(), CliError> {
    let poly = build_polygon(f).ok();
    write_file(base, &polygon_svg(f, poly.as_ref(), "level 0"))?;
    if !all {
        return Ok(());
    }
    // a node is identified by the (exponent, coefficient) choices leading to it
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    for (i, path) in set.paths.iter().enumerate() {
        for k in 1..path.steps.len() {
            let key: Vec<String> = path.steps[..k]
                .iter()
                .map(|s| format!("{} {}", s.r_n, format_complex(&s.c_n, 20)))
                .collect();
            if !seen.insert(key) {
                continue;
            }
            let f_n = &path.steps[k].f_n;
            let title = format!("path {} step {k}", i + 1);
            let svg = polygon_svg(f_n, build_polygon(f_n).ok().as_ref(), &title);
            write_file(&svg_node_path(base, i + 1, k), &svg)?;
        }
    }
    Ok(())
}

/// Branches of f = 0 at the configured point.
pub fn cmd_branches(poly_text: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let ctx = config.ctx();
    let (f, exact) = parse(poly_text, &ctx)?;
    let point = config.point(&ctx)?;
    let f = moved(&f, config, &point)?;
    let set = branches_at_origin(&f, exact.as_ref(), &config.expand_options())?;
    if let Some(base) = &config.svg_path {
        write_svgs(base, config.svg_all, &f, &set)?;
    }
    let stdout = if config.json {
        to_pretty(&BranchesJson::new(&ctx, &point, &set, config.digits()))
    } else {
        render::branch_set(&ctx, &point_label(config), &set)
    };
    Ok(Outcome::ok(stdout))
}

/// Structure of a triple point with a triple tangent.
pub fn cmd_triple(poly_text: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let ctx = config.ctx();
    let (f, exact) = parse(poly_text, &ctx)?;
    let point = config.point(&ctx)?;
    let rep = classify_triple_point(
        &f,
        exact.as_ref(),
        (&point.0, &point.1),
        &config.expand_options(),
    )?;
    if let Some(base) = &config.svg_path {
        write_svgs(base, config.svg_all, &rep.normal_form, &rep.branches)?;
    }
    let stdout = if config.json {
        to_pretty(&TripleJson::new(&ctx, &rep, config.digits()))
    } else {
        render::triple(&ctx, &point_label(config), &rep)
    };
    Ok(Outcome::ok(stdout))
}

/// Parse "<multiplicity> <polynomial>" lines; blank lines and '#' comments are skipped.
pub fn parse_factor_lines(
    text: &str,
    ctx: &std::sync::Arc<Ctx>,
) -> Result<Vec<(PuiseuxPoly, Option<ExactPoly>, u32)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |msg: String| CliError::input(format!("line {}: {msg}", n + 1));
        let (mult, poly) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| at("expected \"<multiplicity> <polynomial>\"".to_string()))?;
        let mult: u32 = mult
            .parse()
            .ok()
            .filter(|&m| m >= 1)
            .ok_or_else(|| at(format!("'{mult}' is not a positive multiplicity")))?;
        let poly = poly.trim();
        let parsed = parse_poly_full(poly, ctx).map_err(|e| {
            let inner = CliError::parse(poly, &e);
            at(inner.message)
        })?;
        out.push((parsed.poly, parsed.exact, mult));
    }
    if out.is_empty() {
        return Err(CliError::input("factor file lists no factors"));
    }
    Ok(out)
}

/// Branches of Π f_ℓ^{n_ℓ} from a factor file.
pub fn cmd_factored(spec_file: &Path, config: &RunConfig) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(spec_file)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", spec_file.display())))?;
    cmd_factored_text(&text, config)
}

pub fn cmd_factored_text(text: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let ctx = config.ctx();
    let point = config.point(&ctx)?;
    let mut factors = Vec::new();
    for (f, exact, n) in parse_factor_lines(text, &ctx)? {
        factors.push((moved(&f, config, &point)?, exact, n));
    }
    let set = branches_factored(&factors, &config.expand_options())?;
    let stdout = if config.json {
        to_pretty(&BranchesJson::new(&ctx, &point, &set, config.digits()))
    } else {
        render::branch_set(&ctx, &point_label(config), &set)
    };
    Ok(Outcome::ok(stdout))
}

/// Residual check of one record: (order found, bound it had to beat, passed).
pub fn verify_record(
    f: &PuiseuxPoly,
    rec: &BranchRecordJson,
    ctx: &Ctx,
) -> Result<(TOrder, usize, bool), CliError> {
    if rec.vertical {
        // (0, T) lies on f iff x divides f
        let ok = f.terms().all(|((i, _), _)| *i > puiseux::poly::rat_int(0));
        let order = if ok {
            TOrder::AtLeast(EXACT_CHECK_ORDER)
        } else {
            TOrder::Finite(0)
        };
        return Ok((order, 0, ok));
    }
    let terms = rec.series(ctx)?;
    if !f.has_integer_exponents() {
        return Err(CliError::input("verify needs integer exponents"));
    }
    let last = terms.last().map_or(0, |(_, e)| *e as usize);
    if rec.exact {
        let n = EXACT_CHECK_ORDER.max(last + VERIFY_MARGIN);
        let order = f.order_in_t(rec.r, &terms, n);
        return Ok((order, last, order.is_exact_zero()));
    }
    let order = f.order_in_t(rec.r, &terms, last + VERIFY_MARGIN);
    Ok((order, last, order.exceeds(last)))
}

/// Back-substitute JSON branch records into f.
///
/// `branch_json` is JSON text, or a path to a file holding it.
pub fn cmd_verify(
    poly_text: &str,
    branch_json: &str,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    config.validate()?;
    let ctx = config.ctx();
    let (f, _) = parse(poly_text, &ctx)?;
    let point = config.point(&ctx)?;
    let f = moved(&f, config, &point)?;
    let text = if branch_json.trim_start().starts_with('{') {
        branch_json.to_string()
    } else {
        fs::read_to_string(branch_json)
            .map_err(|e| CliError::input(format!("cannot read {branch_json}: {e}")))?
    };
    let records = records_from_str(&text)?;
    let mut stdout = String::new();
    let mut all_ok = true;
    for (k, rec) in records.iter().enumerate() {
        let (order, bound, ok) = verify_record(&f, rec, &ctx)?;
        all_ok &= ok;
        let what = if rec.vertical {
            "x divides f".to_string()
        } else if rec.exact {
            format!("residual order {order}, exact branch")
        } else {
            format!("residual order {order}, must exceed {bound}")
        };
        stdout.push_str(&format!(
            "branch {}: {what}: {}\n",
            k + 1,
            if ok { "ok" } else { "FAILED" }
        ));
    }
    Ok(Outcome {
        stdout,
        code: if all_ok { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}
