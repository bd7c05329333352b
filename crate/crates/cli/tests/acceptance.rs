//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p puiseux-cli --test acceptance`. The process exits
//! nonzero when a criterion fails, unless that criterion is listed in
//! `KNOWN_FAILURES` together with the reason; a listed criterion that starts
//! passing is also an error, so the list cannot go stale.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use puiseux::expansion::{
    assemble_branch, branches_at_origin, branches_factored, equivalent, multiplicity_sum_check,
    same_branches, star_procedure, tangent_cone_check, y_order_at_zero, Branch, BranchSet,
    ExpandOptions, ExpansionPath,
};
use puiseux::numeric::{Coeff, Ctx};
use puiseux::poly::{parse_poly_full, squarefree_exact, ExactPoly, PuiseuxPoly};
use puiseux::polygon::{build_polygon, SupportPoint};
use puiseux::roots::{derivative, eval};
use puiseux::triple::{classify_triple_point, trace_matches_grammar, CaseLabel, Structure};
use puiseux_cli::commands::{cmd_factored_text, verify_record};
use puiseux_cli::json::{records_from_str, BranchRecordJson, BranchesJson};
use puiseux_cli::{cmd_branches, RunConfig};

const PRECISION: usize = 128;
const GOLDEN_TOL: f64 = 1e-9;
const GOLDEN_TIME_LIMIT: Duration = Duration::from_secs(2);
const CORPUS_SIZE: usize = 220;
const CORPUS_SEED: u64 = 20_261_016;
const PAIR_COUNT: usize = 50;
const PAIR_SEED: u64 = 20_261_017;
const MAX_DEGREE: u32 = 6;
/// Exact branches must vanish through this power of T.
const EXACT_ORDER: usize = 200;
/// Coefficient agreement when matching parameterizations across routes.
const MATCH_TOL: f64 = 1e-12;
/// A derivative below this (relative) counts as zero in the tangent route.
const ROOT_TOL: f64 = 1e-15;

/// Criteria expected to fail, with the reason printed next to the FAIL line.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    1,
    "the printed closed forms for the second coefficients of R4, R5 and R6 \
     contradict the expansion's own step polynomials; see the breakdown above",
)];

const GOLDEN: &str = "2*y^6 + 6*x*y^5 - 8*x^3*y^3 + 2*x^3*y^4 + (2*sqrt(3)+2)*x^4*y^3 \
    + (4*sqrt(3)-4)*x^5*y^2 + (sqrt(3)-2)*x^7*y + (sqrt(3)-2)/8*x^10 + 2*x^11";

struct Outcome {
    pass: bool,
    detail: String,
}

fn ctx() -> Arc<Ctx> {
    Arc::new(Ctx::new(PRECISION))
}

fn opts() -> ExpandOptions {
    ExpandOptions::default()
}

fn json_config() -> RunConfig {
    RunConfig {
        precision_bits: PRECISION,
        json: true,
        ..RunConfig::default()
    }
}

// ---------------------------------------------------------------- f64 helpers

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn of(c: &Coeff) -> Self {
        C64::new(c.re_f64(), c.im_f64())
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn dist(self, o: C64) -> f64 {
        (self.re - o.re).hypot(self.im - o.im)
    }
    fn unit(k: u32, n: u32) -> C64 {
        let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        C64::new(a.cos(), a.sin())
    }
    fn powu(self, e: u32) -> C64 {
        (0..e).fold(C64::new(1.0, 0.0), |acc, _| acc.mul(self))
    }
}

impl std::fmt::Display for C64 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im == 0.0 {
            write!(f, "{:.12}", self.re)
        } else {
            write!(f, "{:.12}{:+.12}i", self.re, self.im)
        }
    }
}

/// A parameterization (T^r, Σ c_k T^k) in f64, for cross-route matching.
#[derive(Clone, Debug)]
struct Param {
    r: u32,
    terms: Vec<(C64, u32)>,
}

impl Param {
    fn of_branch(b: &Branch) -> Param {
        Param {
            r: b.r,
            terms: b.terms.iter().map(|(c, e)| (C64::of(c), *e)).collect(),
        }
    }

    fn of_record(rec: &BranchRecordJson) -> Param {
        let num = |s: &str| s.parse::<f64>().expect("decimal string");
        Param {
            r: rec.r,
            terms: rec
                .terms
                .iter()
                .map(|t| (C64::new(num(&t.re), num(&t.im)), t.exp))
                .collect(),
        }
    }

    /// Same series after T -> ωT for some ω^r = 1, over the common terms.
    fn matches(&self, other: &Param) -> bool {
        if self.r != other.r {
            return false;
        }
        let n = self.terms.len().min(other.terms.len());
        if self.terms[..n]
            .iter()
            .zip(&other.terms[..n])
            .any(|(a, b)| a.1 != b.1)
        {
            return false;
        }
        (0..self.r).any(|k| {
            let w = C64::unit(k, self.r);
            self.terms[..n]
                .iter()
                .zip(&other.terms[..n])
                .all(|((a, e), (b, _))| {
                    a.mul(w.powu(*e)).dist(*b) < MATCH_TOL * (1.0 + b.dist(C64::new(0.0, 0.0)))
                })
        })
    }
}

// ------------------------------------------------------------------- corpus

/// Integer polynomial text, sampled independently of the library's own tests.
struct Sample {
    text: String,
    poly: PuiseuxPoly,
    exact: ExactPoly,
}

fn coeff(rng: &mut ChaCha20Rng) -> i64 {
    let a = rng.gen_range(1..=4);
    if rng.gen_bool(0.5) {
        -a
    } else {
        a
    }
}

fn monomial(c: i64, i: u32, j: u32) -> String {
    let mut parts = vec![c.to_string()];
    match i {
        0 => {}
        1 => parts.push("x".into()),
        _ => parts.push(format!("x^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("y".into()),
        _ => parts.push(format!("y^{j}")),
    }
    parts.join("*")
}

fn join(terms: &[String]) -> String {
    terms.join(" + ")
}

/// Sparse polynomial through O with at least one pure power of y.
fn sparse(rng: &mut ChaCha20Rng, max_deg: u32, min_deg: u32) -> String {
    let mut pool = Vec::new();
    for d in min_deg..=max_deg {
        for j in 0..=d {
            pool.push((d - j, j));
        }
    }
    let n = rng.gen_range(2..=6);
    let mut picked: Vec<(u32, u32)> = pool.choose_multiple(rng, n).copied().collect();
    if !picked.iter().any(|(i, _)| *i == 0) {
        picked.push((0, rng.gen_range(min_deg..=max_deg)));
    }
    picked.sort();
    picked.dedup();
    join(
        &picked
            .iter()
            .map(|&(i, j)| monomial(coeff(rng), i, j))
            .collect::<Vec<_>>(),
    )
}

/// (y + a x)^2 plus a higher x-power and higher-order noise: chains of
/// double roots.
fn tangential(rng: &mut ChaCha20Rng) -> String {
    let a = rng.gen_range(-2..=2);
    let k = rng.gen_range(3..=MAX_DEGREE);
    let mut terms = vec![format!("(y + {a}*x)^2"), monomial(coeff(rng), k, 0)];
    for _ in 0..rng.gen_range(0..=2) {
        let d = rng.gen_range(3..=MAX_DEGREE);
        let j = rng.gen_range(1..=d);
        terms.push(monomial(coeff(rng), d - j, j));
    }
    join(&terms)
}

fn admissible(text: &str, ctx: &Arc<Ctx>) -> Option<Sample> {
    let parsed = parse_poly_full(text, ctx).ok()?;
    let exact = parsed.exact?;
    let poly = parsed.poly;
    if poly.is_zero() || !poly.vanishes_at_origin() {
        return None;
    }
    let mut degree = 0;
    let mut x_valuation = i64::MAX;
    for ((i, j), _) in poly.terms() {
        let i = i.to_integer();
        degree = degree.max(i + *j as i64);
        x_valuation = x_valuation.min(i);
    }
    if degree > MAX_DEGREE as i64 || x_valuation > 1 || !squarefree_exact(&exact) {
        return None;
    }
    Some(Sample {
        text: text.to_string(),
        poly,
        exact,
    })
}

fn corpus(ctx: &Arc<Ctx>) -> Vec<Sample> {
    let mut rng = ChaCha20Rng::seed_from_u64(CORPUS_SEED);
    let mut out = Vec::new();
    while out.len() < CORPUS_SIZE {
        let text = match rng.gen_range(0..4) {
            0 => sparse(&mut rng, MAX_DEGREE, 1),
            1 => sparse(&mut rng, MAX_DEGREE, 2),
            2 => {
                let k = rng.gen_range(2..=3);
                let factors: Vec<String> = (0..k)
                    .map(|_| format!("({})", sparse(&mut rng, 2, 1)))
                    .collect();
                factors.join("*")
            }
            _ => tangential(&mut rng),
        };
        if let Some(s) = admissible(&text, ctx) {
            out.push(s);
        }
    }
    out
}

fn coprime_pairs(ctx: &Arc<Ctx>) -> Vec<(Sample, Sample, Sample)> {
    let mut rng = ChaCha20Rng::seed_from_u64(PAIR_SEED);
    let mut out = Vec::new();
    while out.len() < PAIR_COUNT {
        let (mg, mh) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let g = sparse(&mut rng, 3, mg);
        let h = sparse(&mut rng, 3, mh);
        let prod = format!("({g})*({h})");
        // a squarefree product means coprime squarefree factors
        if let (Some(a), Some(b), Some(p)) = (
            admissible(&g, ctx),
            admissible(&h, ctx),
            admissible(&prod, ctx),
        ) {
            out.push((a, b, p));
        }
    }
    out
}

// --------------------------------------------------------------- criterion 1

fn record_param(rec: &BranchRecordJson, k: usize) -> Option<(C64, u32)> {
    Param::of_record(rec).terms.get(k).copied()
}

fn golden() -> (Outcome, Vec<Branch>) {
    let s3 = 3f64.sqrt();
    let cfg = RunConfig {
        assume_reduced: true,
        ..json_config()
    };
    let start = Instant::now();
    let out = cmd_branches(GOLDEN, &cfg);
    let elapsed = start.elapsed();
    let out = match out {
        Ok(o) => o,
        Err(e) => {
            return (
                Outcome {
                    pass: false,
                    detail: format!("cmd_branches failed: {}", e.message),
                },
                Vec::new(),
            )
        }
    };
    let rep: BranchesJson = serde_json::from_str(&out.stdout).expect("branch JSON");
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut check = |name: String, ok: bool| checks.push((name, ok));

    let mults: Vec<u32> = rep.branches.iter().map(|b| b.multiplicity).collect();
    check(
        format!("5 classes with multiplicities 2,1,1,1,1 (got {mults:?})"),
        mults == [2, 1, 1, 1, 1],
    );
    check(
        format!(
            "runtime {:.3}s < {}s",
            elapsed.as_secs_f64(),
            GOLDEN_TIME_LIMIT.as_secs()
        ),
        elapsed < GOLDEN_TIME_LIMIT,
    );

    let close = |got: Option<(C64, u32)>, exp: u32, want: C64| -> (bool, String) {
        match got {
            Some((c, e)) if e == exp => (c.dist(want) < GOLDEN_TOL, format!("{c}")),
            other => (false, format!("{other:?}")),
        }
    };
    let mut value = |label: &str, got: Option<(C64, u32)>, exp: u32, want: C64| {
        let (ok, shown) = close(got, exp, want);
        check(
            format!("{label}: T^{exp} coefficient {shown}, expected {want}"),
            ok,
        );
    };

    let two: Vec<&BranchRecordJson> = rep.branches.iter().filter(|b| b.r == 2).collect();
    let ones: Vec<&BranchRecordJson> = rep.branches.iter().filter(|b| b.r == 1).collect();
    if let [b] = two.as_slice() {
        value("R1", record_param(b, 0), 2, C64::new(-2.0, 0.0));
        value(
            "R1",
            record_param(b, 1),
            4,
            C64::new((3.0 - s3) / 12.0, 0.0),
        );
        value(
            "R1",
            record_param(b, 2),
            5,
            C64::new(0.0, ((3.0 - s3) / 864.0).sqrt()),
        );
    }
    let by_first = |exp: u32, lead: f64| -> Vec<&BranchRecordJson> {
        ones.iter()
            .copied()
            .filter(|b| matches!(record_param(b, 0), Some((c, e)) if e == exp && c.dist(C64::new(lead, 0.0)) < GOLDEN_TOL))
            .collect()
    };
    let r3 = by_first(1, 1.0);
    if let [b] = r3.as_slice() {
        value("R3", record_param(b, 1), 2, C64::new(-s3 / 3.0, 0.0));
    }
    let r45 = by_first(2, (s3 - 1.0) / 4.0);
    let printed =
        |sign: f64| (3.0 - 3.0 * s3 + sign * 2.0 * (35.0 + 48.0 * s3).sqrt()) / (16.0 * (1.0 - s3));
    if let [a, b] = r45.as_slice() {
        // the pair is unordered: match each printed value to the nearer branch
        for (label, want) in [("R4", printed(1.0)), ("R5", printed(-1.0))] {
            let want = C64::new(want, 0.0);
            let got = [record_param(a, 1), record_param(b, 1)]
                .into_iter()
                .flatten()
                .min_by(|x, y| x.0.dist(want).total_cmp(&y.0.dist(want)));
            value(label, got, 3, want);
        }
    }
    let r6 = by_first(3, -0.125);
    if let [b] = r6.as_slice() {
        value(
            "R6",
            record_param(b, 1),
            4,
            C64::new(-(33.0 * s3 + 65.0) / 16.0, 0.0),
        );
    }
    check(
        format!(
            "leading terms located (R3 {}, R4/R5 {}, R6 {})",
            r3.len(),
            r45.len(),
            r6.len()
        ),
        two.len() == 1 && r3.len() == 1 && r45.len() == 2 && r6.len() == 1,
    );

    for (name, ok) in &checks {
        println!("      {} {name}", if *ok { "ok  " } else { "MISS" });
    }
    // what the step polynomials give instead, for the record
    let corrected = [
        ("R4/R5 from the discriminant sqrt(48*sqrt3 - 35)", {
            let d = (48.0 * s3 - 35.0).sqrt();
            format!(
                "{:.12}, {:.12}",
                (3.0 - 3.0 * s3 + 2.0 * d) / (16.0 * (1.0 - s3)),
                (3.0 - 3.0 * s3 - 2.0 * d) / (16.0 * (1.0 - s3))
            )
        }),
        (
            "R6 root of (sqrt3-2)y + (sqrt3+31)/16 x",
            format!("{:.12}", (33.0 * s3 + 65.0) / 16.0),
        ),
    ];
    for (what, v) in corrected {
        println!("      note {what}: {v}");
    }

    let ctx = ctx();
    let parsed = parse_poly_full(GOLDEN, &ctx).unwrap();
    let all = branches_at_origin(
        &parsed.poly,
        None,
        &ExpandOptions {
            assume_reduced: true,
            ..opts()
        },
    )
    .map(|set| set.paths.iter().map(|p| assemble_branch(&ctx, p)).collect())
    .unwrap_or_default();
    let missed = checks.iter().filter(|c| !c.1).count();
    (
        Outcome {
            pass: missed == 0,
            detail: format!(
                "{} of {} comparisons within {GOLDEN_TOL:e}",
                checks.len() - missed,
                checks.len()
            ),
        },
        all,
    )
}

// --------------------------------------------------------------- criterion 2

/// Lower-left hull of integer points by the monotone chain, cut at the
/// lowest point: the vertices of the Newton polygon.
fn newton_vertices(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup();
    let min_y = pts.iter().map(|p| p.1).min().unwrap();
    let end = *pts.iter().filter(|p| p.1 == min_y).min().unwrap();
    let start_x = pts.iter().map(|p| p.0).min().unwrap();
    let start = *pts
        .iter()
        .filter(|p| p.0 == start_x)
        .min_by_key(|p| p.1)
        .unwrap();
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts.into_iter().filter(|p| p.0 >= start.0 && p.0 <= end.0) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let first = hull.iter().position(|p| *p == start).unwrap();
    let last = hull.iter().position(|p| *p == end).unwrap();
    hull[first..=last].to_vec()
}

fn polygon() -> Outcome {
    let ctx = ctx();
    let f = parse_poly_full(GOLDEN, &ctx).unwrap().poly;
    let want = [(0, 6), (3, 3), (7, 1), (10, 0)];
    let lib: Vec<SupportPoint> = match build_polygon(&f) {
        Ok(np) => np.vertices,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: format!("build_polygon failed: {e}"),
            }
        }
    };
    let expected: Vec<SupportPoint> = want
        .iter()
        .map(|&(x, y)| SupportPoint::int(x, y as u32))
        .collect();
    let pts: Vec<(i64, i64)> = f
        .terms()
        .map(|((i, j), _)| (i.to_integer(), *j as i64))
        .collect();
    let hull = newton_vertices(pts);
    let lib_text: Vec<String> = lib.iter().map(|p| p.to_string()).collect();
    Outcome {
        pass: lib == expected && hull == want,
        detail: format!("library {}, monotone chain {hull:?}", lib_text.join(" ")),
    }
}

// ----------------------------------------------------------- criteria 3 to 5

#[derive(Default)]
struct LemmaTally {
    steps: usize,
    failures: Vec<String>,
}

fn edge_key(e: &puiseux::polygon::Edge) -> String {
    format!("{}-{}", e.start, e.end)
}

/// Lemma checks at one node f_n, through the ★-children.
fn check_node(f_n: &PuiseuxPoly, tally: &mut LemmaTally, label: &str) {
    tally.steps += 1;
    let children = match star_procedure(f_n) {
        Ok(c) => c,
        Err(e) => {
            tally.failures.push(format!("{label}: star procedure: {e}"));
            return;
        }
    };
    let mut filled: BTreeMap<String, u32> = BTreeMap::new();
    for ch in children.iter().filter(|c| !c.edge.is_virtual) {
        *filled.entry(edge_key(&ch.edge)).or_default() += ch.root.multiplicity;
        if ch.next.is_zero() {
            continue;
        }
        if !ch.next.vanishes_at_origin() {
            tally
                .failures
                .push(format!("{label}: next polynomial misses O"));
        }
        let low = y_order_at_zero(&ch.next);
        if low != Some(ch.root.multiplicity) {
            tally.failures.push(format!(
                "{label}: lowest pure power {low:?} for a root of multiplicity {}",
                ch.root.multiplicity
            ));
        }
    }
    let Ok((_, hat)) = f_n.strip_y() else {
        tally.failures.push(format!("{label}: zero node"));
        return;
    };
    if hat.vanishes_at_origin() {
        match build_polygon(&hat) {
            Ok(np) => {
                for e in &np.edges {
                    let got = filled.get(&edge_key(e)).copied().unwrap_or(0);
                    if got != e.height {
                        tally.failures.push(format!(
                            "{label}: edge {} roots sum to {got}, height {}",
                            edge_key(e),
                            e.height
                        ));
                    }
                }
            }
            Err(e) => tally.failures.push(format!("{label}: polygon: {e}")),
        }
    }
}

fn check_path(path: &ExpansionPath, tally: &mut LemmaTally, label: &str) {
    let mut prev = u32::MAX;
    for (k, step) in path.steps.iter().enumerate() {
        check_node(&step.f_n, tally, &format!("{label} step {k}"));
        match y_order_at_zero(&step.f_n) {
            Some(h) if h <= prev => prev = h,
            h => tally
                .failures
                .push(format!("{label} step {k}: height {h:?} after {prev}")),
        }
    }
}

/// Tangent-cone check by a second route: the multiplicity of each tangent
/// line as a factor of the lowest form, read off from derivatives.
fn tangent_multiplicities_agree(ctx: &Ctx, f: &PuiseuxPoly, set: &BranchSet) -> Result<(), String> {
    let m = f.order().ok_or("no order")?.to_integer() as u32;
    let low = f.lowest_form();
    let coeffs = low.y_coefficients_at_x1();
    let y_deg = coeffs
        .iter()
        .rposition(|c| !ctx.is_zero(c))
        .ok_or("zero lowest form")? as u32;
    // group branch multiplicities by tangent slope; None is the vertical line
    let mut groups: Vec<(Option<Coeff>, u32)> = Vec::new();
    for b in &set.branches {
        let w = b.branch_mult * b.repetition;
        let slope = (!ctx.is_zero(&b.tangent.0)).then(|| b.tangent.1.div(&b.tangent.0));
        match groups.iter_mut().find(|(s, _)| match (s, &slope) {
            (None, None) => true,
            (Some(a), Some(b)) => C64::of(a).dist(C64::of(b)) < MATCH_TOL,
            _ => false,
        }) {
            Some(g) => g.1 += w,
            None => groups.push((slope, w)),
        }
    }
    let mut total = 0;
    for (slope, w) in &groups {
        let mult = match slope {
            None => m - y_deg,
            Some(t) => {
                let mut d = coeffs.clone();
                let mut k = 0;
                loop {
                    let scale: f64 = d.iter().map(|c| c.abs_f64()).sum::<f64>()
                        * (1.0 + t.abs_f64()).powi(d.len() as i32);
                    if d.len() <= 1 && ctx.is_zero(&d[0])
                        || eval(&d, t).abs_f64() > ROOT_TOL * scale
                    {
                        break;
                    }
                    d = derivative(ctx, &d);
                    k += 1;
                    if d.is_empty() {
                        break;
                    }
                }
                k
            }
        };
        if mult != *w {
            return Err(format!(
                "tangent {slope:?}: line multiplicity {mult}, branches {w}"
            ));
        }
        total += mult;
    }
    if total != m {
        return Err(format!("tangent lines cover {total} of {m}"));
    }
    Ok(())
}

fn back_substitution_ok(f: &PuiseuxPoly, b: &Branch) -> bool {
    if b.vertical {
        return f.terms().all(|((i, _), _)| i.to_integer() >= 1);
    }
    let last = b.terms.last().map_or(0, |t| t.1 as usize);
    if b.exact {
        f.order_in_t(b.r, &b.terms, EXACT_ORDER.max(last + 1))
            .is_exact_zero()
    } else {
        f.order_in_t(b.r, &b.terms, last + 16).exceeds(last)
    }
}

struct CorpusResults {
    lemmas: Outcome,
    sums: Outcome,
    back: Outcome,
}

fn corpus_criteria(samples: &[Sample], golden: &str) -> CorpusResults {
    let ctx = ctx();
    let mut tally = LemmaTally::default();
    let mut sum_fail = Vec::new();
    let mut back_fail = Vec::new();
    let mut branches = 0;
    let mut singular = 0;
    for s in samples {
        let set = match branches_at_origin(&s.poly, Some(&s.exact), &opts()) {
            Ok(set) => set,
            Err(e) => {
                tally.failures.push(format!("{}: {e}", s.text));
                sum_fail.push(format!("{}: {e}", s.text));
                back_fail.push(format!("{}: {e}", s.text));
                continue;
            }
        };
        if s.poly
            .order()
            .is_some_and(|m| m > puiseux::poly::rat_int(1))
        {
            singular += 1;
        }
        for (i, path) in set.paths.iter().enumerate() {
            check_path(path, &mut tally, &format!("{} path {i}", s.text));
        }
        // route 1: library checks; route 2: independent recomputation
        let m = s.poly.order().map(|m| m.to_integer() as u32);
        let total: u32 = set
            .branches
            .iter()
            .map(|b| b.branch_mult * b.repetition)
            .sum();
        if !multiplicity_sum_check(&s.poly, &set) || m != Some(total) {
            sum_fail.push(format!("{}: multiplicity sum {total} vs {m:?}", s.text));
        }
        if !tangent_cone_check(&s.poly, &set) {
            sum_fail.push(format!("{}: tangent cone (library)", s.text));
        }
        if let Err(e) = tangent_multiplicities_agree(&ctx, &s.poly, &set) {
            sum_fail.push(format!("{}: {e}", s.text));
        }
        // back-substitution: directly, and through the JSON records
        for b in &set.branches {
            branches += 1;
            if !back_substitution_ok(&s.poly, b) {
                back_fail.push(format!("{}: branch r = {} (direct)", s.text, b.r));
            }
        }
        back_fail.extend(json_route_failures(&s.text, &s.poly, &json_config()));
    }
    // the golden curve's branches too
    let gctx = ctx.clone();
    let g = parse_poly_full(golden, &gctx).unwrap().poly;
    let gcfg = RunConfig {
        assume_reduced: true,
        ..json_config()
    };
    if let Ok(set) = branches_at_origin(
        &g,
        None,
        &ExpandOptions {
            assume_reduced: true,
            ..opts()
        },
    ) {
        for b in &set.branches {
            branches += 1;
            if !back_substitution_ok(&g, b) {
                back_fail.push(format!("golden: branch r = {} (direct)", b.r));
            }
        }
    }
    back_fail.extend(json_route_failures(golden, &g, &gcfg));

    let show = |v: &Vec<String>| v.iter().take(3).cloned().collect::<Vec<_>>().join("; ");
    CorpusResults {
        lemmas: Outcome {
            pass: tally.failures.is_empty() && samples.len() >= 200,
            detail: format!(
                "{} polynomials ({singular} singular), {} nodes, {} failures {}",
                samples.len(),
                tally.steps,
                tally.failures.len(),
                show(&tally.failures)
            ),
        },
        sums: Outcome {
            pass: sum_fail.is_empty(),
            detail: format!(
                "{} polynomials, {} failures {}",
                samples.len(),
                sum_fail.len(),
                show(&sum_fail)
            ),
        },
        back: Outcome {
            pass: back_fail.is_empty(),
            detail: format!(
                "{branches} branches by two routes, {} failures {}",
                back_fail.len(),
                show(&back_fail)
            ),
        },
    }
}

fn json_route_failures(text: &str, f: &PuiseuxPoly, cfg: &RunConfig) -> Vec<String> {
    let out = match cmd_branches(text, cfg) {
        Ok(o) => o,
        Err(e) => return vec![format!("{text}: cmd_branches: {}", e.message)],
    };
    let records = match records_from_str(&out.stdout) {
        Ok(r) => r,
        Err(e) => return vec![format!("{text}: JSON: {}", e.message)],
    };
    let ctx = cfg.ctx();
    let mut fails = Vec::new();
    for rec in &records {
        match verify_record(f, rec, &ctx) {
            Ok((_, _, true)) => {}
            Ok((order, bound, false)) => fails.push(format!(
                "{text}: record r = {} order {order} vs {bound}",
                rec.r
            )),
            Err(e) => fails.push(format!("{text}: record: {}", e.message)),
        }
    }
    fails
}

// --------------------------------------------------------------- criterion 6

struct Member {
    poly: &'static str,
    trace: &'static [CaseLabel],
    structure: Structure,
    /// Hand-derived parameterizations of every branch.
    params: Vec<(u32, Vec<(Coeff, u32)>)>,
}

/// Roots of c^3 - c - 1 by Newton's method from rough starts.
fn plastic_roots(ctx: &Ctx) -> Vec<Coeff> {
    [(1.3, 0.0), (-0.66, 0.56), (-0.66, -0.56)]
        .iter()
        .map(|&(re, im)| {
            let mut c = ctx.complex_f64(re, im);
            for _ in 0..12 {
                let p = &(&(&c * &c) * &c) - &(&c + &ctx.one());
                let dp = &(&ctx.int(3) * &(&c * &c)) - &ctx.one();
                c = &c - &p.div(&dp);
            }
            c
        })
        .collect()
}

fn family(ctx: &Ctx) -> Vec<Member> {
    use CaseLabel::*;
    let one = || ctx.one();
    let int = |v: i64| ctx.int(v);
    let half = ctx.complex_f64(-0.5, 0.0);
    let s3h = &ctx.int(3).sqrt() * &ctx.complex_f64(0.5, 0.0);
    let cube_roots = [
        ctx.one(),
        &half + &(&ctx.imag_unit() * &s3h),
        &half - &(&ctx.imag_unit() * &s3h),
    ];
    let plastic = plastic_roots(ctx);
    vec![
        Member {
            poly: "y^3 - x^4",
            trace: &[C4_1],
            structure: Structure::ThreeBranch(4),
            params: vec![(3, vec![(one(), 4)])],
        },
        Member {
            poly: "y^3 - x^5",
            trace: &[C4_1],
            structure: Structure::ThreeBranch(5),
            params: vec![(3, vec![(one(), 5)])],
        },
        Member {
            poly: "y*(y^2 - x^5)",
            trace: &[C5_1],
            structure: Structure::TwoPlusOne,
            params: vec![(1, vec![]), (2, vec![(one(), 5)])],
        },
        Member {
            poly: "(y - x^2)^3 - x^10",
            trace: &[C4_2_3, C4_1],
            structure: Structure::ThreeBranch(10),
            params: vec![(3, vec![(one(), 6), (one(), 10)])],
        },
        Member {
            poly: "(y - x^2 - x^3)^3 - x^11",
            trace: &[C4_2_3, C4_2_3, C4_1],
            structure: Structure::ThreeBranch(11),
            params: vec![(3, vec![(one(), 6), (one(), 9), (one(), 11)])],
        },
        Member {
            poly: "y^3 - x^4*y - x^6",
            trace: &[C4_2_1],
            structure: Structure::OneOneOne,
            params: plastic.iter().map(|c| (1, vec![(c.clone(), 2)])).collect(),
        },
        Member {
            poly: "(y - x^2)^3 - x^9",
            trace: &[C4_2_3, C4_2_1],
            structure: Structure::OneOneOne,
            params: cube_roots
                .iter()
                .map(|w| (1, vec![(one(), 2), (w.clone(), 3)]))
                .collect(),
        },
        Member {
            poly: "(y^2 - x^3)*(y - x^2)",
            trace: &[C5_1],
            structure: Structure::TwoPlusOne,
            params: vec![(2, vec![(one(), 3)]), (1, vec![(one(), 2)])],
        },
        Member {
            poly: "(y - x^2)*(y^2 - x^5)",
            trace: &[C6_1],
            structure: Structure::TwoPlusOne,
            params: vec![(1, vec![(one(), 2)]), (2, vec![(one(), 5)])],
        },
        Member {
            poly: "(y - x^2)*(y - x^3)*(y - x^4)",
            trace: &[C7],
            structure: Structure::OneOneOne,
            params: vec![
                (1, vec![(one(), 2)]),
                (1, vec![(one(), 3)]),
                (1, vec![(one(), 4)]),
            ],
        },
        Member {
            poly: "(y + x^2)*((y - x^2)^2 - x^5)",
            trace: &[C4_2_2, C2_1],
            structure: Structure::TwoPlusOne,
            params: vec![(1, vec![(int(-1), 2)]), (2, vec![(one(), 4), (one(), 5)])],
        },
        Member {
            poly: "(y + x^2)*(y - x^2 - x^3)*(y - x^2 - x^4)",
            trace: &[C4_2_2, C3],
            structure: Structure::OneOneOne,
            params: vec![
                (1, vec![(int(-1), 2)]),
                (1, vec![(one(), 2), (one(), 3)]),
                (1, vec![(one(), 2), (one(), 4)]),
            ],
        },
        Member {
            poly: "(y - x^2)*(y + x^2)*(y - x^3)",
            trace: &[C5_2_1],
            structure: Structure::OneOneOne,
            params: vec![
                (1, vec![(one(), 2)]),
                (1, vec![(int(-1), 2)]),
                (1, vec![(one(), 3)]),
            ],
        },
        Member {
            poly: "((y - x^2)^2 - x^5)*(y - x^3)",
            trace: &[C5_2_2, C2_1],
            structure: Structure::TwoPlusOne,
            params: vec![(2, vec![(one(), 4), (one(), 5)]), (1, vec![(one(), 3)])],
        },
        Member {
            poly: "(y - x^2)*(y - x^3)*(y + x^3)",
            trace: &[C6_2_1],
            structure: Structure::OneOneOne,
            params: vec![
                (1, vec![(one(), 2)]),
                (1, vec![(one(), 3)]),
                (1, vec![(int(-1), 3)]),
            ],
        },
        Member {
            poly: "y*(y^2 - x^4)",
            trace: &[C5_2_1],
            structure: Structure::OneOneOne,
            params: vec![(1, vec![]), (1, vec![(one(), 2)]), (1, vec![(int(-1), 2)])],
        },
    ]
}

/// Structure implied by the hand parameterizations alone.
fn hand_structure(params: &[(u32, Vec<(Coeff, u32)>)]) -> Option<Structure> {
    let mut rs: Vec<u32> = params.iter().map(|p| p.0).collect();
    rs.sort();
    match rs.as_slice() {
        [3] => params[0]
            .1
            .iter()
            .map(|t| t.1)
            .find(|e| e % 3 != 0)
            .map(Structure::ThreeBranch),
        [1, 2] => Some(Structure::TwoPlusOne),
        [1, 1, 1] => Some(Structure::OneOneOne),
        _ => None,
    }
}

fn triple_matrix() -> (Outcome, Vec<Branch>) {
    let ctx = ctx();
    let zero = ctx.zero();
    let mut fails = Vec::new();
    let mut pool = Vec::new();
    let members = family(&ctx);
    let mut three_branch_types = Vec::new();
    for m in &members {
        let parsed = parse_poly_full(m.poly, &ctx).unwrap();
        // the oracle first: hand parameterizations lie on the curve
        for (r, terms) in &m.params {
            if !parsed
                .poly
                .order_in_t(*r, terms, EXACT_ORDER)
                .is_exact_zero()
            {
                fails.push(format!("{}: hand parameterization off the curve", m.poly));
            }
        }
        if hand_structure(&m.params) != Some(m.structure) {
            fails.push(format!(
                "{}: hand structure disagrees with the table",
                m.poly
            ));
        }
        let rep = match classify_triple_point(
            &parsed.poly,
            parsed.exact.as_ref(),
            (&zero, &zero),
            &opts(),
        ) {
            Ok(r) => r,
            Err(e) => {
                fails.push(format!("{}: {e}", m.poly));
                continue;
            }
        };
        if rep.structure != m.structure {
            fails.push(format!(
                "{}: structure {} expected {}",
                m.poly, rep.structure, m.structure
            ));
        }
        if rep.trace != m.trace || !trace_matches_grammar(&rep.trace) {
            fails.push(format!("{}: trace {:?}", m.poly, rep.trace));
        }
        let computed: Vec<Param> = rep.branches.branches.iter().map(Param::of_branch).collect();
        let mut unmatched: Vec<Param> = m
            .params
            .iter()
            .map(|(r, t)| Param {
                r: *r,
                terms: t.iter().map(|(c, e)| (C64::of(c), *e)).collect(),
            })
            .collect();
        for p in &computed {
            match unmatched
                .iter()
                .position(|h| h.matches(p) && h.terms.len() == p.terms.len())
            {
                Some(i) => {
                    unmatched.remove(i);
                }
                None => fails.push(format!(
                    "{}: computed branch {p:?} has no hand partner",
                    m.poly
                )),
            }
        }
        if !unmatched.is_empty() {
            fails.push(format!(
                "{}: {} hand branches not found",
                m.poly,
                unmatched.len()
            ));
        }
        if let Structure::ThreeBranch(s) = rep.structure {
            three_branch_types.push(s);
        }
        pool.extend(rep.branches.paths.iter().map(|p| assemble_branch(&ctx, p)));
    }
    let show: Vec<String> = fails.iter().take(3).cloned().collect();
    (
        Outcome {
            pass: fails.is_empty() && members.len() >= 10,
            detail: format!(
                "{} polynomials, 3-branch types {three_branch_types:?}, {} failures {}",
                members.len(),
                fails.len(),
                show.join("; ")
            ),
        },
        pool,
    )
}

// --------------------------------------------------------------- criterion 7

fn factored_consistency(pairs: &[(Sample, Sample, Sample)]) -> Outcome {
    let ctx = ctx();
    let mut fails = Vec::new();
    let cfg = json_config();
    for (g, h, p) in pairs {
        let direct = branches_at_origin(&p.poly, Some(&p.exact), &opts());
        let split = branches_factored(
            &[
                (g.poly.clone(), Some(g.exact.clone()), 1),
                (h.poly.clone(), Some(h.exact.clone()), 1),
            ],
            &opts(),
        );
        match (direct, split) {
            (Ok(a), Ok(b)) if same_branches(&ctx, &a, &b) => {}
            (Ok(_), Ok(_)) => fails.push(format!("{}: library sets differ", p.text)),
            (a, b) => fails.push(format!("{}: {:?} / {:?}", p.text, a.err(), b.err())),
        }
        // second route: compare the CLI's JSON records
        let spec = format!("1 {}\n1 {}\n", g.text, h.text);
        let a = cmd_branches(&p.text, &cfg).map(|o| records_from_str(&o.stdout));
        let b = cmd_factored_text(&spec, &cfg).map(|o| records_from_str(&o.stdout));
        match (a, b) {
            (Ok(Ok(a)), Ok(Ok(b))) => {
                if !records_match(&a, &b) {
                    fails.push(format!("{}: JSON records differ", p.text));
                }
            }
            _ => fails.push(format!("{}: CLI route failed", p.text)),
        }
    }
    Outcome {
        pass: fails.is_empty() && pairs.len() >= 50,
        detail: format!(
            "{} coprime products by two routes, {} failures {}",
            pairs.len(),
            fails.len(),
            fails.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    }
}

fn records_match(a: &[BranchRecordJson], b: &[BranchRecordJson]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut left: Vec<&BranchRecordJson> = b.iter().collect();
    for x in a {
        let px = Param::of_record(x);
        let hit = left.iter().position(|y| {
            y.vertical == x.vertical
                && y.multiplicity == x.multiplicity
                && y.repetition == x.repetition
                && (x.vertical || px.matches(&Param::of_record(y)))
        });
        match hit {
            Some(i) => {
                left.remove(i);
            }
            None => return false,
        }
    }
    true
}

// --------------------------------------------------------------- criterion 8

fn equivalence_properties(pool: &[Branch]) -> Outcome {
    let ctx = ctx();
    let n = pool.len();
    let mut eq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            eq[i][j] = equivalent(&ctx, &pool[i], &pool[j]);
        }
    }
    let mut fails = Vec::new();
    let mut classes = 0;
    for i in 0..n {
        if !eq[i][i] {
            fails.push(format!("not reflexive at {i}"));
        }
        if (0..i).all(|k| !eq[k][i]) {
            classes += 1;
        }
        for j in 0..n {
            if eq[i][j] != eq[j][i] {
                fails.push(format!("not symmetric at ({i}, {j})"));
            }
            // second route: the same ω-substitution test in f64
            let pi = Param::of_branch(&pool[i]);
            let pj = Param::of_branch(&pool[j]);
            let alt = pool[i].vertical == pool[j].vertical
                && pi.terms.len() == pj.terms.len()
                && pi.matches(&pj);
            if alt != eq[i][j] {
                fails.push(format!("routes disagree at ({i}, {j})"));
            }
            if eq[i][j] {
                for (k, &jk) in eq[j].iter().enumerate() {
                    if jk && !eq[i][k] {
                        fails.push(format!("not transitive at ({i}, {j}, {k})"));
                    }
                }
            }
        }
    }
    Outcome {
        pass: fails.is_empty() && n > 0,
        detail: format!(
            "{n} parameterizations, {} ordered pairs, {classes} classes, {} failures {}",
            n * n,
            fails.len(),
            fails.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    }
}

// ---------------------------------------------------------------------- main

fn main() -> ExitCode {
    let started = Instant::now();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    println!("criterion 1 breakdown:");
    let (c1, golden_pool) = golden();
    results.push((1, "golden example branch data", c1));
    results.push((2, "golden Newton polygon vertices", polygon()));

    let ctx = ctx();
    let samples = corpus(&ctx);
    let c = corpus_criteria(&samples, GOLDEN);
    results.push((3, "step lemmas on the random corpus", c.lemmas));
    results.push((4, "multiplicity sum and tangent cone", c.sums));
    results.push((5, "back-substitution of every branch", c.back));

    let (c6, triple_pool) = triple_matrix();
    results.push((6, "triple-point matrix", c6));
    results.push((
        7,
        "factored vs direct branches",
        factored_consistency(&coprime_pairs(&ctx)),
    ));

    let pool: Vec<Branch> = golden_pool.into_iter().chain(triple_pool).collect();
    results.push((
        8,
        "equivalence relation properties",
        equivalence_properties(&pool),
    ));

    println!();
    let mut unexpected = 0;
    for (n, name, out) in &results {
        let known = KNOWN_FAILURES.iter().find(|k| k.0 == *n);
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {n}: {name}: {}", out.detail);
        match (out.pass, known) {
            (false, Some((_, why))) => println!("     known failure: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("     listed as a known failure but passed; update KNOWN_FAILURES");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!(
        "\n{passed}/{} criteria passed, {unexpected} unexpected, {:.1}s",
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
