//! Triple points with a single triple tangent.
//!
//! Once the point sits at O with tangent y = 0 and the y^3 coefficient is 1,
//! the curve reads y^3 + (terms of degree at least 4). Every ★-step met on the
//! way to a stop then has one of eleven polygon shapes, split further by the
//! parity of vertex abscissas and by the multiplicity pattern of the edge
//! roots. The labels along the longest stopped path decide how the three
//! sheets separate.
//!
//! The classifier only reads the paths produced by the general expansion, so
//! the two can never disagree about the branches.

use std::fmt;

use crate::expansion::{branches_at_origin, Branch, BranchSet, ExpandOptions, ExpansionError};
use crate::numeric::Coeff;
use crate::poly::{rat_int, ExactPoly, PuiseuxPoly, Rat};
use crate::polygon::{build_polygon, edge_poly, Edge};
use crate::roots::{edge_roots, EdgeRoot};

/// Polygon shapes of a ★-step on a triple point, with their sub-cases.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    C1,
    C2_1,
    C2_2_1,
    C2_2_2,
    C3,
    C4_1,
    C4_2_1,
    C4_2_2,
    C4_2_3,
    C5_1,
    C5_2_1,
    C5_2_2,
    C6_1,
    C6_2_1,
    C6_2_2,
    C7,
    /// The root y = 0 of a step where y divides f_n.
    Virtual,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 17] = [
        CaseLabel::C1,
        CaseLabel::C2_1,
        CaseLabel::C2_2_1,
        CaseLabel::C2_2_2,
        CaseLabel::C3,
        CaseLabel::C4_1,
        CaseLabel::C4_2_1,
        CaseLabel::C4_2_2,
        CaseLabel::C4_2_3,
        CaseLabel::C5_1,
        CaseLabel::C5_2_1,
        CaseLabel::C5_2_2,
        CaseLabel::C6_1,
        CaseLabel::C6_2_1,
        CaseLabel::C6_2_2,
        CaseLabel::C7,
        CaseLabel::Virtual,
    ];
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::Virtual => f.write_str("virtual"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    /// One 3-branch of type s.
    ThreeBranch(u32),
    TwoPlusOne,
    OneOneOne,
}

impl Structure {
    /// Branch multiplicities this structure implies, largest first.
    pub fn multiplicities(&self) -> &'static [u32] {
        match self {
            Structure::ThreeBranch(_) => &[3],
            Structure::TwoPlusOne => &[2, 1],
            Structure::OneOneOne => &[1, 1, 1],
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::ThreeBranch(s) => write!(f, "3-branch, type {s}"),
            Structure::TwoPlusOne => f.write_str("2+1"),
            Structure::OneOneOne => f.write_str("1+1+1"),
        }
    }
}

/// The affine change taking the input to normal form: translate the point to
/// O, optionally swap x and y, shear y -> y - t·x, then scale.
#[derive(Clone, Debug)]
pub struct TripleTransform {
    pub point: (Coeff, Coeff),
    pub swap: bool,
    pub shear: Coeff,
    pub scale: Coeff,
}

impl TripleTransform {
    pub fn apply(&self, f: &PuiseuxPoly) -> PuiseuxPoly {
        let ctx = f.ctx();
        let moved = f.translate(&self.point.0, &self.point.1);
        let x = PuiseuxPoly::x(ctx);
        let y = PuiseuxPoly::y(ctx);
        let sheared = y.sub(&x.scale(&self.shear));
        let g = if self.swap {
            moved.compose(&sheared, &x)
        } else {
            moved.compose(&x, &sheared)
        };
        // the other cubic terms cancel exactly; drop their rounding residue
        g.scale(&self.scale)
            .filter(|i, j| i + rat_int(j as i64) != rat_int(3) || j == 3)
    }
}

impl fmt::Display for TripleTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "move ({}, {}) to O", self.point.0, self.point.1)?;
        if self.swap {
            f.write_str("; swap x and y")?;
        }
        write!(
            f,
            "; y -> y - ({})*x; multiply by {}",
            self.shear, self.scale
        )
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum TripleError {
    #[error("not a triple point: multiplicity {0}")]
    NotTriple(u32),
    #[error("the tangent cone is not the cube of a single line")]
    NotTripleTangent,
    #[error("the curve has fractional x-exponents")]
    NonPolynomial,
    #[error("polygon outside the triple-point shapes: {0}")]
    UnclassifiableShape(String),
    #[error("a chain of triple roots reached the depth cap of {0}; the curve looks non-reduced")]
    NonReducedSuspected(usize),
    #[error("no exponent prime to 3 within the truncation")]
    NoSuchExponent,
    #[error("the branch has r = {0}, not 3")]
    NotThreeBranch(u32),
    #[error("case trace [{0}] does not fit the triple-point pattern")]
    UnexpectedTrace(String),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

impl From<crate::polygon::PolygonError> for TripleError {
    fn from(e: crate::polygon::PolygonError) -> Self {
        TripleError::Expansion(e.into())
    }
}

impl From<crate::roots::RootError> for TripleError {
    fn from(e: crate::roots::RootError) -> Self {
        TripleError::Expansion(e.into())
    }
}

#[derive(Clone, Debug)]
pub struct TripleReport {
    /// Labels along the deepest stopped path: the discriminating trace.
    pub trace: Vec<CaseLabel>,
    /// Labels of every step of every path, extension steps included.
    pub path_traces: Vec<Vec<CaseLabel>>,
    pub structure: Structure,
    pub branches: BranchSet,
    /// Leading C4_2_3 steps in `trace`.
    pub n_423_steps: usize,
    /// The normalized polynomial y^3 + … the expansion ran on.
    pub normal_form: PuiseuxPoly,
    pub transform: TripleTransform,
}

/// Move `point` to O and the triple tangent to y = 0, with y^3 coefficient 1.
pub fn normalize_triple(
    f: &PuiseuxPoly,
    point: (&Coeff, &Coeff),
) -> Result<(PuiseuxPoly, TripleTransform), TripleError> {
    if !f.has_integer_exponents() {
        return Err(TripleError::NonPolynomial);
    }
    if f.is_zero() {
        return Err(ExpansionError::NotOnCurve.into());
    }
    let ctx = f.ctx().clone();
    let moved = f.translate(point.0, point.1);
    let m = moved.order().expect("nonzero").to_integer() as u32;
    if m != 3 {
        return Err(TripleError::NotTriple(m));
    }
    let low = moved.lowest_form();
    // a[j] is the coefficient of x^(3-j) y^j
    let a: Vec<Coeff> = (0..=3u32)
        .map(|j| {
            low.coeff(rat_int(3 - j as i64), j)
                .cloned()
                .unwrap_or_else(|| ctx.zero())
        })
        .collect();
    let norm = a.iter().map(|c| c.abs_f64()).fold(0.0f64, f64::max);
    let swap = a[3].abs_f64() <= ctx.eps_f64() * norm;
    let b: Vec<Coeff> = if swap {
        a.iter().rev().cloned().collect()
    } else {
        a
    };
    let lead = b[3].clone();
    if lead.abs_f64() <= ctx.eps_f64() * norm {
        // neither x^3 nor y^3: the cone has two distinct lines at least
        return Err(TripleError::NotTripleTangent);
    }
    let t = b[2].div(&lead).div(&ctx.int(3));
    let three = ctx.int(3);
    let cube_ok = ctx.approx_eq(&b[1].div(&lead), &(&three * &t.powu(2)))
        && ctx.approx_eq(&b[0].div(&lead), &t.powu(3));
    if !cube_ok {
        return Err(TripleError::NotTripleTangent);
    }
    let transform = TripleTransform {
        point: (point.0.clone(), point.1.clone()),
        swap,
        shear: t,
        scale: ctx.one().div(&lead),
    };
    Ok((transform.apply(f), transform))
}

/// What a step looks like before labelling: real edges of ĥ = f_n / y^e and
/// the virtual height e.
struct StepShape {
    hat: PuiseuxPoly,
    edges: Vec<Edge>,
    virtual_height: u32,
}

impl StepShape {
    fn of(f_n: &PuiseuxPoly) -> Result<StepShape, TripleError> {
        let (e, hat) = f_n
            .strip_y()
            .map_err(|_| TripleError::UnclassifiableShape("zero polynomial".into()))?;
        let edges = if hat.vanishes_at_origin() {
            build_polygon(&hat)?.edges
        } else {
            Vec::new()
        };
        Ok(StepShape {
            hat,
            edges,
            virtual_height: e,
        })
    }

    fn heights(&self) -> Vec<u32> {
        let mut h: Vec<u32> = self.edges.iter().map(|e| e.height).collect();
        if self.virtual_height > 0 {
            h.push(self.virtual_height);
        }
        h
    }

    fn roots(&self, k: usize) -> Result<Vec<EdgeRoot>, TripleError> {
        let (g, _, _) = edge_poly(&self.hat, &self.edges[k])?;
        Ok(edge_roots(&g, &self.edges[k])?)
    }

    /// Root multiplicities of edge k, largest first.
    fn pattern(&self, k: usize) -> Result<Vec<u32>, TripleError> {
        let mut m: Vec<u32> = self.roots(k)?.iter().map(|r| r.multiplicity).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        Ok(m)
    }

    /// Integer abscissa of the right end of edge k.
    fn end_x(&self, k: usize) -> Result<i64, TripleError> {
        integer(self.edges[k].end.x)
    }

    fn label(&self) -> Result<CaseLabel, TripleError> {
        use CaseLabel::*;
        let heights = self.heights();
        if self.virtual_height > 1 {
            return Err(TripleError::UnclassifiableShape(format!(
                "y^{} divides f_n",
                self.virtual_height
            )));
        }
        let bad = |what: &str| {
            TripleError::UnclassifiableShape(format!("{what}, edge heights {heights:?}"))
        };
        let label = match heights.as_slice() {
            [1] => C1,
            [1, 1] => C3,
            [1, 1, 1] => C7,
            [2] => {
                if self.end_x(0)? % 2 != 0 {
                    C2_1
                } else {
                    match self.pattern(0)?.as_slice() {
                        [1, 1] => C2_2_1,
                        [2] => C2_2_2,
                        _ => return Err(bad("unexpected root pattern")),
                    }
                }
            }
            [3] => {
                if self.end_x(0)? % 3 != 0 {
                    C4_1
                } else {
                    match self.pattern(0)?.as_slice() {
                        [1, 1, 1] => C4_2_1,
                        [2, 1] => C4_2_2,
                        [3] => C4_2_3,
                        _ => return Err(bad("unexpected root pattern")),
                    }
                }
            }
            [2, 1] => {
                if self.end_x(0)? % 2 != 0 {
                    C5_1
                } else {
                    match self.pattern(0)?.as_slice() {
                        [1, 1] => C5_2_1,
                        [2] => C5_2_2,
                        _ => return Err(bad("unexpected root pattern")),
                    }
                }
            }
            [1, 2] => {
                if (self.end_x(0)? + self.end_x(1)?) % 2 != 0 {
                    C6_1
                } else {
                    match self.pattern(1)?.as_slice() {
                        [1, 1] => C6_2_1,
                        [2] => C6_2_2,
                        _ => return Err(bad("unexpected root pattern")),
                    }
                }
            }
            _ => return Err(bad("no matching shape")),
        };
        Ok(label)
    }
}

fn integer(q: Rat) -> Result<i64, TripleError> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(TripleError::UnclassifiableShape(format!(
            "vertex abscissa {q} is not an integer"
        )))
    }
}

/// The case of the polygon of f_n alone.
pub fn step_label(f_n: &PuiseuxPoly) -> Result<CaseLabel, TripleError> {
    StepShape::of(f_n)?.label()
}

/// Label every (edge, root) pair of one ★-step. Real edges carry the case of
/// the whole polygon; the root y = 0 of a y-factor is `Virtual`.
pub fn classify_step(f_n: &PuiseuxPoly) -> Result<Vec<(CaseLabel, Edge, EdgeRoot)>, TripleError> {
    let shape = StepShape::of(f_n)?;
    let label = shape.label()?;
    let mut out = Vec::new();
    for k in 0..shape.edges.len() {
        for root in shape.roots(k)? {
            out.push((label, shape.edges[k].clone(), root));
        }
    }
    if shape.virtual_height > 0 {
        out.push((
            CaseLabel::Virtual,
            Edge::virtual_edge(shape.virtual_height),
            EdgeRoot {
                c: f_n.ctx().zero(),
                r: rat_int(0),
                multiplicity: shape.virtual_height,
            },
        ));
    }
    Ok(out)
}

/// C4_2_3* then one stopping case, or a double-root case, C2_2_2*, and a
/// case separating the last two sheets.
pub fn trace_matches_grammar(trace: &[CaseLabel]) -> bool {
    use CaseLabel::*;
    let n = trace.iter().take_while(|l| **l == C4_2_3).count();
    match &trace[n..] {
        [C4_1 | C4_2_1 | C5_1 | C5_2_1 | C6_1 | C6_2_1 | C7] => true,
        [C4_2_2 | C5_2_2 | C6_2_2, rest @ ..] => {
            let m = rest.iter().take_while(|l| **l == C2_2_2).count();
            matches!(&rest[m..], [C2_1 | C2_2_1 | C3])
        }
        _ => false,
    }
}

/// Smallest T-exponent of a 3-branch not divisible by 3.
pub fn branch_type(b: &Branch) -> Result<u32, TripleError> {
    if b.r != 3 {
        return Err(TripleError::NotThreeBranch(b.r));
    }
    b.terms
        .iter()
        .map(|(_, e)| *e)
        .find(|e| e % 3 != 0)
        .ok_or(TripleError::NoSuchExponent)
}

fn join(trace: &[CaseLabel]) -> String {
    trace
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Normalize, expand, and read the structure off the case trace.
///
/// `exact` is the rational form of f (before normalization) for the
/// reducedness check.
pub fn classify_triple_point(
    f: &PuiseuxPoly,
    exact: Option<&ExactPoly>,
    point: (&Coeff, &Coeff),
    opts: &ExpandOptions,
) -> Result<TripleReport, TripleError> {
    use CaseLabel::*;
    let (g, transform) = normalize_triple(f, point)?;
    let branches = match branches_at_origin(&g, exact, opts) {
        Err(ExpansionError::DepthCapReached { cap, .. }) => {
            return Err(TripleError::NonReducedSuspected(cap))
        }
        other => other?,
    };

    let mut path_traces = Vec::with_capacity(branches.paths.len());
    for path in &branches.paths {
        let labels = path
            .steps
            .iter()
            .map(|s| step_label(&s.f_n))
            .collect::<Result<Vec<_>, _>>()?;
        path_traces.push(labels);
    }
    let deepest = (0..branches.paths.len())
        .fold(None, |best: Option<usize>, i| match best {
            Some(b) if branches.paths[b].stop_depth >= branches.paths[i].stop_depth => Some(b),
            _ => Some(i),
        })
        .ok_or_else(|| TripleError::UnexpectedTrace(String::new()))?;
    let trace = path_traces[deepest][..branches.paths[deepest].stop_depth].to_vec();
    if !trace_matches_grammar(&trace) {
        return Err(TripleError::UnexpectedTrace(join(&trace)));
    }
    let n_423_steps = trace.iter().take_while(|l| **l == C4_2_3).count();

    let structure = match trace.last().expect("grammar guarantees a last label") {
        C4_1 => {
            let path = &branches.paths[deepest];
            let acc: Rat = path.steps[..path.stop_depth].iter().map(|s| s.r_n).sum();
            let s = acc * rat_int(3);
            let three = branches
                .branches
                .iter()
                .find(|b| b.r == 3)
                .ok_or_else(|| invariant("a C4_1 trace without a branch of r = 3".into()))?;
            let s_branch = branch_type(three)?;
            if !s.is_integer() || s.to_integer() != s_branch as i64 {
                return Err(invariant(format!(
                    "type from the path ({s}) differs from the branch ({s_branch})"
                )));
            }
            Structure::ThreeBranch(s_branch)
        }
        C4_2_1 | C5_2_1 | C6_2_1 | C7 | C2_2_1 | C3 => Structure::OneOneOne,
        C5_1 | C6_1 | C2_1 => Structure::TwoPlusOne,
        other => return Err(invariant(format!("trace ends in {other}"))),
    };

    let mut mults: Vec<u32> = branches
        .branches
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.branch_mult, b.repetition as usize))
        .collect();
    mults.sort_unstable_by(|a, b| b.cmp(a));
    if mults != structure.multiplicities() {
        return Err(invariant(format!(
            "{structure} but branch multiplicities {mults:?}"
        )));
    }

    Ok(TripleReport {
        trace,
        path_traces,
        structure,
        branches,
        n_423_steps,
        normal_form: g,
        transform,
    })
}

fn invariant(msg: String) -> TripleError {
    TripleError::Expansion(ExpansionError::Invariant(msg))
}
