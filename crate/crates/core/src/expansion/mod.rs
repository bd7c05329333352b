//! The ★-procedure and the depth-first walk over all descending paths.
//!
//! One ★-step takes a Puiseux y-polynomial h with h(O) = 0, and for every
//! edge of its Newton polygon and every root c·x^r of the edge polynomial
//! produces h(x, x^r (c + z)) / x^m. When y divides h the root y = 0 is
//! carried by a virtual edge whose child is the zero polynomial.

mod algorithms;
mod branch;

use rayon::prelude::*;

use crate::numeric::Coeff;
use crate::poly::{rat_int, PuiseuxPoly, Rat};
use crate::polygon::{build_polygon, edge_poly, Edge, PolygonError};
use crate::roots::{edge_roots, EdgeRoot, RootError};

pub use algorithms::{
    branches_at_origin, branches_factored, detect_polynomial_branch, multiplicity_sum_check,
    same_branches, tangent_cone_check, BranchSet, PolynomialBranch,
};
pub use branch::{assemble_branch, equivalent, Branch};

/// Default number of nonzero series terms per branch.
pub const DEFAULT_TERMS: usize = 8;
/// Default cap on ★-steps before a stop.
pub const DEFAULT_DEPTH_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct ExpandOptions {
    /// Nonzero terms wanted in each p_γ.
    pub terms: usize,
    pub depth_cap: usize,
    /// Expand the children of the first step on the rayon pool.
    pub parallel: bool,
    /// Skip the exact squarefree check.
    pub assume_reduced: bool,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            terms: DEFAULT_TERMS,
            depth_cap: DEFAULT_DEPTH_CAP,
            parallel: false,
            assume_reduced: false,
        }
    }
}

/// One output of the ★-procedure.
#[derive(Clone, Debug)]
pub struct StarChild {
    pub edge: Edge,
    pub root: EdgeRoot,
    /// The polynomial the step was applied to. In the y | h case the edge
    /// belongs to h / y^e instead.
    pub source: PuiseuxPoly,
    pub next: PuiseuxPoly,
    /// x-power divided out by the substitution.
    pub m: Rat,
}

#[derive(Clone, Debug)]
pub struct PathStep {
    pub f_n: PuiseuxPoly,
    pub edge: Edge,
    pub c_n: Coeff,
    pub r_n: Rat,
    pub mult: u32,
    pub m_n: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopReason {
    ZeroTail,
    IFTMonomial,
    SimpleRoot,
    DepthCap,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StopReason::ZeroTail => "zero-tail",
            StopReason::IFTMonomial => "ift-monomial",
            StopReason::SimpleRoot => "simple-root",
            StopReason::DepthCap => "depth-cap",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionPath {
    pub steps: Vec<PathStep>,
    pub stop_reason: StopReason,
    /// Number of steps taken when the stop criterion fired; later steps
    /// come from extending the truncation.
    pub stop_depth: usize,
    /// f_{n+1} after the last step.
    pub tail: PuiseuxPoly,
}

impl ExpansionPath {
    /// Accumulated x-exponents r_0 + … + r_n paired with c_n, zero roots
    /// dropped.
    pub fn series(&self) -> Vec<(Coeff, Rat)> {
        let mut acc = rat_int(0);
        let mut out = Vec::new();
        for s in &self.steps {
            acc += s.r_n;
            if !s.edge.is_virtual {
                out.push((s.c_n.clone(), acc));
            }
        }
        out
    }

    pub fn nonzero_terms(&self) -> usize {
        self.steps.iter().filter(|s| !s.edge.is_virtual).count()
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ExpansionError {
    #[error("polynomial is not reduced")]
    NotReduced,
    #[error("coefficients are not rational; the reducedness check needs --assume-reduced")]
    NotExact,
    #[error("the curve does not pass through the point")]
    NotOnCurve,
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error("depth cap of {cap} steps reached; input may not be reduced")]
    DepthCapReached {
        cap: usize,
        partial: Box<Vec<ExpansionPath>>,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// One ★-step on h.
pub fn star_procedure(h: &PuiseuxPoly) -> Result<Vec<StarChild>, ExpansionError> {
    let ctx = h.ctx();
    let (e, hat) = h
        .strip_y()
        .map_err(|_| ExpansionError::Invariant("★-procedure on the zero polynomial".into()))?;
    let mut out = Vec::new();
    if e == 0 || hat.vanishes_at_origin() {
        let np = build_polygon(&hat)?;
        for edge in &np.edges {
            let (g, _, _) = edge_poly(&hat, edge)?;
            let roots = edge_roots(&g, edge)?;
            let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
            if total != edge.height {
                return Err(ExpansionError::Invariant(format!(
                    "edge root multiplicities sum to {total}, edge height is {}",
                    edge.height
                )));
            }
            for root in roots {
                let (next, m) = hat.shift_substitute(root.r, &root.c);
                out.push(StarChild {
                    edge: edge.clone(),
                    root,
                    source: h.clone(),
                    next,
                    m,
                });
            }
        }
    }
    if e > 0 {
        out.push(StarChild {
            edge: Edge::virtual_edge(e),
            root: EdgeRoot {
                c: ctx.zero(),
                r: rat_int(0),
                multiplicity: e,
            },
            source: h.clone(),
            next: PuiseuxPoly::zero(ctx),
            m: rat_int(0),
        });
    }
    Ok(out)
}

/// ord_y f(0, y): the height of the polygon when f is convenient.
pub fn y_order_at_zero(f: &PuiseuxPoly) -> Option<u32> {
    f.terms()
        .filter(|((x, _), _)| *x == rat_int(0))
        .map(|((_, y), _)| *y)
        .min()
}

/// Lemma-level checks on one step: the child vanishes at O and its lowest
/// pure z-power is the root multiplicity.
fn check_step(child: &StarChild) -> Result<(), ExpansionError> {
    if child.edge.is_virtual {
        return Ok(());
    }
    if !child.next.vanishes_at_origin() {
        return Err(ExpansionError::Invariant("f_{n+1}(O) != 0".into()));
    }
    let low = y_order_at_zero(&child.next);
    if low != Some(child.root.multiplicity) {
        return Err(ExpansionError::Invariant(format!(
            "lowest pure power {:?} differs from root multiplicity {}",
            low, child.root.multiplicity
        )));
    }
    Ok(())
}

fn step_from(child: &StarChild) -> PathStep {
    PathStep {
        f_n: child.source.clone(),
        edge: child.edge.clone(),
        c_n: child.root.c.clone(),
        r_n: child.root.r,
        mult: child.root.multiplicity,
        m_n: child.m,
    }
}

/// Stop test in priority order: zero tail, simple root, linear z monomial.
fn stop_for(child: &StarChild) -> Option<StopReason> {
    if child.next.is_zero() {
        Some(StopReason::ZeroTail)
    } else if child.root.multiplicity == 1 {
        Some(StopReason::SimpleRoot)
    } else if child.next.coeff(rat_int(0), 1).is_some() {
        Some(StopReason::IFTMonomial)
    } else {
        None
    }
}

/// Every descending path from f, each stopped at its first stop criterion
/// and then extended to `opts.terms` nonzero terms where possible.
pub fn expand(f: &PuiseuxPoly, opts: &ExpandOptions) -> Result<Vec<ExpansionPath>, ExpansionError> {
    let children = star_procedure(f)?;
    let run = |child: &StarChild| -> Result<Vec<ExpansionPath>, ExpansionError> {
        let mut out = Vec::new();
        walk(child, Vec::new(), opts, &mut out)?;
        Ok(out)
    };
    let per_child: Vec<Result<Vec<ExpansionPath>, ExpansionError>> = if opts.parallel {
        children.par_iter().map(run).collect()
    } else {
        children.iter().map(run).collect()
    };
    let mut paths = Vec::new();
    for r in per_child {
        paths.extend(r?);
    }
    if paths.iter().any(|p| p.stop_reason == StopReason::DepthCap) {
        return Err(ExpansionError::DepthCapReached {
            cap: opts.depth_cap,
            partial: Box::new(paths),
        });
    }
    Ok(paths)
}

fn walk(
    child: &StarChild,
    mut prefix: Vec<PathStep>,
    opts: &ExpandOptions,
    out: &mut Vec<ExpansionPath>,
) -> Result<(), ExpansionError> {
    check_step(child)?;
    prefix.push(step_from(child));
    if let Some(reason) = stop_for(child) {
        let depth = prefix.len();
        let mut path = ExpansionPath {
            steps: prefix,
            stop_reason: reason,
            stop_depth: depth,
            tail: child.next.clone(),
        };
        extend_path(&mut path, opts.terms)?;
        out.push(path);
        return Ok(());
    }
    if prefix.len() >= opts.depth_cap {
        let depth = prefix.len();
        out.push(ExpansionPath {
            steps: prefix,
            stop_reason: StopReason::DepthCap,
            stop_depth: depth,
            tail: child.next.clone(),
        });
        return Ok(());
    }
    for grandchild in star_procedure(&child.next)? {
        walk(&grandchild, prefix.clone(), opts, out)?;
    }
    Ok(())
}

/// Continue a stopped path with the unique height-one edge until it has
/// `terms` nonzero terms or its tail vanishes.
pub fn extend_path(path: &mut ExpansionPath, terms: usize) -> Result<(), ExpansionError> {
    if !matches!(
        path.stop_reason,
        StopReason::SimpleRoot | StopReason::IFTMonomial
    ) {
        return Ok(());
    }
    while path.nonzero_terms() < terms {
        let children = star_procedure(&path.tail)?;
        let [child] = children.as_slice() else {
            return Err(ExpansionError::Invariant(format!(
                "extension expected one child, found {}",
                children.len()
            )));
        };
        check_step(child)?;
        path.steps.push(step_from(child));
        path.tail = child.next.clone();
        if path.tail.is_zero() {
            path.stop_reason = StopReason::ZeroTail;
            break;
        }
    }
    Ok(())
}
