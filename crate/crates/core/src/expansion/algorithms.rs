use std::sync::Arc;

use num_traits::Zero;

use super::branch::{cmp_output, cmp_terms};
use super::{
    assemble_branch, equivalent, expand, Branch, ExpandOptions, ExpansionError, ExpansionPath,
    StopReason,
};
use crate::numeric::Ctx;
use crate::poly::{rat_int, squarefree_exact, ExactPoly, PuiseuxPoly};

/// Representatives of the branch classes at O.
#[derive(Clone, Debug)]
pub struct BranchSet {
    pub branches: Vec<Branch>,
    /// m_O of the curve: order of its lowest form.
    pub point_multiplicity: u32,
    /// Every expansion path, in exploration order.
    pub paths: Vec<ExpansionPath>,
    /// For each branch, the indices into `paths` of its class.
    pub classes: Vec<Vec<usize>>,
}

impl BranchSet {
    pub fn multiplicity_sum(&self) -> u32 {
        self.branches
            .iter()
            .map(|b| b.branch_mult * b.repetition)
            .sum()
    }
}

fn check_reduced(exact: Option<&ExactPoly>, opts: &ExpandOptions) -> Result<(), ExpansionError> {
    if opts.assume_reduced {
        return Ok(());
    }
    match exact {
        Some(e) if squarefree_exact(e) => Ok(()),
        Some(_) => Err(ExpansionError::NotReduced),
        None => Err(ExpansionError::NotExact),
    }
}

fn point_multiplicity(f: &PuiseuxPoly, fallback: u32) -> u32 {
    match f.order() {
        Some(m) if m.is_integer() => m.to_integer() as u32,
        _ => fallback,
    }
}

/// All branches of f = 0 at the origin, one representative per class.
///
/// `exact` is the rational form of the curve used for the squarefree check;
/// it may describe f before a translation, since the check is global.
pub fn branches_at_origin(
    f: &PuiseuxPoly,
    exact: Option<&ExactPoly>,
    opts: &ExpandOptions,
) -> Result<BranchSet, ExpansionError> {
    let ctx = f.ctx().clone();
    if f.is_zero() || !f.vanishes_at_origin() {
        return Err(ExpansionError::NotOnCurve);
    }
    check_reduced(exact, opts)?;
    let (k, g) = f.strip_x().map_err(|_| ExpansionError::NotOnCurve)?;
    if k > rat_int(1) {
        return Err(ExpansionError::NotReduced);
    }
    let paths = if g.vanishes_at_origin() {
        expand(&g, opts)?
    } else {
        Vec::new()
    };
    let mut set = classify(&ctx, paths);
    if !k.is_zero() {
        set.branches.push(Branch::vertical(&ctx));
        set.classes.push(Vec::new());
    }
    sort_set(&ctx, &mut set);
    set.point_multiplicity = point_multiplicity(f, set.multiplicity_sum());
    Ok(set)
}

/// Group paths into equivalence classes and keep the lexicographically
/// largest member of each.
fn classify(ctx: &Ctx, paths: Vec<ExpansionPath>) -> BranchSet {
    let all: Vec<Branch> = paths.iter().map(|p| assemble_branch(ctx, p)).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, b) in all.iter().enumerate() {
        match classes
            .iter()
            .position(|cl| equivalent(ctx, &all[cl[0]], b))
        {
            Some(k) => classes[k].push(i),
            None => classes.push(vec![i]),
        }
    }
    let branches = classes
        .iter()
        .map(|cl| {
            let best = cl
                .iter()
                .copied()
                .max_by(|&a, &b| cmp_terms(ctx, &all[a], &all[b]).then(b.cmp(&a)))
                .expect("nonempty class");
            all[best].clone()
        })
        .collect();
    BranchSet {
        branches,
        point_multiplicity: 0,
        paths,
        classes,
    }
}

fn sort_set(ctx: &Ctx, set: &mut BranchSet) {
    let mut idx: Vec<usize> = (0..set.branches.len()).collect();
    idx.sort_by(|&a, &b| cmp_output(ctx, &set.branches[a], &set.branches[b]).then(a.cmp(&b)));
    set.branches = idx.iter().map(|&i| set.branches[i].clone()).collect();
    set.classes = idx.iter().map(|&i| set.classes[i].clone()).collect();
}

/// Branches of Π f_ℓ^{n_ℓ} from the branches of its factors.
pub fn branches_factored(
    factors: &[(PuiseuxPoly, Option<ExactPoly>, u32)],
    opts: &ExpandOptions,
) -> Result<BranchSet, ExpansionError> {
    let ctx: Option<Arc<Ctx>> = factors.first().map(|(f, _, _)| f.ctx().clone());
    let mut out = BranchSet {
        branches: Vec::new(),
        point_multiplicity: 0,
        paths: Vec::new(),
        classes: Vec::new(),
    };
    for (f, exact, n) in factors {
        if f.is_zero() || !f.vanishes_at_origin() {
            continue;
        }
        let set = branches_at_origin(f, exact.as_ref(), opts)?;
        let offset = out.paths.len();
        out.paths.extend(set.paths);
        out.point_multiplicity += set.point_multiplicity * n;
        for (mut b, cl) in set.branches.into_iter().zip(set.classes) {
            b.repetition *= n;
            out.branches.push(b);
            out.classes
                .push(cl.into_iter().map(|i| i + offset).collect());
        }
    }
    if let Some(ctx) = ctx {
        sort_set(&ctx, &mut out);
    }
    Ok(out)
}

/// The two sets hold the same branches up to equivalence, with the same
/// multiplicities and repetition counts.
pub fn same_branches(ctx: &Ctx, a: &BranchSet, b: &BranchSet) -> bool {
    if a.branches.len() != b.branches.len() {
        return false;
    }
    let mut used = vec![false; b.branches.len()];
    a.branches.iter().all(|x| {
        let hit = b.branches.iter().enumerate().position(|(k, y)| {
            !used[k]
                && x.branch_mult == y.branch_mult
                && x.repetition == y.repetition
                && equivalent(ctx, x, y)
        });
        hit.map(|k| used[k] = true).is_some()
    })
}

/// A branch whose series terminates, with the power t to which
/// (y - p(x)) divides f.
#[derive(Clone, Debug)]
pub struct PolynomialBranch {
    pub branch: Branch,
    pub t: u32,
}

/// Detect a terminating series on a path: either the tail vanished through
/// a virtual edge, or the tail is divisible by a power of its variable.
/// The result is confirmed by back-substitution through T^order.
pub fn detect_polynomial_branch(
    ctx: &Ctx,
    f: &PuiseuxPoly,
    path: &ExpansionPath,
    order: usize,
) -> Option<PolynomialBranch> {
    let (t, mut branch) = if path.stop_reason == StopReason::ZeroTail {
        let last = path.steps.last()?;
        let t = if last.edge.is_virtual { last.mult } else { 1 };
        (t, assemble_branch(ctx, path))
    } else {
        let (t, _) = path.tail.strip_y().ok()?;
        if t == 0 {
            return None;
        }
        (t, assemble_branch(ctx, path))
    };
    branch.exact = true;
    branch.stop = StopReason::ZeroTail;
    let back = f.order_in_t(branch.r, &branch.terms, order);
    back.is_exact_zero()
        .then_some(PolynomialBranch { branch, t })
}

/// Σ branch multiplicities equals the order of f at O.
pub fn multiplicity_sum_check(f: &PuiseuxPoly, bs: &BranchSet) -> bool {
    match f.order() {
        Some(m) if m.is_integer() => m.to_integer() as u32 == bs.multiplicity_sum(),
        _ => false,
    }
}

/// The lowest form of f is proportional to Π (d·x - c·y)^{mult}.
pub fn tangent_cone_check(f: &PuiseuxPoly, bs: &BranchSet) -> bool {
    if !f.has_integer_exponents() {
        return false;
    }
    let ctx = f.ctx();
    let low = f.lowest_form();
    let mut prod = PuiseuxPoly::constant(ctx, ctx.one());
    for b in &bs.branches {
        let (c, d) = &b.tangent;
        let line = PuiseuxPoly::from_terms(ctx, [(rat_int(1), 0, d.clone()), (rat_int(0), 1, -c)]);
        prod = prod.mul(&line.pow(b.branch_mult * b.repetition));
    }
    if prod.order() != low.order() {
        return false;
    }
    let Some((key, lc)) = low
        .terms()
        .max_by(|a, b| a.1.abs_f64().total_cmp(&b.1.abs_f64()))
        .map(|(k, c)| (*k, c.clone()))
    else {
        return false;
    };
    let Some(pc) = prod.coeff(key.0, key.1) else {
        return false;
    };
    let lambda = pc.div(&lc);
    let scaled = low.scale(&lambda);
    let zero = ctx.zero();
    let scale = prod
        .terms()
        .map(|(_, c)| c.abs_f64())
        .fold(1.0f64, f64::max);
    let tol = ctx.eps_f64() * scale;
    let keys: std::collections::BTreeSet<_> = scaled
        .terms()
        .chain(prod.terms())
        .map(|(k, _)| *k)
        .collect();
    keys.into_iter().all(|(i, j)| {
        let a = scaled.coeff(i, j).unwrap_or(&zero);
        let b = prod.coeff(i, j).unwrap_or(&zero);
        (a - b).abs_f64() <= tol
    })
}
