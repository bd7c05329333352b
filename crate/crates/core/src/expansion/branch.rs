use std::cmp::Ordering;

use num_integer::Integer;

use super::{ExpansionPath, StopReason};
use crate::numeric::{Coeff, Ctx};
use crate::poly::{rat, Rat};

/// A parameterization (T^r, p(T)) of one branch, or the vertical line x = 0.
#[derive(Clone, Debug)]
pub struct Branch {
    pub r: u32,
    /// (coefficient, T-exponent), exponents strictly increasing.
    pub terms: Vec<(Coeff, u32)>,
    /// p is the whole series, not a truncation.
    pub exact: bool,
    pub branch_mult: u32,
    /// Direction (c, d) of the tangent line d·x - c·y = 0.
    pub tangent: (Coeff, Coeff),
    /// p is known to be correct through this T-exponent.
    pub truncation_order: u32,
    /// The line x = 0, parameterized as (0, T).
    pub vertical: bool,
    pub stop: StopReason,
    /// How many times the branch counts (factor multiplicity in a factored run).
    pub repetition: u32,
}

impl Branch {
    /// The vertical branch (0, T).
    pub fn vertical(ctx: &Ctx) -> Branch {
        Branch {
            r: 1,
            terms: vec![(ctx.one(), 1)],
            exact: true,
            branch_mult: 1,
            tangent: (ctx.zero(), ctx.one()),
            truncation_order: 1,
            vertical: true,
            stop: StopReason::ZeroTail,
            repetition: 1,
        }
    }

    /// First x-exponent e/r of p, if any.
    pub fn first_exponent(&self) -> Option<Rat> {
        self.terms
            .first()
            .map(|(_, e)| rat(*e as i64, self.r as i64))
    }

    pub fn coeff_at(&self, e: u32) -> Option<&Coeff> {
        self.terms.iter().find(|(_, k)| *k == e).map(|(c, _)| c)
    }

    /// Highest T-exponent through which p is determined.
    pub fn determined_through(&self) -> u64 {
        if self.exact {
            u64::MAX
        } else {
            self.truncation_order as u64
        }
    }

    /// Terms as plain (coefficient, exponent) pairs for back-substitution.
    pub fn series(&self) -> &[(Coeff, u32)] {
        &self.terms
    }
}

/// Turn a stopped path into (T^r, p(T)).
pub fn assemble_branch(ctx: &Ctx, path: &ExpansionPath) -> Branch {
    let series = path.series();
    let r = series.iter().fold(1i64, |acc, (_, e)| acc.lcm(e.denom())) as u32;
    let terms: Vec<(Coeff, u32)> = series
        .into_iter()
        .map(|(c, e)| {
            let t = e * rat(r as i64, 1);
            debug_assert!(t.is_integer());
            (c, t.to_integer() as u32)
        })
        .collect();
    let first = terms.first().map(|(_, e)| *e);
    let m = first.map_or(r, |e| e.min(r));
    let tx = if m == r { ctx.one() } else { ctx.zero() };
    let ty = terms
        .iter()
        .find(|(_, e)| *e == m)
        .map(|(c, _)| c.clone())
        .unwrap_or_else(|| ctx.zero());
    let truncation_order = terms.last().map_or(0, |(_, e)| *e);
    Branch {
        r,
        terms,
        exact: path.stop_reason == StopReason::ZeroTail,
        branch_mult: m,
        tangent: (tx, ty),
        truncation_order,
        vertical: false,
        stop: path.stop_reason,
        repetition: 1,
    }
}

/// Same r and an r-th root of unity ω with p2(T) = p1(ωT) through the
/// exponent both are determined to.
pub fn equivalent(ctx: &Ctx, b1: &Branch, b2: &Branch) -> bool {
    if b1.vertical || b2.vertical {
        return b1.vertical && b2.vertical;
    }
    if b1.r != b2.r {
        return false;
    }
    let bound = b1.determined_through().min(b2.determined_through());
    let mut exps: Vec<u32> = b1
        .terms
        .iter()
        .chain(&b2.terms)
        .map(|(_, e)| *e)
        .filter(|e| (*e as u64) <= bound)
        .collect();
    exps.sort_unstable();
    exps.dedup();
    let zero = ctx.zero();
    ctx.roots_of_unity(b1.r).iter().any(|w| {
        exps.iter().all(|&e| {
            let a = b1.coeff_at(e).unwrap_or(&zero);
            let b = b2.coeff_at(e).unwrap_or(&zero);
            ctx.approx_eq(&(a * &w.powu(e)), b)
        })
    })
}

/// Lexicographic order on the term sequences: exponent first, then the
/// coefficient by (re, im).
pub(crate) fn cmp_terms(ctx: &Ctx, a: &Branch, b: &Branch) -> Ordering {
    for ((ca, ea), (cb, eb)) in a.terms.iter().zip(&b.terms) {
        let o = (rat(*ea as i64, a.r as i64))
            .cmp(&rat(*eb as i64, b.r as i64))
            .then_with(|| ctx.cmp_approx(ca, cb));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

/// Output order: multiplicity descending, first exponent ascending (none
/// last, vertical after everything), then the terms.
pub(crate) fn cmp_output(ctx: &Ctx, a: &Branch, b: &Branch) -> Ordering {
    b.branch_mult
        .cmp(&a.branch_mult)
        .then(a.vertical.cmp(&b.vertical))
        .then_with(|| match (a.first_exponent(), b.first_exponent()) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
        .then_with(|| cmp_terms(ctx, a, b))
}
