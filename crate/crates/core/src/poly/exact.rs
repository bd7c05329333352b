//! Exact rational polynomials in Q[x, y] and the squarefree test.
//!
//! The test computes gcd(f, ∂f/∂y) in Q[x][y] by a primitive
//! pseudo-remainder sequence: coefficients are univariate polynomials in x,
//! and every remainder is divided by its content to keep sizes down. A
//! squarefree fiber f(x0, y) settles most inputs before the PRS runs.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{rat_int, PuiseuxPoly};
use crate::numeric::Ctx;

/// Polynomial with rational coefficients and natural exponents, keyed by
/// (x-exponent, y-exponent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl ExactPoly {
    pub fn zero() -> Self {
        ExactPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: BigRational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        ExactPoly { terms }
    }

    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        let mut p = ExactPoly::zero();
        for &(i, j, a) in terms {
            p = p.add(&ExactPoly::monomial(
                BigRational::from_integer(a.into()),
                i,
                j,
            ));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn insert_add(terms: &mut BTreeMap<(u32, u32), BigRational>, k: (u32, u32), c: BigRational) {
        let v = terms.entry(k).or_insert_with(BigRational::zero);
        *v += c;
        if v.is_zero() {
            terms.remove(&k);
        }
    }

    pub fn add(&self, other: &ExactPoly) -> ExactPoly {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            Self::insert_add(&mut terms, *k, c.clone());
        }
        ExactPoly { terms }
    }

    pub fn neg(&self) -> ExactPoly {
        ExactPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &ExactPoly) -> ExactPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExactPoly) -> ExactPoly {
        let mut terms = BTreeMap::new();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                Self::insert_add(&mut terms, (i1 + i2, j1 + j2), c1 * c2);
            }
        }
        ExactPoly { terms }
    }

    pub fn scale(&self, s: &BigRational) -> ExactPoly {
        if s.is_zero() {
            return ExactPoly::zero();
        }
        ExactPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> ExactPoly {
        let mut out = ExactPoly::constant(BigRational::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Largest k with x^k dividing f (0 for the zero polynomial).
    pub fn x_valuation(&self) -> u32 {
        self.terms.keys().map(|(i, _)| *i).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn to_numeric(&self, ctx: &Arc<Ctx>) -> PuiseuxPoly {
        PuiseuxPoly::from_terms(
            ctx,
            self.terms
                .iter()
                .map(|((i, j), c)| (rat_int(*i as i64), *j, ctx.rational(c))),
        )
    }

    /// View as a polynomial in y over Q[x]: index = y-degree.
    fn as_y_poly(&self) -> YPoly {
        let deg = self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0) as usize;
        let mut out = vec![XPoly::zero(); deg + 1];
        for ((i, j), c) in &self.terms {
            out[*j as usize].set(*i as usize, c.clone());
        }
        trim_y(out)
    }
}

/// True iff gcd(f, ∂f/∂y) has y-degree 0.
pub fn squarefree_exact(f: &ExactPoly) -> bool {
    let a = f.as_y_poly();
    if a.len() <= 1 {
        // no y at all: nothing to square in the y direction
        return true;
    }
    let da: YPoly = trim_y(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.scale(&BigRational::from_integer(BigInt::from(j))))
            .collect(),
    );
    squarefree_on_a_fiber(&a) || y_degree(&prs_gcd(a, da)) == 0
}

/// Sufficient test: if f(x0, y) keeps its y-degree and is squarefree, so is
/// f. A repeated factor g^2 would survive as g(x0, y)^2.
fn squarefree_on_a_fiber(a: &YPoly) -> bool {
    let lead = a.last().expect("nonempty");
    [3i64, -2, 5].into_iter().any(|x0| {
        let x0 = BigRational::from_integer(BigInt::from(x0));
        if lead.eval(&x0).is_zero() {
            return false;
        }
        let u = XPoly(a.iter().map(|c| c.eval(&x0)).collect());
        u.gcd(&u.derivative()).degree() == 0
    })
}

/// Dense univariate polynomial over Q, index = x-degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct XPoly(Vec<BigRational>);

impl XPoly {
    fn zero() -> Self {
        XPoly(Vec::new())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    fn set(&mut self, i: usize, c: BigRational) {
        if self.0.len() <= i {
            self.0.resize(i + 1, BigRational::zero());
        }
        self.0[i] = c;
        self.trim();
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    fn add(&self, o: &XPoly) -> XPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![BigRational::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        let mut p = XPoly(v);
        p.trim();
        p
    }

    fn sub(&self, o: &XPoly) -> XPoly {
        self.add(&o.scale(&-BigRational::one()))
    }

    fn mul(&self, o: &XPoly) -> XPoly {
        if self.is_zero() || o.is_zero() {
            return XPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let mut p = XPoly(v);
        p.trim();
        p
    }

    fn scale(&self, s: &BigRational) -> XPoly {
        let mut p = XPoly(self.0.iter().map(|c| c * s).collect());
        p.trim();
        p
    }

    /// Euclidean division over Q.
    fn divrem(&self, d: &XPoly) -> (XPoly, XPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(d.degree())];
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let c = r.lead() / d.lead();
            for (i, dc) in d.0.iter().enumerate() {
                let t = &r.0[i + shift] - &c * dc;
                r.0[i + shift] = t;
            }
            q[shift] = c;
            r.trim();
        }
        let mut q = XPoly(q);
        q.trim();
        (q, r)
    }

    fn eval(&self, t: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    fn derivative(&self) -> XPoly {
        let mut p = XPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        );
        p.trim();
        p
    }

    fn monic(&self) -> XPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = BigRational::one() / self.lead();
        self.scale(&inv)
    }

    fn gcd(&self, o: &XPoly) -> XPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

type YPoly = Vec<XPoly>;

fn trim_y(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn y_degree(p: &YPoly) -> usize {
    p.len().saturating_sub(1)
}

fn content(p: &YPoly) -> XPoly {
    p.iter()
        .filter(|c| !c.is_zero())
        .fold(XPoly::zero(), |g, c| {
            if g.is_zero() {
                c.monic()
            } else {
                g.gcd(c)
            }
        })
}

fn primitive_part(p: &YPoly) -> YPoly {
    let c = content(p);
    if c.is_zero() {
        return p.clone();
    }
    p.iter().map(|a| a.divrem(&c).0).collect()
}

/// Pseudo-remainder of a by b in Q[x][y].
fn prem(a: &YPoly, b: &YPoly) -> YPoly {
    let db = y_degree(b);
    let lb = b[db].clone();
    let mut r = a.clone();
    while !r.is_empty() && y_degree(&r) >= db {
        let dr = y_degree(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        // r <- lb * r - lr * y^shift * b
        let mut next: YPoly = r.iter().map(|c| c.mul(&lb)).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&bc.mul(&lr));
        }
        r = trim_y(next);
    }
    r
}

fn prs_gcd(a: YPoly, b: YPoly) -> YPoly {
    let (mut a, mut b) = (primitive_part(&a), primitive_part(&b));
    if y_degree(&a) < y_degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive_part(&r) };
    }
    a
}
