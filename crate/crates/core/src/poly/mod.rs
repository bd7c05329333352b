//! Sparse Puiseux polynomials in (x, y) with exact rational x-exponents,
//! integer y-exponents and high-precision complex coefficients.

mod exact;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::numeric::{float_to_decimal, Coeff, Ctx};

pub use exact::{squarefree_exact, ExactPoly};
pub use parse::{parse_poly, parse_poly_full, ParseError, ParsedPoly};

/// Exact rational exponent.
pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

pub fn rat_int(n: i64) -> Rat {
    Ratio::from_integer(n)
}

/// A monomial key: (x-exponent, y-exponent).
pub type Monomial = (Rat, u32);

/// Sparse polynomial in x^(1/r) and y. Always in normal form: no stored
/// coefficient is ε-zero.
#[derive(Clone, Debug)]
pub struct PuiseuxPoly {
    ctx: Arc<Ctx>,
    terms: BTreeMap<Monomial, Coeff>,
}

/// Collects contributions per monomial together with their absolute size, so
/// cancellation can be judged relative to what went in.
pub(crate) struct Accum {
    map: BTreeMap<Monomial, (Coeff, f64)>,
}

impl Accum {
    pub(crate) fn new() -> Self {
        Accum {
            map: BTreeMap::new(),
        }
    }

    pub(crate) fn add(&mut self, key: Monomial, c: Coeff) {
        let mag = c.abs_f64();
        self.add_with_mag(key, c, mag);
    }

    pub(crate) fn add_with_mag(&mut self, key: Monomial, c: Coeff, mag: f64) {
        match self.map.get_mut(&key) {
            Some((acc, m)) => {
                *acc = &*acc + &c;
                *m += mag;
            }
            None => {
                self.map.insert(key, (c, mag));
            }
        }
    }

    pub(crate) fn finish(self, ctx: &Arc<Ctx>) -> PuiseuxPoly {
        let eps = ctx.eps_f64();
        let terms = self
            .map
            .into_iter()
            .filter(|(_, (c, mag))| c.abs_f64() > eps * mag.max(1.0))
            .map(|(k, (c, _))| (k, c))
            .collect();
        PuiseuxPoly {
            ctx: Arc::clone(ctx),
            terms,
        }
    }
}

impl PuiseuxPoly {
    pub fn zero(ctx: &Arc<Ctx>) -> Self {
        PuiseuxPoly {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<Ctx>, c: Coeff) -> Self {
        Self::monomial(ctx, c, rat_int(0), 0)
    }

    pub fn monomial(ctx: &Arc<Ctx>, c: Coeff, xexp: Rat, yexp: u32) -> Self {
        assert!(!xexp.is_negative(), "negative x-exponent");
        let mut acc = Accum::new();
        acc.add((xexp, yexp), c);
        acc.finish(ctx)
    }

    pub fn x(ctx: &Arc<Ctx>) -> Self {
        Self::monomial(ctx, ctx.one(), rat_int(1), 0)
    }

    pub fn y(ctx: &Arc<Ctx>) -> Self {
        Self::monomial(ctx, ctx.one(), rat_int(0), 1)
    }

    /// Build from (x-exponent, y-exponent, coefficient) triples; repeated
    /// monomials are summed and ε-zero results dropped.
    pub fn from_terms<I>(ctx: &Arc<Ctx>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Rat, u32, Coeff)>,
    {
        let mut acc = Accum::new();
        for (xe, ye, c) in terms {
            assert!(!xe.is_negative(), "negative x-exponent");
            acc.add((xe, ye), c);
        }
        acc.finish(ctx)
    }

    /// Integer-coefficient convenience constructor: (i, j, a) for a·x^i·y^j.
    pub fn from_int_terms(ctx: &Arc<Ctx>, terms: &[(i64, u32, i64)]) -> Self {
        Self::from_terms(
            ctx,
            terms.iter().map(|&(i, j, a)| (rat_int(i), j, ctx.int(a))),
        )
    }

    pub fn ctx(&self) -> &Arc<Ctx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in (x-exponent, y-exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, xexp: Rat, yexp: u32) -> Option<&Coeff> {
        self.terms.get(&(xexp, yexp))
    }

    /// Least common denominator of all x-exponents.
    pub fn denom(&self) -> i64 {
        self.terms
            .keys()
            .fold(1i64, |acc, (xe, _)| acc.lcm(xe.denom()))
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.denom() == 1
    }

    pub fn y_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Value at the origin (the coefficient of x^0 y^0).
    pub fn at_origin(&self) -> Coeff {
        self.terms
            .get(&(rat_int(0), 0))
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    pub fn vanishes_at_origin(&self) -> bool {
        !self.terms.contains_key(&(rat_int(0), 0))
    }

    /// Order at the origin: least total degree i + j over the support.
    pub fn order(&self) -> Option<Rat> {
        self.terms.keys().map(|&(i, j)| i + rat_int(j as i64)).min()
    }

    /// The terms of least total degree.
    pub fn lowest_form(&self) -> PuiseuxPoly {
        let Some(m) = self.order() else {
            return self.clone();
        };
        self.filter(|i, j| i + rat_int(j as i64) == m)
    }

    /// Keep only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(Rat, u32) -> bool) -> PuiseuxPoly {
        PuiseuxPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| keep(*i, *j))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &PuiseuxPoly) -> PuiseuxPoly {
        let mut acc = Accum::new();
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            acc.add(*k, c.clone());
        }
        acc.finish(&self.ctx)
    }

    pub fn neg(&self) -> PuiseuxPoly {
        PuiseuxPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &PuiseuxPoly) -> PuiseuxPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PuiseuxPoly) -> PuiseuxPoly {
        let mut acc = Accum::new();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                acc.add((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        acc.finish(&self.ctx)
    }

    pub fn scale(&self, s: &Coeff) -> PuiseuxPoly {
        let mut acc = Accum::new();
        for (k, c) in &self.terms {
            acc.add(*k, c * s);
        }
        acc.finish(&self.ctx)
    }

    pub fn pow(&self, n: u32) -> PuiseuxPoly {
        let mut result = PuiseuxPoly::constant(&self.ctx, self.ctx.one());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiply by x^a y^b.
    pub fn shift_monomial(&self, a: Rat, b: u32) -> PuiseuxPoly {
        let out: BTreeMap<_, _> = self
            .terms
            .iter()
            .map(|((i, j), c)| ((i + a, j + b), c.clone()))
            .collect();
        assert!(
            out.keys().all(|(i, _)| !i.is_negative()),
            "negative x-exponent"
        );
        PuiseuxPoly {
            ctx: Arc::clone(&self.ctx),
            terms: out,
        }
    }

    /// ∂/∂y.
    pub fn diff_y(&self) -> PuiseuxPoly {
        let mut acc = Accum::new();
        for ((i, j), c) in &self.terms {
            if *j > 0 {
                acc.add((*i, j - 1), c * &self.ctx.int(*j as i64));
            }
        }
        acc.finish(&self.ctx)
    }

    /// f = x^k · g with k maximal.
    pub fn strip_x(&self) -> Result<(Rat, PuiseuxPoly), PolyError> {
        let k = self
            .terms
            .keys()
            .map(|(i, _)| *i)
            .min()
            .ok_or(PolyError::ZeroPolynomial)?;
        Ok((k, self.shift_monomial(-k, 0)))
    }

    /// f = y^e · g with e maximal.
    pub fn strip_y(&self) -> Result<(u32, PuiseuxPoly), PolyError> {
        let e = self
            .terms
            .keys()
            .map(|(_, j)| *j)
            .min()
            .ok_or(PolyError::ZeroPolynomial)?;
        let out = self
            .terms
            .iter()
            .map(|((i, j), c)| ((*i, j - e), c.clone()))
            .collect();
        Ok((
            e,
            PuiseuxPoly {
                ctx: Arc::clone(&self.ctx),
                terms: out,
            },
        ))
    }

    /// f(x, x^r (c + z)) / x^m with m the least x-exponent of the
    /// substituted polynomial. Returns the result (in x, z) and m.
    pub fn shift_substitute(&self, r: Rat, c: &Coeff) -> (PuiseuxPoly, Rat) {
        assert!(!r.is_negative(), "negative shift exponent");
        let ctx = &self.ctx;
        let max_j = self.y_degree().unwrap_or(0) as usize;
        let mut c_pows = Vec::with_capacity(max_j + 1);
        c_pows.push(ctx.one());
        for k in 1..=max_j {
            c_pows.push(&c_pows[k - 1] * c);
        }
        let c_abs = c.abs_f64();
        let mut acc = Accum::new();
        for ((i, j), a) in &self.terms {
            let j = *j as usize;
            let xe = i + r * rat_int(j as i64);
            let a_abs = a.abs_f64();
            let mut binom = 1.0f64;
            let mut binom_exact = num_bigint::BigInt::one();
            for k in 0..=j {
                // C(j, k) c^(j-k) z^k
                let bc = ctx.rational(&num_rational::BigRational::from_integer(
                    binom_exact.clone(),
                ));
                let term = &(a * &bc) * &c_pows[j - k];
                let mag = a_abs * binom * c_abs.powi((j - k) as i32);
                acc.add_with_mag((xe, k as u32), term, mag);
                binom = binom * (j - k) as f64 / (k + 1) as f64;
                binom_exact = binom_exact * (j - k) / (k + 1);
            }
        }
        let out = acc.finish(ctx);
        match out.strip_x() {
            Ok((m, g)) => (g, m),
            Err(_) => (out, rat_int(0)),
        }
    }

    /// Coefficients of g(1, y) by ascending y-degree. Meant for edge
    /// polynomials, whose x-exponents are determined by the y-exponents.
    pub fn y_coefficients_at_x1(&self) -> Vec<Coeff> {
        let deg = self.y_degree().unwrap_or(0) as usize;
        let mut out = vec![self.ctx.zero(); deg + 1];
        for ((_, j), c) in &self.terms {
            out[*j as usize] = &out[*j as usize] + c;
        }
        out
    }

    /// Substitute x -> X, y -> Y. Needs integer exponents.
    pub fn compose(&self, x_sub: &PuiseuxPoly, y_sub: &PuiseuxPoly) -> PuiseuxPoly {
        assert!(
            self.has_integer_exponents(),
            "composition needs integer x-exponents"
        );
        let max_i = self
            .terms
            .keys()
            .map(|(i, _)| i.to_integer())
            .max()
            .unwrap_or(0) as usize;
        let max_j = self.y_degree().unwrap_or(0) as usize;
        let powers = |p: &PuiseuxPoly, n: usize| {
            let mut v = vec![PuiseuxPoly::constant(&self.ctx, self.ctx.one())];
            for k in 1..=n {
                v.push(v[k - 1].mul(p));
            }
            v
        };
        let xp = powers(x_sub, max_i);
        let yp = powers(y_sub, max_j);
        let mut acc = Accum::new();
        for ((i, j), a) in &self.terms {
            let prod = xp[i.to_integer() as usize].mul(&yp[*j as usize]);
            for (k, c) in &prod.terms {
                acc.add(*k, a * c);
            }
        }
        acc.finish(&self.ctx)
    }

    /// f(x + a, y + b).
    pub fn translate(&self, a: &Coeff, b: &Coeff) -> PuiseuxPoly {
        let xs = PuiseuxPoly::x(&self.ctx).add(&PuiseuxPoly::constant(&self.ctx, a.clone()));
        let ys = PuiseuxPoly::y(&self.ctx).add(&PuiseuxPoly::constant(&self.ctx, b.clone()));
        self.compose(&xs, &ys)
    }

    /// Coefficientwise ε-equality.
    pub fn approx_eq(&self, other: &PuiseuxPoly) -> bool {
        let zero = self.ctx.zero();
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).unwrap_or(&zero);
            let b = other.terms.get(k).unwrap_or(&zero);
            self.ctx.approx_eq(a, b)
        })
    }

    /// T-order of f(T^r, Σ c_k T^(e_k)), computed through T^(n-1).
    pub fn order_in_t(&self, r: u32, p_terms: &[(Coeff, u32)], n: usize) -> TOrder {
        assert!(r >= 1);
        let ctx = &self.ctx;
        // p(T) as a dense truncated series, with a magnitude shadow in f64
        let mut p = vec![ctx.zero(); n];
        let mut p_abs = vec![0f64; n];
        for (c, e) in p_terms {
            let e = *e as usize;
            if e < n {
                p[e] = &p[e] + c;
                p_abs[e] += c.abs_f64();
            }
        }
        // group f by y-degree: A_j(T) = Σ_i a_ij T^(r i)
        let deg = self.y_degree().unwrap_or(0) as usize;
        let mut a = vec![vec![ctx.zero(); n]; deg + 1];
        let mut a_abs = vec![vec![0f64; n]; deg + 1];
        for ((i, j), c) in &self.terms {
            let t = *i * rat_int(r as i64);
            assert!(t.is_integer(), "x-exponent not integral in T");
            let t = t.to_integer() as usize;
            if t < n {
                let j = *j as usize;
                a[j][t] = &a[j][t] + c;
                a_abs[j][t] += c.abs_f64();
            }
        }
        // Horner in p
        let mut acc = a[deg].clone();
        let mut acc_abs = a_abs[deg].clone();
        for j in (0..deg).rev() {
            let mut next = a[j].clone();
            let mut next_abs = a_abs[j].clone();
            for (u, au) in acc.iter().enumerate() {
                if acc_abs[u] == 0.0 {
                    continue;
                }
                for v in 0..(n - u) {
                    if p_abs[v] == 0.0 {
                        continue;
                    }
                    next[u + v] = &next[u + v] + &(au * &p[v]);
                    next_abs[u + v] += acc_abs[u] * p_abs[v];
                }
            }
            acc = next;
            acc_abs = next_abs;
        }
        let eps = ctx.eps_f64();
        for (t, c) in acc.iter().enumerate() {
            if c.abs_f64() > eps * acc_abs[t].max(1.0) {
                return TOrder::Finite(t);
            }
        }
        TOrder::AtLeast(n)
    }

    /// Canonical text form that `parse_poly` reads back.
    pub fn to_canonical_string(&self) -> String {
        let digits = self.ctx.bits() * 30103 / 100000 + 3;
        self.render(digits)
    }

    fn render(&self, digits: usize) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut out = String::new();
        for (n, key) in keys.into_iter().enumerate() {
            let c = &self.terms[key];
            let (neg, body) = render_coeff(c, digits);
            let mono = render_monomial(key.0, key.1);
            let piece = match (body.as_str(), mono.is_empty()) {
                ("1", false) => mono,
                (_, true) => body,
                (_, false) => format!("{body}*{mono}"),
            };
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&piece);
        }
        out
    }
}

fn render_coeff(c: &Coeff, digits: usize) -> (bool, String) {
    let re_zero = c.re.repr().is_zero();
    let im_zero = c.im.repr().is_zero();
    if im_zero {
        let s = float_to_decimal(&c.re, digits);
        return match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
    }
    if re_zero {
        let s = float_to_decimal(&c.im, digits);
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        let body = if mag == "1" {
            "I".to_string()
        } else {
            format!("{mag}*I")
        };
        return (neg, body);
    }
    let re = float_to_decimal(&c.re, digits);
    let im = float_to_decimal(&c.im, digits);
    let body = match im.strip_prefix('-') {
        Some(rest) => format!("({re} - {rest}*I)"),
        None => format!("({re} + {im}*I)"),
    };
    (false, body)
}

fn render_monomial(xe: Rat, ye: u32) -> String {
    let mut parts = Vec::new();
    if !xe.is_zero() {
        if xe.is_one() {
            parts.push("x".to_string());
        } else if xe.is_integer() {
            parts.push(format!("x^{}", xe.to_integer()));
        } else {
            parts.push(format!("x^({}/{})", xe.numer(), xe.denom()));
        }
    }
    match ye {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{ye}")),
    }
    parts.join("*")
}

impl fmt::Display for PuiseuxPoly {
    /// Short form with 12 significant digits per coefficient.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(12))
    }
}

/// Result of a truncated order computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TOrder {
    /// First non-negligible coefficient sits at this power of T.
    Finite(usize),
    /// Every coefficient below T^N is ε-zero.
    AtLeast(usize),
}

impl TOrder {
    /// Numeric value; `AtLeast(n)` counts as n.
    pub fn value(self) -> usize {
        match self {
            TOrder::Finite(v) | TOrder::AtLeast(v) => v,
        }
    }

    pub fn is_exact_zero(self) -> bool {
        matches!(self, TOrder::AtLeast(_))
    }

    /// True when the order is known to be strictly above `bound`.
    pub fn exceeds(self, bound: usize) -> bool {
        match self {
            TOrder::Finite(v) => v > bound,
            TOrder::AtLeast(n) => n > bound,
        }
    }
}

impl fmt::Display for TOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TOrder::Finite(v) => write!(f, "{v}"),
            TOrder::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("the zero polynomial has no such factorization")]
    ZeroPolynomial,
}
