//! Arbitrary-precision complex coefficients and the run-wide tolerance.
//!
//! Every coefficient of a computation carries the same binary precision,
//! fixed once in a [`Ctx`]. All "is this zero" and "are these equal"
//! decisions go through the context's ε.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_base::{Sign, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Binary arbitrary-precision float used for both parts of a [`Coeff`].
pub type Float = FBig<HalfEven, 2>;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

/// Precision and zero tolerance shared by one run.
#[derive(Clone, Debug)]
pub struct Ctx {
    bits: usize,
    eps: Float,
    unit_roundoff: Float,
}

impl Ctx {
    /// Context with ε = 2^(-bits/2).
    pub fn new(bits: usize) -> Self {
        assert!(bits >= 16, "precision below 16 bits is not supported");
        let eps = Float::from_parts(IBig::ONE, -((bits / 2) as isize));
        Self::build(bits, eps)
    }

    /// Context with an explicit ε.
    pub fn with_eps(bits: usize, eps: f64) -> Self {
        assert!(bits >= 16, "precision below 16 bits is not supported");
        assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
        let eps = Float::try_from(eps)
            .expect("finite eps")
            .with_precision(bits)
            .value();
        Self::build(bits, eps)
    }

    fn build(bits: usize, eps: Float) -> Self {
        let eps = eps.with_precision(bits).value();
        let unit_roundoff = Float::from_parts(IBig::ONE, -(bits as isize))
            .with_precision(bits)
            .value();
        Ctx {
            bits,
            eps,
            unit_roundoff,
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn eps(&self) -> &Float {
        &self.eps
    }

    /// 2^(-bits): the rounding granularity of the working precision.
    pub fn unit_roundoff(&self) -> &Float {
        &self.unit_roundoff
    }

    pub fn eps_f64(&self) -> f64 {
        self.eps.to_f64().value()
    }

    pub fn float(&self, v: i64) -> Float {
        Float::from(v).with_precision(self.bits).value()
    }

    pub fn float_from_f64(&self, v: f64) -> Float {
        Float::try_from(v)
            .expect("finite value")
            .with_precision(self.bits)
            .value()
    }

    pub fn float_from_ratio(&self, num: &BigInt, den: &BigInt) -> Float {
        let n = Float::from(to_ibig(num)).with_precision(self.bits).value();
        let d = Float::from(to_ibig(den)).with_precision(self.bits).value();
        n / d
    }

    /// Parse a decimal string such as `-1.25e-3` at the working precision.
    pub fn float_from_decimal(&self, s: &str) -> Option<Float> {
        let q = parse_decimal_exact(s)?;
        Some(self.float_from_ratio(q.numer(), q.denom()))
    }

    pub fn zero(&self) -> Coeff {
        Coeff::new(self.float(0), self.float(0))
    }

    pub fn one(&self) -> Coeff {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> Coeff {
        Coeff::new(self.float(v), self.float(0))
    }

    pub fn imag_unit(&self) -> Coeff {
        Coeff::new(self.float(0), self.float(1))
    }

    pub fn rational(&self, q: &BigRational) -> Coeff {
        Coeff::new(self.float_from_ratio(q.numer(), q.denom()), self.float(0))
    }

    pub fn complex_f64(&self, re: f64, im: f64) -> Coeff {
        Coeff::new(self.float_from_f64(re), self.float_from_f64(im))
    }

    pub fn is_zero(&self, c: &Coeff) -> bool {
        c.norm_sqr() <= &self.eps * &self.eps
    }

    /// |a - b| <= ε · max(1, |a|, |b|).
    pub fn approx_eq(&self, a: &Coeff, b: &Coeff) -> bool {
        self.approx_eq_tol(a, b, &self.eps)
    }

    pub fn approx_eq_tol(&self, a: &Coeff, b: &Coeff, tol: &Float) -> bool {
        let scale = a.abs().max(b.abs()).max(self.float(1));
        let bound = tol * &scale;
        (a - b).norm_sqr() <= &bound * &bound
    }

    /// Total order on coefficients by (re, im) where parts closer than ε
    /// (relative) compare equal.
    pub fn cmp_approx(&self, a: &Coeff, b: &Coeff) -> Ordering {
        let by_part = |x: &Float, y: &Float| -> Ordering {
            let scale = x
                .clone()
                .abs_val()
                .max(y.clone().abs_val())
                .max(self.float(1));
            if (x - y).abs_val() <= &self.eps * &scale {
                Ordering::Equal
            } else if x < y {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        };
        by_part(&a.re, &b.re).then_with(|| by_part(&a.im, &b.im))
    }

    /// Zero out a real or imaginary part that is ε-small relative to |c|.
    pub fn chop(&self, c: &Coeff) -> Coeff {
        let scale = c.abs().max(self.float(1));
        let bound = &self.eps * &scale;
        let clean = |x: &Float| {
            if x.clone().abs_val() <= bound {
                self.float(0)
            } else {
                x.clone()
            }
        };
        Coeff::new(clean(&c.re), clean(&c.im))
    }

    /// The `n` complex `n`-th roots of unity, ω_k = exp(2πik/n).
    pub fn roots_of_unity(&self, n: u32) -> Vec<Coeff> {
        assert!(n >= 1);
        (0..n)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let mut z = self.complex_f64(angle.cos(), angle.sin());
                // Newton on z^n - 1 from the f64 guess
                if n > 1 {
                    let nn = self.int(n as i64);
                    for _ in 0..(self.bits.ilog2() + 4) {
                        let zn1 = z.powu(n - 1);
                        let num = &(&zn1 * &z) - &self.one();
                        let den = &nn * &zn1;
                        z = &z - &num.div(&den);
                    }
                }
                if k == 0 {
                    z = self.one();
                }
                z
            })
            .collect()
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::new(DEFAULT_PRECISION)
    }
}

/// Exact rational value of a decimal literal like `12.5`, `-3e-2` or `.75`.
pub fn parse_decimal_exact(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(digits);
    if shift >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Some(if neg { -q } else { q })
}

fn to_ibig(v: &BigInt) -> IBig {
    let (sign, bytes) = v.to_bytes_le();
    let mag = dashu_int::UBig::from_le_bytes(&bytes);
    match sign {
        num_bigint::Sign::Minus => -IBig::from(mag),
        _ => IBig::from(mag),
    }
}

trait AbsVal {
    fn abs_val(self) -> Self;
}

impl AbsVal for Float {
    fn abs_val(self) -> Self {
        if self.sign() == Sign::Negative {
            -self
        } else {
            self
        }
    }
}

/// A complex number with arbitrary-precision real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Coeff {
    pub re: Float,
    pub im: Float,
}

impl Coeff {
    pub fn new(re: Float, im: Float) -> Self {
        Coeff { re, im }
    }

    pub fn norm_sqr(&self) -> Float {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Float {
        let n = self.norm_sqr();
        if n.repr().is_zero() {
            n
        } else {
            n.sqrt()
        }
    }

    pub fn conj(&self) -> Coeff {
        Coeff::new(self.re.clone(), -self.im.clone())
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        let den = other.norm_sqr();
        let num = self * &other.conj();
        Coeff::new(&num.re / &den, &num.im / &den)
    }

    pub fn scale(&self, s: &Float) -> Coeff {
        Coeff::new(&self.re * s, &self.im * s)
    }

    pub fn powu(&self, n: u32) -> Coeff {
        let mut result = Coeff::new(
            Float::ONE
                .with_precision(self.re.precision().max(1))
                .value(),
            self.re.clone() * Float::ZERO,
        );
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Coeff {
        let r = self.abs();
        if r.repr().is_zero() {
            return self.clone();
        }
        let two = Float::from(2);
        let re_part = (&r + &self.re) / &two;
        let im_part = (&r - &self.re) / &two;
        let re = sqrt_nonneg(re_part);
        let mut im = sqrt_nonneg(im_part);
        if self.im.sign() == Sign::Negative {
            im = -im;
        }
        Coeff::new(re, im)
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64().value()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64().value()
    }

    pub fn abs_f64(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }

    /// Decimal rendering of the real part with `digits` significant digits.
    pub fn re_decimal(&self, digits: usize) -> String {
        float_to_decimal(&self.re, digits)
    }

    pub fn im_decimal(&self, digits: usize) -> String {
        float_to_decimal(&self.im, digits)
    }
}

fn sqrt_nonneg(v: Float) -> Float {
    if v.sign() == Sign::Negative || v.repr().is_zero() {
        v * Float::ZERO
    } else {
        v.sqrt()
    }
}

/// Plain decimal rendering with `digits` significant digits, no exponent
/// marker for moderate magnitudes.
pub fn float_to_decimal(v: &Float, digits: usize) -> String {
    if v.repr().is_zero() {
        return "0".to_string();
    }
    let d = v.to_decimal().value().with_precision(digits).value();
    let s = d.to_string();
    normalize_decimal(&s)
}

fn normalize_decimal(s: &str) -> String {
    // DBig prints either plain digits or a scientific form; strip trailing
    // zeros in the fractional part for stable output
    if s.contains('e') || s.contains('E') || !s.contains('.') {
        return s.to_string();
    }
    let trimmed = s.trim_end_matches('0');
    trimmed.trim_end_matches('.').to_string()
}

/// Rational approximation helper used only for diagnostics.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if q.is_negative() {
        -(n.abs() / d)
    } else {
        n / d
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        Coeff::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        Coeff::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        Coeff::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        &self + &rhs
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        &self - &rhs
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl fmt::Display for Coeff {
    /// Short human-readable form (12 significant digits).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_complex(self, 12))
    }
}

/// `a`, `b*I` or `(a + b*I)` with `digits` significant digits per part.
pub fn format_complex(c: &Coeff, digits: usize) -> String {
    let re_zero = c.re.repr().is_zero();
    let im_zero = c.im.repr().is_zero();
    let re = float_to_decimal(&c.re, digits);
    let im = float_to_decimal(&c.im, digits);
    match (re_zero, im_zero) {
        (_, true) => re,
        (true, false) => format!("{im}*I"),
        (false, false) => {
            if let Some(stripped) = im.strip_prefix('-') {
                format!("({re} - {stripped}*I)")
            } else {
                format!("({re} + {im}*I)")
            }
        }
    }
}
