//! Text input: a small expression grammar over x, y, I, sqrt and numbers.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := atom ('^' exponent)?
//! atom     := 'x' | 'y' | 'I' | number | '(' expr ')' | 'sqrt' '(' expr ')'
//! exponent := integer | '(' integer '/' integer ')'
//! ```
//!
//! Numbers may be integers or decimals (`0.25`, `1e-3`), read exactly.
//! Division is only by constants.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::exact::ExactPoly;
use super::{rat, rat_int, PuiseuxPoly, Rat};
use crate::numeric::{parse_decimal_exact, Ctx};

/// Largest integer exponent accepted on a non-trivial base.
const MAX_POWER: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

/// A parsed polynomial plus its exact rational form when one exists (no
/// sqrt, no I, integer exponents).
#[derive(Clone, Debug)]
pub struct ParsedPoly {
    pub poly: PuiseuxPoly,
    pub exact: Option<ExactPoly>,
}

/// Parse into the normal form at the context's precision.
pub fn parse_poly(text: &str, ctx: &Arc<Ctx>) -> Result<PuiseuxPoly, ParseError> {
    parse_poly_full(text, ctx).map(|p| p.poly)
}

pub fn parse_poly_full(text: &str, ctx: &Arc<Ctx>) -> Result<ParsedPoly, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        idx: 0,
        end: text.len(),
    };
    let ast = parser.expr()?;
    if let Some(t) = parser.peek() {
        return err(t.pos, format!("unexpected {}", t.kind.describe()));
    }
    let poly = eval_numeric(&ast, ctx)?;
    let exact = eval_exact(&ast);
    Ok(ParsedPoly { poly, exact })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(q, _) => format!("number {q}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let simple = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(kind) = simple {
            out.push(Token { kind, pos: start });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() || b == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // scientific suffix: e, optional sign, digits
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit = &text[start..i];
            let is_int = lit.bytes().all(|c| c.is_ascii_digit());
            let Some(q) = parse_decimal_exact(lit) else {
                return err(start, format!("malformed number '{lit}'"));
            };
            out.push(Token {
                kind: Tok::Num(q, is_int),
                pos: start,
            });
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                kind: Tok::Ident(text[start..i].to_string()),
                pos: start,
            });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return err(start, format!("unexpected character '{ch}'"));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(BigRational),
    X,
    Y,
    I,
    Sqrt(Box<Expr>, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, Rat, usize),
}

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx)
    }

    fn pos(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn eat(&mut self, kind: &Tok) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &Tok) -> Result<(), ParseError> {
        if self.eat(kind) {
            Ok(())
        } else {
            let found = self
                .peek()
                .map(|t| t.kind.describe())
                .unwrap_or_else(|| "end of input".into());
            err(
                self.pos(),
                format!("expected {}, found {found}", kind.describe()),
            )
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.eat(&Tok::Minus) {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat(&Tok::Plus);
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.peek().map(|t| &t.kind) == Some(&Tok::Slash) {
                let pos = self.pos();
                self.idx += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().map(|t| &t.kind) == Some(&Tok::Caret) {
            let pos = self.pos();
            self.idx += 1;
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e, pos));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let neg = self.eat(&Tok::Minus);
        match self.peek().map(|t| t.kind.clone()) {
            Some(Tok::Num(q, true)) => {
                self.idx += 1;
                let v = q
                    .to_integer()
                    .to_i64()
                    .filter(|v| *v <= i32::MAX as i64)
                    .ok_or(ParseError {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                if neg {
                    return err(pos, "negative exponent");
                }
                Ok(v)
            }
            _ => err(pos, "expected an integer exponent"),
        }
    }

    fn exponent(&mut self) -> Result<Rat, ParseError> {
        if self.eat(&Tok::LParen) {
            let num = self.integer()?;
            let e = if self.eat(&Tok::Slash) {
                let den_pos = self.pos();
                let den = self.integer()?;
                if den == 0 {
                    return err(den_pos, "zero denominator in exponent");
                }
                rat(num, den)
            } else {
                rat_int(num)
            };
            self.expect(&Tok::RParen)?;
            Ok(e)
        } else {
            Ok(rat_int(self.integer()?))
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return err(pos, "unexpected end of input");
        };
        self.idx += 1;
        match tok.kind {
            Tok::Num(q, _) => Ok(Expr::Num(q)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::X),
                "y" => Ok(Expr::Y),
                "I" => Ok(Expr::I),
                "sqrt" => {
                    self.expect(&Tok::LParen)?;
                    let inner = self.expr()?;
                    self.expect(&Tok::RParen)?;
                    Ok(Expr::Sqrt(Box::new(inner), pos))
                }
                _ => err(pos, format!("unknown identifier '{name}'")),
            },
            other => err(pos, format!("unexpected {}", other.describe())),
        }
    }
}

fn as_constant(p: &PuiseuxPoly) -> Option<crate::numeric::Coeff> {
    match p.len() {
        0 => Some(p.ctx().zero()),
        1 if !p.vanishes_at_origin() => Some(p.at_origin()),
        _ => None,
    }
}

fn eval_numeric(e: &Expr, ctx: &Arc<Ctx>) -> Result<PuiseuxPoly, ParseError> {
    Ok(match e {
        Expr::Num(q) => PuiseuxPoly::constant(ctx, ctx.rational(q)),
        Expr::X => PuiseuxPoly::x(ctx),
        Expr::Y => PuiseuxPoly::y(ctx),
        Expr::I => PuiseuxPoly::constant(ctx, ctx.imag_unit()),
        Expr::Sqrt(inner, pos) => {
            let v = eval_numeric(inner, ctx)?;
            let Some(c) = as_constant(&v) else {
                return err(*pos, "sqrt of a non-constant expression");
            };
            PuiseuxPoly::constant(ctx, c.sqrt())
        }
        Expr::Neg(a) => eval_numeric(a, ctx)?.neg(),
        Expr::Add(a, b) => eval_numeric(a, ctx)?.add(&eval_numeric(b, ctx)?),
        Expr::Sub(a, b) => eval_numeric(a, ctx)?.sub(&eval_numeric(b, ctx)?),
        Expr::Mul(a, b) => eval_numeric(a, ctx)?.mul(&eval_numeric(b, ctx)?),
        Expr::Div(a, b, pos) => {
            let d = eval_numeric(b, ctx)?;
            let Some(c) = as_constant(&d) else {
                return err(*pos, "division by a non-constant expression");
            };
            if ctx.is_zero(&c) {
                return err(*pos, "division by zero");
            }
            let inv = ctx.one().div(&c);
            eval_numeric(a, ctx)?.scale(&inv)
        }
        Expr::Pow(base, ex, pos) => {
            let b = eval_numeric(base, ctx)?;
            if ex.is_integer() {
                let n = ex.to_integer();
                if n > MAX_POWER && b.len() > 1 {
                    return err(*pos, "exponent too large");
                }
                if b.len() == 1 {
                    // monomial: raise exactly
                    let ((xe, ye), c) = b.terms().next().map(|(k, c)| (*k, c.clone())).unwrap();
                    let yn = (ye as i64).checked_mul(n).filter(|v| *v <= u32::MAX as i64);
                    let Some(yn) = yn else {
                        return err(*pos, "exponent too large");
                    };
                    PuiseuxPoly::monomial(ctx, c.powu(n as u32), xe * rat_int(n), yn as u32)
                } else {
                    b.pow(n as u32)
                }
            } else {
                // rational powers only make sense on a bare power of x
                let mut it = b.terms();
                match (it.next(), it.next()) {
                    (Some(((xe, 0), c)), None) if ctx.approx_eq(c, &ctx.one()) => {
                        PuiseuxPoly::monomial(ctx, ctx.one(), *xe * *ex, 0)
                    }
                    _ => return err(*pos, "fractional exponent needs a power of x as base"),
                }
            }
        }
    })
}

/// Exact evaluation; `None` as soon as anything irrational or fractional
/// shows up. Only called after numeric evaluation succeeded.
fn eval_exact(e: &Expr) -> Option<ExactPoly> {
    Some(match e {
        Expr::Num(q) => ExactPoly::constant(q.clone()),
        Expr::X => ExactPoly::monomial(BigRational::one(), 1, 0),
        Expr::Y => ExactPoly::monomial(BigRational::one(), 0, 1),
        Expr::I | Expr::Sqrt(..) => return None,
        Expr::Neg(a) => eval_exact(a)?.neg(),
        Expr::Add(a, b) => eval_exact(a)?.add(&eval_exact(b)?),
        Expr::Sub(a, b) => eval_exact(a)?.sub(&eval_exact(b)?),
        Expr::Mul(a, b) => eval_exact(a)?.mul(&eval_exact(b)?),
        Expr::Div(a, b, _) => {
            let d = eval_exact(b)?.as_constant()?;
            if d.is_zero() {
                return None;
            }
            eval_exact(a)?.scale(&(BigRational::one() / d))
        }
        Expr::Pow(base, ex, _) => {
            if !ex.is_integer() || ex.is_negative() {
                return None;
            }
            eval_exact(base)?.pow(ex.to_integer() as u32)
        }
    })
}
