//! Terse text grammar for polynomials and canonical text forms.
//!
//! Expressions use `t`, `i`, `e` (for η), rational or decimal literals,
//! `+ - * / ^`, parentheses and juxtaposition. A factor `e` marks the
//! secondary part: `(i t-2)e` is η·(it − 2), so `P = Z + (W)e` reads as
//! Z + ηW regardless of where `e` appears in the term. Division is only by
//! nonzero constants.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::algebra::{CPoly, KElement, MotionPolynomial, Scalar, C};
use crate::{Error, Result};

pub fn format_complex<S: Scalar>(z: &C<S>) -> String {
    let im = z.im.fmt_lit();
    match im.strip_prefix('-') {
        Some(mag) => format!("{}-{}i", z.re.fmt_lit(), mag),
        None => format!("{}+{}i", z.re.fmt_lit(), im),
    }
}

/// `a+bi+(c+di)e`
pub fn format_kelement<S: Scalar>(k: &KElement<S>) -> String {
    format!("{}+({})e", format_complex(&k.z), format_complex(&k.w))
}

pub fn format_cpoly<S: Scalar>(p: &CPoly<S>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, k) in p.coeffs().iter().enumerate().rev() {
        if k.is_zero() {
            continue;
        }
        let coef = format!("({})", format_complex(k));
        terms.push(match i {
            0 => coef,
            1 => format!("{coef}t"),
            _ => format!("{coef}t^{i}"),
        });
    }
    terms.join("+")
}

pub fn format_motion<S: Scalar>(p: &MotionPolynomial<S>) -> String {
    format!("({})+({})e", format_cpoly(p.primal()), format_cpoly(p.secondary()))
}

pub fn parse_motion<S: Scalar>(s: &str) -> Result<MotionPolynomial<S>> {
    let v = Parser::new(s)?.parse_all()?;
    Ok(MotionPolynomial::new(v.a, v.b))
}

/// A polynomial without `e`.
pub fn parse_cpoly<S: Scalar>(s: &str) -> Result<CPoly<S>> {
    let v = Parser::new(s)?.parse_all()?;
    if !v.b.is_zero() {
        return Err(Error::Parse(format!("unexpected η term in `{s}`")));
    }
    Ok(v.a)
}

pub fn parse_complex<S: Scalar>(s: &str) -> Result<C<S>> {
    let p = parse_cpoly::<S>(s)?;
    if p.deg() > 0 {
        return Err(Error::Parse(format!("expected a constant, got `{s}`")));
    }
    Ok(p.coeff(0))
}

pub fn parse_kelement<S: Scalar>(s: &str) -> Result<KElement<S>> {
    let p = parse_motion::<S>(s)?;
    if p.deg() > 0 {
        return Err(Error::Parse(format!("expected an element of 𝕂, got `{s}`")));
    }
    Ok(p.coeff(0))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    T,
    I,
    E,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' | '\n' | '\r' => {}
            '0'..='9' | '.' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_digit() || chars[i + 1] == '.') {
                    i += 1;
                }
                out.push(Tok::Num(chars[start..=i].iter().collect()));
            }
            't' => out.push(Tok::T),
            'i' | 'ı' => out.push(Tok::I),
            'e' | 'η' => out.push(Tok::E),
            '+' => out.push(Tok::Plus),
            '-' | '−' => out.push(Tok::Minus),
            '*' | '·' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' | '[' => out.push(Tok::LParen),
            ')' | ']' => out.push(Tok::RParen),
            _ => return Err(Error::Parse(format!("unexpected character `{ch}` in `{s}`"))),
        }
        i += 1;
    }
    Ok(out)
}

/// a + e·b with e² = 0, multiplied commutatively.
#[derive(Clone, Debug)]
struct Val<S: Scalar> {
    a: CPoly<S>,
    b: CPoly<S>,
}

impl<S: Scalar> Val<S> {
    fn of(a: CPoly<S>) -> Self {
        Val { a, b: CPoly::zero() }
    }
    fn add(&self, o: &Self) -> Self {
        Val { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    fn sub(&self, o: &Self) -> Self {
        Val { a: &self.a - &o.a, b: &self.b - &o.b }
    }
    fn mul(&self, o: &Self) -> Self {
        Val { a: &self.a * &o.a, b: &(&self.a * &o.b) + &(&o.a * &self.b) }
    }
}

struct Parser<S: Scalar> {
    toks: Vec<Tok>,
    pos: usize,
    src: String,
    _s: std::marker::PhantomData<S>,
}

impl<S: Scalar> Parser<S> {
    fn new(s: &str) -> Result<Self> {
        Ok(Parser { toks: lex(s)?, pos: 0, src: s.to_owned(), _s: Default::default() })
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn parse_all(mut self) -> Result<Val<S>> {
        if self.toks.is_empty() {
            return Err(self.err("empty expression"));
        }
        let v = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Val<S>> {
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if neg {
            acc = Val::of(CPoly::zero()).sub(&acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Val<S>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if !d.b.is_zero() || d.a.deg() != 0 {
                        return Err(self.err("division by a non-constant"));
                    }
                    let inv = C::<S>::one() / d.a.coeff(0);
                    acc = Val { a: acc.a.scale(&inv), b: acc.b.scale(&inv) };
                }
                Some(Tok::Num(_) | Tok::T | Tok::I | Tok::E | Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Val<S>> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return Err(self.err("expected exponent"));
            };
            self.pos += 1;
            let e: usize = n.parse().map_err(|_| self.err("bad exponent"))?;
            let mut v = Val::of(CPoly::one());
            for _ in 0..e {
                v = v.mul(&base);
            }
            return Ok(v);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Val<S>> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        Ok(match tok {
            Tok::Num(n) => {
                let x = S::parse_lit(&n).ok_or_else(|| self.err("bad number"))?;
                Val::of(CPoly::constant(Complex::new(x, S::zero())))
            }
            Tok::T => Val::of(CPoly::t()),
            Tok::I => Val::of(CPoly::constant(Complex::new(S::zero(), S::one()))),
            Tok::E => Val { a: CPoly::zero(), b: CPoly::one() },
            Tok::LParen => {
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                v
            }
            Tok::Minus => {
                let v = self.factor()?;
                Val::of(CPoly::zero()).sub(&v)
            }
            _ => return Err(self.err("unexpected token")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ci, Q};

    #[test]
    fn ellipse_text() {
        let p: MotionPolynomial<Q> = parse_motion("(t^2+1)+(i t-2)e").unwrap();
        assert_eq!(p.primal(), &CPoly::new(vec![ci(1, 0), ci(0, 0), ci(1, 0)]));
        assert_eq!(p.secondary(), &CPoly::new(vec![ci(-2, 0), ci(0, 1)]));
    }

    #[test]
    fn eta_convention() {
        let l: KElement<Q> = parse_kelement("-9/5i-(18/35)i e").unwrap();
        assert_eq!(l.z, C::new(Q::zero(), Q::ratio(-9, 5)));
        assert_eq!(l.w, C::new(Q::zero(), Q::ratio(-18, 35)));
    }

    #[test]
    fn canonical_round_trip() {
        let k = KElement::<Q>::new(C::new(Q::ratio(2, 3), Q::ratio(-1, 7)), ci(0, 5));
        let s = format_kelement(&k);
        assert_eq!(s, "2/3-1/7i+(0+5i)e");
        assert_eq!(parse_kelement::<Q>(&s).unwrap(), k);
        let p: MotionPolynomial<Q> = parse_motion("(t-i)(t^2+1)+(t+i)(i t-2)e").unwrap();
        assert_eq!(parse_motion::<Q>(&format_motion(&p)).unwrap(), p);
        let pf: MotionPolynomial<f64> = parse_motion("(0.5t^2+1)+(1.25i t-2)e").unwrap();
        assert_eq!(parse_motion::<f64>(&format_motion(&pf)).unwrap(), pf);
    }

    #[test]
    fn errors() {
        assert!(parse_motion::<Q>("t+").is_err());
        assert!(parse_motion::<Q>("t/t").is_err());
        assert!(parse_motion::<Q>("x").is_err());
        assert!(parse_cpoly::<Q>("t+e").is_err());
        assert!(parse_kelement::<Q>("t").is_err());
    }
}
