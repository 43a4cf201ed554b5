use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::CPoly;
use crate::collision::realroots::{self, RealRoot};
use crate::roots::{self, RootList};
use crate::Result;

pub type Q = BigRational;
pub type C<S> = Complex<S>;

static EPS: OnceLock<f64> = OnceLock::new();

/// Global tolerance of the approximate backend. Read once from
/// `LINKFORGE_EPS`, default `1e-9`.
pub fn eps() -> f64 {
    *EPS.get_or_init(|| {
        std::env::var("LINKFORGE_EPS")
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|e| e.is_finite() && *e > 0.0)
            .unwrap_or(1e-9)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Approx,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Approx => "approx",
        })
    }
}

/// Real scalar of a backend. Complex numbers are `num_complex::Complex<S>`.
///
/// The two implementations are [`Q`] (exact) and `f64` (approximate). Values
/// of different backends never meet: every generic routine is instantiated
/// for exactly one of them.
pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static {
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;
    fn ratio(n: i64, d: i64) -> Self;
    /// Exact backend stores the binary value of `v` exactly.
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// Zero test. Exact: `== 0`; approx: `|x| <= eps * max(1, scale)`.
    fn near_zero(&self, scale: f64) -> bool;
    fn parse_lit(s: &str) -> Option<Self>;
    fn fmt_lit(&self) -> String;

    fn complex_roots(p: &CPoly<Self>) -> Result<RootList<Self>>;
    fn gcd2(a: &CPoly<Self>, b: &CPoly<Self>) -> CPoly<Self>;
    /// Real roots of a real polynomial (ascending coefficients).
    fn real_roots(p: &[Self]) -> Result<Vec<RealRoot<Self>>>;
}

impl Scalar for Q {
    const BACKEND: Backend = Backend::Exact;

    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn ratio(n: i64, d: i64) -> Self {
        Q::new(BigInt::from(n), BigInt::from(d))
    }
    fn from_f64(v: f64) -> Self {
        Q::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // huge numerator/denominator: divide in f64 after scaling
            let n = self.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = self.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn near_zero(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn parse_lit(s: &str) -> Option<Self> {
        parse_rational(s)
    }
    fn fmt_lit(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn complex_roots(p: &CPoly<Self>) -> Result<RootList<Self>> {
        roots::exact_roots(p)
    }
    fn gcd2(a: &CPoly<Self>, b: &CPoly<Self>) -> CPoly<Self> {
        roots::euclid_gcd(a, b)
    }
    fn real_roots(p: &[Self]) -> Result<Vec<RealRoot<Self>>> {
        Ok(realroots::exact_real_roots(p))
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Approx;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn near_zero(&self, scale: f64) -> bool {
        self.abs() <= eps() * scale.max(1.0)
    }
    fn parse_lit(s: &str) -> Option<Self> {
        if let Ok(v) = f64::from_str(s.trim()) {
            return v.is_finite().then_some(v);
        }
        parse_rational(s).map(|q| Scalar::to_f64(&q))
    }
    fn fmt_lit(&self) -> String {
        // shortest round-trip digits, never in exponent form (the text
        // grammar reads `e` as η)
        format!("{self}")
    }
    fn complex_roots(p: &CPoly<Self>) -> Result<RootList<Self>> {
        roots::approx_roots(p)
    }
    fn gcd2(a: &CPoly<Self>, b: &CPoly<Self>) -> CPoly<Self> {
        roots::cluster_gcd(a, b)
    }
    fn real_roots(p: &[Self]) -> Result<Vec<RealRoot<Self>>> {
        realroots::approx_real_roots(p)
    }
}

/// `p`, `p/q`, or a finite decimal such as `-1.25` (converted exactly).
fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Some(Q::from_integer(n));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|ch| ch.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
    let d = num_traits::pow(BigInt::from(10u32), frac.len());
    let q = Q::new(n, d);
    Some(if neg { -q } else { q })
}

pub fn c<S: Scalar>(re: S, im: S) -> C<S> {
    Complex::new(re, im)
}

/// Gaussian integer shortcut, mostly for tests and examples.
pub fn ci<S: Scalar>(re: i64, im: i64) -> C<S> {
    Complex::new(S::from_i64(re), S::from_i64(im))
}

pub fn cf<S: Scalar>(z: &C<S>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn cis_zero<S: Scalar>(z: &C<S>) -> bool {
    match S::BACKEND {
        Backend::Exact => z.re.is_zero() && z.im.is_zero(),
        Backend::Approx => cf(z).norm() <= eps(),
    }
}

/// Scale-aware equality: approx uses `|a - b| <= eps * (1 + |a|)`.
pub fn ceq<S: Scalar>(a: &C<S>, b: &C<S>) -> bool {
    match S::BACKEND {
        Backend::Exact => a == b,
        Backend::Approx => {
            let (fa, fb) = (cf(a), cf(b));
            (fa - fb).norm() <= eps() * (1.0 + fa.norm())
        }
    }
}

pub fn cis_real<S: Scalar>(z: &C<S>) -> bool {
    match S::BACKEND {
        Backend::Exact => z.im.is_zero(),
        Backend::Approx => {
            let f = cf(z);
            f.im.abs() <= eps() * (1.0 + f.norm())
        }
    }
}
