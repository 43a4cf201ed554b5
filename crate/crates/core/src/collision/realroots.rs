use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{eps, Scalar, Q};
use crate::roots::companion_eigenvalues;
use crate::Result;

/// A real root of a real polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum RealRoot<S: Scalar> {
    /// Certified exact value (exact backend) or polished float (approx).
    Exact(S),
    /// Irrational root, the only one in (lo, hi].
    Isolated { lo: S, hi: S, approx: f64 },
}

impl<S: Scalar> RealRoot<S> {
    pub fn approx(&self) -> f64 {
        match self {
            RealRoot::Exact(v) => v.to_f64(),
            RealRoot::Isolated { approx, .. } => *approx,
        }
    }
}

type ZPoly = Vec<BigInt>;

fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
}

fn primitive(mut p: ZPoly) -> ZPoly {
    trim(&mut p);
    let g = content(&p);
    if !g.is_zero() && !g.is_one() {
        for a in &mut p {
            *a /= &g;
        }
    }
    p
}

/// Integer polynomial with the same roots as `p`.
fn from_rationals(p: &[Q]) -> ZPoly {
    let l = p.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
    primitive(p.iter().map(|a| a.numer() * (&l / a.denom())).collect())
}

fn derivative(p: &[BigInt]) -> ZPoly {
    p.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

/// Remainder of |lc(b)|^(δ+1)·a by b; the positive multiplier keeps signs,
/// which the Sturm chain needs.
fn sprem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    let lb_abs = lb.abs();
    let mut steps = 0usize;
    while r.len() > db && !r.is_empty() {
        let lr = r[r.len() - 1].clone();
        let shift = r.len() - 1 - db;
        for a in &mut r {
            *a *= &lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] -= &lr * bi;
        }
        r.pop();
        trim(&mut r);
        steps += 1;
    }
    let delta = a.len().saturating_sub(db);
    // multiplied by lb^steps so far; complete to |lb|^delta
    for _ in steps..delta {
        for a in &mut r {
            *a *= &lb_abs;
        }
    }
    if lb.sign() == Sign::Minus && steps % 2 == 1 {
        for a in &mut r {
            *a = -&*a;
        }
    }
    r
}

fn zgcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let (mut a, mut b) = (primitive(a.to_vec()), primitive(b.to_vec()));
    while !b.is_empty() {
        let r = primitive(sprem(&a, &b));
        a = b;
        b = r;
    }
    a
}

/// Exact quotient of integer polynomials, up to a positive constant.
fn zdiv(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = b.len() - 1;
    if a.len() <= db {
        return vec![BigInt::one()];
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    let lb = &b[db];
    // work over ℚ by scaling: rows of r stay integral when multiplied by lb
    for k in (0..q.len()).rev() {
        let top = r[k + db].clone();
        if top.is_zero() {
            continue;
        }
        let g = top.gcd(lb);
        let mul = lb / &g;
        if !mul.is_one() {
            for x in r.iter_mut().chain(q.iter_mut()) {
                *x *= &mul;
            }
        }
        let coef = &r[k + db] / lb;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &coef * bi;
        }
        q[k] = coef;
    }
    let mut q = primitive(q);
    if q.last().is_some_and(|a| a.is_negative()) {
        for a in &mut q {
            *a = -&*a;
        }
    }
    q
}

/// Sign of p(n/d) for d > 0.
fn sign_at(p: &[BigInt], x: &Q) -> i8 {
    let (n, d) = (x.numer(), x.denom());
    // Σ a_i n^i d^(deg−i), Horner with the powers of d folded in
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    for a in p.iter().rev() {
        acc = acc * n + a * &dpow;
        dpow *= d;
    }
    match acc.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

struct Sturm {
    chain: Vec<ZPoly>,
}

impl Sturm {
    fn new(p: ZPoly) -> Self {
        let mut chain = vec![p.clone(), primitive(derivative(&p))];
        loop {
            let n = chain.len();
            if chain[n - 1].len() <= 1 {
                break;
            }
            let mut r = primitive(sprem(&chain[n - 2], &chain[n - 1]));
            if r.is_empty() {
                break;
            }
            for a in &mut r {
                *a = -&*a;
            }
            chain.push(r);
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Q) -> usize {
        let mut v = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = sign_at(p, x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Roots in (lo, hi].
    fn count(&self, lo: &Q, hi: &Q) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

/// Simplest rational (smallest denominator) in the closed interval [a, b],
/// for 0 < a ≤ b. Stern–Brocot descent via continued fractions.
fn simplest_between(a: &Q, b: &Q) -> Q {
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    if fl < b.floor() || b.is_integer() {
        return fl + Q::one();
    }
    // same integer part: recurse on reciprocals of the fractional parts
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}

fn simplest_in(lo: &Q, hi: &Q) -> Q {
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Q::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    simplest_between(lo, hi)
}

fn cauchy_bound(p: &[BigInt]) -> Q {
    let lc = p.last().expect("nonzero").abs();
    let m = p[..p.len() - 1].iter().map(|a| a.abs()).max().unwrap_or_default();
    Q::new(m, lc).ceil() + Q::one()
}

/// Real roots of a real polynomial with rational coefficients, isolated
/// with a Sturm chain on the square-free part. Rational roots (up to the
/// isolation precision) are returned exactly.
pub(crate) fn exact_real_roots(p: &[Q]) -> Vec<RealRoot<Q>> {
    let z = from_rationals(p);
    if z.len() <= 1 {
        return Vec::new();
    }
    let g = zgcd(&z, &derivative(&z));
    let sqf = if g.len() > 1 { zdiv(&z, &g) } else { z };
    if sqf.len() <= 1 {
        return Vec::new();
    }
    let sturm = Sturm::new(sqf.clone());
    let b = cauchy_bound(&sqf);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => out.push(refine(&sqf, lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Q::from_i64(2);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.approx().total_cmp(&b.approx()));
    out
}

/// Shrinks an isolating interval (lo, hi] until the root is either found
/// exactly or bracketed to about 1e-30 relative width.
fn refine(p: &[BigInt], mut lo: Q, mut hi: Q) -> RealRoot<Q> {
    if sign_at(p, &hi) == 0 {
        return RealRoot::Exact(hi);
    }
    let mut s_lo = sign_at(p, &lo);
    if s_lo == 0 {
        // lo is the neighbouring root; p takes the sign of p' just right of it
        s_lo = sign_at(&derivative(p), &lo);
    }
    let two = Q::from_i64(2);
    let tiny = Q::new(BigInt::one(), num_traits::pow(BigInt::from(10), 30));
    let mut round = 0usize;
    loop {
        if round % 4 == 0 {
            let q = simplest_in(&lo, &hi);
            if q > lo && sign_at(p, &q) == 0 {
                return RealRoot::Exact(q);
            }
        }
        let width = &hi - &lo;
        let scale = Q::one() + lo.abs().max(hi.abs());
        if width <= &tiny * scale {
            break;
        }
        let mid = (&lo + &hi) / &two;
        match sign_at(p, &mid) {
            0 => return RealRoot::Exact(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
        round += 1;
    }
    let approx = ((&lo + &hi) / two).to_f64();
    RealRoot::Isolated { lo, hi, approx }
}

/// Real roots of a float polynomial: companion eigenvalues that are real
/// within `sqrt(eps)` relative, polished by Newton on the real line.
pub(crate) fn approx_real_roots(p: &[f64]) -> Result<Vec<RealRoot<f64>>> {
    let scale = p.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let mut p = p.to_vec();
    while p.last().is_some_and(|a| a.abs() <= 64.0 * f64::EPSILON * scale) {
        p.pop();
    }
    if p.len() <= 1 {
        return Ok(Vec::new());
    }
    let lc = *p.last().unwrap();
    let monic: Vec<Complex<f64>> = p.iter().map(|a| Complex::new(a / lc, 0.0)).collect();
    let tol = eps().sqrt();
    let mut roots: Vec<f64> = companion_eigenvalues(&monic)?
        .into_iter()
        .filter(|z| z.im.abs() <= tol * (1.0 + z.re.abs()))
        .map(|z| polish(&p, z.re))
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= tol * (1.0 + b.abs()));
    Ok(roots.into_iter().map(RealRoot::Exact).collect())
}

fn polish(p: &[f64], mut x: f64) -> f64 {
    for _ in 0..4 {
        let (mut v, mut d) = (0.0, 0.0);
        for a in p.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        if d == 0.0 {
            break;
        }
        let nx = x - v / d;
        if !nx.is_finite() || (nx - x).abs() > 1e-3 * (1.0 + x.abs()) {
            break;
        }
        x = nx;
    }
    x
}
