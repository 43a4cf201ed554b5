use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::scalar::{cf, cis_zero, Backend, Scalar, C};

/// Polynomial in ℂ[t], coefficients ascending. Trailing zeros are always
/// trimmed, so the zero polynomial has no coefficients and degree −1.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly<S: Scalar> {
    c: Vec<C<S>>,
}

impl<S: Scalar> CPoly<S> {
    pub fn new(mut c: Vec<C<S>>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        CPoly { c }
    }

    pub fn real(c: Vec<S>) -> Self {
        Self::new(c.into_iter().map(|x| Complex::new(x, S::zero())).collect())
    }

    pub fn zero() -> Self {
        CPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(k: C<S>) -> Self {
        Self::new(vec![k])
    }

    /// t
    pub fn t() -> Self {
        Self::new(vec![C::zero(), C::one()])
    }

    /// t − a
    pub fn linear(a: &C<S>) -> Self {
        Self::new(vec![-a.clone(), C::one()])
    }

    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a C<S>>) -> Self {
        roots.into_iter().fold(Self::one(), |acc, r| acc.mul_linear(r))
    }

    pub fn coeffs(&self) -> &[C<S>] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> C<S> {
        self.c.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lc(&self) -> C<S> {
        self.c.last().cloned().unwrap_or_else(C::zero)
    }

    pub fn is_real(&self) -> bool {
        self.c.iter().all(super::scalar::cis_real)
    }

    pub fn conj(&self) -> Self {
        CPoly { c: self.c.iter().map(|x| x.conj()).collect() }
    }

    pub fn scale(&self, k: &C<S>) -> Self {
        Self::new(self.c.iter().map(|x| x.clone() * k.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = C::<S>::one() / self.lc();
        let mut p = self.scale(&inv);
        let n = p.c.len();
        p.c[n - 1] = C::one();
        p
    }

    pub fn eval(&self, x: &C<S>) -> C<S> {
        self.c.iter().rev().fold(C::zero(), |acc, k| acc * x.clone() + k.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, k)| k.clone() * S::from_i64(i as i64)).collect())
    }

    /// self · (t − a)
    pub fn mul_linear(&self, a: &C<S>) -> Self {
        let mut out = vec![C::zero(); self.c.len() + 1];
        for (i, k) in self.c.iter().enumerate() {
            out[i + 1] = out[i + 1].clone() + k.clone();
            out[i] = out[i].clone() - k.clone() * a.clone();
        }
        Self::new(out)
    }

    /// Synthetic division by (t − a): quotient and remainder self(a).
    pub fn div_linear(&self, a: &C<S>) -> (Self, C<S>) {
        if self.c.is_empty() {
            return (Self::zero(), C::zero());
        }
        let n = self.c.len();
        let mut q = vec![C::zero(); n - 1];
        let mut acc = C::zero();
        for i in (0..n).rev() {
            acc = acc * a.clone() + self.c[i].clone();
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (Self::new(q), acc)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dn = d.c.len();
        if self.c.len() < dn {
            return (Self::zero(), self.clone());
        }
        let inv = C::<S>::one() / d.lc();
        let mut r = self.c.clone();
        let mut q = vec![C::zero(); r.len() - dn + 1];
        for i in (0..q.len()).rev() {
            let f = r[i + dn - 1].clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..dn {
                r[i + j] = r[i + j].clone() - f.clone() * d.c[j].clone();
            }
            q[i] = f;
        }
        r.truncate(dn - 1);
        let mut r = Self::new(r);
        if S::BACKEND == Backend::Approx {
            r = r.cleaned(self.norm());
        }
        (Self::new(q), r)
    }

    /// Quotient if `d` divides `self` (within tolerance for approx).
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Max-norm of the coefficient vector, as f64.
    pub fn norm(&self) -> f64 {
        self.c.iter().map(|k| cf(k).norm()).fold(0.0, f64::max)
    }

    /// Approx backend: drops coefficients negligible relative to `scale`.
    /// Exact backend: identity.
    pub fn cleaned(&self, scale: f64) -> Self {
        match S::BACKEND {
            Backend::Exact => self.clone(),
            Backend::Approx => {
                let tol = crate::eps() * scale.max(1.0);
                let c = self
                    .c
                    .iter()
                    .map(|k| {
                        let f = cf(k);
                        Complex::new(
                            if f.re.abs() <= tol { S::zero() } else { k.re.clone() },
                            if f.im.abs() <= tol { S::zero() } else { k.im.clone() },
                        )
                    })
                    .collect();
                Self::new(c)
            }
        }
    }

    /// Replaces every coefficient by its real part (used after a real result
    /// has been computed in complex arithmetic).
    pub fn real_part(&self) -> Self {
        Self::new(self.c.iter().map(|k| Complex::new(k.re.clone(), S::zero())).collect())
    }

    pub fn real_coeffs(&self) -> Vec<S> {
        self.c.iter().map(|k| k.re.clone()).collect()
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Approximate coefficientwise comparison `‖a − b‖ ≤ tol·max(1, ‖a‖)`.
    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        let n = self.c.len().max(other.c.len());
        let scale = self.norm().max(1.0);
        (0..n).all(|i| (cf(&self.coeff(i)) - cf(&other.coeff(i))).norm() <= tol * scale)
    }

    /// True when every coefficient is negligible (always exact for Q).
    pub fn is_negligible(&self) -> bool {
        self.c.iter().all(cis_zero)
    }
}

impl<'a, S: Scalar> Add<&'a CPoly<S>> for &'a CPoly<S> {
    type Output = CPoly<S>;
    fn add(self, o: &CPoly<S>) -> CPoly<S> {
        let n = self.c.len().max(o.c.len());
        CPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Sub<&'a CPoly<S>> for &'a CPoly<S> {
    type Output = CPoly<S>;
    fn sub(self, o: &CPoly<S>) -> CPoly<S> {
        let n = self.c.len().max(o.c.len());
        CPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Mul<&'a CPoly<S>> for &'a CPoly<S> {
    type Output = CPoly<S>;
    fn mul(self, o: &CPoly<S>) -> CPoly<S> {
        if self.is_zero() || o.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![C::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        CPoly::new(out)
    }
}

impl<S: Scalar> Neg for &CPoly<S> {
    type Output = CPoly<S>;
    fn neg(self) -> CPoly<S> {
        CPoly { c: self.c.iter().map(|k| -k.clone()).collect() }
    }
}

impl<S: Scalar> std::fmt::Display for CPoly<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::io::text::format_cpoly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ci, Q};

    fn p(c: &[(i64, i64)]) -> CPoly<Q> {
        CPoly::new(c.iter().map(|&(a, b)| ci(a, b)).collect())
    }

    #[test]
    fn trimming_and_degree() {
        assert_eq!(p(&[(1, 0), (0, 0), (0, 0)]).deg(), 0);
        assert_eq!(CPoly::<Q>::zero().deg(), -1);
        assert_eq!((&p(&[(1, 0), (1, 0)]) - &p(&[(1, 0), (1, 0)])).deg(), -1);
    }

    #[test]
    fn division_round_trip() {
        let a = p(&[(1, 2), (0, -1), (3, 0), (1, 0)]);
        let d = p(&[(0, 1), (1, 0)]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(&(&q * &d) + &r, a);
        let (q2, r2) = a.div_linear(&ci(0, -1));
        assert_eq!(q2, q);
        assert_eq!(CPoly::constant(r2), r);
    }

    #[test]
    fn roots_and_conjugation() {
        let z = CPoly::<Q>::from_roots(&[ci(0, 1), ci(0, -1)]);
        assert_eq!(z, p(&[(1, 0), (0, 0), (1, 0)]));
        assert!(z.is_real());
        assert!(!CPoly::<Q>::linear(&ci(0, 1)).is_real());
        assert_eq!(z.derivative(), p(&[(0, 0), (2, 0)]));
    }
}
