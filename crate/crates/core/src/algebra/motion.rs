use num_complex::Complex;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::cpoly::CPoly;
use super::kelement::KElement;
use super::scalar::{Scalar, C};

/// Real parameter value or the point at infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Param<S> {
    Finite(S),
    Infinity,
}

impl<S: Scalar> Param<S> {
    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Finite(x) => x.to_f64(),
            Param::Infinity => f64::INFINITY,
        }
    }
}

/// Z + ηW in 𝕂[t] with central t. Stored as the pair (Z, W), which is
/// coefficientwise the same as a list of 𝕂 coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionPolynomial<S: Scalar> {
    z: CPoly<S>,
    w: CPoly<S>,
}

impl<S: Scalar> MotionPolynomial<S> {
    pub fn new(z: CPoly<S>, w: CPoly<S>) -> Self {
        MotionPolynomial { z, w }
    }

    pub fn from_coeffs(coeffs: &[KElement<S>]) -> Self {
        MotionPolynomial {
            z: CPoly::new(coeffs.iter().map(|k| k.z.clone()).collect()),
            w: CPoly::new(coeffs.iter().map(|k| k.w.clone()).collect()),
        }
    }

    pub fn one() -> Self {
        MotionPolynomial { z: CPoly::one(), w: CPoly::zero() }
    }

    /// t − k
    pub fn linear(k: &KElement<S>) -> Self {
        MotionPolynomial { z: CPoly::linear(&k.z), w: CPoly::constant(-k.w.clone()) }
    }

    /// ∏ (t − k_j) in the given order.
    pub fn product_of_linear<'a>(ks: impl IntoIterator<Item = &'a KElement<S>>) -> Self {
        ks.into_iter().fold(Self::one(), |acc, k| acc.mul(&Self::linear(k)))
    }

    /// Curve (f/h, g/h) ↦ h + η(f + i g): the translation along the curve.
    pub fn translation(f: &CPoly<S>, g: &CPoly<S>, h: &CPoly<S>) -> Self {
        let i = Complex::new(S::zero(), S::one());
        MotionPolynomial { z: h.clone(), w: f + &g.scale(&i) }
    }

    pub fn primal(&self) -> &CPoly<S> {
        &self.z
    }

    pub fn secondary(&self) -> &CPoly<S> {
        &self.w
    }

    pub fn coeff(&self, i: usize) -> KElement<S> {
        KElement::new(self.z.coeff(i), self.w.coeff(i))
    }

    pub fn coeffs(&self) -> Vec<KElement<S>> {
        let n = (self.deg() + 1).max(0) as usize;
        (0..n).map(|i| self.coeff(i)).collect()
    }

    pub fn deg(&self) -> isize {
        self.z.deg().max(self.w.deg())
    }

    pub fn is_zero(&self) -> bool {
        self.z.is_zero() && self.w.is_zero()
    }

    pub fn lc(&self) -> KElement<S> {
        self.coeff(self.deg().max(0) as usize)
    }

    pub fn is_monic(&self) -> bool {
        self.z.deg() >= self.w.deg() && self.z.deg() >= 0 && self.z.lc() == C::one()
    }

    /// Product in 𝕂[t]: pp = Z₁Z₂, sp = Z̄₁W₂ + Z₂W₁.
    pub fn mul(&self, o: &Self) -> Self {
        MotionPolynomial { z: &self.z * &o.z, w: &(&self.z.conj() * &o.w) + &(&o.z * &self.w) }
    }

    /// C·P for a complex polynomial C (as a motion polynomial C + η·0).
    pub fn left_mul_complex(&self, c: &CPoly<S>) -> Self {
        MotionPolynomial { z: c * &self.z, w: &c.conj() * &self.w }
    }

    /// R·P for real R (central, so left and right agree).
    pub fn scale_real(&self, r: &CPoly<S>) -> Self {
        MotionPolynomial { z: r * &self.z, w: r * &self.w }
    }

    pub fn conj_coeffs(&self) -> Self {
        MotionPolynomial { z: self.z.conj(), w: self.w.conj() }
    }

    pub fn eval(&self, t: &Param<S>) -> KElement<S> {
        match t {
            Param::Infinity => self.lc(),
            Param::Finite(x) => {
                let x = Complex::new(x.clone(), S::zero());
                KElement::new(self.z.eval(&x), self.w.eval(&x))
            }
        }
    }

    /// Divides both parts by a real polynomial, if it divides them.
    pub fn div_real(&self, s: &CPoly<S>) -> Option<Self> {
        Some(MotionPolynomial { z: self.z.exact_div(s)?, w: self.w.exact_div(s)? })
    }

    pub fn close_to(&self, o: &Self, tol: f64) -> bool {
        self.z.close_to(&o.z, tol) && self.w.close_to(&o.w, tol)
    }
}

impl<S: Scalar> std::fmt::Display for MotionPolynomial<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::io::text::format_motion(self))
    }
}
