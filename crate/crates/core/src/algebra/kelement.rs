use num_traits::Zero;

use super::scalar::{cis_real, cis_zero, Scalar, C};
use crate::{Error, Result};

/// A point of the plane, stored as u = x + iy.
pub type Point<S> = C<S>;

/// z + ηw. With z ≠ 0 this is a direct isometry of the plane, acting by
/// u ↦ (u z² + z w) / |z|².
#[derive(Clone, Debug, PartialEq)]
pub struct KElement<S: Scalar> {
    pub z: C<S>,
    pub w: C<S>,
}

impl<S: Scalar> KElement<S> {
    pub fn new(z: C<S>, w: C<S>) -> Self {
        KElement { z, w }
    }

    pub fn real(x: S) -> Self {
        KElement { z: C::new(x, S::zero()), w: C::zero() }
    }

    pub fn one() -> Self {
        Self::real(S::one())
    }

    pub fn zero() -> Self {
        KElement { z: C::zero(), w: C::zero() }
    }

    /// (z, w)(z', w') = (z z', z̄ w' + z' w)
    pub fn mul(&self, o: &Self) -> Self {
        KElement { z: self.z.clone() * o.z.clone(), w: self.z.conj() * o.w.clone() + o.z.clone() * self.w.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        KElement { z: self.z.clone() + o.z.clone(), w: self.w.clone() + o.w.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        KElement { z: self.z.clone() - o.z.clone(), w: self.w.clone() - o.w.clone() }
    }

    pub fn neg(&self) -> Self {
        KElement { z: -self.z.clone(), w: -self.w.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.z.is_zero() && self.w.is_zero()
    }

    pub fn is_isometry(&self) -> bool {
        !cis_zero(&self.z)
    }

    /// z̄ − ηw; `k · inv(k) = |z|²`.
    pub fn inv(&self) -> Result<Self> {
        if cis_zero(&self.z) {
            return Err(Error::ZeroPrimal);
        }
        Ok(KElement { z: self.z.conj(), w: -self.w.clone() })
    }

    pub fn act(&self, u: &Point<S>) -> Result<Point<S>> {
        if cis_zero(&self.z) {
            return Err(Error::ZeroPrimal);
        }
        let n = self.z.norm_sqr();
        let num = u.clone() * self.z.clone() * self.z.clone() + self.z.clone() * self.w.clone();
        Ok(num.unscale(n))
    }

    /// Center of the rotation t − k, i.e. w / (z̄ − z).
    pub fn midpt(&self) -> Result<Point<S>> {
        if cis_real(&self.z) {
            return Err(Error::RealPrimal);
        }
        Ok(self.w.clone() / (self.z.conj() - self.z.clone()))
    }

    pub fn is_real(&self) -> bool {
        cis_real(&self.z) && cis_zero(&self.w)
    }
}

impl<S: Scalar> std::fmt::Display for KElement<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::io::text::format_kelement(self))
    }
}
