//! Flips (t − k1)(t − k2) = (t − k3)(t − k4) and the flip cascade that turns
//! a factorization into a ladder of antiparallelograms.

use crate::algebra::{ceq, cis_real, Backend, KElement, MotionPolynomial, Scalar, C};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FlipPair<S: Scalar> {
    pub k3: KElement<S>,
    pub k4: KElement<S>,
}

/// Auxiliary factors of a ladder: (t − l_i)(t − k_i) = (t − k̃_i)(t − l_{i+1}).
#[derive(Clone, Debug, PartialEq)]
pub struct LadderMeta<S: Scalar> {
    pub l: Vec<KElement<S>>,
    pub ktilde: Vec<KElement<S>>,
}

/// The unique (k3, k4) with pp(k3) = pp(k2), pp(k4) = pp(k1) and
/// (t − k1)(t − k2) = (t − k3)(t − k4).
pub fn flip<S: Scalar>(k1: &KElement<S>, k2: &KElement<S>) -> Result<FlipPair<S>> {
    let (z1, w1) = (&k1.z, &k1.w);
    let (z2, w2) = (&k2.z, &k2.w);
    if ceq(z1, &z2.conj()) {
        return Err(Error::DegenerateFlip);
    }
    // w3 + w4 = w1 + w2,  z1·w3 + z̄2·w4 = z̄1·w2 + z2·w1
    let sum = w1.clone() + w2.clone();
    let rhs = z1.conj() * w2.clone() + z2.clone() * w1.clone();
    let w3 = (rhs - z2.conj() * sum.clone()) / (z1.clone() - z2.conj());
    let w4 = sum - w3.clone();
    Ok(FlipPair { k3: KElement::new(z2.clone(), w3), k4: KElement::new(z1.clone(), w4) })
}

/// Flip mobility: both primal parts non-real, neither equal nor conjugate,
/// and distinct rotation centers.
pub fn fm<S: Scalar>(k1: &KElement<S>, k2: &KElement<S>) -> bool {
    let (z1, z2) = (&k1.z, &k2.z);
    if cis_real(z1) || cis_real(z2) || ceq(z1, z2) || ceq(z1, &z2.conj()) {
        return false;
    }
    match (k1.midpt(), k2.midpt()) {
        (Ok(a), Ok(b)) => !ceq(&a, &b),
        _ => false,
    }
}

/// Runs the cascade (k̃_i, l_{i+1}) = Flip(l_i, k_i), requiring FM at every
/// step; the error carries the failing 1-based square.
pub fn flip_cascade<S: Scalar>(l: &KElement<S>, ks: &[KElement<S>]) -> Result<LadderMeta<S>> {
    let mut ls = vec![l.clone()];
    let mut kt = Vec::with_capacity(ks.len());
    for (i, k) in ks.iter().enumerate() {
        let cur = ls.last().expect("nonempty");
        if !fm(cur, k) {
            return Err(Error::IfmViolation(i + 1));
        }
        let f = flip(cur, k)?;
        kt.push(f.k3);
        ls.push(f.k4);
    }
    Ok(LadderMeta { l: ls, ktilde: kt })
}

pub fn ifm<S: Scalar>(l: &KElement<S>, ks: &[KElement<S>]) -> bool {
    flip_cascade(l, ks).is_ok()
}

/// (inv(k3), k1) = Flip(k4, inv(k2)).
///
/// When pp(k1) = pp(k2) the right-hand flip is degenerate (pp(k4) is the
/// conjugate of pp(inv(k2))); then only the underlying product identity
/// (t − k4)(t − inv(k2)) = (t − inv(k3))(t − k1) is checked.
pub fn revert_flip_check<S: Scalar>(k1: &KElement<S>, k2: &KElement<S>, k3: &KElement<S>, k4: &KElement<S>) -> bool {
    let (Ok(i3), Ok(i2)) = (k3.inv(), k2.inv()) else {
        return false;
    };
    match flip(k4, &i2) {
        Ok(f) => keq(&f.k3, &i3) && keq(&f.k4, k1),
        Err(_) => {
            let lin = MotionPolynomial::linear;
            let lhs = lin(k4).mul(&lin(&i2));
            let rhs = lin(&i3).mul(&lin(k1));
            match S::BACKEND {
                Backend::Exact => lhs == rhs,
                Backend::Approx => lhs.close_to(&rhs, crate::eps().sqrt()),
            }
        }
    }
}

fn keq<S: Scalar>(a: &KElement<S>, b: &KElement<S>) -> bool {
    ceq(&a.z, &b.z) && ceq(&a.w, &b.w)
}

/// Positive rationals in Calkin–Wilf order: 1, 1/2, 2, 1/3, 3/2, 2/3, 3, …
fn calkin_wilf() -> impl Iterator<Item = (i64, i64)> {
    std::iter::successors(Some((1i64, 1i64)), |&(a, b)| {
        // next = 1 / (2⌊x⌋ − x + 1)
        let fl = a / b;
        let num = b;
        let den = 2 * fl * b - a + b;
        Some((num, den))
    })
}

/// Values q of the primal candidates −q·i, in a fixed order.
fn primal_scales() -> impl Iterator<Item = (i64, i64)> {
    [(9, 5), (7, 3), (11, 4)].into_iter().chain(calkin_wilf().filter(|&(a, b)| a >= b && a <= 4 * b))
}

/// 0, 1, −1, 1/2, −1/2, 2, −2, …
fn secondary_scales() -> impl Iterator<Item = (i64, i64)> {
    std::iter::once((0, 1)).chain(calkin_wilf().flat_map(|(a, b)| [(a, b), (-a, b)]))
}

const PRIMAL_TRIES: usize = 64;
const SECONDARY_TRIES: usize = 400;

/// First l = −q·i + η·c·i in the canonical enumeration for which the flip
/// cascade over `ks` satisfies FM at every square. Falls back to primal
/// parts a − q·i off the imaginary axis.
pub fn choose_l<S: Scalar>(ks: &[KElement<S>]) -> KElement<S> {
    let blocked = |z: &C<S>| ks.iter().any(|k| ceq(&k.z, z) || ceq(&k.z.conj(), z));
    let i = C::new(S::zero(), S::one());
    let try_primal = |z: C<S>| -> Option<KElement<S>> {
        if blocked(&z) {
            return None;
        }
        secondary_scales().take(SECONDARY_TRIES).find_map(|(n, d)| {
            let l = KElement::new(z.clone(), i.clone() * S::ratio(n, d));
            ifm(&l, ks).then_some(l)
        })
    };
    for (n, d) in primal_scales().take(PRIMAL_TRIES) {
        if let Some(l) = try_primal(C::new(S::zero(), -S::ratio(n, d))) {
            return l;
        }
    }
    for (a, b) in secondary_scales().skip(1).take(PRIMAL_TRIES) {
        for (n, d) in primal_scales().take(8) {
            if let Some(l) = try_primal(C::new(S::ratio(a, b), -S::ratio(n, d))) {
                return l;
            }
        }
    }
    unreachable!("iterated flip mobility excludes only finitely many values")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ci, Q};
    use crate::io::text::parse_kelement;

    fn k(s: &str) -> KElement<Q> {
        parse_kelement(s).unwrap()
    }

    #[test]
    fn enumerations() {
        let cw: Vec<_> = calkin_wilf().take(6).collect();
        assert_eq!(cw, vec![(1, 1), (1, 2), (2, 1), (1, 3), (3, 2), (2, 3)]);
        let sec: Vec<_> = secondary_scales().take(5).collect();
        assert_eq!(sec, vec![(0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2)]);
        let pr: Vec<_> = primal_scales().take(5).collect();
        assert_eq!(pr, vec![(9, 5), (7, 3), (11, 4), (1, 1), (2, 1)]);
    }

    #[test]
    fn flip_identity() {
        let (a, b) = (k("i-3e"), k("-2i+(-2-i)e"));
        let f = flip(&a, &b).unwrap();
        let lhs = MotionPolynomial::linear(&a).mul(&MotionPolynomial::linear(&b));
        let rhs = MotionPolynomial::linear(&f.k3).mul(&MotionPolynomial::linear(&f.k4));
        assert_eq!(lhs, rhs);
        assert_eq!(f.k3.z, b.z);
        assert!(revert_flip_check(&a, &b, &f.k3, &f.k4));
    }

    #[test]
    fn self_flip() {
        let a = k("1+2i+(3-i)e");
        assert_eq!(flip(&a, &a).unwrap(), FlipPair { k3: a.clone(), k4: a });
        let b = k("i+e");
        let f = flip(&b, &b).unwrap();
        assert!(revert_flip_check(&b, &b, &f.k3, &f.k4));
    }

    #[test]
    fn degenerate() {
        assert_eq!(flip(&k("i"), &k("-i+e")), Err(Error::DegenerateFlip));
    }

    #[test]
    fn flip_mobility() {
        assert!(fm(&k("i-3e"), &k("-2i+(-2-i)e")));
        assert!(!fm(&k("i"), &k("i")));
        assert!(!fm(&k("i"), &k("-i+e")));
        assert!(!fm(&k("2"), &k("i")));
        // same center: midpt(i − 3η) = midpt(2i − 6η)
        assert!(!fm(&k("i-3e"), &k("2i-6e")));
    }

    #[test]
    fn chosen_l_avoids_primal_parts() {
        let ks = vec![KElement::new(ci::<Q>(0, 1), ci(1, 0))];
        let l = choose_l(&ks);
        assert!(l.z != ci(0, 1) && l.z != ci(0, -1));
        assert!(ifm(&l, &ks));
    }
}
