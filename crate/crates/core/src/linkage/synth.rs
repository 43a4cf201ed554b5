use crate::algebra::{Backend, CPoly, KElement, MotionPolynomial, Scalar};
use crate::factor::{factor_motion_polynomial, strip_real_content, FactorizationResult};
use crate::flip::{choose_l, flip_cascade};
use crate::{Error, Result};

use super::Linkage;

#[derive(Clone, Debug)]
pub struct Synthesis<S: Scalar> {
    /// The motion polynomial that was realized.
    pub motion: MotionPolynomial<S>,
    /// Real content S stripped before factoring.
    pub content: CPoly<S>,
    pub factorization: FactorizationResult<S>,
    pub linkage: Linkage<S>,
}

fn factor_stripped<S: Scalar>(p: &MotionPolynomial<S>) -> Result<(CPoly<S>, FactorizationResult<S>)> {
    let (s, rest) = strip_real_content(p);
    Ok((s, factor_motion_polynomial(&rest)?))
}

/// Accepts a user-supplied factorization of R·(P/S) for some real R.
fn adopt_factors<S: Scalar>(
    p: &MotionPolynomial<S>,
    ks: Vec<KElement<S>>,
) -> Result<(CPoly<S>, FactorizationResult<S>)> {
    let (s, rest) = strip_real_content(p);
    let prod = MotionPolynomial::product_of_linear(&ks);
    let bad = || Error::Invalid("factors do not multiply to a real multiple of the motion".into());
    let (r, rem) = prod.primal().div_rem(rest.primal());
    if !rem.is_zero() || !r.is_real() {
        return Err(bad());
    }
    let r = r.real_part();
    let want = rest.scale_real(&r);
    let ok = match S::BACKEND {
        Backend::Exact => prod == want,
        Backend::Approx => prod.close_to(&want, 1e-6),
    };
    if !ok {
        return Err(bad());
    }
    let permutation = ks.iter().map(|k| k.z.clone()).collect();
    Ok((s, FactorizationResult { r, factors: ks, permutation, warnings: Vec::new() }))
}

pub fn construct_weak<S: Scalar>(p: &MotionPolynomial<S>) -> Result<Synthesis<S>> {
    let (content, factorization) = factor_stripped(p)?;
    let linkage = Linkage::open_chain(&factorization.factors)?;
    Ok(Synthesis { motion: p.clone(), content, factorization, linkage })
}

pub fn construct_weak_from_factors<S: Scalar>(p: &MotionPolynomial<S>, ks: Vec<KElement<S>>) -> Result<Synthesis<S>> {
    let (content, factorization) = adopt_factors(p, ks)?;
    let linkage = Linkage::open_chain(&factorization.factors)?;
    Ok(Synthesis { motion: p.clone(), content, factorization, linkage })
}

/// Ladder linkage; `l` defaults to [`choose_l`]. A supplied `l` that breaks
/// flip mobility is an error.
pub fn construct_strong<S: Scalar>(p: &MotionPolynomial<S>, l: Option<&KElement<S>>) -> Result<Synthesis<S>> {
    let (content, factorization) = factor_stripped(p)?;
    ladder_from(p, content, factorization, l)
}

pub fn construct_strong_from_factors<S: Scalar>(
    p: &MotionPolynomial<S>,
    ks: Vec<KElement<S>>,
    l: Option<&KElement<S>>,
) -> Result<Synthesis<S>> {
    let (content, factorization) = adopt_factors(p, ks)?;
    ladder_from(p, content, factorization, l)
}

fn ladder_from<S: Scalar>(
    p: &MotionPolynomial<S>,
    content: CPoly<S>,
    factorization: FactorizationResult<S>,
    l: Option<&KElement<S>>,
) -> Result<Synthesis<S>> {
    let ks = &factorization.factors;
    if ks.is_empty() {
        return Err(Error::Invalid("constant motion, nothing to realize".into()));
    }
    let l = match l {
        Some(l) => l.clone(),
        None => choose_l(ks),
    };
    let meta = flip_cascade(&l, ks)?;
    let linkage = Linkage::ladder(ks, &meta)?;
    Ok(Synthesis { motion: p.clone(), content, factorization, linkage })
}
