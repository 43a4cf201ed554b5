//! Complex roots with multiplicities, conjugate grouping and gcds in ℂ[t].

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{ceq, cf, cis_real, eps, CPoly, Scalar, C, Q};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Root<S: Scalar> {
    pub value: C<S>,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Warning {
    /// A root of the primal part lies within √eps of the real axis, so
    /// boundedness cannot be decided reliably in floating point.
    BoundednessUncertain { re: f64, im: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootList<S: Scalar> {
    pub lc: C<S>,
    pub roots: Vec<Root<S>>,
    pub warnings: Vec<Warning>,
}

impl<S: Scalar> RootList<S> {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.mult).sum()
    }

    pub fn reconstruct(&self) -> CPoly<S> {
        let mut p = CPoly::constant(self.lc.clone());
        for r in &self.roots {
            for _ in 0..r.mult {
                p = p.mul_linear(&r.value);
            }
        }
        p
    }

    pub fn has_real_root(&self) -> bool {
        self.roots.iter().any(|r| cis_real(&r.value))
    }
}

/// α with exponents r ≥ s: (t − α)^r (t − ᾱ)^s.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjGroup<S: Scalar> {
    pub alpha: C<S>,
    pub r: usize,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grouped<S: Scalar> {
    pub groups: Vec<ConjGroup<S>>,
    pub real: Vec<Root<S>>,
}

pub fn complex_roots<S: Scalar>(z: &CPoly<S>) -> Result<RootList<S>> {
    if z.is_zero() {
        return Err(Error::Invalid("roots of the zero polynomial".into()));
    }
    S::complex_roots(z)
}

fn cmp_complex<S: Scalar>(a: &C<S>, b: &C<S>) -> Ordering {
    a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal).then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

fn sort_roots<S: Scalar>(roots: &mut [Root<S>]) {
    roots.sort_by(|a, b| cmp_complex(&a.value, &b.value).then(a.mult.cmp(&b.mult)));
}

pub fn group_conjugates<S: Scalar>(list: &RootList<S>) -> Grouped<S> {
    let roots = &list.roots;
    let mut used = vec![false; roots.len()];
    let mut groups = Vec::new();
    let mut real = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let a = &roots[i];
        if cis_real(&a.value) {
            real.push(a.clone());
            continue;
        }
        let partner = (0..roots.len()).find(|&j| !used[j] && ceq(&roots[j].value, &a.value.conj()));
        let g = match partner {
            None => ConjGroup { alpha: a.value.clone(), r: a.mult, s: 0 },
            Some(j) => {
                used[j] = true;
                let b = &roots[j];
                let a_first = match a.mult.cmp(&b.mult) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => a.value.im > S::zero(),
                };
                let (x, y) = if a_first { (a, b) } else { (b, a) };
                ConjGroup { alpha: x.value.clone(), r: x.mult, s: y.mult }
            }
        };
        groups.push(g);
    }
    groups.sort_by(|a, b| cmp_complex(&a.alpha, &b.alpha));
    Grouped { groups, real }
}

/// Monic gcd of all nonzero inputs (zero if all inputs are zero).
pub fn c_gcd<S: Scalar>(ps: &[CPoly<S>]) -> CPoly<S> {
    let mut acc: Option<CPoly<S>> = None;
    for p in ps.iter().filter(|p| !p.is_zero()) {
        acc = Some(match acc {
            None => p.monic(),
            Some(g) if g.deg() == 0 => g,
            Some(g) => S::gcd2(&g, p),
        });
    }
    acc.unwrap_or_else(CPoly::zero)
}

pub fn root_multiplicity<S: Scalar>(w: &CPoly<S>, a: &C<S>) -> usize {
    if w.is_zero() {
        return 0;
    }
    let mut p = w.clone();
    let mut m = 0;
    while p.deg() > 0 {
        let (q, r) = p.div_linear(a);
        let negligible = match S::BACKEND {
            crate::Backend::Exact => r.is_zero(),
            crate::Backend::Approx => {
                let x = cf(a).norm();
                let scale: f64 = p.coeffs().iter().enumerate().map(|(i, k)| cf(k).norm() * x.powi(i as i32)).sum();
                cf(&r).norm() <= eps() * scale.max(f64::MIN_POSITIVE)
            }
        };
        if !negligible {
            break;
        }
        m += 1;
        p = q;
    }
    m
}

pub(crate) fn euclid_gcd<S: Scalar>(a: &CPoly<S>, b: &CPoly<S>) -> CPoly<S> {
    let (mut a, mut b) = (a.monic(), b.monic());
    while !b.is_zero() {
        let r = a.div_rem(&b).1;
        a = b;
        b = r.monic();
    }
    a.monic()
}

/// Eigenvalues of the companion matrix of a monic polynomial.
pub(crate) fn companion_eigenvalues(monic: &[Complex<f64>]) -> Result<Vec<Complex<f64>>> {
    let n = monic.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex::one();
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic[i];
    }
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000).ok_or(Error::NonConvergence)?;
    let (_, t) = schur.unpack();
    let eig: Vec<_> = (0..n).map(|i| t[(i, i)]).collect();
    if eig.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonConvergence);
    }
    Ok(eig)
}

fn eval_f(p: &[Complex<f64>], x: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut v = Complex::zero();
    let mut d = Complex::zero();
    for k in p.iter().rev() {
        d = d * x + v;
        v = v * x + k;
    }
    (v, d)
}

fn newton(p: &[Complex<f64>], x: Complex<f64>, steps: usize) -> Complex<f64> {
    let mut x = x;
    for _ in 0..steps {
        let (v, d) = eval_f(p, x);
        if d.norm() == 0.0 {
            break;
        }
        let nx = x - v / d;
        if !nx.re.is_finite() || !nx.im.is_finite() {
            break;
        }
        x = nx;
    }
    x
}

fn to_f64_poly<S: Scalar>(p: &CPoly<S>) -> Vec<Complex<f64>> {
    p.coeffs().iter().map(cf).collect()
}

pub(crate) fn approx_roots(p: &CPoly<f64>) -> Result<RootList<f64>> {
    let lc = p.lc();
    let monic = p.monic();
    let coeffs = to_f64_poly(&monic);
    let raw: Vec<_> = companion_eigenvalues(&coeffs)?.into_iter().map(|r| newton(&coeffs, r, 1)).collect();
    let e = eps();
    // (sum, count) clusters, merged greedily until stable
    let mut cl: Vec<(Complex<f64>, usize)> = raw.into_iter().map(|r| (r, 1)).collect();
    loop {
        let mut merged = false;
        'outer: for i in 0..cl.len() {
            for j in i + 1..cl.len() {
                let (ci, mi) = (cl[i].0 / cl[i].1 as f64, cl[i].1);
                let cj = cl[j].0 / cl[j].1 as f64;
                let radius = e.powf(1.0 / (mi + cl[j].1) as f64) * (1.0 + ci.norm());
                if (ci - cj).norm() <= radius {
                    let (s, m) = cl.remove(j);
                    cl[i].0 += s;
                    cl[i].1 += m;
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    let mut warnings = Vec::new();
    let mut roots: Vec<Root<f64>> = cl
        .into_iter()
        .map(|(s, m)| {
            let z = s / m as f64;
            let scale = 1.0 + z.norm();
            // pin numerically real / conjugate-symmetric noise
            let im = if z.im.abs() <= e * scale { 0.0 } else { z.im };
            if im != 0.0 && z.im.abs() <= e.sqrt() * scale {
                warnings.push(Warning::BoundednessUncertain { re: z.re, im: z.im });
            }
            Root { value: Complex::new(z.re, im), mult: m }
        })
        .collect();
    sort_roots(&mut roots);
    Ok(RootList { lc, roots, warnings })
}

/// Continued-fraction convergents of x, smallest denominators first.
fn convergents(x: f64) -> Vec<Q> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = BigInt::from(a as i128);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        out.push(Q::new(h1.clone(), k1.clone()));
        let frac = r - a;
        if frac.abs() < 1e-15 || k1.abs() > BigInt::from(10u64.pow(13)) {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

/// Roots over ℚ(i): numerical candidates, each verified exactly on the
/// square-free part; multiplicities by exact division.
pub(crate) fn exact_roots(p: &CPoly<Q>) -> Result<RootList<Q>> {
    let lc = p.lc();
    let monic = p.monic();
    let n = monic.deg() as usize;
    let mut roots = Vec::new();
    if n > 0 {
        let g = euclid_gcd(&monic, &monic.derivative());
        let sqf = monic.exact_div(&g).expect("gcd divides");
        let fl = to_f64_poly(&sqf);
        if fl.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotExactlySplit);
        }
        let approx: Vec<_> = companion_eigenvalues(&fl)?.into_iter().map(|r| newton(&fl, r, 3)).collect();
        let mut found: Vec<C<Q>> = Vec::new();
        for r in approx {
            let hit = rational_candidate(&sqf, r).ok_or(Error::NotExactlySplit)?;
            if !found.contains(&hit) {
                found.push(hit);
            }
        }
        if found.len() as isize != sqf.deg() {
            return Err(Error::NotExactlySplit);
        }
        let mut rest = monic.clone();
        for v in found {
            let mut m = 0;
            loop {
                let (q, r) = rest.div_linear(&v);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                m += 1;
            }
            roots.push(Root { value: v, mult: m });
        }
        debug_assert_eq!(rest.deg(), 0);
    }
    sort_roots(&mut roots);
    Ok(RootList { lc, roots, warnings: Vec::new() })
}

fn rational_candidate(sqf: &CPoly<Q>, r: Complex<f64>) -> Option<C<Q>> {
    let re = convergents(r.re);
    let im = convergents(r.im);
    let tol = 1e-6 * (1.0 + r.norm());
    let mut cands: Vec<C<Q>> = Vec::new();
    for a in &re {
        if (ToPrimitive::to_f64(a).unwrap_or(f64::NAN) - r.re).abs() > tol {
            continue;
        }
        for b in &im {
            if (ToPrimitive::to_f64(b).unwrap_or(f64::NAN) - r.im).abs() > tol {
                continue;
            }
            cands.push(Complex::new(a.clone(), b.clone()));
        }
    }
    cands.into_iter().find(|z| sqf.eval(z).is_zero())
}

/// gcd via shared root clusters with minimal multiplicities.
pub(crate) fn cluster_gcd(a: &CPoly<f64>, b: &CPoly<f64>) -> CPoly<f64> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.deg() == 0 || b.deg() == 0 {
        return CPoly::one();
    }
    let (Ok(ra), Ok(rb)) = (approx_roots(a), approx_roots(b)) else {
        return CPoly::one();
    };
    let tol = eps().sqrt();
    let mut used = vec![false; rb.roots.len()];
    let mut g = CPoly::one();
    for x in &ra.roots {
        let hit = rb
            .roots
            .iter()
            .enumerate()
            .find(|(j, y)| !used[*j] && (x.value - y.value).norm() <= tol * (1.0 + x.value.norm()));
        if let Some((j, y)) = hit {
            used[j] = true;
            for _ in 0..x.mult.min(y.mult) {
                g = g.mul_linear(&x.value);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ci;

    fn qp(c: &[(i64, i64)]) -> CPoly<Q> {
        CPoly::new(c.iter().map(|&(a, b)| ci(a, b)).collect())
    }

    #[test]
    fn unit_circle_roots() {
        let r = complex_roots(&qp(&[(1, 0), (0, 0), (1, 0)])).unwrap();
        assert_eq!(r.roots, vec![Root { value: ci(0, -1), mult: 1 }, Root { value: ci(0, 1), mult: 1 }]);
        let sq = qp(&[(1, 0), (0, 0), (1, 0)]).pow(2);
        let r = complex_roots(&sq).unwrap();
        assert!(r.roots.iter().all(|x| x.mult == 2));
        assert_eq!(r.reconstruct(), sq);
    }

    #[test]
    fn ellipse_drawing_primal() {
        // (t − i)(t² + 1) = (t − i)²(t + i)
        let z = CPoly::<Q>::from_roots(&[ci(0, 1), ci(0, 1), ci(0, -1)]);
        let r = complex_roots(&z).unwrap();
        let g = group_conjugates(&r);
        assert_eq!(g.groups, vec![ConjGroup { alpha: ci(0, 1), r: 2, s: 1 }]);
    }

    #[test]
    fn grouping() {
        let list = |v: Vec<(C<Q>, usize)>| RootList {
            lc: ci(1, 0),
            roots: v.into_iter().map(|(value, mult)| Root { value, mult }).collect(),
            warnings: vec![],
        };
        let g = group_conjugates(&list(vec![(ci(0, 1), 2), (ci(0, -1), 1)]));
        assert_eq!(g.groups, vec![ConjGroup { alpha: ci(0, 1), r: 2, s: 1 }]);
        let g = group_conjugates(&list(vec![(ci(1, 1), 1), (ci(2, -1), 1)]));
        assert_eq!(g.groups.len(), 2);
        assert!(g.groups.iter().all(|x| x.s == 0));
        let g = group_conjugates(&list(vec![(ci(0, -1), 3), (ci(0, 1), 3)]));
        assert_eq!(g.groups, vec![ConjGroup { alpha: ci(0, 1), r: 3, s: 3 }]);
    }

    #[test]
    fn rational_roots_are_found() {
        let z = CPoly::<Q>::from_roots(&[
            C::new(Q::ratio(-2, 5), Q::ratio(1, 5)),
            C::new(Q::ratio(-27, 85), Q::ratio(6, 85)),
            C::new(Q::ratio(-27, 85), Q::ratio(6, 85)),
            ci(3, -7),
        ]);
        let r = complex_roots(&z).unwrap();
        assert_eq!(r.reconstruct(), z);
        assert_eq!(r.roots.len(), 3);
    }

    #[test]
    fn irrational_roots_are_rejected() {
        assert_eq!(complex_roots(&qp(&[(-2, 0), (0, 0), (1, 0)])), Err(Error::NotExactlySplit));
    }

    #[test]
    fn gcds() {
        let z = CPoly::<Q>::from_roots(&[ci(0, 1), ci(0, 1), ci(0, -1)]);
        assert_eq!(c_gcd(&[z.clone(), z.conj()]), qp(&[(1, 0), (0, 0), (1, 0)]));
        assert_eq!(c_gcd(&[qp(&[(0, -1), (1, 0)]), qp(&[(0, -2), (1, 0)])]), CPoly::one());
        let zf = CPoly::<f64>::from_roots(&[ci(0, 1), ci(0, 1), ci(0, -1)]);
        let g = c_gcd(&[zf.clone(), zf.conj()]);
        assert!(g.close_to(&CPoly::new(vec![ci(1, 0), ci(0, 0), ci(1, 0)]), 1e-7));
    }

    #[test]
    fn multiplicities() {
        let w = qp(&[(-2, 0), (0, 1)]);
        assert_eq!(root_multiplicity(&w, &ci(0, 1)), 0);
        assert_eq!(root_multiplicity(&qp(&[(1, 0), (0, 0), (1, 0)]), &ci(0, 1)), 1);
        assert_eq!(root_multiplicity(&qp(&[(1, 0)]), &ci(5, 1)), 0);
        let wf = CPoly::<f64>::from_roots(&[ci(0, 1), ci(0, 1), ci(2, 0)]);
        assert_eq!(root_multiplicity(&wf, &ci(0, 1)), 2);
    }

    #[test]
    fn approx_clusters_multiple_roots() {
        let z = CPoly::<f64>::from_roots(&[ci(1, 1), ci(1, 1), ci(1, 1), ci(0, -2)]);
        let r = complex_roots(&z).unwrap();
        assert_eq!(r.roots.len(), 2);
        assert!(r.reconstruct().close_to(&z, 1e-6));
    }
}
