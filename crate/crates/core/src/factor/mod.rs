//! Factorization of bounded motion polynomials into linear factors t − k_j,
//! after multiplication by the smallest possible real polynomial R.

pub mod linsolve;

use num_traits::Zero;

use crate::algebra::{ceq, cf, cis_real, Backend, CPoly, KElement, MotionPolynomial, Scalar, C};
use crate::roots::{self, group_conjugates, root_multiplicity, Grouped, Warning};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationResult<S: Scalar> {
    /// Real monic multiplier.
    pub r: CPoly<S>,
    /// k_1 … k_n with ∏ (t − k_j) = R·P.
    pub factors: Vec<KElement<S>>,
    /// pp(k_j), i.e. the root permutation used.
    pub permutation: Vec<C<S>>,
    pub warnings: Vec<Warning>,
}

impl<S: Scalar> FactorizationResult<S> {
    pub fn product(&self) -> MotionPolynomial<S> {
        MotionPolynomial::product_of_linear(&self.factors)
    }
}

/// Q_i(z) = ∏_{l<i} (t − z̄_l) · ∏_{l>i} (t − z_l), with 0-based `i`.
pub fn build_q<S: Scalar>(z: &[C<S>], i: usize) -> CPoly<S> {
    CPoly::from_roots(&q_roots(z, i))
}

fn q_roots<S: Scalar>(z: &[C<S>], i: usize) -> Vec<C<S>> {
    z[..i].iter().map(|x| x.conj()).chain(z[i + 1..].iter().cloned()).collect()
}

/// M_n: column j holds the coefficients of Q_j (row = degree).
pub fn q_matrix<S: Scalar>(z: &[C<S>]) -> linsolve::Mat<S> {
    let n = z.len();
    let qs: Vec<_> = (0..n).map(|j| build_q(z, j)).collect();
    (0..n).map(|d| qs.iter().map(|q| q.coeff(d)).collect()).collect()
}

/// Maximum matching of index pairs (i, j), i < j, z_i = z̄_j (0-based).
/// Kuhn's augmenting paths, left vertices and candidates in index order.
pub fn max_matching<S: Scalar>(z: &[C<S>]) -> Vec<(usize, usize)> {
    let n = z.len();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (i + 1..n).filter(|&j| ceq(&z[i], &z[j].conj())).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        // greedy: a free partner first, augmenting paths only when needed
        if let Some(&j) = adj[i].iter().find(|&&j| !seen[j] && owner[j].is_none()) {
            seen[j] = true;
            owner[j] = Some(i);
            return true;
        }
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }

    for i in 0..n {
        let mut seen = vec![false; n];
        augment(i, &adj, &mut seen, &mut owner);
    }
    let mut m: Vec<_> = owner.iter().enumerate().filter_map(|(j, o)| o.map(|i| (i, j))).collect();
    m.sort();
    m
}

/// G = gcd(Q_1, …, Q_n), computed as ∏_{(i,j) ∈ M} (t − z_j).
pub fn gcd_of_q<S: Scalar>(z: &[C<S>]) -> CPoly<S> {
    CPoly::from_roots(max_matching(z).iter().map(|&(_, j)| &z[j]))
}

/// R = R̃ / gcd(R̃, W·W̄) with R̃ = gcd(Z, Z̄).
pub fn minimal_r<S: Scalar>(z: &CPoly<S>, w: &CPoly<S>) -> CPoly<S> {
    let rt = roots::c_gcd(&[z.clone(), z.conj()]);
    let d = roots::c_gcd(&[rt.clone(), &w.clone() * &w.conj()]);
    let r = rt.exact_div(&d).unwrap_or_else(|| rt.div_rem(&d).0);
    r.real_part().monic()
}

/// Block (ᾱ^{s−min(s,v)}, α^{r+s−m}, ᾱ^{s−min(s,u)}) per conjugate group,
/// groups concatenated in sorted-α order. Also returns R = ∏ R_i^{s_i−m_i}.
pub fn admissible_permutation<S: Scalar>(g: &Grouped<S>, w: &CPoly<S>) -> Result<(Vec<C<S>>, CPoly<S>)> {
    let mut z = Vec::new();
    let mut r = CPoly::one();
    for grp in &g.groups {
        let a = &grp.alpha;
        let ab = a.conj();
        let (u, v) = if w.is_zero() { (0, 0) } else { (root_multiplicity(w, a), root_multiplicity(w, &ab)) };
        let s = grp.s;
        if s > 0 && u > 0 && v > 0 {
            return Err(Error::RealCommonFactor);
        }
        let m = s.min(u + v);
        z.extend(std::iter::repeat_n(ab.clone(), s - s.min(v)));
        z.extend(std::iter::repeat_n(a.clone(), grp.r + s - m));
        z.extend(std::iter::repeat_n(ab.clone(), s - s.min(u)));
        let ri = CPoly::from_roots([a, &ab]).real_part();
        r = &r * &ri.pow(s - m);
    }
    Ok((z, r))
}

fn eval_scale<S: Scalar>(p: &CPoly<S>, x: &C<S>) -> f64 {
    let a = cf(x).norm();
    p.coeffs().iter().enumerate().map(|(i, k)| cf(k).norm() * a.powi(i as i32)).sum::<f64>().max(1.0)
}

fn remainder_vanishes<S: Scalar>(r: &C<S>, scale: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => r.is_zero(),
        Backend::Approx => cf(r).norm() <= crate::eps() * scale,
    }
}

/// w_1 … w_n with Σ w_j Q_j(z) = target.
///
/// G = gcd(Q_j) is divided out first (its roots are known from the matching),
/// which leaves a full-row-rank system of size (n − deg G) × n. Columns are
/// pivoted in index order and free unknowns set to zero.
pub fn solve_secondary<S: Scalar>(z: &[C<S>], target: &CPoly<S>) -> Result<Vec<C<S>>> {
    let n = z.len();
    if target.deg() >= n as isize {
        return Err(Error::Inconsistent);
    }
    let groots: Vec<C<S>> = max_matching(z).iter().map(|&(_, j)| z[j].clone()).collect();
    let mut rhs = target.clone();
    for g in &groots {
        let scale = eval_scale(&rhs, g);
        let (q, r) = rhs.div_linear(g);
        if !remainder_vanishes(&r, scale) {
            return Err(Error::Inconsistent);
        }
        rhs = q;
    }
    let size = n - groots.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut rs = q_roots(z, j);
        for g in &groots {
            let pos = rs.iter().position(|x| ceq(x, g)).ok_or(Error::Inconsistent)?;
            rs.swap_remove(pos);
        }
        cols.push(CPoly::from_roots(&rs));
    }
    let m: linsolve::Mat<S> = (0..size).map(|d| cols.iter().map(|q| q.coeff(d)).collect()).collect();
    let b: Vec<C<S>> = (0..size).map(|d| rhs.coeff(d)).collect();
    if size == 0 {
        return Ok(vec![C::zero(); n]);
    }
    linsolve::solve(&m, &b).ok_or(Error::Inconsistent)
}

/// Rank test on the full matrix M_n: is `target` in span{Q_1, …, Q_n}?
pub fn span_contains<S: Scalar>(z: &[C<S>], target: &CPoly<S>) -> bool {
    let n = z.len();
    if target.deg() >= n as isize {
        return false;
    }
    let m = q_matrix(z);
    let aug: linsolve::Mat<S> = m
        .iter()
        .enumerate()
        .map(|(d, row)| row.iter().cloned().chain(std::iter::once(target.coeff(d))).collect())
        .collect();
    linsolve::rank(&aug) == linsolve::rank(&m)
}

fn check_bounded<S: Scalar>(p: &MotionPolynomial<S>) -> Result<()> {
    if !p.is_monic() {
        return Err(Error::NotBounded("not monic".into()));
    }
    Ok(())
}

/// R and k_1 … k_n with (t − k_1)⋯(t − k_n) = R·P.
pub fn factor_motion_polynomial<S: Scalar>(p: &MotionPolynomial<S>) -> Result<FactorizationResult<S>> {
    check_bounded(p)?;
    let (z, w) = (p.primal(), p.secondary());
    if z.deg() == 0 {
        return Ok(FactorizationResult {
            r: CPoly::one(),
            factors: Vec::new(),
            permutation: Vec::new(),
            warnings: Vec::new(),
        });
    }
    let list = roots::complex_roots(z)?;
    if let Some(x) = list.roots.iter().find(|x| cis_real(&x.value)) {
        return Err(Error::NotBounded(format!("primal part has the real root {}", cf(&x.value).re)));
    }
    let grouped = group_conjugates(&list);
    let (perm, r) = admissible_permutation(&grouped, w)?;
    let target = &r * w;
    let ws = solve_secondary(&perm, &target)?;
    let factors: Vec<KElement<S>> = perm.iter().zip(&ws).map(|(q, w)| KElement::new(q.clone(), -w.clone())).collect();
    let res = FactorizationResult { r, factors, permutation: perm, warnings: list.warnings };
    let prod = res.product();
    let want = p.scale_real(&res.r);
    let ok = match S::BACKEND {
        Backend::Exact => prod == want,
        Backend::Approx => prod.close_to(&want, 1e-6),
    };
    if !ok {
        return Err(Error::Inconsistent);
    }
    Ok(res)
}

/// C with C·C̄ = h and gcd(C, C̄) = 1: every root of positive imaginary
/// part goes into C with its full multiplicity.
pub fn drawing_multiplier<S: Scalar>(h: &CPoly<S>) -> Result<CPoly<S>> {
    if h.deg() <= 0 {
        return Ok(CPoly::one());
    }
    let list = roots::complex_roots(h)?;
    if list.has_real_root() {
        return Err(Error::RealRoot);
    }
    let mut c = CPoly::one();
    for r in list.roots.iter().filter(|r| r.value.im > S::zero()) {
        for _ in 0..r.mult {
            c = c.mul_linear(&r.value);
        }
    }
    Ok(c)
}

/// P = S·P′ with S the largest monic real polynomial dividing Z and W.
pub fn strip_real_content<S: Scalar>(p: &MotionPolynomial<S>) -> (CPoly<S>, MotionPolynomial<S>) {
    let (z, w) = (p.primal(), p.secondary());
    let g = roots::c_gcd(&[z.clone(), z.conj(), w.clone(), w.conj()]).real_part();
    if g.deg() <= 0 {
        return (CPoly::one(), p.clone());
    }
    let rest = MotionPolynomial::new(z.div_rem(&g).0, w.div_rem(&g).0);
    (g, rest)
}

/// The `--drawing` pipeline input: C·P for P = h + η(f + ig).
pub fn drawing_motion<S: Scalar>(p: &MotionPolynomial<S>) -> Result<MotionPolynomial<S>> {
    let h = p.primal();
    if !h.is_real() {
        return Err(Error::Invalid("drawing multiplier needs a real primal part".into()));
    }
    let c = drawing_multiplier(h)?;
    Ok(p.left_mul_complex(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ci, Q};
    use crate::io::text::parse_motion;

    fn ellipse() -> MotionPolynomial<Q> {
        parse_motion("(t^2+1)+(i t-2)e").unwrap()
    }

    #[test]
    fn q_examples() {
        let z = [ci::<Q>(0, 1), ci(0, -1)];
        assert_eq!(build_q(&z, 0), CPoly::linear(&ci(0, -1)));
        assert_eq!(build_q(&z, 1), CPoly::linear(&ci(0, -1)));
        let z = [ci::<Q>(0, 1), ci(0, -1), ci(0, -1), ci(0, 1)];
        assert_eq!(build_q(&z, 1), CPoly::from_roots(&[ci(0, -1), ci(0, -1), ci(0, 1)]));
    }

    #[test]
    fn matchings() {
        let a = ci::<Q>(1, 2);
        let z = [a.clone(), a.clone(), a.conj(), a.conj(), a.conj()];
        assert_eq!(max_matching(&z), vec![(0, 2), (1, 3)]);
        let z = [a.conj(), a.clone(), a.conj(), a.clone(), a.conj()];
        assert_eq!(max_matching(&z).len(), 4);
        assert!(max_matching(&[ci::<Q>(0, 1), ci(1, 1)]).is_empty());
        let z = [ci::<Q>(0, 1), ci(0, -1), ci(0, -1), ci(0, 1)];
        assert_eq!(gcd_of_q(&z).deg(), 2);
    }

    #[test]
    fn minimal_multipliers() {
        let p = ellipse();
        assert_eq!(minimal_r(p.primal(), p.secondary()), CPoly::new(vec![ci(1, 0), ci(0, 0), ci(1, 0)]));
        let cp = drawing_motion(&p).unwrap();
        assert_eq!(minimal_r(cp.primal(), cp.secondary()), CPoly::one());
        let z = CPoly::<Q>::from_roots(&[ci(1, 1), ci(2, 3)]);
        assert_eq!(minimal_r(&z, &CPoly::new(vec![ci(5, 1)])), CPoly::one());
    }

    #[test]
    fn ellipse_factorization() {
        let p = ellipse();
        let f = factor_motion_polynomial(&p).unwrap();
        assert_eq!(f.r, CPoly::new(vec![ci(1, 0), ci(0, 0), ci(1, 0)]));
        assert_eq!(f.permutation, vec![ci(0, -1), ci(0, 1), ci(0, 1), ci(0, -1)]);
        assert_eq!(f.product(), p.scale_real(&f.r));
    }

    #[test]
    fn drawing_factorization_primal_order() {
        let cp = drawing_motion(&ellipse()).unwrap();
        assert_eq!(cp.primal(), &CPoly::from_roots(&[ci(0, 1), ci(0, 1), ci(0, -1)]));
        let f = factor_motion_polynomial(&cp).unwrap();
        assert_eq!(f.r, CPoly::one());
        assert_eq!(f.permutation, vec![ci(0, 1), ci(0, 1), ci(0, -1)]);
        assert_eq!(f.product(), cp);
    }

    #[test]
    fn linear_input() {
        let k = KElement::new(ci::<Q>(1, 2), ci(3, -1));
        let f = factor_motion_polynomial(&MotionPolynomial::linear(&k)).unwrap();
        assert_eq!(f.factors, vec![k]);
    }

    #[test]
    fn unbounded_inputs() {
        let p: MotionPolynomial<Q> = parse_motion("(t^2-1)+(i)e").unwrap();
        assert!(matches!(factor_motion_polynomial(&p), Err(Error::NotBounded(_))));
        let p: MotionPolynomial<Q> = parse_motion("2t+1").unwrap();
        assert!(matches!(factor_motion_polynomial(&p), Err(Error::NotBounded(_))));
    }

    #[test]
    fn drawing_multipliers() {
        let h: CPoly<Q> = crate::io::text::parse_cpoly("t^2+1").unwrap();
        assert_eq!(drawing_multiplier(&h).unwrap(), CPoly::linear(&ci(0, 1)));
        let h2 = h.pow(2);
        let c = drawing_multiplier(&h2).unwrap();
        assert_eq!(&c * &c.conj(), h2);
        let h3: CPoly<Q> = crate::io::text::parse_cpoly("(t^2+2t+2)(t^2+1)").unwrap();
        assert_eq!(drawing_multiplier(&h3).unwrap(), CPoly::from_roots(&[ci(-1, 1), ci(0, 1)]));
        let bad: CPoly<Q> = crate::io::text::parse_cpoly("t^2-1").unwrap();
        assert_eq!(drawing_multiplier(&bad), Err(Error::RealRoot));
    }

    #[test]
    fn real_content() {
        let p: MotionPolynomial<Q> = parse_motion("(t^2+1)(t-i+(2+i)e)").unwrap();
        let (s, rest) = strip_real_content(&p);
        assert_eq!(s, CPoly::new(vec![ci(1, 0), ci(0, 0), ci(1, 0)]));
        assert_eq!(rest.scale_real(&s), p);
        let (s, _) = strip_real_content(&ellipse());
        assert_eq!(s, CPoly::one());
        let rp = ellipse().scale_real(&CPoly::new(vec![ci(1, 0), ci(0, 0), ci(1, 0)]));
        assert_eq!(strip_real_content(&rp).0.deg(), 2);
    }

    #[test]
    fn approx_backend_agrees() {
        let p: MotionPolynomial<f64> = parse_motion("(t^2+1)+(i t-2)e").unwrap();
        let f = factor_motion_polynomial(&p).unwrap();
        assert_eq!(f.factors.len(), 4);
        assert!(f.product().close_to(&p.scale_real(&f.r), 1e-9));
    }
}
