//! Self-collision detection between moving joints and link segments, and
//! the layered F/U/Z physical design for ladder linkages.
//!
//! Links are stacked in an ordering (bottom to top). A joint connecting
//! links a and b is a pin crossing every link stacked strictly between them,
//! so it collides when it passes over a segment of such a link. Segments of
//! a link are the straight bars between any two of its joints.

pub mod layers;
pub(crate) mod realroots;

use num_complex::Complex;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{cf, cis_zero, CPoly, KElement, MotionPolynomial, Scalar, C};
use crate::linkage::Linkage;
use crate::{Error, Result};

pub use layers::{assign_layers, validate_layers, JointType, LayerAssignment, LinkLayer};
pub use realroots::RealRoot;

#[derive(Clone, Debug, PartialEq)]
pub enum EventTime<S: Scalar> {
    Finite(RealRoot<S>),
    Infinity,
}

impl<S: Scalar> EventTime<S> {
    pub fn approx(&self) -> f64 {
        match self {
            EventTime::Finite(r) => r.approx(),
            EventTime::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, EventTime::Infinity)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionEvent<S: Scalar> {
    /// Index of the moving joint.
    pub joint: usize,
    /// The two links the joint connects.
    pub joint_links: (usize, usize),
    /// The link being crossed.
    pub link: usize,
    /// Joint indices (p, q) bounding the segment of `link`.
    pub segment: (usize, usize),
    pub t: EventTime<S>,
    /// The joint sits at s·x_p + (1 − s)·x_q.
    pub s: f64,
    /// The joint stays on the segment's line for all t; `t` is then a
    /// representative time (an end of an overlap interval, or a sample).
    pub persistent: bool,
}

/// Every potential event of every (joint, link) pair. Whether an event
/// counts depends only on the ordering, so searches reuse one table.
#[derive(Clone, Debug)]
pub struct CollisionTable<S: Scalar> {
    pub n_links: usize,
    pub events: Vec<CollisionEvent<S>>,
}

impl<S: Scalar> CollisionTable<S> {
    pub fn select(&self, ordering: &[usize]) -> Result<Vec<CollisionEvent<S>>> {
        let pos = positions(self.n_links, ordering)?;
        Ok(self.events.iter().filter(|ev| between(&pos, ev)).cloned().collect())
    }

    /// (finite-t events, events at t = ∞).
    pub fn count(&self, ordering: &[usize]) -> Result<(usize, usize)> {
        let pos = positions(self.n_links, ordering)?;
        Ok(self.count_pos(&pos))
    }

    fn count_pos(&self, pos: &[usize]) -> (usize, usize) {
        let mut n = (0, 0);
        for ev in self.events.iter().filter(|ev| between(pos, ev)) {
            if ev.t.is_infinite() {
                n.1 += 1;
            } else {
                n.0 += 1;
            }
        }
        n
    }
}

/// pos[link] = height in the stack.
fn positions(n_links: usize, ordering: &[usize]) -> Result<Vec<usize>> {
    let mut pos = vec![usize::MAX; n_links + 1];
    if ordering.len() != n_links {
        return Err(Error::Invalid(format!("ordering has {} entries, expected {n_links}", ordering.len())));
    }
    for (i, &l) in ordering.iter().enumerate() {
        if l == 0 || l > n_links || pos[l] != usize::MAX {
            return Err(Error::Invalid(format!("ordering is not a permutation of 1..={n_links}")));
        }
        pos[l] = i;
    }
    Ok(pos)
}

fn between<S: Scalar>(pos: &[usize], ev: &CollisionEvent<S>) -> bool {
    let (a, b) = ev.joint_links;
    let (lo, hi) = if pos[a] < pos[b] { (pos[a], pos[b]) } else { (pos[b], pos[a]) };
    lo < pos[ev.link] && pos[ev.link] < hi
}

/// Links bottom to top in numbering order.
pub fn default_ordering<S: Scalar>(l: &Linkage<S>) -> Vec<usize> {
    (1..=l.n_links).collect()
}

pub fn detect_collisions<S: Scalar>(l: &Linkage<S>, ordering: &[usize]) -> Result<Vec<CollisionEvent<S>>> {
    let pos = positions(l.n_links, ordering)?;
    let pairs: Vec<(usize, usize)> = pairs(l)
        .into_iter()
        .filter(|&(e, k)| {
            let j = &l.joints[e];
            let (lo, hi) = if pos[j.a] < pos[j.b] { (pos[j.a], pos[j.b]) } else { (pos[j.b], pos[j.a]) };
            lo < pos[k] && pos[k] < hi
        })
        .collect();
    run_pairs(l, &pairs)
}

pub fn collision_table<S: Scalar>(l: &Linkage<S>) -> Result<CollisionTable<S>> {
    let events = run_pairs(l, &pairs(l))?;
    Ok(CollisionTable { n_links: l.n_links, events })
}

fn pairs<S: Scalar>(l: &Linkage<S>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (e, j) in l.joints.iter().enumerate() {
        for k in 1..=l.n_links {
            if k != j.a && k != j.b {
                out.push((e, k));
            }
        }
    }
    out
}

fn run_pairs<S: Scalar>(l: &Linkage<S>, pairs: &[(usize, usize)]) -> Result<Vec<CollisionEvent<S>>> {
    // motions of every link relative to each crossed link
    let mut frames: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    frames.sort_unstable();
    frames.dedup();
    let rel = map_maybe_par(&frames, |&k| (1..=l.n_links).map(|x| l.relative_motion(x, k)).collect::<Result<Vec<_>>>())
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let frame_of = |k: usize| frames.binary_search(&k).expect("frame computed");
    let per_pair = map_maybe_par(pairs, |&(e, k)| pair_events(l, &rel[frame_of(k)], e, k));
    let mut out = Vec::new();
    for evs in per_pair {
        out.extend(evs?);
    }
    Ok(out)
}

#[cfg(feature = "parallel")]
fn map_maybe_par<T: Sync, R: Send>(xs: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    xs.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_maybe_par<T: Sync, R: Send>(xs: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    xs.iter().map(f).collect()
}

fn real_coeffs<S: Scalar>(p: &CPoly<S>, len: usize, part: impl Fn(&C<S>) -> S) -> Vec<S> {
    (0..len).map(|i| part(&p.coeff(i))).collect()
}

fn poly_eval<S: Scalar>(p: &[S], x: &S) -> S {
    p.iter().rev().fold(S::zero(), |acc, a| acc * x.clone() + a.clone())
}

fn poly_eval_f<S: Scalar>(p: &[S], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, a| acc * x + a.to_f64())
}

fn lincomb<S: Scalar>(a: &[S], x: &S, b: &[S], y: &S) -> Vec<S> {
    a.iter().zip(b).map(|(p, q)| p.clone() * x.clone() + q.clone() * y.clone()).collect()
}

fn max_abs<S: Scalar>(p: &[S]) -> f64 {
    p.iter().fold(0.0f64, |m, a| m.max(a.to_f64().abs()))
}

/// Zero polynomial; approx: every coefficient below eps·`reference`.
fn is_zero_poly<S: Scalar>(p: &[S], reference: f64) -> bool {
    match S::BACKEND {
        crate::Backend::Exact => p.iter().all(Zero::is_zero),
        crate::Backend::Approx => max_abs(p) <= crate::eps() * reference,
    }
}

const S_TOL: f64 = 1e-9;

fn in_unit(s: f64) -> bool {
    (-S_TOL..=1.0 + S_TOL).contains(&s)
}

/// Events of joint `e` against every segment of link `k`, in k's frame.
fn pair_events<S: Scalar>(
    l: &Linkage<S>,
    rel: &[MotionPolynomial<S>],
    e: usize,
    k: usize,
) -> Result<Vec<CollisionEvent<S>>> {
    let j = &l.joints[e];
    let (ma, mb) = (&rel[j.a - 1], &rel[j.b - 1]);
    let m = if mb.deg() < ma.deg() { mb } else { ma };
    let z = m.primal();
    let w = m.secondary();
    // joint position in k's frame: N / D
    let num = &(z * z).scale(&j.center) + &(z * w);
    let den = (z * &z.conj()).real_part();
    let len = 2 * m.deg().max(0) as usize + 1;
    let seg_joints = l.incident(k);
    let mut out: Vec<CollisionEvent<S>> = Vec::new();
    for (i, &p) in seg_joints.iter().enumerate() {
        for &q in &seg_joints[i + 1..] {
            let (cp, cq) = (&l.joints[p].center, &l.joints[q].center);
            let d = cp - cq;
            let a = &num - &den.scale(cq);
            let ar = real_coeffs(&a, len, |c| c.re.clone());
            let ai = real_coeffs(&a, len, |c| c.im.clone());
            let dr = real_coeffs(&den, len, |c| c.re.clone());
            let base = CollisionEvent {
                joint: e,
                joint_links: (j.a, j.b),
                link: k,
                segment: (p, q),
                t: EventTime::Infinity,
                s: 0.0,
                persistent: false,
            };
            let found =
                if cis_zero(&d) { point_events(&ar, &ai, &base)? } else { segment_events(&ar, &ai, &dr, &d, &base)? };
            for ev in found {
                if !out.iter().any(|o| same_time(&o.t, &ev.t)) {
                    out.push(ev);
                }
            }
        }
    }
    Ok(out)
}

fn same_time<S: Scalar>(a: &EventTime<S>, b: &EventTime<S>) -> bool {
    match (a, b) {
        (EventTime::Infinity, EventTime::Infinity) => true,
        (EventTime::Finite(x), EventTime::Finite(y)) => match S::BACKEND {
            crate::Backend::Exact => x == y,
            crate::Backend::Approx => (x.approx() - y.approx()).abs() <= 1e-7 * (1.0 + x.approx().abs()),
        },
        _ => false,
    }
}

/// Value of a real polynomial at a root: exact for exact roots, f64 otherwise.
fn at_root<S: Scalar>(p: &[S], r: &RealRoot<S>) -> f64 {
    match r {
        RealRoot::Exact(x) => poly_eval(p, x).to_f64(),
        RealRoot::Isolated { approx, .. } => poly_eval_f(p, *approx),
    }
}

/// Reverses a polynomial of formal degree len − 1: coefficients of
/// t^(len−1)·p(1/t). Events at t = ∞ are events at 0 of the reversal.
fn reversed<S: Scalar>(p: &[S]) -> Vec<S> {
    p.iter().rev().cloned().collect()
}

fn segment_events<S: Scalar>(
    ar: &[S],
    ai: &[S],
    den: &[S],
    d: &C<S>,
    base: &CollisionEvent<S>,
) -> Result<Vec<CollisionEvent<S>>> {
    // collinearity: Im(conj(A)·d) = di·Re A − dr·Im A
    let f = lincomb(ar, &d.im, ai, &-d.re.clone());
    // position along the segment: s = (dr·Re A + di·Im A) / (|d|² D)
    let s_num = lincomb(ar, &d.re, ai, &d.im);
    let d2 = d.norm_sqr();
    let s_den: Vec<S> = den.iter().map(|x| x.clone() * d2.clone()).collect();
    let s_at = |r: &RealRoot<S>| -> f64 {
        match r {
            RealRoot::Exact(x) => (poly_eval(&s_num, x) / poly_eval(&s_den, x)).to_f64(),
            _ => at_root(&s_num, r) / at_root(&s_den, r),
        }
    };
    let s_inf = {
        let (n, dd) = (reversed(&s_num), reversed(&s_den));
        (n[0].clone() / dd[0].clone()).to_f64()
    };
    let reference = max_abs(ar).max(max_abs(ai)) * (d.re.to_f64().abs() + d.im.to_f64().abs());
    let mut out = Vec::new();
    let mut push = |t: EventTime<S>, s: f64, persistent: bool| {
        if in_unit(s) {
            out.push(CollisionEvent { t, s: s.clamp(0.0, 1.0), persistent, ..base.clone() });
        }
    };
    if !is_zero_poly(&f, reference) {
        for r in S::real_roots(&f)? {
            let s = s_at(&r);
            push(EventTime::Finite(r), s, false);
        }
        let rev = reversed(&f);
        if rev[0].near_zero(reference) {
            push(EventTime::Infinity, s_inf, false);
        }
        return Ok(out);
    }
    // joint moves along the segment's line: report where it enters or
    // leaves the segment, or one sample time if it never does
    let s_one: Vec<S> = s_num.iter().zip(&s_den).map(|(a, b)| a.clone() - b.clone()).collect();
    let mut boundary = Vec::new();
    for (poly, sv) in [(&s_num, 0.0), (&s_one, 1.0)] {
        if !is_zero_poly(poly, reference) {
            for r in S::real_roots(poly)? {
                boundary.push((r, sv));
            }
        }
    }
    let any = !boundary.is_empty();
    for (r, sv) in boundary {
        push(EventTime::Finite(r), sv, true);
    }
    if !any {
        let zero = RealRoot::Exact(S::zero());
        let s0 = s_at(&zero);
        push(EventTime::Finite(zero), s0, true);
    }
    push(EventTime::Infinity, s_inf, true);
    Ok(out)
}

/// Degenerate segment (both ends at one point): the joint collides when it
/// reaches that point; reported with s = 0.
fn point_events<S: Scalar>(ar: &[S], ai: &[S], base: &CollisionEvent<S>) -> Result<Vec<CollisionEvent<S>>> {
    let mut out = Vec::new();
    let reference = max_abs(ar).max(max_abs(ai)).max(1.0);
    let (pr, other) = if is_zero_poly(ar, reference) { (ai, ar) } else { (ar, ai) };
    if is_zero_poly(pr, reference) {
        out.push(CollisionEvent { t: EventTime::Finite(RealRoot::Exact(S::zero())), persistent: true, ..base.clone() });
        return Ok(out);
    }
    let scale = other.iter().fold(1.0f64, |m, a| m.max(a.to_f64().abs()));
    for r in S::real_roots(pr)? {
        let v = match &r {
            RealRoot::Exact(x) => poly_eval(other, x).to_f64(),
            RealRoot::Isolated { approx, .. } => poly_eval_f(other, *approx),
        };
        let hit = match (&r, S::BACKEND) {
            (RealRoot::Exact(_), crate::Backend::Exact) => v == 0.0,
            _ => v.abs() <= 1e-8 * scale,
        };
        if hit {
            out.push(CollisionEvent { t: EventTime::Finite(r), ..base.clone() });
        }
    }
    let (rr, ri) = (reversed(ar), reversed(ai));
    if rr[0].near_zero(reference) && ri[0].near_zero(reference) {
        out.push(CollisionEvent { t: EventTime::Infinity, ..base.clone() });
    }
    Ok(out)
}

/// ∏ (t − k_j) at a float t, multiplied out factor by factor.
fn eval_factors_f64<S: Scalar>(ks: &[KElement<S>], t: f64) -> (Complex<f64>, Complex<f64>) {
    let (mut z, mut w) = (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
    for k in ks {
        let (z2, w2) = (t - cf(&k.z), -cf(&k.w));
        (z, w) = (z * z2, z.conj() * w2 + z2 * w);
    }
    (z, w)
}

fn act_f64(z: Complex<f64>, w: Complex<f64>, u: Complex<f64>) -> Complex<f64> {
    (u * z * z + z * w) / z.norm_sqr()
}

/// Relative defect of the event equation x₁ = s·x₂ + (1 − s)·x₃, with all
/// three points computed in base coordinates from the link poses.
pub fn event_residual<S: Scalar>(l: &Linkage<S>, ev: &CollisionEvent<S>) -> Result<f64> {
    let j = &l.joints[ev.joint];
    let c1 = cf(&j.center);
    let c2 = cf(&l.joints[ev.segment.0].center);
    let c3 = cf(&l.joints[ev.segment.1].center);
    let (x1, x2, x3) = match &ev.t {
        EventTime::Infinity => (c1, c2, c3),
        EventTime::Finite(r) => {
            let base = l.base_link();
            let t = r.approx();
            let (za, wa) = eval_factors_f64(&l.relative_factors(j.a, base)?, t);
            let (zk, wk) = eval_factors_f64(&l.relative_factors(ev.link, base)?, t);
            (act_f64(za, wa, c1), act_f64(zk, wk, c2), act_f64(zk, wk, c3))
        }
    };
    let scale = 1.0 + x1.norm().max(x2.norm()).max(x3.norm());
    Ok((x1 - x2 * ev.s - x3 * (1.0 - ev.s)).norm() / scale)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingSearch {
    pub ordering: Vec<usize>,
    pub finite: usize,
    pub infinite: usize,
    pub evaluations: usize,
}

/// Random restarts plus pairwise-swap descent on (finite, infinite) event
/// counts, lexicographically: events at t = ∞ cost a single curve point.
/// `budget` bounds the number of orderings scored.
pub fn search_ordering<S: Scalar>(l: &Linkage<S>, budget: usize, seed: u64) -> Result<OrderingSearch> {
    let table = collision_table(l)?;
    Ok(search_table(&table, &default_ordering(l), budget, seed))
}

pub fn search_table<S: Scalar>(table: &CollisionTable<S>, start: &[usize], budget: usize, seed: u64) -> OrderingSearch {
    let n = table.n_links;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let evals = std::cell::Cell::new(0usize);
    let score = |ord: &[usize]| {
        evals.set(evals.get() + 1);
        let mut pos = vec![0; n + 1];
        for (i, &x) in ord.iter().enumerate() {
            pos[x] = i;
        }
        table.count_pos(&pos)
    };
    let mut best = start.to_vec();
    let mut best_score = score(&best);
    let mut current = best.clone();
    let mut current_score = best_score;
    // moves: swap two links, or lift one link out and reinsert it elsewhere
    let mut moves: Vec<(bool, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j {
                moves.push((true, i, j));
            }
            if i != j {
                moves.push((false, i, j));
            }
        }
    }
    let apply = |ord: &mut Vec<usize>, &(swap, i, j): &(bool, usize, usize)| {
        if swap {
            ord.swap(i, j);
        } else {
            let x = ord.remove(i);
            ord.insert(j, x);
        }
    };
    while evals.get() < budget && best_score != (0, 0) && n >= 3 {
        moves.shuffle(&mut rng);
        let mut improved = false;
        for mv in &moves {
            if evals.get() >= budget {
                break;
            }
            let mut cand = current.clone();
            apply(&mut cand, mv);
            let sc = score(&cand);
            if sc < current_score {
                current = cand;
                current_score = sc;
                improved = true;
            }
        }
        if current_score < best_score {
            best = current.clone();
            best_score = current_score;
        }
        if !improved && evals.get() < budget {
            // restart: a fresh random stack, or a kick from the incumbent
            if rng.random_bool(0.3) {
                current = (1..=n).collect();
                current.shuffle(&mut rng);
            } else {
                current = best.clone();
                for _ in 0..3 {
                    let mv = moves[rng.random_range(0..moves.len())];
                    apply(&mut current, &mv);
                }
            }
            current_score = score(&current);
            if current_score < best_score {
                best = current.clone();
                best_score = current_score;
            }
        }
    }
    OrderingSearch { ordering: best, finite: best_score.0, infinite: best_score.1, evaluations: evals.get() }
}
