//! Linkage graphs, their synthesis from factorizations, and pose evaluation.
//!
//! Links are numbered from 1. A joint (a, b) carrying a factor k means the
//! motion of link a relative to the base equals (t − k) times the motion of
//! link b, so every synthesized linkage has closed-form link motions.

mod mobility;
mod synth;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::algebra::{ceq, cf, CPoly, KElement, MotionPolynomial, Param, Point, Scalar, C};
use crate::flip::{flip, LadderMeta};
use crate::{Error, Result};

pub use mobility::{mobility_sample_check, MobilityReport};
pub use synth::{
    construct_strong, construct_strong_from_factors, construct_weak, construct_weak_from_factors, Synthesis,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkageKind {
    OpenChain,
    Ladder,
    FourBar,
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Joint<S: Scalar> {
    pub a: usize,
    pub b: usize,
    pub center: Point<S>,
    pub factor: Option<KElement<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisMeta<S: Scalar> {
    pub factors: Vec<KElement<S>>,
    pub ladder: Option<LadderMeta<S>>,
    pub base_link: usize,
    pub drawing_link: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Linkage<S: Scalar> {
    pub n_links: usize,
    pub joints: Vec<Joint<S>>,
    pub kind: LinkageKind,
    pub meta: Option<SynthesisMeta<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pose<S: Scalar> {
    pub t: Param<S>,
    /// Absolute isometry of each link (index = link − 1).
    pub links: Vec<KElement<S>>,
    /// Joint positions, computed through the first link of each joint.
    pub joints: Vec<Point<S>>,
}

/// Joint position as (x_num/x_den, y_num/y_den), all real polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S: Scalar> {
    pub x_num: CPoly<S>,
    pub x_den: CPoly<S>,
    pub y_num: CPoly<S>,
    pub y_den: CPoly<S>,
    /// The motion as a product of linear factors (t − k_j) acting on a
    /// point, when known. Float evaluation goes through the factors: the
    /// expanded polynomials lose most of their digits near clustered roots.
    pub factored: Option<(Vec<KElement<S>>, Point<S>)>,
}

fn joint_from_factor<S: Scalar>(a: usize, b: usize, k: &KElement<S>) -> Result<Joint<S>> {
    Ok(Joint { a, b, center: k.midpt()?, factor: Some(k.clone()) })
}

impl<S: Scalar> Linkage<S> {
    /// Chain of n + 1 links; joint j connects links j and j + 1 and carries
    /// k_j. Link n + 1 is the base, link 1 moves by ∏ (t − k_j).
    pub fn open_chain(ks: &[KElement<S>]) -> Result<Self> {
        let n = ks.len();
        let joints = ks.iter().enumerate().map(|(j, k)| joint_from_factor(j + 1, j + 2, k)).collect::<Result<_>>()?;
        Ok(Linkage {
            n_links: n + 1,
            joints,
            kind: LinkageKind::OpenChain,
            meta: Some(SynthesisMeta { factors: ks.to_vec(), ladder: None, base_link: n + 1, drawing_link: 1 }),
        })
    }

    /// Ladder of n antiparallelograms: top chain 1 … n+1 with k_j, bottom
    /// chain n+2 … 2n+2 with k̃_j, rungs (n+1+j, j) with l_j.
    pub fn ladder(ks: &[KElement<S>], meta: &LadderMeta<S>) -> Result<Self> {
        let n = ks.len();
        if meta.ktilde.len() != n || meta.l.len() != n + 1 {
            return Err(Error::Invalid("ladder data does not match the factor count".into()));
        }
        let mut joints = Vec::with_capacity(3 * n + 1);
        for (j, k) in ks.iter().enumerate() {
            joints.push(joint_from_factor(j + 1, j + 2, k)?);
        }
        for (j, k) in meta.ktilde.iter().enumerate() {
            joints.push(joint_from_factor(n + 2 + j, n + 3 + j, k)?);
        }
        for (j, l) in meta.l.iter().enumerate() {
            joints.push(joint_from_factor(n + 2 + j, j + 1, l)?);
        }
        Ok(Linkage {
            n_links: 2 * n + 2,
            joints,
            kind: LinkageKind::Ladder,
            meta: Some(SynthesisMeta {
                factors: ks.to_vec(),
                ladder: Some(meta.clone()),
                base_link: n + 1,
                drawing_link: 1,
            }),
        })
    }

    /// Four-bar realizing (t − k1)(t − k2) = (t − k3)(t − k4) between links
    /// 3 and 2 (the base).
    pub fn four_bar(k1: &KElement<S>, k2: &KElement<S>) -> Result<Self> {
        let f = flip(k1, k2)?;
        let joints = vec![
            joint_from_factor(3, 1, k1)?,
            joint_from_factor(1, 2, k2)?,
            joint_from_factor(3, 4, &f.k3)?,
            joint_from_factor(4, 2, &f.k4)?,
        ];
        Ok(Linkage {
            n_links: 4,
            joints,
            kind: LinkageKind::FourBar,
            meta: Some(SynthesisMeta {
                factors: vec![k1.clone(), k2.clone()],
                ladder: None,
                base_link: 2,
                drawing_link: 3,
            }),
        })
    }

    pub fn n_joints(&self) -> usize {
        self.joints.len()
    }

    /// Number of squares of a ladder (n).
    pub fn ladder_size(&self) -> Option<usize> {
        (self.kind == LinkageKind::Ladder).then(|| (self.n_links - 2) / 2)
    }

    /// Joints incident to `link`, by index.
    pub fn incident(&self, link: usize) -> Vec<usize> {
        (0..self.joints.len()).filter(|&e| self.joints[e].a == link || self.joints[e].b == link).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (e, j) in self.joints.iter().enumerate() {
            if j.a == j.b {
                return Err(Error::Invalid(format!("joint {e} is a self-loop")));
            }
            if j.a == 0 || j.b == 0 || j.a > self.n_links || j.b > self.n_links {
                return Err(Error::Invalid(format!("joint {e} references a missing link")));
            }
            if let Some(k) = &j.factor {
                if !ceq(&k.midpt()?, &j.center) {
                    return Err(Error::Invalid(format!("joint {e}: center differs from its factor's center")));
                }
            }
        }
        if self.n_links > 0 && self.bfs_tree(1).iter().any(|p| p.is_none()) {
            return Err(Error::Invalid("link graph is not connected".into()));
        }
        Ok(())
    }

    /// For every link, (parent joint, parent link) of a BFS tree from `root`;
    /// the root gets `Some((usize::MAX, root))`.
    fn bfs_tree(&self, root: usize) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.n_links + 1];
        parent[root] = Some((usize::MAX, root));
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for e in self.incident(x) {
                let j = &self.joints[e];
                let y = if j.a == x { j.b } else { j.a };
                if parent[y].is_none() {
                    parent[y] = Some((e, x));
                    queue.push_back(y);
                }
            }
        }
        parent.remove(0);
        parent
    }

    /// Motion of a point fixed in frame `from`, expressed in frame `to`,
    /// along a shortest path of factor-carrying joints.
    pub fn relative_motion(&self, from: usize, to: usize) -> Result<MotionPolynomial<S>> {
        Ok(MotionPolynomial::product_of_linear(&self.relative_factors(from, to)?))
    }

    /// The factors k_j of `relative_motion` = ∏ (t − k_j), in order.
    pub fn relative_factors(&self, from: usize, to: usize) -> Result<Vec<KElement<S>>> {
        let tree = self.bfs_tree(to);
        let mut out = Vec::new();
        let mut x = from;
        while x != to {
            let (e, y) = tree[x - 1].ok_or_else(|| Error::Invalid("link graph is not connected".into()))?;
            let j = &self.joints[e];
            let k = j.factor.as_ref().ok_or_else(|| Error::Invalid("joint without factor".into()))?;
            // pose(a) = (t − k)·pose(b): a-coordinates map to b-coordinates by t − k
            let step = if j.a == x { k.clone() } else { k.inv()? };
            out.push(step);
            x = y;
        }
        Ok(out)
    }

    pub fn base_link(&self) -> usize {
        self.meta.as_ref().map_or(1, |m| m.base_link)
    }

    /// Motions of all links relative to the base link.
    pub fn link_motions(&self) -> Result<Vec<MotionPolynomial<S>>> {
        let base = self.base_link();
        (1..=self.n_links).map(|x| self.relative_motion(x, base)).collect()
    }

    pub fn pose_at(&self, t: &Param<S>) -> Result<Pose<S>> {
        let motions = self.link_motions()?;
        self.pose_from_motions(&motions, t)
    }

    pub fn pose_from_motions(&self, motions: &[MotionPolynomial<S>], t: &Param<S>) -> Result<Pose<S>> {
        let links: Vec<KElement<S>> = motions.iter().map(|m| m.eval(t)).collect();
        let joints = self.joints.iter().map(|j| links[j.a - 1].act(&j.center)).collect::<Result<_>>()?;
        Ok(Pose { t: t.clone(), links, joints })
    }

    /// Largest distance between a joint position computed through its two
    /// links (zero in exact arithmetic for a valid configuration).
    pub fn cycle_residual(&self, pose: &Pose<S>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for j in &self.joints {
            let p = pose.links[j.a - 1].act(&j.center)?;
            let q = pose.links[j.b - 1].act(&j.center)?;
            worst = worst.max((crate::algebra::cf(&p) - crate::algebra::cf(&q)).norm());
        }
        Ok(worst)
    }

    /// Closed-form path of joint `e` in base coordinates.
    pub fn joint_trajectory(&self, e: usize) -> Result<Trajectory<S>> {
        let j = &self.joints[e];
        let base = self.base_link();
        let fa = self.relative_factors(j.a, base)?;
        let fb = self.relative_factors(j.b, base)?;
        let ks = if fb.len() < fa.len() { fb } else { fa };
        Ok(factored_trajectory(ks, &j.center))
    }

    /// Trajectory of the drawing point (origin of the drawing link).
    pub fn pen_trajectory(&self) -> Result<Trajectory<S>> {
        let meta = self.meta.as_ref().ok_or_else(|| Error::Invalid("linkage has no synthesis data".into()))?;
        let ks = self.relative_factors(meta.drawing_link, meta.base_link)?;
        Ok(factored_trajectory(ks, &C::new(S::zero(), S::zero())))
    }

    /// Joints whose factor has primal part ±i: they turn at constant speed
    /// when t = tan of half the motor angle.
    pub fn constant_speed_joints(&self) -> Vec<usize> {
        let i = C::new(S::zero(), S::one());
        (0..self.joints.len())
            .filter(|&e| self.joints[e].factor.as_ref().is_some_and(|k| ceq(&k.z, &i) || ceq(&k.z, &-i.clone())))
            .collect()
    }
}

/// Orbit of u under a motion M = Z + ηW: (u Z² + Z W) / (Z Z̄).
pub fn point_trajectory<S: Scalar>(m: &MotionPolynomial<S>, u: &Point<S>) -> Trajectory<S> {
    let z = m.primal();
    let w = m.secondary();
    let num = &(z * z).scale(u) + &(z * w);
    let den = (z * &z.conj()).real_part();
    let re = CPoly::real(num.coeffs().iter().map(|k| k.re.clone()).collect());
    let im = CPoly::real(num.coeffs().iter().map(|k| k.im.clone()).collect());
    Trajectory { x_num: re, x_den: den.clone(), y_num: im, y_den: den, factored: None }
}

fn factored_trajectory<S: Scalar>(ks: Vec<KElement<S>>, u: &Point<S>) -> Trajectory<S> {
    let mut tr = point_trajectory(&MotionPolynomial::product_of_linear(&ks), u);
    tr.factored = Some((ks, u.clone()));
    tr
}

impl<S: Scalar> Trajectory<S> {
    pub fn eval(&self, t: &Param<S>) -> Option<Point<S>> {
        let f = |n: &CPoly<S>, d: &CPoly<S>| -> Option<S> {
            match t {
                Param::Finite(x) => {
                    let x = C::new(x.clone(), S::zero());
                    let dv = d.eval(&x).re;
                    if dv.is_zero() {
                        return None;
                    }
                    Some(n.eval(&x).re / dv)
                }
                Param::Infinity => {
                    if n.deg() > d.deg() {
                        return None;
                    }
                    let top = d.deg().max(0) as usize;
                    Some(n.coeff(top).re / d.lc().re)
                }
            }
        };
        Some(C::new(f(&self.x_num, &self.x_den)?, f(&self.y_num, &self.y_den)?))
    }

    pub fn degree(&self) -> isize {
        self.x_num.deg().max(self.y_num.deg()).max(self.x_den.deg())
    }

    /// Float evaluation for plotting; `t = ±∞` uses leading coefficients.
    pub fn eval_f64(&self, t: f64) -> Option<(f64, f64)> {
        if let (Some((ks, u)), true) = (&self.factored, t.is_finite()) {
            return eval_factored(ks, u, t);
        }
        let f = |n: &CPoly<S>, d: &CPoly<S>| -> Option<f64> {
            if t.is_infinite() {
                if n.deg() > d.deg() {
                    return None;
                }
                let top = d.deg().max(0) as usize;
                return Some(n.coeff(top).re.to_f64() / d.lc().re.to_f64());
            }
            let h = |p: &CPoly<S>| p.coeffs().iter().rev().fold(0.0, |acc, c| acc * t + c.re.to_f64());
            let dv = h(d);
            (dv != 0.0).then(|| h(n) / dv)
        };
        Some((f(&self.x_num, &self.x_den)?, f(&self.y_num, &self.y_den)?))
    }
}

/// u acted on by ∏ (t − k_j), all in complex floats: (z, w)(z', w') =
/// (z z', z̄ w' + z' w).
fn eval_factored<S: Scalar>(ks: &[KElement<S>], u: &Point<S>, t: f64) -> Option<(f64, f64)> {
    let (mut z, mut w) = (num_complex::Complex::new(1.0, 0.0), num_complex::Complex::new(0.0, 0.0));
    for k in ks {
        let (z2, w2) = (t - cf(&k.z), -cf(&k.w));
        (z, w) = (z * z2, z.conj() * w2 + z2 * w);
    }
    let n = z.norm_sqr();
    if n == 0.0 {
        return None;
    }
    let p = (cf(u) * z * z + z * w) / n;
    Some((p.re, p.im))
}
