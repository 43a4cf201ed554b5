use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{cf, Param, Scalar};
use crate::Result;

use super::Linkage;

#[derive(Clone, Debug, PartialEq)]
pub struct MobilityReport {
    /// (t, local dimension estimate) per sample.
    pub samples: Vec<(f64, usize)>,
    /// Generic dimension: the minimum over the samples.
    pub dimension: usize,
    pub joints: usize,
    pub independent_cycles: usize,
}

/// Closed walks through the link graph, one per non-tree joint, as
/// (joint, sign) steps: sign +1 when the step goes from link b to link a.
fn fundamental_cycles<S: Scalar>(l: &Linkage<S>) -> Vec<Vec<(usize, f64)>> {
    let tree = l.bfs_tree(1);
    let tree_edges: Vec<usize> = tree.iter().flatten().map(|&(e, _)| e).filter(|&e| e != usize::MAX).collect();
    let path_to_root = |mut x: usize| {
        let mut steps = Vec::new();
        while let Some((e, parent)) = tree[x - 1] {
            if e == usize::MAX {
                break;
            }
            steps.push((e, x, parent));
            x = parent;
        }
        steps
    };
    let step_sign = |e: usize, from: usize, to: usize| {
        let j = &l.joints[e];
        debug_assert!((j.a == to && j.b == from) || (j.a == from && j.b == to));
        if j.a == to {
            1.0
        } else {
            -1.0
        }
    };
    let mut cycles = Vec::new();
    for (e, j) in l.joints.iter().enumerate() {
        if tree_edges.contains(&e) {
            continue;
        }
        let mut up_a = path_to_root(j.a);
        let mut up_b = path_to_root(j.b);
        while let (Some(x), Some(y)) = (up_a.last(), up_b.last()) {
            if x.0 != y.0 {
                break;
            }
            up_a.pop();
            up_b.pop();
        }
        // a → lca → b → a
        let mut walk: Vec<(usize, f64)> = up_a.iter().map(|&(f, x, p)| (f, step_sign(f, x, p))).collect();
        walk.extend(up_b.iter().rev().map(|&(f, x, p)| (f, step_sign(f, p, x))));
        walk.push((e, step_sign(e, j.b, j.a)));
        cycles.push(walk);
    }
    cycles
}

/// Estimates the local dimension of the configuration space at sampled
/// poses: number of joints minus the rank of the velocity constraints of
/// all independent cycles.
pub fn mobility_sample_check<S: Scalar>(l: &Linkage<S>, trials: usize, seed: u64) -> Result<MobilityReport> {
    let motions = l.link_motions()?;
    let cycles = fundamental_cycles(l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = l.joints.len();
    let mut samples = Vec::with_capacity(trials);
    for _ in 0..trials {
        let t: f64 = rng.random_range(-3.0..3.0);
        let pose = l.pose_from_motions(&motions, &Param::Finite(S::from_f64(t)))?;
        let pos: Vec<_> = pose.joints.iter().map(cf).collect();
        let mut jac = DMatrix::<f64>::zeros(3 * cycles.len(), n);
        for (c, walk) in cycles.iter().enumerate() {
            for &(e, sign) in walk {
                let p = pos[e];
                jac[(3 * c, e)] += sign;
                jac[(3 * c + 1, e)] += sign * p.im;
                jac[(3 * c + 2, e)] -= sign * p.re;
            }
        }
        let rank = if cycles.is_empty() {
            0
        } else {
            let sv = jac.svd(false, false).singular_values;
            let top = sv.iter().cloned().fold(0.0, f64::max);
            let tol = 1e-9 * top.max(1.0) * (3 * cycles.len()).max(n) as f64;
            sv.iter().filter(|&&s| s > tol).count()
        };
        samples.push((t, n - rank));
    }
    let dimension = samples.iter().map(|s| s.1).min().unwrap_or(n);
    Ok(MobilityReport { samples, dimension, joints: n, independent_cycles: cycles.len() })
}
