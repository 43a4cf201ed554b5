use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::Scalar;
use crate::linkage::Linkage;
use crate::{Error, Result};

/// Physical shape of a link in the layered design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkLayer {
    /// Flat bar on one layer.
    F(usize),
    /// Bracket with arms on layers a < b, the web outside all layers between.
    U(usize, usize),
    /// Bar stepping from layer a to layer a + 2 around a pin on a + 1.
    Z(usize, usize),
}

impl LinkLayer {
    fn layers(&self) -> Vec<usize> {
        match *self {
            LinkLayer::F(a) => vec![a],
            LinkLayer::U(a, b) | LinkLayer::Z(a, b) => vec![a, b],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JointType {
    T,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerAssignment {
    pub n_layers: usize,
    /// Indexed by link − 1.
    pub links: Vec<LinkLayer>,
    /// Indexed like the linkage's joints.
    pub joints: Vec<JointType>,
}

/// Collision-free layering of a ladder with n squares on 4n + 1 layers.
///
/// Top links 1..=n are nested U brackets (0, 4n), (3, 4n − 1), …; the
/// bottom chain climbs through F and Z links in between, and rungs 2..=n
/// are Z-joints.
pub fn assign_layers<S: Scalar>(l: &Linkage<S>) -> Result<LayerAssignment> {
    let n = match l.ladder_size() {
        Some(n) if n >= 1 && l.n_links == 2 * n + 2 && l.joints.len() == 3 * n + 1 => n,
        _ => return Err(Error::NotLadder),
    };
    let mut links = Vec::with_capacity(2 * n + 2);
    for j in 1..=n {
        links.push(LinkLayer::U(3 * (j - 1), 4 * n - (j - 1)));
    }
    links.push(LinkLayer::F(3 * n));
    links.push(LinkLayer::F(1));
    for j in 2..=n {
        links.push(LinkLayer::Z(3 * j - 4, 3 * j - 2));
    }
    links.push(LinkLayer::F(3 * n - 1));
    // rung j joins bottom link n + 1 + j and top link j
    let joints = l
        .joints
        .iter()
        .map(|jt| {
            let (lo, hi) = (jt.a.min(jt.b), jt.a.max(jt.b));
            let rung = hi - lo == n + 1;
            if rung && (2..=n).contains(&lo) {
                JointType::Z
            } else {
                JointType::T
            }
        })
        .collect();
    Ok(LayerAssignment { n_layers: 4 * n + 1, links, joints })
}

/// Checks the combinatorial conditions of a layered design.
pub fn validate_layers<S: Scalar>(l: &Linkage<S>, a: &LayerAssignment) -> bool {
    if a.links.len() != l.n_links || a.joints.len() != l.joints.len() {
        return false;
    }
    let mut used = BTreeSet::new();
    for link in &a.links {
        match *link {
            LinkLayer::U(x, y) if x >= y => return false,
            LinkLayer::Z(x, y) if y != x + 2 => return false,
            _ => {}
        }
        for layer in link.layers() {
            if layer >= a.n_layers || !used.insert(layer) {
                return false;
            }
        }
    }
    if used.len() != a.n_layers {
        return false;
    }
    let us: Vec<(usize, usize)> = a
        .links
        .iter()
        .filter_map(|x| match *x {
            LinkLayer::U(p, q) => Some((p, q)),
            _ => None,
        })
        .collect();
    for (i, &(a1, b1)) in us.iter().enumerate() {
        for &(a2, b2) in &us[i + 1..] {
            if (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1) {
                return false;
            }
        }
    }
    let holds = |link: usize, layer: usize| a.links[link - 1].layers().contains(&layer);
    for (jt, ty) in l.joints.iter().zip(&a.joints) {
        let (la, lb) = (&a.links[jt.a - 1], &a.links[jt.b - 1]);
        let ok = match ty {
            JointType::T => la.layers().iter().any(|&x| lb.layers().iter().any(|&y| x.abs_diff(y) == 1)),
            JointType::Z => match (*la, *lb) {
                (LinkLayer::Z(p, _), _) if holds(jt.b, p + 1) => true,
                (_, LinkLayer::Z(p, _)) if holds(jt.a, p + 1) => true,
                _ => false,
            },
        };
        if !ok {
            return false;
        }
    }
    true
}
