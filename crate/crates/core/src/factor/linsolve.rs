//! Dense Gaussian elimination over C<S>, deterministic column pivoting.

use num_traits::{One, Zero};

use crate::algebra::{cf, Backend, Scalar, C};

/// Row-major matrix.
pub type Mat<S> = Vec<Vec<C<S>>>;

fn max_abs<S: Scalar>(m: &Mat<S>) -> f64 {
    m.iter().flatten().map(|x| cf(x).norm()).fold(0.0, f64::max)
}

fn negligible<S: Scalar>(x: &C<S>, scale: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => x.is_zero(),
        Backend::Approx => cf(x).norm() <= crate::eps() * scale.max(1.0),
    }
}

struct Echelon<S: Scalar> {
    m: Mat<S>,
    /// (row, column) of every pivot, columns increasing
    pivots: Vec<(usize, usize)>,
    scale: f64,
}

/// Columns in index order; in each, the unused row of largest magnitude
/// becomes the pivot unless the column is negligible there.
fn eliminate<S: Scalar>(mut m: Mat<S>, scale: f64) -> Echelon<S> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut used = vec![false; rows];
    let mut pivots = Vec::new();
    for j in 0..cols {
        let best = (0..rows).filter(|&r| !used[r]).map(|r| (r, cf(&m[r][j]).norm())).fold(
            None,
            |acc: Option<(usize, f64)>, (r, v)| match acc {
                Some((_, bv)) if bv >= v => acc,
                _ => Some((r, v)),
            },
        );
        let Some((p, _)) = best else { break };
        if negligible(&m[p][j], scale) {
            continue;
        }
        used[p] = true;
        pivots.push((p, j));
        let inv = C::<S>::one() / m[p][j].clone();
        for r in 0..rows {
            if r == p || m[r][j].is_zero() {
                continue;
            }
            let f = m[r][j].clone() * inv.clone();
            for c in j..m[r].len() {
                let v = m[p][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
            m[r][j] = C::zero();
        }
    }
    Echelon { m, pivots, scale }
}

/// Solves `m x = rhs`; free variables are set to zero. `None` if the system
/// is inconsistent.
pub fn solve<S: Scalar>(m: &Mat<S>, rhs: &[C<S>]) -> Option<Vec<C<S>>> {
    let cols = m.first().map_or(0, |r| r.len());
    let scale = max_abs(m).max(rhs.iter().map(|x| cf(x).norm()).fold(0.0, f64::max));
    let aug: Mat<S> =
        m.iter().zip(rhs).map(|(row, b)| row.iter().cloned().chain(std::iter::once(b.clone())).collect()).collect();
    let e = eliminate(aug, scale);
    let pivot_rows: Vec<usize> = e.pivots.iter().map(|p| p.0).collect();
    if e.pivots.iter().any(|&(_, c)| c == cols) {
        return None;
    }
    for (r, row) in e.m.iter().enumerate() {
        if !pivot_rows.contains(&r) && !negligible(&row[cols], e.scale) {
            return None;
        }
    }
    let mut x = vec![C::zero(); cols];
    for &(r, c) in &e.pivots {
        x[c] = e.m[r][cols].clone() / e.m[r][c].clone();
    }
    Some(x)
}

pub fn rank<S: Scalar>(m: &Mat<S>) -> usize {
    let scale = max_abs(m);
    eliminate(m.clone(), scale).pivots.len()
}

/// Determinant by elimination with partial pivoting (square input).
pub fn det<S: Scalar>(m: &Mat<S>) -> C<S> {
    let n = m.len();
    let mut a = m.clone();
    let mut d = C::<S>::one();
    for j in 0..n {
        let p = (j..n).max_by(|&x, &y| cf(&a[x][j]).norm().total_cmp(&cf(&a[y][j]).norm())).expect("nonempty");
        if a[p][j].is_zero() {
            return C::zero();
        }
        if p != j {
            a.swap(p, j);
            d = -d;
        }
        let inv = C::<S>::one() / a[j][j].clone();
        for r in j + 1..n {
            let f = a[r][j].clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for c in j..n {
                let v = a[j][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - v;
            }
        }
        d = d * a[j][j].clone();
    }
    d
}
