//! Exact linear algebra over the rationals for sparse keyed vectors.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::rational::Q;

/// A vector with coordinates indexed by `K`; absent keys are zero.
pub type Sparse<K> = BTreeMap<K, Q>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Dense matrix whose columns are the given vectors, rows indexed by the
/// union of their keys (plus `extra`).
fn dense<K: Ord + Clone>(cols: &[Sparse<K>], extra: Option<&Sparse<K>>) -> Vec<Vec<Q>> {
    let keys: BTreeSet<&K> = cols.iter().chain(extra).flat_map(|v| v.keys()).collect();
    let width = cols.len() + usize::from(extra.is_some());
    keys.iter()
        .map(|k| {
            let mut row = vec![Q::zero(); width];
            for (j, v) in cols.iter().chain(extra).enumerate() {
                if let Some(x) = v.get(*k) {
                    row[j] = x.clone();
                }
            }
            row
        })
        .collect()
}

pub fn rank<K: Ord + Clone>(cols: &[Sparse<K>]) -> usize {
    let mut m = dense(cols, None);
    rref(&mut m).len()
}

/// A basis of `{c : Σ c_j cols[j] = 0}`, one vector per free column, with
/// that column's coefficient equal to one.
pub fn kernel<K: Ord + Clone>(cols: &[Sparse<K>]) -> Vec<Vec<Q>> {
    let mut m = dense(cols, None);
    let pivots = rref(&mut m);
    let n = cols.len();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); n];
            v[free] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// One solution of `Σ x_j cols[j] = rhs` (free variables zero) and the
/// kernel, or `None` when the system is inconsistent.
pub fn solve<K: Ord + Clone>(cols: &[Sparse<K>], rhs: &Sparse<K>) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let n = cols.len();
    let mut m = dense(cols, Some(rhs));
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = m[row][n].clone();
    }
    Some((x, kernel(cols)))
}

/// `Σ c_j cols[j]`.
pub fn combine<K: Ord + Clone>(cols: &[Sparse<K>], c: &[Q]) -> Sparse<K> {
    let mut out: Sparse<K> = BTreeMap::new();
    for (v, cj) in cols.iter().zip(c) {
        if cj.is_zero() {
            continue;
        }
        for (k, x) in v {
            let e = out.entry(k.clone()).or_insert_with(Q::zero);
            *e += x * cj;
        }
    }
    out.retain(|_, x| !x.is_zero());
    out
}
