//! Gauss-Jordan elimination over the rationals.

use num::{One, Zero};

use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// The system has exactly one solution.
    Unique(Vec<Rat>),
    /// Some solution exists; free variables are set to zero.
    Underdetermined { particular: Vec<Rat>, rank: usize },
    Inconsistent,
}

impl Solution {
    pub fn unique(self) -> Option<Vec<Rat>> {
        match self {
            Solution::Unique(v) => Some(v),
            _ => None,
        }
    }

    pub fn any(self) -> Option<Vec<Rat>> {
        match self {
            Solution::Unique(v) | Solution::Underdetermined { particular: v, .. } => Some(v),
            Solution::Inconsistent => None,
        }
    }
}

/// Solves `a·x = b`. Rows of `a` must all have the same length.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = Rat::one() / &a[r][c];
        for x in a[r][c..].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let k = a[i][c].clone();
            let (pivot_row, row) = if i < r {
                let (lo, hi) = a.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = a.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &k * &pivot_row[j];
                }
            }
            let t = &k * &b[r];
            b[i] -= t;
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    if pivots.len() == cols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined { particular: x, rank: pivots.len() }
    }
}

/// Exact inverse of a square matrix, if it exists.
pub fn inverse(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rat> = (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
        cols.push(solve(a.to_vec(), e).unique()?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).fold(Rat::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    a.iter().map(|row| row.iter().zip(v).fold(Rat::zero(), |acc, (x, y)| acc + x * y)).collect()
}
