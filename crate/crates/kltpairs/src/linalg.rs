//! Small exact linear-algebra helpers over `Rat` and `i64`.
//!
//! Matrices here never exceed 8x8, so plain Gaussian elimination with exact
//! rationals is the right tool.

use crate::Rat;
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn identity_rat(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

/// Inverse of a square rational matrix by Gauss-Jordan. `None` if singular.
pub fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv = identity_rat(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| *a * *b).sum())
        .collect()
}

#[cfg(test)]
pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let v = a[i][l] * b[l][j];
                out[i][j] += v;
            }
        }
    }
    out
}

/// Solves `rows[i] . x = rhs[i]` (each row a linear condition on x).
///
/// Returns `None` when inconsistent. Underdetermined systems get the
/// deterministic particular solution with all free variables set to zero.
pub fn solve_rows(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(rows.len(), rhs.len());
    let nvars = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(*b);
            row
        })
        .collect();
    let nrows = a.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut prow = 0;
    for col in 0..nvars {
        let Some(r) = (prow..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(prow, r);
        let p = a[prow][col];
        for j in col..=nvars {
            a[prow][j] /= p;
        }
        for r2 in 0..nrows {
            if r2 != prow && !a[r2][col].is_zero() {
                let f = a[r2][col];
                for j in col..=nvars {
                    let v = a[prow][j];
                    a[r2][j] -= f * v;
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == nrows {
            break;
        }
    }
    // Any leftover row with zero coefficients but nonzero rhs is inconsistent.
    for r in prow..nrows {
        if a[r][..nvars].iter().all(Zero::is_zero) && !a[r][nvars].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); nvars];
    for (r, c) in pivots {
        x[c] = a[r][nvars];
    }
    Some(x)
}

pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rat::one();
    for col in 0..n {
        let Some(r) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if r != col {
            a.swap(col, r);
            d = -d;
        }
        d *= a[col][col];
        let p = a[col][col];
        for r2 in col + 1..n {
            if !a[r2][col].is_zero() {
                let f = a[r2][col] / p;
                for j in col..n {
                    let v = a[col][j];
                    a[r2][j] -= f * v;
                }
            }
        }
    }
    d
}

pub fn det_i64(m: &[Vec<i64>]) -> Rat {
    let rows: Vec<Vec<Rat>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x)).collect())
        .collect();
    det(&rows)
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_vec(v);
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Basis (as rows) of `{ x in Z^n : m x = 0 }`, computed by integer column
/// reduction with a unimodular transform. Kernels of integer matrices are
/// saturated, which is what the lattice code relies on.
pub fn integer_kernel(m: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let nrows = m.len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    // u tracks the column operations: columns of u are candidate kernel vectors.
    let mut u: Vec<Vec<i64>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i64::from(i == j)).collect())
        .collect();
    let col_sub = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, q: i64| {
        for row in a.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in u.iter_mut() {
            row[dst] -= q * row[src];
        }
    };
    let col_swap = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in u.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut pivot_col = 0;
    for r in 0..nrows {
        loop {
            let nz: Vec<usize> = (pivot_col..ncols).filter(|&j| a[r][j] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    col_swap(&mut a, &mut u, pivot_col, j);
                    pivot_col += 1;
                }
                break;
            }
            // Reduce every other nonzero entry by the smallest one.
            let &jmin = nz
                .iter()
                .min_by_key(|&&j| (a[r][j].abs(), j))
                .expect("nonempty");
            for &j in &nz {
                if j != jmin {
                    let q = a[r][j].div_euclid(a[r][jmin]);
                    col_sub(&mut a, &mut u, j, jmin, q);
                }
            }
        }
        if pivot_col == ncols {
            break;
        }
    }
    (pivot_col..ncols)
        .map(|j| (0..ncols).map(|i| u[i][j]).collect())
        .collect()
}
