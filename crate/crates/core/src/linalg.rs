//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// column of each nonzero row.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Solves `m x = b` for square nonsingular `m`.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Result<Vec<Q>> {
    let n = m.len();
    if b.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("solve needs a square system".into()));
    }
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::Inconsistent("singular system".into()));
    }
    Ok(aug.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}

/// Solves a possibly overdetermined system; `None` if inconsistent,
/// otherwise a particular solution with free variables set to zero.
pub fn solve_least(m: &[Vec<Q>], b: &[Q], cols: usize) -> Option<Vec<Q>> {
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn inverse(m: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != n {
                return Err(Error::Shape("inverse needs a square matrix".into()));
            }
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Inconsistent("singular matrix".into()));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn solves_small_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[qi(3), qi(5)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
    }

    #[test]
    fn singular_system_is_rejected() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(solve(&a, &[qi(1), qi(1)]).is_err());
        assert!(inverse(&a).is_err());
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let dot: Q = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 0, 1], &[0, 1, 0], &[1, 0, 1]]);
        let inv = inverse(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: Q = (0..3).map(|k| &a[i][k] * &inv[k][j]).sum();
                assert_eq!(v, if i == j { qi(1) } else { qi(0) });
            }
        }
    }

    #[test]
    fn overdetermined_consistency() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(
            solve_least(&a, &[qi(1), qi(2), qi(3)], 2),
            Some(vec![qi(1), qi(2)])
        );
        assert_eq!(solve_least(&a, &[qi(1), qi(2), qi(4)], 2), None);
    }
}
