//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::Q;

/// Determinant of a square matrix by Gaussian elimination.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for cc in c..n {
                let t = &f * &a[c][cc];
                a[r][cc] -= t;
            }
        }
    }
    d
}

/// Rank of an arbitrary rectangular matrix.
pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for cc in c..cols {
                let t = &f * &a[r][cc];
                a[i][cc] -= t;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Solve `A x = b` for square non-singular `A`. Returns `None` when singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for cc in c..=n {
            m[c][cc] = &m[c][cc] / &piv;
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for cc in c..=n {
                let t = &f * &m[c][cc];
                m[r][cc] -= t;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Solve a lower triangular system with non-zero diagonal.
pub fn solve_lower_triangular(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut x: Vec<Q> = Vec::with_capacity(n);
    for i in 0..n {
        if a[i][i].is_zero() {
            return None;
        }
        let mut s = b[i].clone();
        for (j, xj) in x.iter().enumerate() {
            if !a[i][j].is_zero() {
                s -= &a[i][j] * xj;
            }
        }
        x.push(s / &a[i][i]);
    }
    Some(x)
}

/// Solve a possibly rectangular system. Returns a particular solution (free
/// variables set to zero) and the rank, or `None` when inconsistent.
pub fn solve_general(a: &[Vec<Q>], b: &[Q]) -> Option<(Vec<Q>, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][c].clone();
        for cc in c..=cols {
            m[r][cc] = &m[r][cc] / &piv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for cc in c..=cols {
                let t = &f * &m[r][cc];
                m[i][cc] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some((x, pivots.len()))
}

pub fn is_lower_unitriangular(a: &[Vec<Q>]) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| match j.cmp(&i) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => v.is_one(),
            std::cmp::Ordering::Greater => v.is_zero(),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(&mat(&[&[1, 2], &[3, 4]])), q(-2));
        assert_eq!(det(&mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])), q(-1));
        assert_eq!(det(&mat(&[&[1, 2], &[2, 4]])), q(0));
    }

    #[test]
    fn rank_and_solve() {
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&mat(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
        let a = mat(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Q::new(4.into(), 5.into()), Q::new(7.into(), 5.into())]);
        assert!(solve(&mat(&[&[1, 2], &[2, 4]]), &[q(1), q(1)]).is_none());
        let l = mat(&[&[1, 0], &[3, 1]]);
        assert!(is_lower_unitriangular(&l));
        assert_eq!(solve_lower_triangular(&l, &[q(1), q(5)]).unwrap(), vec![q(1), q(2)]);
        let tall = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve_general(&tall, &[q(1), q(2), q(3)]).unwrap(), (vec![q(1), q(2)], 2));
        assert!(solve_general(&tall, &[q(1), q(2), q(4)]).is_none());
        let wide = mat(&[&[1, 1]]);
        assert_eq!(solve_general(&wide, &[q(2)]).unwrap(), (vec![q(2), q(0)], 1));
    }
}
