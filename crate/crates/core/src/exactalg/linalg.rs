//! Dense exact linear algebra over the rationals (small matrices only).

use num_traits::{One, Zero};

use super::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Row-reduces a copy of `m` and returns (reduced matrix, pivot columns).
pub fn row_reduce(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    row_reduce(m).1.len()
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return None;
    }
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (red, piv) = row_reduce(&aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `m x = b` for a square or overdetermined consistent system with
/// full column rank. Returns `None` if inconsistent or underdetermined.
pub fn solve(m: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, |r| r.len());
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, piv) = row_reduce(&aug);
    if piv.contains(&cols) || piv.len() < cols {
        return None;
    }
    Some((0..cols).map(|i| red[i][cols].clone()).collect())
}

pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let v = &a[c][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
    }
    det
}

pub fn transpose(m: &Matrix) -> Matrix {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

/// One nonzero vector spanning the kernel of `m`, when that kernel is a line.
pub fn kernel_line(m: &Matrix, cols: usize) -> Option<Vec<Rational>> {
    let (red, piv) = row_reduce(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    if free.len() != 1 {
        return None;
    }
    let f = free[0];
    let mut v = vec![Rational::zero(); cols];
    v[f] = Rational::one();
    for (r, &pc) in piv.iter().enumerate() {
        v[pc] = -red[r][f].clone();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(determinant(&a), rat(1));
        assert_eq!(inverse(&a).unwrap(), m(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn solve_overdetermined() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[rat(1), rat(2), rat(3)]).unwrap(), vec![rat(1), rat(2)]);
        assert!(solve(&a, &[rat(1), rat(2), rat(4)]).is_none());
    }

    #[test]
    fn kernel_of_plane() {
        let k = kernel_line(&m(&[&[1, 1, 0], &[0, 1, 1]]), 3).unwrap();
        assert_eq!(k, vec![rat(1), rat(-1), rat(1)]);
        assert_eq!(rank(&m(&[&[1, 1, 0], &[2, 2, 0]])), 1);
    }
}
