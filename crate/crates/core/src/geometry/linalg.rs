//! Small dense exact linear algebra.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub(crate) type Vector = Vec<Rational>;

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x * y
        }
    })
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(m: &mut [Vector]) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank(rows: &[Vector]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// A nonzero vector `d` with `rows · d = 0`, if one exists.
pub(crate) fn null_vector(rows: &[Vector], cols: usize) -> Option<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut d = vec![Rational::zero(); cols];
    d[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        d[pc] = -m[r][free].clone();
    }
    Some(d)
}

/// Solves the square system `A x = b`; `None` when singular.
pub(crate) fn solve(a: &[Vector], b: &[Rational]) -> Option<Vector> {
    let n = a.len();
    let mut m: Vec<Vector> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Indices of a maximal linearly independent subset of `rows`, chosen greedily in order.
pub(crate) fn independent_rows(rows: &[Vector]) -> Vec<usize> {
    let mut basis: Vec<Vector> = Vec::new();
    let mut picked = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis) == basis.len() {
            picked.push(i);
        } else {
            basis.pop();
        }
    }
    picked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn solve_and_rank() {
        let a = vec![v(&[2, 1]), v(&[1, 3])];
        let x = solve(&a, &v(&[3, 5])).unwrap();
        assert_eq!(x, vec![crate::rational::ratio(4, 5), crate::rational::ratio(7, 5)]);
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]), 1);
        assert!(solve(&[v(&[1, 2]), v(&[2, 4])], &v(&[1, 1])).is_none());
        let d = null_vector(&[v(&[1, 1, 0])], 3).unwrap();
        assert_eq!(dot(&v(&[1, 1, 0]), &d), rat(0));
        assert_eq!(independent_rows(&[v(&[1, 0]), v(&[2, 0]), v(&[0, 1])]), vec![0, 2]);
    }
}
