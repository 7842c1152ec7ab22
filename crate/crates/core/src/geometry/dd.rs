//! Double description: extreme rays of a pointed cone `{d : A d <= 0}`.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::linalg::{independent_rows, solve, Vector};
use crate::error::{Error, Result};
use crate::rational::Rational;

type Ray = Vec<i128>;

/// Scales a rational row to a primitive integer row with the same sign pattern.
fn integer_row(row: &[Rational]) -> Result<Ray> {
    let lcm = row.iter().fold(num_bigint::BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<num_bigint::BigInt> = row.iter().map(|v| (v * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| {
            let v = if g.is_zero() { v.clone() } else { v / &g };
            v.to_i128().ok_or_else(|| Error::Budget("cone row entries exceed 128-bit range".into()))
        })
        .collect()
}

fn normalize(mut r: Ray) -> Ray {
    let g = r.iter().fold(0i128, |acc, &v| acc.gcd(&v));
    if g > 1 {
        for v in r.iter_mut() {
            *v /= g;
        }
    }
    r
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x.checked_mul(*y).expect("ray overflow")).fold(0i128, |s, v| {
        s.checked_add(v).expect("ray overflow")
    })
}

/// Extreme rays of `{d : rows · d <= 0}`, which must be pointed (the rows
/// span the whole space). At most 128 rows. Rays are primitive integer vectors.
pub(crate) fn extreme_rays(rows: &[Vector]) -> Result<Vec<Vec<Rational>>> {
    let dim = rows.first().map_or(0, |r| r.len());
    if rows.len() > 128 {
        return Err(Error::Budget(format!("{} cone constraints exceed the 128 supported", rows.len())));
    }
    let basis = independent_rows(rows);
    if basis.len() < dim {
        return Err(Error::domain("cone is not pointed"));
    }
    let int_rows: Vec<Ray> = rows.iter().map(|r| integer_row(r)).collect::<Result<_>>()?;

    // initial simplicial cone: rays -A_B^{-1} e_j
    let a_b: Vec<Vector> = basis.iter().map(|&i| rows[i].clone()).collect();
    let mut rays: Vec<(Ray, u128)> = Vec::new();
    for j in 0..dim {
        let mut rhs = vec![Rational::zero(); dim];
        rhs[j] = -Rational::from_integer(1.into());
        let r = solve(&a_b, &rhs).expect("basis rows are independent");
        let ray = normalize(integer_row(&r)?);
        let zero: u128 = basis
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .fold(0, |acc, (_, &i)| acc | (1u128 << i));
        rays.push((ray, zero));
    }

    for (i, row) in int_rows.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let signs: Vec<i128> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        let mut next: Vec<(Ray, u128)> = Vec::new();
        for (k, (r, z)) in rays.iter().enumerate() {
            if signs[k] < 0 {
                next.push((r.clone(), *z));
            } else if signs[k] == 0 {
                next.push((r.clone(), *z | (1u128 << i)));
            }
        }
        for (p, (rp, zp)) in rays.iter().enumerate() {
            if signs[p] <= 0 {
                continue;
            }
            for (q, (rq, zq)) in rays.iter().enumerate() {
                if signs[q] >= 0 {
                    continue;
                }
                let common = zp & zq;
                if (common.count_ones() as usize) + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, (_, zk))| k == p || k == q || zk & common != common);
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (signs[p], signs[q]);
                let combined: Ray = rp
                    .iter()
                    .zip(rq)
                    .map(|(&a, &b)| {
                        sp.checked_mul(b)
                            .and_then(|x| sq.checked_mul(a).and_then(|y| x.checked_sub(y)))
                            .expect("ray overflow")
                    })
                    .collect();
                next.push((normalize(combined), common | (1u128 << i)));
            }
        }
        rays = next;
    }
    Ok(rays
        .into_iter()
        .map(|(r, _)| r.into_iter().map(|v| Rational::from_integer(v.into())).collect())
        .collect())
}

/// Extreme rays of a pointed cone by brute force: every `dim - 1` rows whose
/// null space is a line, both orientations, kept when feasible. Test oracle.
#[cfg(test)]
pub(crate) fn extreme_rays_brute(rows: &[Vector]) -> Vec<Vec<Rational>> {
    use itertools::Itertools;
    let dim = rows[0].len();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for combo in (0..rows.len()).combinations(dim - 1) {
        let sub: Vec<Vector> = combo.iter().map(|&i| rows[i].clone()).collect();
        if super::linalg::rank(&sub) != dim - 1 {
            continue;
        }
        let d = super::linalg::null_vector(&sub, dim).unwrap();
        for sign in [1i64, -1] {
            let cand: Vec<Rational> = d.iter().map(|v| v * Rational::from_integer(sign.into())).collect();
            if rows.iter().all(|r| super::linalg::dot(r, &cand) <= Rational::zero()) {
                let ints = normalize(integer_row(&cand).unwrap());
                let cand: Vec<Rational> = ints.into_iter().map(|v| Rational::from_integer(v.into())).collect();
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}
