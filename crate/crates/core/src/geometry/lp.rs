//! Exact two-phase simplex with Bland's rule.
//!
//! The tableau is generic over a [`Field`] so the common case runs on
//! `Ratio<i128>`; any overflow aborts the attempt and the caller reruns on
//! arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub(crate) trait Field: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn lt(&self, o: &Self) -> bool;
}

type Small = Ratio<i128>;

impl Field for Small {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn lt(&self, o: &Self) -> bool {
        // cross-multiplication can overflow; compare via subtraction when possible
        match self.checked_sub(o) {
            Some(d) => Signed::is_negative(&d),
            None => to_big(self) < to_big(o),
        }
    }
}

impl Field for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
}

fn to_small(r: &Rational) -> Option<Small> {
    Some(Small::new(r.numer().to_i128()?, r.denom().to_i128()?))
}

fn to_big(r: &Small) -> Rational {
    Rational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Outcome of `minimize c·x s.t. A x = b, x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum StdOutcome<F> {
    Optimal { value: F, x: Vec<F> },
    Infeasible,
    Unbounded,
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    obj: Vec<F>,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    active: usize,
}

impl<F: Field> Tableau<F> {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let piv = self.rows[r][c].clone();
        let row: Vec<F> = self.rows[r].iter().map(|v| v.div(&piv)).collect::<Option<_>>()?;
        for (i, other) in self.rows.iter_mut().enumerate() {
            if i == r || other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for (o, v) in other.iter_mut().zip(&row) {
                if !v.is_zero() {
                    *o = o.sub(&f.mul(v)?)?;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (o, v) in self.obj.iter_mut().zip(&row) {
                if !v.is_zero() {
                    *o = o.sub(&f.mul(v)?)?;
                }
            }
        }
        self.rows[r] = row;
        self.basis[r] = c;
        Some(())
    }

    /// Runs Bland-rule simplex on the current objective row. `Some(false)` = unbounded.
    fn run(&mut self) -> Option<bool> {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..self.active).find(|&j| self.obj[j].is_negative()) else {
                return Some(true);
            };
            let mut best: Option<(usize, F)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = row[rhs].div(&row[c])?;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio.lt(bv) || (!bv.lt(&ratio) && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c)?,
                None => return Some(false),
            }
        }
    }
}

/// Minimizes `c·x` subject to `A x = b`, `x >= 0`. `None` on arithmetic overflow.
pub(crate) fn solve_standard<F: Field>(a: &[Vec<F>], b: &[F], c: &[F]) -> Option<StdOutcome<F>> {
    let m = a.len();
    let nv = c.len();
    let total = nv + m;
    let mut rows = Vec::with_capacity(m);
    for (row, rhs) in a.iter().zip(b) {
        let flip = rhs.is_negative();
        let mut out = Vec::with_capacity(total + 1);
        for v in row {
            out.push(if flip { F::nil().sub(v)? } else { v.clone() });
        }
        out.extend(std::iter::repeat_n(F::nil(), m));
        out.push(if flip { F::nil().sub(rhs)? } else { rhs.clone() });
        rows.push(out);
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[nv + i] = F::unit();
    }
    // phase 1: minimize the sum of artificials
    let mut obj = vec![F::nil(); total + 1];
    for row in &rows {
        for j in 0..nv {
            obj[j] = obj[j].sub(&row[j])?;
        }
        obj[total] = obj[total].sub(&row[total])?;
    }
    let mut tab = Tableau {
        rows,
        obj,
        basis: (nv..total).collect(),
        active: nv,
    };
    tab.run()?;
    if tab.obj[total].is_negative() {
        return Some(StdOutcome::Infeasible);
    }
    // drive artificials out of the basis; rows where that is impossible are redundant
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= nv {
            match (0..nv).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => {
                    tab.pivot(r, j)?;
                    r += 1;
                }
                None => {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }
    for row in tab.rows.iter_mut() {
        let rhs = row[total].clone();
        row.truncate(nv);
        row.push(rhs);
    }
    let mut obj: Vec<F> = c.to_vec();
    obj.push(F::nil());
    for (row, &bj) in tab.rows.iter().zip(&tab.basis) {
        let f = c[bj].clone();
        if f.is_zero() {
            continue;
        }
        for (o, v) in obj.iter_mut().zip(row) {
            *o = o.sub(&f.mul(v)?)?;
        }
    }
    tab.obj = obj;
    tab.active = nv;
    if !tab.run()? {
        return Some(StdOutcome::Unbounded);
    }
    let mut x = vec![F::nil(); nv];
    for (row, &bj) in tab.rows.iter().zip(&tab.basis) {
        x[bj] = row[nv].clone();
    }
    let value = F::nil().sub(&tab.obj[nv])?;
    Some(StdOutcome::Optimal { value, x })
}

/// Solves a standard-form LP exactly, on `i128` rationals when they suffice.
pub(crate) fn solve_standard_exact(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> StdOutcome<Rational> {
    let small = || -> Option<StdOutcome<Rational>> {
        let a: Vec<Vec<Small>> = a.iter().map(|r| r.iter().map(to_small).collect()).collect::<Option<_>>()?;
        let b: Vec<Small> = b.iter().map(to_small).collect::<Option<_>>()?;
        let c: Vec<Small> = c.iter().map(to_small).collect::<Option<_>>()?;
        Some(match solve_standard(&a, &b, &c)? {
            StdOutcome::Optimal { value, x } => StdOutcome::Optimal {
                value: to_big(&value),
                x: x.iter().map(to_big).collect(),
            },
            StdOutcome::Infeasible => StdOutcome::Infeasible,
            StdOutcome::Unbounded => StdOutcome::Unbounded,
        })
    };
    if let Some(out) = small() {
        return out;
    }
    solve_standard(a, b, c).expect("arbitrary-precision arithmetic cannot overflow")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `coeffs · x  (relation)  rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimum, when `status` is optimal.
    pub value: Option<Rational>,
    /// An optimizer, when `status` is optimal.
    pub point: Option<Vec<Rational>>,
}

/// Maximizes `objective · x` over free variables `x` subject to `constraints`.
pub fn lp_max(objective: &[Rational], constraints: &[Constraint]) -> Result<LpSolution> {
    let k = objective.len();
    if let Some(bad) = constraints.iter().position(|c| c.coeffs.len() != k) {
        return Err(Error::domain(format!(
            "constraint {bad} has {} coefficients, objective has {k}",
            constraints[bad].coeffs.len()
        )));
    }
    // x = x⁺ - x⁻, then one slack per inequality
    let slacks: Vec<usize> = constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.relation != Relation::Eq)
        .map(|(i, _)| i)
        .collect();
    let nv = 2 * k + slacks.len();
    let mut a = Vec::with_capacity(constraints.len());
    let mut b = Vec::with_capacity(constraints.len());
    for (i, con) in constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); nv];
        for (j, v) in con.coeffs.iter().enumerate() {
            row[j] = v.clone();
            row[k + j] = -v;
        }
        if let Some(s) = slacks.iter().position(|&x| x == i) {
            row[2 * k + s] = match con.relation {
                Relation::Le => Rational::one(),
                _ => -Rational::one(),
            };
        }
        a.push(row);
        b.push(con.rhs.clone());
    }
    let mut c = vec![Rational::zero(); nv];
    for (j, v) in objective.iter().enumerate() {
        c[j] = -v;
        c[k + j] = v.clone();
    }
    Ok(match solve_standard_exact(&a, &b, &c) {
        StdOutcome::Optimal { value, x } => LpSolution {
            status: LpStatus::Optimal,
            value: Some(-value),
            point: Some((0..k).map(|j| &x[j] - &x[k + j]).collect()),
        },
        StdOutcome::Infeasible => LpSolution {
            status: LpStatus::Infeasible,
            value: None,
            point: None,
        },
        StdOutcome::Unbounded => LpSolution {
            status: LpStatus::Unbounded,
            value: None,
            point: None,
        },
    })
}
