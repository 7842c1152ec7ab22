use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::subset::Subset;

/// Dense row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(PolyMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged matrix rows"));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn parse_rows(rows: &[Vec<&str>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|e| LaurentPoly::parse(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.cols + c]
    }

    /// The first `k` rows.
    pub fn top_rows(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.rows {
            return Err(Error::domain(format!("cannot take {k} rows of a {}-row matrix", self.rows)));
        }
        Self::new(k, self.cols, self.entries[..k * self.cols].to_vec())
    }

    /// Square submatrix on the given 1-based columns.
    pub fn columns(&self, cols: &Subset) -> Result<Self> {
        if cols.ground() != self.cols {
            return Err(Error::domain("column set on the wrong ground set"));
        }
        let picked: Vec<usize> = cols.members().map(|c| c - 1).collect();
        let mut entries = Vec::with_capacity(self.rows * picked.len());
        for r in 0..self.rows {
            for &c in &picked {
                entries.push(self.get(r, c).clone());
            }
        }
        Self::new(self.rows, picked.len(), entries)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<LaurentPoly> {
        if self.rows != self.cols {
            return Err(Error::domain(format!("determinant of a non-square {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a: Vec<Vec<LaurentPoly>> = (0..n).map(|r| (0..n).map(|c| self.get(r, c).clone()).collect()).collect();
        let mut negate = false;
        let mut prev = LaurentPoly::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(LaurentPoly::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss quotients are exact");
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { -&det } else { det })
    }
}
