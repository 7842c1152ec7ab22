//! Realizable instances: tropicalized maximal minors of matrices over
//! Laurent polynomials in `t` (valuation = lowest exponent).

mod laurent;
mod matrix;

pub use laurent::LaurentPoly;
pub use matrix::PolyMatrix;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::ExtRational;
use crate::subset::enumerate_subsets;
use crate::tropical::{FlagInstance, PluckerVector};

pub const DEFAULT_RESAMPLE_BUDGET: usize = 1000;

pub fn valuation(f: &LaurentPoly) -> ExtRational {
    f.valuation()
}

/// Plücker vector of valuations of the maximal minors of a `d x n` matrix.
/// Every minor must be nonzero.
pub fn tropicalize_minors(m: &PolyMatrix) -> Result<PluckerVector> {
    let (d, n) = (m.rows(), m.cols());
    if d > n {
        return Err(Error::domain(format!("{d} rows exceed {n} columns")));
    }
    let mut weights = Vec::new();
    let mut zeros = Vec::new();
    for cols in enumerate_subsets(n, d)? {
        match m.columns(&cols)?.determinant()?.valuation() {
            ExtRational::Finite(v) => weights.push(v),
            ExtRational::Infinity => zeros.push(cols),
        }
    }
    if !zeros.is_empty() {
        return Err(Error::ZeroMinors(zeros));
    }
    PluckerVector::new(n, d, weights)
}

/// A matrix whose first `dims[i]` rows span the `i`-th member of a flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagMatrix {
    n: usize,
    dims: Vec<usize>,
    matrix: PolyMatrix,
    /// Matrices rejected by the generator before this one.
    pub resamples: usize,
}

impl FlagMatrix {
    pub fn new(dims: Vec<usize>, matrix: PolyMatrix) -> Result<Self> {
        let n = matrix.cols();
        check_dims(n, &dims)?;
        if matrix.rows() != *dims.last().unwrap() {
            return Err(Error::domain(format!(
                "matrix has {} rows, largest flag member needs {}",
                matrix.rows(),
                dims.last().unwrap()
            )));
        }
        Ok(FlagMatrix { n, dims, matrix, resamples: 0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    /// Tropicalizes each prefix row block.
    pub fn tropicalize(&self) -> Result<FlagInstance> {
        let layers = self
            .dims
            .iter()
            .map(|&d| tropicalize_minors(&self.matrix.top_rows(d)?))
            .collect::<Result<Vec<_>>>()?;
        FlagInstance::new(layers)
    }
}

fn check_dims(n: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::domain("flag needs at least one dimension"));
    }
    if dims[0] == 0 || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(format!("dims {dims:?} must be positive and strictly increasing")));
    }
    if *dims.last().unwrap() > n {
        return Err(Error::domain(format!("dims {dims:?} exceed n = {n}")));
    }
    Ok(())
}

/// Seeded random flag matrix. Each entry has one or two terms with distinct
/// exponents from `{0, 1, 2}` and nonzero coefficients in
/// `[-coeff_bound, coeff_bound]`. Matrices with a vanishing maximal minor in
/// any prefix block are resampled.
pub fn random_flag_matrix(n: usize, dims: &[usize], seed: u64, coeff_bound: i64) -> Result<FlagMatrix> {
    random_flag_matrix_with_budget(n, dims, seed, coeff_bound, DEFAULT_RESAMPLE_BUDGET)
}

pub fn random_flag_matrix_with_budget(
    n: usize,
    dims: &[usize],
    seed: u64,
    coeff_bound: i64,
    budget: usize,
) -> Result<FlagMatrix> {
    check_dims(n, dims)?;
    if coeff_bound < 1 {
        return Err(Error::domain("coefficient bound must be at least 1"));
    }
    let rows = *dims.last().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        let entries = (0..rows * n).map(|_| random_entry(&mut rng, coeff_bound)).collect();
        let matrix = PolyMatrix::new(rows, n, entries)?;
        let mut candidate = FlagMatrix::new(dims.to_vec(), matrix)?;
        match candidate.tropicalize() {
            Ok(_) => {
                candidate.resamples = attempt;
                return Ok(candidate);
            }
            Err(Error::ZeroMinors(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::Generation {
        attempts: budget,
        reason: format!("every sampled matrix had a vanishing maximal minor (n={n}, dims={dims:?})"),
    })
}

fn random_entry(rng: &mut impl Rng, bound: i64) -> LaurentPoly {
    let terms = rng.random_range(1..=2);
    let mut exponents = vec![0i64, 1, 2];
    let mut out = Vec::new();
    for _ in 0..terms {
        let e = exponents.remove(rng.random_range(0..exponents.len()));
        let mut c = rng.random_range(-bound..bound);
        if c >= 0 {
            c += 1;
        }
        out.push((e, crate::rational::rat(c)));
    }
    LaurentPoly::from_terms(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::subset::Subset;
    use crate::tropical::{check_flag, check_plucker};

    #[test]
    fn minors_of_small_matrices() {
        let m = PolyMatrix::parse_rows(&[vec!["1", "0", "t"], vec!["0", "1", "1"]]).unwrap();
        let p = tropicalize_minors(&m).unwrap();
        assert_eq!(p.weights(), &[rat(0), rat(0), rat(1)]);

        let row = PolyMatrix::parse_rows(&[vec!["1", "1", "1"]]).unwrap();
        assert_eq!(tropicalize_minors(&row).unwrap().weights(), &[rat(0), rat(0), rat(0)]);

        let singular = PolyMatrix::parse_rows(&[vec!["1", "1"], vec!["1", "1"]]).unwrap();
        match tropicalize_minors(&singular) {
            Err(Error::ZeroMinors(sets)) => assert_eq!(sets, vec![Subset::parse("12", 2).unwrap()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_minor_lists_every_column_set() {
        let m = PolyMatrix::parse_rows(&[vec!["1", "2", "0"], vec!["1", "2", "1"]]).unwrap();
        match tropicalize_minors(&m) {
            Err(Error::ZeroMinors(sets)) => assert_eq!(sets, vec![Subset::parse("12", 3).unwrap()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generator_contract() {
        let fm = random_flag_matrix(3, &[1, 2], 7, 3).unwrap();
        let flag = fm.tropicalize().unwrap();
        assert!(check_flag(&flag, true).is_valid());

        for seed in 0..5 {
            let fm = random_flag_matrix(4, &[2, 3], seed, 3).unwrap();
            assert_eq!(fm.dims(), &[2, 3]);
            assert_eq!(fm.tropicalize().unwrap().dims(), vec![2, 3]);
        }
        assert!(random_flag_matrix(3, &[2, 4], 0, 3).is_err());
        assert!(random_flag_matrix(3, &[2, 2], 0, 3).is_err());
        assert_eq!(random_flag_matrix(5, &[2, 3], 11, 2).unwrap(), random_flag_matrix(5, &[2, 3], 11, 2).unwrap());
    }

    #[test]
    fn generator_budget_exhaustion() {
        // d = n forces a single full minor; a tiny budget still succeeds or reports generation failure
        match random_flag_matrix_with_budget(4, &[2, 3], 3, 1, 0) {
            Err(Error::Generation { attempts: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn realizable_layers_are_valid() {
        for seed in 0..100u64 {
            let n = 4 + (seed % 3) as usize;
            let dims: &[usize] = match seed % 3 {
                0 => &[1, 2],
                1 => &[2, 3],
                _ => &[1, 2, 3],
            };
            let flag = random_flag_matrix(n, dims, seed, 3).unwrap().tropicalize().unwrap();
            for layer in flag.layers() {
                assert!(check_plucker(layer).is_empty(), "seed {seed}");
            }
            let report = check_flag(&flag, true);
            assert!(report.is_valid(), "seed {seed}");
            assert_eq!(report.all_pairs_valid(), Some(true), "seed {seed}");
        }
    }
}
