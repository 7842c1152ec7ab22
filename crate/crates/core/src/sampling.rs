//! Seeded generators of integer-weight flag instances.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::rat;
use crate::subset::{enumerate_subsets, Subset};
use crate::tropical::{check_flag, FlagInstance, PluckerVector};

/// Default weight range for sampled instances.
pub const WEIGHT_RANGE: (i64, i64) = (-3, 3);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// Independent uniform weights (almost never valid).
    Uniform,
    /// Random walk through valid instances, started at zero.
    ValidWalk,
    /// A valid-walk instance with one coordinate re-drawn.
    Perturbed,
}

impl SampleKind {
    /// Deterministic rotation used by sweeps.
    pub fn for_trial(trial: u64) -> Self {
        match trial % 3 {
            0 => SampleKind::Uniform,
            1 => SampleKind::ValidWalk,
            _ => SampleKind::Perturbed,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_dims(n: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims[0] == 0 || dims.windows(2).any(|w| w[0] >= w[1]) || *dims.last().unwrap() >= n {
        return Err(Error::domain(format!("dims {dims:?} must be strictly increasing within 1..={}", n.saturating_sub(1))));
    }
    Ok(())
}

pub fn uniform_flag(n: usize, dims: &[usize], rng: &mut impl Rng) -> Result<FlagInstance> {
    check_dims(n, dims)?;
    let (lo, hi) = WEIGHT_RANGE;
    let layers = dims
        .iter()
        .map(|&d| PluckerVector::from_fn(n, d, |_| rat(rng.random_range(lo..=hi))))
        .collect::<Result<Vec<_>>>()?;
    FlagInstance::new(layers)
}

fn is_valid(layers: &[PluckerVector]) -> bool {
    check_flag(&FlagInstance::new(layers.to_vec()).expect("dims checked"), false).is_valid()
}

/// Random walk over valid instances: each step re-draws one coordinate or
/// shifts one whole layer, and is kept only if every relation still holds.
pub fn valid_walk(n: usize, dims: &[usize], steps: usize, rng: &mut impl Rng) -> Result<FlagInstance> {
    check_dims(n, dims)?;
    let (lo, hi) = WEIGHT_RANGE;
    let subsets: Vec<Vec<Subset>> = dims.iter().map(|&d| enumerate_subsets(n, d)).collect::<Result<_>>()?;
    let mut layers: Vec<PluckerVector> = dims.iter().map(|&d| PluckerVector::zeros(n, d)).collect::<Result<_>>()?;
    for _ in 0..steps {
        let l = rng.random_range(0..layers.len());
        let mut proposal = layers.clone();
        if rng.random_range(0..8) == 0 {
            let c = rat(rng.random_range(-1..=1));
            let shifted = proposal[l].shifted(&c);
            if shifted.weights().iter().any(|w| *w < rat(lo) || *w > rat(hi)) {
                continue;
            }
            proposal[l] = shifted;
        } else {
            let s = subsets[l][rng.random_range(0..subsets[l].len())];
            proposal[l].set(&s, rat(rng.random_range(lo..=hi)));
        }
        if is_valid(&proposal) {
            layers = proposal;
        }
    }
    FlagInstance::new(layers)
}

/// Re-draws one coordinate of `flag` to a different value.
pub fn perturb(flag: &FlagInstance, rng: &mut impl Rng) -> Result<FlagInstance> {
    let (lo, hi) = WEIGHT_RANGE;
    let mut layers = flag.layers().to_vec();
    let l = rng.random_range(0..layers.len());
    let subsets = layers[l].subsets();
    let s = subsets[rng.random_range(0..subsets.len())];
    let old = layers[l].get(&s).clone();
    let mut value = rat(rng.random_range(lo..=hi - 1));
    if value >= old {
        value += rat(1);
    }
    layers[l].set(&s, value);
    FlagInstance::new(layers)
}

/// One instance of the given kind, determined by `seed`.
pub fn sample_flag(n: usize, dims: &[usize], kind: SampleKind, seed: u64) -> Result<FlagInstance> {
    let mut rng = rng(seed);
    let steps = 4 * dims.iter().map(|&d| crate::subset::binomial(n, d)).sum::<usize>();
    match kind {
        SampleKind::Uniform => uniform_flag(n, dims, &mut rng),
        SampleKind::ValidWalk => valid_walk(n, dims, steps, &mut rng),
        SampleKind::Perturbed => {
            let base = valid_walk(n, dims, steps, &mut rng)?;
            perturb(&base, &mut rng)
        }
    }
}
