use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CellAnalysis, QuotientWitness};
use crate::error::{Error, Result};
use crate::geometry::{Delta, LatticeVertex, WeightedConfig};
use crate::io::{json_error, InstanceFile, Metadata};
use crate::realization::random_flag_matrix;
use crate::sampling::{sample_flag, SampleKind};
use crate::subset::Subset;
use crate::tropical::{check_flag, FlagInstance};

/// Coefficient bound for realizable trials.
const COEFF_BOUND: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentMode {
    /// Integer weights from a random walk over instances satisfying every relation.
    RandomWeights,
    /// Tropicalized random polynomial flag matrices.
    Realizable,
}

impl FromStr for ExperimentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-weights" => Ok(ExperimentMode::RandomWeights),
            "realizable" => Ok(ExperimentMode::Realizable),
            other => Err(Error::domain(format!("unknown mode {other:?}; expected random-weights or realizable"))),
        }
    }
}

impl fmt::Display for ExperimentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentMode::RandomWeights => "random-weights",
            ExperimentMode::Realizable => "realizable",
        })
    }
}

/// Cells with two matroidal layers, split by (no internal edges, concordant).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QuadrantCounts {
    pub no_internal_concordant: usize,
    pub no_internal_not_concordant: usize,
    pub internal_concordant: usize,
    pub internal_not_concordant: usize,
}

impl QuadrantCounts {
    fn add(&mut self, no_internal: bool, concordant: bool) {
        match (no_internal, concordant) {
            (true, true) => self.no_internal_concordant += 1,
            (true, false) => self.no_internal_not_concordant += 1,
            (false, true) => self.internal_concordant += 1,
            (false, false) => self.internal_not_concordant += 1,
        }
    }

    fn merge(&mut self, other: &QuadrantCounts) {
        self.no_internal_concordant += other.no_internal_concordant;
        self.no_internal_not_concordant += other.no_internal_not_concordant;
        self.internal_concordant += other.internal_concordant;
        self.internal_not_concordant += other.internal_not_concordant;
    }

    pub fn off_diagonal(&self) -> usize {
        self.no_internal_not_concordant + self.internal_concordant
    }

    pub fn total(&self) -> usize {
        self.no_internal_concordant + self.no_internal_not_concordant + self.internal_concordant + self.internal_not_concordant
    }
}

/// Everything needed to rebuild one analyzed cell from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellRecord {
    pub mode: ExperimentMode,
    pub trial: usize,
    pub seed: u64,
    pub instance: InstanceFile,
    pub cell: usize,
    pub vertices: Vec<LatticeVertex>,
    pub bases_p: Vec<Subset>,
    pub bases_q: Vec<Subset>,
    pub internal_edges: Vec<(LatticeVertex, LatticeVertex)>,
    pub is_concordant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_witness: Option<QuotientWitness>,
    pub concordant_via_flats: bool,
}

impl CellRecord {
    pub fn is_off_diagonal(&self) -> bool {
        self.internal_edges.is_empty() != self.is_concordant
    }

    pub fn oracles_disagree(&self) -> bool {
        self.is_concordant != self.concordant_via_flats
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub relations_hold: bool,
    pub cells: usize,
    pub mixed_cells: usize,
    pub quadrants: QuadrantCounts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: ExperimentMode,
    pub cells: usize,
    pub mixed_cells: usize,
    /// Mixed cells where a layer fails basis exchange; excluded from the quadrants.
    pub non_matroidal_cells: usize,
    pub quadrants: QuadrantCounts,
    pub per_trial: Vec<TrialSummary>,
    /// Cells whose two verdicts differ.
    pub counterexamples: Vec<CellRecord>,
    /// Cells where the basis-level and flats-level quotient tests differ.
    pub oracle_disagreements: Vec<CellRecord>,
}

/// The instance used by one trial; `seed` is the trial's own seed.
pub fn trial_config(n: usize, p: usize, q: usize, mode: ExperimentMode, seed: u64) -> Result<FlagInstance> {
    if !(1 <= p && p < q && q < n) {
        return Err(Error::domain(format!("need 1 <= p < q < n, got p={p}, q={q}, n={n}")));
    }
    match mode {
        ExperimentMode::RandomWeights => sample_flag(n, &[p, q], SampleKind::ValidWalk, seed),
        ExperimentMode::Realizable => random_flag_matrix(n, &[p, q], seed, COEFF_BOUND)?.tropicalize(),
    }
}

fn record(
    mode: ExperimentMode,
    trial: usize,
    seed: u64,
    instance: &InstanceFile,
    cell: &CellAnalysis,
) -> Option<CellRecord> {
    if !cell.both_matroidal() {
        return None;
    }
    Some(CellRecord {
        mode,
        trial,
        seed,
        instance: instance.clone(),
        cell: cell.cell,
        vertices: cell.vertices.clone(),
        bases_p: cell.bases_p.clone(),
        bases_q: cell.bases_q.clone(),
        internal_edges: cell.internal_edges.clone(),
        is_concordant: cell.is_concordant?,
        quotient_witness: cell.quotient_witness,
        concordant_via_flats: cell.concordant_via_flats?,
    })
}

fn instance_file(flag: &FlagInstance, mode: ExperimentMode, seed: u64) -> InstanceFile {
    InstanceFile::from_flag(
        flag,
        Some(Metadata {
            seed: Some(seed),
            provenance: Some(mode.to_string()),
        }),
    )
}

struct TrialOutcome {
    summary: TrialSummary,
    non_matroidal: usize,
    records: Vec<CellRecord>,
}

fn run_trial(n: usize, p: usize, q: usize, mode: ExperimentMode, seed: u64, trial: usize, delta: &Delta) -> Result<TrialOutcome> {
    let trial_seed = seed.wrapping_add(trial as u64);
    let flag = trial_config(n, p, q, mode, trial_seed)?;
    let relations_hold = check_flag(&flag, false).is_valid();
    let cfg = WeightedConfig::from_flag(&flag)?;
    let cells = super::analyze_cells_with(&cfg, delta)?;
    let instance = instance_file(&flag, mode, trial_seed);
    let mut quadrants = QuadrantCounts::default();
    let mut records = Vec::new();
    let mut non_matroidal = 0;
    for c in cells.iter().filter(|c| c.is_mixed()) {
        match record(mode, trial, trial_seed, &instance, c) {
            Some(r) => {
                quadrants.add(r.internal_edges.is_empty(), r.is_concordant);
                records.push(r);
            }
            None => non_matroidal += 1,
        }
    }
    Ok(TrialOutcome {
        summary: TrialSummary {
            trial,
            seed: trial_seed,
            relations_hold,
            cells: cells.len(),
            mixed_cells: cells.iter().filter(|c| c.is_mixed()).count(),
            quadrants,
        },
        non_matroidal,
        records,
    })
}

/// Records for every mixed, doubly matroidal cell of one trial.
pub fn trial_records(n: usize, p: usize, q: usize, mode: ExperimentMode, seed: u64, trial: usize) -> Result<Vec<CellRecord>> {
    let delta = Delta::new(p, q, n)?;
    run_trial(n, p, q, mode, seed, trial, &delta)
        .map(|o| o.records)
        .map_err(|e| Error::Trial {
            trial,
            source: Box::new(e),
        })
}

/// Searches for cells where "no internal edges" and "concordant" disagree.
/// Trial `t` uses seed `seed + t`; trials run in parallel, results are
/// assembled in trial order.
pub fn possibility_experiment(
    n: usize,
    p: usize,
    q: usize,
    trials: usize,
    seed: u64,
    mode: ExperimentMode,
) -> Result<ExperimentReport> {
    let delta = Delta::new(p, q, n)?;
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            run_trial(n, p, q, mode, seed, t, &delta).map_err(|e| Error::Trial {
                trial: t,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport {
        n,
        p,
        q,
        trials,
        seed,
        mode,
        cells: 0,
        mixed_cells: 0,
        non_matroidal_cells: 0,
        quadrants: QuadrantCounts::default(),
        per_trial: Vec::with_capacity(trials),
        counterexamples: Vec::new(),
        oracle_disagreements: Vec::new(),
    };
    for o in outcomes {
        report.cells += o.summary.cells;
        report.mixed_cells += o.summary.mixed_cells;
        report.non_matroidal_cells += o.non_matroidal;
        report.quadrants.merge(&o.summary.quadrants);
        report.per_trial.push(o.summary);
        for r in o.records {
            if r.oracles_disagree() {
                report.oracle_disagreements.push(r.clone());
            }
            if r.is_off_diagonal() {
                report.counterexamples.push(r);
            }
        }
    }
    Ok(report)
}

#[derive(Deserialize)]
struct ReplayKey {
    mode: ExperimentMode,
    trial: usize,
    seed: u64,
    instance: InstanceFile,
    cell: usize,
}

/// Rebuilds a serialized [`CellRecord`]: regenerates the instance from the
/// seed, checks it against the stored one, and re-analyzes the cell.
/// Compare [`CellRecord::to_json`] of the result with the input.
pub fn replay_record(json: &str) -> Result<CellRecord> {
    let key: ReplayKey = serde_json::from_str(json).map_err(json_error)?;
    let stored = key.instance.to_flag()?;
    let dims = stored.dims();
    let [p, q] = dims[..] else {
        return Err(Error::domain("record instance must have two layers"));
    };
    let regenerated = trial_config(stored.n(), p, q, key.mode, key.seed)?;
    if regenerated != stored {
        return Err(Error::domain(format!(
            "instance in the record differs from the one generated by seed {}",
            key.seed
        )));
    }
    let cfg = WeightedConfig::from_flag(&stored)?;
    let cells = super::analyze_cells(&cfg)?;
    let cell = cells
        .get(key.cell)
        .ok_or_else(|| Error::domain(format!("cell {} out of range ({} cells)", key.cell, cells.len())))?;
    record(key.mode, key.trial, key.seed, &instance_file(&stored, key.mode, key.seed), cell)
        .ok_or_else(|| Error::domain(format!("cell {} is not a mixed matroidal cell", key.cell)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_give_an_empty_report() {
        let r = possibility_experiment(4, 2, 3, 0, 0, ExperimentMode::RandomWeights).unwrap();
        assert_eq!((r.cells, r.per_trial.len(), r.counterexamples.len()), (0, 0, 0));
    }

    #[test]
    fn small_runs_are_deterministic_and_consistent() {
        for mode in [ExperimentMode::RandomWeights, ExperimentMode::Realizable] {
            let a = possibility_experiment(4, 2, 3, 6, 11, mode).unwrap();
            let b = possibility_experiment(4, 2, 3, 6, 11, mode).unwrap();
            assert_eq!(a, b);
            assert!(a.per_trial.iter().all(|t| t.relations_hold));
            assert_eq!(a.quadrants.total() + a.non_matroidal_cells, a.mixed_cells);
            assert_eq!(a.per_trial[3].seed, 14);
        }
    }

    #[test]
    fn records_replay_identically() {
        let recs = trial_records(4, 1, 2, ExperimentMode::Realizable, 5, 2).unwrap();
        assert!(!recs.is_empty());
        for r in &recs {
            assert_eq!(replay_record(&r.to_json()).unwrap().to_json(), r.to_json());
        }
        let mut tampered: serde_json::Value = serde_json::from_str(&recs[0].to_json()).unwrap();
        tampered["seed"] = serde_json::json!(999);
        assert!(replay_record(&tampered.to_string()).is_err());
    }

    #[test]
    fn mode_names() {
        for m in [ExperimentMode::RandomWeights, ExperimentMode::Realizable] {
            assert_eq!(m.to_string().parse::<ExperimentMode>().unwrap(), m);
        }
        assert!("nope".parse::<ExperimentMode>().is_err());
    }
}
