use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use flagdress::builtin::{builtin, BUILTIN_NAMES};
use flagdress::geometry::{skeleton_equal, subdivision_cells, WeightedConfig};
use flagdress::io::{InstanceFile, MatrixFile, Metadata};
use flagdress::matroid::{analyze_cells, possibility_experiment, replay_record, trial_config, ExperimentMode};
use flagdress::sampling::{rng, uniform_flag};
use flagdress::tropical::{check_flag, FlagInstance};

use crate::{Cli, Command, Status, DEFAULT_MAX_N};

struct Input {
    path: String,
    text: String,
    sha256: String,
}

fn read_input(cli: &Cli) -> Result<Input> {
    let path = cli.input.as_ref().ok_or_else(|| anyhow!("this command needs --input"))?;
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok(Input {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
        text,
    })
}

fn guard_size(cli: &Cli, n: usize) -> Result<()> {
    if n > DEFAULT_MAX_N && !cli.allow_large {
        bail!("n = {n} exceeds {DEFAULT_MAX_N}; pass --allow-large to proceed");
    }
    Ok(())
}

fn read_instance(cli: &Cli) -> Result<(Input, InstanceFile, FlagInstance)> {
    let input = read_input(cli)?;
    let file = InstanceFile::parse(&input.text).with_context(|| format!("parsing {}", input.path))?;
    guard_size(cli, file.n)?;
    let flag = file.to_flag().with_context(|| format!("validating {}", input.path))?;
    Ok((input, file, flag))
}

#[derive(Serialize)]
struct InputInfo<'a> {
    path: &'a str,
    sha256: &'a str,
}

/// Wraps a command result in the common report envelope.
fn report<T: Serialize>(
    command: &str,
    input: Option<&Input>,
    instance: Option<&InstanceFile>,
    status: Status,
    result: T,
    started: Instant,
) -> Result<String> {
    let doc = json!({
        "command": command,
        "input": input.map(|i| InputInfo { path: &i.path, sha256: &i.sha256 }),
        "instance": instance,
        "verdict": match status { Status::Pass => "pass", Status::Fail => "fail" },
        "result": result,
        "timing_ms": started.elapsed().as_secs_f64() * 1e3,
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn mode(cli: &Cli) -> Result<ExperimentMode> {
    cli.mode.parse().map_err(|e| anyhow!("{e}"))
}

fn cmd_check(cli: &Cli, started: Instant) -> Result<(String, Status)> {
    let (input, file, flag) = read_instance(cli)?;
    let r = check_flag(&flag, true);
    let status = if r.is_valid() { Status::Pass } else { Status::Fail };
    let result = json!({
        "valid": r.is_valid(),
        "all_pairs_valid": r.all_pairs_valid(),
        "violations": r.violation_count(),
        "report": r,
    });
    Ok((report("check", Some(&input), Some(&file), status, result, started)?, status))
}

fn two_layer_config(flag: &FlagInstance) -> Result<WeightedConfig> {
    if flag.layers().len() != 2 {
        bail!("expected a two-layer instance, got {} layers", flag.layers().len());
    }
    Ok(WeightedConfig::from_flag(flag)?)
}

fn cmd_skeleton(cli: &Cli, started: Instant) -> Result<(String, Status)> {
    let (input, file, flag) = read_instance(cli)?;
    let cfg = two_layer_config(&flag)?;
    let cmp = skeleton_equal(&cfg)?;
    let relations = cfg.relations_hold();
    let agreement = if relations == cmp.equal { "consistent" } else { "inconsistent" };
    let status = if cmp.equal && relations { Status::Pass } else { Status::Fail };
    let result = json!({
        "equal": cmp.equal,
        "new_edges": cmp.new_edges,
        "relations_hold": relations,
        "agreement": agreement,
    });
    Ok((report("skeleton", Some(&input), Some(&file), status, result, started)?, status))
}

fn cmd_cells(cli: &Cli, started: Instant) -> Result<(String, Status)> {
    let (input, file, flag) = read_instance(cli)?;
    let cfg = WeightedConfig::from_flag(&flag)?;
    let sub = subdivision_cells(&cfg)?;
    let cells: Vec<Value> = sub
        .cells
        .iter()
        .map(|c| {
            json!({
                "vertices": c.vertices.iter().map(|&i| cfg.vertices()[i]).collect::<Vec<_>>(),
                "functional": c.functional,
            })
        })
        .collect();
    let result = json!({ "cell_count": cells.len(), "cells": cells });
    Ok((report("cells", Some(&input), Some(&file), Status::Pass, result, started)?, Status::Pass))
}

fn cmd_matroids(cli: &Cli, started: Instant) -> Result<(String, Status)> {
    let (input, file, flag) = read_instance(cli)?;
    let cfg = WeightedConfig::from_flag(&flag)?;
    let cells = analyze_cells(&cfg)?;
    let matroidal = cells
        .iter()
        .all(|c| c.is_matroidal_p != Some(false) && c.is_matroidal_q != Some(false));
    let concordant = cells.iter().all(|c| c.is_concordant != Some(false));
    let no_internal = cells.iter().all(|c| c.internal_edges.is_empty());
    let status = if matroidal && concordant { Status::Pass } else { Status::Fail };
    let result = json!({
        "all_matroidal": matroidal,
        "all_concordant": concordant,
        "no_internal_edges": no_internal,
        "cells": cells,
    });
    Ok((report("matroids", Some(&input), Some(&file), status, result, started)?, status))
}

fn cmd_realize(cli: &Cli, started: Instant) -> Result<(String, Status)> {
    let input = read_input(cli)?;
    let file = MatrixFile::parse(&input.text).with_context(|| format!("parsing {}", input.path))?;
    guard_size(cli, file.n)?;
    let matrix = file.to_flag_matrix().with_context(|| format!("validating {}", input.path))?;
    match matrix.tropicalize() {
        Ok(flag) => {
            let instance = InstanceFile::from_flag(
                &flag,
                Some(Metadata {
                    seed: None,
                    provenance: Some(format!("realize:{}", input.sha256)),
                }),
            );
            Ok((instance.to_json(), Status::Pass))
        }
        Err(flagdress::Error::ZeroMinors(zeros)) => {
            let result = json!({ "zero_minors": zeros });
            Ok((report("realize", Some(&input), None, Status::Fail, result, started)?, Status::Fail))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_gen(cli: &Cli, n: usize, p: usize, q: usize) -> Result<(String, Status)> {
    guard_size(cli, n)?;
    let mode = mode(cli)?;
    let flag = match mode {
        ExperimentMode::RandomWeights => uniform_flag(n, &[p, q], &mut rng(cli.seed))?,
        ExperimentMode::Realizable => trial_config(n, p, q, mode, cli.seed)?,
    };
    let instance = InstanceFile::from_flag(
        &flag,
        Some(Metadata {
            seed: Some(cli.seed),
            provenance: Some(format!("gen:{mode}")),
        }),
    );
    Ok((instance.to_json(), Status::Pass))
}

fn cmd_experiment(cli: &Cli, n: usize, p: usize, q: usize, started: Instant) -> Result<(String, Status)> {
    if cli.input.is_some() {
        let input = read_input(cli)?;
        let stored: Value = serde_json::from_str(&input.text).with_context(|| format!("parsing {}", input.path))?;
        let replayed = replay_record(&input.text).with_context(|| format!("replaying {}", input.path))?;
        let identical = serde_json::to_value(&replayed)? == stored;
        let status = if identical { Status::Pass } else { Status::Fail };
        let result = json!({ "identical": identical, "replayed": replayed });
        return Ok((report("experiment-replay", Some(&input), None, status, result, started)?, status));
    }
    guard_size(cli, n)?;
    let r = possibility_experiment(n, p, q, cli.trials, cli.seed, mode(cli)?)?;
    Ok((report("experiment", None, None, Status::Pass, r, started)?, Status::Pass))
}

fn cmd_example(name: &str) -> Result<(String, Status)> {
    let flag = builtin(name)
        .ok_or_else(|| anyhow!("unknown example {name:?}; available: {}", BUILTIN_NAMES.join(", ")))?;
    let instance = InstanceFile::from_flag(
        &flag,
        Some(Metadata {
            seed: None,
            provenance: Some(format!("example:{name}")),
        }),
    );
    Ok((instance.to_json(), Status::Pass))
}

/// Runs the selected command; returns the text to emit and the verdict.
pub fn run(cli: &Cli) -> Result<(String, Status)> {
    let started = Instant::now();
    match &cli.command {
        Command::Check => cmd_check(cli, started),
        Command::Skeleton => cmd_skeleton(cli, started),
        Command::Cells => cmd_cells(cli, started),
        Command::Matroids => cmd_matroids(cli, started),
        Command::Realize => cmd_realize(cli, started),
        Command::Gen { n, p, q } => cmd_gen(cli, *n, *p, *q),
        Command::Experiment { n, p, q } => cmd_experiment(cli, *n, *p, *q, started),
        Command::Example { name } => cmd_example(name),
    }
}
