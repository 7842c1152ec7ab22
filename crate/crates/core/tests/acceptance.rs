//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails. All comparisons are exact; the only
//! tolerances are the wall-clock limits below.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use flagdress::builtin::builtin;
use flagdress::geometry::{
    edges_of_polytope, face_st, p_m_config, pn_edge_profile, pn_transform, point_subdivision_edges,
    skeleton_equal_with, subdivision_cells, subdivision_edges, Delta, LatticeVertex, WeightedConfig,
};
use flagdress::matroid::{
    analyze_cells_with, enumerate_matroids, internal_edges, is_quotient, is_quotient_via_flats, possibility_experiment,
    replay_record, trial_records, ExperimentMode, Matroid,
};
use flagdress::rational::rat;
use flagdress::realization::random_flag_matrix;
use flagdress::sampling::{rng, sample_flag, SampleKind};
use flagdress::tropical::{check_incidence, check_plucker, cocircuit, dualize, point_in_space, FlagInstance};
use flagdress::{enumerate_subsets, Rational, Subset};
use rand::Rng;

const FAST_LIMIT: Duration = Duration::from_secs(1);
const SWEEP_LIMIT: Duration = Duration::from_secs(600);
const SWEEP_TRIPLES: [(usize, usize, usize); 5] = [(1, 2, 3), (1, 2, 4), (2, 3, 4), (1, 3, 4), (2, 3, 5)];
const SWEEP_INSTANCES: u64 = 200;
const SINGLE_LAYER_INSTANCES: u64 = 200;
const REALIZABLE_FLAGS: u64 = 100;
const DUALITY_VECTORS: u64 = 500;
const RANDOM_QUOTIENT_PAIRS: usize = 500;
const PROFILE_SAMPLES: usize = 200;
const EXPERIMENT_TRIALS: usize = 50;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn sub(s: &str, n: usize) -> Subset {
    Subset::parse(s, n).unwrap()
}

fn seconds(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

/// Instances whose subdivisions are re-checked for self-consistency.
#[derive(Default)]
struct Pool {
    configs: Vec<WeightedConfig>,
}

fn square_triangle() -> Vec<Subset> {
    ["12", "13", "24", "34", "123", "124", "134"].iter().map(|s| sub(s, 4)).collect()
}

fn c1_concordance() -> Outcome {
    let start = Instant::now();
    let low = Matroid::parse(4, &["12", "13", "24", "34"]).unwrap();
    let high = Matroid::parse(4, &["123", "124", "134"]).unwrap();
    let base = is_quotient(&low, &high).unwrap();
    let w = base.witness.map(|w| (w.b.to_string(), w.i));
    let plus23 = is_quotient(&low.with_basis(sub("23", 4)).unwrap(), &high).unwrap().is_quotient;
    let plus234 = is_quotient(&low, &high.with_basis(sub("234", 4)).unwrap()).unwrap().is_quotient;
    let elapsed = start.elapsed();
    let pass = !base.is_quotient && w == Some(("123".into(), 4)) && plus23 && plus234 && elapsed < FAST_LIMIT;
    outcome(
        pass,
        format!(
            "quotient={} witness={:?}; +23 -> {plus23}; +234 -> {plus234} ({})",
            base.is_quotient,
            w,
            seconds(elapsed)
        ),
    )
}

fn c2_geometry() -> Outcome {
    let start = Instant::now();
    let v = square_triangle();
    let pts: Vec<Vec<Rational>> = v.iter().map(|s| LatticeVertex::new(*s).coordinates()).collect();
    let edges: BTreeSet<(String, String)> = edges_of_polytope(&pts)
        .unwrap()
        .into_iter()
        .map(|(i, j)| (v[i].to_string(), v[j].to_string()))
        .collect();
    let drawn: BTreeSet<(String, String)> = [
        ("12", "13"), ("13", "34"), ("24", "34"), ("12", "24"), ("123", "124"), ("124", "134"), ("123", "134"),
        ("12", "123"), ("13", "123"), ("13", "134"), ("34", "134"), ("24", "124"), ("12", "124"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    let internal: Vec<String> = internal_edges(&v, 2, 3, 4)
        .unwrap()
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    let extra: Vec<String> = edges.difference(&drawn).map(|(a, b)| format!("{a}-{b}")).collect();
    let missing = drawn.difference(&edges).count();
    let elapsed = start.elapsed();
    let pass = internal.is_empty() && edges == drawn && elapsed < FAST_LIMIT;
    outcome(
        pass,
        format!(
            "{} edges ({} of the 13 expected present, extra {:?}); internal edges {:?} ({})",
            edges.len(),
            13 - missing,
            extra,
            internal,
            seconds(elapsed)
        ),
    )
}

fn c3_relations() -> Outcome {
    let pair = |name: &str| {
        let f = builtin(name).unwrap();
        let l = f.layers();
        (check_plucker(&l[0]).len() + check_plucker(&l[1]).len(), check_incidence(&l[0], &l[1]).unwrap())
    };
    let (bad_pl, bad_inc) = pair("paper-ex1-invalid");
    let (x_pl, x_inc) = pair("paper-ex1-x23");
    let (y_pl, y_inc) = pair("paper-ex1-y234");
    let witnesses: Vec<String> = bad_inc
        .iter()
        .map(|v| format!("S={{{}}},T={{{}}}", v.s, v.t.map(|t| t.to_string()).unwrap_or_default()))
        .collect();
    let pass = !bad_inc.is_empty() && x_pl + x_inc.len() + y_pl + y_inc.len() == 0;
    outcome(
        pass,
        format!(
            "invalid: {} incidence violations {:?} ({} Plücker); repairs: {} and {} violations",
            bad_inc.len(),
            witnesses,
            bad_pl,
            x_pl + x_inc.len(),
            y_pl + y_inc.len()
        ),
    )
}

fn sweep_seed(p: usize, q: usize, n: usize, trial: u64) -> u64 {
    ((p * 100 + q * 10 + n) as u64) * 10_000 + trial
}

fn c4_skeleton_sweep(pool: &mut Pool) -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut all_agree = true;
    for &(p, q, n) in &SWEEP_TRIPLES {
        let delta = Delta::new(p, q, n).unwrap();
        let (mut agree, mut valid) = (0, 0);
        for t in 0..SWEEP_INSTANCES {
            let flag = sample_flag(n, &[p, q], SampleKind::for_trial(t), sweep_seed(p, q, n, t)).unwrap();
            let cfg = WeightedConfig::from_flag(&flag).unwrap();
            let holds = cfg.relations_hold();
            let equal = skeleton_equal_with(&cfg, &delta).unwrap().equal;
            valid += holds as usize;
            if holds == equal {
                agree += 1;
            } else {
                eprintln!("  disagreement at (p,q,n)=({p},{q},{n}) trial {t}");
            }
            pool.configs.push(cfg);
        }
        all_agree &= agree == SWEEP_INSTANCES as usize;
        parts.push(format!("({p},{q},{n}) {agree}/{SWEEP_INSTANCES} [{valid} valid]"));
    }
    let elapsed = start.elapsed();
    outcome(all_agree && elapsed < SWEEP_LIMIT, format!("{} ({})", parts.join(", "), seconds(elapsed)))
}

fn c5_single_layer(pool: &mut Pool) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [4usize, 5] {
        let delta = Delta::single(2, n).unwrap();
        let (mut agree, mut valid) = (0, 0);
        for t in 0..SINGLE_LAYER_INSTANCES {
            let flag = sample_flag(n, &[2], SampleKind::for_trial(t), 500_000 + 1_000 * n as u64 + t).unwrap();
            let cfg = WeightedConfig::from_flag(&flag).unwrap();
            let holds = check_plucker(&flag.layers()[0]).is_empty();
            valid += holds as usize;
            agree += (holds == skeleton_equal_with(&cfg, &delta).unwrap().equal) as usize;
            pool.configs.push(cfg);
        }
        ok &= agree == SINGLE_LAYER_INSTANCES as usize;
        parts.push(format!("n={n} {agree}/{SINGLE_LAYER_INSTANCES} [{valid} valid]"));
    }
    outcome(ok, parts.join(", "))
}

/// Seeded realizable flags: dims rotate through (1,2), (2,3), (1,3), n through 4, 5, 6.
fn realizable_flags() -> Vec<FlagInstance> {
    (0..REALIZABLE_FLAGS)
        .map(|t| {
            let dims = [[1, 2], [2, 3], [1, 3]][(t % 3) as usize];
            let n = 4 + ((t / 3) % 3) as usize;
            random_flag_matrix(n, &dims, 700_000 + t, 3).unwrap().tropicalize().unwrap()
        })
        .collect()
}

fn c6_realizable_concordance(flags: &[FlagInstance], pool: &mut Pool) -> Outcome {
    let start = Instant::now();
    let (mut mixed, mut concordant, mut flags_ok) = (0, 0, 0);
    for flag in flags {
        let cfg = WeightedConfig::from_flag(flag).unwrap();
        let cells = analyze_cells_with(&cfg, &cfg.delta().unwrap()).unwrap();
        let mut all = true;
        for c in cells.iter().filter(|c| c.is_mixed()) {
            mixed += 1;
            if c.is_concordant == Some(true) {
                concordant += 1;
            } else {
                all = false;
            }
        }
        flags_ok += all as usize;
        pool.configs.push(cfg);
    }
    outcome(
        flags_ok == flags.len() && concordant == mixed,
        format!(
            "{flags_ok}/{} flags, {concordant}/{mixed} mixed cells concordant ({})",
            flags.len(),
            seconds(start.elapsed())
        ),
    )
}

fn c7_membership(flags: &[FlagInstance]) -> Outcome {
    let (mut incidence_ok, mut points, mut inside) = (0, 0, 0);
    for flag in flags {
        let (x, y) = (&flag.layers()[0], &flag.layers()[1]);
        incidence_ok += check_incidence(x, y).unwrap().is_empty() as usize;
        for k in enumerate_subsets(x.n(), x.d() - 1).unwrap() {
            points += 1;
            inside += point_in_space(y, &cocircuit(x, &k).unwrap()).unwrap() as usize;
        }
    }
    outcome(
        incidence_ok == flags.len() && inside == points,
        format!("incidence {incidence_ok}/{}; cocircuits inside larger space {inside}/{points}", flags.len()),
    )
}

fn c8_duality() -> Outcome {
    let shapes = [(4usize, 2usize), (5, 2), (5, 3), (6, 2), (6, 3), (6, 4), (5, 1)];
    let (mut involution, mut preserved, mut valid) = (0, 0, 0);
    for t in 0..DUALITY_VECTORS {
        let (n, d) = shapes[(t as usize) % shapes.len()];
        let flag = sample_flag(n, &[d], SampleKind::for_trial(t / shapes.len() as u64), 800_000 + t).unwrap();
        let p = &flag.layers()[0];
        let dual = dualize(p);
        involution += (dualize(&dual) == *p) as usize;
        let holds = check_plucker(p).is_empty();
        valid += holds as usize;
        preserved += (holds == check_plucker(&dual).is_empty()) as usize;
    }
    let total = DUALITY_VECTORS as usize;
    outcome(
        involution == total && preserved == total && valid > 0 && valid < total,
        format!("involution {involution}/{total}; validity preserved {preserved}/{total} [{valid} valid, {} invalid]", total - valid),
    )
}

fn c9_quotient_oracles() -> Outcome {
    let mut disagreements = Vec::new();
    let (lows, highs) = (enumerate_matroids(4, 2, false).unwrap(), enumerate_matroids(4, 3, false).unwrap());
    let mut check = |a: &Matroid, b: &Matroid| {
        let basis = is_quotient(a, b).unwrap();
        let flats = is_quotient_via_flats(a, b).unwrap();
        if basis.is_quotient != flats {
            disagreements.push(format!("{:?} vs {:?}: bases {:?}, flats {flats}", a.bases(), b.bases(), basis.witness));
        }
        basis.is_quotient
    };
    let mut quotients4 = 0;
    for a in &lows {
        for b in &highs {
            quotients4 += check(a, b) as usize;
        }
    }
    let (lows5, highs5) = (enumerate_matroids(5, 2, false).unwrap(), enumerate_matroids(5, 3, false).unwrap());
    let mut r = rng(900_000);
    let mut quotients5 = 0;
    for _ in 0..RANDOM_QUOTIENT_PAIRS {
        let a = &lows5[r.random_range(0..lows5.len())];
        let b = &highs5[r.random_range(0..highs5.len())];
        quotients5 += check(a, b) as usize;
    }
    for d in &disagreements {
        eprintln!("  {d}");
    }
    outcome(
        disagreements.is_empty(),
        format!(
            "[4]: {} pairs ({} x {} matroids, {quotients4} quotients); [5]: {RANDOM_QUOTIENT_PAIRS} random pairs ({quotients5} quotients); {} disagreements",
            lows.len() * highs.len(),
            lows.len(),
            highs.len(),
            disagreements.len()
        ),
    )
}

fn c10_self_consistency(pool: &Pool) -> Outcome {
    let start = Instant::now();
    let (mut edges_ok, mut covered, mut faces_ok) = (0, 0, 0);
    for cfg in &pool.configs {
        let pc = cfg.point_config();
        let sub = subdivision_cells(cfg).unwrap();
        edges_ok += (subdivision_edges(cfg).unwrap() == sub.cell_edges(&pc).unwrap()) as usize;
        covered += sub.covers(pc.len()) as usize;
        faces_ok += sub.non_face_intersection(&pc).unwrap().is_none() as usize;
    }
    let total = pool.configs.len();
    // every (S, T) with |S| = p-1, |T| = q+1 for 1 <= p < q < n <= 5
    let (mut pairs, mut certified, mut faces, mut contained, mut contained_ok, mut bijections) = (0, 0, 0, 0, 0, 0);
    for n in 3..=5 {
        for p in 1..n {
            for q in p + 1..n {
                for s in enumerate_subsets(n, p - 1).unwrap() {
                    for t in enumerate_subsets(n, q + 1).unwrap() {
                        let f = face_st(&s, &t, p, q, n).unwrap();
                        let pn = pn_transform(&s, &t).unwrap();
                        pairs += 1;
                        certified += f.certified as usize;
                        faces += f.is_face as usize;
                        bijections += (pn.verified && pn.isomorphic) as usize;
                        if s.is_subset(&t) {
                            contained += 1;
                            contained_ok += f.certified as usize;
                        }
                    }
                }
            }
        }
    }
    let pass = edges_ok == total && covered == total && faces_ok == total && certified == pairs && bijections == pairs;
    outcome(
        pass,
        format!(
            "{total} instances: edges=cell edges {edges_ok}, covered {covered}, face intersections {faces_ok}; \
             face certificates {certified}/{pairs} (S⊆T {contained_ok}/{contained}, S⊄T {}/{}; face LP {faces}/{pairs}); \
             cross-polytope bijections {bijections}/{pairs} ({})",
            certified - contained_ok,
            pairs - contained,
            seconds(start.elapsed())
        ),
    )
}

fn c11_profile() -> Outcome {
    let mut r = rng(1_100_000);
    let mut parts = Vec::new();
    let mut ok = true;
    for m in 2..=4usize {
        let mut agree = 0;
        let mut nonempty = 0;
        for _ in 0..PROFILE_SAMPLES {
            let plus: Vec<Rational> = (0..m).map(|_| rat(r.random_range(-3..=3))).collect();
            let minus: Vec<Rational> = (0..m).map(|_| rat(r.random_range(-3..=3))).collect();
            let profile = pn_edge_profile(&plus, &minus).unwrap();
            let lp: BTreeSet<usize> = point_subdivision_edges(&p_m_config(&plus, &minus).unwrap())
                .unwrap()
                .into_iter()
                .filter(|&(i, j)| j == i + m)
                .map(|(i, _)| i + 1)
                .collect();
            nonempty += !profile.is_empty() as usize;
            agree += (profile == lp) as usize;
        }
        ok &= agree == PROFILE_SAMPLES;
        parts.push(format!("m={m} {agree}/{PROFILE_SAMPLES} [{nonempty} with an antipodal edge]"));
    }
    outcome(ok, parts.join(", "))
}

fn c12_experiment() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [4usize, 5] {
        for mode in [ExperimentMode::RandomWeights, ExperimentMode::Realizable] {
            let report = match possibility_experiment(n, 2, 3, EXPERIMENT_TRIALS, 0, mode) {
                Ok(r) => r,
                Err(e) => {
                    ok = false;
                    parts.push(format!("({n},2,3,{mode}) error: {e}"));
                    continue;
                }
            };
            let json = serde_json::to_string(&report).unwrap();
            let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
            let well_formed = parsed["per_trial"].as_array().map(|a| a.len()) == Some(EXPERIMENT_TRIALS)
                && report.quadrants.total() + report.non_matroidal_cells == report.mixed_cells;
            let mut replayed = 0;
            let mut replay_ok = true;
            let mut replay = |rec_json: String| {
                replayed += 1;
                replay_ok &= replay_record(&rec_json).ok().map(|r| r.to_json()) == Some(rec_json);
            };
            for rec in &report.counterexamples {
                replay(rec.to_json());
            }
            // also exercise replay on ordinary records
            for t in 0..3 {
                if let Some(rec) = trial_records(n, 2, 3, mode, 0, t).unwrap().first() {
                    replay(rec.to_json());
                }
            }
            ok &= well_formed && replay_ok;
            let q = report.quadrants;
            parts.push(format!(
                "({n},2,3,{mode}) cells {} mixed {} quadrants [{} {} {} {}] counterexamples {} replayed {replayed}{}",
                report.cells,
                report.mixed_cells,
                q.no_internal_concordant,
                q.no_internal_not_concordant,
                q.internal_concordant,
                q.internal_not_concordant,
                report.counterexamples.len(),
                if replay_ok { "" } else { " REPLAY MISMATCH" }
            ));
        }
    }
    outcome(ok, format!("{} ({})", parts.join("; "), seconds(start.elapsed())))
}

fn main() -> ExitCode {
    let mut pool = Pool::default();
    let flags = realizable_flags();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("square/triangle concordance", c1_concordance()));
    results.push(("square/triangle edges", c2_geometry()));
    results.push(("built-in instance relations", c3_relations()));
    results.push(("two-layer skeleton <=> relations sweep", c4_skeleton_sweep(&mut pool)));
    results.push(("single-layer skeleton <=> relations", c5_single_layer(&mut pool)));
    results.push(("realizable cells are concordant", c6_realizable_concordance(&flags, &mut pool)));
    results.push(("realizable incidence and cocircuit membership", c7_membership(&flags)));
    results.push(("duality", c8_duality()));
    results.push(("quotient oracle equivalence", c9_quotient_oracles()));
    results.push(("geometry self-consistency", c10_self_consistency(&pool)));
    results.push(("cross-polytope edge profile", c11_profile()));
    results.push(("internal-edge / concordance search", c12_experiment()));
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("[{}] {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += !o.pass as usize;
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
