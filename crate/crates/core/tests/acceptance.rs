//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed under a plain
//! `cargo test`. Each criterion checks the library against an oracle written
//! independently in this file (or a frozen value derived from one).

use std::collections::VecDeque;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ptl_core::{
    builtin_env, ceiling_gap, detect_trap_confinement, detect_traps_strict, enumerate_trajectories,
    escape_distance, load_env, pareto_front, rollout, run_batch, structural_constraint, tedi,
    tedi_for_trap, ActionSpec, Agent, BuiltinEnv, CostRule, CostVector, EnvironmentSpec,
    PolicySpec, Rational, Scalarization, TaxonomyLabel, TediWeights, Trajectory, TrajectorySpace,
    TrapMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// P(final state = 5) for the trajectory-dominant policy on A4Stochastic,
/// T = 30, from an exact Markov-chain oracle of the reference listing.
const TRAJECTORY_P5: f64 = 0.8726714592090099;
const RUNS_2: usize = 1000;
/// Base seed of the criterion 2 batch.
const SEED_2: u64 = 20_240_601;
/// Per-criterion tolerance for TEDI components once the oracle is confirmed.
const TEDI_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 pointwise confinement", criterion_1),
        ("2 trajectory-dominant escape", criterion_2),
        ("3 dominance partial order", criterion_3),
        ("4 front non-empty and equals brute force", criterion_4),
        ("5 strict trap on the two-basin fixture", criterion_5),
        ("6 ceiling gap", criterion_6),
        ("7 taxonomy assignments", criterion_7),
        ("8 TEDI range and monotonicity", criterion_8),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}

fn criterion_1() -> Outcome {
    let env: EnvironmentSpec = builtin_env(BuiltinEnv::A4Stochastic);
    let start = Instant::now();
    for seed in [0, 1, 0xDEAD_BEEF, u64::MAX] {
        let stats =
            run_batch(&env, &PolicySpec::pointwise(), 100, seed).map_err(|e| e.to_string())?;
        for (i, run) in stats.runs.iter().enumerate() {
            check(run.trajectory.states().iter().all(|&x| x == 0), || {
                format!("seed {seed} run {i} left state 0")
            })?;
            let total = run.total();
            check(total.as_slice() == [3.0, 30.0], || {
                format!("seed {seed} run {i}: J = {:?}", total.as_slice())
            })?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), "4 x 100 runs")?;
    Ok(format!(
        "4 seeds x 100 runs all at state 0 with J = (3, 30) exactly ({elapsed:.2?})"
    ))
}

/// Final-state distribution of the reference listing's trajectory policy on
/// the stochastic toy model: restructure w.p. 0.1 (uniform jump above, stay at
/// the top), else explore below state 3, else exploit (stay).
fn listing_final_distribution(horizon: usize) -> [f64; 6] {
    let mut dist = [0.0; 6];
    dist[0] = 1.0;
    for _ in 0..horizon {
        let mut next = [0.0; 6];
        for (x, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            if x < 5 {
                let share = 0.1 * p / (5 - x) as f64;
                for slot in &mut next[x + 1..] {
                    *slot += share;
                }
            } else {
                next[5] += 0.1 * p;
            }
            let rest = 0.9 * p;
            if x < 3 {
                next[x + 1] += rest;
            } else {
                next[x] += rest;
            }
        }
        dist = next;
    }
    dist
}

fn criterion_2() -> Outcome {
    let oracle = listing_final_distribution(30);
    check((oracle[5] - TRAJECTORY_P5).abs() < 1e-12, || {
        format!("oracle drifted: {} vs frozen {TRAJECTORY_P5}", oracle[5])
    })?;
    let sigma = (TRAJECTORY_P5 * (1.0 - TRAJECTORY_P5) / RUNS_2 as f64).sqrt();
    let threshold = TRAJECTORY_P5 - 2.0 * sigma;

    let env: EnvironmentSpec = builtin_env(BuiltinEnv::A4Stochastic);
    let start = Instant::now();
    let td = run_batch(&env, &PolicySpec::trajectory_dominant(), RUNS_2, SEED_2)
        .map_err(|e| e.to_string())?;
    let pw =
        run_batch(&env, &PolicySpec::pointwise(), RUNS_2, SEED_2).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5), "two 1000-run batches")?;

    let freq5 = td.final_state_histogram[5] as f64 / RUNS_2 as f64;
    check(freq5 >= threshold, || {
        format!("P(final=5) = {freq5} below oracle - 2 sigma = {threshold}")
    })?;
    let (td_cdf, pw_cdf) = (td.final_state_cdf(), pw.final_state_cdf());
    for x in 0..6 {
        check(td_cdf[x] <= pw_cdf[x], || {
            format!(
                "CDF at state {x}: trajectory {} > pointwise {}",
                td_cdf[x], pw_cdf[x]
            )
        })?;
    }
    check(td_cdf[0] < pw_cdf[0], || {
        "no strict dominance at state 0".into()
    })?;
    Ok(format!(
        "P(final=5) = {freq5} >= {threshold:.6} (oracle {TRAJECTORY_P5:.6} - 2 sigma); CDF dominates pointwise at all 6 states ({elapsed:.2?})"
    ))
}

fn strictly_better(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut comparable = 0usize;
    for i in 0..10_000 {
        let m = rng.random_range(1..=4);
        let mut draw = || -> CostVector {
            CostVector::new(
                (0..m)
                    .map(|_| rng.random_range(0..4) as f64 * 0.5)
                    .collect(),
            )
        };
        let (a, b, c) = (draw(), draw(), draw());
        let d = |x: &CostVector, y: &CostVector| ptl_core::dominates(x, y).unwrap();
        check(!d(&a, &a), || {
            format!("triple {i}: irreflexivity fails for {a:?}")
        })?;
        check(!(d(&a, &b) && d(&b, &a)), || {
            format!("triple {i}: asymmetry fails")
        })?;
        check(!(d(&a, &b) && d(&b, &c)) || d(&a, &c), || {
            format!("triple {i}: transitivity fails for {a:?} {b:?} {c:?}")
        })?;
        check(
            d(&a, &b) == strictly_better(a.as_slice(), b.as_slice()),
            || format!("triple {i}: disagrees with the definition"),
        )?;
        if d(&a, &b) && d(&b, &c) {
            comparable += 1;
        }
    }
    Ok(format!(
        "10^4 random triples, 0 violations ({comparable} transitive chains exercised)"
    ))
}

fn brute_front(costs: &[&[f64]]) -> Vec<usize> {
    (0..costs.len())
        .filter(|&i| !(0..costs.len()).any(|j| strictly_better(costs[j], costs[i])))
        .collect()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut spaces = 0;
    for variant in [
        BuiltinEnv::A3Deterministic,
        BuiltinEnv::A4DeterministicJump,
        BuiltinEnv::TwoBasinFixture,
    ] {
        let env: EnvironmentSpec = builtin_env(variant);
        for horizon in 1..=6 {
            let space = enumerate_trajectories(&env, Some(horizon)).map_err(|e| e.to_string())?;
            let fast = pareto_front(&space).map_err(|e| e.to_string())?;
            let costs: Vec<&[f64]> = space.costs().map(CostVector::as_slice).collect();
            let brute = brute_front(&costs);
            check(!fast.is_empty(), || {
                format!("{variant} T={horizon}: empty front")
            })?;
            check(fast.front_ids == brute, || {
                format!(
                    "{variant} T={horizon}: fast {:?} vs brute {brute:?}",
                    fast.front_ids
                )
            })?;
            for (&item, &w) in &fast.dominated_by {
                check(strictly_better(costs[w], costs[item]), || {
                    format!("{variant} T={horizon}: witness {w} does not dominate {item}")
                })?;
            }
            spaces += 1;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "front checks")?;
    Ok(format!(
        "{spaces} spaces (a3, a4-detjump, two-basin; T = 1..6) match brute force exactly ({elapsed:.2?})"
    ))
}

fn hamming1_neighbors(space: &TrajectorySpace) -> Vec<Vec<usize>> {
    let items = space.items();
    items
        .iter()
        .map(|a| {
            items
                .iter()
                .filter(|b| {
                    let diff = a
                        .trajectory
                        .actions()
                        .iter()
                        .zip(b.trajectory.actions())
                        .filter(|(x, y)| x != y)
                        .count();
                    diff == 1
                })
                .map(|b| b.id)
                .collect()
        })
        .collect()
}

/// From `start`, explores every path that never raises any objective above
/// J(start); returns true if such a path reaches an outside dominating item.
fn cheap_escape_exists(
    space: &TrajectorySpace,
    graph: &[Vec<usize>],
    inside: &[usize],
    start: usize,
) -> bool {
    let bound = space.cost(start).as_slice();
    let mut seen = vec![false; space.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &graph[u] {
            let cv = space.cost(v).as_slice();
            if seen[v] || cv.iter().zip(bound).any(|(x, b)| x > b) {
                continue;
            }
            seen[v] = true;
            if !inside.contains(&v) && strictly_better(cv, bound) {
                return true;
            }
            queue.push_back(v);
        }
    }
    false
}

fn id(space: &TrajectorySpace, word: &str) -> usize {
    let actions: Vec<usize> = word.bytes().map(|b| (b - b'A') as usize).collect();
    space.id_of(&actions).expect("word in space")
}

fn normalized(space: &TrajectorySpace) -> Vec<Vec<f64>> {
    let m = space.env().num_objectives();
    let lo: Vec<f64> = (0..m)
        .map(|i| space.costs().map(|c| c[i]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..m)
        .map(|i| {
            space
                .costs()
                .map(|c| c[i])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    space
        .costs()
        .map(|c| (0..m).map(|i| (c[i] - lo[i]) / (hi[i] - lo[i])).collect())
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn criterion_5() -> Outcome {
    let env: EnvironmentSpec = builtin_env(BuiltinEnv::TwoBasinFixture);
    let space = enumerate_trajectories(&env, None).map_err(|e| e.to_string())?;
    let traps = detect_traps_strict(&space).map_err(|e| e.to_string())?;
    check(traps.len() == 1, || format!("{} traps found", traps.len()))?;
    let trap = &traps[0];
    let mut expected: Vec<usize> = ["AAA", "AAB", "ABA", "BAA"]
        .iter()
        .map(|w| id(&space, w))
        .collect();
    expected.sort_unstable();
    check(trap.member_ids == expected, || {
        format!("members {:?}", trap.member_ids)
    })?;
    check(trap.witnesses == vec![id(&space, "BBB")], || {
        format!("witnesses {:?}", trap.witnesses)
    })?;

    let graph = hamming1_neighbors(&space);
    for &s in &trap.member_ids {
        check(
            !cheap_escape_exists(&space, &graph, &trap.member_ids, s),
            || format!("member {s} escapes without degradation"),
        )?;
    }

    // hand oracle: normalized coordinates and the boundary of the trap
    let pts = normalized(&space);
    let mut diameter = 0.0f64;
    for a in &pts {
        for b in &pts {
            diameter = diameter.max(dist(a, b));
        }
    }
    let d_oracle = trap
        .member_ids
        .iter()
        .map(|&m| dist(&pts[m], &pts[id(&space, "BBB")]))
        .fold(f64::INFINITY, f64::min)
        / diameter;
    let mut exits = Vec::new();
    for &m in &trap.member_ids {
        for &v in &graph[m] {
            if !trap.member_ids.contains(&v) {
                let rise = pts[v]
                    .iter()
                    .zip(&pts[m])
                    .map(|(o, i)| o - i)
                    .fold(0.0f64, f64::max);
                exits.push(rise.min(1.0));
            }
        }
    }
    let s_oracle = exits.iter().sum::<f64>() / exits.len() as f64;
    let (pa, pb) = (0.75f64, 0.25f64);
    let b_oracle = 1.0 + (pa * pa.ln() + pb * pb.ln()) / 2f64.ln();
    let tedi_oracle = (d_oracle + s_oracle + b_oracle) / 3.0;
    for (name, oracle, pinned, tol) in [
        ("D", d_oracle, 2.0 / 3.0, TEDI_TOL),
        ("S", s_oracle, 0.75, TEDI_TOL),
        ("B", b_oracle, 0.1887, 1e-4),
        ("TEDI", tedi_oracle, 0.5351, 1e-4),
    ] {
        check((oracle - pinned).abs() <= tol, || {
            format!("hand oracle {name} = {oracle}, expected {pinned}")
        })?;
    }

    let f = Scalarization::uniform(2);
    let report =
        tedi_for_trap(&space, trap, None, TediWeights::uniform(), &f).map_err(|e| e.to_string())?;
    for (name, got, oracle) in [
        ("D", report.escape_distance, d_oracle),
        ("S", report.structural, s_oracle),
        ("B", report.inertia, b_oracle),
        ("TEDI", report.value, tedi_oracle),
    ] {
        check((got - oracle).abs() <= TEDI_TOL, || {
            format!("{name} = {got}, oracle {oracle}")
        })?;
    }
    Ok(format!(
        "1 trap {{AAA, AAB, ABA, BAA}}, witness BBB, no cheap escape path; D = {:.6}, S = {:.6}, B = {:.6}, TEDI = {:.6} ({})",
        report.escape_distance, report.structural, report.inertia, report.value, report.category
    ))
}

fn criterion_6() -> Outcome {
    let env = builtin_env::<Rational>(BuiltinEnv::A4DeterministicJump)
        .with_horizon(6)
        .map_err(|e| e.to_string())?;
    // enumeration oracle: replay all 3^6 action words with exact step costs
    let r = Rational::new;
    let step = |x: i64, a: usize| -> ((Rational, Rational), i64) {
        match a {
            0 => ((r(1, 10) + r(5, 100) * r(x, 1), r(1, x + 1)), x),
            1 => ((r(8, 10), r(2, 1) - r(3, 10) * r(x, 1)), (x + 1).min(5)),
            _ => ((r(2, 1), r(3, 1) - r(4, 10) * r(x, 1)), (x + 2).min(5)),
        }
    };
    let mut best = None;
    for code in 0..729usize {
        let (mut x, mut j1, mut j2, mut c) = (0i64, r(0, 1), r(0, 1), code);
        for _ in 0..6 {
            let ((l1, l2), nx) = step(x, c % 3);
            j1 += l1;
            j2 += l2;
            x = nx;
            c /= 3;
        }
        let f = -(j1 + j2) / r(2, 1);
        if best.is_none_or(|b| f > b) {
            best = Some(f);
        }
    }
    let pointwise_f = -(r(6, 10) + r(6, 1)) / r(2, 1);
    let oracle_gap = best.expect("non-empty") - pointwise_f;
    check(oracle_gap == r(11, 40), || {
        format!("oracle gap {oracle_gap}")
    })?;

    let f = Scalarization::<Rational>::uniform(2);
    let pointwise = Agent::Policy {
        policy: PolicySpec::pointwise(),
        seeds: vec![0],
    };
    let gap = ceiling_gap(&env, &pointwise, &f).map_err(|e| e.to_string())?;
    check(gap == oracle_gap, || {
        format!("pointwise gap {gap}, oracle {oracle_gap}")
    })?;
    let planner_gap = ceiling_gap(&env, &Agent::FrontPlanner, &f).map_err(|e| e.to_string())?;
    check(planner_gap == r(0, 1), || {
        format!("front planner gap {planner_gap}")
    })?;

    let env64: EnvironmentSpec = builtin_env(BuiltinEnv::A4DeterministicJump);
    let env64 = env64.with_horizon(6).map_err(|e| e.to_string())?;
    let gap64 =
        ceiling_gap(&env64, &pointwise, &Scalarization::uniform(2)).map_err(|e| e.to_string())?;
    check((gap64 - 0.275).abs() < 1e-12 && gap64 > 0.0, || {
        format!("f64 gap {gap64}")
    })?;
    Ok(format!(
        "pointwise gap = {gap} = {gap64} (exact, matches enumeration oracle); front planner gap = 0"
    ))
}

fn criterion_7() -> Outcome {
    let pointwise = Agent::Policy {
        policy: PolicySpec::pointwise(),
        seeds: (0..20).collect(),
    };

    // stochastic model: reference space built from observed rollouts
    let a4: EnvironmentSpec = builtin_env(BuiltinEnv::A4Stochastic);
    let mut observed: Vec<Trajectory> = Vec::new();
    for policy in [
        PolicySpec::pointwise(),
        PolicySpec::trajectory_dominant(),
        PolicySpec::random(),
    ] {
        for seed in 0..50 {
            observed.push(rollout(&a4, &policy, seed).map_err(|e| e.to_string())?);
        }
    }
    let reference =
        TrajectorySpace::from_trajectories(&a4, observed, 1).map_err(|e| e.to_string())?;
    let a4_trap =
        detect_trap_confinement(&a4, &pointwise, &reference).map_err(|e| e.to_string())?;
    check(a4_trap.label == TaxonomyLabel::AttractorLoop, || {
        format!("a4 pointwise confinement labelled {}", a4_trap.label)
    })?;

    let detjump: EnvironmentSpec = builtin_env(BuiltinEnv::A4DeterministicJump);
    let full = enumerate_trajectories(&detjump, Some(6)).map_err(|e| e.to_string())?;
    let dj_trap =
        detect_trap_confinement(&detjump, &pointwise, &full).map_err(|e| e.to_string())?;
    check(dj_trap.label == TaxonomyLabel::AttractorLoop, || {
        format!(
            "a4-detjump pointwise confinement labelled {}",
            dj_trap.label
        )
    })?;

    let two_basin: EnvironmentSpec = builtin_env(BuiltinEnv::TwoBasinFixture);
    let space = enumerate_trajectories(&two_basin, None).map_err(|e| e.to_string())?;
    let traps = detect_traps_strict(&space).map_err(|e| e.to_string())?;
    check(
        traps.len() == 1 && traps[0].label == TaxonomyLabel::LocalBasin,
        || {
            format!(
                "two-basin labels {:?}",
                traps.iter().map(|t| t.label).collect::<Vec<_>>()
            )
        },
    )?;

    let plateau: EnvironmentSpec =
        load_env(include_str!("fixtures/plateau.json")).map_err(|e| e.to_string())?;
    let space = enumerate_trajectories(&plateau, None).map_err(|e| e.to_string())?;
    let traps = detect_traps_strict(&space).map_err(|e| e.to_string())?;
    check(
        traps.len() == 1 && traps[0].label == TaxonomyLabel::OptimalityPlateau,
        || {
            format!(
                "plateau fixture traps {:?}",
                traps
                    .iter()
                    .map(|t| (t.member_ids.len(), t.label))
                    .collect::<Vec<_>>()
            )
        },
    )?;
    Ok(format!(
        "a4 pointwise -> {}, a4-detjump pointwise -> {}, two-basin -> {}, plateau fixture ({} members) -> {}",
        a4_trap.label,
        dj_trap.label,
        TaxonomyLabel::LocalBasin,
        traps[0].member_ids.len(),
        traps[0].label
    ))
}

/// Applies `J -> scale_i * J + shift_i` to every accumulated cost by mapping
/// each step cost `l -> scale_i * l + shift_i / T`.
fn affine_env(
    env: &EnvironmentSpec<Rational>,
    scale: &[Rational],
    shift: &[Rational],
) -> EnvironmentSpec<Rational> {
    let t = Rational::from_integer(env.horizon() as i64);
    let actions = env
        .actions()
        .iter()
        .map(|a| {
            let costs = (0..env.num_objectives())
                .map(|i| CostRule::Table {
                    values: (0..env.n_states())
                        .map(|x| scale[i] * a.costs[i].eval(x) + shift[i] / t)
                        .collect(),
                })
                .collect();
            ActionSpec::new(a.name.clone(), a.transition, costs)
        })
        .collect();
    EnvironmentSpec::new(
        format!("{}-affine", env.name()),
        env.n_states(),
        env.horizon(),
        env.objectives().to_vec(),
        actions,
        env.restructure_prob(),
    )
    .expect("transformed environment is valid")
}

fn d_and_s(env: &EnvironmentSpec<Rational>) -> (Vec<f64>, Vec<f64>) {
    let space = enumerate_trajectories(env, None).expect("enumerable");
    let f = Scalarization::uniform(env.num_objectives());
    detect_traps_strict(&space)
        .expect("complete space")
        .iter()
        .map(|t| {
            (
                escape_distance(&space, t, &f).expect("strict trap"),
                structural_constraint(&space, t).expect("valid trap"),
            )
        })
        .unzip()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..1000 {
        let c: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let w = TediWeights::new(rng.random(), rng.random(), rng.random::<f64>() + 1e-9)
            .map_err(|e| e.to_string())?;
        let base = tedi(c[0], c[1], c[2], w).map_err(|e| e.to_string())?;
        check((0.0..=1.0).contains(&base.value), || {
            format!("draw {i}: value {} outside [0, 1]", base.value)
        })?;
        for k in 0..3 {
            let mut up = c;
            up[k] = rng.random_range(c[k]..=1.0);
            let raised = tedi(up[0], up[1], up[2], w).map_err(|e| e.to_string())?;
            check(raised.value >= base.value, || {
                format!("draw {i}: raising component {k} lowered TEDI")
            })?;
        }
    }

    let fixtures: Vec<(EnvironmentSpec<Rational>, usize)> = vec![
        (builtin_env(BuiltinEnv::TwoBasinFixture), 900),
        (
            load_env(include_str!("fixtures/plateau.json")).map_err(|e| e.to_string())?,
            100,
        ),
    ];
    let mut transforms = 0;
    for (env, draws) in &fixtures {
        let reference = d_and_s(env);
        check(!reference.0.is_empty(), || {
            format!("{} has no strict trap", env.name())
        })?;
        let m = env.num_objectives();
        for _ in 0..*draws {
            let scale: Vec<Rational> = (0..m)
                .map(|_| Rational::new(rng.random_range(1..=64), rng.random_range(1..=16)))
                .collect();
            let shift: Vec<Rational> = (0..m)
                .map(|_| Rational::new(rng.random_range(-50..=50), rng.random_range(1..=8)))
                .collect();
            let transformed = d_and_s(&affine_env(env, &scale, &shift));
            check(transformed == reference, || {
                format!(
                    "{}: D/S changed under scale {scale:?} shift {shift:?}: {transformed:?} vs {reference:?}",
                    env.name()
                )
            })?;
            transforms += 1;
        }
    }
    let any_strict = fixtures.iter().all(|(env, _)| {
        let space = enumerate_trajectories(env, None).expect("enumerable");
        detect_traps_strict(&space)
            .expect("complete")
            .iter()
            .all(|t| t.mode == TrapMode::Strict)
    });
    check(any_strict, || "unexpected trap mode".into())?;
    Ok(format!(
        "10^3 draws in [0, 1] and monotone in D, S, B; D and S bit-identical under {transforms} positive affine transforms"
    ))
}
