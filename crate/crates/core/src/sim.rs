//! The three policy classes and the seeded batch simulation harness.
//!
//! Every run owns a `ChaCha8Rng` seeded with `base_seed ^ run_index`. Within a
//! step the policy draws first, then the transition. Runs execute in parallel
//! but are aggregated in run order, so results do not depend on thread count.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dominance::{pareto_front_costs, FrontResult};
use crate::env::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};
use crate::trajspace::{CostAccumulator, CostVector, Trajectory};

/// Bins of the pooled opportunity-cost (second objective) histogram.
pub const OPPORTUNITY_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum PolicySpec {
    /// Argmin over actions of the summed instantaneous costs, ties to the
    /// lowest action index. `weights` switches to a weighted sum.
    PointwiseGreedy { weights: Option<Vec<f64>> },
    /// Restructure with probability `restructure_rate`, else Explore below
    /// state `explore_below`, else Exploit.
    TrajectoryDominant {
        restructure_rate: f64,
        explore_below: usize,
    },
    /// Uniform over actions.
    RandomUniform,
}

impl PolicySpec {
    pub fn pointwise() -> Self {
        PolicySpec::PointwiseGreedy { weights: None }
    }

    pub fn trajectory_dominant() -> Self {
        PolicySpec::TrajectoryDominant {
            restructure_rate: 0.1,
            explore_below: 3,
        }
    }

    pub fn random() -> Self {
        PolicySpec::RandomUniform
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolicySpec::PointwiseGreedy { .. } => "pointwise",
            PolicySpec::TrajectoryDominant { .. } => "trajectory",
            PolicySpec::RandomUniform => "random",
        }
    }

    /// True when the policy never consumes randomness.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, PolicySpec::PointwiseGreedy { .. })
    }

    /// Validates the policy against `env` and resolves action roles.
    pub fn prepare<S: Scalar>(&self, env: &EnvironmentSpec<S>) -> Result<PreparedPolicy> {
        let kind = match self {
            PolicySpec::PointwiseGreedy { weights } => {
                if let Some(w) = weights {
                    if w.len() != env.num_objectives() {
                        return Err(Error::InvalidPolicy(format!(
                            "pointwise weights have {} entries, environment has {} objectives",
                            w.len(),
                            env.num_objectives()
                        )));
                    }
                    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
                        return Err(Error::InvalidPolicy(
                            "pointwise weights must be finite and non-negative".into(),
                        ));
                    }
                }
                Prepared::Pointwise {
                    weights: weights.clone(),
                }
            }
            PolicySpec::TrajectoryDominant {
                restructure_rate,
                explore_below,
            } => {
                if !(0.0..=1.0).contains(restructure_rate) {
                    return Err(Error::InvalidPolicy(format!(
                        "restructure_rate {restructure_rate} outside [0, 1]"
                    )));
                }
                if *explore_below >= env.n_states() {
                    return Err(Error::InvalidPolicy(format!(
                        "explore_below {explore_below} must be < n_states {}",
                        env.n_states()
                    )));
                }
                let roles = ActionRoles::resolve(env)?;
                Prepared::Trajectory {
                    rate: *restructure_rate,
                    explore_below: *explore_below,
                    roles,
                }
            }
            PolicySpec::RandomUniform => Prepared::Random,
        };
        Ok(PreparedPolicy { kind })
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pointwise" => Ok(PolicySpec::pointwise()),
            "trajectory" | "trajectory-dominant" => Ok(PolicySpec::trajectory_dominant()),
            "random" => Ok(PolicySpec::random()),
            other => Err(Error::InvalidPolicy(format!(
                "unknown policy `{other}` (expected pointwise, trajectory or random)"
            ))),
        }
    }
}

/// Which actions play Exploit, Explore and Restructure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionRoles {
    pub exploit: usize,
    pub explore: usize,
    pub restructure: usize,
}

impl ActionRoles {
    /// Matches action names (`exploit`/`refine`, `explore`/`advance`,
    /// `restructure`), falling back to positions 0, 1, 2.
    pub fn resolve<S: Scalar>(env: &EnvironmentSpec<S>) -> Result<Self> {
        let find = |names: &[&str], fallback: usize| -> Result<usize> {
            names
                .iter()
                .find_map(|n| env.action_index(n))
                .or_else(|| (fallback < env.num_actions()).then_some(fallback))
                .ok_or_else(|| {
                    Error::InvalidPolicy(format!(
                        "trajectory-dominant policy needs three actions, `{}` has {}",
                        env.name(),
                        env.num_actions()
                    ))
                })
        };
        Ok(Self {
            exploit: find(&["exploit", "refine"], 0)?,
            explore: find(&["explore", "advance"], 1)?,
            restructure: find(&["restructure"], 2)?,
        })
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    Pointwise {
        weights: Option<Vec<f64>>,
    },
    Trajectory {
        rate: f64,
        explore_below: usize,
        roles: ActionRoles,
    },
    Random,
}

/// A policy checked against one environment.
#[derive(Debug, Clone)]
pub struct PreparedPolicy {
    kind: Prepared,
}

impl PreparedPolicy {
    pub fn select<S: Scalar, R: Rng + ?Sized>(
        &self,
        env: &EnvironmentSpec<S>,
        state: usize,
        rng: &mut R,
    ) -> usize {
        match &self.kind {
            Prepared::Pointwise { weights: None } => {
                let mut best = 0;
                let mut best_cost = None;
                for a in 0..env.num_actions() {
                    let total: CompensatedSum<S> =
                        env.step_cost_unchecked(state, a).iter().copied().collect();
                    let total = total.value();
                    if best_cost.is_none_or(|b| total < b) {
                        best = a;
                        best_cost = Some(total);
                    }
                }
                best
            }
            Prepared::Pointwise { weights: Some(w) } => {
                let mut best = 0;
                let mut best_cost = f64::INFINITY;
                for a in 0..env.num_actions() {
                    let total: f64 = env
                        .step_cost_unchecked(state, a)
                        .iter()
                        .zip(w)
                        .map(|(c, wi)| c.to_f64_lossy() * wi)
                        .sum();
                    if total < best_cost {
                        best = a;
                        best_cost = total;
                    }
                }
                best
            }
            Prepared::Trajectory {
                rate,
                explore_below,
                roles,
            } => {
                let roll: f64 = rng.random();
                if roll < *rate {
                    roles.restructure
                } else if state < *explore_below {
                    roles.explore
                } else {
                    roles.exploit
                }
            }
            Prepared::Random => rng.random_range(0..env.num_actions()),
        }
    }
}

/// One policy decision in `state`.
pub fn select_action<S: Scalar, R: Rng + ?Sized>(
    policy: &PolicySpec,
    env: &EnvironmentSpec<S>,
    state: usize,
    rng: &mut R,
) -> Result<usize> {
    if state >= env.n_states() {
        return Err(Error::IndexOutOfRange {
            what: "state",
            index: state,
            limit: env.n_states(),
        });
    }
    Ok(policy.prepare(env)?.select(env, state, rng))
}

/// A single simulated rollout with its per-step costs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<S = f64> {
    pub seed: u64,
    pub trajectory: Trajectory,
    pub step_costs: Vec<CostVector<S>>,
    /// Accumulated cost after each step.
    pub cumulative: Vec<CostVector<S>>,
}

impl<S: Scalar> RunRecord<S> {
    pub fn total(&self) -> CostVector<S> {
        self.cumulative.last().cloned().unwrap_or_else(|| {
            CostVector::zeros(self.step_costs.first().map_or(0, CostVector::len))
        })
    }
}

pub(crate) fn simulate_run<S: Scalar>(
    env: &EnvironmentSpec<S>,
    policy: &PreparedPolicy,
    seed: u64,
) -> RunRecord<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = env.horizon();
    let mut states = Vec::with_capacity(horizon + 1);
    let mut actions = Vec::with_capacity(horizon);
    let mut step_costs = Vec::with_capacity(horizon);
    let mut cumulative = Vec::with_capacity(horizon);
    let mut acc = CostAccumulator::new(env.num_objectives());
    let mut x = 0;
    states.push(x);
    for _ in 0..horizon {
        let a = policy.select(env, x, &mut rng);
        let cost = env.step_cost_unchecked(x, a);
        acc.add(&cost);
        x = env.actions()[a].transition.sample(
            x,
            env.top_state(),
            env.restructure_prob(),
            &mut rng,
        );
        actions.push(a);
        states.push(x);
        step_costs.push(cost);
        cumulative.push(acc.total());
    }
    RunRecord {
        seed,
        trajectory: Trajectory::new(states, actions).expect("lengths agree by construction"),
        step_costs,
        cumulative,
    }
}

/// Aggregated results of `runs` seeded rollouts of one policy.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchStats<S = f64> {
    pub policy: PolicySpec,
    pub base_seed: u64,
    /// In run order; run `i` used seed `base_seed ^ i`.
    pub runs: Vec<RunRecord<S>>,
    pub final_state_histogram: Vec<u64>,
    pub action_counts: Vec<u64>,
    /// Mean state at steps `0..=T`.
    pub mean_state: Vec<f64>,
    /// Mean accumulated first-objective cost at steps `0..=T`.
    pub mean_cum_j1: Vec<f64>,
}

impl<S: Scalar> BatchStats<S> {
    pub fn num_runs(&self) -> usize {
        self.runs.len()
    }

    pub fn final_states(&self) -> Vec<usize> {
        self.runs
            .iter()
            .map(|r| r.trajectory.final_state())
            .collect()
    }

    pub fn costs(&self) -> Vec<CostVector<S>> {
        self.runs.iter().map(RunRecord::total).collect()
    }

    pub fn action_frequencies(&self) -> Vec<f64> {
        let total: u64 = self.action_counts.iter().sum();
        self.action_counts
            .iter()
            .map(|&c| {
                if total == 0 {
                    0.0
                } else {
                    c as f64 / total as f64
                }
            })
            .collect()
    }

    /// Empirical CDF of the final state, `P(final <= x)` for each state `x`.
    pub fn final_state_cdf(&self) -> Vec<f64> {
        let n = self.runs.len() as f64;
        let mut running = 0u64;
        self.final_state_histogram
            .iter()
            .map(|&c| {
                running += c;
                running as f64 / n
            })
            .collect()
    }
}

/// Runs `runs` rollouts with seeds `base_seed ^ run_index`.
pub fn run_batch<S: Scalar>(
    env: &EnvironmentSpec<S>,
    policy: &PolicySpec,
    runs: usize,
    base_seed: u64,
) -> Result<BatchStats<S>> {
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be >= 1".into()));
    }
    let prepared = policy.prepare(env)?;
    let records: Vec<RunRecord<S>> = (0..runs)
        .into_par_iter()
        .map(|i| simulate_run(env, &prepared, base_seed ^ i as u64))
        .collect();

    let horizon = env.horizon();
    let mut final_state_histogram = vec![0u64; env.n_states()];
    let mut action_counts = vec![0u64; env.num_actions()];
    let mut state_sums = vec![CompensatedSum::<f64>::new(); horizon + 1];
    let mut j1_sums = vec![CompensatedSum::<f64>::new(); horizon + 1];
    for r in &records {
        final_state_histogram[r.trajectory.final_state()] += 1;
        for &a in r.trajectory.actions() {
            action_counts[a] += 1;
        }
        for (t, &x) in r.trajectory.states().iter().enumerate() {
            state_sums[t].add(x as f64);
        }
        for (t, c) in r.cumulative.iter().enumerate() {
            j1_sums[t + 1].add(c[0].to_f64_lossy());
        }
    }
    let n = runs as f64;
    Ok(BatchStats {
        policy: policy.clone(),
        base_seed,
        runs: records,
        final_state_histogram,
        action_counts,
        mean_state: state_sums.iter().map(|s| s.value() / n).collect(),
        mean_cum_j1: j1_sums.iter().map(|s| s.value() / n).collect(),
    })
}

/// A rollout cost tagged with its policy (index into the compared list) and run.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledCost<S = f64> {
    pub policy: usize,
    pub run: usize,
    pub cost: CostVector<S>,
}

/// Equal-width histogram of the second objective over the pooled rollouts.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    /// One row of bin counts per policy.
    pub counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport<S = f64> {
    pub batches: Vec<BatchStats<S>>,
    pub pooled: Vec<PooledCost<S>>,
    /// Front over `pooled` (ids index into `pooled`).
    pub pooled_front: FrontResult,
    pub opportunity: Histogram,
}

/// Runs every policy with the same seeds and pools their rollout costs.
pub fn compare_policies<S: Scalar>(
    env: &EnvironmentSpec<S>,
    policies: &[PolicySpec],
    runs: usize,
    base_seed: u64,
) -> Result<ComparisonReport<S>> {
    if policies.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "comparison needs at least two policies, got {}",
            policies.len()
        )));
    }
    let batches = policies
        .iter()
        .map(|p| run_batch(env, p, runs, base_seed))
        .collect::<Result<Vec<_>>>()?;
    let pooled: Vec<PooledCost<S>> = batches
        .iter()
        .enumerate()
        .flat_map(|(p, b)| {
            b.runs.iter().enumerate().map(move |(run, r)| PooledCost {
                policy: p,
                run,
                cost: r.total(),
            })
        })
        .collect();
    let costs: Vec<CostVector<S>> = pooled.iter().map(|p| p.cost.clone()).collect();
    let pooled_front = pareto_front_costs(&costs)?;
    let opportunity =
        opportunity_histogram(&pooled, policies.len(), env.num_objectives().min(2) - 1);
    Ok(ComparisonReport {
        batches,
        pooled,
        pooled_front,
        opportunity,
    })
}

fn opportunity_histogram<S: Scalar>(
    pooled: &[PooledCost<S>],
    n_policies: usize,
    objective: usize,
) -> Histogram {
    let values: Vec<f64> = pooled
        .iter()
        .map(|p| p.cost[objective].to_f64_lossy())
        .collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = if hi > lo { OPPORTUNITY_BINS } else { 1 };
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0
    };
    let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![vec![0u64; bins]; n_policies];
    for (p, v) in pooled.iter().zip(&values) {
        let bin = (((v - lo) / width) as usize).min(bins - 1);
        counts[p.policy][bin] += 1;
    }
    Histogram { edges, counts }
}
