//! Trajectories, accumulated cost vectors and finite trajectory spaces with
//! Hamming-edit adjacency over action sequences.

use std::collections::{HashMap, VecDeque};
use std::ops::{Index, Range};

use rayon::prelude::*;

use crate::env::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};
use crate::sim::{self, PolicySpec};

/// Default upper bound on the number of enumerated trajectories.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Accumulated (or instantaneous) cost, one component per objective.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector<S = f64>(Vec<S>);

impl<S: Scalar> CostVector<S> {
    pub fn new(components: Vec<S>) -> Self {
        Self(components)
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![S::zero(); m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Scalar::is_finite_value)
    }

    /// Componentwise `self <= other`.
    pub fn weakly_below(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|v| v.to_f64_lossy()).collect()
    }
}

impl<S> Index<usize> for CostVector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> From<Vec<S>> for CostVector<S> {
    fn from(v: Vec<S>) -> Self {
        Self(v)
    }
}

/// Per-objective compensated accumulation of step costs.
#[derive(Debug, Clone)]
pub struct CostAccumulator<S> {
    sums: Vec<CompensatedSum<S>>,
}

impl<S: Scalar> CostAccumulator<S> {
    pub fn new(m: usize) -> Self {
        Self {
            sums: vec![CompensatedSum::new(); m],
        }
    }

    pub fn add(&mut self, step: &CostVector<S>) {
        for (acc, v) in self.sums.iter_mut().zip(step.iter()) {
            acc.add(*v);
        }
    }

    pub fn total(&self) -> CostVector<S> {
        CostVector(self.sums.iter().map(CompensatedSum::value).collect())
    }
}

/// `(x_0, a_0, x_1, ..., a_{T-1}, x_T)` stored as parallel state and action
/// sequences. Identity is the action sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trajectory {
    states: Vec<usize>,
    actions: Vec<usize>,
}

impl Trajectory {
    pub fn new(states: Vec<usize>, actions: Vec<usize>) -> Result<Self> {
        if states.len() != actions.len() + 1 {
            return Err(Error::LengthMismatch {
                expected: actions.len() + 1,
                found: states.len(),
            });
        }
        Ok(Self { states, actions })
    }

    /// Replays `actions` from state 0 under deterministic dynamics.
    pub fn replay<S: Scalar>(env: &EnvironmentSpec<S>, actions: Vec<usize>) -> Result<Self> {
        let mut states = Vec::with_capacity(actions.len() + 1);
        let mut x = 0;
        states.push(x);
        for &a in &actions {
            x = env.next_state(x, a)?;
            states.push(x);
        }
        Ok(Self { states, actions })
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn horizon(&self) -> usize {
        self.actions.len()
    }

    pub fn final_state(&self) -> usize {
        *self
            .states
            .last()
            .expect("trajectory has at least one state")
    }

    pub fn max_state(&self) -> usize {
        self.states.iter().copied().max().unwrap_or(0)
    }
}

fn check_steps<S: Scalar>(
    env: &EnvironmentSpec<S>,
    traj: &Trajectory,
    range: Range<usize>,
) -> Result<()> {
    let n = env.n_states();
    for t in range {
        let (x, a, next) = (traj.states[t], traj.actions[t], traj.states[t + 1]);
        if x >= n || next >= n {
            return Err(Error::IndexOutOfRange {
                what: "state",
                index: x.max(next),
                limit: n,
            });
        }
        if a >= env.num_actions() {
            return Err(Error::IndexOutOfRange {
                what: "action",
                index: a,
                limit: env.num_actions(),
            });
        }
        if env.is_deterministic() {
            let expected = env.next_state(x, a)?;
            if expected != next {
                return Err(Error::ReplayInconsistent {
                    step: t,
                    expected,
                    found: next,
                });
            }
        } else if !env.admits(x, a, next) {
            return Err(Error::InfeasibleTransition {
                step: t,
                from: x,
                to: next,
            });
        }
    }
    Ok(())
}

/// Accumulated cost `J(traj)`: per-objective sum of step costs.
pub fn accumulate<S: Scalar>(env: &EnvironmentSpec<S>, traj: &Trajectory) -> Result<CostVector<S>> {
    if traj.states[0] != 0 {
        return Err(Error::BadInitialState(traj.states[0]));
    }
    segment_cost(env, traj, 0..traj.horizon())
}

/// Cost accumulated over the steps `range` of `traj`, which need not start in
/// state 0.
pub fn segment_cost<S: Scalar>(
    env: &EnvironmentSpec<S>,
    traj: &Trajectory,
    range: Range<usize>,
) -> Result<CostVector<S>> {
    if range.end > traj.horizon() || range.start > range.end {
        return Err(Error::LengthMismatch {
            expected: traj.horizon(),
            found: range.end,
        });
    }
    check_steps(env, traj, range.clone())?;
    let mut acc = CostAccumulator::new(env.num_objectives());
    for t in range {
        acc.add(&env.step_cost_unchecked(traj.states[t], traj.actions[t]));
    }
    Ok(acc.total())
}

/// Simulates `env.horizon()` steps from state 0. The result depends only on
/// `(env, policy, seed)`.
pub fn rollout<S: Scalar>(
    env: &EnvironmentSpec<S>,
    policy: &PolicySpec,
    seed: u64,
) -> Result<Trajectory> {
    let prepared = policy.prepare(env)?;
    Ok(sim::simulate_run(env, &prepared, seed).trajectory)
}

/// Number of differing action positions.
pub fn hamming(a: &Trajectory, b: &Trajectory) -> Result<usize> {
    if a.horizon() != b.horizon() {
        return Err(Error::LengthMismatch {
            expected: a.horizon(),
            found: b.horizon(),
        });
    }
    Ok(hamming_actions(&a.actions, &b.actions))
}

fn hamming_actions(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceItem<S = f64> {
    pub id: usize,
    pub trajectory: Trajectory,
    pub cost: CostVector<S>,
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Overrides the environment horizon.
    pub horizon: Option<usize>,
    pub cap: u128,
    pub epsilon: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            horizon: None,
            cap: DEFAULT_ENUMERATION_CAP,
            epsilon: 1,
        }
    }
}

/// A finite set of same-horizon trajectories with their costs. Two items are
/// adjacent iff their action sequences differ in at most `epsilon` positions.
#[derive(Debug, Clone)]
pub struct TrajectorySpace<S = f64> {
    env: EnvironmentSpec<S>,
    epsilon: usize,
    items: Vec<SpaceItem<S>>,
    complete: bool,
    index: HashMap<Vec<usize>, usize>,
}

/// Every action sequence of the given horizon, in lexicographic order.
pub fn enumerate_trajectories<S: Scalar>(
    env: &EnvironmentSpec<S>,
    horizon_override: Option<usize>,
) -> Result<TrajectorySpace<S>> {
    enumerate_with(
        env,
        &EnumerateOptions {
            horizon: horizon_override,
            ..EnumerateOptions::default()
        },
    )
}

pub fn enumerate_with<S: Scalar>(
    env: &EnvironmentSpec<S>,
    opts: &EnumerateOptions,
) -> Result<TrajectorySpace<S>> {
    if !env.is_deterministic() {
        return Err(Error::Stochastic(env.name().to_string()));
    }
    let horizon = opts.horizon.unwrap_or(env.horizon());
    let env = env.with_horizon(horizon)?;
    let arity = env.num_actions();
    let count = u32::try_from(horizon)
        .ok()
        .and_then(|t| (arity as u128).checked_pow(t))
        .unwrap_or(u128::MAX);
    if count > opts.cap {
        return Err(Error::CapExceeded {
            count,
            cap: opts.cap,
        });
    }
    let count = count as usize;
    let items = (0..count)
        .into_par_iter()
        .map(|id| {
            let mut actions = vec![0; horizon];
            let mut rest = id;
            for slot in actions.iter_mut().rev() {
                *slot = rest % arity;
                rest /= arity;
            }
            let trajectory = Trajectory::replay(&env, actions)?;
            let cost = segment_cost(&env, &trajectory, 0..horizon)?;
            Ok(SpaceItem {
                id,
                trajectory,
                cost,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectorySpace {
        env,
        epsilon: opts.epsilon,
        items,
        complete: true,
        index: HashMap::new(),
    })
}

impl<S: Scalar> TrajectorySpace<S> {
    /// Space over an arbitrary trajectory set. Trajectories are deduplicated
    /// by action sequence, sorted lexicographically and costed by replay.
    pub fn from_trajectories(
        env: &EnvironmentSpec<S>,
        trajectories: Vec<Trajectory>,
        epsilon: usize,
    ) -> Result<Self> {
        let horizon = trajectories
            .first()
            .map(Trajectory::horizon)
            .ok_or(Error::Empty("trajectory set"))?;
        let env = env.with_horizon(horizon)?;
        let mut trajectories = trajectories;
        for t in &trajectories {
            if t.horizon() != horizon {
                return Err(Error::LengthMismatch {
                    expected: horizon,
                    found: t.horizon(),
                });
            }
        }
        trajectories.sort_by(|a, b| a.actions.cmp(&b.actions));
        trajectories.dedup_by(|a, b| a.actions == b.actions);
        let items = trajectories
            .into_iter()
            .enumerate()
            .map(|(id, trajectory)| {
                let cost = accumulate(&env, &trajectory)?;
                Ok(SpaceItem {
                    id,
                    trajectory,
                    cost,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let full = u32::try_from(horizon)
            .ok()
            .and_then(|t| (env.num_actions() as u128).checked_pow(t));
        let complete = env.is_deterministic() && full == Some(items.len() as u128);
        let index = if complete {
            HashMap::new()
        } else {
            items
                .iter()
                .map(|it| (it.trajectory.actions.clone(), it.id))
                .collect()
        };
        Ok(Self {
            env,
            epsilon,
            items,
            complete,
            index,
        })
    }

    pub fn with_epsilon(mut self, epsilon: usize) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// The environment, carrying this space's horizon.
    pub fn env(&self) -> &EnvironmentSpec<S> {
        &self.env
    }

    pub fn horizon(&self) -> usize {
        self.env.horizon()
    }

    pub fn epsilon(&self) -> usize {
        self.epsilon
    }

    pub fn items(&self) -> &[SpaceItem<S>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// True when the space holds every action sequence of its horizon.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn item(&self, id: usize) -> Result<&SpaceItem<S>> {
        self.items.get(id).ok_or(Error::InvalidId(id))
    }

    pub fn cost(&self, id: usize) -> &CostVector<S> {
        &self.items[id].cost
    }

    pub fn costs(&self) -> impl Iterator<Item = &CostVector<S>> {
        self.items.iter().map(|it| &it.cost)
    }

    pub fn id_of(&self, actions: &[usize]) -> Option<usize> {
        if actions.len() != self.horizon() {
            return None;
        }
        if self.complete {
            let arity = self.env.num_actions();
            let mut id = 0usize;
            for &a in actions {
                if a >= arity {
                    return None;
                }
                id = id * arity + a;
            }
            Some(id)
        } else {
            self.index.get(actions).copied()
        }
    }

    /// Ids within Hamming distance `epsilon` of `id`, excluding `id`, sorted.
    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        let actions = &self.items[id].trajectory.actions;
        let eps = self.epsilon.min(actions.len());
        if eps == 0 {
            return Vec::new();
        }
        let mut out = if self.edit_candidates(eps) > self.items.len() as u128 {
            self.items
                .iter()
                .filter(|it| it.id != id && hamming_actions(&it.trajectory.actions, actions) <= eps)
                .map(|it| it.id)
                .collect()
        } else {
            let mut found = Vec::new();
            let mut buf = actions.clone();
            self.visit_edits(&mut buf, 0, eps, &mut |seq| {
                if let Some(other) = self.id_of(seq) {
                    found.push(other);
                }
            });
            found
        };
        out.sort_unstable();
        out
    }

    /// Neighbor lists for every item.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .into_par_iter()
            .map(|id| self.neighbors(id))
            .collect()
    }

    fn edit_candidates(&self, eps: usize) -> u128 {
        let t = self.horizon() as u128;
        let alt = self.env.num_actions().saturating_sub(1) as u128;
        let mut total: u128 = 0;
        let mut binom: u128 = 1;
        let mut pow: u128 = 1;
        for j in 1..=eps as u128 {
            binom = binom.saturating_mul(t + 1 - j) / j;
            pow = pow.saturating_mul(alt);
            total = total.saturating_add(binom.saturating_mul(pow));
        }
        total
    }

    /// Calls `f` on every sequence obtained by changing between 1 and
    /// `budget` positions at index `>= from`.
    fn visit_edits(
        &self,
        buf: &mut Vec<usize>,
        from: usize,
        budget: usize,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if budget == 0 {
            return;
        }
        let arity = self.env.num_actions();
        for pos in from..buf.len() {
            let original = buf[pos];
            for a in (0..arity).filter(|&a| a != original) {
                buf[pos] = a;
                f(buf);
                self.visit_edits(buf, pos + 1, budget - 1, f);
            }
            buf[pos] = original;
        }
    }

    /// Connected components of the adjacency graph restricted to `members`.
    /// Components are sorted internally and ordered by smallest id.
    pub fn connected_components(&self, members: &[usize]) -> Vec<Vec<usize>> {
        components_by(self.len(), members, |u| self.neighbors(u))
    }

    /// Action occurrence counts over the given items.
    pub fn action_counts(&self, ids: &[usize]) -> Vec<u64> {
        let mut counts = vec![0u64; self.env.num_actions()];
        for &id in ids {
            for &a in &self.items[id].trajectory.actions {
                counts[a] += 1;
            }
        }
        counts
    }
}

/// Components of the graph given by `neighbors`, restricted to `members`.
pub(crate) fn components_by<F>(n: usize, members: &[usize], neighbors: F) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> Vec<usize>,
{
    let mut inside = vec![false; n];
    for &m in members {
        inside[m] = true;
    }
    let mut seen = vec![false; n];
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut components = Vec::new();
    for &start in &sorted {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut component = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in neighbors(u) {
                if inside[v] && !seen[v] {
                    seen[v] = true;
                    component.push(v);
                    queue.push_back(v);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}
