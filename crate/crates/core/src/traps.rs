//! Trap detection (strict and confinement), the trap taxonomy and
//! scalarized ceilings.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::dominance::{dominates_slices, pareto_front};
use crate::env::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};
use crate::sim::{self, PolicySpec};
use crate::tedi::{behavioral_inertia, counts_as_f64, edge_degradations, euclid, Normalizer};
use crate::trajspace::{components_by, enumerate_trajectories, CostVector, TrajectorySpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrapMode {
    /// A component of locally Pareto-optimal trajectories that is globally
    /// dominated and cannot be left without first getting worse.
    Strict,
    /// The set of trajectories an agent can actually produce.
    Confinement,
}

impl TrapMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrapMode::Strict => "strict",
            TrapMode::Confinement => "confinement",
        }
    }
}

impl fmt::Display for TrapMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaxonomyLabel {
    LocalBasin,
    NarrowCorridor,
    OptimalityPlateau,
    AttractorLoop,
}

impl TaxonomyLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TaxonomyLabel::LocalBasin => "LocalBasin",
            TaxonomyLabel::NarrowCorridor => "NarrowCorridor",
            TaxonomyLabel::OptimalityPlateau => "OptimalityPlateau",
            TaxonomyLabel::AttractorLoop => "AttractorLoop",
        }
    }
}

impl fmt::Display for TaxonomyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trap {
    /// Sorted ids into the trajectory space the trap was detected in.
    pub member_ids: Vec<usize>,
    /// Outside items dominating at least one member (strict traps only).
    pub witnesses: Vec<usize>,
    /// `(member, outside neighbor)` pairs, sorted.
    pub boundary_edges: Vec<(usize, usize)>,
    pub mode: TrapMode,
    pub label: TaxonomyLabel,
    /// Highest state visited by any member (confinement traps only).
    pub confinement_threshold: Option<usize>,
}

impl Trap {
    pub fn len(&self) -> usize {
        self.member_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.member_ids.binary_search(&id).is_ok()
    }
}

/// Thresholds of the taxonomy cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxonomyConfig {
    /// Minimum behavioral inertia for an attractor loop.
    pub loop_min_inertia: f64,
    /// Minimum share of member steps taken by one (state, action) pair.
    pub loop_min_share: f64,
    /// Maximum number of near-cheapest exits for a corridor.
    pub corridor_max_exits: usize,
    /// Relative slack over the cheapest exit degradation.
    pub corridor_tolerance: f64,
    pub plateau_min_members: usize,
    /// Maximum pairwise normalized cost distance inside a plateau.
    pub plateau_max_spread: f64,
}

impl Default for TaxonomyConfig {
    fn default() -> Self {
        Self {
            loop_min_inertia: 0.8,
            loop_min_share: 0.5,
            corridor_max_exits: 2,
            corridor_tolerance: 0.1,
            plateau_min_members: 8,
            plateau_max_spread: 0.1,
        }
    }
}

/// Weighted-sum scalarization `f(v) = -sum(w_i * v_i)`; larger is better.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalarization<S = f64> {
    weights: Vec<S>,
}

impl<S: Scalar> Scalarization<S> {
    /// Weights must be non-negative and sum to one.
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no scalarization weights".into()));
        }
        if weights
            .iter()
            .any(|w| !w.is_finite_value() || *w < S::zero())
        {
            return Err(Error::InvalidWeights(
                "scalarization weights must be finite and non-negative".into(),
            ));
        }
        let sum: CompensatedSum<S> = weights.iter().copied().collect();
        let sum = sum.value().to_f64_lossy();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidWeights(format!(
                "scalarization weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    pub fn from_f64(weights: &[f64]) -> Result<Self> {
        let converted = weights
            .iter()
            .map(|&w| {
                S::from_f64(w)
                    .ok_or_else(|| Error::InvalidWeights(format!("weight {w} not representable")))
            })
            .collect::<Result<Vec<S>>>()?;
        Self::new(converted)
    }

    pub fn uniform(m: usize) -> Self {
        Self {
            weights: vec![S::from_ratio(1, m as i64); m],
        }
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn value(&self, cost: &CostVector<S>) -> S {
        let sum: CompensatedSum<S> = self
            .weights
            .iter()
            .zip(cost.iter())
            .map(|(w, v)| *w * *v)
            .collect();
        -sum.value()
    }
}

/// Who produces the trajectories of a confinement trap.
#[derive(Debug, Clone, PartialEq)]
pub enum Agent {
    /// Rollouts of a policy. Deterministic policies use the first seed (or 0).
    Policy { policy: PolicySpec, seeds: Vec<u64> },
    /// An exhaustive planner that realizes every Pareto-optimal trajectory.
    FrontPlanner,
}

/// No neighbor of `id` dominates it.
pub fn is_locally_pareto_optimal<S: Scalar>(space: &TrajectorySpace<S>, id: usize) -> Result<bool> {
    let own = space.item(id)?.cost.as_slice();
    Ok(!space
        .neighbors(id)
        .iter()
        .any(|&n| dominates_slices(space.cost(n).as_slice(), own)))
}

pub fn detect_traps_strict<S: Scalar>(space: &TrajectorySpace<S>) -> Result<Vec<Trap>> {
    detect_traps_strict_with(space, &TaxonomyConfig::default())
}

/// Strict traps of a complete trajectory space, ordered by smallest member.
pub fn detect_traps_strict_with<S: Scalar>(
    space: &TrajectorySpace<S>,
    config: &TaxonomyConfig,
) -> Result<Vec<Trap>> {
    if !space.is_complete() {
        return Err(Error::IncompleteSpace);
    }
    let n = space.len();
    let adjacency = space.adjacency();
    let cost = |id: usize| space.cost(id).as_slice();
    let local: Vec<usize> = (0..n)
        .into_par_iter()
        .filter(|&id| {
            !adjacency[id]
                .iter()
                .any(|&v| dominates_slices(cost(v), cost(id)))
        })
        .collect();
    let components = components_by(n, &local, |u| adjacency[u].clone());

    let mut traps = Vec::new();
    for members in components {
        let mut inside = vec![false; n];
        for &m in &members {
            inside[m] = true;
        }
        let witnesses: Vec<usize> = (0..n)
            .into_par_iter()
            .filter(|&w| !inside[w] && members.iter().any(|&m| dominates_slices(cost(w), cost(m))))
            .collect();
        if witnesses.is_empty() {
            continue;
        }
        let free_escape = members
            .par_iter()
            .any(|&s| escapes_without_degradation(space, &|u| adjacency[u].clone(), &inside, s));
        if free_escape {
            continue;
        }
        let boundary_edges = boundary(&members, &inside, |u| adjacency[u].clone());
        let mut trap = Trap {
            member_ids: members,
            witnesses,
            boundary_edges,
            mode: TrapMode::Strict,
            label: TaxonomyLabel::LocalBasin,
            confinement_threshold: None,
        };
        trap.label = classify_trap_with(space, &trap, None, config);
        traps.push(trap);
    }
    Ok(traps)
}

/// True when, from `start`, a path through items no worse than `start` in any
/// objective reaches an outside item that dominates `start`.
fn escapes_without_degradation<S: Scalar>(
    space: &TrajectorySpace<S>,
    neighbors: &(dyn Fn(usize) -> Vec<usize> + Sync),
    inside: &[bool],
    start: usize,
) -> bool {
    let bound = space.cost(start);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for v in neighbors(u) {
            let cv = space.cost(v);
            if !cv.weakly_below(bound) || !seen.insert(v) {
                continue;
            }
            if !inside[v] && dominates_slices(cv.as_slice(), bound.as_slice()) {
                return true;
            }
            queue.push_back(v);
        }
    }
    false
}

/// Re-checks that no member of `trap` can reach a dominating outside item
/// along a path that never worsens any objective.
pub fn has_degradation_certificate<S: Scalar>(
    space: &TrajectorySpace<S>,
    trap: &Trap,
) -> Result<bool> {
    let mut inside = vec![false; space.len()];
    for &m in &trap.member_ids {
        space.item(m)?;
        inside[m] = true;
    }
    Ok(!trap
        .member_ids
        .par_iter()
        .any(|&s| escapes_without_degradation(space, &|u| space.neighbors(u), &inside, s)))
}

fn boundary<F: Fn(usize) -> Vec<usize>>(
    members: &[usize],
    inside: &[bool],
    neighbors: F,
) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for &m in members {
        for v in neighbors(m) {
            if !inside[v] {
                edges.push((m, v));
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// The trajectories `agent` produces in `env`, located in `reference`
/// (a space enumerated from the same environment).
pub fn detect_trap_confinement<S: Scalar>(
    env: &EnvironmentSpec<S>,
    agent: &Agent,
    reference: &TrajectorySpace<S>,
) -> Result<Trap> {
    let env = env.with_horizon(reference.horizon())?;
    if &env != reference.env() {
        return Err(Error::InvalidTrap(format!(
            "reference space was built from `{}`, not `{}`",
            reference.env().name(),
            env.name()
        )));
    }
    let mut members = match agent {
        Agent::FrontPlanner => pareto_front(reference)?.front_ids,
        Agent::Policy { policy, seeds } => {
            let seeds = if policy.is_deterministic() {
                vec![seeds.first().copied().unwrap_or(0)]
            } else if seeds.is_empty() {
                return Err(Error::InvalidPolicy(format!(
                    "the {policy} policy is stochastic and needs at least one seed"
                )));
            } else {
                seeds.clone()
            };
            let prepared = policy.prepare(&env)?;
            seeds
                .par_iter()
                .map(|&seed| {
                    let run = sim::simulate_run(&env, &prepared, seed);
                    reference
                        .id_of(run.trajectory.actions())
                        .ok_or(Error::NotInReference {
                            horizon: reference.horizon(),
                        })
                })
                .collect::<Result<Vec<usize>>>()?
        }
    };
    members.sort_unstable();
    members.dedup();
    let mut inside = vec![false; reference.len()];
    for &m in &members {
        inside[m] = true;
    }
    let boundary_edges = boundary(&members, &inside, |u| reference.neighbors(u));
    let confinement_threshold = members
        .iter()
        .map(|&m| reference.items()[m].trajectory.max_state())
        .max();
    let mut trap = Trap {
        member_ids: members,
        witnesses: Vec::new(),
        boundary_edges,
        mode: TrapMode::Confinement,
        label: TaxonomyLabel::LocalBasin,
        confinement_threshold,
    };
    trap.label = classify_trap(reference, &trap, None);
    Ok(trap)
}

pub fn classify_trap<S: Scalar>(
    space: &TrajectorySpace<S>,
    trap: &Trap,
    action_counts: Option<&[u64]>,
) -> TaxonomyLabel {
    classify_trap_with(space, trap, action_counts, &TaxonomyConfig::default())
}

/// First matching rule of: attractor loop, narrow corridor, optimality
/// plateau, local basin. Action counts default to those of the members.
pub fn classify_trap_with<S: Scalar>(
    space: &TrajectorySpace<S>,
    trap: &Trap,
    action_counts: Option<&[u64]>,
    config: &TaxonomyConfig,
) -> TaxonomyLabel {
    let counts = match action_counts {
        Some(c) => c.to_vec(),
        None => space.action_counts(&trap.member_ids),
    };
    let inertia = behavioral_inertia(&counts_as_f64(&counts)).unwrap_or(0.0);
    if inertia >= config.loop_min_inertia
        && top_pair_share(space, &trap.member_ids) >= config.loop_min_share
    {
        return TaxonomyLabel::AttractorLoop;
    }

    let deltas = edge_degradations(space, trap);
    if let Some(min) = deltas.iter().copied().reduce(f64::min) {
        let limit = min * (1.0 + config.corridor_tolerance);
        if deltas.iter().filter(|&&d| d <= limit).count() <= config.corridor_max_exits {
            return TaxonomyLabel::NarrowCorridor;
        }
    }

    if trap.member_ids.len() >= config.plateau_min_members
        && max_spread(space, &trap.member_ids, config.plateau_max_spread)
            <= config.plateau_max_spread
    {
        return TaxonomyLabel::OptimalityPlateau;
    }
    TaxonomyLabel::LocalBasin
}

/// Share of member steps taken by the most common (state, action) pair.
fn top_pair_share<S: Scalar>(space: &TrajectorySpace<S>, members: &[usize]) -> f64 {
    let mut counts = std::collections::HashMap::<(usize, usize), u64>::new();
    let mut total = 0u64;
    for &m in members {
        let t = &space.items()[m].trajectory;
        for (&x, &a) in t.states().iter().zip(t.actions()) {
            *counts.entry((x, a)).or_default() += 1;
            total += 1;
        }
    }
    match counts.values().max() {
        Some(&top) if total > 0 => top as f64 / total as f64,
        _ => 0.0,
    }
}

/// Largest pairwise normalized distance between members, stopping early once
/// it exceeds `stop_above`.
fn max_spread<S: Scalar>(space: &TrajectorySpace<S>, members: &[usize], stop_above: f64) -> f64 {
    let norm = Normalizer::for_space(space, false);
    if norm.dims() == 0 {
        return 0.0;
    }
    let mut points: Vec<Vec<f64>> = members.iter().map(|&m| norm.point(space.cost(m))).collect();
    points.sort_by(|a, b| a.partial_cmp(b).expect("normalized costs are finite"));
    points.dedup();
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(euclid(a, b));
            if best > stop_above {
                return best;
            }
        }
    }
    best
}

/// Best scalarized value over `members`.
pub fn ceiling<S: Scalar>(
    space: &TrajectorySpace<S>,
    members: &[usize],
    f: &Scalarization<S>,
) -> Result<S> {
    let mut best: Option<S> = None;
    for &id in members {
        let v = f.value(&space.item(id)?.cost);
        if best.is_none_or(|b| v > b) {
            best = Some(v);
        }
    }
    best.ok_or(Error::Empty("trap members"))
}

/// Global ceiling of `env` minus the ceiling of what `agent` can reach,
/// over every trajectory of the environment's horizon.
pub fn ceiling_gap<S: Scalar>(
    env: &EnvironmentSpec<S>,
    agent: &Agent,
    f: &Scalarization<S>,
) -> Result<S> {
    let reference = enumerate_trajectories(env, None)?;
    ceiling_gap_in(&reference, agent, f)
}

/// [`ceiling_gap`] against an already enumerated reference space.
pub fn ceiling_gap_in<S: Scalar>(
    reference: &TrajectorySpace<S>,
    agent: &Agent,
    f: &Scalarization<S>,
) -> Result<S> {
    let trap = detect_trap_confinement(reference.env(), agent, reference)?;
    let all: Vec<usize> = (0..reference.len()).collect();
    Ok(ceiling(reference, &all, f)? - ceiling(reference, &trap.member_ids, f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{builtin_env, load_env, BuiltinEnv};
    use crate::scalar::Rational;

    fn space_of(variant: BuiltinEnv, horizon: usize) -> TrajectorySpace {
        enumerate_trajectories(&builtin_env(variant), Some(horizon)).unwrap()
    }

    #[test]
    fn two_basin_strict_trap() {
        let space = space_of(BuiltinEnv::TwoBasinFixture, 3);
        let traps = detect_traps_strict(&space).unwrap();
        assert_eq!(traps.len(), 1);
        let trap = &traps[0];
        assert_eq!(trap.member_ids, vec![0, 1, 2, 4]);
        assert_eq!(trap.witnesses, vec![7]);
        assert_eq!(
            trap.boundary_edges,
            vec![(1, 3), (1, 5), (2, 3), (2, 6), (4, 5), (4, 6)]
        );
        assert_eq!(trap.mode, TrapMode::Strict);
        assert_eq!(trap.label, TaxonomyLabel::LocalBasin);
        assert!(has_degradation_certificate(&space, trap).unwrap());
        for id in 0..8 {
            let local = is_locally_pareto_optimal(&space, id).unwrap();
            assert_eq!(local, [0, 1, 2, 4, 7].contains(&id), "id {id}");
        }
    }

    #[test]
    fn two_basin_exact() {
        let env = builtin_env::<Rational>(BuiltinEnv::TwoBasinFixture);
        let space = enumerate_trajectories(&env, None).unwrap();
        let traps = detect_traps_strict(&space).unwrap();
        assert_eq!(traps.len(), 1);
        assert_eq!(traps[0].member_ids, vec![0, 1, 2, 4]);
    }

    #[test]
    fn incomplete_space_is_rejected() {
        let env: EnvironmentSpec = builtin_env(BuiltinEnv::TwoBasinFixture);
        let t = crate::trajspace::Trajectory::replay(&env, vec![0, 0, 0]).unwrap();
        let space = TrajectorySpace::from_trajectories(&env, vec![t], 1).unwrap();
        assert!(matches!(
            detect_traps_strict(&space),
            Err(Error::IncompleteSpace)
        ));
    }

    #[test]
    fn no_traps_when_front_is_reachable() {
        // a4-detjump fronts are connected and every local optimum lies on them
        for horizon in 1..=5 {
            let space = space_of(BuiltinEnv::A4DeterministicJump, horizon);
            for trap in detect_traps_strict(&space).unwrap() {
                assert!(!trap.witnesses.is_empty());
                assert!(has_degradation_certificate(&space, &trap).unwrap());
            }
        }
    }

    #[test]
    fn pointwise_confinement_on_a4_detjump() {
        let env: EnvironmentSpec = builtin_env(BuiltinEnv::A4DeterministicJump);
        let space = enumerate_trajectories(&env, Some(6)).unwrap();
        let agent = Agent::Policy {
            policy: PolicySpec::pointwise(),
            seeds: vec![],
        };
        let trap = detect_trap_confinement(&env, &agent, &space).unwrap();
        assert_eq!(trap.member_ids, vec![0]);
        assert_eq!(trap.confinement_threshold, Some(0));
        assert_eq!(trap.boundary_edges.len(), 12);
        assert!(trap.witnesses.is_empty());
    }

    #[test]
    fn ceiling_gap_a4_detjump() {
        let env = builtin_env::<Rational>(BuiltinEnv::A4DeterministicJump)
            .with_horizon(6)
            .unwrap();
        let f = Scalarization::<Rational>::uniform(2);
        let pointwise = Agent::Policy {
            policy: PolicySpec::pointwise(),
            seeds: vec![0],
        };
        assert_eq!(
            ceiling_gap(&env, &pointwise, &f).unwrap(),
            Rational::new(11, 40)
        );
        assert_eq!(
            ceiling_gap(&env, &Agent::FrontPlanner, &f).unwrap(),
            Rational::new(0, 1)
        );
        let j1_only = Scalarization::new(vec![Rational::new(1, 1), Rational::new(0, 1)]).unwrap();
        assert_eq!(
            ceiling_gap(&env, &pointwise, &j1_only).unwrap(),
            Rational::new(0, 1)
        );
    }

    #[test]
    fn stochastic_policy_needs_seeds() {
        let env: EnvironmentSpec = builtin_env(BuiltinEnv::A4DeterministicJump);
        let space = enumerate_trajectories(&env, Some(3)).unwrap();
        let agent = Agent::Policy {
            policy: PolicySpec::random(),
            seeds: vec![],
        };
        assert!(matches!(
            detect_trap_confinement(&env, &agent, &space),
            Err(Error::InvalidPolicy(_))
        ));
        let agent = Agent::Policy {
            policy: PolicySpec::random(),
            seeds: (0..50).collect(),
        };
        let trap = detect_trap_confinement(&env, &agent, &space).unwrap();
        assert!(trap.len() > 1);
    }

    #[test]
    fn reference_must_match_environment() {
        let env: EnvironmentSpec = builtin_env(BuiltinEnv::A3Deterministic);
        let space = space_of(BuiltinEnv::A4DeterministicJump, 3);
        assert!(matches!(
            detect_trap_confinement(&env, &Agent::FrontPlanner, &space),
            Err(Error::InvalidTrap(_))
        ));
    }

    #[test]
    fn scalarization_validation() {
        assert!(Scalarization::<f64>::new(vec![0.5, 0.6]).is_err());
        assert!(Scalarization::<f64>::new(vec![-0.5, 1.5]).is_err());
        assert!(Scalarization::<f64>::new(vec![]).is_err());
        let f = Scalarization::<f64>::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(f.value(&CostVector::new(vec![4.0, 4.0])), -4.0);
        let r = Scalarization::<Rational>::from_f64(&[0.5, 0.5]).unwrap();
        assert_eq!(r, Scalarization::<Rational>::uniform(2));
    }

    #[test]
    fn ceiling_of_empty_set_fails() {
        let space = space_of(BuiltinEnv::TwoBasinFixture, 3);
        assert!(ceiling(&space, &[], &Scalarization::uniform(2)).is_err());
        assert!(ceiling(&space, &[99], &Scalarization::uniform(2)).is_err());
    }

    fn table_env(doc: &str) -> EnvironmentSpec {
        load_env(doc).unwrap()
    }

    #[test]
    fn attractor_loop_label() {
        let space = space_of(BuiltinEnv::TwoBasinFixture, 3);
        let trap = Trap {
            member_ids: vec![0],
            witnesses: vec![7],
            boundary_edges: vec![(0, 1), (0, 2), (0, 4)],
            mode: TrapMode::Strict,
            label: TaxonomyLabel::LocalBasin,
            confinement_threshold: None,
        };
        assert_eq!(
            classify_trap(&space, &trap, None),
            TaxonomyLabel::AttractorLoop
        );
        // balanced external statistics remove the inertia
        assert_ne!(
            classify_trap(&space, &trap, Some(&[5, 5])),
            TaxonomyLabel::AttractorLoop
        );
    }

    #[test]
    fn narrow_corridor_label() {
        let env = table_env(
            r#"{"name":"corridor","n_states":4,"horizon":2,"objectives":["j1","j2"],
                "actions":[
                  {"name":"a","transition":{"kind":"stay"},
                   "costs":[{"kind":"table","values":[1,1,1,1]},{"kind":"table","values":[1,1,1,1]}]},
                  {"name":"b","transition":{"kind":"increment"},
                   "costs":[{"kind":"table","values":[1.1,3,3,3]},{"kind":"table","values":[1,3,3,3]}]},
                  {"name":"c","transition":{"kind":"stay"},
                   "costs":[{"kind":"table","values":[4,4,4,4]},{"kind":"table","values":[0,0,0,0]}]}
                ]}"#,
        );
        let space = enumerate_trajectories(&env, None).unwrap();
        let trap = Trap {
            member_ids: vec![0],
            witnesses: vec![],
            boundary_edges: space.neighbors(0).into_iter().map(|v| (0, v)).collect(),
            mode: TrapMode::Confinement,
            label: TaxonomyLabel::LocalBasin,
            confinement_threshold: Some(0),
        };
        let config = TaxonomyConfig {
            loop_min_inertia: 2.0,
            ..TaxonomyConfig::default()
        };
        assert_eq!(
            classify_trap_with(&space, &trap, None, &config),
            TaxonomyLabel::NarrowCorridor
        );
    }

    #[test]
    fn corridor_needs_an_edge() {
        let space = space_of(BuiltinEnv::TwoBasinFixture, 3);
        let trap = Trap {
            member_ids: (0..8).collect(),
            witnesses: vec![],
            boundary_edges: vec![],
            mode: TrapMode::Confinement,
            label: TaxonomyLabel::LocalBasin,
            confinement_threshold: Some(3),
        };
        let config = TaxonomyConfig {
            loop_min_inertia: 2.0,
            ..TaxonomyConfig::default()
        };
        assert_eq!(
            classify_trap_with(&space, &trap, None, &config),
            TaxonomyLabel::LocalBasin
        );
    }
}
