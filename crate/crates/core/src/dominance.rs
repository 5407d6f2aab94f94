//! Trajectory dominance and exact Pareto fronts over finite trajectory sets.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::env::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trajspace::{enumerate_trajectories, CostVector, TrajectorySpace};

/// Outcome of comparing two cost vectors under componentwise minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Dominates,
    DominatedBy,
    Equal,
    Incomparable,
}

pub(crate) fn compare_slices<S: Scalar>(a: &[S], b: &[S]) -> Dominance {
    let mut a_better = false;
    let mut b_better = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            a_better = true;
        } else if y < x {
            b_better = true;
        }
        if a_better && b_better {
            return Dominance::Incomparable;
        }
    }
    match (a_better, b_better) {
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::DominatedBy,
        (false, false) => Dominance::Equal,
        (true, true) => Dominance::Incomparable,
    }
}

pub(crate) fn dominates_slices<S: Scalar>(a: &[S], b: &[S]) -> bool {
    compare_slices(a, b) == Dominance::Dominates
}

fn check_len<S: Scalar>(a: &CostVector<S>, b: &CostVector<S>) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

pub fn compare<S: Scalar>(a: &CostVector<S>, b: &CostVector<S>) -> Result<Dominance> {
    check_len(a, b)?;
    Ok(compare_slices(a.as_slice(), b.as_slice()))
}

/// `a <= b` in every component and `a < b` in at least one.
pub fn dominates<S: Scalar>(a: &CostVector<S>, b: &CostVector<S>) -> Result<bool> {
    Ok(compare(a, b)? == Dominance::Dominates)
}

/// Non-dominated ids plus a dominating witness for every other id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrontResult {
    /// Sorted ascending.
    pub front_ids: Vec<usize>,
    /// For each dominated id, the lowest-id front member dominating it.
    pub dominated_by: BTreeMap<usize, usize>,
}

impl FrontResult {
    pub fn is_on_front(&self, id: usize) -> bool {
        self.front_ids.binary_search(&id).is_ok()
    }

    pub fn len(&self) -> usize {
        self.front_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.front_ids.is_empty()
    }
}

/// Exact front of a list of cost vectors (ids are list positions).
///
/// Items are visited in lexicographic cost order. Anything that dominates an
/// item precedes it in that order, and by transitivity some front member
/// dominates every dominated item, so each item only has to be checked
/// against the front found so far.
pub fn pareto_front_costs<S: Scalar>(costs: &[CostVector<S>]) -> Result<FrontResult> {
    let first = costs.first().ok_or(Error::Empty("cost set"))?;
    for c in costs {
        check_len(first, c)?;
    }
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&i, &j| {
        costs[i]
            .as_slice()
            .partial_cmp(costs[j].as_slice())
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut front: Vec<usize> = Vec::new();
    let mut dominated_by = BTreeMap::new();
    for &i in &order {
        let witness = front
            .iter()
            .copied()
            .filter(|&f| dominates_slices(costs[f].as_slice(), costs[i].as_slice()))
            .min();
        match witness {
            Some(w) => {
                dominated_by.insert(i, w);
            }
            None => front.push(i),
        }
    }
    front.sort_unstable();
    Ok(FrontResult {
        front_ids: front,
        dominated_by,
    })
}

/// Trajectory-Pareto optimal items of `space`.
pub fn pareto_front<S: Scalar>(space: &TrajectorySpace<S>) -> Result<FrontResult> {
    if space.is_empty() {
        return Err(Error::Empty("trajectory space"));
    }
    let costs: Vec<CostVector<S>> = space.costs().cloned().collect();
    pareto_front_costs(&costs)
}

/// Connected components of the front under the space's epsilon-adjacency,
/// using only front members as intermediate nodes.
pub fn front_components<S: Scalar>(
    space: &TrajectorySpace<S>,
    front: &FrontResult,
) -> Vec<Vec<usize>> {
    space.connected_components(&front.front_ids)
}

/// Exhaustive trajectory-dominant planning: enumerates every action sequence
/// and keeps those no other sequence dominates.
pub fn plan_front<S: Scalar>(
    env: &EnvironmentSpec<S>,
) -> Result<(TrajectorySpace<S>, FrontResult)> {
    let space = enumerate_trajectories(env, None)?;
    let front = pareto_front(&space)?;
    Ok((space, front))
}
