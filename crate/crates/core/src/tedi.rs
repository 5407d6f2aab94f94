//! Trap Escape Difficulty Index: a weighted blend of escape distance,
//! structural constraint and behavioral inertia, each in `[0, 1]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trajspace::{CostVector, TrajectorySpace};
use crate::traps::{ceiling, Scalarization, Trap, TrapMode};

/// Per-coordinate min-max normalization over a whole trajectory space.
/// Coordinates with zero range carry no information and are dropped.
#[derive(Debug, Clone)]
pub(crate) struct Normalizer<S> {
    lo: Vec<S>,
    range: Vec<S>,
    kept: Vec<usize>,
}

impl<S: Scalar> Normalizer<S> {
    pub(crate) fn for_space(space: &TrajectorySpace<S>, warn: bool) -> Self {
        let m = space.env().num_objectives();
        let mut lo: Vec<S> = space.items()[0].cost.as_slice().to_vec();
        let mut hi = lo.clone();
        for c in space.costs() {
            for i in 0..m {
                if c[i] < lo[i] {
                    lo[i] = c[i];
                }
                if c[i] > hi[i] {
                    hi[i] = c[i];
                }
            }
        }
        let range: Vec<S> = hi.iter().zip(&lo).map(|(h, l)| *h - *l).collect();
        let kept: Vec<usize> = (0..m).filter(|&i| range[i] > S::zero()).collect();
        if warn {
            for i in (0..m).filter(|i| !kept.contains(i)) {
                log::warn!(
                    "objective `{}` is constant over the trajectory space and is ignored for normalization",
                    space.env().objectives()[i]
                );
            }
        }
        Self { lo, range, kept }
    }

    pub(crate) fn dims(&self) -> usize {
        self.kept.len()
    }

    pub(crate) fn point(&self, c: &CostVector<S>) -> Vec<f64> {
        self.kept
            .iter()
            .map(|&i| ((c[i] - self.lo[i]) / self.range[i]).to_f64_lossy())
            .collect()
    }

    /// Largest normalized increase in any objective when moving `from -> to`.
    pub(crate) fn degradation(&self, from: &CostVector<S>, to: &CostVector<S>) -> f64 {
        self.kept
            .iter()
            .map(|&i| ((to[i] - from[i]) / self.range[i]).to_f64_lossy())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn unique_points(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| a.partial_cmp(b).expect("normalized costs are finite"));
    points.dedup();
    points
}

/// Largest pairwise distance in a point cloud.
pub(crate) fn diameter(points: Vec<Vec<f64>>) -> f64 {
    let points = unique_points(points);
    let candidates = if points.first().is_some_and(|p| p.len() == 2) {
        convex_hull_2d(&points)
    } else {
        points
    };
    let mut best = 0.0f64;
    for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i + 1..] {
            best = best.max(euclid(a, b));
        }
    }
    best
}

/// Monotone chain hull of lexicographically sorted, deduplicated points.
fn convex_hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if points.len() < 3 {
        return points.to_vec();
    }
    let cross = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<Vec<f64>> = Vec::with_capacity(2 * points.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec<f64>>> = if pass == 0 {
            Box::new(points.iter())
        } else {
            Box::new(points.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

/// Normalized distance from the trap to the nearest escape target, as a
/// fraction of the diameter of the normalized cost cloud.
///
/// Targets are the witnesses of a strict trap, or the complement items whose
/// scalarized value beats the trap ceiling for a confinement trap. Without
/// such targets the distance is 0.
pub fn escape_distance<S: Scalar>(
    space: &TrajectorySpace<S>,
    trap: &Trap,
    f: &Scalarization<S>,
) -> Result<f64> {
    check_trap(space, trap)?;
    let targets: Vec<usize> = match trap.mode {
        TrapMode::Strict => {
            if trap.witnesses.is_empty() {
                return Err(Error::InvalidTrap("strict trap without witnesses".into()));
            }
            trap.witnesses.clone()
        }
        TrapMode::Confinement => {
            if trap.member_ids.len() == space.len() {
                return Err(Error::Empty("trap complement"));
            }
            let top = ceiling(space, &trap.member_ids, f)?;
            (0..space.len())
                .filter(|id| trap.member_ids.binary_search(id).is_err())
                .filter(|&id| f.value(space.cost(id)) > top)
                .collect()
        }
    };
    if targets.is_empty() {
        return Ok(0.0);
    }
    let norm = Normalizer::for_space(space, true);
    let diam = diameter(space.costs().map(|c| norm.point(c)).collect());
    if diam == 0.0 {
        return Ok(0.0);
    }
    let members: Vec<Vec<f64>> = unique_points(
        trap.member_ids
            .iter()
            .map(|&m| norm.point(space.cost(m)))
            .collect(),
    );
    let targets: Vec<Vec<f64>> =
        unique_points(targets.iter().map(|&t| norm.point(space.cost(t))).collect());
    let mut best = f64::INFINITY;
    for m in &members {
        for t in &targets {
            best = best.min(euclid(m, t));
        }
    }
    Ok((best / diam).clamp(0.0, 1.0))
}

/// Normalized degradation of every boundary edge, in edge order.
pub fn edge_degradations<S: Scalar>(space: &TrajectorySpace<S>, trap: &Trap) -> Vec<f64> {
    let norm = Normalizer::for_space(space, false);
    trap.boundary_edges
        .iter()
        .map(|&(inside, outside)| norm.degradation(space.cost(inside), space.cost(outside)))
        .collect()
}

/// Mean over boundary edges of the (capped) cost of leaving; 1 when the trap
/// has no boundary at all.
pub fn structural_constraint<S: Scalar>(space: &TrajectorySpace<S>, trap: &Trap) -> Result<f64> {
    check_trap(space, trap)?;
    let deltas = edge_degradations(space, trap);
    if deltas.is_empty() {
        return Ok(1.0);
    }
    Ok(deltas.iter().map(|d| d.min(1.0)).sum::<f64>() / deltas.len() as f64)
}

/// One minus the normalized entropy of an action-frequency vector.
pub fn behavioral_inertia(frequencies: &[f64]) -> Result<f64> {
    if frequencies.is_empty() {
        return Err(Error::Empty("action frequencies"));
    }
    if frequencies.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidArgument(
            "action frequencies must be finite and non-negative".into(),
        ));
    }
    let total: f64 = frequencies.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroFrequencies);
    }
    if frequencies.len() == 1 {
        return Ok(1.0);
    }
    let entropy: f64 = frequencies
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| {
            let q = p / total;
            -q * q.ln()
        })
        .sum();
    Ok((1.0 - entropy / (frequencies.len() as f64).ln()).clamp(0.0, 1.0))
}

pub(crate) fn counts_as_f64(counts: &[u64]) -> Vec<f64> {
    counts.iter().map(|&c| c as f64).collect()
}

/// Non-negative component weights, normalized to sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TediWeights {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl TediWeights {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let all = [alpha, beta, gamma];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and non-negative, got {alpha},{beta},{gamma}"
            )));
        }
        let sum = alpha + beta + gamma;
        if sum == 0.0 {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        Ok(Self {
            alpha: alpha / sum,
            beta: beta / sum,
            gamma: gamma / sum,
        })
    }

    /// Like [`TediWeights::new`] but rejects weights that do not already sum
    /// to one.
    pub fn strict(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let sum = alpha + beta + gamma;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Self::new(alpha, beta, gamma)
    }

    pub fn uniform() -> Self {
        Self {
            alpha: 1.0 / 3.0,
            beta: 1.0 / 3.0,
            gamma: 1.0 / 3.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for TediWeights {
    fn default() -> Self {
        Self::uniform()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EscapeCategory {
    Trivial,
    Moderate,
    Hard,
    PracticallyInescapable,
}

impl EscapeCategory {
    /// Thresholds 0.25, 0.5 and 0.75; a boundary value falls in the harder band.
    pub fn from_value(value: f64) -> Self {
        if value < 0.25 {
            EscapeCategory::Trivial
        } else if value < 0.5 {
            EscapeCategory::Moderate
        } else if value < 0.75 {
            EscapeCategory::Hard
        } else {
            EscapeCategory::PracticallyInescapable
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EscapeCategory::Trivial => "Trivial",
            EscapeCategory::Moderate => "Moderate",
            EscapeCategory::Hard => "Hard",
            EscapeCategory::PracticallyInescapable => "PracticallyInescapable",
        }
    }
}

impl fmt::Display for EscapeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TediReport {
    pub escape_distance: f64,
    pub structural: f64,
    pub inertia: f64,
    pub weights: TediWeights,
    pub value: f64,
    pub category: EscapeCategory,
}

/// Combines precomputed components.
pub fn tedi(
    escape_distance: f64,
    structural: f64,
    inertia: f64,
    weights: TediWeights,
) -> Result<TediReport> {
    for (name, value) in [
        ("escape_distance", escape_distance),
        ("structural", structural),
        ("inertia", inertia),
    ] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::ComponentOutOfRange { name, value });
        }
    }
    let value =
        weights.alpha * escape_distance + weights.beta * structural + weights.gamma * inertia;
    let value = value.clamp(0.0, 1.0);
    Ok(TediReport {
        escape_distance,
        structural,
        inertia,
        weights,
        value,
        category: EscapeCategory::from_value(value),
    })
}

/// Computes all three components for `trap`. Action frequencies default to
/// the action counts over the trap members.
pub fn tedi_for_trap<S: Scalar>(
    space: &TrajectorySpace<S>,
    trap: &Trap,
    action_frequencies: Option<&[f64]>,
    weights: TediWeights,
    f: &Scalarization<S>,
) -> Result<TediReport> {
    let d = escape_distance(space, trap, f)?;
    let s = structural_constraint(space, trap)?;
    let b = match action_frequencies {
        Some(freq) => behavioral_inertia(freq)?,
        None => behavioral_inertia(&counts_as_f64(&space.action_counts(&trap.member_ids)))?,
    };
    tedi(d, s, b, weights)
}

fn check_trap<S: Scalar>(space: &TrajectorySpace<S>, trap: &Trap) -> Result<()> {
    if trap.member_ids.is_empty() {
        return Err(Error::InvalidTrap("trap has no members".into()));
    }
    for &id in trap.member_ids.iter().chain(&trap.witnesses) {
        space.item(id)?;
    }
    for &(a, b) in &trap.boundary_edges {
        space.item(a)?;
        space.item(b)?;
    }
    Ok(())
}
