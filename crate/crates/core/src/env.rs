//! Finite-horizon environments: states `0..=N`, a fixed action list, per-action
//! transition rules and time-invariant per-objective step costs.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trajspace::CostVector;

/// How an action moves the state. `top` below is the largest state index `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionRule {
    /// `x -> x`
    Stay,
    /// `x -> min(x + 1, N)`
    IncrementClamped,
    /// `x -> min(x + delta, N)`, applied with the environment's restructure
    /// probability; otherwise the state is unchanged.
    JumpFixedClamped { delta: usize },
    /// `x -> uniform integer in [x + 1, N]` when `x < N`, else `x`.
    JumpRandomAbove,
}

impl TransitionRule {
    pub fn is_deterministic(&self, restructure_prob: f64) -> bool {
        match self {
            TransitionRule::Stay | TransitionRule::IncrementClamped => true,
            TransitionRule::JumpFixedClamped { .. } => restructure_prob >= 1.0,
            TransitionRule::JumpRandomAbove => false,
        }
    }

    /// Successor when it does not depend on randomness.
    pub fn deterministic_next(
        &self,
        state: usize,
        top: usize,
        restructure_prob: f64,
    ) -> Option<usize> {
        match *self {
            TransitionRule::Stay => Some(state),
            TransitionRule::IncrementClamped => Some((state + 1).min(top)),
            TransitionRule::JumpFixedClamped { delta } if restructure_prob >= 1.0 => {
                Some((state + delta).min(top))
            }
            TransitionRule::JumpFixedClamped { .. } => None,
            TransitionRule::JumpRandomAbove if state >= top => Some(state),
            TransitionRule::JumpRandomAbove => None,
        }
    }

    /// Whether `next` is a possible successor of `state`.
    pub fn admits(&self, state: usize, next: usize, top: usize, restructure_prob: f64) -> bool {
        match *self {
            TransitionRule::Stay => next == state,
            TransitionRule::IncrementClamped => next == (state + 1).min(top),
            TransitionRule::JumpFixedClamped { delta } => {
                let jumped = (state + delta).min(top);
                (restructure_prob > 0.0 && next == jumped)
                    || (restructure_prob < 1.0 && next == state)
            }
            TransitionRule::JumpRandomAbove => {
                if state >= top {
                    next == state
                } else {
                    next > state && next <= top
                }
            }
        }
    }

    /// Samples a successor. Only the stochastic rules draw from `rng`.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        state: usize,
        top: usize,
        restructure_prob: f64,
        rng: &mut R,
    ) -> usize {
        match *self {
            TransitionRule::Stay => state,
            TransitionRule::IncrementClamped => (state + 1).min(top),
            TransitionRule::JumpFixedClamped { delta } => {
                if restructure_prob >= 1.0 || rng.random::<f64>() < restructure_prob {
                    (state + delta).min(top)
                } else {
                    state
                }
            }
            TransitionRule::JumpRandomAbove => {
                if state < top {
                    rng.random_range(state + 1..=top)
                } else {
                    state
                }
            }
        }
    }
}

/// Instantaneous cost of one objective as a function of the current state.
#[derive(Debug, Clone, PartialEq)]
pub enum CostRule<S = f64> {
    /// `a + b * x`
    Affine { a: S, b: S },
    /// `a / (x + 1)`
    Reciprocal { a: S },
    /// `values[x]`, one entry per state.
    Table { values: Vec<S> },
}

impl<S: Scalar> CostRule<S> {
    pub fn eval(&self, state: usize) -> S {
        match self {
            CostRule::Affine { a, b } => *a + *b * S::from_index(state),
            CostRule::Reciprocal { a } => *a / S::from_index(state + 1),
            CostRule::Table { values } => values[state],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionSpec<S = f64> {
    pub name: String,
    pub transition: TransitionRule,
    pub costs: Vec<CostRule<S>>,
}

impl<S: Scalar> ActionSpec<S> {
    pub fn new(
        name: impl Into<String>,
        transition: TransitionRule,
        costs: Vec<CostRule<S>>,
    ) -> Self {
        Self {
            name: name.into(),
            transition,
            costs,
        }
    }
}

/// A validated environment. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentSpec<S = f64> {
    name: String,
    n_states: usize,
    horizon: usize,
    objectives: Vec<String>,
    actions: Vec<ActionSpec<S>>,
    restructure_prob: f64,
    deterministic: bool,
}

impl<S: Scalar> EnvironmentSpec<S> {
    pub fn new(
        name: impl Into<String>,
        n_states: usize,
        horizon: usize,
        objectives: Vec<String>,
        actions: Vec<ActionSpec<S>>,
        restructure_prob: f64,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::schema("name", "must be non-empty"));
        }
        if n_states < 2 {
            return Err(Error::schema(
                "n_states",
                format!("must be >= 2, got {n_states}"),
            ));
        }
        if horizon < 1 {
            return Err(Error::schema("horizon", "must be >= 1"));
        }
        if objectives.is_empty() {
            return Err(Error::schema(
                "objectives",
                "at least one objective is required",
            ));
        }
        if actions.is_empty() {
            return Err(Error::schema("actions", "at least one action is required"));
        }
        if !(0.0..=1.0).contains(&restructure_prob) {
            return Err(Error::schema(
                "restructure_prob",
                format!("must lie in [0, 1], got {restructure_prob}"),
            ));
        }
        let top = n_states - 1;
        for (i, action) in actions.iter().enumerate() {
            let at = |field: &str| format!("actions[{i}].{field}");
            if action.name.is_empty() {
                return Err(Error::schema(at("name"), "must be non-empty"));
            }
            if actions[..i].iter().any(|other| other.name == action.name) {
                return Err(Error::schema(
                    at("name"),
                    format!("duplicate action name `{}`", action.name),
                ));
            }
            if let TransitionRule::JumpFixedClamped { delta } = action.transition {
                if delta == 0 || delta > top {
                    return Err(Error::schema(
                        at("transition.delta"),
                        format!("must lie in [1, {top}], got {delta}"),
                    ));
                }
            }
            if action.costs.len() != objectives.len() {
                return Err(Error::schema(
                    at("costs"),
                    format!(
                        "expected {} cost rules, got {}",
                        objectives.len(),
                        action.costs.len()
                    ),
                ));
            }
            for (j, rule) in action.costs.iter().enumerate() {
                let field = at(&format!("costs[{j}]"));
                validate_cost_rule(rule, n_states, &field)?;
            }
        }
        let deterministic = actions
            .iter()
            .all(|a| a.transition.is_deterministic(restructure_prob));
        Ok(Self {
            name,
            n_states,
            horizon,
            objectives,
            actions,
            restructure_prob,
            deterministic,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    /// Largest state index `N`.
    pub fn top_state(&self) -> usize {
        self.n_states - 1
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn objectives(&self) -> &[String] {
        &self.objectives
    }

    pub fn actions(&self) -> &[ActionSpec<S>] {
        &self.actions
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn restructure_prob(&self) -> f64 {
        self.restructure_prob
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions
            .iter()
            .position(|a| a.name.eq_ignore_ascii_case(name))
    }

    /// Same environment with a different horizon.
    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        if horizon < 1 {
            return Err(Error::schema("horizon", "must be >= 1"));
        }
        Ok(Self {
            horizon,
            ..self.clone()
        })
    }

    fn check_indices(&self, state: usize, action: usize) -> Result<()> {
        if state >= self.n_states {
            return Err(Error::IndexOutOfRange {
                what: "state",
                index: state,
                limit: self.n_states,
            });
        }
        if action >= self.actions.len() {
            return Err(Error::IndexOutOfRange {
                what: "action",
                index: action,
                limit: self.actions.len(),
            });
        }
        Ok(())
    }

    /// Next state under `action`. `rng` is drawn from only by stochastic rules.
    pub fn transition<R: Rng + ?Sized>(
        &self,
        state: usize,
        action: usize,
        rng: &mut R,
    ) -> Result<usize> {
        self.check_indices(state, action)?;
        Ok(self.actions[action].transition.sample(
            state,
            self.top_state(),
            self.restructure_prob,
            rng,
        ))
    }

    /// Next state for a deterministic action; `Error::Stochastic` otherwise.
    pub fn next_state(&self, state: usize, action: usize) -> Result<usize> {
        self.check_indices(state, action)?;
        self.actions[action]
            .transition
            .deterministic_next(state, self.top_state(), self.restructure_prob)
            .ok_or_else(|| Error::Stochastic(self.name.clone()))
    }

    pub(crate) fn admits(&self, state: usize, action: usize, next: usize) -> bool {
        next < self.n_states
            && self.actions[action].transition.admits(
                state,
                next,
                self.top_state(),
                self.restructure_prob,
            )
    }

    /// Instantaneous cost vector of taking `action` in `state`.
    pub fn step_cost(&self, state: usize, action: usize) -> Result<CostVector<S>> {
        self.check_indices(state, action)?;
        Ok(self.step_cost_unchecked(state, action))
    }

    pub(crate) fn step_cost_unchecked(&self, state: usize, action: usize) -> CostVector<S> {
        CostVector::new(
            self.actions[action]
                .costs
                .iter()
                .map(|rule| rule.eval(state))
                .collect(),
        )
    }

    /// The builtin environment for `variant`.
    pub fn builtin(variant: BuiltinEnv) -> Self {
        builtin_env(variant)
    }

    /// JSON document in the environment file schema. Scalars are written as
    /// `f64`, so exact rationals lose exactness here.
    pub fn to_json(&self) -> String {
        let doc = EnvDoc {
            name: self.name.clone(),
            n_states: self.n_states as i64,
            horizon: self.horizon as i64,
            objectives: self.objectives.clone(),
            restructure_prob: Some(self.restructure_prob),
            actions: self.actions.iter().map(ActionDoc::from_spec).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("environment document serializes")
    }
}

fn validate_cost_rule<S: Scalar>(rule: &CostRule<S>, n_states: usize, field: &str) -> Result<()> {
    let top = S::from_index(n_states - 1);
    match rule {
        CostRule::Affine { a, b } => {
            if !a.is_finite_value() || !b.is_finite_value() {
                return Err(Error::schema(field, "affine coefficients must be finite"));
            }
            // linear in x, so the endpoints bound the whole range
            if *a < S::zero() || *a + *b * top < S::zero() {
                return Err(Error::schema(
                    field,
                    format!(
                        "affine cost {a} + {b}*x is negative within states 0..={}",
                        n_states - 1
                    ),
                ));
            }
        }
        CostRule::Reciprocal { a } => {
            if !a.is_finite_value() {
                return Err(Error::schema(
                    field,
                    "reciprocal coefficient must be finite",
                ));
            }
        }
        CostRule::Table { values } => {
            if values.len() != n_states {
                return Err(Error::schema(
                    format!("{field}.values"),
                    format!(
                        "table length {} does not match n_states {n_states}",
                        values.len()
                    ),
                ));
            }
            if values.iter().any(|v| !v.is_finite_value()) {
                return Err(Error::schema(
                    format!("{field}.values"),
                    "table entries must be finite",
                ));
            }
        }
    }
    Ok(())
}

/// The builtin toy models and the two-basin trap fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinEnv {
    /// Refine/Advance/Restructure with constant Refine cost and a
    /// deterministic jump of two states.
    A3Deterministic,
    /// Exploit/Explore/Restructure with the random upward restructure jump.
    A4Stochastic,
    /// A4 costs with the deterministic jump of two states (enumerable).
    A4DeterministicJump,
    /// Two actions, horizon 3, accumulated cost determined by the number of
    /// `B` actions: (2,2), (1.5,3), (3,1.5), (1,1).
    TwoBasinFixture,
}

impl BuiltinEnv {
    pub const ALL: [BuiltinEnv; 4] = [
        BuiltinEnv::A3Deterministic,
        BuiltinEnv::A4Stochastic,
        BuiltinEnv::A4DeterministicJump,
        BuiltinEnv::TwoBasinFixture,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinEnv::A3Deterministic => "a3",
            BuiltinEnv::A4Stochastic => "a4",
            BuiltinEnv::A4DeterministicJump => "a4-detjump",
            BuiltinEnv::TwoBasinFixture => "two-basin",
        }
    }
}

impl fmt::Display for BuiltinEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinEnv {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinEnv::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnknownBuiltin(s.to_string()))
    }
}

fn r<S: Scalar>(num: i64, den: i64) -> S {
    S::from_ratio(num, den)
}

fn affine<S: Scalar>(a: S, b: S) -> CostRule<S> {
    CostRule::Affine { a, b }
}

/// Exploit and Explore of the quantitative toy model. The printed costs
/// `0.5 + 0.3(5 - x)` and `1.0 + 0.4(5 - x)` are stored as `a + b*x`.
fn toy_actions<S: Scalar>(
    exploit_slope: S,
    names: [&str; 3],
    restructure: TransitionRule,
) -> Vec<ActionSpec<S>> {
    vec![
        ActionSpec::new(
            names[0],
            TransitionRule::Stay,
            vec![
                affine(r(1, 10), exploit_slope),
                CostRule::Reciprocal { a: S::one() },
            ],
        ),
        ActionSpec::new(
            names[1],
            TransitionRule::IncrementClamped,
            vec![affine(r(8, 10), S::zero()), affine(r(2, 1), r(-3, 10))],
        ),
        ActionSpec::new(
            names[2],
            restructure,
            vec![affine(r(2, 1), S::zero()), affine(r(3, 1), r(-4, 10))],
        ),
    ]
}

/// Builds one of the builtin environments.
pub fn builtin_env<S: Scalar>(variant: BuiltinEnv) -> EnvironmentSpec<S> {
    let two_objectives = || vec!["immediate".to_string(), "opportunity".to_string()];
    let jump2 = TransitionRule::JumpFixedClamped { delta: 2 };
    let a4_names = ["Exploit", "Explore", "Restructure"];
    let (n_states, horizon, objectives, actions) = match variant {
        BuiltinEnv::A3Deterministic => (
            6,
            30,
            two_objectives(),
            toy_actions(S::zero(), ["Refine", "Advance", "Restructure"], jump2),
        ),
        BuiltinEnv::A4Stochastic => (
            6,
            30,
            two_objectives(),
            toy_actions(r(5, 100), a4_names, TransitionRule::JumpRandomAbove),
        ),
        BuiltinEnv::A4DeterministicJump => (
            6,
            30,
            two_objectives(),
            toy_actions(r(5, 100), a4_names, jump2),
        ),
        BuiltinEnv::TwoBasinFixture => {
            // State counts the B actions taken so far. Costs are tabled so that
            // every ordering with the same number of B's accumulates the same
            // totals; the entries at state 3 are never charged within T = 3.
            let a_cost = || CostRule::Table {
                values: vec![r(2, 3); 4],
            };
            let b_costs = vec![
                CostRule::Table {
                    values: vec![r(1, 6), r(13, 6), r(-4, 3), S::zero()],
                },
                CostRule::Table {
                    values: vec![r(5, 3), r(-5, 6), r(1, 6), S::zero()],
                },
            ];
            (
                4,
                3,
                vec!["j1".to_string(), "j2".to_string()],
                vec![
                    ActionSpec::new("A", TransitionRule::Stay, vec![a_cost(), a_cost()]),
                    ActionSpec::new("B", TransitionRule::IncrementClamped, b_costs),
                ],
            )
        }
    };
    EnvironmentSpec::new(variant.name(), n_states, horizon, objectives, actions, 1.0)
        .expect("builtin environments are valid")
}

// JSON document schema.

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvDoc {
    name: String,
    n_states: i64,
    horizon: i64,
    objectives: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    restructure_prob: Option<f64>,
    actions: Vec<ActionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionDoc {
    name: String,
    transition: TransitionDoc,
    costs: Vec<CostDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
}

impl ActionDoc {
    fn from_spec<S: Scalar>(action: &ActionSpec<S>) -> Self {
        let transition = match action.transition {
            TransitionRule::Stay => TransitionDoc {
                kind: "stay".into(),
                delta: None,
            },
            TransitionRule::IncrementClamped => TransitionDoc {
                kind: "increment".into(),
                delta: None,
            },
            TransitionRule::JumpFixedClamped { delta } => TransitionDoc {
                kind: "jump_fixed".into(),
                delta: Some(delta as i64),
            },
            TransitionRule::JumpRandomAbove => TransitionDoc {
                kind: "jump_random_above".into(),
                delta: None,
            },
        };
        let costs = action
            .costs
            .iter()
            .map(|rule| match rule {
                CostRule::Affine { a, b } => CostDoc {
                    kind: "affine".into(),
                    a: Some(a.to_f64_lossy()),
                    b: Some(b.to_f64_lossy()),
                    values: None,
                },
                CostRule::Reciprocal { a } => CostDoc {
                    kind: "reciprocal".into(),
                    a: Some(a.to_f64_lossy()),
                    b: None,
                    values: None,
                },
                CostRule::Table { values } => CostDoc {
                    kind: "table".into(),
                    a: None,
                    b: None,
                    values: Some(values.iter().map(|v| v.to_f64_lossy()).collect()),
                },
            })
            .collect();
        ActionDoc {
            name: action.name.clone(),
            transition,
            costs,
        }
    }
}

fn scalar_from<S: Scalar>(value: f64, field: &str) -> Result<S> {
    if !value.is_finite() {
        return Err(Error::schema(field, "must be a finite number"));
    }
    S::from_f64(value).ok_or_else(|| Error::schema(field, format!("{value} is not representable")))
}

fn non_negative(value: i64, field: &str) -> Result<usize> {
    usize::try_from(value)
        .map_err(|_| Error::schema(field, format!("must be non-negative, got {value}")))
}

fn transition_from_doc(doc: &TransitionDoc, field: &str) -> Result<TransitionRule> {
    let rule = match doc.kind.as_str() {
        "stay" => TransitionRule::Stay,
        "increment" => TransitionRule::IncrementClamped,
        "jump_random_above" => TransitionRule::JumpRandomAbove,
        "jump_fixed" => {
            let delta = doc.delta.ok_or_else(|| {
                Error::schema(format!("{field}.delta"), "required for jump_fixed")
            })?;
            return Ok(TransitionRule::JumpFixedClamped {
                delta: non_negative(delta, &format!("{field}.delta"))?,
            });
        }
        other => {
            return Err(Error::schema(
                format!("{field}.kind"),
                format!("unknown transition kind `{other}`"),
            ))
        }
    };
    if doc.delta.is_some() {
        return Err(Error::schema(
            format!("{field}.delta"),
            format!("not allowed for transition kind `{}`", doc.kind),
        ));
    }
    Ok(rule)
}

fn cost_from_doc<S: Scalar>(doc: &CostDoc, field: &str) -> Result<CostRule<S>> {
    let require = |value: Option<f64>, key: &str| -> Result<S> {
        let name = format!("{field}.{key}");
        let v = value
            .ok_or_else(|| Error::schema(&name, format!("required for `{}` costs", doc.kind)))?;
        scalar_from(v, &name)
    };
    let forbid = |present: bool, key: &str| -> Result<()> {
        if present {
            Err(Error::schema(
                format!("{field}.{key}"),
                format!("not allowed for `{}` costs", doc.kind),
            ))
        } else {
            Ok(())
        }
    };
    match doc.kind.as_str() {
        "affine" => {
            forbid(doc.values.is_some(), "values")?;
            Ok(CostRule::Affine {
                a: require(doc.a, "a")?,
                b: require(doc.b, "b")?,
            })
        }
        "reciprocal" => {
            forbid(doc.b.is_some(), "b")?;
            forbid(doc.values.is_some(), "values")?;
            Ok(CostRule::Reciprocal {
                a: require(doc.a, "a")?,
            })
        }
        "table" => {
            forbid(doc.a.is_some(), "a")?;
            forbid(doc.b.is_some(), "b")?;
            let name = format!("{field}.values");
            let values = doc
                .values
                .as_ref()
                .ok_or_else(|| Error::schema(&name, "required for `table` costs"))?;
            let values = values
                .iter()
                .map(|&v| scalar_from(v, &name))
                .collect::<Result<Vec<S>>>()?;
            Ok(CostRule::Table { values })
        }
        other => Err(Error::schema(
            format!("{field}.kind"),
            format!("unknown cost kind `{other}`"),
        )),
    }
}

/// Parses and validates an environment document (strict: unknown keys are
/// rejected).
pub fn load_env<S: Scalar>(document: &str) -> Result<EnvironmentSpec<S>> {
    let doc: EnvDoc = serde_json::from_str(document)?;
    let n_states = non_negative(doc.n_states, "n_states")?;
    let horizon = non_negative(doc.horizon, "horizon")?;
    let actions = doc
        .actions
        .iter()
        .enumerate()
        .map(|(i, action)| {
            let field = format!("actions[{i}]");
            let transition =
                transition_from_doc(&action.transition, &format!("{field}.transition"))?;
            let costs = action
                .costs
                .iter()
                .enumerate()
                .map(|(j, c)| cost_from_doc(c, &format!("{field}.costs[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(ActionSpec::new(action.name.clone(), transition, costs))
        })
        .collect::<Result<Vec<_>>>()?;
    EnvironmentSpec::new(
        doc.name,
        n_states,
        horizon,
        doc.objectives,
        actions,
        doc.restructure_prob.unwrap_or(1.0),
    )
}
