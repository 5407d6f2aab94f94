//! CSV and JSON writers for analysis outputs.
//!
//! Scalars are written with their `Display` form, which for floats is the
//! shortest string that parses back to the same value.

use std::io::Write;

use serde_json::{json, Value};

use crate::dominance::FrontResult;
use crate::env::EnvironmentSpec;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::sim::{BatchStats, ComparisonReport};
use crate::tedi::TediReport;
use crate::trajspace::{CostAccumulator, Trajectory, TrajectorySpace};
use crate::traps::{ceiling, Scalarization, Trap};

fn objective_headers<S: Scalar>(
    env: &EnvironmentSpec<S>,
    prefix: &str,
    suffix: &str,
) -> Vec<String> {
    (1..=env.num_objectives())
        .map(|i| format!("{prefix}{i}{suffix}"))
        .collect()
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// Streams per-step trajectory rows followed by one summary row per run
/// (`step = -1`, final state, accumulated totals).
pub struct TrajectoryWriter<'e, W: Write, S> {
    out: csv::Writer<W>,
    env: &'e EnvironmentSpec<S>,
    with_policy: bool,
}

impl<'e, W: Write, S: Scalar> TrajectoryWriter<'e, W, S> {
    pub fn new(out: W, env: &'e EnvironmentSpec<S>, with_policy: bool) -> Result<Self> {
        let mut out = csv::Writer::from_writer(out);
        let mut header: Vec<String> = Vec::new();
        if with_policy {
            header.push("policy".into());
        }
        header.extend(["run_id", "step", "state", "action_name"].map(String::from));
        header.extend(objective_headers(env, "l", ""));
        header.extend(objective_headers(env, "J", "_cum"));
        out.write_record(&header)?;
        Ok(Self {
            out,
            env,
            with_policy,
        })
    }

    pub fn write_run(&mut self, policy: &str, run_id: usize, traj: &Trajectory) -> Result<()> {
        let env = self.env;
        let prefix = |row: &mut Vec<String>| {
            if self.with_policy {
                row.push(policy.to_string());
            }
            row.push(run_id.to_string());
        };
        let mut acc = CostAccumulator::new(env.num_objectives());
        for (t, (&x, &a)) in traj.states().iter().zip(traj.actions()).enumerate() {
            let step = env.step_cost(x, a)?;
            acc.add(&step);
            let mut row = Vec::new();
            prefix(&mut row);
            row.extend([t.to_string(), x.to_string(), env.actions()[a].name.clone()]);
            row.extend(step.iter().map(ToString::to_string));
            row.extend(acc.total().iter().map(ToString::to_string));
            self.out.write_record(&row)?;
        }
        let mut row = Vec::new();
        prefix(&mut row);
        row.extend([
            "-1".to_string(),
            traj.final_state().to_string(),
            String::new(),
        ]);
        row.extend(std::iter::repeat_n(String::new(), env.num_objectives()));
        row.extend(acc.total().iter().map(ToString::to_string));
        self.out.write_record(&row)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

fn policy_prefix(with_policy: bool, name: &str) -> Vec<String> {
    if with_policy {
        vec![name.to_string()]
    } else {
        Vec::new()
    }
}

fn header(with_policy: bool, columns: &[&str]) -> Vec<String> {
    let mut h = policy_prefix(with_policy, "policy");
    h.extend(columns.iter().map(|c| c.to_string()));
    h
}

/// `final_state,count,frequency`, one block per batch.
pub fn write_stats_csv<W: Write, S: Scalar>(
    out: W,
    batches: &[&BatchStats<S>],
    with_policy: bool,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(with_policy, &["final_state", "count", "frequency"]))?;
    for b in batches {
        let n = b.num_runs() as f64;
        for (state, &count) in b.final_state_histogram.iter().enumerate() {
            let mut row = policy_prefix(with_policy, b.policy.name());
            row.extend([
                state.to_string(),
                count.to_string(),
                (count as f64 / n).to_string(),
            ]);
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `action_name,count,frequency`, one block per batch.
pub fn write_actions_csv<W: Write, S: Scalar>(
    out: W,
    env: &EnvironmentSpec<S>,
    batches: &[&BatchStats<S>],
    with_policy: bool,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(with_policy, &["action_name", "count", "frequency"]))?;
    for b in batches {
        for ((action, &count), freq) in env
            .actions()
            .iter()
            .zip(&b.action_counts)
            .zip(b.action_frequencies())
        {
            let mut row = policy_prefix(with_policy, b.policy.name());
            row.extend([action.name.clone(), count.to_string(), freq.to_string()]);
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `step,mean_state,mean_cum_J1` for steps `0..=T`.
pub fn write_curves_csv<W: Write, S: Scalar>(
    out: W,
    batches: &[&BatchStats<S>],
    with_policy: bool,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(with_policy, &["step", "mean_state", "mean_cum_J1"]))?;
    for b in batches {
        for (t, (s, j)) in b.mean_state.iter().zip(&b.mean_cum_j1).enumerate() {
            let mut row = policy_prefix(with_policy, b.policy.name());
            row.extend([t.to_string(), s.to_string(), j.to_string()]);
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One row per item: ids, costs, front membership, witness and component.
pub fn write_front_csv<W: Write, S: Scalar>(
    out: W,
    space: &TrajectorySpace<S>,
    front: &FrontResult,
    components: &[Vec<usize>],
) -> Result<()> {
    let mut component_of = vec![None; space.len()];
    for (c, members) in components.iter().enumerate() {
        for &m in members {
            component_of[m] = Some(c);
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let mut h = vec!["traj_id".to_string()];
    h.extend(objective_headers(space.env(), "J", ""));
    h.extend(["on_front", "dominated_by", "component_id"].map(String::from));
    w.write_record(&h)?;
    for item in space.items() {
        let mut row = vec![item.id.to_string()];
        row.extend(item.cost.iter().map(ToString::to_string));
        row.push(flag(front.is_on_front(item.id)));
        row.push(
            front
                .dominated_by
                .get(&item.id)
                .map(ToString::to_string)
                .unwrap_or_default(),
        );
        row.push(
            component_of[item.id]
                .map(|c| c.to_string())
                .unwrap_or_default(),
        );
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON array describing each trap, including its scalarized ceiling.
pub fn traps_json<S: Scalar>(
    space: &TrajectorySpace<S>,
    traps: &[Trap],
    f: &Scalarization<S>,
) -> Result<Value> {
    let entries = traps
        .iter()
        .enumerate()
        .map(|(i, trap)| {
            Ok(json!({
                "trap_id": i,
                "mode": trap.mode.as_str(),
                "member_ids": trap.member_ids,
                "witness_ids": trap.witnesses,
                "boundary_edges": trap.boundary_edges,
                "label": trap.label.as_str(),
                "ceiling": ceiling(space, &trap.member_ids, f)?.to_f64_lossy(),
                "confinement_threshold": trap.confinement_threshold,
            }))
        })
        .collect::<Result<Vec<Value>>>()?;
    Ok(Value::Array(entries))
}

/// `trap_id,D,S_structural,B,alpha,beta,gamma,tedi,category`.
pub fn write_tedi_csv<W: Write>(out: W, rows: &[(usize, TediReport)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "trap_id",
        "D",
        "S_structural",
        "B",
        "alpha",
        "beta",
        "gamma",
        "tedi",
        "category",
    ])?;
    for (id, r) in rows {
        w.write_record([
            id.to_string(),
            r.escape_distance.to_string(),
            r.structural.to_string(),
            r.inertia.to_string(),
            r.weights.alpha().to_string(),
            r.weights.beta().to_string(),
            r.weights.gamma().to_string(),
            r.value.to_string(),
            r.category.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Pooled rollout costs: `policy,run_id,J1..Jm,on_front`.
pub fn write_costs_csv<W: Write, S: Scalar>(
    out: W,
    env: &EnvironmentSpec<S>,
    report: &ComparisonReport<S>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut h = vec!["policy".to_string(), "run_id".to_string()];
    h.extend(objective_headers(env, "J", ""));
    h.push("on_front".into());
    w.write_record(&h)?;
    for (i, p) in report.pooled.iter().enumerate() {
        let mut row = vec![
            report.batches[p.policy].policy.name().to_string(),
            p.run.to_string(),
        ];
        row.extend(p.cost.iter().map(ToString::to_string));
        row.push(flag(report.pooled_front.is_on_front(i)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Opportunity-cost histogram: `policy,bin_lo,bin_hi,count`.
pub fn write_opportunity_csv<W: Write, S: Scalar>(
    out: W,
    report: &ComparisonReport<S>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["policy", "bin_lo", "bin_hi", "count"])?;
    let edges = &report.opportunity.edges;
    for (b, counts) in report.batches.iter().zip(&report.opportunity.counts) {
        for (i, c) in counts.iter().enumerate() {
            w.write_record([
                b.policy.name().to_string(),
                edges[i].to_string(),
                edges[i + 1].to_string(),
                c.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
