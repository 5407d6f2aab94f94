//! `ptl`: trajectory-level Pareto analysis from the command line.

mod svg;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, CommandFactory, Parser, Subcommand};
use ptl_core::report::{self, TrajectoryWriter};
use ptl_core::{
    builtin_env, compare_policies, detect_trap_confinement, detect_traps_strict, enumerate_with,
    front_components, load_env, pareto_front, pareto_front_costs, run_batch, tedi, tedi_for_trap,
    Agent, BatchStats, BuiltinEnv, CostVector, EnumerateOptions, EnvironmentSpec, PolicySpec,
    Scalarization, TediReport, TediWeights, TrajectorySpace, Trap, DEFAULT_ENUMERATION_CAP,
};
use serde_json::{json, Value};

use crate::svg::Series;

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID_SPEC: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ptl",
    version,
    about = "Trajectory-level Pareto analysis of finite-horizon decision processes"
)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Print the run summary as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List or print environments.
    Env {
        #[command(subcommand)]
        action: EnvCommand,
    },
    /// Seeded rollouts of one policy.
    Simulate(SimulateArgs),
    /// Enumerate every trajectory of a deterministic environment.
    Enumerate(SpaceArgs),
    /// Exact Pareto front of the enumerated trajectories.
    Front(SpaceArgs),
    /// Front, strict traps, ceilings and TEDI in one pass.
    Analyze(AnalyzeArgs),
    /// Run several policies on the same seeds and pool their costs.
    Compare(CompareArgs),
    /// TEDI for explicit components or for the traps of an environment.
    Tedi(TediArgs),
}

#[derive(Subcommand, Debug)]
enum EnvCommand {
    List,
    Show(EnvArgs),
}

#[derive(Args, Debug)]
struct EnvArgs {
    /// `builtin:NAME` or a path to a JSON environment document.
    #[arg(long)]
    env: String,

    /// Override the environment horizon.
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Args, Debug)]
struct OutArgs {
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug)]
struct SeedArgs {
    #[arg(long, env = "PTL_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    env: EnvArgs,
    #[arg(long, value_parser = parse_policy)]
    policy: PolicySpec,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long)]
    svg: bool,
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[command(flatten)]
    env: EnvArgs,
    /// Hamming radius of trajectory neighborhoods.
    #[arg(long, default_value_t = 1)]
    epsilon: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// TEDI weights alpha,beta,gamma (normalized to sum to one).
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Scalarization weights, one per objective, summing to one.
    #[arg(long, value_delimiter = ',')]
    scalar_weights: Option<Vec<f64>>,
    /// Also analyze the confinement trap of `pointwise`, `trajectory`,
    /// `random` or `front` (the exhaustive front planner).
    #[arg(long, value_parser = parse_agent)]
    policy: Option<AgentChoice>,
    /// Rollouts used to collect a stochastic policy's trajectories.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long)]
    svg: bool,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    env: EnvArgs,
    #[arg(long, value_delimiter = ',', default_value = "pointwise,trajectory,random", value_parser = parse_policy)]
    policies: Vec<PolicySpec>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long)]
    svg: bool,
}

#[derive(Args, Debug)]
struct TediArgs {
    /// Explicit D,S,B components; no environment needed.
    #[arg(long, value_delimiter = ',', conflicts_with = "env")]
    components: Option<Vec<f64>>,
    #[arg(long, required_unless_present = "components")]
    env: Option<String>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, default_value_t = 1)]
    epsilon: usize,
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    scalar_weights: Option<Vec<f64>>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone)]
enum AgentChoice {
    Policy(PolicySpec),
    FrontPlanner,
}

fn parse_policy(s: &str) -> Result<PolicySpec, String> {
    s.parse().map_err(|e: ptl_core::Error| e.to_string())
}

fn parse_agent(s: &str) -> Result<AgentChoice, String> {
    if s == "front" {
        Ok(AgentChoice::FrontPlanner)
    } else {
        parse_policy(s).map(AgentChoice::Policy)
    }
}

/// Failure with an explicit exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
    .into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return f.code;
        }
        if let Some(e) = cause.downcast_ref::<ptl_core::Error>() {
            if e.is_invalid_spec() {
                return EXIT_INVALID_SPEC;
            }
            if e.is_infeasible() {
                return EXIT_INFEASIBLE;
            }
            return EXIT_USAGE;
        }
    }
    EXIT_USAGE
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.render().to_string();
            eprint!("{rendered}");
            if !rendered.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(summary) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&summary).expect("summary serializes")
                );
            } else {
                print_summary(&summary);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn print_summary(summary: &Value) {
    match summary {
        Value::String(s) => print!("{s}"),
        Value::Object(_) => print_nested(summary, 0),
        other => println!("{other}"),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        _ => true,
    }
}

fn print_nested(v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                if is_flat(item) {
                    println!("{pad}{k}: {}", scalar_text(item));
                } else {
                    println!("{pad}{k}:");
                    print_nested(item, depth + 1);
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                if is_flat(item) {
                    println!("{pad}- {}", scalar_text(item));
                } else {
                    println!("{pad}[{i}]");
                    print_nested(item, depth + 1);
                }
            }
        }
        other => println!("{pad}{}", scalar_text(other)),
    }
}

fn run(cli: &Cli) -> anyhow::Result<Value> {
    match &cli.command {
        Command::Env { action } => cmd_env(action),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Front(args) => cmd_front(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Tedi(args) => cmd_tedi(args),
    }
}

fn spec_error(message: String) -> anyhow::Error {
    Failure {
        code: EXIT_INVALID_SPEC,
        message,
    }
    .into()
}

fn load_environment(source: &str, horizon: Option<usize>) -> anyhow::Result<EnvironmentSpec> {
    let env = match source.strip_prefix("builtin:") {
        Some(name) => builtin_env(name.parse::<BuiltinEnv>()?),
        None => {
            let text = fs::read_to_string(source)
                .map_err(|e| spec_error(format!("cannot read environment file `{source}`: {e}")))?;
            load_env(&text)?
        }
    };
    match horizon {
        Some(t) => Ok(env.with_horizon(t)?),
        None => Ok(env),
    }
}

/// Output directory that refuses to clobber existing files unless forced.
struct OutDir {
    path: PathBuf,
}

impl OutDir {
    fn prepare(args: &OutArgs, files: &[&str]) -> anyhow::Result<Self> {
        if !args.force {
            let existing: Vec<&str> = files
                .iter()
                .copied()
                .filter(|f| args.out.join(f).exists())
                .collect();
            if !existing.is_empty() {
                return Err(usage(format!(
                    "refusing to overwrite {} in {} (use --force)",
                    existing.join(", "),
                    args.out.display()
                )));
            }
        }
        fs::create_dir_all(&args.out)
            .with_context(|| format!("creating {}", args.out.display()))?;
        Ok(Self {
            path: args.out.clone(),
        })
    }

    fn create(&self, name: &str) -> anyhow::Result<BufWriter<File>> {
        let path = self.path.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        Ok(BufWriter::new(file))
    }

    fn write_text(&self, name: &str, text: &str) -> anyhow::Result<()> {
        let mut w = self.create(name)?;
        w.write_all(text.as_bytes())?;
        w.flush()?;
        Ok(())
    }

    fn path(&self) -> &Path {
        &self.path
    }
}

fn cmd_env(action: &EnvCommand) -> anyhow::Result<Value> {
    match action {
        EnvCommand::List => {
            let list: Vec<Value> = BuiltinEnv::ALL
                .iter()
                .map(|b| {
                    let env: EnvironmentSpec = builtin_env(*b);
                    json!({
                        "name": format!("builtin:{}", b.name()),
                        "n_states": env.n_states(),
                        "horizon": env.horizon(),
                        "actions": env.actions().iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
                        "deterministic": env.is_deterministic(),
                    })
                })
                .collect();
            Ok(json!({ "environments": list }))
        }
        EnvCommand::Show(args) => {
            let env = load_environment(&args.env, args.horizon)?;
            Ok(serde_json::from_str(&env.to_json())?)
        }
    }
}

const SIMULATE_FILES: [&str; 4] = ["trajectories.csv", "stats.csv", "actions.csv", "curves.csv"];
const COMPARE_FILES: [&str; 6] = [
    "trajectories.csv",
    "stats.csv",
    "actions.csv",
    "curves.csv",
    "costs.csv",
    "opportunity.csv",
];
const SVG_FILES: [&str; 5] = [
    "state_evolution.svg",
    "cost_scatter.svg",
    "final_states.svg",
    "action_frequencies.svg",
    "cumulative_j1.svg",
];

fn with_svg<'a>(files: &[&'a str], svg: bool) -> Vec<&'a str> {
    let mut all = files.to_vec();
    if svg {
        all.extend(SVG_FILES);
    }
    all
}

fn write_batch_files(
    out: &OutDir,
    env: &EnvironmentSpec,
    batches: &[&BatchStats],
    with_policy: bool,
) -> anyhow::Result<()> {
    let mut w = TrajectoryWriter::new(out.create("trajectories.csv")?, env, with_policy)?;
    for b in batches {
        for (i, r) in b.runs.iter().enumerate() {
            w.write_run(b.policy.name(), i, &r.trajectory)?;
        }
    }
    w.finish()?;
    report::write_stats_csv(out.create("stats.csv")?, batches, with_policy)?;
    report::write_actions_csv(out.create("actions.csv")?, env, batches, with_policy)?;
    report::write_curves_csv(out.create("curves.csv")?, batches, with_policy)?;
    Ok(())
}

fn batch_summary(b: &BatchStats) -> Value {
    json!({
        "policy": b.policy.name(),
        "runs": b.num_runs(),
        "final_state_histogram": b.final_state_histogram,
        "action_counts": b.action_counts,
        "mean_final_state": b.mean_state.last().copied().unwrap_or(0.0),
        "mean_J1": b.mean_cum_j1.last().copied().unwrap_or(0.0),
    })
}

fn cmd_simulate(args: &SimulateArgs) -> anyhow::Result<Value> {
    let env = load_environment(&args.env.env, args.env.horizon)?;
    let out = OutDir::prepare(&args.out, &with_svg(&SIMULATE_FILES, args.svg))?;
    let stats = run_batch(&env, &args.policy, args.runs as usize, args.seed.seed)?;
    write_batch_files(&out, &env, &[&stats], false)?;
    if args.svg {
        let costs = stats.costs();
        let front = pareto_front_costs(&costs)?;
        write_panels(&out, &env, &[&stats], &[costs], &front.front_ids)?;
    }
    Ok(json!({
        "environment": env.name(),
        "seed": args.seed.seed,
        "output": out.path().display().to_string(),
        "batch": batch_summary(&stats),
    }))
}

fn enumerate_space(args: &SpaceArgs) -> anyhow::Result<TrajectorySpace> {
    let env = load_environment(&args.env.env, args.env.horizon)?;
    let opts = EnumerateOptions {
        horizon: None,
        cap: DEFAULT_ENUMERATION_CAP,
        epsilon: args.epsilon,
    };
    Ok(enumerate_with(&env, &opts)?)
}

fn cmd_enumerate(args: &SpaceArgs) -> anyhow::Result<Value> {
    let out = OutDir::prepare(&args.out, &["trajectories.csv"])?;
    let space = enumerate_space(args)?;
    let mut w = TrajectoryWriter::new(out.create("trajectories.csv")?, space.env(), false)?;
    for item in space.items() {
        w.write_run("", item.id, &item.trajectory)?;
    }
    w.finish()?;
    Ok(json!({
        "environment": space.env().name(),
        "horizon": space.horizon(),
        "trajectories": space.len(),
        "output": out.path().display().to_string(),
    }))
}

fn cmd_front(args: &SpaceArgs) -> anyhow::Result<Value> {
    let out = OutDir::prepare(&args.out, &["front.csv"])?;
    let space = enumerate_space(args)?;
    let front = pareto_front(&space)?;
    let components = front_components(&space, &front);
    report::write_front_csv(out.create("front.csv")?, &space, &front, &components)?;
    Ok(json!({
        "environment": space.env().name(),
        "horizon": space.horizon(),
        "trajectories": space.len(),
        "front_size": front.len(),
        "front_components": components.len(),
        "output": out.path().display().to_string(),
    }))
}

fn tedi_weights(raw: &Option<Vec<f64>>) -> anyhow::Result<TediWeights> {
    match raw {
        Some(w) => {
            let [a, b, g] = triple("--weights", w)?;
            TediWeights::new(a, b, g).map_err(|e| usage(e.to_string()))
        }
        None => Ok(TediWeights::uniform()),
    }
}

fn triple(flag: &str, values: &[f64]) -> anyhow::Result<[f64; 3]> {
    <[f64; 3]>::try_from(values)
        .map_err(|_| usage(format!("{flag} takes exactly 3 comma-separated values")))
}

fn scalarization(raw: &Option<Vec<f64>>, env: &EnvironmentSpec) -> anyhow::Result<Scalarization> {
    match raw {
        Some(w) if w.len() != env.num_objectives() => Err(usage(format!(
            "--scalar-weights has {} entries, environment has {} objectives",
            w.len(),
            env.num_objectives()
        ))),
        Some(w) => Scalarization::new(w.clone()).map_err(|e| usage(e.to_string())),
        None => Ok(Scalarization::uniform(env.num_objectives())),
    }
}

fn tedi_rows(
    space: &TrajectorySpace,
    traps: &[Trap],
    weights: TediWeights,
    f: &Scalarization,
) -> anyhow::Result<Vec<(usize, TediReport)>> {
    traps
        .iter()
        .enumerate()
        .map(|(i, t)| Ok((i, tedi_for_trap(space, t, None, weights, f)?)))
        .collect()
}

fn trap_summaries(traps: &[Trap], rows: &[(usize, TediReport)]) -> Vec<Value> {
    traps
        .iter()
        .zip(rows)
        .map(|(t, (id, r))| {
            json!({
                "trap_id": id,
                "mode": t.mode.as_str(),
                "members": t.member_ids.len(),
                "label": t.label.as_str(),
                "tedi": r.value,
                "category": r.category.as_str(),
            })
        })
        .collect()
}

fn cmd_analyze(args: &AnalyzeArgs) -> anyhow::Result<Value> {
    let mut files = vec!["front.csv", "traps.json", "tedi.csv"];
    if args.svg {
        files.push("front.svg");
    }
    let out = OutDir::prepare(&args.space.out, &files)?;
    let weights = tedi_weights(&args.weights)?;
    let space = enumerate_space(&args.space)?;
    let f = scalarization(&args.scalar_weights, space.env())?;

    let front = pareto_front(&space)?;
    let components = front_components(&space, &front);
    report::write_front_csv(out.create("front.csv")?, &space, &front, &components)?;

    let mut traps = detect_traps_strict(&space)?;
    let all: Vec<usize> = (0..space.len()).collect();
    let global_ceiling = ptl_core::ceiling(&space, &all, &f)?;
    let mut confinement = Value::Null;
    if let Some(choice) = &args.policy {
        let agent = match choice {
            AgentChoice::FrontPlanner => Agent::FrontPlanner,
            AgentChoice::Policy(policy) => Agent::Policy {
                policy: policy.clone(),
                seeds: (0..args.runs).map(|i| args.seed.seed ^ i).collect(),
            },
        };
        let trap = detect_trap_confinement(space.env(), &agent, &space)?;
        let trap_ceiling = ptl_core::ceiling(&space, &trap.member_ids, &f)?;
        confinement = json!({
            "agent": match choice {
                AgentChoice::FrontPlanner => "front",
                AgentChoice::Policy(p) => p.name(),
            },
            "reachable": trap.member_ids.len(),
            "confinement_threshold": trap.confinement_threshold,
            "ceiling": trap_ceiling,
            "ceiling_gap": global_ceiling - trap_ceiling,
        });
        traps.push(trap);
    }

    let traps_doc = report::traps_json(&space, &traps, &f)?;
    out.write_text(
        "traps.json",
        &format!("{}\n", serde_json::to_string_pretty(&traps_doc)?),
    )?;
    let rows = tedi_rows(&space, &traps, weights, &f)?;
    report::write_tedi_csv(out.create("tedi.csv")?, &rows)?;

    if args.svg {
        out.write_text("front.svg", &front_panel(&space, &front.front_ids, &traps))?;
    }
    Ok(json!({
        "environment": space.env().name(),
        "horizon": space.horizon(),
        "epsilon": space.epsilon(),
        "trajectories": space.len(),
        "front_size": front.len(),
        "front_components": components.len(),
        "global_ceiling": global_ceiling,
        "traps": trap_summaries(&traps, &rows),
        "confinement": confinement,
        "output": out.path().display().to_string(),
    }))
}

fn cmd_compare(args: &CompareArgs) -> anyhow::Result<Value> {
    if args.policies.len() < 2 {
        return Err(usage(
            "compare needs at least two policies (--policies a,b[,c])",
        ));
    }
    let env = load_environment(&args.env.env, args.env.horizon)?;
    let out = OutDir::prepare(&args.out, &with_svg(&COMPARE_FILES, args.svg))?;
    let report = compare_policies(&env, &args.policies, args.runs as usize, args.seed.seed)?;
    let batches: Vec<&BatchStats> = report.batches.iter().collect();
    write_batch_files(&out, &env, &batches, true)?;
    report::write_costs_csv(out.create("costs.csv")?, &env, &report)?;
    report::write_opportunity_csv(out.create("opportunity.csv")?, &report)?;
    if args.svg {
        let costs: Vec<Vec<CostVector>> = report.batches.iter().map(BatchStats::costs).collect();
        write_panels(&out, &env, &batches, &costs, &report.pooled_front.front_ids)?;
    }
    Ok(json!({
        "environment": env.name(),
        "seed": args.seed.seed,
        "pooled_front_size": report.pooled_front.len(),
        "batches": report.batches.iter().map(batch_summary).collect::<Vec<_>>(),
        "output": out.path().display().to_string(),
    }))
}

fn cmd_tedi(args: &TediArgs) -> anyhow::Result<Value> {
    let weights = tedi_weights(&args.weights)?;
    if let Some(c) = &args.components {
        let [d, s, b] = triple("--components", c)?;
        let r = tedi(d, s, b, weights).map_err(|e| usage(e.to_string()))?;
        return Ok(report_json(None, &r));
    }
    let source = args
        .env
        .as_deref()
        .ok_or_else(|| anyhow!("--env is required"))?;
    let out = OutDir::prepare(&args.out, &["tedi.csv"])?;
    let space_args = SpaceArgs {
        env: EnvArgs {
            env: source.to_string(),
            horizon: args.horizon,
        },
        epsilon: args.epsilon,
        out: OutArgs {
            out: args.out.out.clone(),
            force: args.out.force,
        },
    };
    let space = enumerate_space(&space_args)?;
    let f = scalarization(&args.scalar_weights, space.env())?;
    let traps = detect_traps_strict(&space)?;
    let rows = tedi_rows(&space, &traps, weights, &f)?;
    report::write_tedi_csv(out.create("tedi.csv")?, &rows)?;
    Ok(json!({
        "environment": space.env().name(),
        "traps": rows.iter().map(|(id, r)| report_json(Some(*id), r)).collect::<Vec<_>>(),
        "output": out.path().display().to_string(),
    }))
}

fn report_json(trap_id: Option<usize>, r: &TediReport) -> Value {
    json!({
        "trap_id": trap_id,
        "D": r.escape_distance,
        "S_structural": r.structural,
        "B": r.inertia,
        "weights": [r.weights.alpha(), r.weights.beta(), r.weights.gamma()],
        "tedi": r.value,
        "category": r.category.as_str(),
    })
}

fn points(costs: &[CostVector]) -> Vec<(f64, f64)> {
    costs
        .iter()
        .map(|c| (c[0], if c.len() > 1 { c[1] } else { 0.0 }))
        .collect()
}

fn write_panels(
    out: &OutDir,
    env: &EnvironmentSpec,
    batches: &[&BatchStats],
    costs: &[Vec<CostVector>],
    pooled_front: &[usize],
) -> anyhow::Result<()> {
    let curve = |values: &[f64]| {
        values
            .iter()
            .enumerate()
            .map(|(t, &v)| (t as f64, v))
            .collect()
    };
    let named = |b: &BatchStats, points| Series {
        name: b.policy.name().to_string(),
        points,
    };
    let states: Vec<Series> = batches
        .iter()
        .map(|b| named(b, curve(&b.mean_state)))
        .collect();
    out.write_text(
        "state_evolution.svg",
        &svg::line_chart("Mean state by step", "step", "state", &states),
    )?;

    let pooled: Vec<CostVector> = costs.iter().flatten().cloned().collect();
    let groups: Vec<Series> = batches
        .iter()
        .zip(costs)
        .map(|(b, c)| named(b, points(c)))
        .collect();
    let front_pts: Vec<CostVector> = pooled_front.iter().map(|&i| pooled[i].clone()).collect();
    let overlay = Series {
        name: "front".into(),
        points: points(&front_pts),
    };
    let objectives = env.objectives();
    out.write_text(
        "cost_scatter.svg",
        &svg::scatter_chart(
            "Accumulated costs",
            &objectives[0],
            objectives.get(1).map_or("", String::as_str),
            &groups,
            Some(&overlay),
        ),
    )?;

    let state_names: Vec<String> = (0..env.n_states()).map(|s| s.to_string()).collect();
    let finals: Vec<Series> = batches
        .iter()
        .map(|b| {
            let n = b.num_runs() as f64;
            named(
                b,
                b.final_state_histogram
                    .iter()
                    .enumerate()
                    .map(|(s, &c)| (s as f64, c as f64 / n))
                    .collect(),
            )
        })
        .collect();
    out.write_text(
        "final_states.svg",
        &svg::bar_chart(
            "Final state distribution",
            "final state",
            "frequency",
            &state_names,
            &finals,
        ),
    )?;

    let action_names: Vec<String> = env.actions().iter().map(|a| a.name.clone()).collect();
    let actions: Vec<Series> = batches
        .iter()
        .map(|b| {
            named(
                b,
                b.action_frequencies()
                    .into_iter()
                    .enumerate()
                    .map(|(a, f)| (a as f64, f))
                    .collect(),
            )
        })
        .collect();
    out.write_text(
        "action_frequencies.svg",
        &svg::bar_chart(
            "Action frequencies",
            "action",
            "frequency",
            &action_names,
            &actions,
        ),
    )?;

    let j1: Vec<Series> = batches
        .iter()
        .map(|b| named(b, curve(&b.mean_cum_j1)))
        .collect();
    out.write_text(
        "cumulative_j1.svg",
        &svg::line_chart("Mean cumulative cost", "step", &objectives[0], &j1),
    )?;
    Ok(())
}

fn front_panel(space: &TrajectorySpace, front: &[usize], traps: &[Trap]) -> String {
    let pts = |ids: &mut dyn Iterator<Item = usize>| -> Vec<CostVector> {
        ids.map(|i| space.cost(i).clone()).collect()
    };
    let mut groups = vec![Series {
        name: "trajectories".into(),
        points: points(&pts(&mut (0..space.len()))),
    }];
    for (i, t) in traps.iter().enumerate() {
        groups.push(Series {
            name: format!("trap {i} ({})", t.label),
            points: points(&pts(&mut t.member_ids.iter().copied())),
        });
    }
    let overlay = Series {
        name: "front".into(),
        points: points(&pts(&mut front.iter().copied())),
    };
    let objectives = space.env().objectives();
    svg::scatter_chart(
        "Trajectory costs",
        &objectives[0],
        objectives.get(1).map_or("", String::as_str),
        &groups,
        Some(&overlay),
    )
}
