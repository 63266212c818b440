//! Command-line front end: tournament files in, rankings, edits, axiom
//! verdicts, likelihoods and simulation tables out.

pub mod io;
pub mod render;
pub mod simulate;

use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use chainrank::axiom_lab::{check, impossibility_suite, Axiom, Scope};
use chainrank::chain_edit::{
    chain_completion, chain_deletion, min_chain_set, weighted_distance, weighted_min_chain,
};
use chainrank::match_pref::{weights_for, MatchPreference};
use chainrank::operators::{operator_by_name, Flat, Operator};
use chainrank::prob_model::{likelihood, log_likelihood, mle_search, NoiseParams, StateOfWorld};
use chainrank::{EditConfig, Error, MinChainSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::io::{read_tournament, TournamentFile};
use crate::render::{matrix_json, matrix_text, pair_json, pair_text};
use crate::simulate::{ExperimentConfig, Metric};

/// Operators run when `axioms` is given no operator.
pub const DEFAULT_AXIOM_OPERATORS: &[&str] = &[
    "count",
    "chain-min-lex",
    "chain-min-mon",
    "chain-min-dual",
    "match-pref:row-major",
    "match-pref:col-major",
    "ci",
];

#[derive(Parser, Debug)]
#[command(
    name = "chainrank",
    version,
    about = "Rank both sides of a bipartite tournament"
)]
pub struct Cli {
    /// Largest smaller side accepted by exhaustive chain editing.
    #[arg(long, global = true, env = "CHAINRANK_CAP")]
    pub cap: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank both sides with an operator.
    Rank(RankArgs),
    /// Closest chain tournaments.
    Edit(EditArgs),
    /// Check ranking axioms.
    Axioms(AxiomsArgs),
    /// Seeded recovery experiments under the noise model.
    Simulate(SimulateArgs),
    /// Likelihood of a tournament, or its most likely chain tournaments.
    Likelihood(LikelihoodArgs),
    /// Match-preference cell weights.
    Weights(WeightsArgs),
}

#[derive(Args, Debug)]
pub struct RankArgs {
    /// CSV or JSON tournament file, `-` for stdin.
    pub input: PathBuf,
    #[arg(short, long)]
    pub operator: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
#[group(id = "mode", multiple = false)]
pub struct EditModes {
    /// Every closest chain tournament (default).
    #[arg(long, group = "mode")]
    pub all: bool,
    /// The unique closest chain tournament under a match preference.
    #[arg(long, group = "mode", value_name = "ORDER")]
    pub weighted: Option<String>,
    /// Only add wins.
    #[arg(long, group = "mode")]
    pub complete: bool,
    /// Only remove wins.
    #[arg(long, group = "mode")]
    pub delete: bool,
}

#[derive(Args, Debug)]
pub struct EditArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub mode: EditModes,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct AxiomsArgs {
    /// Operator to check; every registered operator when omitted.
    pub operator: Option<String>,
    /// Sizes such as `2x2,2x3`, or `random:3x3,3x4:<samples>:<seed>`.
    #[arg(long, conflicts_with = "paper_suite", default_value = "2x2,2x3")]
    pub scope: String,
    /// Axioms to check (comma separated); all when omitted.
    #[arg(long, value_delimiter = ',', conflicts_with = "paper_suite")]
    pub axiom: Vec<String>,
    /// Fixed counterexamples with their predicted verdicts; exits 4 on any deviation.
    #[arg(long)]
    pub paper_suite: bool,
}

#[derive(Args, Debug, Clone)]
pub struct NoiseArgs {
    /// Symmetric flip probability.
    #[arg(long, conflicts_with_all = ["alpha_plus", "alpha_minus"])]
    pub beta: Option<f64>,
    /// Probability that a true loss is observed as a win.
    #[arg(long, requires = "alpha_minus")]
    pub alpha_plus: Option<f64>,
    /// Probability that a true win is observed as a loss.
    #[arg(long, requires = "alpha_plus")]
    pub alpha_minus: Option<f64>,
}

impl NoiseArgs {
    pub fn params(&self) -> Result<NoiseParams> {
        match (self.beta, self.alpha_plus, self.alpha_minus) {
            (Some(b), _, _) => Ok(NoiseParams::symmetric(b)?),
            (None, Some(p), Some(m)) => Ok(NoiseParams::new(p, m)?),
            _ => bail!("noise parameters required: --beta or --alpha-plus with --alpha-minus"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(short = 'm', long)]
    pub rows: usize,
    #[arg(short = 'n', long)]
    pub cols: usize,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Operator names, comma separated; `flat` is accepted as a baseline.
    #[arg(long, value_delimiter = ',', required = true)]
    pub operators: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    /// exact_match, tau_b (alias tie_aware_rank_correlation), edit_cost.
    #[arg(long, value_delimiter = ',')]
    pub metrics: Vec<String>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Report every trial instead of only the means (CSV and JSON).
    #[arg(long)]
    pub per_trial: bool,
    /// Also write the report to this file.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(id = "target", required = true, multiple = false)]
pub struct LikelihoodTarget {
    /// JSON file `{"x": [...], "y": [...]}`.
    #[arg(long, group = "target")]
    pub state: Option<PathBuf>,
    /// The most likely chain tournaments.
    #[arg(long, group = "target")]
    pub mle: bool,
}

#[derive(Args, Debug)]
pub struct LikelihoodArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub target: LikelihoodTarget,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[arg(long, default_value = "row-major")]
    pub order: String,
    #[arg(short = 'm', long)]
    pub rows: usize,
    #[arg(short = 'n', long)]
    pub cols: usize,
    #[arg(long)]
    pub json: bool,
}

/// Output text and exit status of a completed command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub exit_code: i32,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, exit_code: 0 }
    }
}

/// Observed verdicts differ from the predicted ones.
#[derive(Debug)]
pub struct Deviation(pub String);

impl fmt::Display for Deviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deviation from predicted verdicts: {}", self.0)
    }
}

impl std::error::Error for Deviation {}

/// 2 for input errors, 3 for resource caps, 4 for internal failures and deviations.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<Deviation>().is_some() {
            return 4;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::ResourceCap { .. } => 3,
                Error::Internal(_) => 4,
                _ => 2,
            };
        }
    }
    2
}

/// Registry operators plus the `flat` baseline.
pub fn resolve_operator(name: &str, config: &EditConfig) -> Result<Arc<dyn Operator>> {
    if name == "flat" {
        return Ok(Arc::new(Flat));
    }
    Ok(operator_by_name(name, config)?)
}

pub fn run(cli: Cli) -> Result<Report> {
    let config = cli.cap.map(EditConfig::with_cap).unwrap_or_default();
    match cli.command {
        Command::Rank(args) => cmd_rank(&args, &config).map(Report::ok),
        Command::Edit(args) => cmd_edit(&args, &config).map(Report::ok),
        Command::Axioms(args) => cmd_axioms(&args, &config),
        Command::Simulate(args) => cmd_simulate(&args, &config).map(Report::ok),
        Command::Likelihood(args) => cmd_likelihood(&args, &config).map(Report::ok),
        Command::Weights(args) => cmd_weights(&args).map(Report::ok),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

pub fn cmd_rank(args: &RankArgs, config: &EditConfig) -> Result<String> {
    let file = read_tournament(&args.input)?;
    let k = &file.tournament;
    let op = resolve_operator(&args.operator, config)?;
    let p = op.rank(k)?;
    let chosen = if op.has_choice() {
        let c = op.choice(k)?;
        let d = k.hamming(&c)?;
        Some((c, d))
    } else {
        None
    };
    if args.json {
        let mut out = json!({
            "operator": op.name(),
            "rows": k.rows(),
            "cols": k.cols(),
            "rankings": pair_json(&p, &file),
        });
        if let Some((c, d)) = &chosen {
            out["chain"] = matrix_json(c);
            out["distance"] = json!(d);
        }
        return Ok(pretty(&out));
    }
    let mut out = format!("operator: {}\n{}\n", op.name(), pair_text(&p, &file));
    if let Some((c, d)) = &chosen {
        writeln!(
            out,
            "chain tournament (distance {d}):\n{}",
            matrix_text(c, "  ")
        )
        .unwrap();
    }
    Ok(out)
}

fn set_report(mode: &str, set: &MinChainSet, json_out: bool) -> String {
    if json_out {
        return pretty(&json!({
            "mode": mode,
            "distance": set.distance,
            "members": set.members.iter().map(matrix_json).collect::<Vec<_>>(),
        }));
    }
    let mut out = format!(
        "mode: {mode}\ndistance: {}\nmembers: {}\n",
        set.distance,
        set.members.len()
    );
    for (i, m) in set.members.iter().enumerate() {
        writeln!(out, "member {}:\n{}", i + 1, matrix_text(m, "  ")).unwrap();
    }
    out
}

pub fn cmd_edit(args: &EditArgs, config: &EditConfig) -> Result<String> {
    let file = read_tournament(&args.input)?;
    let k = &file.tournament;
    if let Some(order) = &args.mode.weighted {
        let pref = MatchPreference::parse(order)?;
        let weights = weights_for(&pref, k.rows(), k.cols())?;
        let chosen = weighted_min_chain(k, &weights, config)?;
        let distance = k.hamming(&chosen)?;
        let wd = weighted_distance(k, &chosen, &weights)?;
        let exponent = k.cell_count();
        if args.json {
            return Ok(pretty(&json!({
                "mode": "weighted",
                "order": order,
                "distance": distance,
                "weighted_distance": wd.to_string(),
                "denominator_exponent": exponent,
                "members": [matrix_json(&chosen)],
            })));
        }
        return Ok(format!(
            "mode: weighted ({order})\ndistance: {distance}\nweighted distance: {wd} / 2^{exponent}\nselection:\n{}\n",
            matrix_text(&chosen, "  ")
        ));
    }
    let (mode, set) = if args.mode.complete {
        ("complete", chain_completion(k, config)?)
    } else if args.mode.delete {
        ("delete", chain_deletion(k, config)?)
    } else {
        ("all", min_chain_set(k, config)?)
    };
    Ok(set_report(mode, &set, args.json))
}

pub fn cmd_axioms(args: &AxiomsArgs, config: &EditConfig) -> Result<Report> {
    let names: Vec<&str> = match &args.operator {
        Some(n) => vec![n.as_str()],
        None => DEFAULT_AXIOM_OPERATORS.to_vec(),
    };
    let ops = names
        .iter()
        .map(|n| resolve_operator(n, config))
        .collect::<Result<Vec<_>>>()?;
    if args.paper_suite {
        let mut reports = Vec::new();
        let mut deviating = Vec::new();
        for op in &ops {
            let r = impossibility_suite(op.as_ref(), config)?;
            if !r.all_as_predicted() {
                deviating.push(op.name());
            }
            reports.push(r.to_json());
        }
        let text = pretty(&json!({ "suite": reports, "as_predicted": deviating.is_empty() }));
        if !deviating.is_empty() {
            eprintln!("{}", Deviation(deviating.join(", ")));
            return Ok(Report { text, exit_code: 4 });
        }
        return Ok(Report::ok(text));
    }
    let scope = Scope::parse(&args.scope)?;
    let axioms = if args.axiom.is_empty() {
        Axiom::ALL.to_vec()
    } else {
        args.axiom
            .iter()
            .map(|a| Axiom::parse(a))
            .collect::<chainrank::Result<Vec<_>>>()?
    };
    let mut verdicts = Vec::new();
    for op in &ops {
        for &axiom in &axioms {
            let v = check(axiom, op.as_ref(), &scope, config)
                .with_context(|| format!("checking {axiom} for '{}'", op.name()))?;
            verdicts.push(v.to_json());
        }
    }
    Ok(Report::ok(pretty(
        &json!({ "scope": scope.describe(), "verdicts": verdicts }),
    )))
}

pub fn experiment_config(args: &SimulateArgs, config: &EditConfig) -> Result<ExperimentConfig> {
    let metrics = if args.metrics.is_empty() {
        Metric::ALL.to_vec()
    } else {
        args.metrics
            .iter()
            .map(|m| Metric::parse(m))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(ExperimentConfig {
        m: args.rows,
        n: args.cols,
        alpha: args.noise.params()?,
        operators: args.operators.clone(),
        trials: args.trials,
        seed: args.seed,
        metrics,
        edit: *config,
    })
}

pub fn cmd_simulate(args: &SimulateArgs, config: &EditConfig) -> Result<String> {
    let cfg = experiment_config(args, config)?;
    let result = simulate::run(&cfg, args.threads)?;
    let text = match args.format {
        OutputFormat::Table => result.table(),
        OutputFormat::Csv => result.csv(args.per_trial),
        OutputFormat::Json => pretty(&result.json(args.per_trial)),
    };
    if let Some(path) = &args.output {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(text)
}

#[derive(Deserialize)]
struct StateFile {
    x: Vec<f64>,
    y: Vec<f64>,
}

pub fn read_state(path: &std::path::Path) -> Result<StateOfWorld> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let s: StateFile =
        serde_json::from_str(&text).with_context(|| format!("parsing state {}", path.display()))?;
    Ok(StateOfWorld::from_real(&s.x, &s.y)?)
}

fn float_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

pub fn cmd_likelihood(args: &LikelihoodArgs, config: &EditConfig) -> Result<String> {
    let file: TournamentFile = read_tournament(&args.input)?;
    let k = &file.tournament;
    let alpha = args.noise.params()?;
    if let Some(path) = &args.target.state {
        let theta = read_state(path)?;
        if theta.shape() != k.shape() {
            bail!(
                "state has {}x{} players but the tournament is {}x{}",
                theta.shape().0,
                theta.shape().1,
                k.rows(),
                k.cols()
            );
        }
        let p = likelihood(k, &theta, &alpha)?;
        let ll = log_likelihood(k, &theta, &alpha)?;
        if args.json {
            return Ok(pretty(
                &json!({ "probability": p, "log_likelihood": ll.map(float_json) }),
            ));
        }
        let ll_text = ll.map_or("-inf".to_string(), |v| v.to_string());
        return Ok(format!("probability: {p}\nlog-likelihood: {ll_text}\n"));
    }
    let mut mle = mle_search(k, &alpha, config)?;
    mle.sort();
    let closest = min_chain_set(k, config)?;
    let equal = mle == closest.members;
    let ll = match mle.first() {
        Some(t) => chainrank::prob_model::log_likelihood_against(k, t, &alpha)?,
        None => None,
    };
    if args.json {
        return Ok(pretty(&json!({
            "members": mle.iter().map(matrix_json).collect::<Vec<_>>(),
            "log_likelihood": ll.map(float_json),
            "min_chain_distance": closest.distance,
            "equals_min_chain_set": equal,
        })));
    }
    let mut out = format!(
        "most likely chain tournaments: {} {}\n",
        mle.len(),
        if equal { "= minCh(K)" } else { "!= minCh(K)" }
    );
    writeln!(
        out,
        "log-likelihood: {}\nclosest chain distance: {}",
        ll.map_or("-inf".to_string(), |v| v.to_string()),
        closest.distance
    )
    .unwrap();
    for (i, t) in mle.iter().enumerate() {
        writeln!(
            out,
            "member {} (distance {}):\n{}",
            i + 1,
            k.hamming(t)?,
            matrix_text(t, "  ")
        )
        .unwrap();
    }
    Ok(out)
}

pub fn cmd_weights(args: &WeightsArgs) -> Result<String> {
    let pref = MatchPreference::parse(&args.order)?;
    let (m, n) = (args.rows, args.cols);
    if m == 0 || n == 0 {
        bail!("tournament sides must be non-empty");
    }
    let w = weights_for(&pref, m, n)?;
    let exponent = m * n;
    let scale = 2f64.powi(exponent as i32);
    let grid = |f: &dyn Fn(u128) -> Value| -> Vec<Value> {
        w.chunks(n)
            .map(|row| Value::Array(row.iter().map(|&x| f(x)).collect()))
            .collect()
    };
    if args.json {
        return Ok(pretty(&json!({
            "order": args.order,
            "rows": m,
            "cols": n,
            "denominator_exponent": exponent,
            "weights": grid(&|x| json!(x.to_string())),
            "values": grid(&|x| json!(x as f64 / scale)),
        })));
    }
    let mut out = format!("weights / 2^{exponent}:\n");
    for row in w.chunks(n) {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(out, "  {}", cells.join(" ")).unwrap();
    }
    out.push_str("values:\n");
    for row in w.chunks(n) {
        let cells: Vec<String> = row
            .iter()
            .map(|&x| (x as f64 / scale).to_string())
            .collect();
        writeln!(out, "  {}", cells.join(" ")).unwrap();
    }
    Ok(out)
}
