//! Seeded recovery experiments: sample a state, observe it through the noise
//! channel, rank the observation, and compare with the true rankings.

use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use chainrank::interleave::edit_cost;
use chainrank::operators::Operator;
use chainrank::prob_model::{
    k_theta, sample_state_with, sample_tournament_with, trial_rng, NoiseParams,
};
use chainrank::{EditConfig, Error, RankingPair, TotalPreorder};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::resolve_operator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    ExactMatch,
    TauB,
    EditCost,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::ExactMatch, Metric::TauB, Metric::EditCost];

    pub fn parse(s: &str) -> Result<Metric> {
        match s.trim() {
            "exact_match" => Ok(Metric::ExactMatch),
            "tau_b" | "tie_aware_rank_correlation" => Ok(Metric::TauB),
            "edit_cost" => Ok(Metric::EditCost),
            other => bail!("unknown metric '{other}'; expected exact_match, tau_b or edit_cost"),
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            Metric::ExactMatch => &["exact_match"],
            Metric::TauB => &["tau_b_a", "tau_b_b"],
            Metric::EditCost => &["edit_cost"],
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub m: usize,
    pub n: usize,
    pub alpha: NoiseParams,
    pub operators: Vec<String>,
    pub trials: usize,
    pub seed: u64,
    pub metrics: Vec<Metric>,
    pub edit: EditConfig,
}

/// Metric values of one operator on one trial, in column order.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRow {
    pub trial: usize,
    pub operator: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub config_json: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<TrialRow>,
    /// Per operator, the mean of each column.
    pub means: Vec<(String, Vec<f64>)>,
}

fn sign(p: &TotalPreorder, i: usize, j: usize) -> i8 {
    (p.rank_of(i) as i64 - p.rank_of(j) as i64).signum() as i8
}

/// Kendall's tau-b between two preorders of the same players; 0 when
/// either side is completely tied.
pub fn kendall_tau_b(p: &TotalPreorder, q: &TotalPreorder) -> f64 {
    let len = p.len();
    let (mut concordant, mut discordant, mut tied_p, mut tied_q, mut pairs) =
        (0i64, 0i64, 0i64, 0i64, 0i64);
    for i in 0..len {
        for j in i + 1..len {
            pairs += 1;
            let (x, y) = (sign(p, i, j), sign(q, i, j));
            if x == 0 {
                tied_p += 1;
            }
            if y == 0 {
                tied_q += 1;
            }
            match x * y {
                1 => concordant += 1,
                -1 => discordant += 1,
                _ => {}
            }
        }
    }
    let denom = (((pairs - tied_p) * (pairs - tied_q)) as f64).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        (concordant - discordant) as f64 / denom
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<Vec<Arc<dyn Operator>>> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if self.m == 0 || self.n == 0 {
            bail!("tournament sides must be non-empty");
        }
        if self.operators.is_empty() {
            bail!("at least one operator is required");
        }
        if self.metrics.is_empty() {
            bail!("at least one metric is required");
        }
        let ops = self
            .operators
            .iter()
            .map(|name| resolve_operator(name, &self.edit))
            .collect::<Result<Vec<_>>>()?;
        let side = self.m.min(self.n);
        for op in &ops {
            if let Some(cap) = op.size_cap() {
                if side > cap {
                    return Err(Error::ResourceCap {
                        what: "smaller side of the simulated tournaments",
                        requested: side,
                        limit: cap,
                        hint: "pick an interleaving operator or raise the enumeration cap",
                    })
                    .with_context(|| format!("operator '{}'", op.name()));
                }
            }
        }
        Ok(ops)
    }

    fn to_json(&self) -> Value {
        json!({
            "rows": self.m,
            "cols": self.n,
            "alpha_plus": self.alpha.alpha_plus(),
            "alpha_minus": self.alpha.alpha_minus(),
            "operators": self.operators,
            "trials": self.trials,
            "seed": self.seed,
        })
    }
}

fn trial(config: &ExperimentConfig, ops: &[Arc<dyn Operator>], t: usize) -> Result<Vec<TrialRow>> {
    let mut rng = trial_rng(config.seed, t as u64);
    let theta = sample_state_with(config.m, config.n, &mut rng)?;
    let observed = sample_tournament_with(&theta, &config.alpha, &mut rng);
    let truth: RankingPair = k_theta(&theta).chain_rankings()?;
    ops.iter()
        .map(|op| {
            let p = op
                .rank(&observed)
                .with_context(|| format!("operator '{}' on trial {t}", op.name()))?;
            let mut values = Vec::new();
            for metric in &config.metrics {
                match metric {
                    Metric::ExactMatch => values.push(if p == truth { 1.0 } else { 0.0 }),
                    Metric::TauB => {
                        values.push(kendall_tau_b(&p.a, &truth.a));
                        values.push(kendall_tau_b(&p.b, &truth.b));
                    }
                    Metric::EditCost => values.push(match edit_cost(&observed, &p) {
                        Ok(c) => c as f64,
                        Err(Error::NotChainDefinable { .. }) => f64::NAN,
                        Err(e) => return Err(e.into()),
                    }),
                }
            }
            Ok(TrialRow {
                trial: t,
                operator: op.name(),
                values,
            })
        })
        .collect()
}

/// Runs every trial; `threads` of `None` uses the global pool.
pub fn run(config: &ExperimentConfig, threads: Option<usize>) -> Result<SimulationResult> {
    let ops = config.validate()?;
    let work = || -> Result<Vec<Vec<TrialRow>>> {
        (0..config.trials)
            .into_par_iter()
            .map(|t| trial(config, &ops, t))
            .collect()
    };
    let per_trial = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .context("building worker pool")?
            .install(work)?,
        None => work()?,
    };
    let columns: Vec<&'static str> = config
        .metrics
        .iter()
        .flat_map(|m| m.columns().iter().copied())
        .collect();
    let rows: Vec<TrialRow> = per_trial.into_iter().flatten().collect();
    let means = ops
        .iter()
        .enumerate()
        .map(|(i, op)| {
            let mut sums = vec![0.0; columns.len()];
            for row in rows.iter().skip(i).step_by(ops.len()) {
                for (s, v) in sums.iter_mut().zip(&row.values) {
                    *s += v;
                }
            }
            (
                op.name(),
                sums.into_iter().map(|s| s / config.trials as f64).collect(),
            )
        })
        .collect();
    Ok(SimulationResult {
        config_json: config.to_json(),
        columns,
        rows,
        means,
    })
}

fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.6}")
    }
}

impl SimulationResult {
    pub fn seed(&self) -> u64 {
        self.config_json["seed"].as_u64().unwrap_or_default()
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let c = &self.config_json;
        writeln!(
            out,
            "seed {} | {}x{} | alpha+ {} alpha- {} | {} trials",
            c["seed"], c["rows"], c["cols"], c["alpha_plus"], c["alpha_minus"], c["trials"]
        )
        .unwrap();
        let width = self
            .means
            .iter()
            .map(|(n, _)| n.len())
            .max()
            .unwrap_or(8)
            .max(8);
        write!(out, "{:<width$}", "operator").unwrap();
        for col in &self.columns {
            write!(out, "  {col:>12}").unwrap();
        }
        out.push('\n');
        for (name, vals) in &self.means {
            write!(out, "{name:<width$}").unwrap();
            for v in vals {
                write!(out, "  {:>12}", num(*v)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Means per operator, or one line per trial and operator.
    pub fn csv(&self, per_trial: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["seed".to_string()];
        if per_trial {
            header.push("trial".into());
        }
        header.push("operator".into());
        header.extend(self.columns.iter().map(|c| c.to_string()));
        w.write_record(&header).expect("in-memory write");
        let seed = self.seed().to_string();
        if per_trial {
            for row in &self.rows {
                let mut rec = vec![seed.clone(), row.trial.to_string(), row.operator.clone()];
                rec.extend(row.values.iter().map(|v| num(*v)));
                w.write_record(&rec).expect("in-memory write");
            }
        } else {
            for (name, vals) in &self.means {
                let mut rec = vec![seed.clone(), name.clone()];
                rec.extend(vals.iter().map(|v| num(*v)));
                w.write_record(&rec).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn json(&self, per_trial: bool) -> Value {
        let as_json = |v: f64| if v.is_nan() { Value::Null } else { json!(v) };
        let means: Vec<Value> = self
            .means
            .iter()
            .map(|(name, vals)| {
                let mut obj = serde_json::Map::new();
                obj.insert("operator".into(), json!(name));
                for (c, v) in self.columns.iter().zip(vals) {
                    obj.insert(c.to_string(), as_json(*v));
                }
                Value::Object(obj)
            })
            .collect();
        let mut out = json!({ "config": self.config_json, "means": means });
        if per_trial {
            out["trials"] = Value::Array(
                self.rows
                    .iter()
                    .map(|r| {
                        let mut obj = serde_json::Map::new();
                        obj.insert("trial".into(), json!(r.trial));
                        obj.insert("operator".into(), json!(r.operator));
                        for (c, v) in self.columns.iter().zip(&r.values) {
                            obj.insert(c.to_string(), as_json(*v));
                        }
                        Value::Object(obj)
                    })
                    .collect(),
            );
        }
        out
    }
}
