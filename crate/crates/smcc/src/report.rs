//! Aggregates result rows into one line per `(algo, objective, n, k)` with
//! mean, min and max of every counter. Only finished runs are aggregated;
//! the rest are counted in `failed`.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::runner::Row;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stat {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    fn of(values: &[f64]) -> Stat {
        if values.is_empty() {
            return Stat::default();
        }
        Stat {
            mean: values.iter().sum::<f64>() / values.len() as f64,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub algo: String,
    pub objective: String,
    pub n: usize,
    pub k: usize,
    pub runs: usize,
    pub failed: usize,
    pub value: Stat,
    pub queries: Stat,
    pub adaptive_rounds: Stat,
    pub mr_rounds: Stat,
    pub elements_communicated: Stat,
    pub wall_ms: Stat,
}

const METRICS: [&str; 6] = [
    "value",
    "queries",
    "adaptive_rounds",
    "mr_rounds",
    "elements_communicated",
    "wall_ms",
];

/// Groups keep the order in which algorithms first appear; within an
/// algorithm they are sorted by objective, n and k.
pub fn aggregate(rows: &[Row]) -> Vec<Aggregate> {
    let mut algo_order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<(usize, &str, usize, usize), Vec<&Row>> = BTreeMap::new();
    for row in rows {
        let idx = match algo_order.iter().position(|a| *a == row.algo) {
            Some(i) => i,
            None => {
                algo_order.push(&row.algo);
                algo_order.len() - 1
            }
        };
        groups
            .entry((idx, row.objective.as_str(), row.n, row.k))
            .or_default()
            .push(row);
    }
    groups
        .into_iter()
        .map(|((idx, objective, n, k), members)| {
            let done: Vec<&Row> = members.iter().copied().filter(|r| r.status.finished()).collect();
            let col = |f: fn(&Row) -> Option<f64>| -> Stat {
                Stat::of(&done.iter().filter_map(|r| f(r)).collect::<Vec<f64>>())
            };
            Aggregate {
                algo: algo_order[idx].to_string(),
                objective: objective.to_string(),
                n,
                k,
                runs: members.len(),
                failed: members.len() - done.len(),
                value: col(|r| r.value),
                queries: col(|r| r.queries.map(|q| q as f64)),
                adaptive_rounds: col(|r| r.adaptive_rounds.map(|q| q as f64)),
                mr_rounds: col(|r| r.mr_rounds.map(|q| q as f64)),
                elements_communicated: col(|r| r.elements_communicated.map(|q| q as f64)),
                wall_ms: col(|r| Some(r.wall_ms as f64)),
            }
        })
        .collect()
}

pub fn write_aggregates<W: Write>(out: W, rows: &[Aggregate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "algo".to_string(),
        "objective".into(),
        "n".into(),
        "k".into(),
        "runs".into(),
        "failed".into(),
    ];
    for m in METRICS {
        for s in ["mean", "min", "max"] {
            header.push(format!("{m}_{s}"));
        }
    }
    w.write_record(&header)?;
    for a in rows {
        let mut record = vec![
            a.algo.clone(),
            a.objective.clone(),
            a.n.to_string(),
            a.k.to_string(),
            a.runs.to_string(),
            a.failed.to_string(),
        ];
        for s in [a.value, a.queries, a.adaptive_rounds, a.mr_rounds, a.elements_communicated, a.wall_ms] {
            record.extend([s.mean.to_string(), s.min.to_string(), s.max.to_string()]);
        }
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::Validation(format!("cannot write report: {e}")))?;
    Ok(())
}
