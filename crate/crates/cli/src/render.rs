//! Text and JSON rendering of rankings and tournaments.

use chainrank::{RankingPair, TotalPreorder, Tournament};
use serde_json::{json, Value};

use crate::io::TournamentFile;

/// Weakest first; ties as `{1≈3}`.
pub fn preorder_text(p: &TotalPreorder, sep: &str, name: impl Fn(usize) -> String) -> String {
    p.ranks()
        .iter()
        .map(|r| {
            if r.len() == 1 {
                name(r[0])
            } else {
                format!(
                    "{{{}}}",
                    r.iter().map(|&x| name(x)).collect::<Vec<_>>().join("≈")
                )
            }
        })
        .collect::<Vec<_>>()
        .join(&format!(" {sep} "))
}

pub fn pair_text(p: &RankingPair, file: &TournamentFile) -> String {
    format!(
        "A: {}\nB: {}",
        preorder_text(&p.a, "≺", |a| file.row_label(a)),
        preorder_text(&p.b, "⊏", |b| file.col_label(b))
    )
}

fn label_value(labels: &Option<Vec<String>>, i: usize) -> Value {
    match labels {
        Some(l) => json!(l[i]),
        None => json!(i + 1),
    }
}

/// Arrays of ranks, weakest first.
pub fn preorder_json(p: &TotalPreorder, labels: &Option<Vec<String>>) -> Value {
    Value::Array(
        p.ranks()
            .iter()
            .map(|r| Value::Array(r.iter().map(|&x| label_value(labels, x)).collect()))
            .collect(),
    )
}

pub fn pair_json(p: &RankingPair, file: &TournamentFile) -> Value {
    json!({
        "a": preorder_json(&p.a, &file.row_labels),
        "b": preorder_json(&p.b, &file.col_labels),
    })
}

pub fn matrix_json(k: &Tournament) -> Value {
    json!(k.to_rows())
}

/// One line per row, cells separated by spaces.
pub fn matrix_text(k: &Tournament, indent: &str) -> String {
    k.to_rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            format!("{indent}{}", cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}
