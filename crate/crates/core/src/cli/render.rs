//! Text, CSV and JSON output of result rows.
//!
//! Table mode rounds probabilities and interval limits to 3 decimals and
//! significance measures to 4; CSV and JSON carry full precision.

use serde::Serialize;

use crate::inference::{Diagnostics, MethodResult};
use crate::meta::{ForestRow, RandomEffectsResult};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// One output line: a method run at one hyper-probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub method: String,
    pub hyper: Option<f64>,
    pub significance: Option<f64>,
    pub interval_prob: f64,
    pub prob_ge_lower: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub diagnostics: Diagnostics,
    /// Which column the analyst fixed: `interval_prob` or `prob_ge_lower`.
    #[serde(skip)]
    pub assigned: Assigned,
    /// Replaces the significance cell in table mode.
    #[serde(skip)]
    pub significance_text: Option<String>,
    /// Footnote marker appended to the interval probability in table mode.
    #[serde(skip)]
    pub mark: Option<&'static str>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Assigned {
    #[default]
    None,
    Prior,
    IntervalProb,
    ProbGeLower,
}

impl Row {
    pub fn from_result(r: &MethodResult, level: f64) -> Result<Self> {
        let (lo, hi) = r.central_interval(level)?;
        Ok(Self {
            method: r.method.name().to_string(),
            hyper: r.hyper,
            significance: r.diagnostics.significance,
            interval_prob: r.interval_prob,
            prob_ge_lower: r.prob_ge_lower,
            ci_lo: lo.exp(),
            ci_hi: hi.exp(),
            diagnostics: r.diagnostics.clone(),
            assigned: Assigned::None,
            significance_text: None,
            mark: None,
        })
    }

    pub fn assigned(mut self, a: Assigned) -> Self {
        self.assigned = a;
        self
    }
}

fn fixed(x: f64, d: usize) -> String {
    format!("{x:.d$}")
}

fn starred(x: f64, star: bool) -> String {
    if star {
        format!("{}*", fixed(x, 3))
    } else {
        fixed(x, 3)
    }
}

fn pad_table(header: &[&str], body: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in body {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let s: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect());
    for r in body {
        out += &line(r.clone());
    }
    out
}

pub fn table(rows: &[Row]) -> String {
    let header = [
        "method",
        "prior/assigned",
        "significance",
        "P(in I)",
        "P(>= lower)",
        "central interval (OR)",
    ];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let hyper = match (r.hyper, r.assigned) {
                (Some(h), Assigned::Prior) => format!("{}*", fixed(h, 3)),
                _ => "n/a".to_string(),
            };
            let sig = r
                .significance_text
                .clone()
                .or(r.significance.map(|s| fixed(s, 4)))
                .unwrap_or_else(|| "n/a".to_string());
            let mut inside = starred(r.interval_prob, r.assigned == Assigned::IntervalProb);
            if let Some(m) = r.mark {
                inside.push_str(m);
            }
            vec![
                r.method.clone(),
                hyper,
                sig,
                inside,
                starred(r.prob_ge_lower, r.assigned == Assigned::ProbGeLower),
                format!("({}, {})", fixed(r.ci_lo, 3), fixed(r.ci_hi, 3)),
            ]
        })
        .collect();
    pad_table(&header, &body)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "method",
        "hyper",
        "significance",
        "interval_prob",
        "prob_ge_lower",
        "ci_lo",
        "ci_hi",
    ])
    .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.method.clone(),
            opt(r.hyper),
            opt(r.significance),
            r.interval_prob.to_string(),
            r.prob_ge_lower.to_string(),
            r.ci_lo.to_string(),
            r.ci_hi.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn json(rows: &[Row]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialise") + "\n"
}

pub fn rows(rows: &[Row], format: Format) -> String {
    match format {
        Format::Table => table(rows),
        Format::Csv => csv(rows),
        Format::Json => json(rows),
    }
}

#[derive(Serialize)]
struct MetaJson<'a> {
    rows: &'a [ForestRow],
    pooled_log_or: f64,
    pooled_se: f64,
    tau2: f64,
    q_stat: f64,
}

pub fn meta(rows: &[ForestRow], re: &RandomEffectsResult, format: Format) -> String {
    match format {
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.label.clone(),
                        fixed(r.or, 3),
                        format!("({}, {})", fixed(r.lo, 3), fixed(r.hi, 3)),
                    ]
                })
                .collect();
            let mut out = pad_table(&["study", "OR", "interval"], &body);
            out += &format!(
                "tau2 = {}  Q = {}\n",
                fixed(re.tau2, 4),
                fixed(re.q_stat, 4)
            );
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["label", "or", "lo", "hi", "combined"])
                .expect("in-memory write");
            for r in rows {
                w.write_record([
                    r.label.clone(),
                    r.or.to_string(),
                    r.lo.to_string(),
                    r.hi.to_string(),
                    r.combined.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Json => {
            let j = MetaJson {
                rows,
                pooled_log_or: re.pooled,
                pooled_se: re.pooled_se,
                tau2: re.tau2,
                q_stat: re.q_stat,
            };
            serde_json::to_string_pretty(&j).expect("meta serialises") + "\n"
        }
    }
}
