//! Deterministic report rendering: the same results as JSON, CSV, or a
//! markdown table. Identical inputs produce identical bytes in every
//! format.

use serde::Serialize;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub id: String,
    pub status: String,
    pub metrics: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub invocation: Vec<String>,
    pub results: serde_json::Value,
    pub summary: Vec<SummaryRow>,
}

impl Report {
    pub fn new(
        invocation: Vec<String>,
        results: serde_json::Value,
        summary: Vec<SummaryRow>,
    ) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            invocation,
            results,
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per (experiment, metric); status rows carry the metric name
    /// `status`. Values match the JSON rendering verbatim.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,metric,value\n");
        for row in &self.summary {
            out.push_str(&format!("{},status,{}\n", row.id, row.status));
            for (k, v) in &row.metrics {
                out.push_str(&format!("{},{},{}\n", row.id, k, csv_escape(v)));
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# Report (schema v{})\n\n", self.schema_version));
        out.push_str(&format!("invocation: `{}`\n\n", self.invocation.join(" ")));
        out.push_str("| id | status | metrics |\n|---|---|---|\n");
        for row in &self.summary {
            let metrics: Vec<String> = row
                .metrics
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&format!(
                "| {} | {} | {} |\n",
                row.id,
                row.status,
                metrics.join(", ")
            ));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Md => self.to_markdown(),
        }
    }
}

fn csv_escape(v: &str) -> String {
    if v.contains(',') || v.contains('"') || v.contains('\n') {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}
