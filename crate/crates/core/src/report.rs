//! Named result tables and their renderings.
//!
//! Analyses keep exact counts and unrounded shares; rounding happens here,
//! once, when a table is built.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analyses::{
    AuthorshipDistribution, CaseControlReport, CorrelationReport, OverlapReport, OverlapRow,
    ProducerReport, ProducerRow,
};

/// Decimals for percentages, odds ratios and their intervals.
pub const PCT_DECIMALS: usize = 1;
pub const R_DECIMALS: usize = 3;
pub const P_DECIMALS: usize = 3;
pub const CHI_DECIMALS: usize = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown format `{other}` (expected csv, json or markdown)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Fixed { value: f64, decimals: usize },
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn fixed(value: f64, decimals: usize) -> Self {
        Cell::Fixed { value, decimals }
    }

    pub fn pct(value: f64) -> Self {
        Cell::fixed(value, PCT_DECIMALS)
    }

    fn opt(value: Option<f64>, decimals: usize) -> Self {
        value.map_or(Cell::Empty, |v| Cell::fixed(v, decimals))
    }

    /// Plain rendering used by CSV and markdown.
    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Fixed { value, decimals } if value.is_finite() => format!("{value:.decimals$}"),
            Cell::Fixed { value, .. } => value.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
            Cell::Fixed { value, .. } if !value.is_finite() => "null".into(),
            Cell::Empty => "null".into(),
            other => other.render(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
            ReportFormat::Markdown => self.to_markdown(),
        }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let key = serde_json::to_string(col).expect("string serializes");
                let _ = write!(out, "{key}: {}", cell.json());
            }
            out.push('}');
        }
        out.push_str(if self.rows.is_empty() { "]\n" } else { "\n]\n" });
        out
    }

    fn to_markdown(&self) -> String {
        let mut out = format!("## {}\n\n| {} |\n|", self.name, self.columns.join(" | "));
        out.push_str(&"---|".repeat(self.columns.len()));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render().replace('|', "\\|")).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        out
    }
}

/// Rounds percentages to `decimals` places so the rounded values still sum
/// to exactly 100 (largest-remainder apportionment). All-zero input is
/// returned unchanged.
pub fn round_to_hundred(values: &[f64], decimals: usize) -> Vec<f64> {
    let scale = 10f64.powi(decimals as i32);
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return values.to_vec();
    }
    let target = (100.0 * scale).round() as i64;
    let scaled: Vec<f64> = values.iter().map(|v| v / total * 100.0 * scale).collect();
    let mut units: Vec<i64> = scaled.iter().map(|s| s.floor() as i64).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| {
        let (ri, rj) = (scaled[i] - scaled[i].floor(), scaled[j] - scaled[j].floor());
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    let missing = target - units.iter().sum::<i64>();
    for &i in order.iter().take(missing.max(0) as usize) {
        units[i] += 1;
    }
    units.into_iter().map(|u| u as f64 / scale).collect()
}

pub const OVERLAP_COLUMNS: &[&str] = &[
    "discipline_id",
    "n_output",
    "n_hca",
    "hca_share_pct",
    "with_ts_pct",
    "ts_only_pct",
    "mixed_pct",
    "with_nonts_pct",
    "nonts_only_pct",
    "n_ts_only",
    "n_mixed",
    "n_nonts_only",
];

fn overlap_row(r: &OverlapRow) -> Vec<Cell> {
    // the three exclusive buckets are rounded together so they sum to 100
    let buckets = round_to_hundred(
        &[r.n_ts_only as f64, r.n_mixed() as f64, r.n_nonts_only as f64],
        PCT_DECIMALS,
    );
    vec![
        Cell::text(&r.discipline_id),
        Cell::Int(r.n_output),
        Cell::Int(r.n_hca),
        Cell::pct(100.0 * r.hca_share_of_output()),
        Cell::pct(100.0 * r.share_with_ts()),
        Cell::pct(buckets[0]),
        Cell::pct(buckets[1]),
        Cell::pct(100.0 * r.share_with_nonts()),
        Cell::pct(buckets[2]),
        Cell::Int(r.n_ts_only),
        Cell::Int(r.n_mixed()),
        Cell::Int(r.n_nonts_only),
    ]
}

pub fn overlap_table(report: &OverlapReport) -> Table {
    let mut t = Table::new("overlap", OVERLAP_COLUMNS);
    for r in report.rows.iter().chain([&report.total]) {
        t.push(overlap_row(r));
    }
    t
}

pub const PRODUCER_COLUMNS: &[&str] = &[
    "discipline_id",
    "n_ts",
    "n_ts_with_hca",
    "ts_with_hca_pct",
    "n_nonts",
    "n_nonts_with_hca",
    "nonts_with_hca_pct",
];

fn producer_row(r: &ProducerRow) -> Vec<Cell> {
    vec![
        Cell::text(&r.discipline_id),
        Cell::Int(r.n_ts),
        Cell::Int(r.n_ts_with_hca),
        Cell::pct(100.0 * r.share_ts_with_hca()),
        Cell::Int(r.n_nonts),
        Cell::Int(r.n_nonts_with_hca),
        Cell::pct(100.0 * r.share_nonts_with_hca()),
    ]
}

pub fn producer_table(report: &ProducerReport) -> Table {
    let mut t = Table::new("producers", PRODUCER_COLUMNS);
    for r in report.rows.iter().chain([&report.total]) {
        t.push(producer_row(r));
    }
    t
}

pub const CORRELATION_COLUMNS: &[&str] = &[
    "level",
    "discipline_id",
    "field_id",
    "n_researchers",
    "n_hca_authors",
    "r",
    "n_fields",
    "n_defined",
    "n_weak",
    "n_strong",
    "mean_r",
    "min_r",
    "min_field_id",
    "max_r",
    "max_field_id",
];

pub fn correlation_table(report: &CorrelationReport) -> Table {
    let mut t = Table::new("correlation", CORRELATION_COLUMNS);
    for f in &report.fields {
        let mut row = vec![
            Cell::text("field"),
            Cell::text(&f.discipline_id),
            Cell::text(&f.field_id),
            Cell::Int(f.n_researchers as u64),
            Cell::Int(f.n_hca_authors as u64),
            Cell::opt(f.r, R_DECIMALS),
        ];
        row.resize(CORRELATION_COLUMNS.len(), Cell::Empty);
        t.push(row);
    }
    for d in &report.disciplines {
        let extreme = |e: &Option<(String, f64)>| match e {
            Some((id, r)) => [Cell::fixed(*r, R_DECIMALS), Cell::text(id)],
            None => [Cell::Empty, Cell::Empty],
        };
        let mut row = vec![
            Cell::text("discipline"),
            Cell::text(&d.discipline_id),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Int(d.n_fields as u64),
            Cell::Int(d.n_defined as u64),
            Cell::Int(d.n_weak as u64),
            Cell::Int(d.n_strong as u64),
            Cell::opt(d.mean, R_DECIMALS),
        ];
        row.extend(extreme(&d.min));
        row.extend(extreme(&d.max));
        t.push(row);
    }
    t
}

pub const DISTRIBUTION_COLUMNS: &[&str] = &[
    "discipline_id",
    "k",
    "bin",
    "label",
    "n_hca",
    "frequency",
    "relative_pct",
    "cumulative_pct",
];

/// Percentile interval covered by bin `j` of `k`.
pub fn bin_label(j: usize, k: usize) -> String {
    let edge = |i: usize| {
        let v = 100.0 * i as f64 / k as f64;
        if v.fract() == 0.0 {
            format!("{v:.0}")
        } else {
            format!("{v:.1}")
        }
    };
    format!("{}-{}", edge(j - 1), edge(j))
}

pub fn distribution_table(distributions: &[AuthorshipDistribution]) -> Table {
    let mut t = Table::new("distribution", DISTRIBUTION_COLUMNS);
    for d in distributions {
        // cumulate the rounded shares so the two columns agree
        let relative = round_to_hundred(&d.relative(), PCT_DECIMALS);
        let scale = 10f64.powi(PCT_DECIMALS as i32);
        let mut units = 0i64;
        for (j, (f, rel)) in d.frequencies.iter().zip(relative).enumerate() {
            units += (rel * scale).round() as i64;
            let cum = units as f64 / scale;
            t.push(vec![
                Cell::text(&d.discipline_id),
                Cell::Int(d.k as u64),
                Cell::Int(j as u64 + 1),
                Cell::text(bin_label(j + 1, d.k)),
                Cell::Int(d.n_hca),
                Cell::Int(*f),
                Cell::pct(rel),
                Cell::pct(cum),
            ]);
        }
    }
    t
}

pub const CASE_CONTROL_COLUMNS: &[&str] = &[
    "rank",
    "discipline_id",
    "a_ts_cases",
    "b_nonts_cases",
    "c_ts_controls",
    "d_nonts_controls",
    "or",
    "ci_low",
    "ci_high",
    "method",
    "degenerate",
    "chi_square",
    "df",
    "p_value",
];

/// Label of the row carrying the cross-discipline homogeneity test.
pub const HOMOGENEITY_ROW: &str = "homogeneity";

pub fn case_control_table(reports: &[CaseControlReport]) -> Table {
    let mut t = Table::new("case_control", CASE_CONTROL_COLUMNS);
    for report in reports {
        for r in &report.rows {
            let c = r.contingency;
            let mut row = vec![
                Cell::text(report.rank.as_str()),
                Cell::text(&r.discipline_id),
                Cell::Int(c.a),
                Cell::Int(c.b),
                Cell::Int(c.c),
                Cell::Int(c.d),
            ];
            match &r.or_result {
                Some(or) => row.extend([
                    Cell::pct(or.or_value),
                    Cell::pct(or.ci_low),
                    Cell::pct(or.ci_high),
                    Cell::text(or.method.as_str()),
                ]),
                None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
            }
            row.push(Cell::Bool(r.is_degenerate()));
            row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
            t.push(row);
        }
        let mut row = vec![Cell::text(report.rank.as_str()), Cell::text(HOMOGENEITY_ROW)];
        row.resize(9, Cell::Empty);
        match &report.homogeneity {
            Ok(h) => {
                row.extend([
                    Cell::text(h.method.as_str()),
                    Cell::Bool(false),
                    Cell::fixed(h.chi_square, CHI_DECIMALS),
                    Cell::Int(h.degrees_of_freedom as u64),
                    Cell::fixed(h.p_value, P_DECIMALS),
                ]);
            }
            Err(_) => row.extend([Cell::Empty, Cell::Bool(true), Cell::Empty, Cell::Empty, Cell::Empty]),
        }
        t.push(row);
    }
    t
}
