//! Sweep tables as CSV and aligned text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// One row of a detection-rate sweep. Percentages are relative to the
/// ground-truth totals; `None` marks a variant that was not run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub key: f64,
    pub traditional: Option<f64>,
    pub full: Option<f64>,
    pub approx_identified: Option<f64>,
    pub approx_discovered: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyKind {
    /// A fraction in [0, 1] (camera ratio, corridor ratio, probability).
    Ratio,
    /// An integer count (number of actions).
    Actions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub title: String,
    pub key: KeyKind,
    pub rows: Vec<SweepRow>,
}

const COLUMNS: [&str; 4] = ["traditional", "full", "approx_identified", "approx_discovered"];

impl SweepTable {
    fn key_name(&self) -> &'static str {
        match self.key {
            KeyKind::Ratio => "ratio",
            KeyKind::Actions => "actions",
        }
    }

    fn key_cell(&self, v: f64) -> String {
        match self.key {
            KeyKind::Ratio => format!("{v:.2}"),
            KeyKind::Actions => format!("{}", v.round() as i64),
        }
    }

    fn cells(row: &SweepRow) -> [Option<f64>; 4] {
        [row.traditional, row.full, row.approx_identified, row.approx_discovered]
    }

    /// Columns with at least one value.
    fn present(&self) -> Vec<usize> {
        (0..COLUMNS.len())
            .filter(|&c| self.rows.iter().any(|r| Self::cells(r)[c].is_some()))
            .collect()
    }

    /// CSV with header `ratio,traditional,full,approx_identified,approx_discovered`
    /// (columns of variants that were not run are left out).
    pub fn to_csv(&self) -> String {
        let cols = self.present();
        let mut s = String::new();
        s.push_str(self.key_name());
        for &c in &cols {
            s.push(',');
            s.push_str(COLUMNS[c]);
        }
        s.push('\n');
        for r in &self.rows {
            s.push_str(&self.key_cell(r.key));
            let cells = Self::cells(r);
            for &c in &cols {
                let _ = write!(s, ",{:.2}", cells[c].unwrap_or(0.0));
            }
            s.push('\n');
        }
        s
    }

    /// Aligned text rendering; the approximate columns are shown as
    /// `identified+discovered`.
    pub fn to_text(&self) -> String {
        let cols = self.present();
        let mut header = vec![self.key_name().to_string()];
        let has = |c: usize| cols.contains(&c);
        if has(0) {
            header.push("traditional".into());
        }
        if has(1) {
            header.push("full".into());
        }
        if has(2) || has(3) {
            header.push("approximate".into());
        }
        let mut rows = vec![header];
        for r in &self.rows {
            let mut line = vec![match self.key {
                KeyKind::Ratio => format!("{:.0}%", r.key * 100.0),
                KeyKind::Actions => self.key_cell(r.key),
            }];
            let pct = |v: Option<f64>| format!("{:.1}%", v.unwrap_or(0.0));
            if has(0) {
                line.push(pct(r.traditional));
            }
            if has(1) {
                line.push(pct(r.full));
            }
            if has(2) || has(3) {
                line.push(format!(
                    "{:.1}+{:.1}%",
                    r.approx_identified.unwrap_or(0.0),
                    r.approx_discovered.unwrap_or(0.0)
                ));
            }
            rows.push(line);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut s = format!("{}\n", self.title);
        for r in rows {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}"))
                .collect();
            s.push_str(cells.join("  ").trim_end());
            s.push('\n');
        }
        s
    }
}
