//! Our makespans side by side with published numbers for the same cells.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::design::SocDesign;
use crate::error::{Error, Result};
use crate::scheduler::{schedule, Limits};

/// Bundled copy of the published d695 table values.
pub const D695_BASELINES: &str = include_str!("../data/baselines.tsv");

pub const PROPOSED: &str = "proposed";

/// (p_max, w_max) with `None` meaning no power cap.
pub type Cell = (Option<u64>, u32);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Baselines {
    /// Method names in first-seen order.
    pub methods: Vec<String>,
    pub values: BTreeMap<(Cell, String), u64>,
}

impl Baselines {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Baselines::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let f: Vec<&str> = content.split_whitespace().collect();
            let [pmax, wmax, method, cycles] = f[..] else {
                return Err(Error::parse(line, "expected `pmax wmax method cycles`"));
            };
            let p_max = match pmax {
                "none" | "-" => None,
                v => Some(
                    v.parse()
                        .map_err(|_| Error::parse(line, format!("bad pmax {v:?}")))?,
                ),
            };
            let w_max = wmax
                .parse()
                .map_err(|_| Error::parse(line, format!("bad wmax {wmax:?}")))?;
            let cycles = cycles
                .parse()
                .map_err(|_| Error::parse(line, format!("bad cycle count {cycles:?}")))?;
            if !out.methods.iter().any(|m| m == method) {
                out.methods.push(method.to_string());
            }
            out.values
                .insert(((p_max, w_max), method.to_string()), cycles);
        }
        Ok(out)
    }

    pub fn d695() -> Self {
        Self::parse(D695_BASELINES).expect("bundled baselines parse")
    }

    pub fn get(&self, cell: Cell, method: &str) -> Option<u64> {
        self.values.get(&(cell, method.to_string())).copied()
    }

    pub fn proposed(&self, cell: Cell) -> Option<u64> {
        self.get(cell, PROPOSED)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every cell that has a value, ordered by p_max (uncapped first) then width.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self.values.keys().map(|(c, _)| *c).collect();
        cells.dedup();
        cells.sort();
        cells.dedup();
        cells
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub cell: Cell,
    pub ours: u64,
    pub published: Option<u64>,
    /// Percentage difference of ours against the published value.
    pub deviation_pct: Option<f64>,
    pub others: Vec<(String, Option<u64>)>,
}

pub fn deviation_pct(ours: u64, reference: u64) -> f64 {
    (ours as f64 - reference as f64) / reference as f64 * 100.0
}

pub fn build_report(
    design: &SocDesign,
    cells: &[Cell],
    baselines: &Baselines,
) -> Result<Vec<ReportRow>> {
    let others: Vec<&String> = baselines
        .methods
        .iter()
        .filter(|m| *m != PROPOSED)
        .collect();
    cells
        .iter()
        .map(|&cell| {
            let ours = schedule(design, &Limits::new(cell.1, cell.0))?.makespan();
            let published = baselines.proposed(cell);
            Ok(ReportRow {
                cell,
                ours,
                published,
                deviation_pct: published.map(|p| deviation_pct(ours, p)),
                others: others
                    .iter()
                    .map(|m| (m.to_string(), baselines.get(cell, m)))
                    .collect(),
            })
        })
        .collect()
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn render_text(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    if rows.iter().all(|r| r.published.is_none()) {
        out.push_str("note: no published baseline values available, showing our results only\n");
    }
    let methods: Vec<&str> = rows
        .first()
        .map(|r| r.others.iter().map(|(m, _)| m.as_str()).collect())
        .unwrap_or_default();
    let _ = write!(
        out,
        "{:>6} {:>5} {:>9} {:>9} {:>8}",
        "pmax", "wmax", "ours", "paper", "dev%"
    );
    for m in &methods {
        let _ = write!(out, " {m:>8}");
    }
    out.push('\n');
    for r in rows {
        let pmax = r
            .cell
            .0
            .map_or_else(|| "none".to_string(), |p| p.to_string());
        let dev = r
            .deviation_pct
            .map_or_else(|| "-".to_string(), |d| format!("{d:+.1}"));
        let _ = write!(
            out,
            "{:>6} {:>5} {:>9} {:>9} {:>8}",
            pmax,
            r.cell.1,
            r.ours,
            opt(r.published),
            dev
        );
        for (_, v) in &r.others {
            let _ = write!(out, " {:>8}", opt(*v));
        }
        out.push('\n');
    }
    out
}

pub fn render_tsv(rows: &[ReportRow]) -> String {
    let mut out = String::from("pmax\twmax\tours\tpaper\tdeviation_pct");
    if let Some(r) = rows.first() {
        for (m, _) in &r.others {
            let _ = write!(out, "\t{m}");
        }
    }
    out.push('\n');
    for r in rows {
        let pmax = r
            .cell
            .0
            .map_or_else(|| "none".to_string(), |p| p.to_string());
        let dev = r
            .deviation_pct
            .map_or_else(|| "-".to_string(), |d| format!("{d:.2}"));
        let _ = write!(
            out,
            "{pmax}\t{}\t{}\t{}\t{dev}",
            r.cell.1,
            r.ours,
            opt(r.published)
        );
        for (_, v) in &r.others {
            let _ = write!(out, "\t{}", opt(*v));
        }
        out.push('\n');
    }
    out
}
