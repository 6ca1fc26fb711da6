//! Width-versus-time charts of a schedule, as an ASCII grid or as SVG.

use std::fmt::Write as _;

use crate::scheduler::Schedule;

pub const SVG_WIRE_PX: u64 = 12;
pub const SVG_TIME_PX: u64 = 1000;
const SVG_MARGIN: u64 = 40;

/// A contiguous band of wires held by one core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Band {
    pub core_id: u32,
    pub start: u64,
    pub finish: u64,
    pub first_wire: u32,
    pub wires: u32,
}

/// Pin every placement to concrete wire indices, lowest free wires first.
/// A core whose wires are not contiguous gets one band per run.
pub fn assign_wires(schedule: &Schedule, w_max: u32) -> Vec<Band> {
    let mut order: Vec<_> = schedule.placements.iter().collect();
    order.sort_by_key(|p| (p.start, p.core_id));
    let lanes = w_max.max(
        schedule
            .placements
            .iter()
            .map(|p| p.width)
            .max()
            .unwrap_or(0),
    );
    let mut busy_until = vec![0u64; lanes as usize];
    let mut bands = Vec::new();
    for p in order {
        let mut free: Vec<u32> = (0..lanes)
            .filter(|&w| busy_until[w as usize] <= p.start)
            .take(p.width as usize)
            .collect();
        // Overfull schedules still get drawn, stacked on the lowest wires.
        if free.len() < p.width as usize {
            free = (0..p.width).collect();
        }
        for &w in &free {
            busy_until[w as usize] = busy_until[w as usize].max(p.finish);
        }
        let mut i = 0;
        while i < free.len() {
            let mut j = i + 1;
            while j < free.len() && free[j] == free[j - 1] + 1 {
                j += 1;
            }
            bands.push(Band {
                core_id: p.core_id,
                start: p.start,
                finish: p.finish,
                first_wire: free[i],
                wires: (j - i) as u32,
            });
            i = j;
        }
    }
    bands
}

fn label_char(core_id: u32) -> char {
    const SYMBOLS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    SYMBOLS[core_id as usize % SYMBOLS.len()] as char
}

/// One text row per wire (top row is the highest wire), `columns` cells
/// across the makespan. Cells show the core id in base 62, `.` when idle.
pub fn ascii_gantt(schedule: &Schedule, w_max: u32, columns: usize) -> String {
    let makespan = schedule.makespan().max(1);
    let columns = columns.max(1);
    let bands = assign_wires(schedule, w_max);
    let lanes = bands
        .iter()
        .map(|b| b.first_wire + b.wires)
        .max()
        .unwrap_or(0)
        .max(w_max) as usize;
    let mut grid = vec![vec!['.'; columns]; lanes];
    for b in &bands {
        let c0 = (b.start as u128 * columns as u128 / makespan as u128) as usize;
        let c1 = (b.finish as u128 * columns as u128).div_ceil(makespan as u128) as usize;
        for row in grid
            .iter_mut()
            .skip(b.first_wire as usize)
            .take(b.wires as usize)
        {
            for cell in &mut row[c0.min(columns)..c1.min(columns)] {
                *cell = label_char(b.core_id);
            }
        }
    }
    let mut out = String::new();
    for (w, row) in grid.iter().enumerate().rev() {
        let _ = writeln!(out, "{:>4} |{}", w + 1, row.iter().collect::<String>());
    }
    let _ = writeln!(out, "     +{}", "-".repeat(columns));
    let _ = writeln!(out, "      0{:>width$}", makespan, width = columns - 1);
    out
}

fn fill_for(core_id: u32) -> String {
    // Golden-angle hue spacing keeps neighbouring ids apart.
    let hue = (core_id as u64 * 137) % 360;
    format!("hsl({hue},55%,70%)")
}

pub fn svg_gantt(schedule: &Schedule, w_max: u32) -> String {
    let makespan = schedule.makespan().max(1);
    let bands = assign_wires(schedule, w_max);
    let lanes = bands
        .iter()
        .map(|b| b.first_wire + b.wires)
        .max()
        .unwrap_or(0)
        .max(w_max) as u64;
    let plot_h = lanes * SVG_WIRE_PX;
    let width = SVG_TIME_PX + 2 * SVG_MARGIN;
    let height = plot_h + 2 * SVG_MARGIN;
    let x_of = |t: u64| SVG_MARGIN as f64 + t as f64 * SVG_TIME_PX as f64 / makespan as f64;
    // Wire 0 sits at the bottom like the usual width-versus-time plot.
    let y_of = |wire: u64| SVG_MARGIN + plot_h - wire * SVG_WIRE_PX;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="{m}" y="{m}" width="{SVG_TIME_PX}" height="{plot_h}" fill="white" stroke="black"/>"#,
        m = SVG_MARGIN
    );
    let mut labelled = std::collections::BTreeSet::new();
    for b in &bands {
        let x = x_of(b.start);
        let w = x_of(b.finish) - x;
        let y = y_of((b.first_wire + b.wires) as u64);
        let h = b.wires as u64 * SVG_WIRE_PX;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{y}" width="{w:.2}" height="{h}" fill="{}" stroke="black" stroke-width="0.5"><title>c{} {}-{} width {}</title></rect>"#,
            fill_for(b.core_id),
            b.core_id,
            b.start,
            b.finish,
            b.wires
        );
        if labelled.insert(b.core_id) {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{}" font-family="monospace" font-size="10" text-anchor="middle" dominant-baseline="middle">c{}</text>"#,
                x + w / 2.0,
                y + h / 2,
                b.core_id
            );
        }
    }
    let axis_y = SVG_MARGIN + plot_h + 14;
    let _ = writeln!(
        out,
        r#"<text x="{SVG_MARGIN}" y="{axis_y}" font-family="monospace" font-size="10">0</text>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{axis_y}" font-family="monospace" font-size="10" text-anchor="end">{makespan}</text>"#,
        SVG_MARGIN + SVG_TIME_PX
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="10" text-anchor="end">W={w_max}</text>"#,
        SVG_MARGIN - 4,
        SVG_MARGIN + 4
    );
    out.push_str("</svg>\n");
    out
}
