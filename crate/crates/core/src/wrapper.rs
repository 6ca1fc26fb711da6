//! Wrapper design: partition a core's scanned elements into wrapper scan
//! chains for a given TAM width and derive the resulting test time.
//!
//! Sequential cores follow a capped best-fit: the scan chains are sorted by
//! decreasing length and each goes to the wrapper chain whose length after the
//! assignment is closest to, without exceeding, a cap of
//! `ceil(total_elements / max(1, w / 2))`. A new wrapper chain is opened only
//! when nothing fits. Functional I/O cells are then spread over the `w` wrapper
//! slots so they fill the slack under the longest chain before anything grows.

use crate::design::CoreSpec;
use crate::error::{Error, Result};

/// Test application time in clock cycles for `patterns` vectors shifted through
/// wrapper chains of scan-in depth `s_in` and scan-out depth `s_out`.
pub fn test_time(patterns: u64, s_in: u64, s_out: u64) -> u64 {
    patterns * (1 + s_in.max(s_out)) + s_in.min(s_out)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WrapperChain {
    pub scan_lengths: Vec<u32>,
    pub input_cells: u64,
    pub output_cells: u64,
}

impl WrapperChain {
    pub fn scan_total(&self) -> u64 {
        self.scan_lengths.iter().map(|&l| l as u64).sum()
    }

    pub fn scan_in_length(&self) -> u64 {
        self.scan_total() + self.input_cells
    }

    pub fn scan_out_length(&self) -> u64 {
        self.scan_total() + self.output_cells
    }

    fn is_empty(&self) -> bool {
        self.scan_lengths.is_empty() && self.input_cells == 0 && self.output_cells == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrapperConfig {
    pub chains: Vec<WrapperChain>,
    pub tam_u: u32,
    pub s_in: u64,
    pub s_out: u64,
    pub test_time: u64,
    /// Every terminal sits on its own TAM wire with no shifting, so
    /// `s_in = s_out = 0` even though each chain holds one cell.
    pub direct_io: bool,
}

impl WrapperConfig {
    pub fn longest_chain(&self) -> u64 {
        self.s_in.max(self.s_out)
    }

    fn from_chains(chains: Vec<WrapperChain>, patterns: u64) -> Self {
        let chains: Vec<_> = chains.into_iter().filter(|c| !c.is_empty()).collect();
        let s_in = chains.iter().map(|c| c.scan_in_length()).max().unwrap_or(0);
        let s_out = chains
            .iter()
            .map(|c| c.scan_out_length())
            .max()
            .unwrap_or(0);
        WrapperConfig {
            tam_u: chains.len() as u32,
            test_time: test_time(patterns, s_in, s_out),
            chains,
            s_in,
            s_out,
            direct_io: false,
        }
    }
}

pub fn design_wrapper(w_max: u32, core: &CoreSpec) -> Result<WrapperConfig> {
    if w_max == 0 {
        return Err(Error::ZeroWidth);
    }
    let patterns = core.num_patterns as u64;
    if core.is_combinational() {
        Ok(combinational(w_max, core, patterns))
    } else {
        Ok(sequential(w_max, core, patterns))
    }
}

fn combinational(w_max: u32, core: &CoreSpec, patterns: u64) -> WrapperConfig {
    let ins = core.input_cells();
    let outs = core.output_cells();
    let w = w_max as u64;
    if ins + outs <= w {
        let chains: Vec<WrapperChain> = (0..ins)
            .map(|_| WrapperChain {
                input_cells: 1,
                ..Default::default()
            })
            .chain((0..outs).map(|_| WrapperChain {
                output_cells: 1,
                ..Default::default()
            }))
            .collect();
        return WrapperConfig {
            tam_u: chains.len() as u32,
            chains,
            s_in: 0,
            s_out: 0,
            test_time: patterns,
            direct_io: true,
        };
    }
    // Inputs fill from the first chain, outputs from the last, so every one
    // of the w chains carries something once ins + outs > w.
    let mut chains = vec![WrapperChain::default(); w_max as usize];
    for (k, chain) in chains.iter_mut().enumerate() {
        let k = k as u64;
        chain.input_cells = ins / w + u64::from(k < ins % w);
        chain.output_cells = outs / w + u64::from(w - 1 - k < outs % w);
    }
    WrapperConfig::from_chains(chains, patterns)
}

/// Scan-element cap per wrapper chain for a TAM width.
pub fn peak_scan_element(w_max: u32, core: &CoreSpec) -> u64 {
    let mid_lines = (w_max / 2).max(1) as u64;
    let total = core.total_scan_length() + core.terminal_cells();
    total.div_ceil(mid_lines)
}

fn sequential(w_max: u32, core: &CoreSpec, patterns: u64) -> WrapperConfig {
    let cap = peak_scan_element(w_max, core);
    let mut sorted = core.scan_chain_lengths.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));

    let mut chains: Vec<WrapperChain> = Vec::new();
    let mut lengths: Vec<u64> = Vec::new();
    for len in sorted {
        let l = len as u64;
        // Largest post-assignment length that stays under the cap; first index wins ties.
        let mut best: Option<usize> = None;
        for (k, &cur) in lengths.iter().enumerate() {
            if cur + l <= cap && best.is_none_or(|b| cur > lengths[b]) {
                best = Some(k);
            }
        }
        let slot = match best {
            Some(k) => k,
            None if chains.len() < w_max as usize => {
                chains.push(WrapperChain::default());
                lengths.push(0);
                chains.len() - 1
            }
            None => shortest(&lengths),
        };
        chains[slot].scan_lengths.push(len);
        lengths[slot] += l;
    }

    chains.resize(w_max as usize, WrapperChain::default());
    lengths.resize(w_max as usize, 0);

    let mut scan_in = lengths.clone();
    for (slot, n) in spread_cells(&mut scan_in, core.input_cells()) {
        chains[slot].input_cells += n;
    }
    let mut scan_out = lengths;
    for (slot, n) in spread_cells(&mut scan_out, core.output_cells()) {
        chains[slot].output_cells += n;
    }
    WrapperConfig::from_chains(chains, patterns)
}

fn shortest(lengths: &[u64]) -> usize {
    let mut best = 0;
    for (k, &l) in lengths.iter().enumerate() {
        if l < lengths[best] {
            best = k;
        }
    }
    best
}

/// Add `cells` unit cells one at a time: each goes to the chain whose length
/// after the add is closest to, but not above, the current maximum; if every
/// chain is already at the maximum it goes to the shortest one. Consecutive
/// cells landing on the same chain are batched. Returns `(slot, count)` pairs.
fn spread_cells(lengths: &mut [u64], mut cells: u64) -> Vec<(usize, u64)> {
    let mut placed = Vec::new();
    while cells > 0 {
        let max = lengths.iter().copied().max().unwrap_or(0);
        let mut best: Option<usize> = None;
        for (k, &l) in lengths.iter().enumerate() {
            if l < max && best.is_none_or(|b| l > lengths[b]) {
                best = Some(k);
            }
        }
        let (slot, n) = match best {
            Some(k) => (k, cells.min(max - lengths[k])),
            None => (shortest(lengths), 1),
        };
        lengths[slot] += n;
        cells -= n;
        placed.push((slot, n));
    }
    placed
}

/// One row of a width sweep: the widths `w_lo..=w_hi` all give the same
/// wrapper outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepRow {
    pub w_lo: u32,
    pub w_hi: u32,
    pub tam_u: u32,
    pub longest_chain: u64,
    pub test_time: u64,
}

/// Run `design_wrapper` for every width `1..=w_max` and merge runs of widths
/// with identical results. Rows come out in increasing width order.
pub fn wrapper_sweep(core: &CoreSpec, w_max: u32) -> Vec<SweepRow> {
    let mut rows: Vec<SweepRow> = Vec::new();
    for w in 1..=w_max {
        let cfg = design_wrapper(w, core).expect("w >= 1");
        let key = (cfg.tam_u, cfg.longest_chain(), cfg.test_time);
        match rows.last_mut() {
            Some(r) if (r.tam_u, r.longest_chain, r.test_time) == key => r.w_hi = w,
            _ => rows.push(SweepRow {
                w_lo: w,
                w_hi: w,
                tam_u: key.0,
                longest_chain: key.1,
                test_time: key.2,
            }),
        }
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TamTimePoint {
    pub tam_u: u32,
    pub test_time: u64,
    pub longest_chain: u64,
}

/// Width/time trade-off points of a core for widths up to `w_max`, by
/// decreasing `tam_u`. Each `tam_u` keeps its fastest design, and a point is
/// kept only if it is strictly faster than every point using fewer wires.
pub fn tam_time_table(core: &CoreSpec, w_max: u32) -> Vec<TamTimePoint> {
    let mut best: Vec<TamTimePoint> = Vec::new();
    for row in wrapper_sweep(core, w_max) {
        match best.iter_mut().find(|p| p.tam_u == row.tam_u) {
            Some(p) if row.test_time < p.test_time => {
                p.test_time = row.test_time;
                p.longest_chain = row.longest_chain;
            }
            Some(_) => {}
            None => best.push(TamTimePoint {
                tam_u: row.tam_u,
                test_time: row.test_time,
                longest_chain: row.longest_chain,
            }),
        }
    }
    best.sort_by_key(|p| p.tam_u);
    let mut kept: Vec<TamTimePoint> = Vec::with_capacity(best.len());
    for p in best {
        if kept.last().is_none_or(|k| p.test_time < k.test_time) {
            kept.push(p);
        }
    }
    kept.reverse();
    kept
}
