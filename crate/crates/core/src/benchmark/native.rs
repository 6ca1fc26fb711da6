//! Line-oriented native fixture format.
//!
//! ```text
//! # comment
//! design d695
//! core 1
//! inputs 32
//! outputs 32
//! bidirs 0
//! scan
//! patterns 12
//! power 660
//! ```
//!
//! `scan` lists the internal scan chain lengths (possibly none). Within a
//! block `patterns` is required; the other keys default to zero / empty.

use std::fmt::Write as _;

use crate::design::{CoreSpec, SocDesign};
use crate::error::{Error, Result};

#[derive(Default)]
struct Block {
    id: u32,
    line: usize,
    inputs: Option<u32>,
    outputs: Option<u32>,
    bidirs: Option<u32>,
    scan: Option<Vec<u32>>,
    patterns: Option<u32>,
    power: Option<u32>,
}

impl Block {
    fn finish(self) -> Result<CoreSpec> {
        let num_patterns = self.patterns.ok_or_else(|| {
            Error::parse(
                self.line,
                format!("core {} has no `patterns` line", self.id),
            )
        })?;
        Ok(CoreSpec {
            id: self.id,
            num_inputs: self.inputs.unwrap_or(0),
            num_outputs: self.outputs.unwrap_or(0),
            num_bidirs: self.bidirs.unwrap_or(0),
            scan_chain_lengths: self.scan.unwrap_or_default(),
            num_patterns,
            power_mw: self.power.unwrap_or(0),
        })
    }
}

fn number(tok: &str, line: usize, key: &str) -> Result<u32> {
    let v: i64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("{key}: expected integer, got {tok:?}")))?;
    if v < 0 {
        return Err(Error::Validation(format!(
            "line {line}: {key} is negative ({v})"
        )));
    }
    u32::try_from(v).map_err(|_| Error::parse(line, format!("{key}: value {v} out of range")))
}

fn set<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::parse(line, format!("duplicate key {key:?}")));
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse_native(text: &str) -> Result<SocDesign> {
    let mut name: Option<String> = None;
    let mut cores = Vec::new();
    let mut current: Option<Block> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut toks = content.split_whitespace();
        let key = toks.next().unwrap_or_default();
        let rest: Vec<&str> = toks.collect();

        let single = |rest: &[&str]| -> Result<u32> {
            match rest {
                [v] => number(v, line, key),
                _ => Err(Error::parse(line, format!("{key} takes exactly one value"))),
            }
        };

        match key {
            "design" => {
                if current.is_some() || !cores.is_empty() {
                    return Err(Error::parse(line, "`design` must precede all core blocks"));
                }
                let v = rest.join(" ");
                set(&mut name, v, line, key)?;
            }
            "core" => {
                if let Some(block) = current.take() {
                    cores.push(block.finish()?);
                }
                current = Some(Block {
                    id: single(&rest)?,
                    line,
                    ..Block::default()
                });
            }
            _ => {
                let block = current
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, format!("{key:?} outside a core block")))?;
                match key {
                    "inputs" => set(&mut block.inputs, single(&rest)?, line, key)?,
                    "outputs" => set(&mut block.outputs, single(&rest)?, line, key)?,
                    "bidirs" => set(&mut block.bidirs, single(&rest)?, line, key)?,
                    "patterns" => set(&mut block.patterns, single(&rest)?, line, key)?,
                    "power" => set(&mut block.power, single(&rest)?, line, key)?,
                    "scan" => {
                        let lengths = rest
                            .iter()
                            .map(|t| number(t, line, key))
                            .collect::<Result<Vec<_>>>()?;
                        set(&mut block.scan, lengths, line, key)?
                    }
                    _ => return Err(Error::parse(line, format!("unknown key {key:?}"))),
                }
            }
        }
    }
    if let Some(block) = current.take() {
        cores.push(block.finish()?);
    }
    SocDesign::new(name.unwrap_or_default(), cores)
}

pub fn write_native(design: &SocDesign) -> String {
    let mut out = String::new();
    if !design.name.is_empty() {
        let _ = writeln!(out, "design {}", design.name);
    }
    for core in &design.cores {
        let _ = writeln!(out, "core {}", core.id);
        let _ = writeln!(out, "inputs {}", core.num_inputs);
        let _ = writeln!(out, "outputs {}", core.num_outputs);
        let _ = writeln!(out, "bidirs {}", core.num_bidirs);
        out.push_str("scan");
        for l in &core.scan_chain_lengths {
            let _ = write!(out, " {l}");
        }
        out.push('\n');
        let _ = writeln!(out, "patterns {}", core.num_patterns);
        let _ = writeln!(out, "power {}", core.power_mw);
    }
    out
}
