//! Reader for ITC'02 SOC benchmark files.
//!
//! Only the fields the scheduler needs are kept: terminal counts, scan chain
//! lengths, pattern counts and an optional per-test `Power` value. Modules
//! without tests (the top-level module 0, hierarchy-only parents) are dropped.
//! Hierarchy is flattened: every module carrying a test becomes one core.

use std::collections::BTreeMap;

use crate::design::{CoreSpec, SocDesign};
use crate::error::{Error, Result};

#[derive(Default)]
struct ModuleRecord {
    defined: bool,
    inputs: u32,
    outputs: u32,
    bidirs: u32,
    scan: Vec<u32>,
    patterns: u64,
    tests: u32,
    power: u32,
}

fn count(tok: Option<&str>, line: usize, what: &str) -> Result<u32> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing value for {what}")))?;
    let v: i64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: expected integer, got {tok:?}")))?;
    if v < 0 {
        return Err(Error::Validation(format!(
            "line {line}: {what} is negative ({v})"
        )));
    }
    u32::try_from(v).map_err(|_| Error::parse(line, format!("{what}: value {v} out of range")))
}

/// Parse the text of an ITC'02 `.soc` file.
pub fn parse_itc02(text: &str) -> Result<SocDesign> {
    let mut name = String::new();
    let mut modules: BTreeMap<u32, ModuleRecord> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "SocName" => {
                name = toks
                    .get(1)
                    .ok_or_else(|| Error::parse(line, "SocName without a name"))?
                    .to_string();
            }
            "TotalModules" => {
                count(toks.get(1).copied(), line, "TotalModules")?;
            }
            "Options" => {}
            "Module" => parse_module_line(&toks, line, &mut modules)?,
            other => {
                return Err(Error::parse(line, format!("unknown record {other:?}")));
            }
        }
    }

    let mut cores = Vec::new();
    for (id, m) in modules {
        if m.tests == 0 || m.patterns == 0 {
            continue;
        }
        if !m.defined {
            return Err(Error::Validation(format!(
                "module {id} has tests but no terminal/scan definition"
            )));
        }
        let num_patterns = u32::try_from(m.patterns)
            .map_err(|_| Error::Validation(format!("module {id}: pattern count overflows")))?;
        cores.push(CoreSpec {
            id,
            num_inputs: m.inputs,
            num_outputs: m.outputs,
            num_bidirs: m.bidirs,
            scan_chain_lengths: m.scan,
            num_patterns,
            power_mw: m.power,
        });
    }
    SocDesign::new(name, cores)
}

fn parse_module_line(
    toks: &[&str],
    line: usize,
    modules: &mut BTreeMap<u32, ModuleRecord>,
) -> Result<()> {
    let id = count(toks.get(1).copied(), line, "Module id")?;
    let kind = *toks
        .get(2)
        .ok_or_else(|| Error::parse(line, "truncated Module record"))?;
    let rec = modules.entry(id).or_default();
    match kind {
        "Level" => {
            if rec.defined {
                return Err(Error::parse(line, format!("module {id} defined twice")));
            }
            rec.defined = true;
            let mut i = 4;
            let mut declared_chains = None;
            while i < toks.len() {
                match toks[i] {
                    "Inputs" => rec.inputs = count(toks.get(i + 1).copied(), line, "Inputs")?,
                    "Outputs" => rec.outputs = count(toks.get(i + 1).copied(), line, "Outputs")?,
                    "Bidirs" => rec.bidirs = count(toks.get(i + 1).copied(), line, "Bidirs")?,
                    "ScanChains" => {
                        declared_chains = Some(count(toks.get(i + 1).copied(), line, "ScanChains")?)
                    }
                    ":" => {
                        rec.scan = toks[i + 1..]
                            .iter()
                            .map(|t| count(Some(t), line, "scan chain length"))
                            .collect::<Result<_>>()?;
                        break;
                    }
                    other => {
                        return Err(Error::parse(
                            line,
                            format!("unknown module field {other:?}"),
                        ))
                    }
                }
                i += 2;
            }
            let declared = declared_chains.unwrap_or(0) as usize;
            if declared != rec.scan.len() {
                return Err(Error::parse(
                    line,
                    format!(
                        "module {id} declares {declared} scan chains but lists {}",
                        rec.scan.len()
                    ),
                ));
            }
        }
        "TotalTests" => {
            rec.tests = count(toks.get(3).copied(), line, "TotalTests")?;
        }
        "Test" => {
            // Multiple test sets collapse into one test: patterns add up.
            let mut i = 4;
            let mut found = false;
            while i < toks.len() {
                match toks[i] {
                    "Patterns" => {
                        rec.patterns += count(toks.get(i + 1).copied(), line, "Patterns")? as u64;
                        found = true;
                        i += 2;
                    }
                    "Power" => {
                        let p = count(toks.get(i + 1).copied(), line, "Power")?;
                        rec.power = rec.power.max(p);
                        i += 2;
                    }
                    _ => i += 1,
                }
            }
            if !found {
                return Err(Error::parse(
                    line,
                    format!("module {id} test without Patterns"),
                ));
            }
            if rec.tests == 0 {
                rec.tests = 1;
            }
        }
        other => {
            return Err(Error::parse(
                line,
                format!("unknown module record {other:?}"),
            ))
        }
    }
    Ok(())
}
