//! In-memory model of an SOC under test.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Test parameters of one embedded core.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoreSpec {
    pub id: u32,
    pub num_inputs: u32,
    pub num_outputs: u32,
    pub num_bidirs: u32,
    /// One entry per internal scan chain. Empty for combinational cores.
    pub scan_chain_lengths: Vec<u32>,
    pub num_patterns: u32,
    pub power_mw: u32,
}

impl CoreSpec {
    pub fn is_combinational(&self) -> bool {
        self.scan_chain_lengths.is_empty()
    }

    /// Wrapper cells needed for the functional terminals. A bidirectional
    /// terminal gets both an input and an output cell.
    pub fn terminal_cells(&self) -> u64 {
        self.num_inputs as u64 + self.num_outputs as u64 + 2 * self.num_bidirs as u64
    }

    pub fn input_cells(&self) -> u64 {
        self.num_inputs as u64 + self.num_bidirs as u64
    }

    pub fn output_cells(&self) -> u64 {
        self.num_outputs as u64 + self.num_bidirs as u64
    }

    pub fn total_scan_length(&self) -> u64 {
        self.scan_chain_lengths.iter().map(|&l| l as u64).sum()
    }

    /// Upper bound on the number of wrapper chains that can carry anything.
    pub fn element_count(&self) -> u64 {
        self.scan_chain_lengths.len() as u64 + self.terminal_cells()
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_patterns == 0 {
            return Err(Error::Validation(format!(
                "core {} has zero test patterns",
                self.id
            )));
        }
        if self.element_count() == 0 {
            return Err(Error::Validation(format!(
                "core {} has neither terminals nor scan chains",
                self.id
            )));
        }
        if let Some(pos) = self.scan_chain_lengths.iter().position(|&l| l == 0) {
            return Err(Error::Validation(format!(
                "core {} scan chain {} has zero length",
                self.id,
                pos + 1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SocDesign {
    pub name: String,
    pub cores: Vec<CoreSpec>,
}

impl SocDesign {
    pub fn new(name: impl Into<String>, cores: Vec<CoreSpec>) -> Result<Self> {
        let design = SocDesign {
            name: name.into(),
            cores,
        };
        design.validate()?;
        Ok(design)
    }

    /// Core ids must be unique and listed in ascending order; every core must
    /// satisfy its own invariants.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let mut last = None;
        for core in &self.cores {
            core.validate()?;
            if !seen.insert(core.id) {
                return Err(Error::Validation(format!("duplicate core id {}", core.id)));
            }
            if let Some(prev) = last {
                if core.id < prev {
                    return Err(Error::Validation(format!(
                        "core ids out of order: {} after {}",
                        core.id, prev
                    )));
                }
            }
            last = Some(core.id);
        }
        Ok(())
    }

    pub fn core(&self, id: u32) -> Option<&CoreSpec> {
        self.cores.iter().find(|c| c.id == id)
    }

    pub fn len(&self) -> usize {
        self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }
}
