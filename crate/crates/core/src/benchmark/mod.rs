//! Design ingestion: ITC'02 `.soc` files, the native `.core` fixture format
//! and per-core power files.

mod itc02;
mod native;
mod power;

pub use itc02::parse_itc02;
pub use native::{parse_native, write_native};
pub use power::{merge_power, parse_power_file};

use crate::design::SocDesign;
use crate::error::Result;

/// Which reader a design text needs, judged by its first record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignFormat {
    Itc02,
    Native,
}

pub fn detect_format(text: &str) -> DesignFormat {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next());
    match first {
        Some("SocName" | "TotalModules" | "Options" | "Module") => DesignFormat::Itc02,
        _ => DesignFormat::Native,
    }
}

pub fn parse_design(text: &str) -> Result<SocDesign> {
    match detect_format(text) {
        DesignFormat::Itc02 => parse_itc02(text),
        DesignFormat::Native => parse_native(text),
    }
}

/// Parse a design (either format) and merge an optional power file onto it.
pub fn load_design(design_text: &str, power_text: Option<&str>) -> Result<SocDesign> {
    let mut design = parse_design(design_text)?;
    if let Some(text) = power_text {
        let powers = parse_power_file(text)?;
        merge_power(&mut design, &powers)?;
    }
    Ok(design)
}
