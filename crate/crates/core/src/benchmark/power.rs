use std::collections::BTreeMap;

use crate::design::SocDesign;
use crate::error::{Error, Result};

/// Parse `core_id power_mw` lines. Blank lines and `#` comments are skipped.
pub fn parse_power_file(text: &str) -> Result<BTreeMap<u32, u32>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let [id, mw] = toks[..] else {
            return Err(Error::parse(line, "expected `core_id power_mw`"));
        };
        let id: u32 = id
            .parse()
            .map_err(|_| Error::parse(line, format!("core id {id:?} is not an integer")))?;
        let mw: u32 = mw
            .trim_end_matches("mW")
            .parse()
            .map_err(|_| Error::parse(line, format!("power {mw:?} is not an integer")))?;
        if map.insert(id, mw).is_some() {
            return Err(Error::DuplicatePower(id));
        }
    }
    Ok(map)
}

/// Overwrite `power_mw` on every core named in `powers`. Cores not named keep
/// their current value. Only the power field is touched.
pub fn merge_power(design: &mut SocDesign, powers: &BTreeMap<u32, u32>) -> Result<()> {
    for &id in powers.keys() {
        if design.core(id).is_none() {
            return Err(Error::UnknownCore(id));
        }
    }
    for core in &mut design.cores {
        if let Some(&p) = powers.get(&core.id) {
            core.power_mw = p;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entries() {
        assert_eq!(
            parse_power_file("10 1144").unwrap(),
            BTreeMap::from([(10, 1144)])
        );
        assert_eq!(
            parse_power_file("4 275\n").unwrap(),
            BTreeMap::from([(4, 275)])
        );
    }

    #[test]
    fn empty_file_is_empty_map() {
        assert!(parse_power_file("").unwrap().is_empty());
        assert!(parse_power_file("# nothing\n\n").unwrap().is_empty());
    }

    #[test]
    fn duplicate_id_rejected() {
        assert_eq!(
            parse_power_file("1 5\n1 6\n").unwrap_err(),
            Error::DuplicatePower(1)
        );
    }

    #[test]
    fn non_integer_rejected() {
        assert!(matches!(
            parse_power_file("1 5.5\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_power_file("x 5\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
