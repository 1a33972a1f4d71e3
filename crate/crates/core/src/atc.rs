//! Anatomical Therapeutic Chemical (ATC) codes.
//!
//! A full substance code has seven characters, `N05CF01`:
//! anatomical group (`N`), therapeutic subgroup (`N05`),
//! pharmacological subgroup (`N05C`), chemical subgroup and substance.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ANATOMICAL_GROUPS: &[u8] = b"ABCDGHJLMNPRSV";

/// Attribute keys attached to nodes whose id parses as an ATC code.
pub const ANATOMICAL: &str = "anatomical";
pub const THERAPEUTIC: &str = "therapeutic";
pub const PHARMACOLOGICAL: &str = "pharmacological";

/// ATC hierarchy levels used for grouping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtcLevel {
    Anatomical,
    Therapeutic,
    Pharmacological,
}

impl AtcLevel {
    pub fn attribute_key(self) -> &'static str {
        match self {
            AtcLevel::Anatomical => ANATOMICAL,
            AtcLevel::Therapeutic => THERAPEUTIC,
            AtcLevel::Pharmacological => PHARMACOLOGICAL,
        }
    }

    fn prefix_len(self) -> usize {
        match self {
            AtcLevel::Anatomical => 1,
            AtcLevel::Therapeutic => 3,
            AtcLevel::Pharmacological => 4,
        }
    }
}

/// A validated seven-character ATC substance code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AtcCode(String);

impl AtcCode {
    pub fn parse(code: &str) -> Result<Self> {
        if is_valid(code) {
            Ok(AtcCode(code.to_owned()))
        } else {
            Err(Error::InvalidAtc(code.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn level(&self, level: AtcLevel) -> &str {
        &self.0[..level.prefix_len()]
    }
}

/// Pattern letter-digit-digit-letter-letter-digit-digit with a known
/// anatomical main group.
pub fn is_valid(code: &str) -> bool {
    let b = code.as_bytes();
    b.len() == 7
        && ANATOMICAL_GROUPS.contains(&b[0])
        && b[1].is_ascii_digit()
        && b[2].is_ascii_digit()
        && b[3].is_ascii_uppercase()
        && b[4].is_ascii_uppercase()
        && b[5].is_ascii_digit()
        && b[6].is_ascii_digit()
}

impl fmt::Display for AtcCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for AtcCode {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        if is_valid(&value) {
            Ok(AtcCode(value))
        } else {
            Err(Error::InvalidAtc(value))
        }
    }
}

impl From<AtcCode> for String {
    fn from(code: AtcCode) -> String {
        code.0
    }
}

impl AsRef<str> for AtcCode {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_well_formed_codes() {
        for code in ["N05CF01", "B01AC06", "C10AA01", "S01ED51", "V03AB15"] {
            assert!(is_valid(code), "{code}");
        }
    }

    #[test]
    fn rejects_malformed_codes() {
        for code in ["", "N05CF0", "N05CF011", "n05CF01", "X05CF01", "N5CCF01", "N05C101", "E05CF01"] {
            assert!(!is_valid(code), "{code}");
        }
    }

    #[test]
    fn levels() {
        let code = AtcCode::parse("N05CF01").unwrap();
        assert_eq!(code.level(AtcLevel::Anatomical), "N");
        assert_eq!(code.level(AtcLevel::Therapeutic), "N05");
        assert_eq!(code.level(AtcLevel::Pharmacological), "N05C");
    }
}
