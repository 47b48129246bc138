//! Shared conventions for the crate's JSON artifacts.

use crate::error::{Error, Result};

/// Version tag carried by every structured file this crate writes.
pub const SCHEMA: &str = "truncator/1";

/// Checks an optional `schema` field read from a file.
///
/// Files written by older tooling may omit the tag; anything else must
/// match [`SCHEMA`] exactly.
pub fn check_schema(found: Option<&str>) -> Result<()> {
    match found {
        None => Ok(()),
        Some(s) if s == SCHEMA => Ok(()),
        Some(s) => Err(Error::InvalidMap {
            reason: format!("unsupported schema {s:?}, expected {SCHEMA:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_tag_accepts_missing_and_exact() {
        assert!(check_schema(None).is_ok());
        assert!(check_schema(Some(SCHEMA)).is_ok());
        assert!(check_schema(Some("truncator/2")).is_err());
    }
}
