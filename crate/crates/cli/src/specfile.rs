//! SpecFileV1: a TOML document whose keys mirror [`CcrSpec`] 1:1, plus
//! the sample count used by `synthesize`.
//!
//! ```toml
//! dimension = 4
//! ratios = [0.5, 0.8660254037844386]
//! domain = [-0.45, 0.45]
//! steps = 4000
//!
//! [k1]
//! kind = "rational_sqrt"
//! scale = 2.0
//! rate = 2.0
//! ```

use std::fs;
use std::path::Path;

use ccr_core::{CcrSpec, K1Profile};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub dimension: usize,
    pub ratios: Vec<f64>,
    pub k1: K1Section,
    pub domain: [f64; 2],
    pub steps: usize,
    pub initial_point: Option<Vec<f64>>,
    pub initial_frame: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct K1Section {
    pub kind: String,
    pub value: Option<f64>,
    pub scale: Option<f64>,
    pub rate: Option<f64>,
    pub grid: Option<Vec<f64>>,
    pub values: Option<Vec<f64>>,
}

impl K1Section {
    fn into_profile(self) -> Result<K1Profile, CliError> {
        let kind = self.kind.clone();
        let take = |field: Option<f64>, name: &str| {
            field.ok_or_else(|| CliError::validation(format!("k1 kind {kind:?} needs key {name}")))
        };
        match self.kind.as_str() {
            "constant" => Ok(K1Profile::Constant(take(self.value, "value")?)),
            "rational_sqrt" => Ok(K1Profile::RationalSqrt {
                scale: take(self.scale, "scale")?,
                rate: take(self.rate, "rate")?,
            }),
            "table" => Ok(K1Profile::Table {
                grid: self
                    .grid
                    .ok_or_else(|| CliError::validation("k1 table needs key grid".into()))?,
                values: self
                    .values
                    .ok_or_else(|| CliError::validation("k1 table needs key values".into()))?,
            }),
            other => Err(CliError::validation(format!(
                "unknown k1 kind {other:?} (expected constant, rational_sqrt or table)"
            ))),
        }
    }
}

/// Loads and validates a spec file; validation errors carry the offending
/// key or the library's message.
pub fn load(path: &Path) -> Result<(CcrSpec, usize), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let file: SpecFile = toml::from_str(&text)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    if file.steps < 1 {
        return Err(CliError::validation("steps must be at least 1".into()));
    }
    let steps = file.steps;
    let spec = CcrSpec::new(
        file.dimension,
        file.ratios,
        file.k1.into_profile()?,
        (file.domain[0], file.domain[1]),
        file.initial_point,
        file.initial_frame,
    )?;
    Ok((spec, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(text: &str) -> Result<(CcrSpec, usize), CliError> {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.toml");
        std::fs::write(&path, text).unwrap();
        load(&path)
    }

    #[test]
    fn minimal_spec_loads() {
        let (spec, steps) = load_str(
            "dimension = 3\nratios = [1.0]\ndomain = [0.0, 6.0]\nsteps = 100\n\
             [k1]\nkind = \"constant\"\nvalue = 1.0\n",
        )
        .unwrap();
        assert_eq!(spec.dim, 3);
        assert_eq!(steps, 100);
    }

    #[test]
    fn bad_kind_and_unknown_keys_rejected() {
        assert!(load_str(
            "dimension = 3\nratios = [1.0]\ndomain = [0.0, 6.0]\nsteps = 100\n\
             [k1]\nkind = \"quadratic\"\nvalue = 1.0\n"
        )
        .is_err());
        assert!(load_str(
            "dimension = 3\nratios = [1.0]\ndomain = [0.0, 6.0]\nsteps = 100\nfoo = 1\n\
             [k1]\nkind = \"constant\"\nvalue = 1.0\n"
        )
        .is_err());
    }

    #[test]
    fn core_validation_is_propagated() {
        // ratio count does not match the dimension
        let err = load_str(
            "dimension = 4\nratios = [1.0]\ndomain = [0.0, 6.0]\nsteps = 100\n\
             [k1]\nkind = \"constant\"\nvalue = 1.0\n",
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
