use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GroupParams, OwfParams, OwsgParams, PrimitiveError};

/// JSON parameter file for the primitives.
///
/// ```json
/// { "group": { "p": 1019, "g": 4 },
///   "owf": { "kind": "toy", "n": 8, "m": 16, "seed": 7 },
///   "owsg": { "n": 8, "m": 3, "seed": 7 } }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterFile {
    #[serde(default)]
    pub group: GroupParams,
    pub owf: Option<OwfParams>,
    pub owsg: Option<OwsgParams>,
}

impl ParameterFile {
    pub fn from_json(text: &str) -> Result<Self, PrimitiveError> {
        let file: Self = serde_json::from_str(text)
            .map_err(|e| PrimitiveError::InvalidParameters(e.to_string()))?;
        file.group.validate()?;
        if let Some(owf) = &file.owf {
            owf.build()?;
        }
        if let Some(owsg) = file.owsg {
            super::OwsgSpec::new(owsg)?;
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, PrimitiveError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PrimitiveError::InvalidParameters(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let f = ParameterFile::from_json(
            r#"{ "group": { "p": 1019, "g": 4 },
                 "owf": { "kind": "toy", "n": 8, "m": 16, "seed": 7 },
                 "owsg": { "n": 8, "m": 3, "seed": 7 } }"#,
        )
        .unwrap();
        assert_eq!(f.group, GroupParams { p: 1019, g: 4 });
        assert_eq!(
            f.owf,
            Some(OwfParams::Toy {
                n: 8,
                m: 16,
                seed: 7
            })
        );
        assert_eq!(f.owsg.unwrap().layers, 3);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_groups() {
        assert!(ParameterFile::from_json(r#"{ "owf": null, "owsg": null, "extra": 1 }"#).is_err());
        assert!(ParameterFile::from_json(r#"{ "group": { "p": 1021, "g": 4 } }"#).is_err());
        assert!(
            ParameterFile::from_json(r#"{ "owf": { "kind": "hash", "n": 4, "m": 64 } }"#).is_err()
        );
    }
}
