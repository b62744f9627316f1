//! The set file: canonical JSON with sorted keys and a trailing newline.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use progfree_core::IntSet;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub method: String,
    /// `None` for deterministic methods.
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFile {
    pub schema_version: u32,
    pub universe: u64,
    pub k: usize,
    pub degree: u32,
    pub elements: Vec<u64>,
    pub provenance: Provenance,
    pub certified: bool,
}

impl SetFile {
    pub fn new(set: &IntSet, k: usize, degree: u32, provenance: Provenance, certified: bool) -> Self {
        SetFile {
            schema_version: SCHEMA_VERSION,
            universe: set.universe(),
            k,
            degree,
            elements: set.members().to_vec(),
            provenance,
            certified,
        }
    }

    pub fn set(&self) -> Result<IntSet, progfree_core::Error> {
        IntSet::new(self.universe, self.elements.clone())
    }

    /// Canonical text: compact JSON, keys sorted at every level, one `\n`.
    pub fn to_canonical(&self) -> String {
        // `Value` keeps object keys in a BTreeMap, so this sorts them
        let value = serde_json::to_value(self).expect("set files serialize");
        let mut text = serde_json::to_string(&value).expect("values serialize");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let file: SetFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            ));
        }
        if file.k == 0 || file.degree == 0 {
            return Err("k and degree must be positive".into());
        }
        file.set().map_err(|e| e.to_string())?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|source| CliError::Read { path: path.to_owned(), source })?;
        Self::parse(&text).map_err(|reason| CliError::Malformed { path: path.to_owned(), reason })
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> SetFile {
        let mut parameters = BTreeMap::new();
        parameters.insert("delta".into(), json!(0.1 + 0.2));
        parameters.insert("dim".into(), json!(4));
        let set = IntSet::new(10, vec![1, 2, 4, 5, 10]).unwrap();
        SetFile::new(&set, 3, 1, Provenance { method: "torus".into(), seed: Some(u64::MAX), parameters }, true)
    }

    #[test]
    fn canonical_round_trip() {
        let text = sample().to_canonical();
        assert!(text.ends_with("}\n") && !text.contains('\r'));
        let back = SetFile::parse(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(back.to_canonical(), text);
        // keys come out sorted
        let keys = ["certified", "degree", "elements", "k", "provenance", "schema_version", "universe"];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_files() {
        let good = sample().to_canonical();
        assert!(SetFile::parse(&good[..good.len() / 2]).is_err());
        assert!(SetFile::parse(&good.replace("[1,2,4,5,10]", "[2,1]")).is_err());
        assert!(SetFile::parse(&good.replace("[1,2,4,5,10]", "[1,11]")).is_err());
        assert!(SetFile::parse(&good.replace("\"schema_version\":1", "\"schema_version\":9")).is_err());
        assert!(SetFile::parse(&good.replace("\"k\":3", "\"k\":3,\"extra\":0")).is_err());
    }
}
