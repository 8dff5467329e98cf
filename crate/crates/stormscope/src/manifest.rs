//! Reproducibility manifests: every CLI run records its inputs, parameters
//! and artifact hashes next to the artifacts. Re-running with the same
//! manifest inputs must reproduce byte-identical artifacts; the fixed-epoch
//! flag pins the only non-deterministic field.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const FIXED_EPOCH: &str = "1970-01-01T00:00:00Z";

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub created_at: String,
    pub params: BTreeMap<String, String>,
    /// input path → sha256
    pub inputs: BTreeMap<String, String>,
    /// artifact file name → sha256
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(command: &str, fixed_epoch: bool) -> Self {
        Manifest {
            tool: "stormscope".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            created_at: if fixed_epoch {
                FIXED_EPOCH.to_string()
            } else {
                crate::corpus::format_timestamp(&chrono::Utc::now())
            },
            params: BTreeMap::new(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input_file(&mut self, path: &Path) -> std::io::Result<&mut Self> {
        let bytes = std::fs::read(path)?;
        self.inputs
            .insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(self)
    }

    pub fn output(&mut self, name: &str, content: &[u8]) -> &mut Self {
        self.outputs.insert(name.to_string(), sha256_hex(content));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn fixed_epoch_manifest_is_deterministic() {
        let mut a = Manifest::new("synth", true);
        a.param("seed", 7).output("x.jsonl", b"data");
        let mut b = Manifest::new("synth", true);
        b.param("seed", 7).output("x.jsonl", b"data");
        assert_eq!(a.to_json(), b.to_json());
    }
}
