//! Provenance record written next to every generated dataset.

use serde::{Deserialize, Serialize};

/// Identifies the exact configuration, seed and tool build behind an output
/// file. The digest is a stable hash of the canonical config serialization
/// plus the seed, so identical runs are recognizable without diffing files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_digest: String,
    pub seed: u64,
    pub tool_version: String,
    /// UTC creation time, RFC 3339.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(config_digest: String, seed: u64) -> Self {
        Self {
            config_digest,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_carries_version_and_digest() {
        let m = RunManifest::new("abc123".into(), 7);
        assert_eq!(m.seed, 7);
        assert_eq!(m.config_digest, "abc123");
        assert_eq!(m.tool_version, env!("CARGO_PKG_VERSION"));
        assert!(m.timestamp.ends_with('Z'));
    }
}
