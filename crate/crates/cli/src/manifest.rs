//! Run manifest: everything needed to reproduce a run bit-identically.

use std::path::Path;

use serde::{Deserialize, Serialize};

use radlbm_core::rte::{RteConfig, StepDiagnostics};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: ToolInfo,
    /// Solver registry name the run was executed with.
    pub mode: String,
    pub seed: u64,
    pub config: RteConfig,
    /// Snapshot step indices written as profile CSVs.
    pub snapshots: Vec<usize>,
    pub outputs: Vec<String>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn tool_info() -> ToolInfo {
        ToolInfo {
            name: "radlbm".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("cannot serialize manifest: {e}")))?;
        std::fs::write(path, json)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: invalid manifest: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use radlbm_core::rte::{SourceSpec, StepMode};

    #[test]
    fn manifest_round_trips_through_json() {
        let manifest = RunManifest {
            tool: RunManifest::tool_info(),
            mode: "quantum-sampled".into(),
            seed: 7,
            config: RteConfig {
                kappa: 2.5,
                sigma: 0.5,
                mu: 1.0,
                c: 1.0,
                n: 5,
                dt: 1.0 / 32.0,
                source: SourceSpec::centered(1.0),
                steps: 64,
                mode: StepMode::Sampled,
                shots: 1_000_000,
                seed: 7,
            },
            snapshots: vec![32, 64],
            outputs: vec!["profile_32.csv".into(), "profile_64.csv".into()],
            diagnostics: vec![StepDiagnostics {
                success_probability: 0.5,
                norm_phi: 0.088,
            }],
            wall_time_seconds: 0.25,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        manifest.save(&path).unwrap();
        let back = RunManifest::load(&path).unwrap();
        assert_eq!(manifest, back);
    }
}
