//! Extractor backends: the trait every backend implements, a seeded mock
//! driven by gold resumes, and a chat-completion HTTP client.

mod http;
mod mock;
mod panel;
mod repair;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::{ParsedResume, ResumeDocument};

pub use http::{ChatClient, EndpointConfig, HttpBackend, DEFAULT_FIELD_TEMPLATE, DEFAULT_TEMPLATE, SCHEMA_DESCRIPTION};
pub use mock::{CorruptionKind, MockBackend, MockProfile};
pub use panel::{run_panel, BackendFailure, PanelEntry};
pub use repair::repair_json;

/// One backend's answer for one document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelPrediction {
    pub model_id: String,
    pub prediction: ParsedResume,
    pub latency_ms: u64,
    /// Backend output before repair, kept for auditing.
    pub raw_response: String,
}

pub trait ExtractorBackend: Send + Sync {
    fn model_id(&self) -> &str;
    fn extract(&self, document: &ResumeDocument) -> Result<ModelPrediction>;
}

/// A backend entry of the panel config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BackendSpec {
    Mock(MockProfile),
    Http(EndpointConfig),
}

impl BackendSpec {
    pub fn model_id(&self) -> &str {
        match self {
            BackendSpec::Mock(p) => &p.model_id,
            BackendSpec::Http(e) => &e.model_id,
        }
    }
}

/// How conflicting experience/education lists are fused.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConsensusSpec {
    /// Take the highest-weight model's list.
    #[default]
    Fallback,
    /// Offline vote restricted to values found in the document text.
    Grounded,
    /// Ask a chat-completion endpoint to merge the candidates.
    Llm(EndpointConfig),
}

/// Contents of a panel config file:
///
/// ```json
/// {
///   "backends": [
///     {"kind": "mock", "model_id": "m1", "seed": 7,
///      "per_field_error_rate": {"email": 0.2}, "corruption_kind": {"email": "drop"}},
///     {"kind": "http", "model_id": "m2", "base_url": "http://localhost:8000",
///      "model": "my-model", "api_key_env_var": "MY_KEY"}
///   ],
///   "consensus": {"kind": "fallback"}
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelConfig {
    pub backends: Vec<BackendSpec>,
    #[serde(default)]
    pub consensus: ConsensusSpec,
}

impl PanelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: PanelConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("panel config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        PanelConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.backends.is_empty() {
            return Err(Error::Config("panel config lists no backends".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &self.backends {
            if !seen.insert(b.model_id()) {
                return Err(Error::Config(format!("duplicate model_id `{}`", b.model_id())));
            }
            match b {
                BackendSpec::Mock(p) => p.validate()?,
                BackendSpec::Http(e) => e.validate()?,
            }
        }
        if let ConsensusSpec::Llm(e) = &self.consensus {
            e.validate()?;
        }
        Ok(())
    }

    pub fn model_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.backends.iter().map(BackendSpec::model_id).collect();
        ids.sort_unstable();
        ids
    }

    /// Instantiates the backends. Mock backends read gold resumes from `golds`.
    pub fn build_backends(
        &self,
        golds: Arc<BTreeMap<String, ParsedResume>>,
    ) -> Result<Vec<Arc<dyn ExtractorBackend>>> {
        self.backends
            .iter()
            .map(|b| -> Result<Arc<dyn ExtractorBackend>> {
                Ok(match b {
                    BackendSpec::Mock(p) => Arc::new(MockBackend::new(p.clone(), golds.clone())?),
                    BackendSpec::Http(e) => Arc::new(HttpBackend::new(e.clone())?),
                })
            })
            .collect()
    }
}
