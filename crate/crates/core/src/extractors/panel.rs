use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{ExtractorBackend, ModelPrediction};
use crate::error::{Error, Result};
use crate::schema::ResumeDocument;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackendFailure {
    pub model_id: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_response: Option<String>,
}

/// Panel output for one document. `predictions` and `failures` are both
/// ordered by model id; `error` is set when every backend failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelEntry {
    pub document_id: String,
    pub predictions: Vec<ModelPrediction>,
    pub failures: Vec<BackendFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs every backend on every document. Output order follows `documents`
/// and, within a document, model ids; it does not depend on scheduling or
/// on `parallelism` (worker threads; `None` uses the global pool).
pub fn run_panel(
    documents: &[ResumeDocument],
    backends: &[Arc<dyn ExtractorBackend>],
    parallelism: Option<usize>,
) -> Result<Vec<PanelEntry>> {
    if backends.is_empty() {
        return Err(Error::Config("panel has no backends".into()));
    }
    let mut order: Vec<&Arc<dyn ExtractorBackend>> = backends.iter().collect();
    order.sort_by(|a, b| a.model_id().cmp(b.model_id()));
    let ids: BTreeSet<&str> = order.iter().map(|b| b.model_id()).collect();
    if ids.len() != order.len() {
        return Err(Error::Config("panel has duplicate model ids".into()));
    }

    let m = order.len();
    let work = || -> Vec<Result<ModelPrediction>> {
        (0..documents.len() * m)
            .into_par_iter()
            .map(|k| {
                let (doc, backend) = (&documents[k / m], order[k % m]);
                backend.extract(doc).map(|mut p| {
                    p.model_id = backend.model_id().to_owned();
                    p
                })
            })
            .collect()
    };
    let results = match parallelism {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };

    let mut results = results.into_iter();
    let entries = documents
        .iter()
        .map(|doc| {
            let mut entry = PanelEntry {
                document_id: doc.id.clone(),
                predictions: Vec::new(),
                failures: Vec::new(),
                error: None,
            };
            for backend in &order {
                match results.next().expect("one result per task") {
                    Ok(p) => entry.predictions.push(p),
                    Err(e) => {
                        log::warn!("{} failed on {}: {e}", backend.model_id(), doc.id);
                        let raw_response = match &e {
                            Error::ExtractionFailed { raw_response, .. } => Some(raw_response.clone()),
                            _ => None,
                        };
                        entry.failures.push(BackendFailure {
                            model_id: backend.model_id().to_owned(),
                            message: e.to_string(),
                            raw_response,
                        });
                    }
                }
            }
            if entry.predictions.is_empty() {
                entry.error = Some(format!("all {m} backends failed"));
            }
            entry
        })
        .collect();
    Ok(entries)
}
