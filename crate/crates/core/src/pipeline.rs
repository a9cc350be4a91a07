//! End-to-end run: extract with a panel, normalize each prediction, then
//! aggregate per document.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::aggregate::{aggregate, Aggregation, ConsensusDelegate, WeightVector};
use crate::error::{Error, Result};
use crate::extractors::{run_panel, BackendFailure, ExtractorBackend, ModelPrediction, PanelEntry};
use crate::normalize::{normalize_fields_report, SkillOntology};
use crate::schema::ResumeDocument;

/// Normalized predictions keyed by document id, each list ordered by model id.
pub type PredictionTable = BTreeMap<String, Vec<ModelPrediction>>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentResult {
    pub document_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregation: Option<Aggregation>,
    pub failures: Vec<BackendFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Normalizes every prediction in place, logging normalization warnings.
pub fn normalize_panel(entries: &mut [PanelEntry], ontology: &SkillOntology) {
    entries.par_iter_mut().for_each(|entry| {
        for p in entry.predictions.iter_mut() {
            let (normalized, warnings) = normalize_fields_report(&p.prediction, ontology);
            for w in warnings {
                log::debug!("{} / {}: {w}", entry.document_id, p.model_id);
            }
            p.prediction = normalized;
        }
    });
}

pub fn prediction_table(entries: &[PanelEntry]) -> PredictionTable {
    entries
        .iter()
        .map(|e| (e.document_id.clone(), e.predictions.clone()))
        .collect()
}

/// Runs `f` on a dedicated pool of `parallelism` threads, or on the global pool.
pub fn with_pool<T: Send>(parallelism: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match parallelism {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(f)),
        None => Ok(f()),
    }
}

/// Extracts, normalizes and aggregates every document. Fails before any
/// extraction if a backend has no weight; per-document failures are
/// recorded in the results instead of aborting the run.
pub fn run_pipeline(
    documents: &[ResumeDocument],
    backends: &[Arc<dyn ExtractorBackend>],
    weights: &WeightVector,
    delegate: &dyn ConsensusDelegate,
    ontology: &SkillOntology,
    parallelism: Option<usize>,
) -> Result<Vec<DocumentResult>> {
    weights.check_covers(backends.iter().map(|b| b.model_id()))?;
    let mut entries = run_panel(documents, backends, parallelism)?;
    normalize_panel(&mut entries, ontology);
    aggregate_entries(documents, entries, weights, delegate, parallelism)
}

/// Aggregates normalized panel output. Entries whose backends all failed
/// keep their error; aggregation errors are recorded per document.
pub fn aggregate_entries(
    documents: &[ResumeDocument],
    entries: Vec<PanelEntry>,
    weights: &WeightVector,
    delegate: &dyn ConsensusDelegate,
    parallelism: Option<usize>,
) -> Result<Vec<DocumentResult>> {
    let by_id: BTreeMap<&str, &ResumeDocument> = documents.iter().map(|d| (d.id.as_str(), d)).collect();
    with_pool(parallelism, || {
        entries
            .into_par_iter()
            .map(|entry| {
                let mut result = DocumentResult {
                    document_id: entry.document_id.clone(),
                    aggregation: None,
                    failures: entry.failures,
                    error: entry.error,
                };
                if result.error.is_none() {
                    match by_id.get(entry.document_id.as_str()) {
                        Some(doc) => match aggregate(doc, &entry.predictions, weights, delegate) {
                            Ok(a) => result.aggregation = Some(a),
                            Err(e) => result.error = Some(e.to_string()),
                        },
                        None => result.error = Some("document not found".into()),
                    }
                }
                result
            })
            .collect()
    })
}

/// Re-aggregates precomputed predictions without extracting again.
pub fn aggregate_table(
    documents: &[ResumeDocument],
    table: &PredictionTable,
    weights: &WeightVector,
    delegate: &dyn ConsensusDelegate,
) -> Result<Vec<Aggregation>> {
    documents
        .par_iter()
        .map(|doc| {
            let preds = table
                .get(&doc.id)
                .ok_or_else(|| Error::Evaluation(format!("no predictions for `{}`", doc.id)))?;
            aggregate(doc, preds, weights, delegate)
        })
        .collect()
}
