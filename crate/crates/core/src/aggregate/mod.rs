//! Field-level fusion of per-model predictions.
//!
//! Scalars go through a weighted majority vote, skills through a strict
//! weighted threshold at half the panel weight, and conflicting
//! experience/education lists through a consensus delegate.

mod consensus;
mod vote;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::extractors::{ConsensusSpec, ModelPrediction};
use crate::normalize::{normalize_fields, SkillOntology};
use crate::schema::{
    education_from_value, experience_from_value, validate, Field, ParsedResume, ResumeDocument,
};

pub use consensus::{
    consensus_prompt, fallback_choice, ConsensusCandidate, ConsensusDelegate, ConsensusRequest,
    FallbackDelegate, GroundedDelegate, LlmDelegate,
};
pub use vote::{weighted_majority_vote, weighted_threshold_vote, WEIGHT_TOLERANCE};

/// Positive, finite vote weight per model id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct WeightVector(BTreeMap<String, f64>);

impl WeightVector {
    pub fn new(weights: BTreeMap<String, f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Config("weight vector is empty".into()));
        }
        for (id, w) in &weights {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::Config(format!("weight for `{id}` must be positive and finite, got {w}")));
            }
        }
        if !weights.values().sum::<f64>().is_finite() {
            return Err(Error::Config("total weight overflows".into()));
        }
        Ok(WeightVector(weights))
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        WeightVector::new(pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect())
    }

    /// Parses either a JSON object (`{"a": 3, "b": 2}`) or `a=3,b=2`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            let map: BTreeMap<String, f64> = serde_json::from_str(text)
                .map_err(|e| Error::Config(format!("weight vector: {e}")))?;
            return WeightVector::new(map);
        }
        let mut map = BTreeMap::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected model=weight, got `{part}`")))?;
            let w: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad weight `{v}` for `{k}`")))?;
            if map.insert(k.trim().to_owned(), w).is_some() {
                return Err(Error::Config(format!("model `{k}` weighted twice")));
            }
        }
        WeightVector::new(map)
    }

    pub fn get(&self, model_id: &str) -> Option<f64> {
        self.0.get(model_id).copied()
    }

    pub fn total(&self) -> f64 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn model_ids(&self) -> Vec<&str> {
        self.0.keys().map(String::as_str).collect()
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        WeightVector::new(self.0.iter().map(|(k, v)| (k.clone(), v * factor)).collect())
    }

    /// Fails unless every id in `model_ids` has a weight.
    pub fn check_covers<'a>(&self, model_ids: impl IntoIterator<Item = &'a str>) -> Result<()> {
        let missing: Vec<&str> = model_ids.into_iter().filter(|m| !self.0.contains_key(*m)).collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!("no weight for model(s): {}", missing.join(", "))))
        }
    }
}

impl TryFrom<BTreeMap<String, f64>> for WeightVector {
    type Error = Error;
    fn try_from(m: BTreeMap<String, f64>) -> Result<Self> {
        WeightVector::new(m)
    }
}

impl From<WeightVector> for BTreeMap<String, f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Majority,
    Threshold,
    Consensus,
    Passthrough,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub model_id: String,
    pub weight: f64,
    pub value: Value,
}

/// Audit record of one field's decision. For skills the tally is per
/// skill, so each skill's weight is at most the panel total but the tally
/// as a whole can exceed it. For nested fields the tally keys are the
/// canonical JSON of each distinct list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldVote {
    pub field: Field,
    pub candidates: Vec<Candidate>,
    pub strategy_used: Strategy,
    pub winner: Value,
    pub tally: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregation {
    pub resume: ParsedResume,
    /// One vote per field, in [`Field::ALL`] order.
    pub votes: Vec<FieldVote>,
    pub warnings: Vec<String>,
}

/// Builds the delegate described by a panel config.
pub fn build_delegate(spec: &ConsensusSpec) -> Result<Box<dyn ConsensusDelegate>> {
    Ok(match spec {
        ConsensusSpec::Fallback => Box::new(FallbackDelegate),
        ConsensusSpec::Grounded => Box::new(GroundedDelegate),
        ConsensusSpec::Llm(e) => Box::new(LlmDelegate::new(e.clone())?),
    })
}

/// Fuses normalized predictions for one document.
///
/// Predictions are processed in model id order, so the result does not
/// depend on their order in `predictions`. The skills threshold is half the
/// total weight of the models present.
pub fn aggregate(
    document: &ResumeDocument,
    predictions: &[ModelPrediction],
    weights: &WeightVector,
    delegate: &dyn ConsensusDelegate,
) -> Result<Aggregation> {
    if predictions.is_empty() {
        return Err(Error::NoCandidates);
    }
    let mut panel: Vec<(&ModelPrediction, f64)> = predictions
        .iter()
        .map(|p| {
            weights
                .get(&p.model_id)
                .map(|w| (p, w))
                .ok_or_else(|| Error::Config(format!("no weight for model `{}`", p.model_id)))
        })
        .collect::<Result<_>>()?;
    panel.sort_by(|a, b| a.0.model_id.cmp(&b.0.model_id));
    let ids: BTreeSet<&str> = panel.iter().map(|(p, _)| p.model_id.as_str()).collect();
    if ids.len() != panel.len() {
        return Err(Error::Config("duplicate model ids in panel".into()));
    }

    let candidates = |field: Field| -> Vec<Candidate> {
        panel
            .iter()
            .map(|(p, w)| Candidate {
                model_id: p.model_id.clone(),
                weight: *w,
                value: p.prediction.field_value(field),
            })
            .collect()
    };

    let mut resume = ParsedResume::default();
    let mut votes = Vec::with_capacity(Field::ALL.len());
    let mut warnings = Vec::new();

    for field in Field::SCALARS {
        let ballots: Vec<(String, f64)> = panel
            .iter()
            .map(|(p, w)| (p.prediction.scalar(field).expect("scalar").to_owned(), *w))
            .collect();
        let (winner, tally) = weighted_majority_vote(&ballots)?;
        *resume.scalar_mut(field).expect("scalar") = winner.clone();
        votes.push(FieldVote {
            field,
            candidates: candidates(field),
            strategy_used: Strategy::Majority,
            winner: Value::String(winner),
            tally,
            note: None,
        });
    }

    let lists: Vec<(Vec<String>, f64)> = panel
        .iter()
        .map(|(p, w)| (p.prediction.skills.clone(), *w))
        .collect();
    let threshold = 0.5 * panel.iter().map(|(_, w)| w).sum::<f64>();
    let (skills, tally) = weighted_threshold_vote(&lists, threshold);
    resume.skills = skills;
    votes.push(FieldVote {
        field: Field::Skills,
        candidates: candidates(Field::Skills),
        strategy_used: Strategy::Threshold,
        winner: resume.field_value(Field::Skills),
        tally,
        note: Some(format!("threshold {threshold}")),
    });

    for field in [Field::Experience, Field::Education] {
        let cands = candidates(field);
        let mut tally: BTreeMap<String, f64> = BTreeMap::new();
        for c in &cands {
            *tally.entry(c.value.to_string()).or_insert(0.0) += c.weight;
        }
        let (strategy, winner, note) = if tally.len() == 1 {
            (Strategy::Passthrough, cands[0].value.clone(), None)
        } else {
            let request = ConsensusRequest {
                field,
                document_text: document.raw_text.clone(),
                candidates: cands
                    .iter()
                    .map(|c| ConsensusCandidate {
                        model_id: c.model_id.clone(),
                        weight: c.weight,
                        value: c.value.clone(),
                    })
                    .collect(),
            };
            let (value, note) = run_consensus(&request, delegate, &mut warnings)?;
            (Strategy::Consensus, value, Some(note))
        };
        set_nested(&mut resume, field, &winner)?;
        votes.push(FieldVote {
            field,
            candidates: cands,
            strategy_used: strategy,
            winner: resume.field_value(field),
            tally,
            note,
        });
    }

    Ok(Aggregation {
        resume,
        votes,
        warnings,
    })
}

fn set_nested(resume: &mut ParsedResume, field: Field, value: &Value) -> Result<()> {
    match field {
        Field::Experience => resume.experience = experience_from_value(value)?,
        Field::Education => resume.education = education_from_value(value)?,
        _ => unreachable!("nested fields only"),
    }
    Ok(())
}

/// Parses, normalizes and validates a delegate answer.
fn accept(field: Field, value: &Value) -> Result<Value> {
    let mut r = ParsedResume::default();
    set_nested(&mut r, field, value)?;
    let r = normalize_fields(&r, &SkillOntology::empty());
    let problems: Vec<String> = validate(&r)
        .into_iter()
        .filter(|v| v.field.starts_with(field.as_str()))
        .map(|v| v.to_string())
        .collect();
    if !problems.is_empty() {
        return Err(Error::schema(field.as_str(), problems.join("; ")));
    }
    Ok(r.field_value(field))
}

fn run_consensus(
    request: &ConsensusRequest,
    delegate: &dyn ConsensusDelegate,
    warnings: &mut Vec<String>,
) -> Result<(Value, String)> {
    let fallback = || -> Result<Value> { Ok(fallback_choice(request)?.value.clone()) };
    if delegate.name() == FallbackDelegate.name() {
        return Ok((fallback()?, "fallback".into()));
    }
    match delegate.fuse(request).and_then(|v| accept(request.field, &v)) {
        Ok(v) => Ok((v, delegate.name().to_owned())),
        Err(e) => {
            let msg = format!("{} consensus for {} failed, used fallback: {e}", delegate.name(), request.field);
            log::warn!("{msg}");
            warnings.push(msg);
            Ok((fallback()?, "fallback".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::tests::sample;
    use crate::schema::PLACEHOLDER;
    use serde_json::json;

    fn pred(id: &str, r: ParsedResume) -> ModelPrediction {
        ModelPrediction {
            model_id: id.into(),
            prediction: r,
            latency_ms: 0,
            raw_response: String::new(),
        }
    }

    fn w321() -> WeightVector {
        WeightVector::from_pairs([("alpha", 3.0), ("beta", 2.0), ("gamma", 1.0)]).unwrap()
    }

    fn doc() -> ResumeDocument {
        ResumeDocument::new("d", "text")
    }

    #[test]
    fn weight_vector_parsing() {
        let a = WeightVector::parse("alpha=3, beta=2,gamma=1").unwrap();
        let b = WeightVector::parse(r#"{"alpha":3,"beta":2,"gamma":1}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total(), 6.0);
        assert_eq!(a.to_string(), "alpha=3,beta=2,gamma=1");
        assert!(WeightVector::parse("a=0").is_err());
        assert!(WeightVector::parse("a=-1").is_err());
        assert!(WeightVector::parse("a").is_err());
        assert!(WeightVector::parse("").is_err());
        assert!(WeightVector::parse("a=1,a=2").is_err());
    }

    #[test]
    fn unanimous_panel_reproduces_input() {
        let r = sample();
        let preds = [pred("alpha", r.clone()), pred("beta", r.clone()), pred("gamma", r.clone())];
        let a = aggregate(&doc(), &preds, &w321(), &FallbackDelegate).unwrap();
        assert_eq!(a.resume, r);
        assert_eq!(a.votes.len(), 7);
        let fields: Vec<Field> = a.votes.iter().map(|v| v.field).collect();
        assert_eq!(fields, Field::ALL);
        assert_eq!(a.votes[5].strategy_used, Strategy::Passthrough);
        assert_eq!(a.votes[6].strategy_used, Strategy::Passthrough);
    }

    #[test]
    fn name_tie_goes_to_heaviest_supporter() {
        let mut john = sample();
        john.name = "John Smith".into();
        let mut jon = sample();
        jon.name = "Jon Smith".into();
        let preds = [pred("alpha", john), pred("beta", jon.clone()), pred("gamma", jon)];
        let a = aggregate(&doc(), &preds, &w321(), &FallbackDelegate).unwrap();
        assert_eq!(a.resume.name, "John Smith");
        assert_eq!(a.votes[0].tally["John Smith"], 3.0);
        assert_eq!(a.votes[0].tally["Jon Smith"], 3.0);
    }

    #[test]
    fn all_placeholder_propagates() {
        let mut r = sample();
        r.phone = PLACEHOLDER.into();
        let preds = [pred("alpha", r.clone()), pred("beta", r.clone()), pred("gamma", r)];
        let a = aggregate(&doc(), &preds, &w321(), &FallbackDelegate).unwrap();
        assert_eq!(a.resume.phone, PLACEHOLDER);
    }

    #[test]
    fn conflicting_history_uses_fallback() {
        let base = sample();
        let mut other = sample();
        other.experience[0].company = "Elsewhere".into();
        let preds = [pred("alpha", base.clone()), pred("beta", other.clone()), pred("gamma", other)];
        let a = aggregate(&doc(), &preds, &w321(), &FallbackDelegate).unwrap();
        assert_eq!(a.resume.experience, base.experience);
        assert_eq!(a.votes[5].strategy_used, Strategy::Consensus);
        assert_eq!(a.votes[5].note.as_deref(), Some("fallback"));
    }

    struct Broken;
    impl ConsensusDelegate for Broken {
        fn name(&self) -> &str {
            "broken"
        }
        fn fuse(&self, _: &ConsensusRequest) -> Result<Value> {
            Ok(json!("not a list"))
        }
    }

    struct BadDates;
    impl ConsensusDelegate for BadDates {
        fn name(&self) -> &str {
            "bad-dates"
        }
        fn fuse(&self, _: &ConsensusRequest) -> Result<Value> {
            Ok(json!([{"title": "T", "company": "C", "location": "L", "start_date": "present", "end_date": "2020-01-01", "bullets": ["x"]}]))
        }
    }

    #[test]
    fn invalid_delegate_output_falls_back_with_warning() {
        let base = sample();
        let mut other = sample();
        other.experience.clear();
        let preds = [pred("alpha", base.clone()), pred("beta", other)];
        let w = WeightVector::from_pairs([("alpha", 3.0), ("beta", 2.0)]).unwrap();
        let a = aggregate(&doc(), &preds, &w, &Broken).unwrap();
        assert_eq!(a.resume.experience, base.experience);
        assert_eq!(a.warnings.len(), 1);
        assert_eq!(a.votes[5].note.as_deref(), Some("fallback"));
        // Normalization repairs the start date, so this one is accepted.
        let a = aggregate(&doc(), &preds, &w, &BadDates).unwrap();
        assert_eq!(a.resume.experience[0].start_date, PLACEHOLDER);
        assert_eq!(a.votes[5].note.as_deref(), Some("bad-dates"));
    }

    #[test]
    fn unweighted_model_is_config_error() {
        let preds = [pred("alpha", sample()), pred("mystery", sample())];
        assert!(matches!(
            aggregate(&doc(), &preds, &w321(), &FallbackDelegate),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            aggregate(&doc(), &[], &w321(), &FallbackDelegate),
            Err(Error::NoCandidates)
        ));
    }

    #[test]
    fn single_model_panel() {
        let r = sample();
        let w = WeightVector::from_pairs([("solo", 1.0)]).unwrap();
        let a = aggregate(&doc(), &[pred("solo", r.clone())], &w, &FallbackDelegate).unwrap();
        assert_eq!(a.resume, r);
    }

    #[test]
    fn skills_threshold_excludes_single_heavy_model() {
        let mut alpha = sample();
        alpha.skills = vec!["Rust".into(), "Go".into()];
        let mut beta = sample();
        beta.skills = vec!["Rust".into()];
        let mut gamma = sample();
        gamma.skills = vec!["Rust".into()];
        let preds = [pred("alpha", alpha), pred("beta", beta), pred("gamma", gamma)];
        let a = aggregate(&doc(), &preds, &w321(), &FallbackDelegate).unwrap();
        assert_eq!(a.resume.skills, ["Rust"]);
        assert_eq!(a.votes[4].tally["Go"], 3.0);
    }
}
