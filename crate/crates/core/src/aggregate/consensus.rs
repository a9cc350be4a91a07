use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use super::vote::{weighted_majority_vote, WEIGHT_TOLERANCE};
use crate::error::{Error, Result};
use crate::extractors::{repair_json, ChatClient, EndpointConfig};
use crate::schema::{is_iso_date, Field, PLACEHOLDER, PRESENT};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusCandidate {
    pub model_id: String,
    pub weight: f64,
    pub value: Value,
}

/// A conflict on a nested field. Candidates are ordered by model id and
/// hold at least two distinct values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusRequest {
    pub field: Field,
    pub document_text: String,
    pub candidates: Vec<ConsensusCandidate>,
}

/// Fuses conflicting experience or education lists into one JSON array.
/// The aggregator validates the output and falls back to
/// [`fallback_choice`] on any error.
pub trait ConsensusDelegate: Send + Sync {
    fn name(&self) -> &str;
    fn fuse(&self, request: &ConsensusRequest) -> Result<Value>;
}

/// The highest-weight candidate; equal weights go to the smallest model id.
pub fn fallback_choice(request: &ConsensusRequest) -> Result<&ConsensusCandidate> {
    let top = request
        .candidates
        .iter()
        .map(|c| c.weight)
        .fold(f64::NEG_INFINITY, f64::max);
    request
        .candidates
        .iter()
        .filter(|c| (c.weight - top).abs() <= WEIGHT_TOLERANCE * top)
        .min_by(|a, b| a.model_id.cmp(&b.model_id))
        .ok_or(Error::NoCandidates)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FallbackDelegate;

impl ConsensusDelegate for FallbackDelegate {
    fn name(&self) -> &str {
        "fallback"
    }

    fn fuse(&self, request: &ConsensusRequest) -> Result<Value> {
        Ok(fallback_choice(request)?.value.clone())
    }
}

/// Offline fusion that checks candidates against the document text.
///
/// The entry count is voted first (weighted, ties to the longer list) and
/// only candidates of that length take part. Then each sub-field of each
/// entry is voted by weighted majority among the values that occur in the
/// document; when no candidate value occurs there, all values vote. Dates
/// and placeholders always count as occurring, since the text may write
/// them in another format.
#[derive(Debug, Clone, Copy, Default)]
pub struct GroundedDelegate;

fn fold_text(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn grounded(value: &Value, text: &str) -> bool {
    match value {
        Value::String(s) => {
            s == PLACEHOLDER || s == PRESENT || is_iso_date(s) || text.contains(&fold_text(s))
        }
        Value::Array(items) => items.iter().all(|v| grounded(v, text)),
        Value::Null => true,
        _ => false,
    }
}

impl ConsensusDelegate for GroundedDelegate {
    fn name(&self) -> &str {
        "grounded"
    }

    fn fuse(&self, request: &ConsensusRequest) -> Result<Value> {
        let text = fold_text(&request.document_text);
        let lists: Vec<(&Vec<Value>, f64)> = request
            .candidates
            .iter()
            .map(|c| match &c.value {
                Value::Array(a) => Ok((a, c.weight)),
                _ => Err(Error::schema(request.field.as_str(), "candidate is not a list")),
            })
            .collect::<Result<_>>()?;
        if lists.is_empty() {
            return Err(Error::NoCandidates);
        }

        let mut by_len: BTreeMap<usize, f64> = BTreeMap::new();
        for (l, w) in &lists {
            *by_len.entry(l.len()).or_insert(0.0) += w;
        }
        let top = by_len.values().copied().fold(f64::NEG_INFINITY, f64::max);
        let len = *by_len
            .iter()
            .filter(|(_, w)| (**w - top).abs() <= WEIGHT_TOLERANCE * top)
            .map(|(n, _)| n)
            .max()
            .expect("non-empty");
        let voters: Vec<&(&Vec<Value>, f64)> = lists.iter().filter(|(l, _)| l.len() == len).collect();

        let mut fused = Vec::with_capacity(len);
        for i in 0..len {
            let entries: Vec<(&Map<String, Value>, f64)> = voters
                .iter()
                .filter_map(|(l, w)| l[i].as_object().map(|o| (o, *w)))
                .collect();
            let Some((first, _)) = entries.first() else {
                return Err(Error::schema(request.field.as_str(), "entry is not an object"));
            };
            let mut out = Map::new();
            for key in first.keys() {
                let values: Vec<(&Value, f64)> = entries
                    .iter()
                    .map(|(o, w)| (o.get(key).unwrap_or(&Value::Null), *w))
                    .collect();
                let in_text: Vec<(&Value, f64)> =
                    values.iter().copied().filter(|(v, _)| grounded(v, &text)).collect();
                let pool = if in_text.is_empty() { values } else { in_text };
                let ballots: Vec<(String, f64)> = pool
                    .iter()
                    .map(|(v, w)| {
                        let key = match v {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        (key, *w)
                    })
                    .collect();
                let (winner, _) = weighted_majority_vote(&ballots)?;
                let chosen = pool
                    .iter()
                    .find(|(v, _)| match v {
                        Value::String(s) => *s == winner,
                        other => other.to_string() == winner,
                    })
                    .map(|(v, _)| (*v).clone())
                    .expect("winner comes from the pool");
                out.insert(key.clone(), chosen);
            }
            fused.push(Value::Object(out));
        }
        Ok(Value::Array(fused))
    }
}

/// Asks a chat-completion endpoint to merge the candidates, given the
/// document text and each model's weight.
pub struct LlmDelegate {
    client: ChatClient,
}

impl LlmDelegate {
    pub fn new(config: EndpointConfig) -> Result<Self> {
        Ok(LlmDelegate {
            client: ChatClient::new(config)?,
        })
    }
}

/// Prompt sent by [`LlmDelegate`].
pub fn consensus_prompt(request: &ConsensusRequest) -> String {
    let field = request.field.as_str();
    let mut prompt = format!(
        "Several extraction models disagree about the \"{field}\" section of the resume below.\n\
         Each candidate comes with the model's reliability weight; higher is more reliable.\n\
         Using the resume text as the final authority, produce the single most accurate list.\n\
         Keep one object per distinct entry, keep bullets separate, copy values exactly as written,\n\
         write dates as YYYY-MM-DD (or \"present\") and use \"N/A\" for missing values.\n\
         Respond with only a JSON object of the form {{\"{field}\": [...]}}.\n\nCandidates:\n"
    );
    for c in &request.candidates {
        prompt.push_str(&format!("- {} (weight {}): {}\n", c.model_id, c.weight, c.value));
    }
    prompt.push_str(&format!("\nResume:\n{}", request.document_text));
    prompt
}

impl ConsensusDelegate for LlmDelegate {
    fn name(&self) -> &str {
        "llm"
    }

    fn fuse(&self, request: &ConsensusRequest) -> Result<Value> {
        let raw = self.client.complete(&consensus_prompt(request))?;
        let repaired = repair_json(&raw)?;
        let value: Value = serde_json::from_str(&repaired).expect("repair_json output parses");
        match value.get(request.field.as_str()) {
            Some(v @ Value::Array(_)) => Ok(v.clone()),
            _ => Err(Error::ExtractionFailed {
                model_id: self.client.config().model_id.clone(),
                message: format!("consensus response lacks a `{}` list", request.field),
                raw_response: raw,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn request(field: Field, text: &str, cands: &[(&str, f64, Value)]) -> ConsensusRequest {
        ConsensusRequest {
            field,
            document_text: text.into(),
            candidates: cands
                .iter()
                .map(|(m, w, v)| ConsensusCandidate {
                    model_id: (*m).into(),
                    weight: *w,
                    value: v.clone(),
                })
                .collect(),
        }
    }

    #[test]
    fn fallback_takes_heaviest_then_smallest_id() {
        let r = request(Field::Experience, "", &[("a", 2.0, json!([1])), ("b", 3.0, json!([2]))]);
        assert_eq!(FallbackDelegate.fuse(&r).unwrap(), json!([2]));
        let r = request(Field::Experience, "", &[("b", 3.0, json!([2])), ("a", 3.0, json!([1]))]);
        assert_eq!(FallbackDelegate.fuse(&r).unwrap(), json!([1]));
    }

    #[test]
    fn grounded_prefers_values_in_text() {
        let text = "Analyst at Initech in Austin, TX. Built reports. Ran audits.";
        let good = json!({"title": "Analyst", "location": "Austin, TX", "bullets": ["Built reports", "Ran audits"]});
        let merged = json!({"title": "Analyst", "location": "Austin, TX", "bullets": ["Built reports; Ran audits"]});
        let outlier = json!({"title": "Analyst", "location": "Remote", "bullets": ["Built reports", "Ran audits"]});
        let r = request(
            Field::Experience,
            text,
            &[("heavy", 3.0, json!([merged])), ("mid", 2.0, json!([outlier])), ("light", 1.0, json!([good]))],
        );
        assert_eq!(GroundedDelegate.fuse(&r).unwrap(), json!([good]));
    }

    #[test]
    fn grounded_votes_entry_count() {
        let e = json!({"title": "X"});
        let r = request(
            Field::Experience,
            "X",
            &[("a", 3.0, json!([e, e])), ("b", 2.0, json!([e])), ("c", 1.0, json!([e, e]))],
        );
        assert_eq!(GroundedDelegate.fuse(&r).unwrap().as_array().unwrap().len(), 2);
    }

    #[test]
    fn grounded_falls_back_to_all_values() {
        let r = request(
            Field::Education,
            "nothing relevant",
            &[("a", 3.0, json!([{"degree": "BSc"}])), ("b", 2.0, json!([{"degree": "MSc"}]))],
        );
        assert_eq!(GroundedDelegate.fuse(&r).unwrap(), json!([{"degree": "BSc"}]));
    }

    #[test]
    fn prompt_lists_candidates_and_weights() {
        let r = request(Field::Education, "DOC", &[("a", 3.0, json!([])), ("b", 1.5, json!([{}]))]);
        let p = consensus_prompt(&r);
        assert!(p.contains("- a (weight 3): []"));
        assert!(p.contains("- b (weight 1.5): [{}]"));
        assert!(p.ends_with("DOC"));
        assert!(p.contains(r#"{"education": [...]}"#));
    }
}
