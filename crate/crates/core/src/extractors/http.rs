use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{repair_json, ExtractorBackend, ModelPrediction};
use crate::error::{Error, Result};
use crate::schema::{parse_resume_json, resume_from_value, Field, ResumeDocument};

/// Field layout shown to the model, substituted for `{schema}`.
pub const SCHEMA_DESCRIPTION: &str = r#"{
  "name": string,
  "email": string,
  "phone": string,
  "department": string,
  "skills": [string],
  "experience": [{"title": string, "company": string, "location": string,
                  "start_date": "YYYY-MM-DD", "end_date": "YYYY-MM-DD" or "present",
                  "bullets": [string]}],
  "education": [{"degree": string, "institution": string, "field_of_study": string,
                 "start_date": "YYYY-MM-DD", "end_date": "YYYY-MM-DD"}]
}
Use "N/A" for any value the resume does not state."#;

/// Zero-shot whole-resume prompt. Placeholders: `{document}`, `{schema}`.
pub const DEFAULT_TEMPLATE: &str = "Extract the candidate's details from the resume below.\n\
Respond with one JSON object and nothing else, using this structure:\n{schema}\n\n\
Resume:\n{document}";

/// Zero-shot single-field prompt. Placeholders: `{document}`, `{field}`, `{schema}`.
pub const DEFAULT_FIELD_TEMPLATE: &str = "Extract the candidate's {field} from the resume below.\n\
Respond with one JSON object whose only key is \"{field}\", following this structure:\n{schema}\n\n\
Resume:\n{document}";

const SYSTEM_PROMPT: &str = "You extract structured data from resumes and answer with JSON only.";

fn default_path() -> String {
    "/v1/chat/completions".into()
}
fn default_timeout() -> u64 {
    60_000
}
fn default_retries() -> u32 {
    2
}
fn default_backoff() -> u64 {
    500
}

/// A chat-completion endpoint. The API key is read from the environment
/// variable named by `api_key_env_var` and sent as a bearer token.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    pub model_id: String,
    pub base_url: String,
    #[serde(default = "default_path")]
    pub path: String,
    /// Model name sent in the request body; defaults to `model_id`.
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub api_key_env_var: Option<String>,
    /// Whole-resume template; [`DEFAULT_TEMPLATE`] when absent.
    #[serde(default)]
    pub prompt_template: Option<String>,
    /// Single-field templates; [`DEFAULT_FIELD_TEMPLATE`] for missing fields.
    #[serde(default)]
    pub prompt_template_per_field: BTreeMap<Field, String>,
    /// One request per field instead of one per resume.
    #[serde(default)]
    pub per_field: bool,
    #[serde(default = "default_timeout")]
    pub timeout_ms: u64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default = "default_backoff")]
    pub retry_backoff_ms: u64,
}

impl EndpointConfig {
    pub fn new(model_id: impl Into<String>, base_url: impl Into<String>) -> Self {
        EndpointConfig {
            model_id: model_id.into(),
            base_url: base_url.into(),
            path: default_path(),
            model: None,
            api_key_env_var: None,
            prompt_template: None,
            prompt_template_per_field: BTreeMap::new(),
            per_field: false,
            timeout_ms: default_timeout(),
            max_retries: default_retries(),
            retry_backoff_ms: default_backoff(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.model_id.is_empty() {
            return Err(Error::Config("endpoint model_id must be non-empty".into()));
        }
        if !(self.base_url.starts_with("http://") || self.base_url.starts_with("https://")) {
            return Err(Error::Config(format!(
                "endpoint `{}`: base_url must start with http:// or https://",
                self.model_id
            )));
        }
        if self.timeout_ms == 0 {
            return Err(Error::Config(format!("endpoint `{}`: timeout_ms must be > 0", self.model_id)));
        }
        Ok(())
    }

    fn url(&self) -> String {
        format!("{}{}", self.base_url.trim_end_matches('/'), self.path)
    }
}

pub(crate) fn fill_template(template: &str, document: &str, field: &str) -> String {
    template
        .replace("{schema}", SCHEMA_DESCRIPTION)
        .replace("{field}", field)
        .replace("{document}", document)
}

/// Blocking chat-completion client with retries on transport errors,
/// HTTP 429 and 5xx.
pub struct ChatClient {
    config: EndpointConfig,
    client: reqwest::blocking::Client,
    api_key: Option<String>,
}

impl ChatClient {
    pub fn new(config: EndpointConfig) -> Result<Self> {
        config.validate()?;
        let api_key = match &config.api_key_env_var {
            Some(var) => Some(std::env::var(var).map_err(|_| {
                Error::Config(format!(
                    "endpoint `{}`: environment variable `{var}` is not set",
                    config.model_id
                ))
            })?),
            None => None,
        };
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(config.timeout_ms))
            .build()
            .map_err(|e| Error::Config(format!("HTTP client: {e}")))?;
        Ok(ChatClient {
            config,
            client,
            api_key,
        })
    }

    pub fn config(&self) -> &EndpointConfig {
        &self.config
    }

    /// Sends one user message and returns the assistant's text.
    pub fn complete(&self, user: &str) -> Result<String> {
        let body = json!({
            "model": self.config.model.as_deref().unwrap_or(&self.config.model_id),
            "messages": [
                {"role": "system", "content": SYSTEM_PROMPT},
                {"role": "user", "content": user},
            ],
            "temperature": 0,
        });
        let unavailable = |message: String| Error::BackendUnavailable {
            model_id: self.config.model_id.clone(),
            message,
        };
        let mut last_error = String::new();
        for attempt in 0..=self.config.max_retries {
            if attempt > 0 {
                let backoff = self.config.retry_backoff_ms.saturating_mul(1 << (attempt - 1).min(10));
                std::thread::sleep(Duration::from_millis(backoff));
            }
            let mut request = self.client.post(self.config.url()).json(&body);
            if let Some(key) = &self.api_key {
                request = request.bearer_auth(key);
            }
            let response = match request.send() {
                Ok(r) => r,
                Err(e) => {
                    last_error = format!("transport error: {e}");
                    log::warn!("{}: attempt {} failed: {last_error}", self.config.model_id, attempt + 1);
                    continue;
                }
            };
            let status = response.status();
            let text = response.text().unwrap_or_default();
            if status.as_u16() == 429 || status.is_server_error() {
                last_error = format!("HTTP {status}");
                log::warn!("{}: attempt {} failed: {last_error}", self.config.model_id, attempt + 1);
                continue;
            }
            if !status.is_success() {
                return Err(unavailable(format!("HTTP {status}: {text}")));
            }
            return self.message_content(&text);
        }
        Err(unavailable(format!(
            "{last_error} (after {} attempts)",
            self.config.max_retries + 1
        )))
    }

    fn message_content(&self, body: &str) -> Result<String> {
        let content = serde_json::from_str::<Value>(body).ok().and_then(|v| {
            v.pointer("/choices/0/message/content")
                .and_then(Value::as_str)
                .map(String::from)
        });
        content.ok_or_else(|| Error::ExtractionFailed {
            model_id: self.config.model_id.clone(),
            message: "response has no choices[0].message.content".into(),
            raw_response: body.into(),
        })
    }
}

/// Extractor backed by a chat-completion endpoint.
pub struct HttpBackend {
    client: ChatClient,
}

impl HttpBackend {
    pub fn new(config: EndpointConfig) -> Result<Self> {
        Ok(HttpBackend {
            client: ChatClient::new(config)?,
        })
    }

    fn failed(&self, err: Error, raw: &str) -> Error {
        let message = match err {
            Error::ExtractionFailed { message, .. } => message,
            other => other.to_string(),
        };
        Error::ExtractionFailed {
            model_id: self.client.config.model_id.clone(),
            message,
            raw_response: raw.into(),
        }
    }

    fn extract_whole(&self, document: &ResumeDocument) -> Result<(Value, String)> {
        let template = self
            .client
            .config
            .prompt_template
            .as_deref()
            .unwrap_or(DEFAULT_TEMPLATE);
        let raw = self
            .client
            .complete(&fill_template(template, &document.raw_text, "resume"))?;
        let repaired = repair_json(&raw).map_err(|e| self.failed(e, &raw))?;
        parse_resume_json(&repaired).map_err(|e| self.failed(e, &raw))?;
        let value = serde_json::from_str(&repaired).expect("repair_json output parses");
        Ok((value, raw))
    }

    fn extract_per_field(&self, document: &ResumeDocument) -> Result<(Value, String)> {
        let mut merged = Map::new();
        let mut raws = Map::new();
        for field in Field::ALL {
            let template = self
                .client
                .config
                .prompt_template_per_field
                .get(&field)
                .map(String::as_str)
                .unwrap_or(DEFAULT_FIELD_TEMPLATE);
            let raw = self
                .client
                .complete(&fill_template(template, &document.raw_text, field.as_str()))?;
            let repaired = repair_json(&raw).map_err(|e| self.failed(e, &raw))?;
            let value: Value = serde_json::from_str(&repaired).expect("repair_json output parses");
            if let Some(v) = value.get(field.as_str()) {
                merged.insert(field.as_str().into(), v.clone());
            }
            raws.insert(field.as_str().into(), Value::String(raw));
        }
        let raw = Value::Object(raws).to_string();
        let value = Value::Object(merged);
        resume_from_value(&value).map_err(|e| self.failed(e, &raw))?;
        Ok((value, raw))
    }
}

impl ExtractorBackend for HttpBackend {
    fn model_id(&self) -> &str {
        &self.client.config.model_id
    }

    fn extract(&self, document: &ResumeDocument) -> Result<ModelPrediction> {
        let started = Instant::now();
        let (value, raw_response) = if self.client.config.per_field {
            self.extract_per_field(document)?
        } else {
            self.extract_whole(document)?
        };
        let (prediction, warnings) = resume_from_value(&value)?;
        for w in warnings {
            log::warn!("{}: {w}", self.client.config.model_id);
        }
        Ok(ModelPrediction {
            model_id: self.client.config.model_id.clone(),
            prediction,
            latency_ms: started.elapsed().as_millis() as u64,
            raw_response,
        })
    }
}
