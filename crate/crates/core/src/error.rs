use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed JSON input; `offset` is the byte offset of the failure.
    #[error("malformed JSON at byte {offset}: {message}")]
    Json { offset: usize, message: String },

    /// Well-formed JSON whose shape does not match the resume schema.
    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("no candidates to vote on")]
    NoCandidates,

    /// Invalid configuration (weights, profiles, endpoints, grids).
    #[error("configuration error: {0}")]
    Config(String),

    /// A backend was unreachable after exhausting its retries.
    #[error("backend `{model_id}` unavailable: {message}")]
    BackendUnavailable { model_id: String, message: String },

    /// A backend answered, but no usable JSON could be recovered.
    #[error("extraction failed for `{model_id}`: {message}")]
    ExtractionFailed {
        model_id: String,
        message: String,
        raw_response: String,
    },

    /// A corpus file line could not be loaded. `line` is 1-based.
    #[error("line {line}: {message}")]
    CorpusLine { line: usize, message: String },

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("invalid split: {0}")]
    Split(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn from_serde(text: &str, err: &serde_json::Error) -> Self {
        Error::Json {
            offset: byte_offset(text, err.line(), err.column()),
            message: err.to_string(),
        }
    }
}

/// Converts serde_json's 1-based line/column into a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return (offset + column.saturating_sub(1)).min(text.len());
        }
        offset += l.len();
    }
    text.len()
}
