//! Ensemble resume parsing: run several extractors over a resume, normalize
//! their outputs and fuse them field by field with weighted voting.

pub mod aggregate;
pub mod calibrate;
pub mod corpus;
pub mod error;
pub mod extractors;
pub mod metrics;
pub mod normalize;
pub mod pipeline;
pub mod rng;
pub mod schema;

pub use aggregate::{aggregate, Aggregation, FieldVote, Strategy, WeightVector};
pub use error::{Error, Result};
pub use extractors::{ExtractorBackend, ModelPrediction, PanelConfig};
pub use metrics::{evaluate_corpus, MetricReport, RsWeights};
pub use normalize::SkillOntology;
pub use schema::{
    EducationEntry, ExperienceEntry, Field, ParsedResume, ResumeDocument, PLACEHOLDER, PRESENT,
};
