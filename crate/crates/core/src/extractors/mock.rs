use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExtractorBackend, ModelPrediction};
use crate::corpus::vocab::{
    default_professions, EMAIL_DOMAINS, FIRST_NAMES, GENERIC_SKILLS, LAST_NAMES,
    OUTLIER_INSTITUTIONS, OUTLIER_LOCATIONS,
};
use crate::error::{Error, Result};
use crate::rng::derive_rng;
use crate::schema::{is_placeholder, serialize_resume, Field, ParsedResume, ResumeDocument, PLACEHOLDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorruptionKind {
    Drop,
    Typo,
    MergeBullets,
    WrongValue,
}

/// Error profile of a mock backend. Every field has a rate and a kind;
/// fields omitted from a config file get rate 0 and kind `drop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct MockProfile {
    pub model_id: String,
    pub seed: u64,
    pub per_field_error_rate: BTreeMap<Field, f64>,
    pub corruption_kind: BTreeMap<Field, CorruptionKind>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    model_id: String,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    per_field_error_rate: BTreeMap<Field, f64>,
    #[serde(default)]
    corruption_kind: BTreeMap<Field, CorruptionKind>,
}

impl TryFrom<RawProfile> for MockProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        let mut p = MockProfile::new(raw.model_id, raw.seed);
        p.per_field_error_rate.extend(raw.per_field_error_rate);
        p.corruption_kind.extend(raw.corruption_kind);
        p.validate()?;
        Ok(p)
    }
}

impl MockProfile {
    /// A profile that reproduces golds exactly.
    pub fn new(model_id: impl Into<String>, seed: u64) -> Self {
        MockProfile {
            model_id: model_id.into(),
            seed,
            per_field_error_rate: Field::ALL.iter().map(|f| (*f, 0.0)).collect(),
            corruption_kind: Field::ALL.iter().map(|f| (*f, CorruptionKind::Drop)).collect(),
        }
    }

    pub fn with(mut self, field: Field, rate: f64, kind: CorruptionKind) -> Self {
        self.per_field_error_rate.insert(field, rate);
        self.corruption_kind.insert(field, kind);
        self
    }

    pub fn rate(&self, field: Field) -> f64 {
        self.per_field_error_rate.get(&field).copied().unwrap_or(0.0)
    }

    pub fn kind(&self, field: Field) -> CorruptionKind {
        self.corruption_kind
            .get(&field)
            .copied()
            .unwrap_or(CorruptionKind::Drop)
    }

    pub fn validate(&self) -> Result<()> {
        if self.model_id.is_empty() {
            return Err(Error::Config("mock model_id must be non-empty".into()));
        }
        for f in Field::ALL {
            let r = self.rate(f);
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::Config(format!(
                    "mock `{}`: error rate for {f} must be in [0, 1], got {r}",
                    self.model_id
                )));
            }
            if f.is_scalar() && self.kind(f) == CorruptionKind::MergeBullets {
                return Err(Error::Config(format!(
                    "mock `{}`: merge_bullets does not apply to scalar field {f}",
                    self.model_id
                )));
            }
        }
        Ok(())
    }
}

/// Returns the gold resume with seeded corruptions applied.
///
/// Each field draws from its own stream keyed by `(seed, model_id,
/// document id, field)`, so a field's outcome is independent of the other
/// fields, of other documents and of execution order. When a corruption
/// fires and applies to the gold value, the value always changes; it does
/// not apply to placeholders, and list corruptions need enough items (for
/// example `drop` needs a non-empty list).
pub struct MockBackend {
    profile: MockProfile,
    golds: Arc<BTreeMap<String, ParsedResume>>,
    departments: Vec<&'static str>,
    spurious_skills: Vec<&'static str>,
}

impl MockBackend {
    pub fn new(profile: MockProfile, golds: Arc<BTreeMap<String, ParsedResume>>) -> Result<Self> {
        profile.validate()?;
        let professions = default_professions();
        let mut departments: Vec<&'static str> = professions.iter().map(|p| p.department).collect();
        departments.sort_unstable();
        departments.dedup();
        let mut spurious_skills: Vec<&'static str> = professions
            .iter()
            .flat_map(|p| p.skills.iter().copied())
            .chain(GENERIC_SKILLS.iter().copied())
            .collect();
        spurious_skills.sort_unstable();
        spurious_skills.dedup();
        Ok(MockBackend {
            profile,
            golds,
            departments,
            spurious_skills,
        })
    }

    pub fn profile(&self) -> &MockProfile {
        &self.profile
    }

    /// The corrupted copy of `gold` for document `doc_id`.
    pub fn corrupt(&self, doc_id: &str, gold: &ParsedResume) -> ParsedResume {
        let mut out = gold.clone();
        for field in Field::ALL {
            let mut rng = derive_rng(
                self.profile.seed,
                &[
                    self.profile.model_id.as_bytes(),
                    doc_id.as_bytes(),
                    field.as_str().as_bytes(),
                ],
            );
            if !rng.random_bool(self.profile.rate(field)) {
                continue;
            }
            let kind = self.profile.kind(field);
            match field {
                Field::Skills => self.corrupt_skills(&mut out.skills, kind, &mut rng),
                Field::Experience => corrupt_experience(&mut out, kind, &mut rng),
                Field::Education => corrupt_education(&mut out, kind, &mut rng),
                _ => {
                    let v = out.scalar_mut(field).expect("scalar field");
                    if !is_placeholder(v) {
                        *v = self.corrupt_scalar(field, v, kind, &mut rng);
                    }
                }
            }
        }
        out
    }

    fn corrupt_scalar(&self, field: Field, v: &str, kind: CorruptionKind, rng: &mut ChaCha8Rng) -> String {
        match kind {
            CorruptionKind::Drop => PLACEHOLDER.into(),
            CorruptionKind::Typo => typo(v, rng),
            CorruptionKind::WrongValue => loop {
                let candidate = match field {
                    Field::Name => format!("{} {}", pick(rng, FIRST_NAMES), pick(rng, LAST_NAMES)),
                    Field::Email => format!(
                        "{}{}@{}",
                        pick(rng, FIRST_NAMES).to_lowercase(),
                        rng.random_range(1..1000),
                        pick(rng, EMAIL_DOMAINS)
                    ),
                    Field::Phone => format!(
                        "+1-555-{:03}-{:04}",
                        rng.random_range(100..1000),
                        rng.random_range(0..10000)
                    ),
                    _ => pick(rng, &self.departments).to_string(),
                };
                if candidate != v {
                    break candidate;
                }
            },
            CorruptionKind::MergeBullets => unreachable!("rejected by validate"),
        }
    }

    fn corrupt_skills(&self, skills: &mut Vec<String>, kind: CorruptionKind, rng: &mut ChaCha8Rng) {
        match kind {
            CorruptionKind::Drop if !skills.is_empty() => {
                let i = rng.random_range(0..skills.len());
                skills.remove(i);
            }
            CorruptionKind::Typo if !skills.is_empty() => {
                let i = rng.random_range(0..skills.len());
                skills[i] = typo(&skills[i], rng);
            }
            CorruptionKind::WrongValue => {
                let pool: Vec<&str> = self
                    .spurious_skills
                    .iter()
                    .copied()
                    .filter(|s| !skills.iter().any(|k| k == s))
                    .collect();
                if let Some(s) = pool.choose(rng) {
                    let at = rng.random_range(0..=skills.len());
                    skills.insert(at, (*s).into());
                }
            }
            CorruptionKind::MergeBullets if skills.len() >= 2 => {
                let i = rng.random_range(0..skills.len() - 1);
                let merged = format!("{} / {}", skills[i], skills[i + 1]);
                skills.splice(i..i + 2, [merged]);
            }
            _ => {}
        }
    }
}

fn corrupt_experience(r: &mut ParsedResume, kind: CorruptionKind, rng: &mut ChaCha8Rng) {
    let entries = &mut r.experience;
    if entries.is_empty() {
        return;
    }
    match kind {
        CorruptionKind::Drop => {
            let i = rng.random_range(0..entries.len());
            entries.remove(i);
        }
        CorruptionKind::Typo => {
            let i = rng.random_range(0..entries.len());
            entries[i].title = typo(&entries[i].title, rng);
        }
        CorruptionKind::WrongValue => {
            for e in entries.iter_mut() {
                e.location = pick(rng, OUTLIER_LOCATIONS).into();
            }
        }
        CorruptionKind::MergeBullets => {
            for e in entries.iter_mut() {
                if e.bullets.len() >= 2 {
                    e.bullets = vec![e.bullets.join("; ")];
                }
            }
        }
    }
}

fn corrupt_education(r: &mut ParsedResume, kind: CorruptionKind, rng: &mut ChaCha8Rng) {
    let entries = &mut r.education;
    if entries.is_empty() {
        return;
    }
    match kind {
        CorruptionKind::Drop => {
            let i = rng.random_range(0..entries.len());
            entries.remove(i);
        }
        CorruptionKind::Typo => {
            let i = rng.random_range(0..entries.len());
            entries[i].institution = typo(&entries[i].institution, rng);
        }
        CorruptionKind::WrongValue => {
            for e in entries.iter_mut() {
                e.institution = pick(rng, OUTLIER_INSTITUTIONS).into();
            }
        }
        CorruptionKind::MergeBullets => {
            // Degree and field of study run together into one string.
            for e in entries.iter_mut() {
                if !is_placeholder(&e.field_of_study) {
                    e.degree = format!("{} {}", e.degree, e.field_of_study);
                    e.field_of_study = PLACEHOLDER.into();
                }
            }
        }
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool.choose(rng).expect("non-empty pool")
}

/// Substitutes one ASCII letter or digit with a different one of the same
/// class and case. Strings without such a character get an `x` appended.
fn typo(s: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = s.chars().collect();
    let positions: Vec<usize> = chars
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_ascii_alphanumeric())
        .map(|(i, _)| i)
        .collect();
    let Some(&i) = positions.choose(rng) else {
        return format!("{s}x");
    };
    let c = chars[i];
    let (base, span) = if c.is_ascii_digit() {
        (b'0', 10)
    } else if c.is_ascii_uppercase() {
        (b'A', 26)
    } else {
        (b'a', 26)
    };
    let offset = c as u8 - base;
    let shift = rng.random_range(1..span);
    chars[i] = (base + (offset + shift) % span) as char;
    chars.into_iter().collect()
}

impl ExtractorBackend for MockBackend {
    fn model_id(&self) -> &str {
        &self.profile.model_id
    }

    fn extract(&self, document: &ResumeDocument) -> Result<ModelPrediction> {
        let gold = self.golds.get(&document.id).ok_or_else(|| Error::ExtractionFailed {
            model_id: self.profile.model_id.clone(),
            message: format!("no gold resume for document `{}`", document.id),
            raw_response: String::new(),
        })?;
        let prediction = self.corrupt(&document.id, gold);
        Ok(ModelPrediction {
            model_id: self.profile.model_id.clone(),
            raw_response: serialize_resume(&prediction),
            prediction,
            latency_ms: 0,
        })
    }
}
