//! Canonicalization applied to every prediction before voting: ISO dates,
//! ontology-folded skills, and placeholder fill.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use chrono::NaiveDate;
use regex::Regex;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::schema::{EducationEntry, ExperienceEntry, ParsedResume, PLACEHOLDER, PRESENT};

const DEFAULT_ONTOLOGY: &str = include_str!("../data/ontology.json");

/// Variant-to-canonical skill mapping.
#[derive(Debug, Clone)]
pub struct SkillOntology {
    canonical_map: BTreeMap<String, String>,
    case_insensitive: bool,
    lookup: HashMap<String, String>,
}

impl SkillOntology {
    /// Builds an ontology. Every canonical form is also registered as mapping to
    /// itself, and the map is rejected if any canonical form would fold further.
    pub fn new(canonical_map: BTreeMap<String, String>, case_insensitive: bool) -> Result<Self> {
        let key = |s: &str| {
            let s = collapse_ws(s);
            if case_insensitive {
                s.to_lowercase()
            } else {
                s
            }
        };
        let mut lookup = HashMap::new();
        for (variant, canonical) in &canonical_map {
            if collapse_ws(canonical).is_empty() || collapse_ws(variant).is_empty() {
                return Err(Error::Config("ontology entries must be non-empty".into()));
            }
            if let Some(prev) = lookup.insert(key(variant), collapse_ws(canonical)) {
                if prev != collapse_ws(canonical) {
                    return Err(Error::Config(format!(
                        "ontology variant `{variant}` maps to both `{prev}` and `{canonical}`"
                    )));
                }
            }
        }
        let canonicals: BTreeSet<String> = canonical_map.values().map(|c| collapse_ws(c)).collect();
        for c in &canonicals {
            match lookup.get(&key(c)) {
                Some(target) if target != c => {
                    return Err(Error::Config(format!(
                        "canonical skill `{c}` is itself a variant of `{target}`"
                    )))
                }
                Some(_) => {}
                None => {
                    lookup.insert(key(c), c.clone());
                }
            }
        }
        Ok(SkillOntology {
            canonical_map,
            case_insensitive,
            lookup,
        })
    }

    pub fn empty() -> Self {
        SkillOntology::new(BTreeMap::new(), true).expect("empty ontology is valid")
    }

    /// Parses the file format: a JSON object of `variant: canonical` pairs plus an
    /// optional boolean `case_insensitive` (default true).
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::from_serde(text, &e))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Config("ontology must be a JSON object".into()))?;
        let mut case_insensitive = true;
        let mut map = BTreeMap::new();
        for (k, v) in obj {
            match (k.as_str(), v) {
                ("case_insensitive", Value::Bool(b)) => case_insensitive = *b,
                ("case_insensitive", _) => {
                    return Err(Error::Config("`case_insensitive` must be a boolean".into()))
                }
                (_, Value::String(c)) => {
                    map.insert(k.clone(), c.clone());
                }
                _ => return Err(Error::Config(format!("ontology value for `{k}` must be a string"))),
            }
        }
        SkillOntology::new(map, case_insensitive)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SkillOntology::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn case_insensitive(&self) -> bool {
        self.case_insensitive
    }

    pub fn canonical_map(&self) -> &BTreeMap<String, String> {
        &self.canonical_map
    }

    pub fn canonical_forms(&self) -> BTreeSet<&str> {
        self.canonical_map.values().map(String::as_str).collect()
    }

    /// Variants (as written in the file) that fold to `canonical`.
    pub fn variants_of(&self, canonical: &str) -> Vec<&str> {
        self.canonical_map
            .iter()
            .filter(|(_, c)| c.as_str() == canonical)
            .map(|(v, _)| v.as_str())
            .collect()
    }

    fn lookup(&self, cleaned: &str) -> Option<&str> {
        let key = if self.case_insensitive {
            cleaned.to_lowercase()
        } else {
            cleaned.to_owned()
        };
        self.lookup.get(&key).map(String::as_str)
    }
}

impl Default for SkillOntology {
    /// The bundled ontology of common technology and business skill synonyms.
    fn default() -> Self {
        SkillOntology::from_json(DEFAULT_ONTOLOGY).expect("bundled ontology is valid")
    }
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Trims and collapses whitespace, then folds through the ontology. Unmapped
/// skills keep their original casing.
pub fn canonicalize_skill(raw: &str, ontology: &SkillOntology) -> String {
    let cleaned = collapse_ws(raw);
    match ontology.lookup(&cleaned) {
        Some(c) => c.to_owned(),
        None => cleaned,
    }
}

// ---------------------------------------------------------------------------
// Dates
// ---------------------------------------------------------------------------

/// Outcome of [`normalize_date_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DateOutcome {
    pub value: String,
    pub warning: Option<String>,
}

/// Canonicalizes a date to `YYYY-MM-DD`, `"present"`, or `"N/A"`. Missing
/// month or day default to `01`.
pub fn normalize_date(raw: &str) -> String {
    normalize_date_report(raw).value
}

pub fn normalize_date_report(raw: &str) -> DateOutcome {
    let s = collapse_ws(raw).to_lowercase();
    let ok = |value: String| DateOutcome { value, warning: None };
    if s.is_empty() || s == "n/a" || s == "na" || s == "none" || s == "null" {
        return ok(PLACEHOLDER.into());
    }
    if matches!(s.as_str(), "present" | "current" | "now" | "ongoing" | "to date") {
        return ok(PRESENT.into());
    }
    match parse_date_parts(&s).and_then(|(y, m, d)| NaiveDate::from_ymd_opt(y, m, d)) {
        Some(date) => ok(date.format("%Y-%m-%d").to_string()),
        None => DateOutcome {
            value: PLACEHOLDER.into(),
            warning: Some(format!("unrecognized date `{raw}` replaced with N/A")),
        },
    }
}

struct DatePatterns {
    ymd: Regex,
    ym: Regex,
    y: Regex,
    month_name: Regex,
    m_slash_y: Regex,
    m_dash_y: Regex,
}

fn patterns() -> &'static DatePatterns {
    static P: OnceLock<DatePatterns> = OnceLock::new();
    P.get_or_init(|| DatePatterns {
        ymd: Regex::new(r"^(\d{4})-(\d{1,2})-(\d{1,2})$").unwrap(),
        ym: Regex::new(r"^(\d{4})-(\d{1,2})$").unwrap(),
        y: Regex::new(r"^(\d{4})$").unwrap(),
        month_name: Regex::new(r"^([a-z]+)\.?,? (\d{4})$").unwrap(),
        m_slash_y: Regex::new(r"^(\d{1,2})/(\d{4})$").unwrap(),
        m_dash_y: Regex::new(r"^(\d{1,2})-(\d{4})$").unwrap(),
    })
}

fn parse_date_parts(s: &str) -> Option<(i32, u32, u32)> {
    let p = patterns();
    let num = |m: Option<regex::Match<'_>>| m.and_then(|m| m.as_str().parse::<u32>().ok());
    if let Some(c) = p.ymd.captures(s) {
        return Some((num(c.get(1))? as i32, num(c.get(2))?, num(c.get(3))?));
    }
    if let Some(c) = p.ym.captures(s) {
        return Some((num(c.get(1))? as i32, num(c.get(2))?, 1));
    }
    if let Some(c) = p.y.captures(s) {
        return Some((num(c.get(1))? as i32, 1, 1));
    }
    if let Some(c) = p.month_name.captures(s) {
        return Some((num(c.get(2))? as i32, month_from_name(c.get(1)?.as_str())?, 1));
    }
    if let Some(c) = p.m_slash_y.captures(s).or_else(|| p.m_dash_y.captures(s)) {
        return Some((num(c.get(2))? as i32, num(c.get(1))?, 1));
    }
    None
}

fn month_from_name(name: &str) -> Option<u32> {
    const MONTHS: [&str; 12] = [
        "january", "february", "march", "april", "may", "june", "july", "august", "september",
        "october", "november", "december",
    ];
    if name == "sept" {
        return Some(9);
    }
    MONTHS
        .iter()
        .position(|m| *m == name || (name.len() == 3 && m.starts_with(name)))
        .map(|i| i as u32 + 1)
}

// ---------------------------------------------------------------------------
// Whole-resume normalization
// ---------------------------------------------------------------------------

fn normalize_text(raw: &str) -> String {
    let s = collapse_ws(raw);
    match s.to_lowercase().as_str() {
        "" | "n/a" | "none" | "null" => PLACEHOLDER.into(),
        _ => s,
    }
}

/// Normalizes a prediction so that it passes [`crate::schema::validate`].
pub fn normalize_fields(prediction: &ParsedResume, ontology: &SkillOntology) -> ParsedResume {
    normalize_fields_report(prediction, ontology).0
}

/// Like [`normalize_fields`], also returning warnings for discarded dates.
pub fn normalize_fields_report(
    prediction: &ParsedResume,
    ontology: &SkillOntology,
) -> (ParsedResume, Vec<String>) {
    let mut warnings = Vec::new();

    let mut seen = HashSet::new();
    let skills = prediction
        .skills
        .iter()
        .map(|s| canonicalize_skill(s, ontology))
        .filter(|s| !s.is_empty() && !is_placeholder_text(s))
        .filter(|s| seen.insert(s.clone()))
        .collect();

    let mut date = |raw: &str, path: String, allow_present: bool| {
        let out = normalize_date_report(raw);
        if let Some(w) = out.warning {
            warnings.push(format!("{path}: {w}"));
        }
        if out.value == PRESENT && !allow_present {
            warnings.push(format!("{path}: `present` is only valid as an experience end date"));
            return PLACEHOLDER.to_owned();
        }
        out.value
    };

    let experience = prediction
        .experience
        .iter()
        .enumerate()
        .map(|(i, e)| ExperienceEntry {
            title: normalize_text(&e.title),
            company: normalize_text(&e.company),
            location: normalize_text(&e.location),
            start_date: date(&e.start_date, format!("experience[{i}].start_date"), false),
            end_date: date(&e.end_date, format!("experience[{i}].end_date"), true),
            bullets: e
                .bullets
                .iter()
                .map(|b| collapse_ws(b))
                .filter(|b| !b.is_empty())
                .collect(),
        })
        .collect();

    let education = prediction
        .education
        .iter()
        .enumerate()
        .map(|(i, e)| EducationEntry {
            degree: normalize_text(&e.degree),
            institution: normalize_text(&e.institution),
            field_of_study: normalize_text(&e.field_of_study),
            start_date: date(&e.start_date, format!("education[{i}].start_date"), false),
            end_date: date(&e.end_date, format!("education[{i}].end_date"), false),
        })
        .collect();

    let resume = ParsedResume {
        name: normalize_text(&prediction.name),
        email: normalize_text(&prediction.email),
        phone: normalize_text(&prediction.phone),
        department: normalize_text(&prediction.department),
        skills,
        experience,
        education,
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    (resume, warnings)
}

fn is_placeholder_text(s: &str) -> bool {
    normalize_text(s) == PLACEHOLDER
}
