//! Structured resume data model, canonical JSON form, and validation.
//!
//! A [`ParsedResume`] always carries all seven fields. Missing scalars hold the
//! placeholder [`PLACEHOLDER`] and missing lists are empty, so predictions from
//! different backends can be compared field by field.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Placeholder for a field the source does not provide.
pub const PLACEHOLDER: &str = "N/A";

/// End-date marker for ongoing roles.
pub const PRESENT: &str = "present";

/// The fields of a parsed resume, in canonical serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Name,
    Email,
    Phone,
    Department,
    Skills,
    Experience,
    Education,
}

impl Field {
    pub const ALL: [Field; 7] = [
        Field::Name,
        Field::Email,
        Field::Phone,
        Field::Department,
        Field::Skills,
        Field::Experience,
        Field::Education,
    ];

    pub const SCALARS: [Field; 4] = [Field::Name, Field::Email, Field::Phone, Field::Department];

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Name => "name",
            Field::Email => "email",
            Field::Phone => "phone",
            Field::Department => "department",
            Field::Skills => "skills",
            Field::Experience => "experience",
            Field::Education => "education",
        }
    }

    pub fn is_scalar(self) -> bool {
        Field::SCALARS.contains(&self)
    }

    pub fn is_nested(self) -> bool {
        matches!(self, Field::Experience | Field::Education)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Field::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown field `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperienceEntry {
    pub title: String,
    pub company: String,
    pub location: String,
    pub start_date: String,
    pub end_date: String,
    pub bullets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EducationEntry {
    pub degree: String,
    pub institution: String,
    pub field_of_study: String,
    pub start_date: String,
    pub end_date: String,
}

/// The structured output of one resume. Field order here is the canonical
/// serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParsedResume {
    pub name: String,
    pub email: String,
    pub phone: String,
    pub department: String,
    pub skills: Vec<String>,
    pub experience: Vec<ExperienceEntry>,
    pub education: Vec<EducationEntry>,
}

impl Default for ParsedResume {
    fn default() -> Self {
        ParsedResume {
            name: PLACEHOLDER.into(),
            email: PLACEHOLDER.into(),
            phone: PLACEHOLDER.into(),
            department: PLACEHOLDER.into(),
            skills: Vec::new(),
            experience: Vec::new(),
            education: Vec::new(),
        }
    }
}

impl ParsedResume {
    pub fn scalar(&self, field: Field) -> Option<&str> {
        match field {
            Field::Name => Some(&self.name),
            Field::Email => Some(&self.email),
            Field::Phone => Some(&self.phone),
            Field::Department => Some(&self.department),
            _ => None,
        }
    }

    pub fn scalar_mut(&mut self, field: Field) -> Option<&mut String> {
        match field {
            Field::Name => Some(&mut self.name),
            Field::Email => Some(&mut self.email),
            Field::Phone => Some(&mut self.phone),
            Field::Department => Some(&mut self.department),
            _ => None,
        }
    }

    /// The field's value as JSON, in canonical form.
    pub fn field_value(&self, field: Field) -> Value {
        match field {
            Field::Skills => serde_json::to_value(&self.skills),
            Field::Experience => serde_json::to_value(&self.experience),
            Field::Education => serde_json::to_value(&self.education),
            scalar => Ok(Value::String(self.scalar(scalar).unwrap_or_default().to_owned())),
        }
        .expect("resume fields always serialize")
    }

    /// Canonical compact JSON text of one field. Used for equality of list fields.
    pub fn field_text(&self, field: Field) -> String {
        match self.scalar(field) {
            Some(s) => s.to_owned(),
            None => self.field_value(field).to_string(),
        }
    }
}

/// A raw input document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResumeDocument {
    pub id: String,
    pub raw_text: String,
}

impl ResumeDocument {
    pub fn new(id: impl Into<String>, raw_text: impl Into<String>) -> Self {
        ResumeDocument {
            id: id.into(),
            raw_text: raw_text.into(),
        }
    }
}

pub fn is_placeholder(s: &str) -> bool {
    s == PLACEHOLDER
}

fn iso_date_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\d{4}-\d{2}-\d{2}$").unwrap())
}

/// `YYYY-MM-DD` naming a real calendar day.
pub fn is_iso_date(s: &str) -> bool {
    iso_date_re().is_match(s) && chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parses resume JSON, filling absent fields with placeholders.
pub fn parse_resume_json(text: &str) -> Result<ParsedResume> {
    parse_resume_json_with_warnings(text).map(|(r, _)| r)
}

/// Like [`parse_resume_json`], also returning one warning per ignored key.
pub fn parse_resume_json_with_warnings(text: &str) -> Result<(ParsedResume, Vec<String>)> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::from_serde(text, &e))?;
    resume_from_value(&value)
}

/// Builds a resume from an already-parsed JSON value.
pub fn resume_from_value(value: &Value) -> Result<(ParsedResume, Vec<String>)> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::schema("$", "expected a JSON object"))?;
    let mut warnings = Vec::new();
    for key in obj.keys() {
        if key.parse::<Field>().is_err() {
            warnings.push(format!("ignored unknown key `{key}`"));
        }
    }
    let resume = ParsedResume {
        name: scalar(obj, "name", "name")?,
        email: scalar(obj, "email", "email")?,
        phone: scalar(obj, "phone", "phone")?,
        department: scalar(obj, "department", "department")?,
        skills: string_list(obj.get("skills"), "skills")?,
        experience: experience_list(obj.get("experience"), "experience", &mut warnings)?,
        education: education_list(obj.get("education"), "education", &mut warnings)?,
    };
    Ok((resume, warnings))
}

/// Parses a JSON array of experience entries (used for consensus answers).
pub fn experience_from_value(value: &Value) -> Result<Vec<ExperienceEntry>> {
    experience_list(Some(value), "experience", &mut Vec::new())
}

/// Parses a JSON array of education entries (used for consensus answers).
pub fn education_from_value(value: &Value) -> Result<Vec<EducationEntry>> {
    education_list(Some(value), "education", &mut Vec::new())
}

fn scalar(obj: &Map<String, Value>, key: &str, path: &str) -> Result<String> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(PLACEHOLDER.to_owned()),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(other) => Err(Error::schema(path, format!("expected string, found {}", kind(other)))),
    }
}

fn string_list(value: Option<&Value>, path: &str) -> Result<Vec<String>> {
    match value {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::String(s) => Ok(s.clone()),
                other => Err(Error::schema(
                    format!("{path}[{i}]"),
                    format!("expected string, found {}", kind(other)),
                )),
            })
            .collect(),
        Some(other) => Err(Error::schema(path, format!("expected array, found {}", kind(other)))),
    }
}

fn entries<'a>(value: Option<&'a Value>, path: &str) -> Result<Vec<&'a Map<String, Value>>> {
    match value {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_object().ok_or_else(|| {
                    Error::schema(format!("{path}[{i}]"), format!("expected object, found {}", kind(v)))
                })
            })
            .collect(),
        Some(other) => Err(Error::schema(path, format!("expected array, found {}", kind(other)))),
    }
}

fn note_unknown(obj: &Map<String, Value>, known: &[&str], path: &str, warnings: &mut Vec<String>) {
    for key in obj.keys() {
        if !known.contains(&key.as_str()) {
            warnings.push(format!("ignored unknown key `{path}.{key}`"));
        }
    }
}

fn experience_list(
    value: Option<&Value>,
    path: &str,
    warnings: &mut Vec<String>,
) -> Result<Vec<ExperienceEntry>> {
    const KNOWN: [&str; 6] = ["title", "company", "location", "start_date", "end_date", "bullets"];
    entries(value, path)?
        .into_iter()
        .enumerate()
        .map(|(i, obj)| {
            let p = format!("{path}[{i}]");
            note_unknown(obj, &KNOWN, &p, warnings);
            Ok(ExperienceEntry {
                title: scalar(obj, "title", &format!("{p}.title"))?,
                company: scalar(obj, "company", &format!("{p}.company"))?,
                location: scalar(obj, "location", &format!("{p}.location"))?,
                start_date: scalar(obj, "start_date", &format!("{p}.start_date"))?,
                end_date: scalar(obj, "end_date", &format!("{p}.end_date"))?,
                bullets: string_list(obj.get("bullets"), &format!("{p}.bullets"))?,
            })
        })
        .collect()
}

fn education_list(
    value: Option<&Value>,
    path: &str,
    warnings: &mut Vec<String>,
) -> Result<Vec<EducationEntry>> {
    const KNOWN: [&str; 5] = ["degree", "institution", "field_of_study", "start_date", "end_date"];
    entries(value, path)?
        .into_iter()
        .enumerate()
        .map(|(i, obj)| {
            let p = format!("{path}[{i}]");
            note_unknown(obj, &KNOWN, &p, warnings);
            Ok(EducationEntry {
                degree: scalar(obj, "degree", &format!("{p}.degree"))?,
                institution: scalar(obj, "institution", &format!("{p}.institution"))?,
                field_of_study: scalar(obj, "field_of_study", &format!("{p}.field_of_study"))?,
                start_date: scalar(obj, "start_date", &format!("{p}.start_date"))?,
                end_date: scalar(obj, "end_date", &format!("{p}.end_date"))?,
            })
        })
        .collect()
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// Canonical JSON: fixed key order, compact, UTF-8.
pub fn serialize_resume(resume: &ParsedResume) -> String {
    serde_json::to_string(resume).expect("resume always serializes")
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// A text value is empty or whitespace-only instead of holding the placeholder.
    MissingValue,
    DatePattern,
    DuplicateSkill,
    EmptySkill,
    EmptyBullet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}: {}", self.field, self.rule, self.detail)
    }
}

pub fn validate(resume: &ParsedResume) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |field: String, rule: Rule, detail: String| out.push(Violation { field, rule, detail });

    for field in Field::SCALARS {
        let v = resume.scalar(field).unwrap_or_default();
        if v.trim().is_empty() {
            push(field.to_string(), Rule::MissingValue, "empty text; use \"N/A\"".into());
        }
    }

    let mut seen = HashSet::new();
    for (i, skill) in resume.skills.iter().enumerate() {
        if skill.trim().is_empty() {
            push(format!("skills[{i}]"), Rule::EmptySkill, "empty skill".into());
        } else if !seen.insert(skill.as_str()) {
            push(format!("skills[{i}]"), Rule::DuplicateSkill, format!("duplicate `{skill}`"));
        }
    }

    let check_text = |path: String, v: &str, out: &mut Vec<(String, Rule, String)>| {
        if v.trim().is_empty() {
            out.push((path, Rule::MissingValue, "empty text; use \"N/A\"".into()));
        }
    };
    let mut nested = Vec::new();
    for (i, e) in resume.experience.iter().enumerate() {
        let p = format!("experience[{i}]");
        check_text(format!("{p}.title"), &e.title, &mut nested);
        check_text(format!("{p}.company"), &e.company, &mut nested);
        check_text(format!("{p}.location"), &e.location, &mut nested);
        check_date(format!("{p}.start_date"), &e.start_date, false, &mut nested);
        check_date(format!("{p}.end_date"), &e.end_date, true, &mut nested);
        for (j, b) in e.bullets.iter().enumerate() {
            if b.trim().is_empty() {
                nested.push((format!("{p}.bullets[{j}]"), Rule::EmptyBullet, "empty bullet".into()));
            }
        }
    }
    for (i, e) in resume.education.iter().enumerate() {
        let p = format!("education[{i}]");
        check_text(format!("{p}.degree"), &e.degree, &mut nested);
        check_text(format!("{p}.institution"), &e.institution, &mut nested);
        check_text(format!("{p}.field_of_study"), &e.field_of_study, &mut nested);
        check_date(format!("{p}.start_date"), &e.start_date, false, &mut nested);
        check_date(format!("{p}.end_date"), &e.end_date, false, &mut nested);
    }
    out.extend(nested.into_iter().map(|(field, rule, detail)| Violation { field, rule, detail }));
    out
}

fn check_date(path: String, v: &str, allow_present: bool, out: &mut Vec<(String, Rule, String)>) {
    let ok = is_placeholder(v) || is_iso_date(v) || (allow_present && v == PRESENT);
    if !ok {
        let expected = if allow_present {
            "YYYY-MM-DD, \"N/A\" or \"present\""
        } else {
            "YYYY-MM-DD or \"N/A\""
        };
        out.push((path, Rule::DatePattern, format!("`{v}` is not {expected}")));
    }
}
