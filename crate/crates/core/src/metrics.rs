//! Evaluation metrics: field-level exact match, token F1, smoothed BLEU-4,
//! ROUGE-L, Levenshtein similarity, and the recruitment similarity (RS)
//! composite.
//!
//! Text metrics tokenize by lowercasing and splitting on whitespace. List
//! fields are compared through a fixed linearization (see [`field_text`]).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::{EducationEntry, ExperienceEntry, Field, ParsedResume, PLACEHOLDER};

/// Tolerance for the RS weights summing to one.
pub const RS_WEIGHT_TOLERANCE: f64 = 1e-12;

fn tokens(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_lowercase).collect()
}

/// Token-multiset F1. Both empty is 1.0; exactly one empty is 0.0.
pub fn token_f1(pred_text: &str, gold_text: &str) -> f64 {
    let pred = tokens(pred_text);
    let gold = tokens(gold_text);
    match (pred.is_empty(), gold.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in &gold {
        *counts.entry(t).or_default() += 1;
    }
    let mut overlap = 0usize;
    for t in &pred {
        if let Some(c) = counts.get_mut(t.as_str()) {
            if *c > 0 {
                *c -= 1;
                overlap += 1;
            }
        }
    }
    if overlap == 0 {
        return 0.0;
    }
    let p = overlap as f64 / pred.len() as f64;
    let r = overlap as f64 / gold.len() as f64;
    2.0 * p * r / (p + r)
}

/// Sentence BLEU-4 against a single reference, uniform weights, with the
/// standard brevity penalty. Unigram precision is unsmoothed; orders 2-4 use
/// add-one smoothing `(matches + 1) / (candidate n-grams + 1)`, so short but
/// exact candidates still score 1.0. An empty candidate or reference scores 0.
pub fn bleu(pred_text: &str, gold_text: &str) -> f64 {
    let cand = tokens(pred_text);
    let refr = tokens(gold_text);
    if cand.is_empty() || refr.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=4 {
        let (matches, total) = clipped_matches(&cand, &refr, n);
        let p = if n == 1 {
            if matches == 0 {
                return 0.0;
            }
            matches as f64 / total as f64
        } else {
            (matches as f64 + 1.0) / (total as f64 + 1.0)
        };
        log_sum += 0.25 * p.ln();
    }
    let c = cand.len() as f64;
    let r = refr.len() as f64;
    let bp = if c > r { 1.0 } else { (1.0 - r / c).exp() };
    bp * log_sum.exp()
}

fn clipped_matches(cand: &[String], refr: &[String], n: usize) -> (usize, usize) {
    if cand.len() < n {
        return (0, 0);
    }
    let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
    if refr.len() >= n {
        for g in refr.windows(n) {
            *ref_counts.entry(g).or_default() += 1;
        }
    }
    let mut cand_counts: HashMap<&[String], usize> = HashMap::new();
    for g in cand.windows(n) {
        *cand_counts.entry(g).or_default() += 1;
    }
    let matches = cand_counts
        .iter()
        .map(|(g, c)| (*c).min(ref_counts.get(g).copied().unwrap_or(0)))
        .sum();
    (matches, cand.len() - n + 1)
}

/// Longest common subsequence length over tokens (two-row DP).
fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE-L F-measure. Both empty is 1.0; exactly one empty is 0.0.
pub fn rouge_l(pred_text: &str, gold_text: &str) -> f64 {
    let pred = tokens(pred_text);
    let gold = tokens(gold_text);
    match (pred.is_empty(), gold.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let lcs = lcs_len(&pred, &gold);
    if lcs == 0 {
        return 0.0;
    }
    let p = lcs as f64 / pred.len() as f64;
    let r = lcs as f64 / gold.len() as f64;
    2.0 * p * r / (p + r)
}

/// Character-level edit distance.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 - distance / max(len)`; both empty is 1.0.
pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    let max = a.chars().count().max(b.chars().count());
    if max == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / max as f64
}

/// Jaccard similarity of two skill sets; both empty is 1.0.
pub fn jaccard<S: AsRef<str>>(a: &[S], b: &[S]) -> f64 {
    let a: BTreeSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let b: BTreeSet<&str> = b.iter().map(AsRef::as_ref).collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

// ---------------------------------------------------------------------------
// Linearization
// ---------------------------------------------------------------------------

/// One block per entry: a header line of the entry's fields joined with
/// `" | "`, followed by one line per bullet. Blocks are joined by newlines.
/// An empty history linearizes to the placeholder.
pub fn linearize_experience(entries: &[ExperienceEntry]) -> String {
    if entries.is_empty() {
        return PLACEHOLDER.into();
    }
    let mut out = Vec::new();
    for e in entries {
        out.push(
            [&e.title, &e.company, &e.location, &e.start_date, &e.end_date]
                .map(String::as_str)
                .join(" | "),
        );
        out.extend(e.bullets.iter().cloned());
    }
    out.join("\n")
}

pub fn linearize_education(entries: &[EducationEntry]) -> String {
    if entries.is_empty() {
        return PLACEHOLDER.into();
    }
    entries
        .iter()
        .map(|e| {
            [&e.degree, &e.institution, &e.field_of_study, &e.start_date, &e.end_date]
                .map(String::as_str)
                .join(" | ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Text form of a field for the text metrics. Skills are one per line.
pub fn field_text(resume: &ParsedResume, field: Field) -> String {
    match field {
        Field::Skills if resume.skills.is_empty() => PLACEHOLDER.into(),
        Field::Skills => resume.skills.join("\n"),
        Field::Experience => linearize_experience(&resume.experience),
        Field::Education => linearize_education(&resume.education),
        scalar => resume.scalar(scalar).unwrap_or(PLACEHOLDER).to_owned(),
    }
}

// ---------------------------------------------------------------------------
// Field-level scores
// ---------------------------------------------------------------------------

/// Whether one field matches exactly: scalars by text, skills as sets, nested
/// histories by canonical serialization.
pub fn field_matches(pred: &ParsedResume, gold: &ParsedResume, field: Field) -> bool {
    match field {
        Field::Skills => {
            let a: BTreeSet<&String> = pred.skills.iter().collect();
            let b: BTreeSet<&String> = gold.skills.iter().collect();
            a == b
        }
        f => pred.field_text(f) == gold.field_text(f),
    }
}

/// Fraction of the seven fields that match exactly.
pub fn exact_match(pred: &ParsedResume, gold: &ParsedResume) -> f64 {
    let hits = Field::ALL.iter().filter(|f| field_matches(pred, gold, **f)).count();
    hits as f64 / Field::ALL.len() as f64
}

/// Per-field similarity used inside RS.
pub fn field_similarity(pred: &ParsedResume, gold: &ParsedResume, field: Field) -> f64 {
    match field {
        Field::Skills => jaccard(&pred.skills, &gold.skills),
        Field::Experience | Field::Education => {
            rouge_l(&field_text(pred, field), &field_text(gold, field))
        }
        scalar => levenshtein_similarity(
            pred.scalar(scalar).unwrap_or_default(),
            gold.scalar(scalar).unwrap_or_default(),
        ),
    }
}

// ---------------------------------------------------------------------------
// Recruitment similarity
// ---------------------------------------------------------------------------

/// Coefficients of the recruitment similarity composite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsWeights {
    pub skills: f64,
    pub email: f64,
    pub phone: f64,
    pub remainder: BTreeMap<Field, f64>,
}

impl Default for RsWeights {
    fn default() -> Self {
        RsWeights {
            skills: 0.35,
            email: 0.15,
            phone: 0.15,
            remainder: [Field::Name, Field::Department, Field::Experience, Field::Education]
                .into_iter()
                .map(|f| (f, 0.0875))
                .collect(),
        }
    }
}

impl RsWeights {
    pub fn from_json(text: &str) -> Result<Self> {
        let w: RsWeights = serde_json::from_str(text).map_err(|e| Error::from_serde(text, &e))?;
        w.validate()?;
        Ok(w)
    }

    pub fn total(&self) -> f64 {
        self.skills + self.email + self.phone + self.remainder.values().sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.skills, self.email, self.phone]
            .into_iter()
            .chain(self.remainder.values().copied());
        for w in all {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Config(format!("RS weight {w} must be finite and non-negative")));
            }
        }
        for f in self.remainder.keys() {
            if matches!(f, Field::Skills | Field::Email | Field::Phone) {
                return Err(Error::Config(format!("`{f}` has a fixed RS slot, not a remainder weight")));
            }
        }
        let total = self.total();
        if (total - 1.0).abs() > RS_WEIGHT_TOLERANCE {
            return Err(Error::Config(format!("RS weights sum to {total}, expected 1")));
        }
        Ok(())
    }

    pub fn weight(&self, field: Field) -> f64 {
        match field {
            Field::Skills => self.skills,
            Field::Email => self.email,
            Field::Phone => self.phone,
            f => self.remainder.get(&f).copied().unwrap_or(0.0),
        }
    }

    /// Sets the skills coefficient and rescales every other coefficient
    /// proportionally so the total stays one.
    pub fn with_skill_weight(&self, skills: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&skills) {
            return Err(Error::Config(format!("skill weight {skills} must lie in [0, 1)")));
        }
        let others = 1.0 - self.skills;
        if others <= 0.0 {
            return Err(Error::Config("no non-skill RS weight to rescale".into()));
        }
        let k = (1.0 - skills) / others;
        Ok(RsWeights {
            skills,
            email: self.email * k,
            phone: self.phone * k,
            remainder: self.remainder.iter().map(|(f, w)| (*f, w * k)).collect(),
        })
    }
}

/// Weighted sum of per-field similarities.
pub fn recruitment_similarity(
    pred: &ParsedResume,
    gold: &ParsedResume,
    weights: &RsWeights,
) -> Result<f64> {
    weights.validate()?;
    Ok(rs_unchecked(pred, gold, weights))
}

pub(crate) fn rs_unchecked(pred: &ParsedResume, gold: &ParsedResume, weights: &RsWeights) -> f64 {
    Field::ALL
        .iter()
        .map(|f| weights.weight(*f))
        .zip(Field::ALL.iter().map(|f| field_similarity(pred, gold, *f)))
        .filter(|(w, _)| *w != 0.0)
        .map(|(w, s)| w * s)
        .sum()
}

// ---------------------------------------------------------------------------
// Corpus report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldScores {
    pub em: f64,
    pub f1: f64,
    pub bleu: f64,
    pub rouge_l: f64,
    /// The field's RS similarity term.
    pub similarity: f64,
}

impl FieldScores {
    fn score(pred: &ParsedResume, gold: &ParsedResume, field: Field) -> Self {
        let (p, g) = (field_text(pred, field), field_text(gold, field));
        FieldScores {
            em: if field_matches(pred, gold, field) { 1.0 } else { 0.0 },
            f1: token_f1(&p, &g),
            bleu: bleu(&p, &g),
            rouge_l: rouge_l(&p, &g),
            similarity: field_similarity(pred, gold, field),
        }
    }

    fn add(&mut self, o: &FieldScores) {
        self.em += o.em;
        self.f1 += o.f1;
        self.bleu += o.bleu;
        self.rouge_l += o.rouge_l;
        self.similarity += o.similarity;
    }

    fn scale(&mut self, k: f64) {
        self.em *= k;
        self.f1 *= k;
        self.bleu *= k;
        self.rouge_l *= k;
        self.similarity *= k;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedRouge {
    pub experience: f64,
    pub education: f64,
}

/// Corpus-level scores. Headline metrics are means over documents of the
/// per-document field means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// Field-level exact match (fraction of fields), not whole-document.
    pub em: f64,
    pub f1: f64,
    pub bleu: f64,
    /// ROUGE-L F-measure.
    pub rouge_l: f64,
    pub rs: f64,
    pub per_field: BTreeMap<Field, FieldScores>,
    /// ROUGE-L on the linearized nested histories.
    pub nested_rouge: NestedRouge,
    pub n_documents: usize,
    pub em_mode: String,
    pub rouge_variant: String,
}

struct DocScores {
    fields: [FieldScores; 7],
    rs: f64,
}

/// Scores every (prediction, gold) pair and averages over documents.
/// Per-document work runs in parallel; reduction is sequential in input order.
pub fn evaluate_corpus(pairs: &[(ParsedResume, ParsedResume)], weights: &RsWeights) -> Result<MetricReport> {
    if pairs.is_empty() {
        return Err(Error::Evaluation("no prediction/gold pairs to evaluate".into()));
    }
    weights.validate()?;
    let docs: Vec<DocScores> = pairs
        .par_iter()
        .map(|(p, g)| DocScores {
            fields: Field::ALL.map(|f| FieldScores::score(p, g, f)),
            rs: rs_unchecked(p, g, weights),
        })
        .collect();

    let n = docs.len() as f64;
    let mut per_field = [FieldScores::default(); 7];
    let mut rs = 0.0;
    for d in &docs {
        for (acc, s) in per_field.iter_mut().zip(&d.fields) {
            acc.add(s);
        }
        rs += d.rs;
    }
    for s in per_field.iter_mut() {
        s.scale(1.0 / n);
    }
    let mean_over_fields = |get: fn(&FieldScores) -> f64| {
        per_field.iter().map(get).sum::<f64>() / per_field.len() as f64
    };
    let idx = |f: Field| Field::ALL.iter().position(|x| *x == f).unwrap();
    Ok(MetricReport {
        em: mean_over_fields(|s| s.em),
        f1: mean_over_fields(|s| s.f1),
        bleu: mean_over_fields(|s| s.bleu),
        rouge_l: mean_over_fields(|s| s.rouge_l),
        rs: rs / n,
        nested_rouge: NestedRouge {
            experience: per_field[idx(Field::Experience)].rouge_l,
            education: per_field[idx(Field::Education)].rouge_l,
        },
        per_field: Field::ALL.into_iter().zip(per_field).collect(),
        n_documents: docs.len(),
        em_mode: "field-level".into(),
        rouge_variant: "ROUGE-L".into(),
    })
}

/// Aligned text table: one row per metric, one column per named report.
/// Values are percentages.
pub fn format_table(columns: &[(String, &MetricReport)]) -> String {
    type Row = (&'static str, fn(&MetricReport) -> f64);
    let rows: [Row; 7] = [
        ("EM (field-level)", |r| r.em),
        ("F1", |r| r.f1),
        ("BLEU", |r| r.bleu),
        ("ROUGE-L", |r| r.rouge_l),
        ("RS", |r| r.rs),
        ("ROUGE-L experience", |r| r.nested_rouge.experience),
        ("ROUGE-L education", |r| r.nested_rouge.education),
    ];
    let label_w = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max("Metric".len());
    let col_w: Vec<usize> = columns.iter().map(|(name, _)| name.len().max(6)).collect();

    let mut out = String::new();
    let _ = write!(out, "{:<label_w$}", "Metric");
    for ((name, _), w) in columns.iter().zip(&col_w) {
        let _ = write!(out, "  {name:>w$}");
    }
    out.push('\n');
    let _ = write!(out, "{}", "-".repeat(label_w));
    for w in &col_w {
        let _ = write!(out, "  {}", "-".repeat(*w));
    }
    out.push('\n');
    for (label, get) in rows {
        let _ = write!(out, "{label:<label_w$}");
        for ((_, report), w) in columns.iter().zip(&col_w) {
            let _ = write!(out, "  {:>w$.1}", 100.0 * get(report));
        }
        out.push('\n');
    }
    out
}
