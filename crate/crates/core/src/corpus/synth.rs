use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::vocab::{
    ProfessionTemplate, COMPANIES, DEGREES, EMAIL_DOMAINS, FIRST_NAMES, GENERIC_SKILLS,
    INSTITUTIONS, LAST_NAMES, LOCATIONS,
};
use super::{Corpus, CorpusEntry};
use crate::error::{Error, Result};
use crate::normalize::SkillOntology;
use crate::rng::derive_rng;
use crate::schema::{
    EducationEntry, ExperienceEntry, Field, ParsedResume, ResumeDocument, PLACEHOLDER, PRESENT,
};

/// Noise knobs for [`generate_synthetic`]. All rates are probabilities in
/// `[0, 1]`; with every rate at zero the raw text contains each gold value
/// verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n: usize,
    pub seed: u64,
    /// Chance that a date is rendered in a non-ISO accepted format.
    pub date_variation: f64,
    /// Chance that a skill is rendered as one of its ontology variants.
    pub synonym_rate: f64,
    /// Chance, per contact field (email, phone, department), of leaving it out.
    pub omission_rate: f64,
    /// Chance that an entry is an edge case.
    pub edge_case_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n: 100,
            seed: 0,
            date_variation: 0.3,
            synonym_rate: 0.15,
            omission_rate: 0.05,
            edge_case_rate: 0.1,
        }
    }
}

impl SynthConfig {
    pub fn noiseless(n: usize, seed: u64) -> Self {
        SynthConfig {
            n,
            seed,
            date_variation: 0.0,
            synonym_rate: 0.0,
            omission_rate: 0.0,
            edge_case_rate: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("synthetic corpus size must be at least 1".into()));
        }
        for (name, r) in [
            ("date_variation", self.date_variation),
            ("synonym_rate", self.synonym_rate),
            ("omission_rate", self.omission_rate),
            ("edge_case_rate", self.edge_case_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::Config(format!("{name} must be in [0, 1], got {r}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Labeled,
    PlainParagraphs,
    Bulleted,
    ShuffledSections,
}

impl Layout {
    pub const ALL: [Layout; 4] = [
        Layout::Labeled,
        Layout::PlainParagraphs,
        Layout::Bulleted,
        Layout::ShuffledSections,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeCase {
    EmptyExperience,
    EmptyEducation,
    SingleEntry,
    LongSkillList,
}

/// A deviation between gold and raw text, recorded so that consumers can
/// map every gold fact back to the text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    DateVariant { gold: String, rendered: String },
    SkillSynonym { gold: String, rendered: String },
    Omitted { field: Field },
    EdgeCase { case: EdgeCase },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryMeta {
    pub id: String,
    pub profession: String,
    pub layout: Layout,
    pub transforms: Vec<Transform>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationMetadata {
    pub config: SynthConfig,
    pub entries: Vec<EntryMeta>,
}

pub fn synth_id(index: usize) -> String {
    format!("synth-{index:05}")
}

/// Generates `config.n` resumes. Entry `i` depends only on `(seed, i)`, so a
/// larger `n` extends a smaller corpus without changing its prefix.
pub fn generate_synthetic(
    config: &SynthConfig,
    professions: &[ProfessionTemplate],
    ontology: &SkillOntology,
) -> Result<(Corpus, GenerationMetadata)> {
    config.validate()?;
    if professions.is_empty() {
        return Err(Error::Config("at least one profession template is required".into()));
    }
    let generated: Vec<(CorpusEntry, EntryMeta)> = (0..config.n)
        .into_par_iter()
        .map(|i| generate_one(config, i, professions, ontology))
        .collect();
    let mut corpus = Corpus::default();
    let mut entries = Vec::with_capacity(generated.len());
    for (entry, meta) in generated {
        corpus
            .profession_labels
            .insert(meta.id.clone(), meta.profession.clone());
        corpus.entries.push(entry);
        entries.push(meta);
    }
    Ok((
        corpus,
        GenerationMetadata {
            config: config.clone(),
            entries,
        },
    ))
}

fn generate_one(
    config: &SynthConfig,
    index: usize,
    professions: &[ProfessionTemplate],
    ontology: &SkillOntology,
) -> (CorpusEntry, EntryMeta) {
    let mut rng = derive_rng(config.seed, &[b"synth", &(index as u64).to_le_bytes()]);
    let template = professions.choose(&mut rng).expect("non-empty");
    let edge = if rng.random_bool(config.edge_case_rate) {
        Some(
            *[
                EdgeCase::EmptyExperience,
                EdgeCase::EmptyEducation,
                EdgeCase::SingleEntry,
                EdgeCase::LongSkillList,
            ]
            .choose(&mut rng)
            .unwrap(),
        )
    } else {
        None
    };
    let mut transforms = Vec::new();
    if let Some(case) = edge {
        transforms.push(Transform::EdgeCase { case });
    }

    let mut gold = draw_gold(&mut rng, template, edge);
    let mut omitted = Vec::new();
    for field in [Field::Email, Field::Phone, Field::Department] {
        if rng.random_bool(config.omission_rate) {
            *gold.scalar_mut(field).unwrap() = PLACEHOLDER.into();
            omitted.push(field);
            transforms.push(Transform::Omitted { field });
        }
    }

    let layout = *Layout::ALL.choose(&mut rng).unwrap();
    let mut noise = Noise {
        rng: &mut rng,
        config,
        ontology,
        transforms: &mut transforms,
    };
    let raw_text = render(&gold, layout, &mut noise);

    let id = synth_id(index);
    (
        CorpusEntry {
            document: ResumeDocument::new(id.clone(), raw_text),
            gold,
        },
        EntryMeta {
            id,
            profession: template.profession.into(),
            layout,
            transforms,
        },
    )
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool.choose(rng).expect("non-empty pool")
}

fn pick_distinct<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str], k: usize) -> Vec<&'a str> {
    pool.choose_multiple(rng, k.min(pool.len())).copied().collect()
}

fn iso(year: i32, month: u32) -> String {
    format!("{year:04}-{month:02}-01")
}

fn draw_gold(rng: &mut ChaCha8Rng, t: &ProfessionTemplate, edge: Option<EdgeCase>) -> ParsedResume {
    let first = pick(rng, FIRST_NAMES);
    let last = pick(rng, LAST_NAMES);
    let email = format!(
        "{}.{}{}@{}",
        first.to_lowercase(),
        last.to_lowercase(),
        rng.random_range(1..100),
        pick(rng, EMAIL_DOMAINS)
    );
    let phone = format!(
        "+1-555-{:03}-{:04}",
        rng.random_range(100..1000),
        rng.random_range(0..10000)
    );

    let skills: Vec<String> = if edge == Some(EdgeCase::LongSkillList) {
        let mut all: Vec<String> = Vec::new();
        for s in t.skills.iter().chain(GENERIC_SKILLS) {
            if !all.iter().any(|a| a == s) {
                all.push((*s).into());
            }
        }
        all.shuffle(rng);
        all
    } else {
        let k = rng.random_range(4..=7);
        pick_distinct(rng, t.skills, k).into_iter().map(String::from).collect()
    };

    let n_exp = match edge {
        Some(EdgeCase::EmptyExperience) => 0,
        Some(EdgeCase::SingleEntry) => 1,
        _ => rng.random_range(1..=3),
    };
    let companies = pick_distinct(rng, COMPANIES, n_exp);
    let mut experience = Vec::with_capacity(n_exp);
    let mut cursor = (rng.random_range(2021..=2024), rng.random_range(1..=12u32));
    for (k, company) in companies.into_iter().enumerate() {
        let end_date = if k == 0 && rng.random_bool(0.5) {
            PRESENT.to_string()
        } else {
            iso(cursor.0, cursor.1)
        };
        let start = (cursor.0 - rng.random_range(1..=4), rng.random_range(1..=12u32));
        let n_bullets = rng.random_range(2..=3);
        experience.push(ExperienceEntry {
            title: pick(rng, t.titles).into(),
            company: company.into(),
            location: pick(rng, LOCATIONS).into(),
            start_date: iso(start.0, start.1),
            end_date,
            bullets: pick_distinct(rng, t.bullets, n_bullets)
                .into_iter()
                .map(String::from)
                .collect(),
        });
        cursor = (start.0, start.1);
    }

    let n_edu = match edge {
        Some(EdgeCase::EmptyEducation) => 0,
        Some(EdgeCase::SingleEntry) => 1,
        _ => rng.random_range(1..=2),
    };
    let mut education = Vec::with_capacity(n_edu);
    let mut grad_year = cursor.0 - rng.random_range(0..=1);
    for _ in 0..n_edu {
        let length = rng.random_range(2..=4);
        education.push(EducationEntry {
            degree: pick(rng, DEGREES).into(),
            institution: pick(rng, INSTITUTIONS).into(),
            field_of_study: pick(rng, t.fields_of_study).into(),
            start_date: iso(grad_year - length, 9),
            end_date: iso(grad_year, 6),
        });
        grad_year -= length + rng.random_range(0..=2);
    }

    ParsedResume {
        name: format!("{first} {last}"),
        email,
        phone,
        department: t.department.into(),
        skills,
        experience,
        education,
    }
}

struct Noise<'a> {
    rng: &'a mut ChaCha8Rng,
    config: &'a SynthConfig,
    ontology: &'a SkillOntology,
    transforms: &'a mut Vec<Transform>,
}

const MONTH_ABBR: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];
const MONTH_FULL: [&str; 12] = [
    "January", "February", "March", "April", "May", "June", "July", "August", "September",
    "October", "November", "December",
];

impl Noise<'_> {
    fn date(&mut self, gold: &str) -> String {
        if gold == PRESENT {
            return if self.rng.random_bool(self.config.date_variation) {
                let r = "Present".to_string();
                self.transforms.push(Transform::DateVariant {
                    gold: gold.into(),
                    rendered: r.clone(),
                });
                r
            } else {
                gold.into()
            };
        }
        let (Ok(year), Ok(month)) = (gold[..4].parse::<i32>(), gold[5..7].parse::<usize>()) else {
            return gold.into();
        };
        if !self.rng.random_bool(self.config.date_variation) {
            return gold.into();
        }
        let rendered = match self.rng.random_range(0..5) {
            0 => format!("{} {year}", MONTH_ABBR[month - 1]),
            1 => format!("{} {year}", MONTH_FULL[month - 1]),
            2 => format!("{year}-{month:02}"),
            3 => format!("{month:02}/{year}"),
            _ => format!("{month:02}-{year}"),
        };
        self.transforms.push(Transform::DateVariant {
            gold: gold.into(),
            rendered: rendered.clone(),
        });
        rendered
    }

    fn skill(&mut self, gold: &str) -> String {
        if !self.rng.random_bool(self.config.synonym_rate) {
            return gold.into();
        }
        let variants: Vec<&str> = self
            .ontology
            .variants_of(gold)
            .into_iter()
            .filter(|v| *v != gold)
            .collect();
        match variants.choose(self.rng) {
            Some(v) => {
                self.transforms.push(Transform::SkillSynonym {
                    gold: gold.into(),
                    rendered: (*v).into(),
                });
                (*v).into()
            }
            None => gold.into(),
        }
    }

    fn skills(&mut self, gold: &[String]) -> Vec<String> {
        gold.iter().map(|s| self.skill(s)).collect()
    }
}

fn render(gold: &ParsedResume, layout: Layout, noise: &mut Noise<'_>) -> String {
    match layout {
        Layout::Labeled => labeled_sections(gold, noise).concat(),
        Layout::ShuffledSections => {
            let mut sections = labeled_sections(gold, noise);
            sections.shuffle(noise.rng);
            sections.concat()
        }
        Layout::PlainParagraphs => plain(gold, noise),
        Layout::Bulleted => bulleted(gold, noise),
    }
}

fn present(v: &str) -> Option<&str> {
    (v != PLACEHOLDER).then_some(v)
}

/// Contact, skills, experience and education blocks, each ending in a blank line.
fn labeled_sections(g: &ParsedResume, noise: &mut Noise<'_>) -> Vec<String> {
    let mut contact = format!("Name: {}\n", g.name);
    for (label, v) in [("Email", &g.email), ("Phone", &g.phone), ("Department", &g.department)] {
        if let Some(v) = present(v) {
            contact.push_str(&format!("{label}: {v}\n"));
        }
    }
    contact.push('\n');

    let skills = format!("Skills: {}\n\n", noise.skills(&g.skills).join(", "));

    let mut exp = String::from("Experience\n");
    if g.experience.is_empty() {
        exp.push_str("None listed\n");
    }
    for e in &g.experience {
        let (s, t) = (noise.date(&e.start_date), noise.date(&e.end_date));
        exp.push_str(&format!(
            "Title: {}\nCompany: {}\nLocation: {}\nDates: {s} - {t}\nResponsibilities:\n",
            e.title, e.company, e.location
        ));
        for b in &e.bullets {
            exp.push_str(&format!("- {b}\n"));
        }
    }
    exp.push('\n');

    let mut edu = String::from("Education\n");
    if g.education.is_empty() {
        edu.push_str("None listed\n");
    }
    for e in &g.education {
        let (s, t) = (noise.date(&e.start_date), noise.date(&e.end_date));
        edu.push_str(&format!(
            "Degree: {}\nInstitution: {}\nField of Study: {}\nDates: {s} - {t}\n",
            e.degree, e.institution, e.field_of_study
        ));
    }
    edu.push('\n');

    vec![contact, skills, exp, edu]
}

fn plain(g: &ParsedResume, noise: &mut Noise<'_>) -> String {
    let mut out = format!("{}\n", g.name);
    let contact: Vec<&str> = [&g.email, &g.phone].into_iter().filter_map(|v| present(v)).collect();
    if !contact.is_empty() {
        out.push_str(&format!("{}\n", contact.join(" | ")));
    }
    if let Some(d) = present(&g.department) {
        out.push_str(&format!("Works in {d}.\n"));
    }
    out.push_str(&format!("\nSkills include {}.\n", noise.skills(&g.skills).join(", ")));
    out.push('\n');
    if g.experience.is_empty() {
        out.push_str("No work history listed.\n");
    }
    for e in &g.experience {
        let (s, t) = (noise.date(&e.start_date), noise.date(&e.end_date));
        out.push_str(&format!(
            "{} at {} in {} from {s} to {t}. {}.\n",
            e.title,
            e.company,
            e.location,
            e.bullets.join(". ")
        ));
    }
    out.push('\n');
    if g.education.is_empty() {
        out.push_str("No formal education listed.\n");
    }
    for e in &g.education {
        let (s, t) = (noise.date(&e.start_date), noise.date(&e.end_date));
        out.push_str(&format!(
            "{} in {} from {}, {s} to {t}.\n",
            e.degree, e.field_of_study, e.institution
        ));
    }
    out
}

fn bulleted(g: &ParsedResume, noise: &mut Noise<'_>) -> String {
    let mut out = format!("{}\n", g.name);
    for (label, v) in [("Email", &g.email), ("Phone", &g.phone), ("Department", &g.department)] {
        if let Some(v) = present(v) {
            out.push_str(&format!("• {label}: {v}\n"));
        }
    }
    out.push_str("\nSKILLS\n");
    for s in noise.skills(&g.skills) {
        out.push_str(&format!("• {s}\n"));
    }
    out.push_str("\nEXPERIENCE\n");
    for e in &g.experience {
        let (s, t) = (noise.date(&e.start_date), noise.date(&e.end_date));
        out.push_str(&format!(
            "• {}, {}, {} ({s} to {t})\n",
            e.title, e.company, e.location
        ));
        for b in &e.bullets {
            out.push_str(&format!("  - {b}\n"));
        }
    }
    out.push_str("\nEDUCATION\n");
    for e in &g.education {
        let (s, t) = (noise.date(&e.start_date), noise.date(&e.end_date));
        out.push_str(&format!(
            "• {} in {}, {} ({s} to {t})\n",
            e.degree, e.field_of_study, e.institution
        ));
    }
    out
}
