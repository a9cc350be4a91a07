//! Test helpers shared by the core integration tests and the acceptance
//! suite: brute-force reference metrics, a vote oracle, and random inputs.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use resume_fusion::schema::{EducationEntry, ExperienceEntry, ParsedResume, PLACEHOLDER};

// ---------------------------------------------------------------------------
// Reference metrics. Each uses a different algorithm from the library.
// ---------------------------------------------------------------------------

fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(|t| t.to_lowercase()).collect()
}

/// Token F1 by merging the two sorted token lists.
pub fn ref_token_f1(pred: &str, gold: &str) -> f64 {
    let mut p = toks(pred);
    let mut g = toks(gold);
    if p.is_empty() && g.is_empty() {
        return 1.0;
    }
    if p.is_empty() || g.is_empty() {
        return 0.0;
    }
    p.sort();
    g.sort();
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < p.len() && j < g.len() {
        match p[i].cmp(&g[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    if common == 0 {
        return 0.0;
    }
    let prec = common as f64 / p.len() as f64;
    let rec = common as f64 / g.len() as f64;
    2.0 * prec * rec / (prec + rec)
}

fn count_ngram(seq: &[String], gram: &[String]) -> usize {
    if seq.len() < gram.len() {
        return 0;
    }
    (0..=seq.len() - gram.len())
        .filter(|&i| seq[i..i + gram.len()] == *gram)
        .count()
}

/// BLEU-4 by enumerating distinct candidate n-grams and counting each one
/// with a linear scan. Unigrams unsmoothed, orders 2-4 add-one smoothed.
pub fn ref_bleu(pred: &str, gold: &str) -> f64 {
    let c = toks(pred);
    let r = toks(gold);
    if c.is_empty() || r.is_empty() {
        return 0.0;
    }
    let mut product = 1.0f64;
    for n in 1..=4usize {
        let mut distinct: Vec<Vec<String>> = Vec::new();
        if c.len() >= n {
            for i in 0..=c.len() - n {
                let g = c[i..i + n].to_vec();
                if !distinct.contains(&g) {
                    distinct.push(g);
                }
            }
        }
        let clipped: usize = distinct
            .iter()
            .map(|g| count_ngram(&c, g).min(count_ngram(&r, g)))
            .sum();
        let total = c.len().saturating_sub(n - 1);
        let p = if n == 1 {
            clipped as f64 / total as f64
        } else {
            (clipped as f64 + 1.0) / (total as f64 + 1.0)
        };
        product *= p;
    }
    if product == 0.0 {
        return 0.0;
    }
    let bp = if c.len() > r.len() {
        1.0
    } else {
        (1.0 - r.len() as f64 / c.len() as f64).exp()
    };
    bp * product.powf(0.25)
}

fn lcs_memo(a: &[String], b: &[String], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
    if i == a.len() || j == b.len() {
        return 0;
    }
    if let Some(v) = memo.get(&(i, j)) {
        return *v;
    }
    let v = if a[i] == b[j] {
        1 + lcs_memo(a, b, i + 1, j + 1, memo)
    } else {
        lcs_memo(a, b, i + 1, j, memo).max(lcs_memo(a, b, i, j + 1, memo))
    };
    memo.insert((i, j), v);
    v
}

/// ROUGE-L F-measure with a top-down memoized LCS.
pub fn ref_rouge_l(pred: &str, gold: &str) -> f64 {
    let p = toks(pred);
    let g = toks(gold);
    if p.is_empty() && g.is_empty() {
        return 1.0;
    }
    if p.is_empty() || g.is_empty() {
        return 0.0;
    }
    let l = lcs_memo(&p, &g, 0, 0, &mut HashMap::new());
    if l == 0 {
        return 0.0;
    }
    let prec = l as f64 / p.len() as f64;
    let rec = l as f64 / g.len() as f64;
    2.0 * prec * rec / (prec + rec)
}

fn edit_memo(a: &[char], b: &[char], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
    if i == a.len() {
        return b.len() - j;
    }
    if j == b.len() {
        return a.len() - i;
    }
    if let Some(v) = memo.get(&(i, j)) {
        return *v;
    }
    let v = if a[i] == b[j] {
        edit_memo(a, b, i + 1, j + 1, memo)
    } else {
        1 + edit_memo(a, b, i + 1, j + 1, memo)
            .min(edit_memo(a, b, i + 1, j, memo))
            .min(edit_memo(a, b, i, j + 1, memo))
    };
    memo.insert((i, j), v);
    v
}

/// `1 - d / max(len)` with a top-down memoized edit distance.
pub fn ref_levenshtein_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - edit_memo(&a, &b, 0, 0, &mut HashMap::new()) as f64 / longest as f64
}

// ---------------------------------------------------------------------------
// Vote oracle
// ---------------------------------------------------------------------------

/// Majority winner by sorting every distinct value on the full tie-break
/// key. Exact comparisons, so callers should use exactly representable
/// weights.
pub fn ref_majority(candidates: &[(String, f64)]) -> (String, Vec<(String, f64)>) {
    let mut values: Vec<String> = candidates.iter().map(|(v, _)| v.clone()).collect();
    values.sort();
    values.dedup();
    let tally: Vec<(String, f64)> = values
        .iter()
        .map(|v| (v.clone(), candidates.iter().filter(|(c, _)| c == v).map(|(_, w)| w).sum()))
        .collect();
    let heaviest = |v: &str| {
        candidates
            .iter()
            .filter(|(c, _)| c == v)
            .map(|(_, w)| *w)
            .fold(0.0, f64::max)
    };
    let mut ranked = tally.clone();
    ranked.sort_by(|(va, wa), (vb, wb)| {
        wb.total_cmp(wa)
            .then((va == PLACEHOLDER).cmp(&(vb == PLACEHOLDER)))
            .then(heaviest(vb).total_cmp(&heaviest(va)))
            .then(va.cmp(vb))
    });
    (ranked[0].0.clone(), tally)
}

/// Skills whose summed weight (one vote per model) strictly exceeds the
/// threshold, as a sorted list.
pub fn ref_threshold_set(lists: &[(Vec<String>, f64)], threshold: f64) -> Vec<String> {
    let mut all: Vec<String> = lists.iter().flat_map(|(l, _)| l.iter().cloned()).collect();
    all.sort();
    all.dedup();
    all.into_iter()
        .filter(|s| lists.iter().filter(|(l, _)| l.contains(s)).map(|(_, w)| w).sum::<f64>() > threshold)
        .collect()
}

// ---------------------------------------------------------------------------
// Random inputs
// ---------------------------------------------------------------------------

const WORDS: &[&str] = &[
    "the", "data", "Data", "model", "team", "led", "built", "a", "of", "and", "python", "Python",
    "system", "sales", "design", "x", "report", "cloud",
];

/// Whitespace-separated text of 0 to `max_tokens` tokens from a small
/// vocabulary so pairs share n-grams often.
pub fn random_text(rng: &mut ChaCha8Rng, max_tokens: usize) -> String {
    let n = rng.random_range(0..=max_tokens);
    let seps = [" ", "  ", "\t", "\n"];
    let mut out = String::new();
    for i in 0..n {
        if i > 0 {
            out.push_str(seps.choose(rng).unwrap());
        }
        out.push_str(WORDS.choose(rng).unwrap());
    }
    out
}

/// Pair where the prediction is often a perturbed copy of the gold text.
pub fn random_text_pair(rng: &mut ChaCha8Rng) -> (String, String) {
    let gold = random_text(rng, 30);
    if rng.random_bool(0.5) {
        let mut toks: Vec<&str> = gold.split_whitespace().collect();
        let edits = rng.random_range(0..4);
        for _ in 0..edits {
            match rng.random_range(0..3) {
                0 if !toks.is_empty() => {
                    let i = rng.random_range(0..toks.len());
                    toks.remove(i);
                }
                1 => {
                    let i = rng.random_range(0..=toks.len());
                    toks.insert(i, WORDS.choose(rng).unwrap());
                }
                _ if toks.len() > 1 => {
                    let i = rng.random_range(0..toks.len() - 1);
                    toks.swap(i, i + 1);
                }
                _ => {}
            }
        }
        (toks.join(" "), gold)
    } else {
        (random_text(rng, 30), gold)
    }
}

const RAW_DATES: &[&str] = &[
    "2020-01", "Jan 2020", "january 2020", "2019-03-15", "2018", "03/2017", "3-2016", "Sept. 2015",
    "present", "Current", "", "N/A", "n/a", "none", "soon", "2021-02-30", "  2022-11  ",
];

const RAW_SKILLS: &[&str] = &[
    "Python 3", "python", "py", "JS", "JavaScript", "Rust", "  Rust  lang ", "SQL", "", "N/A",
    "Excel", "Project   Management", "C plus plus", "C++", "golang", "Underwater Basket Weaving",
];

const RAW_TEXT: &[&str] = &[
    "Ada Lovelace", "  Grace   Hopper ", "", "N/A", "none", "NULL", "Engineering", "sales\tteam",
    "a@b.com", "+1 555 0100", "London", "Acme Corp",
];

fn pick(rng: &mut ChaCha8Rng, from: &[&str]) -> String {
    from.choose(rng).unwrap().to_string()
}

/// A messy resume of the kind a backend might return before normalization.
pub fn random_raw_resume(rng: &mut ChaCha8Rng) -> ParsedResume {
    let experience = (0..rng.random_range(0..4))
        .map(|_| ExperienceEntry {
            title: pick(rng, RAW_TEXT),
            company: pick(rng, RAW_TEXT),
            location: pick(rng, RAW_TEXT),
            start_date: pick(rng, RAW_DATES),
            end_date: pick(rng, RAW_DATES),
            bullets: (0..rng.random_range(0..4)).map(|_| pick(rng, RAW_TEXT)).collect(),
        })
        .collect();
    let education = (0..rng.random_range(0..3))
        .map(|_| EducationEntry {
            degree: pick(rng, RAW_TEXT),
            institution: pick(rng, RAW_TEXT),
            field_of_study: pick(rng, RAW_TEXT),
            start_date: pick(rng, RAW_DATES),
            end_date: pick(rng, RAW_DATES),
        })
        .collect();
    ParsedResume {
        name: pick(rng, RAW_TEXT),
        email: pick(rng, RAW_TEXT),
        phone: pick(rng, RAW_TEXT),
        department: pick(rng, RAW_TEXT),
        skills: (0..rng.random_range(0..8)).map(|_| pick(rng, RAW_SKILLS)).collect(),
        experience,
        education,
    }
}
