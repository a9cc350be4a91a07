use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::schema::PLACEHOLDER;

/// Relative tolerance for comparing sums of weights. Weights are floats, so
/// sums that are equal over the rationals can differ in the last bits.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= WEIGHT_TOLERANCE * scale.abs().max(f64::MIN_POSITIVE)
}

/// Picks the value with the largest cumulative weight.
///
/// Ties are broken, in order: a real value beats `"N/A"`; the value with
/// the heaviest single supporter wins; the lexicographically smallest value
/// wins. Returns the winner and the per-value tally.
pub fn weighted_majority_vote(candidates: &[(String, f64)]) -> Result<(String, BTreeMap<String, f64>)> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    let mut tally: BTreeMap<String, f64> = BTreeMap::new();
    let mut single: HashMap<&str, f64> = HashMap::new();
    for (value, weight) in candidates {
        *tally.entry(value.clone()).or_insert(0.0) += weight;
        let s = single.entry(value.as_str()).or_insert(0.0);
        *s = s.max(*weight);
    }
    let top = tally.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut pool: Vec<&str> = tally
        .iter()
        .filter(|(_, w)| close(**w, top, top))
        .map(|(v, _)| v.as_str())
        .collect();
    if pool.iter().any(|v| *v != PLACEHOLDER) {
        pool.retain(|v| *v != PLACEHOLDER);
    }
    let heaviest = pool.iter().map(|v| single[v]).fold(f64::NEG_INFINITY, f64::max);
    pool.retain(|v| close(single[v], heaviest, heaviest));
    // `tally` iterates in lexicographic order, so `pool` is sorted.
    let winner = pool[0].to_owned();
    Ok((winner, tally))
}

/// Keeps the skills whose cumulative weight strictly exceeds `threshold`.
///
/// A model listing a skill twice supports it once. Output is ordered by
/// cumulative weight, heaviest first, then by first appearance scanning the
/// lists in the given order. Returns the kept skills and the full tally.
pub fn weighted_threshold_vote(
    skill_lists: &[(Vec<String>, f64)],
    threshold: f64,
) -> (Vec<String>, BTreeMap<String, f64>) {
    let mut tally: BTreeMap<String, f64> = BTreeMap::new();
    let mut first_seen: Vec<&str> = Vec::new();
    for (skills, weight) in skill_lists {
        let mut own = HashSet::new();
        for s in skills {
            if !own.insert(s.as_str()) {
                continue;
            }
            if !tally.contains_key(s) {
                first_seen.push(s);
            }
            *tally.entry(s.clone()).or_insert(0.0) += weight;
        }
    }
    let total: f64 = skill_lists.iter().map(|(_, w)| w).sum();
    let scale = total.max(threshold.abs());
    let mut kept: Vec<(usize, &str, f64)> = first_seen
        .iter()
        .enumerate()
        .map(|(i, s)| (i, *s, tally[*s]))
        .filter(|(_, _, w)| *w > threshold && !close(*w, threshold, scale))
        .collect();
    // Bucket weights so near-equal sums compare equal and the order stays total.
    let bucket = |w: f64| (w / (scale * WEIGHT_TOLERANCE)).round() as i128;
    kept.sort_by(|a, b| bucket(b.2).cmp(&bucket(a.2)).then(a.0.cmp(&b.0)));
    let winners = kept.into_iter().map(|(_, s, _)| s.to_owned()).collect();
    (winners, tally)
}
