//! Choosing vote weights on validation data, and RS sensitivity to the
//! skills weight.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::aggregate::{FallbackDelegate, WeightVector};
use crate::corpus::CorpusEntry;
use crate::error::{Error, Result};
use crate::metrics::{rs_unchecked, RsWeights};
use crate::pipeline::{aggregate_table, PredictionTable};
use crate::schema::{ParsedResume, ResumeDocument};

/// Values each model may take in [`default_grid`].
pub const DEFAULT_GRID_VALUES: [f64; 3] = [1.0, 2.0, 3.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub weights: WeightVector,
    pub rs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub best_weights: WeightVector,
    pub best_rs: f64,
    /// Every grid point in input order.
    pub grid: Vec<GridPoint>,
    /// Number of distinct scale classes actually aggregated.
    pub evaluated_classes: usize,
    #[serde(skip)]
    pub runtime: Duration,
}

impl CalibrationResult {
    /// Grid points sorted by RS, best first; ties keep grid order.
    pub fn ranked(&self) -> Vec<&GridPoint> {
        let mut v: Vec<&GridPoint> = self.grid.iter().collect();
        v.sort_by(|a, b| b.rs.total_cmp(&a.rs));
        v
    }

    pub fn format_table(&self) -> String {
        let ids: Vec<&str> = self.best_weights.model_ids();
        let col = |s: &str| s.len().max(6);
        let mut out = String::new();
        for id in &ids {
            out.push_str(&format!("{:>w$}  ", id, w = col(id)));
        }
        out.push_str("  RS (%)\n");
        for p in self.ranked() {
            for id in &ids {
                let w = p.weights.get(id).unwrap_or(f64::NAN);
                out.push_str(&format!("{:>width$}  ", w, width = col(id)));
            }
            let mark = if p.weights == self.best_weights { " *" } else { "" };
            out.push_str(&format!("{:>8.2}{mark}\n", p.rs * 100.0));
        }
        out
    }
}

/// Every assignment of [`DEFAULT_GRID_VALUES`] to the given models
/// (3^n points), in lexicographic order over model ids.
pub fn default_grid(model_ids: &[&str]) -> Result<Vec<WeightVector>> {
    let mut ids: Vec<&str> = model_ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() {
        return Err(Error::Config("default grid needs at least one model".into()));
    }
    let k = DEFAULT_GRID_VALUES.len();
    let n = k.pow(ids.len() as u32);
    (0..n)
        .map(|mut code| {
            let mut weights = vec![0.0; ids.len()];
            for slot in weights.iter_mut().rev() {
                *slot = DEFAULT_GRID_VALUES[code % k];
                code /= k;
            }
            WeightVector::from_pairs(ids.iter().copied().zip(weights))
        })
        .collect()
}

/// Parses a grid file: a JSON array of weight objects.
pub fn parse_grid(text: &str) -> Result<Vec<WeightVector>> {
    let grid: Vec<WeightVector> =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("grid: {e}")))?;
    if grid.is_empty() {
        return Err(Error::Config("grid is empty".into()));
    }
    Ok(grid)
}

/// Key shared by weight vectors that are positive multiples of each other.
fn scale_class(w: &WeightVector) -> Vec<(String, i64)> {
    let min = w.iter().map(|(_, v)| v).fold(f64::INFINITY, f64::min);
    w.iter()
        .map(|(k, v)| (k.to_owned(), (v / min * 1e9).round() as i64))
        .collect()
}

fn mean_rs(
    documents: &[ResumeDocument],
    golds: &[&ParsedResume],
    table: &PredictionTable,
    weights: &WeightVector,
    rs_weights: &RsWeights,
) -> Result<f64> {
    let aggs = aggregate_table(documents, table, weights, &FallbackDelegate)?;
    let total: f64 = aggs
        .iter()
        .zip(golds)
        .map(|(a, g)| rs_unchecked(&a.resume, g, rs_weights))
        .sum();
    Ok(total / documents.len() as f64)
}

/// Scores every grid vector by mean validation RS after aggregating the
/// precomputed predictions with the deterministic fallback delegate.
///
/// Vectors that are positive multiples of one another produce identical
/// aggregates, so each scale class is aggregated once. The best vector has
/// the highest RS; ties go to the smallest total weight, then to the
/// lexicographically smallest weight sequence in model id order.
pub fn grid_search_weights(
    validation: &[CorpusEntry],
    predictions: &PredictionTable,
    grid: &[WeightVector],
    rs_weights: &RsWeights,
) -> Result<CalibrationResult> {
    let started = Instant::now();
    rs_weights.validate()?;
    if grid.is_empty() {
        return Err(Error::Config("grid is empty".into()));
    }
    if validation.is_empty() {
        return Err(Error::Evaluation("validation set is empty".into()));
    }
    let models: BTreeSet<&str> = grid.iter().flat_map(|w| w.model_ids()).collect();
    for w in grid {
        w.check_covers(models.iter().copied())?;
    }
    for e in validation {
        let preds = predictions.get(&e.document.id);
        for m in &models {
            if !preds.is_some_and(|ps| ps.iter().any(|p| p.model_id == *m)) {
                return Err(Error::Evaluation(format!(
                    "missing prediction for model `{m}` on document `{}`",
                    e.document.id
                )));
            }
        }
    }
    let table: PredictionTable = validation
        .iter()
        .map(|e| {
            let preds = predictions[&e.document.id]
                .iter()
                .filter(|p| models.contains(p.model_id.as_str()))
                .cloned()
                .collect();
            (e.document.id.clone(), preds)
        })
        .collect();
    let documents: Vec<ResumeDocument> = validation.iter().map(|e| e.document.clone()).collect();
    let golds: Vec<&ParsedResume> = validation.iter().map(|e| &e.gold).collect();

    let mut classes: BTreeMap<Vec<(String, i64)>, usize> = BTreeMap::new();
    let mut representatives: Vec<&WeightVector> = Vec::new();
    let class_of: Vec<usize> = grid
        .iter()
        .map(|w| {
            *classes.entry(scale_class(w)).or_insert_with(|| {
                representatives.push(w);
                representatives.len() - 1
            })
        })
        .collect();
    let scores: Vec<f64> = representatives
        .par_iter()
        .map(|w| mean_rs(&documents, &golds, &table, w, rs_weights))
        .collect::<Result<_>>()?;

    let points: Vec<GridPoint> = grid
        .iter()
        .zip(&class_of)
        .map(|(w, c)| GridPoint {
            weights: w.clone(),
            rs: scores[*c],
        })
        .collect();
    let best = points
        .iter()
        .reduce(|best, p| if preferred(p, best) { p } else { best })
        .expect("non-empty grid");
    Ok(CalibrationResult {
        best_weights: best.weights.clone(),
        best_rs: best.rs,
        evaluated_classes: representatives.len(),
        grid: points.clone(),
        runtime: started.elapsed(),
    })
}

fn preferred(a: &GridPoint, b: &GridPoint) -> bool {
    const RS_TIE: f64 = 1e-12;
    if (a.rs - b.rs).abs() > RS_TIE {
        return a.rs > b.rs;
    }
    let (ta, tb) = (a.weights.total(), b.weights.total());
    if (ta - tb).abs() > 1e-9 * ta.max(tb) {
        return ta < tb;
    }
    let seq = |w: &WeightVector| w.iter().map(|(_, v)| v).collect::<Vec<f64>>();
    seq(&a.weights)
        .iter()
        .zip(seq(&b.weights).iter())
        .find(|(x, y)| x != y)
        .is_some_and(|(x, y)| x < y)
}

/// Mean RS for each requested skills weight, the other RS weights rescaled
/// to keep the total at 1.
pub fn rs_weight_sweep(
    pairs: &[(ParsedResume, ParsedResume)],
    skill_weights: &[f64],
    base: &RsWeights,
) -> Result<Vec<(f64, f64)>> {
    if pairs.is_empty() {
        return Err(Error::Evaluation("no pairs to sweep".into()));
    }
    skill_weights
        .iter()
        .map(|&s| {
            let w = base.with_skill_weight(s)?;
            w.validate()?;
            let total: f64 = pairs.iter().map(|(p, g)| rs_unchecked(p, g, &w)).sum();
            Ok((s, total / pairs.len() as f64))
        })
        .collect()
}
