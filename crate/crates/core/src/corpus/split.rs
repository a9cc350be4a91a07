use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::Corpus;
use crate::error::{Error, Result};
use crate::rng::derive_rng;

/// Slack for floating point products like `0.29 * 100` before flooring.
const FLOOR_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub validation_fraction: f64,
    pub test_fraction: f64,
    pub seed: u64,
    pub stratify_by_profession: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            validation_fraction: 0.1,
            test_fraction: 0.1,
            seed: 0,
            stratify_by_profession: true,
        }
    }
}

impl SplitSpec {
    pub fn with_seed(seed: u64) -> Self {
        SplitSpec {
            seed,
            ..SplitSpec::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let fr = [self.train_fraction, self.validation_fraction, self.test_fraction];
        if fr.iter().any(|f| !f.is_finite() || *f <= 0.0) {
            return Err(Error::Split("every fraction must be positive".into()));
        }
        let total: f64 = fr.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Split(format!("fractions sum to {total}, expected 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Corpus,
    pub validation: Corpus,
    pub test: Corpus,
    pub stratified: bool,
}

fn floor_count(n: usize, fraction: f64) -> usize {
    (n as f64 * fraction + FLOOR_EPS).floor() as usize
}

/// Partitions a corpus into train/validation/test.
///
/// Validation and test sizes are `floor(n * fraction)`; the remainder goes to
/// train. With stratification every profession contributes within one
/// document of its proportional share to each of validation and test.
/// Entries keep their corpus order inside each part.
pub fn split_corpus(corpus: &Corpus, spec: &SplitSpec) -> Result<Split> {
    spec.validate()?;
    let n = corpus.len();
    if n < 3 {
        return Err(Error::Split(format!(
            "corpus of {n} documents cannot fill three non-empty fractions"
        )));
    }
    let n_val = floor_count(n, spec.validation_fraction);
    let n_test = floor_count(n, spec.test_fraction);

    let mut strata: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, e) in corpus.entries.iter().enumerate() {
        let label = if spec.stratify_by_profession {
            corpus
                .profession_labels
                .get(&e.document.id)
                .map(String::as_str)
                .unwrap_or("")
        } else {
            ""
        };
        strata.entry(label).or_default().push(i);
    }

    let sizes: Vec<usize> = strata.values().map(Vec::len).collect();
    let val_quota = apportion(&sizes, spec.validation_fraction, n_val, &vec![0; sizes.len()]);
    let test_quota = apportion(&sizes, spec.test_fraction, n_test, &val_quota);

    let (mut train, mut val, mut test) = (Vec::new(), Vec::new(), Vec::new());
    for (k, (label, members)) in strata.into_iter().enumerate() {
        let mut shuffled = members;
        let mut rng = derive_rng(spec.seed, &[b"split", label.as_bytes()]);
        shuffled.shuffle(&mut rng);
        let (v, rest) = shuffled.split_at(val_quota[k]);
        let (t, tr) = rest.split_at(test_quota[k]);
        val.extend_from_slice(v);
        test.extend_from_slice(t);
        train.extend_from_slice(tr);
    }
    for part in [&mut train, &mut val, &mut test] {
        part.sort_unstable();
    }
    Ok(Split {
        train: corpus.select(&train),
        validation: corpus.select(&val),
        test: corpus.select(&test),
        stratified: spec.stratify_by_profession,
    })
}

/// Distributes `total` slots over strata: floors of the proportional shares,
/// then one extra slot each for the largest fractional remainders (ties to
/// the earlier stratum), skipping strata without spare capacity.
fn apportion(sizes: &[usize], fraction: f64, total: usize, taken: &[usize]) -> Vec<usize> {
    let exact: Vec<f64> = sizes.iter().map(|&s| s as f64 * fraction).collect();
    let mut quota: Vec<usize> = exact
        .iter()
        .zip(sizes.iter().zip(taken))
        .map(|(q, (&s, &t))| ((q + FLOOR_EPS).floor() as usize).min(s - t))
        .collect();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut remaining = total.saturating_sub(quota.iter().sum());
    while remaining > 0 {
        let before = remaining;
        for &k in &order {
            if remaining == 0 {
                break;
            }
            if quota[k] + taken[k] < sizes[k] {
                quota[k] += 1;
                remaining -= 1;
            }
        }
        if remaining == before {
            break;
        }
    }
    quota
}
