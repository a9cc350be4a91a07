//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use resume_fusion::corpus::{default_professions, generate_synthetic, Corpus, SynthConfig};
use resume_fusion::pipeline::{normalize_panel, prediction_table, PredictionTable};
use resume_fusion::extractors::{run_panel, PanelConfig};
use resume_fusion::SkillOntology;

/// Three mock backends with moderate noise on every field.
pub const PANEL: &str = include_str!("../../../configs/mock_panel.json");

pub fn corpus(n: usize) -> Corpus {
    let config = SynthConfig { n, seed: 1, ..SynthConfig::default() };
    generate_synthetic(&config, &default_professions(), &SkillOntology::default())
        .expect("synthetic corpus")
        .0
}

/// Normalized panel predictions for every document in `corpus`.
pub fn predictions(corpus: &Corpus) -> PredictionTable {
    let config = PanelConfig::from_json(PANEL).expect("panel config");
    let backends = config.build_backends(Arc::new(corpus.golds())).expect("backends");
    let mut entries = run_panel(&corpus.documents(), &backends, None).expect("panel");
    normalize_panel(&mut entries, &SkillOntology::default());
    prediction_table(&entries)
}
