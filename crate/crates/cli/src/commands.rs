use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use resume_fusion::aggregate::{build_delegate, FieldVote, WeightVector};
use resume_fusion::calibrate::{default_grid, grid_search_weights, parse_grid, CalibrationResult};
use resume_fusion::corpus::{
    default_professions, generate_synthetic, load_corpus, save_corpus, split_corpus, Corpus,
    SplitSpec, SynthConfig,
};
use resume_fusion::extractors::{run_panel, BackendFailure, BackendSpec, PanelConfig, PanelEntry};
use resume_fusion::metrics::{evaluate_corpus, format_table, RsWeights};
use resume_fusion::normalize::{normalize_fields, SkillOntology};
use resume_fusion::pipeline::{aggregate_entries, normalize_panel, prediction_table, with_pool};
use resume_fusion::schema::{resume_from_value, ParsedResume};
use resume_fusion::Error;

use crate::{CalibrateArgs, EvaluateArgs, Format, ParseArgs, SynthArgs};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::Json { .. }
            | Error::Schema { .. }
            | Error::CorpusLine { .. }
            | Error::DuplicateId(_)
            | Error::Split(_) => CliError::usage(e.to_string()),
            _ => CliError::runtime(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn require(path: &Path) -> CliResult {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::usage(format!("{}: no such file", path.display())))
    }
}

fn read(path: &Path) -> CliResult<String> {
    require(path)?;
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::runtime(format!("cannot write {}: {e}", path.display()))
}

fn write_jsonl<T: Serialize>(path: &Path, lines: impl IntoIterator<Item = T>) -> CliResult {
    let mut w = create(path)?;
    for line in lines {
        serde_json::to_writer(&mut w, &line).map_err(|e| CliError::runtime(e.to_string()))?;
        w.write_all(b"\n").map_err(write_err(path))?;
    }
    w.flush().map_err(write_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::runtime(e.to_string()))?;
    w.write_all(b"\n").map_err(write_err(path))?;
    w.flush().map_err(write_err(path))
}

fn ontology(path: &Option<PathBuf>) -> CliResult<SkillOntology> {
    match path {
        Some(p) => Ok(SkillOntology::from_json(&read(p)?)?),
        None => Ok(SkillOntology::default()),
    }
}

fn rs_weights(path: &Option<PathBuf>) -> CliResult<RsWeights> {
    match path {
        Some(p) => Ok(RsWeights::from_json(&read(p)?)?),
        None => Ok(RsWeights::default()),
    }
}

fn corpus(path: &Path, onto: &SkillOntology) -> CliResult<Corpus> {
    require(path)?;
    load_corpus(path, onto).map_err(|e| match e {
        Error::Io(io) => CliError::runtime(format!("{}: {io}", path.display())),
        other => CliError::usage(format!("{}: {other}", path.display())),
    })
}

fn grid(path: &Option<PathBuf>, config: &PanelConfig) -> CliResult<Vec<WeightVector>> {
    match path {
        Some(p) => parse_grid(&read(p)?).map_err(|e| CliError::usage(format!("{}: {e}", p.display()))),
        None => Ok(default_grid(&config.model_ids())?),
    }
}

fn parallelism(p: Option<u64>) -> Option<usize> {
    p.map(|n| n as usize)
}

/// Loads a panel config and offsets every mock seed by `seed`.
fn panel_config(path: &Path, seed: u64) -> CliResult<PanelConfig> {
    let mut config = PanelConfig::from_json(&read(path)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    for b in config.backends.iter_mut() {
        if let BackendSpec::Mock(p) = b {
            p.seed = p.seed.wrapping_add(seed);
        }
    }
    Ok(config)
}

fn extract(config: &PanelConfig, corpus: &Corpus, onto: &SkillOntology, par: Option<usize>) -> CliResult<Vec<PanelEntry>> {
    let backends = config.build_backends(Arc::new(corpus.golds()))?;
    let mut entries = run_panel(&corpus.documents(), &backends, par)?;
    normalize_panel(&mut entries, onto);
    Ok(entries)
}

pub fn synth(a: SynthArgs) -> CliResult {
    let mut config = if a.noiseless {
        SynthConfig::noiseless(a.n as usize, a.seed)
    } else {
        SynthConfig {
            n: a.n as usize,
            seed: a.seed,
            ..SynthConfig::default()
        }
    };
    if let Some(r) = a.date_variation {
        config.date_variation = r;
    }
    if let Some(r) = a.synonym_rate {
        config.synonym_rate = r;
    }
    if let Some(r) = a.omission_rate {
        config.omission_rate = r;
    }
    if let Some(r) = a.edge_case_rate {
        config.edge_case_rate = r;
    }
    let (corpus, meta) = generate_synthetic(&config, &default_professions(), &SkillOntology::default())?;
    save_corpus(&corpus, &a.out).map_err(|e| CliError::runtime(format!("cannot write {}: {e}", a.out.display())))?;
    let meta_path = a.meta.unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".meta.json");
        PathBuf::from(p)
    });
    write_json(&meta_path, &meta)?;
    log::info!("wrote {} resumes to {}", corpus.len(), a.out.display());
    Ok(())
}

#[derive(Serialize)]
struct Failure<'a> {
    error: &'a str,
    backends: &'a [BackendFailure],
}

#[derive(Serialize)]
struct OutputLine<'a> {
    id: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    resume: Option<&'a ParsedResume>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<Failure<'a>>,
}

#[derive(Serialize)]
struct AuditLine<'a> {
    id: &'a str,
    votes: &'a [FieldVote],
    warnings: &'a [String],
    failures: &'a [BackendFailure],
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

fn weights_arg(text: &str) -> CliResult<WeightVector> {
    let path = Path::new(text);
    let source = if path.is_file() { read(path)? } else { text.to_owned() };
    Ok(WeightVector::parse(&source)?)
}

pub fn parse(a: ParseArgs) -> CliResult {
    for p in [&a.corpus, &a.config] {
        require(p)?;
    }
    let onto = ontology(&a.ontology)?;
    let rs = rs_weights(&a.rs_weights)?;
    let config = panel_config(&a.config, a.seed)?;
    let calibrating = a.weights.trim() == "calibrate";
    let fixed = if calibrating {
        None
    } else {
        let w = weights_arg(&a.weights)?;
        w.check_covers(config.model_ids())?;
        Some(w)
    };
    let grid = if calibrating { Some(grid(&a.grid, &config)?) } else { None };
    let delegate = build_delegate(&config.consensus)?;
    let corpus = corpus(&a.corpus, &onto)?;
    let par = parallelism(a.parallelism);

    let entries = extract(&config, &corpus, &onto, par)?;
    let weights = match (fixed, grid) {
        (Some(w), _) => w,
        (None, Some(grid)) => {
            let split = split_corpus(&corpus, &SplitSpec::with_seed(a.seed))?;
            let table = prediction_table(&entries);
            let result = with_pool(par, || grid_search_weights(&split.validation.entries, &table, &grid, &rs))??;
            eprintln!("calibrated weights: {} (validation RS {:.4})", result.best_weights, result.best_rs);
            result.best_weights
        }
        (None, None) => unreachable!(),
    };
    let results = aggregate_entries(&corpus.documents(), entries, &weights, delegate.as_ref(), par)?;

    let succeeded = results.iter().filter(|r| r.aggregation.is_some()).count();
    write_jsonl(
        &a.out,
        results.iter().map(|r| OutputLine {
            id: &r.document_id,
            resume: r.aggregation.as_ref().map(|g| &g.resume),
            failure: r.aggregation.is_none().then(|| Failure {
                error: r.error.as_deref().unwrap_or("aggregation failed"),
                backends: &r.failures,
            }),
        }),
    )?;
    if let Some(audit) = &a.audit {
        write_jsonl(
            audit,
            results.iter().map(|r| AuditLine {
                id: &r.document_id,
                votes: r.aggregation.as_ref().map(|g| g.votes.as_slice()).unwrap_or(&[]),
                warnings: r.aggregation.as_ref().map(|g| g.warnings.as_slice()).unwrap_or(&[]),
                failures: &r.failures,
                error: r.error.as_deref(),
            }),
        )?;
    }
    let failed = results.len() - succeeded;
    if failed > 0 {
        eprintln!("{failed} of {} documents failed; see failure lines in {}", results.len(), a.out.display());
    }
    if succeeded == 0 && !results.is_empty() {
        return Err(CliError::runtime("every document failed"));
    }
    Ok(())
}

/// Reads predictions keyed by id. A line holds `resume` (parse output),
/// `gold` (a corpus line) or `failure`; failures score as an empty resume.
fn read_predictions(path: &Path, onto: &SkillOntology) -> CliResult<BTreeMap<String, ParsedResume>> {
    require(path)?;
    let file = File::open(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: String| CliError::usage(format!("{}: line {}: {m}", path.display(), i + 1));
        let v: Value = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        let id = v
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing string `id`".into()))?
            .to_owned();
        let resume = match v.get("resume").or_else(|| v.get("gold")) {
            Some(r) => resume_from_value(r).map_err(|e| bad(e.to_string()))?.0,
            None if v.get("failure").is_some() => ParsedResume::default(),
            None => return Err(bad("expected `resume`, `gold` or `failure`".into())),
        };
        if out.insert(id.clone(), normalize_fields(&resume, onto)).is_some() {
            return Err(bad(format!("duplicate id `{id}`")));
        }
    }
    Ok(out)
}

pub fn evaluate(a: EvaluateArgs) -> CliResult {
    let onto = ontology(&a.ontology)?;
    let rs = rs_weights(&a.rs_weights)?;
    let gold = corpus(&a.gold, &onto)?;
    let gold_ids: BTreeSet<&str> = gold.entries.iter().map(|e| e.document.id.as_str()).collect();

    let mut reports = Vec::new();
    for path in &a.pred {
        let preds = read_predictions(path, &onto)?;
        let missing: Vec<&str> = gold_ids.iter().copied().filter(|id| !preds.contains_key(*id)).collect();
        let extra: Vec<&str> = preds.keys().map(String::as_str).filter(|id| !gold_ids.contains(id)).collect();
        if !missing.is_empty() || !extra.is_empty() {
            let mut msg = format!("{}: ids do not match the gold corpus", path.display());
            if !missing.is_empty() {
                msg.push_str(&format!("; missing: {}", missing.join(", ")));
            }
            if !extra.is_empty() {
                msg.push_str(&format!("; unknown: {}", extra.join(", ")));
            }
            return Err(CliError::usage(msg));
        }
        let pairs: Vec<(ParsedResume, ParsedResume)> = gold
            .entries
            .iter()
            .map(|e| (preds[&e.document.id].clone(), e.gold.clone()))
            .collect();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        reports.push((name, evaluate_corpus(&pairs, &rs)?));
    }

    match a.format {
        Format::Table => {
            let cols: Vec<(String, &_)> = reports.iter().map(|(n, r)| (n.clone(), r)).collect();
            print!("{}", format_table(&cols));
        }
        Format::Json => {
            let map: BTreeMap<&str, _> = reports.iter().map(|(n, r)| (n.as_str(), r)).collect();
            let text = serde_json::to_string_pretty(&map).map_err(|e| CliError::runtime(e.to_string()))?;
            println!("{text}");
        }
    }
    Ok(())
}

pub fn calibrate(a: CalibrateArgs) -> CliResult {
    for p in [&a.corpus, &a.config] {
        require(p)?;
    }
    let onto = ontology(&a.ontology)?;
    let rs = rs_weights(&a.rs_weights)?;
    let config = panel_config(&a.config, a.seed)?;
    let grid = grid(&a.grid, &config)?;
    let corpus = corpus(&a.corpus, &onto)?;
    let par = parallelism(a.parallelism);

    let validation = if a.no_split {
        corpus.clone()
    } else {
        split_corpus(&corpus, &SplitSpec::with_seed(a.seed))?.validation
    };
    let entries = extract(&config, &validation, &onto, par)?;
    let table = prediction_table(&entries);
    let result: CalibrationResult =
        with_pool(par, || grid_search_weights(&validation.entries, &table, &grid, &rs))??;
    write_json(&a.out, &result)?;
    print!("{}", result.format_table());
    println!(
        "best: {} (RS {:.4}; {} grid points, {} distinct scale classes)",
        result.best_weights,
        result.best_rs,
        result.grid.len(),
        result.evaluated_classes
    );
    Ok(())
}
