use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use resume_fusion::aggregate::{
    aggregate, weighted_majority_vote, weighted_threshold_vote, FallbackDelegate, GroundedDelegate, WeightVector,
};
use resume_fusion::metrics::{bleu, levenshtein_similarity, rouge_l, token_f1};
use resume_fusion::{evaluate_corpus, RsWeights};
use resume_fusion_bench::{corpus, predictions};

fn votes(c: &mut Criterion) {
    let ballots: Vec<(String, f64)> = ["John Smith", "J. Smith", "John Smith", "N/A", "Jon Smith"]
        .iter()
        .zip([3.0, 2.0, 1.0, 2.0, 1.0])
        .map(|(v, w)| (v.to_string(), w))
        .collect();
    c.bench_function("majority_vote_5", |b| b.iter(|| weighted_majority_vote(black_box(&ballots))));

    let lists: Vec<(Vec<String>, f64)> = (0..5)
        .map(|i| ((0..12).map(|j| format!("skill{}", (i + j) % 15)).collect(), 1.0 + i as f64))
        .collect();
    c.bench_function("threshold_vote_5x12", |b| b.iter(|| weighted_threshold_vote(black_box(&lists), 7.5)));
}

fn metrics(c: &mut Criterion) {
    let corpus = corpus(1);
    let gold = &corpus.entries[0].document.raw_text;
    let pred: String = gold.split_whitespace().rev().collect::<Vec<_>>().join(" ");
    c.bench_function("token_f1_resume", |b| b.iter(|| token_f1(black_box(&pred), black_box(gold))));
    c.bench_function("bleu_resume", |b| b.iter(|| bleu(black_box(&pred), black_box(gold))));
    c.bench_function("rouge_l_resume", |b| b.iter(|| rouge_l(black_box(&pred), black_box(gold))));
    let (a, z) = ("jane.doe@example.com", "jane.d0e@exampel.com");
    c.bench_function("levenshtein_email", |b| b.iter(|| levenshtein_similarity(black_box(a), black_box(z))));
}

fn aggregation(c: &mut Criterion) {
    let corpus = corpus(100);
    let table = predictions(&corpus);
    let weights = WeightVector::parse("alpha=3,beta=2,gamma=1").unwrap();
    let docs = corpus.documents();
    c.bench_function("aggregate_100_fallback", |b| {
        b.iter(|| {
            for d in &docs {
                black_box(aggregate(d, &table[&d.id], &weights, &FallbackDelegate).unwrap());
            }
        })
    });
    c.bench_function("aggregate_100_grounded", |b| {
        b.iter(|| {
            for d in &docs {
                black_box(aggregate(d, &table[&d.id], &weights, &GroundedDelegate).unwrap());
            }
        })
    });
    let pairs: Vec<_> = corpus
        .entries
        .iter()
        .map(|e| (table[&e.document.id][0].prediction.clone(), e.gold.clone()))
        .collect();
    c.bench_function("evaluate_corpus_100", |b| b.iter(|| evaluate_corpus(black_box(&pairs), &RsWeights::default())));
}

criterion_group!(benches, votes, metrics, aggregation);
criterion_main!(benches);
