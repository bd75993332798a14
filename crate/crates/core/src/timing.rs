//! All-pairs distance timing harness comparing summarization schemes.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::{build_mapping, Scheme};
use crate::search::{all_pairs_distances, SummaryIndex};
use crate::trace::{SymbolCorpus, TraceSet};

/// One timed configuration.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub scheme: String,
    /// Actual summary alphabet size.
    pub k: u32,
    pub mean_summary_len: f64,
    /// Median of three all-pairs wall times, in milliseconds.
    pub wall_ms: f64,
    pub pair_count: usize,
}

/// Timing rows plus the worker-pool size they ran under.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub threads: usize,
    pub rows: Vec<BenchRow>,
}

const REPETITIONS: usize = 3;

fn median_time_ms(seqs: &[&[u32]]) -> f64 {
    let mut times: Vec<f64> = (0..REPETITIONS)
        .map(|_| {
            let started = Instant::now();
            let d = all_pairs_distances(seqs);
            let elapsed = started.elapsed().as_secs_f64() * 1e3;
            std::hint::black_box(d.values.len());
            elapsed
        })
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times[REPETITIONS / 2]
}

/// Times all-pairs edit distance per scheme on reduced summaries, preceded by
/// an original-space baseline row. Each timing is the median of three runs
/// inside a worker pool of `threads` threads (0 = default pool size).
pub fn benchmark_allpairs(
    ts: &TraceSet,
    corpus: &SymbolCorpus,
    schemes: &[Scheme],
    threads: usize,
) -> Result<BenchReport> {
    if corpus.len() < 2 {
        return Err(Error::Parameter("benchmark needs at least 2 traces".into()));
    }
    let pair_count = corpus.len() * (corpus.len() - 1) / 2;

    // Build everything before timing anything.
    let mut prepared = Vec::with_capacity(schemes.len());
    for scheme in schemes {
        let built = build_mapping(ts, corpus, scheme)?;
        let index = SummaryIndex::build(corpus, &built.mapping, true)?;
        prepared.push((scheme.name().to_string(), built.mapping.k, index));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot build worker pool: {e}")))?;
    let effective_threads = pool.current_num_threads();

    let rows = pool.install(|| {
        let mut rows = Vec::with_capacity(prepared.len() + 1);
        let originals: Vec<&[u32]> = corpus.sequences.iter().map(|s| s.as_slice()).collect();
        let mean_len =
            originals.iter().map(|s| s.len()).sum::<usize>() as f64 / originals.len() as f64;
        rows.push(BenchRow {
            scheme: "original".into(),
            k: corpus.alphabet_size() as u32,
            mean_summary_len: mean_len,
            wall_ms: median_time_ms(&originals),
            pair_count,
        });
        for (name, k, index) in &prepared {
            let seqs: Vec<&[u32]> = index.summaries.iter().map(|s| s.symbols.as_slice()).collect();
            rows.push(BenchRow {
                scheme: name.clone(),
                k: *k,
                mean_summary_len: index.mean_summary_len(),
                wall_ms: median_time_ms(&seqs),
                pair_count,
            });
        }
        rows
    });

    Ok(BenchReport {
        threads: effective_threads,
        rows,
    })
}
