//! Threshold similarity search on the summary space, with optional exact
//! verification against the original space, and the all-pairs evaluation
//! metrics (false-positive rate, recall, contractive violations).

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::distance::{classify_contractive, edit_distance, edit_distance_bounded, RuleVerdict};
use crate::error::{Error, Result};
use crate::summary::{apply_mapping, apply_reduced_mapping, MappingFunction, SummarySequence};
use crate::trace::SymbolCorpus;

/// Summaries of a whole corpus under one mapping, aligned with trace order.
#[derive(Debug, Clone)]
pub struct SummaryIndex {
    pub reduced: bool,
    pub summaries: Vec<SummarySequence>,
}

impl SummaryIndex {
    pub fn build(corpus: &SymbolCorpus, f: &MappingFunction, reduced: bool) -> Result<Self> {
        let summaries = corpus
            .sequences
            .iter()
            .map(|seq| {
                if reduced {
                    apply_reduced_mapping(seq, f)
                } else {
                    apply_mapping(seq, f)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { reduced, summaries })
    }

    pub fn mean_summary_len(&self) -> f64 {
        if self.summaries.is_empty() {
            return 0.0;
        }
        self.summaries.iter().map(|s| s.len()).sum::<usize>() as f64 / self.summaries.len() as f64
    }
}

/// Summary indexes keyed by `(corpus, mapping, reduced)` content digest, so a
/// corpus is summarized once per mapping no matter how many queries run.
#[derive(Default)]
pub struct SummaryCache {
    entries: HashMap<String, Arc<SummaryIndex>>,
}

impl SummaryCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_build(
        &mut self,
        corpus: &SymbolCorpus,
        f: &MappingFunction,
        reduced: bool,
    ) -> Result<Arc<SummaryIndex>> {
        let key = format!("{}:{}:{}", corpus.digest(), f.digest(), reduced);
        if let Some(idx) = self.entries.get(&key) {
            return Ok(Arc::clone(idx));
        }
        let idx = Arc::new(SummaryIndex::build(corpus, f, reduced)?);
        self.entries.insert(key, Arc::clone(&idx));
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A search query: a corpus trace by id, or an external symbol sequence
/// (already coded against the corpus alphabet).
#[derive(Debug, Clone, Copy)]
pub enum Query<'a> {
    Id(&'a str),
    Symbols(&'a [u32]),
}

/// One matching trace from the prefilter.
#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub id: String,
    pub summary_distance: usize,
    /// Exact original distance, when verification ran and it is within chi.
    pub original_distance: Option<usize>,
    /// Outcome of verification, when it ran.
    pub verified: Option<bool>,
}

/// Result of a threshold search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub candidates: Vec<Candidate>,
    pub prefilter_time: Duration,
    pub verify_time: Duration,
}

impl SearchResult {
    pub fn candidate_ids(&self) -> Vec<&str> {
        self.candidates.iter().map(|c| c.id.as_str()).collect()
    }

    /// Ids that passed verification; empty when verification did not run.
    pub fn verified_ids(&self) -> Vec<&str> {
        self.candidates
            .iter()
            .filter(|c| c.verified == Some(true))
            .map(|c| c.id.as_str())
            .collect()
    }
}

/// Finds all traces whose summary distance to the query is at most `chi`;
/// with `verify`, each candidate is re-checked in the original space.
pub fn threshold_search(
    corpus: &SymbolCorpus,
    index: &SummaryIndex,
    f: &MappingFunction,
    query: Query,
    chi: usize,
    verify: bool,
) -> Result<SearchResult> {
    if index.summaries.len() != corpus.len() {
        return Err(Error::Consistency(
            "summary index does not cover the corpus".into(),
        ));
    }
    let query_symbols: &[u32] = match query {
        Query::Id(id) => corpus
            .sequence_by_id(id)
            .ok_or_else(|| Error::Lookup(format!("no trace with id {id:?}")))?,
        Query::Symbols(s) => s,
    };
    let query_summary = if index.reduced {
        apply_reduced_mapping(query_symbols, f)?
    } else {
        apply_mapping(query_symbols, f)?
    };

    let started = Instant::now();
    let mut hits: Vec<(usize, Candidate)> = index
        .summaries
        .par_iter()
        .enumerate()
        .filter_map(|(i, s)| {
            edit_distance_bounded(&query_summary.symbols, &s.symbols, chi).map(|d| {
                (
                    i,
                    Candidate {
                        id: corpus.trace_ids[i].clone(),
                        summary_distance: d,
                        original_distance: None,
                        verified: None,
                    },
                )
            })
        })
        .collect();
    let prefilter_time = started.elapsed();

    let started = Instant::now();
    if verify {
        hits.par_iter_mut().for_each(|(i, c)| {
            match edit_distance_bounded(query_symbols, &corpus.sequences[*i], chi) {
                Some(d) => {
                    c.original_distance = Some(d);
                    c.verified = Some(true);
                }
                None => c.verified = Some(false),
            }
        });
    }
    let verify_time = if verify { started.elapsed() } else { Duration::ZERO };

    Ok(SearchResult {
        candidates: hits.into_iter().map(|(_, c)| c).collect(),
        prefilter_time,
        verify_time,
    })
}

/// Condensed all-pairs distances over `n` sequences (`i < j` order).
#[derive(Debug, Clone)]
pub struct PairwiseDistances {
    pub n: usize,
    pub values: Vec<u32>,
}

impl PairwiseDistances {
    pub fn pair_count(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        debug_assert!(i != j);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.values[i * (2 * self.n - i - 1) / 2 + (j - i - 1)]
    }
}

/// Computes every unordered pair distance, parallel over rows.
pub fn all_pairs_distances<S: AsRef<[u32]> + Sync>(seqs: &[S]) -> PairwiseDistances {
    let n = seqs.len();
    let values: Vec<u32> = (0..n.saturating_sub(1))
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = seqs[i].as_ref();
            (i + 1..n).map(move |j| edit_distance(a, seqs[j].as_ref()) as u32)
        })
        .collect();
    PairwiseDistances { n, values }
}

/// Metrics over all unordered trace pairs at one threshold.
#[derive(Debug, Clone, Serialize)]
pub struct SearchMetrics {
    pub chi: usize,
    pub pair_count: usize,
    /// Pairs within chi on the summary space.
    pub candidate_count: usize,
    /// Pairs within chi on the original space.
    pub truth_count: usize,
    pub false_positive_rate: f64,
    pub recall: f64,
    /// Pairs whose summary distance exceeds their original distance.
    pub violation_count: usize,
    pub violation_fraction: f64,
    /// Pairs the length rules claim must violate (expected to stay 0 for
    /// reduced summaries).
    pub rule_flagged_count: usize,
}

/// Derives threshold metrics from precomputed distance arrays.
pub fn metrics_at(
    original: &PairwiseDistances,
    summary: &PairwiseDistances,
    chi: usize,
    rule_flagged_count: usize,
) -> Result<SearchMetrics> {
    if original.n != summary.n {
        return Err(Error::Consistency(
            "distance arrays cover different corpora".into(),
        ));
    }
    let chi = chi as u32;
    let mut candidate_count = 0usize;
    let mut truth_count = 0usize;
    let mut hits = 0usize; // candidates that are true matches
    let mut violation_count = 0usize;
    for (&d, &ds) in original.values.iter().zip(&summary.values) {
        let cand = ds <= chi;
        let truth = d <= chi;
        candidate_count += usize::from(cand);
        truth_count += usize::from(truth);
        hits += usize::from(cand && truth);
        violation_count += usize::from(ds > d);
    }
    let pair_count = original.values.len();
    let false_positive_rate = if candidate_count == 0 {
        0.0
    } else {
        (candidate_count - hits) as f64 / candidate_count as f64
    };
    let recall = if truth_count == 0 {
        1.0
    } else {
        hits as f64 / truth_count as f64
    };
    Ok(SearchMetrics {
        chi: chi as usize,
        pair_count,
        candidate_count,
        truth_count,
        false_positive_rate,
        recall,
        violation_count,
        violation_fraction: if pair_count == 0 {
            0.0
        } else {
            violation_count as f64 / pair_count as f64
        },
        rule_flagged_count,
    })
}

/// Counts pairs whose length bounds prove a contractive violation.
pub fn count_rule_flagged(corpus: &SymbolCorpus, index: &SummaryIndex) -> usize {
    let n = corpus.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            let v = classify_contractive(
                &corpus.sequences[i],
                &corpus.sequences[j],
                &index.summaries[i],
                &index.summaries[j],
            );
            if v.rule == RuleVerdict::ViolatesByRule {
                count += 1;
            }
        }
    }
    count
}

/// All-pairs evaluation result: one metrics row per threshold plus the wall
/// time of the summary-space and original-space passes.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub metrics: Vec<SearchMetrics>,
    pub prefilter_time: Duration,
    pub verify_time: Duration,
}

/// Computes original and summary distances for all unordered pairs and
/// reports metrics at each threshold in `chis`.
pub fn evaluate_pairs(
    corpus: &SymbolCorpus,
    f: &MappingFunction,
    chis: &[usize],
    reduced: bool,
) -> Result<Evaluation> {
    if corpus.len() < 2 {
        return Err(Error::Parameter(
            "evaluation needs at least 2 traces".into(),
        ));
    }
    let index = SummaryIndex::build(corpus, f, reduced)?;

    let started = Instant::now();
    let summary = all_pairs_distances(
        &index.summaries.iter().map(|s| s.symbols.as_slice()).collect::<Vec<_>>(),
    );
    let prefilter_time = started.elapsed();

    let started = Instant::now();
    let original = all_pairs_distances(&corpus.sequences);
    let verify_time = started.elapsed();

    let rule_flagged = if reduced { count_rule_flagged(corpus, &index) } else { 0 };
    let metrics = chis
        .iter()
        .map(|&chi| metrics_at(&original, &summary, chi, rule_flagged))
        .collect::<Result<Vec<_>>>()?;
    Ok(Evaluation {
        metrics,
        prefilter_time,
        verify_time,
    })
}
