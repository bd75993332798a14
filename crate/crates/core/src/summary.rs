//! Many-to-one symbol mappings and trace summarization.
//!
//! A [`MappingFunction`] sends every original symbol code to a summary code.
//! Applying it to a sequence yields a [`SummarySequence`], either positionally
//! (one summary item per original item) or reduced (maximal runs of equal
//! summary symbols collapsed to one item). Each summary item records the
//! original positions it covers, so order preservation is checkable.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::SymbolCorpus;

/// How a mapping was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MappingKind {
    Attribute,
    Topic,
    Random,
    Identity,
}

/// A total many-to-one map from an original symbol alphabet to a summary
/// alphabet. `table[c]` is the summary code of original code `c`; every
/// summary code in `[0, k)` appears in the image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingFunction {
    pub kind: MappingKind,
    /// Summary alphabet size.
    pub k: u32,
    pub table: Vec<u32>,
    /// Human-readable label per summary code.
    pub labels: Vec<String>,
}

impl MappingFunction {
    pub fn new(kind: MappingKind, table: Vec<u32>, labels: Vec<String>) -> Result<Self> {
        let k = labels.len() as u32;
        let mut used = vec![false; k as usize];
        for &s in &table {
            if s >= k {
                return Err(Error::Consistency(format!(
                    "summary code {s} out of range; alphabet size is {k}"
                )));
            }
            used[s as usize] = true;
        }
        if !table.is_empty() && used.iter().any(|u| !u) {
            return Err(Error::Consistency(
                "every summary code must appear in the mapping image".into(),
            ));
        }
        Ok(Self { kind, k, table, labels })
    }

    /// Identity mapping over an alphabet of `size` symbols.
    pub fn identity(size: usize, labels: Vec<String>) -> Self {
        Self {
            kind: MappingKind::Identity,
            k: size as u32,
            table: (0..size as u32).collect(),
            labels,
        }
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    pub fn map(&self, code: u32) -> Result<u32> {
        self.table
            .get(code as usize)
            .copied()
            .ok_or(Error::MappingDomain(code))
    }

    /// Mapping content digest (hex), for summary caching.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update([self.kind as u8]);
        h.update(self.k.to_le_bytes());
        for &s in &self.table {
            h.update(s.to_le_bytes());
        }
        crate::trace::hex_string(&h.finalize())
    }
}

/// A run of original positions covered by one summary item: 1-based start and
/// length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginRun {
    pub start: u32,
    pub len: u32,
}

impl OriginRun {
    pub fn positions(&self) -> std::ops::RangeInclusive<u32> {
        self.start..=self.start + self.len - 1
    }
}

/// A sequence in summary space with per-item provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummarySequence {
    pub symbols: Vec<u32>,
    pub origins: Vec<OriginRun>,
    pub reduced: bool,
}

impl SummarySequence {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Original sequence length this summary was produced from.
    pub fn original_len(&self) -> usize {
        self.origins.iter().map(|r| r.len as usize).sum()
    }

    /// The original positions covered by summary item `i`, 1-based.
    pub fn origin_index(&self, i: usize) -> Vec<u32> {
        self.origins[i].positions().collect()
    }

    /// Summary position (1-based) of the original position `pos` (1-based).
    pub fn summary_position_of(&self, pos: u32) -> Option<usize> {
        if pos == 0 {
            return None;
        }
        // origins partition 1..=m in order, so binary search by run start.
        let idx = self.origins.partition_point(|r| r.start <= pos);
        if idx == 0 {
            return None;
        }
        let run = self.origins[idx - 1];
        (pos < run.start + run.len).then_some(idx)
    }
}

/// Rewrites a sequence symbol-by-symbol through `f`, keeping positions.
pub fn apply_mapping(trace_symbols: &[u32], f: &MappingFunction) -> Result<SummarySequence> {
    let mut symbols = Vec::with_capacity(trace_symbols.len());
    let mut origins = Vec::with_capacity(trace_symbols.len());
    for (i, &c) in trace_symbols.iter().enumerate() {
        symbols.push(f.map(c)?);
        origins.push(OriginRun {
            start: i as u32 + 1,
            len: 1,
        });
    }
    Ok(SummarySequence {
        symbols,
        origins,
        reduced: false,
    })
}

/// Like [`apply_mapping`], but maximal runs of equal summary symbols collapse
/// to a single item whose origin run covers the whole stretch.
pub fn apply_reduced_mapping(trace_symbols: &[u32], f: &MappingFunction) -> Result<SummarySequence> {
    let mut symbols: Vec<u32> = Vec::new();
    let mut origins: Vec<OriginRun> = Vec::new();
    for (i, &c) in trace_symbols.iter().enumerate() {
        let s = f.map(c)?;
        match symbols.last() {
            Some(&prev) if prev == s => origins.last_mut().unwrap().len += 1,
            _ => {
                symbols.push(s);
                origins.push(OriginRun {
                    start: i as u32 + 1,
                    len: 1,
                });
            }
        }
    }
    Ok(SummarySequence {
        symbols,
        origins,
        reduced: true,
    })
}

/// Checks that earlier original positions never land on later summary
/// positions: for all `i < j`, `pos(i) <= pos(j)`.
pub fn check_sequence_preserving(
    original: &[u32],
    summary: &SummarySequence,
    f: &MappingFunction,
) -> Result<bool> {
    if summary.original_len() != original.len() {
        return Err(Error::Consistency(format!(
            "summary covers {} original positions but the sequence has {}",
            summary.original_len(),
            original.len()
        )));
    }
    // Each item must carry the mapped value of every position it covers.
    for (item, run) in summary.origins.iter().enumerate() {
        for pos in run.positions() {
            if f.map(original[pos as usize - 1])? != summary.symbols[item] {
                return Err(Error::Consistency(format!(
                    "summary item {item} does not match the mapped symbol at position {pos}"
                )));
            }
        }
    }
    let mut last = 0usize;
    for pos in 1..=original.len() as u32 {
        match summary.summary_position_of(pos) {
            None => return Ok(false),
            Some(p) => {
                if p < last {
                    return Ok(false);
                }
                last = p;
            }
        }
    }
    Ok(true)
}

/// Builds the mapping that identifies two composite symbols iff they agree on
/// every attribute in `attrs`. Summary labels are the `attrs` value tuples.
pub fn build_attribute_mapping(corpus: &SymbolCorpus, attrs: &[&str]) -> Result<MappingFunction> {
    if attrs.is_empty() {
        return Err(Error::Schema("attribute subset must be non-empty".into()));
    }
    let idx: Vec<usize> = attrs.iter().map(|a| corpus.attr_index(a)).collect::<Result<_>>()?;
    let mut table = Vec::with_capacity(corpus.alphabet_size());
    let mut interner: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    for tuple in &corpus.alphabet {
        let key: Vec<u32> = idx.iter().map(|&a| tuple[a]).collect();
        let code = match interner.get(&key) {
            Some(&c) => c,
            None => {
                let c = labels.len() as u32;
                let label = key
                    .iter()
                    .enumerate()
                    .map(|(slot, &v)| corpus.attr_values[idx[slot]][v as usize].as_str())
                    .collect::<Vec<_>>()
                    .join("|");
                interner.insert(key, c);
                labels.push(label);
                c
            }
        };
        table.push(code);
    }
    MappingFunction::new(MappingKind::Attribute, table, labels)
}

/// Assigns each of `alphabet_size` codes to one of `k` summary codes uniformly
/// at random, then repairs empty classes so the mapping is surjective:
/// each empty class (lowest first) takes the smallest original code away from
/// the largest class.
pub fn build_random_mapping(alphabet_size: usize, k: usize, seed: u64) -> Result<MappingFunction> {
    if k == 0 || k > alphabet_size {
        return Err(Error::Parameter(format!(
            "k must be in [1, {alphabet_size}], got {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table: Vec<u32> = (0..alphabet_size)
        .map(|_| rng.gen_range(0..k as u32))
        .collect();

    let mut class_sizes = vec![0usize; k];
    for &s in &table {
        class_sizes[s as usize] += 1;
    }
    for empty in 0..k {
        if class_sizes[empty] > 0 {
            continue;
        }
        let donor = class_sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap();
        let moved = table.iter().position(|&s| s as usize == donor).unwrap();
        table[moved] = empty as u32;
        class_sizes[donor] -= 1;
        class_sizes[empty] += 1;
    }

    let labels = (0..k).map(|c| format!("r{c}")).collect();
    MappingFunction::new(MappingKind::Random, table, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_ab() -> MappingFunction {
        // a=0 -> X=0, b=1 -> Y=1
        MappingFunction::new(
            MappingKind::Attribute,
            vec![0, 1],
            vec!["X".into(), "Y".into()],
        )
        .unwrap()
    }

    #[test]
    fn apply_substitutes_per_position() {
        let s = apply_mapping(&[0, 1, 0], &f_ab()).unwrap();
        assert_eq!(s.symbols, vec![0, 1, 0]);
        assert!(!s.reduced);
        assert_eq!(s.origin_index(1), vec![2]);
    }

    #[test]
    fn apply_keeps_duplicates() {
        let f = MappingFunction::new(MappingKind::Random, vec![0], vec!["X".into()]).unwrap();
        let s = apply_mapping(&[0, 0], &f).unwrap();
        assert_eq!(s.symbols, vec![0, 0]);
    }

    #[test]
    fn apply_empty() {
        let s = apply_mapping(&[], &f_ab()).unwrap();
        assert!(s.is_empty());
        let r = apply_reduced_mapping(&[], &f_ab()).unwrap();
        assert!(r.is_empty() && r.reduced);
    }

    #[test]
    fn reduced_collapses_runs() {
        // a1=0, a2=1, b=2 with f(a1)=f(a2)=X, f(b)=Y
        let f = MappingFunction::new(
            MappingKind::Attribute,
            vec![0, 0, 1],
            vec!["X".into(), "Y".into()],
        )
        .unwrap();
        let s = apply_reduced_mapping(&[0, 1, 2], &f).unwrap();
        assert_eq!(s.symbols, vec![0, 1]);
        assert_eq!(s.origin_index(0), vec![1, 2]);
        assert_eq!(s.origin_index(1), vec![3]);
    }

    #[test]
    fn reduced_whole_sequence_one_run() {
        let f = MappingFunction::new(MappingKind::Random, vec![0, 0], vec!["X".into()]).unwrap();
        let s = apply_reduced_mapping(&[0, 1, 0], &f).unwrap();
        assert_eq!(s.symbols, vec![0]);
        assert_eq!(s.origin_index(0), vec![1, 2, 3]);
    }

    #[test]
    fn reduced_no_adjacent_equal_is_noop() {
        let s = apply_reduced_mapping(&[0, 1, 0], &f_ab()).unwrap();
        assert_eq!(s.symbols, vec![0, 1, 0]);
    }

    #[test]
    fn domain_error_names_code() {
        match apply_mapping(&[5], &f_ab()) {
            Err(Error::MappingDomain(c)) => assert_eq!(c, 5),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn preservation_holds_for_both_forms() {
        let f = MappingFunction::new(
            MappingKind::Random,
            vec![0, 0, 1],
            vec!["X".into(), "Y".into()],
        )
        .unwrap();
        let seq = [0, 1, 2, 0, 0];
        let plain = apply_mapping(&seq, &f).unwrap();
        let red = apply_reduced_mapping(&seq, &f).unwrap();
        assert!(check_sequence_preserving(&seq, &plain, &f).unwrap());
        assert!(check_sequence_preserving(&seq, &red, &f).unwrap());
    }

    #[test]
    fn shuffled_summary_fails_preservation() {
        let f = f_ab();
        let seq = [0, 1];
        let mut s = apply_reduced_mapping(&seq, &f).unwrap();
        s.symbols.swap(0, 1);
        s.origins.swap(0, 1);
        assert!(!check_sequence_preserving(&seq, &s, &f).unwrap());
    }

    #[test]
    fn preservation_length_mismatch_is_error() {
        let f = f_ab();
        let s = apply_mapping(&[0, 1], &f).unwrap();
        assert!(matches!(
            check_sequence_preserving(&[0], &s, &f),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn random_mapping_full_k_is_bijection() {
        let f = build_random_mapping(5, 5, 9).unwrap();
        let mut image: Vec<u32> = f.table.clone();
        image.sort_unstable();
        assert_eq!(image, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn random_mapping_single_class() {
        let f = build_random_mapping(5, 1, 3).unwrap();
        assert!(f.table.iter().all(|&s| s == 0));
    }

    #[test]
    fn random_mapping_deterministic() {
        let a = build_random_mapping(40, 7, 1234).unwrap();
        let b = build_random_mapping(40, 7, 1234).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_mapping_surjective() {
        for seed in 0..50 {
            let f = build_random_mapping(20, 6, seed).unwrap();
            let mut seen = vec![false; 6];
            for &s in &f.table {
                seen[s as usize] = true;
            }
            assert!(seen.iter().all(|&x| x), "seed {seed} left a class empty");
        }
    }

    #[test]
    fn random_mapping_k_out_of_range() {
        assert!(matches!(build_random_mapping(5, 0, 1), Err(Error::Parameter(_))));
        assert!(matches!(build_random_mapping(5, 6, 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn mapping_serialization_shape() {
        let f = build_random_mapping(3, 2, 1).unwrap();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert!(v.get("kind").is_some());
        assert!(v.get("k").is_some());
        assert!(v.get("table").is_some());
        assert!(v.get("labels").is_some());
    }
}
