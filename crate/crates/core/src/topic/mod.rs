//! Topic-based summarization: embed the base attribute's dimensions with a
//! tf-idf vectorization plus low-rank factorization, then greedily merge
//! dimensions into k topics using a blend of embedding similarity and
//! adjacency counts.

mod reduce;

pub use reduce::{reduce_dimensions, Reduction, ReductionMethod};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::summary::{MappingFunction, MappingKind};
use crate::trace::{SymbolCorpus, TraceSet};

/// Label given to the reserved topic for dimensions absent from the corpus.
pub const UNUSED_TOPIC_LABEL: &str = "unused";

/// Per-trace tf-idf weights over the base attribute's dimensions.
#[derive(Debug, Clone)]
pub struct TopicVectorization {
    pub base_attribute: String,
    /// `tf[t][i]`: occurrences of dimension `i` in trace `t`.
    pub tf: Vec<Vec<u32>>,
    /// `df[i]`: number of traces containing dimension `i`.
    pub df: Vec<u32>,
    /// `|traces| x |dimensions|` weight matrix.
    pub matrix: DMatrix<f64>,
}

impl TopicVectorization {
    pub fn occurring(&self) -> Vec<bool> {
        self.df.iter().map(|&d| d > 0).collect()
    }
}

/// Computes `(1 + ln tf) * ln(|S| / df)` per trace and dimension (0 when the
/// dimension is absent from the trace).
pub fn vectorize(ts: &TraceSet, base_attribute: &str) -> Result<TopicVectorization> {
    if ts.is_empty() {
        return Err(Error::EmptyInput("trace set has no traces".into()));
    }
    let attr = ts.schema.attribute_index(base_attribute)?;
    let dims = ts.schema.cardinality(attr);
    let n = ts.len();

    let mut tf = vec![vec![0u32; dims]; n];
    for (t, trace) in ts.traces.iter().enumerate() {
        for e in &trace.events {
            tf[t][e.values[attr] as usize] += 1;
        }
    }
    let mut df = vec![0u32; dims];
    for row in &tf {
        for (i, &c) in row.iter().enumerate() {
            if c > 0 {
                df[i] += 1;
            }
        }
    }
    let matrix = DMatrix::from_fn(n, dims, |t, i| {
        let c = tf[t][i];
        if c == 0 {
            0.0
        } else {
            (1.0 + (c as f64).ln()) * ((n as f64) / (df[i] as f64)).ln()
        }
    });
    Ok(TopicVectorization {
        base_attribute: base_attribute.to_string(),
        tf,
        df,
        matrix,
    })
}

/// Counts, for every pair of distinct dimensions, how often they sit next to
/// each other in a trace. Equal consecutive values do not contribute.
pub fn adjacency_counts(ts: &TraceSet, base_attribute: &str) -> Result<DMatrix<f64>> {
    if ts.is_empty() {
        return Err(Error::EmptyInput("trace set has no traces".into()));
    }
    let attr = ts.schema.attribute_index(base_attribute)?;
    let dims = ts.schema.cardinality(attr);
    let mut omega = DMatrix::zeros(dims, dims);
    for trace in &ts.traces {
        for pair in trace.events.windows(2) {
            let (i, j) = (pair[0].values[attr] as usize, pair[1].values[attr] as usize);
            if i != j {
                omega[(i, j)] += 1.0;
                omega[(j, i)] += 1.0;
            }
        }
    }
    Ok(omega)
}

/// Pairwise cosine similarity of the rows of `w`, clamped to `[0, 1]`.
/// All-zero rows are dissimilar to everything; the diagonal is 1.
pub fn dimension_similarity(w: &DMatrix<f64>) -> DMatrix<f64> {
    let n = w.nrows();
    let norms: Vec<f64> = (0..n).map(|i| w.row(i).norm()).collect();
    let mut theta = DMatrix::zeros(n, n);
    for i in 0..n {
        theta[(i, i)] = 1.0;
        for j in i + 1..n {
            if norms[i] > 0.0 && norms[j] > 0.0 {
                let cos = w.row(i).dot(&w.row(j)) / (norms[i] * norms[j]);
                let v = cos.clamp(0.0, 1.0);
                theta[(i, j)] = v;
                theta[(j, i)] = v;
            }
        }
    }
    theta
}

/// Min-max normalizes the off-diagonal entries of a symmetric count matrix to
/// `[0, 1]`. A constant matrix normalizes to zeros.
pub fn normalize_counts(omega: &DMatrix<f64>) -> DMatrix<f64> {
    let n = omega.nrows();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            lo = lo.min(omega[(i, j)]);
            hi = hi.max(omega[(i, j)]);
        }
    }
    let mut out = DMatrix::zeros(n, n);
    if !(hi > lo) {
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[(i, j)] = (omega[(i, j)] - lo) / (hi - lo);
            }
        }
    }
    out
}

/// Pair score blending embedding similarity with normalized adjacency.
fn pair_score(theta: &DMatrix<f64>, omega_hat: &DMatrix<f64>, lambda: f64, i: usize, j: usize) -> f64 {
    lambda * theta[(i, j)] + (1.0 - lambda) * omega_hat[(i, j)] * theta[(i, j)]
}

/// Objective value of a dimension-to-topic assignment: the summed pair scores
/// of same-topic pairs. With `same_topic_adjacency` false the adjacency term
/// instead ranges over all pairs (and is constant in the assignment).
pub fn assignment_objective(
    theta: &DMatrix<f64>,
    omega_hat: &DMatrix<f64>,
    lambda: f64,
    assignment: &[u32],
    same_topic_adjacency: bool,
) -> f64 {
    let n = assignment.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let same = assignment[i] == assignment[j];
            if same {
                total += lambda * theta[(i, j)];
            }
            if same || !same_topic_adjacency {
                total += (1.0 - lambda) * omega_hat[(i, j)] * theta[(i, j)];
            }
        }
    }
    total
}

/// A topic model: the matrices behind the mapping plus the merge history.
#[derive(Debug, Clone)]
pub struct TopicModel {
    pub base_attribute: String,
    /// Value labels of the base attribute, by dimension code.
    pub dim_labels: Vec<String>,
    pub occurring: Vec<bool>,
    /// Dimension embedding (`|dims| x k_reduced`).
    pub w: DMatrix<f64>,
    pub theta: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub lambda: f64,
    /// Requested topic count.
    pub k: usize,
    pub method: ReductionMethod,
    /// Merge records `(left, right, score)`; cluster ids are the smallest
    /// member dimension code of each side.
    pub dendrogram: Vec<(u32, u32, f64)>,
    /// Dimension code -> topic code.
    pub mapping: MappingFunction,
    /// Whether a reserved trailing topic holds never-occurring dimensions.
    pub has_unused_topic: bool,
    pub nmf_objective: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct TopicModelInfo<'a> {
    k: usize,
    lambda: f64,
    method: ReductionMethod,
    base_attribute: &'a str,
    dendrogram: &'a [(u32, u32, f64)],
    mapping: &'a MappingFunction,
}

impl TopicModel {
    /// Number of real topics (the reserved topic, if any, excluded).
    pub fn topic_count(&self) -> usize {
        self.mapping.k as usize - usize::from(self.has_unused_topic)
    }

    /// JSON description: scalars, dendrogram, and the embedded mapping.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TopicModelInfo {
            k: self.k,
            lambda: self.lambda,
            method: self.method,
            base_attribute: &self.base_attribute,
            dendrogram: &self.dendrogram,
            mapping: &self.mapping,
        })
        .expect("topic model serializes")
    }

    /// Lifts the dimension-level mapping to the corpus's composite alphabet.
    pub fn composite_mapping(&self, corpus: &SymbolCorpus) -> Result<MappingFunction> {
        let attr = corpus.attr_index(&self.base_attribute)?;
        let table = corpus
            .alphabet
            .iter()
            .map(|tuple| self.mapping.map(tuple[attr]))
            .collect::<Result<Vec<u32>>>()?;
        // Composition can drop topics whose dimensions never appear in the
        // corpus alphabet; re-densify codes so the image stays onto.
        densify(
            MappingKind::Topic,
            table,
            |s| self.mapping.labels[s as usize].clone(),
        )
    }

    /// Writes one matrix as CSV (`theta`, `omega`, or `w`).
    pub fn write_matrix_csv<W: std::io::Write>(&self, which: &str, sink: W) -> Result<()> {
        let m = match which {
            "theta" => &self.theta,
            "omega" => &self.omega,
            "w" => &self.w,
            other => return Err(Error::Parameter(format!("unknown matrix {other:?}"))),
        };
        let mut w = csv::Writer::from_writer(sink);
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Re-codes a summary table so summary codes are dense, preserving first-use
/// order of the underlying codes.
fn densify(
    kind: MappingKind,
    table: Vec<u32>,
    label_of: impl Fn(u32) -> String,
) -> Result<MappingFunction> {
    let mut remap: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    let mut labels = Vec::new();
    let mut dense = Vec::with_capacity(table.len());
    let mut order: Vec<u32> = table.clone();
    order.sort_unstable();
    order.dedup();
    for s in order {
        remap.insert(s, labels.len() as u32);
        labels.push(label_of(s));
    }
    for s in table {
        dense.push(remap[&s]);
    }
    MappingFunction::new(kind, dense, labels)
}

/// Greedy agglomerative assignment of dimensions to at most `k` topics.
///
/// Singleton clusters merge by maximal average pair score (ties: lowest pair
/// of smallest member codes) until one cluster remains; the partition with
/// `min(k, #occurring)` clusters is the emitted assignment. Dimensions with
/// `occurring[i] == false` go to a reserved trailing topic.
pub fn build_topic_mapping(
    theta: &DMatrix<f64>,
    omega: &DMatrix<f64>,
    occurring: &[bool],
    lambda: f64,
    k: usize,
    dim_labels: &[String],
) -> Result<(Vec<(u32, u32, f64)>, MappingFunction, bool)> {
    let n_total = theta.nrows();
    if theta.ncols() != n_total || omega.nrows() != n_total || omega.ncols() != n_total {
        return Err(Error::Consistency("theta and omega must be square and same size".into()));
    }
    if occurring.len() != n_total || dim_labels.len() != n_total {
        return Err(Error::Consistency("occurrence mask and labels must cover all dimensions".into()));
    }
    let active: Vec<usize> = (0..n_total).filter(|&i| occurring[i]).collect();
    let n = active.len();
    if n == 0 {
        return Err(Error::EmptyInput("no dimension occurs in the corpus".into()));
    }
    if k == 0 || k > n_total {
        return Err(Error::Parameter(format!("k must be in [1, {n_total}], got {k}")));
    }
    let target = k.min(n);
    let omega_hat = normalize_counts(omega);

    // Active clusters keyed by smallest member code.
    let mut clusters: Vec<ClusterState> = active
        .iter()
        .map(|&i| ClusterState { rep: i as u32, members: vec![i] })
        .collect();
    // Average cross-pair score between active clusters.
    let mut score = vec![vec![0.0f64; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let s = pair_score(theta, &omega_hat, lambda, active[a], active[b]);
            score[a][b] = s;
            score[b][a] = s;
        }
    }

    let mut alive: Vec<usize> = (0..n).collect();
    let mut dendrogram = Vec::with_capacity(n.saturating_sub(1));
    let mut cut_assignment: Option<Vec<u32>> = if target == n {
        Some(snapshot(&clusters, &alive, n_total))
    } else {
        None
    };

    while alive.len() > 1 {
        let mut best: Option<(f64, u32, u32, usize, usize)> = None;
        for (ai, &a) in alive.iter().enumerate() {
            for &b in &alive[ai + 1..] {
                let s = score[a][b];
                let (lo, hi) = order_pair(clusters[a].rep, clusters[b].rep);
                let better = match best {
                    None => true,
                    Some((bs, blo, bhi, _, _)) => s > bs || (s == bs && (lo, hi) < (blo, bhi)),
                };
                if better {
                    best = Some((s, lo, hi, a.min(b), a.max(b)));
                }
            }
        }
        let (s, lo, hi, keep, drop) = best.expect("at least two clusters are alive");
        dendrogram.push((lo, hi, s));

        // Average-linkage update: weighted mean of the two cross scores.
        let (wk, wd) = (clusters[keep].members.len() as f64, clusters[drop].members.len() as f64);
        for &other in &alive {
            if other == keep || other == drop {
                continue;
            }
            let merged = (wk * score[keep][other] + wd * score[drop][other]) / (wk + wd);
            score[keep][other] = merged;
            score[other][keep] = merged;
        }
        let moved = std::mem::take(&mut clusters[drop].members);
        clusters[keep].members.extend(moved);
        clusters[keep].rep = clusters[keep].rep.min(clusters[drop].rep);
        alive.retain(|&c| c != drop);

        if alive.len() == target {
            cut_assignment = Some(snapshot(&clusters, &alive, n_total));
        }
    }

    let assignment = cut_assignment.expect("merge loop reaches the target partition");
    let has_unused = active.len() < n_total;
    let n_topics = target + usize::from(has_unused);
    let mut labels = vec![String::new(); n_topics];
    let mut totals = vec![f64::NEG_INFINITY; n_topics];
    // Auto-label each topic with its medoid dimension (highest total theta to
    // the rest of the topic).
    for (i, &t) in assignment.iter().enumerate() {
        if !occurring[i] {
            continue;
        }
        let mut total = 0.0;
        for (j, &tj) in assignment.iter().enumerate() {
            if tj == t && j != i && occurring[j] {
                total += theta[(i, j)];
            }
        }
        if total > totals[t as usize] {
            totals[t as usize] = total;
            labels[t as usize] = dim_labels[i].clone();
        }
    }
    if has_unused {
        labels[n_topics - 1] = UNUSED_TOPIC_LABEL.to_string();
    }

    let mapping = MappingFunction::new(MappingKind::Topic, assignment, labels)?;
    Ok((dendrogram, mapping, has_unused))
}

fn order_pair(a: u32, b: u32) -> (u32, u32) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

struct ClusterState {
    rep: u32,
    members: Vec<usize>,
}

/// Dimension -> topic assignment for the current partition. Topic ids follow
/// ascending cluster representatives; non-occurring dimensions get the
/// trailing reserved topic.
fn snapshot(clusters: &[ClusterState], alive: &[usize], n_total: usize) -> Vec<u32> {
    let mut reps: Vec<(u32, usize)> = alive.iter().map(|&c| (clusters[c].rep, c)).collect();
    reps.sort_unstable();
    let mut assignment = vec![alive.len() as u32; n_total];
    for (topic, &(_, c)) in reps.iter().enumerate() {
        for &m in &clusters[c].members {
            assignment[m] = topic as u32;
        }
    }
    assignment
}

/// Configuration for the end-to-end topic pipeline.
#[derive(Debug, Clone)]
pub struct TopicConfig {
    /// Base attribute; `None` picks the attribute with the most dimensions.
    pub base_attribute: Option<String>,
    pub k: usize,
    pub lambda: f64,
    pub method: ReductionMethod,
    pub seed: u64,
}

/// Runs vectorize -> reduce -> similarity/adjacency -> greedy assignment.
pub fn build_topic_model(ts: &TraceSet, cfg: &TopicConfig) -> Result<TopicModel> {
    if !(0.0..=1.0).contains(&cfg.lambda) {
        return Err(Error::Parameter(format!("lambda must be in [0, 1], got {}", cfg.lambda)));
    }
    if cfg.k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let base = match &cfg.base_attribute {
        Some(b) => b.clone(),
        None => {
            let names = ts.schema.attribute_names();
            let widest = (0..names.len())
                .max_by_key(|&a| ts.schema.cardinality(a))
                .ok_or_else(|| Error::Schema("schema has no attributes".into()))?;
            names[widest].clone()
        }
    };
    let vec = vectorize(ts, &base)?;
    let dims = vec.df.len();
    if cfg.k > dims {
        return Err(Error::Parameter(format!(
            "k must be in [1, {dims}] for base attribute {base:?}, got {}",
            cfg.k
        )));
    }
    let k_reduced = cfg.k.min(ts.len()).min(dims);
    let reduction = reduce_dimensions(&vec.matrix, k_reduced, cfg.method, cfg.seed)?;
    let theta = dimension_similarity(&reduction.w);
    let omega = adjacency_counts(ts, &base)?;
    let occurring = vec.occurring();
    let dim_labels: Vec<String> = ts
        .schema
        .values_of(ts.schema.attribute_index(&base)?)
        .to_vec();
    let (dendrogram, mapping, has_unused) =
        build_topic_mapping(&theta, &omega, &occurring, cfg.lambda, cfg.k, &dim_labels)?;
    Ok(TopicModel {
        base_attribute: base,
        dim_labels,
        occurring,
        w: reduction.w,
        theta,
        omega,
        lambda: cfg.lambda,
        k: cfg.k,
        method: cfg.method,
        dendrogram,
        mapping,
        has_unused_topic: has_unused,
        nmf_objective: reduction.nmf_objective,
    })
}

/// Replaces topic labels. Empty input restores the auto (medoid) labels.
pub fn label_topics(model: &mut TopicModel, labels: &[String]) -> Result<()> {
    let real = model.topic_count();
    if labels.is_empty() {
        return Ok(()); // auto-labels are assigned at build time
    }
    if labels.len() != real {
        return Err(Error::Parameter(format!(
            "expected {real} labels, got {}",
            labels.len()
        )));
    }
    for (t, l) in labels.iter().enumerate() {
        model.mapping.labels[t] = l.clone();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{AttributeSchema, Event, Trace};

    fn corpus(seqs: &[&[&str]]) -> TraceSet {
        let mut schema = AttributeSchema::new(vec!["act".into()]).unwrap();
        let traces = seqs
            .iter()
            .enumerate()
            .map(|(i, seq)| Trace {
                id: format!("t{i}"),
                events: seq.iter().map(|v| Event::new(vec![schema.intern(0, v)])).collect(),
            })
            .collect();
        TraceSet::new(schema, traces).unwrap()
    }

    #[test]
    fn vectorize_matches_hand_formula() {
        // S = {p1=(a,a,b), p2=(b,c)}
        let ts = corpus(&[&["a", "a", "b"], &["b", "c"]]);
        let v = vectorize(&ts, "act").unwrap();
        let ln2 = 2.0f64.ln();
        let expected = (1.0 + ln2) * ln2; // dimension a in p1
        assert!((v.matrix[(0, 0)] - expected).abs() < 1e-12);
        assert!((expected - 1.173_600_194_478_146_6).abs() < 1e-12);
        // b occurs in every trace: idf term vanishes
        assert_eq!(v.matrix[(0, 1)], 0.0);
        // c absent from p1
        assert_eq!(v.matrix[(0, 2)], 0.0);
    }

    #[test]
    fn vectorize_unknown_attribute() {
        let ts = corpus(&[&["a"]]);
        assert!(matches!(vectorize(&ts, "nope"), Err(Error::Schema(_))));
    }

    #[test]
    fn adjacency_counts_unordered_pairs() {
        let ts = corpus(&[&["a", "b", "a"]]);
        let o = adjacency_counts(&ts, "act").unwrap();
        assert_eq!(o[(0, 1)], 2.0);
        assert_eq!(o[(1, 0)], 2.0);
    }

    #[test]
    fn adjacency_ignores_self_pairs() {
        let ts = corpus(&[&["a", "a"]]);
        let o = adjacency_counts(&ts, "act").unwrap();
        assert_eq!(o.sum(), 0.0);
    }

    #[test]
    fn adjacency_adds_over_traces() {
        let ts = corpus(&[&["a", "b"], &["a", "b"]]);
        let o = adjacency_counts(&ts, "act").unwrap();
        assert_eq!(o[(0, 1)], 2.0);
    }

    #[test]
    fn similarity_identical_and_orthogonal_rows() {
        let w = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let t = dimension_similarity(&w);
        assert_eq!(t[(0, 1)], 1.0);
        assert_eq!(t[(0, 2)], 0.0);
    }

    #[test]
    fn similarity_hand_cosine() {
        let w = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 0.0]);
        let t = dimension_similarity(&w);
        assert!((t[(0, 1)] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn similarity_zero_rows() {
        let w = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let t = dimension_similarity(&w);
        assert_eq!(t[(0, 1)], 0.0);
        assert_eq!(t[(0, 0)], 1.0);
    }

    fn square(vals: &[f64], n: usize) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, vals)
    }

    #[test]
    fn greedy_pairs_similar_dimensions() {
        // theta(a,b)=0.99, everything else dissimilar; lambda=1 ignores omega
        let theta = square(&[1.0, 0.99, 0.0, 0.99, 1.0, 0.0, 0.0, 0.0, 1.0], 3);
        let omega = DMatrix::zeros(3, 3);
        let labels = vec!["a".into(), "b".into(), "c".into()];
        let (_, mapping, _) =
            build_topic_mapping(&theta, &omega, &[true; 3], 1.0, 2, &labels).unwrap();
        assert_eq!(mapping.table[0], mapping.table[1]);
        assert_ne!(mapping.table[0], mapping.table[2]);
    }

    #[test]
    fn k_equals_n_is_identity() {
        let theta = square(&[1.0, 0.5, 0.5, 1.0], 2);
        let omega = DMatrix::zeros(2, 2);
        let labels = vec!["a".into(), "b".into()];
        let (_, mapping, _) =
            build_topic_mapping(&theta, &omega, &[true; 2], 0.5, 2, &labels).unwrap();
        assert_eq!(mapping.table, vec![0, 1]);
    }

    #[test]
    fn k_one_merges_everything() {
        let theta = square(&[1.0, 0.2, 0.1, 0.2, 1.0, 0.3, 0.1, 0.3, 1.0], 3);
        let omega = DMatrix::zeros(3, 3);
        let labels = vec!["a".into(), "b".into(), "c".into()];
        let (dendro, mapping, _) =
            build_topic_mapping(&theta, &omega, &[true; 3], 0.5, 1, &labels).unwrap();
        assert!(mapping.table.iter().all(|&t| t == 0));
        assert_eq!(dendro.len(), 2);
    }

    #[test]
    fn non_occurring_dimensions_get_reserved_topic() {
        let theta = square(&[1.0, 0.9, 0.0, 0.9, 1.0, 0.0, 0.0, 0.0, 1.0], 3);
        let omega = DMatrix::zeros(3, 3);
        let labels = vec!["a".into(), "b".into(), "ghost".into()];
        let (_, mapping, has_unused) =
            build_topic_mapping(&theta, &omega, &[true, true, false], 0.5, 2, &labels).unwrap();
        assert!(has_unused);
        assert_eq!(mapping.k, 3); // 2 real topics + reserved
        assert_eq!(mapping.table[2], 2);
        assert_eq!(mapping.labels[2], UNUSED_TOPIC_LABEL);
    }

    #[test]
    fn pipeline_end_to_end_deterministic() {
        let ts = corpus(&[
            &["a", "b", "a", "c"],
            &["a", "b", "c", "c"],
            &["d", "e", "d"],
            &["e", "d", "e"],
        ]);
        let cfg = TopicConfig {
            base_attribute: None,
            k: 2,
            lambda: 0.5,
            method: ReductionMethod::Svd,
            seed: 3,
        };
        let m1 = build_topic_model(&ts, &cfg).unwrap();
        let m2 = build_topic_model(&ts, &cfg).unwrap();
        assert_eq!(m1.mapping, m2.mapping);
        assert_eq!(m1.dendrogram, m2.dendrogram);
        assert_eq!(m1.topic_count(), 2);
        // the {a,b,c} block and the {d,e} block should separate
        assert_eq!(m1.mapping.table[0], m1.mapping.table[1]);
        assert_eq!(m1.mapping.table[3], m1.mapping.table[4]);
        assert_ne!(m1.mapping.table[0], m1.mapping.table[3]);
    }

    #[test]
    fn label_override_and_count_check() {
        let ts = corpus(&[&["a", "b"], &["b", "a"], &["c", "c", "c"]]);
        let cfg = TopicConfig {
            base_attribute: Some("act".into()),
            k: 2,
            lambda: 0.5,
            method: ReductionMethod::Svd,
            seed: 1,
        };
        let mut m = build_topic_model(&ts, &cfg).unwrap();
        assert!(label_topics(&mut m, &["x".into(), "y".into(), "z".into()]).is_err());
        label_topics(&mut m, &["prep".into(), "exec".into()]).unwrap();
        assert_eq!(m.mapping.labels[0], "prep");
    }

    #[test]
    fn mapping_constraint_at_most_k() {
        let ts = corpus(&[&["a", "b", "c", "d", "e"], &["b", "c", "a"]]);
        for k in 1..=5 {
            let cfg = TopicConfig {
                base_attribute: None,
                k,
                lambda: 0.3,
                method: ReductionMethod::Svd,
                seed: 11,
            };
            let m = build_topic_model(&ts, &cfg).unwrap();
            assert!(m.topic_count() <= k);
            assert_eq!(m.mapping.domain_size(), 5);
        }
    }
}
