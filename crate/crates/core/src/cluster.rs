//! Agglomerative hierarchical clustering of traces under edit distance, in
//! original or summary space, plus distance-based quality metrics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::{all_pairs_distances, SummaryIndex};
use crate::summary::MappingFunction;
use crate::trace::SymbolCorpus;

/// Which space a distance matrix was computed in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Original,
    Summary { k: u32, scheme: String },
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Space::Original => write!(f, "original"),
            Space::Summary { k, scheme } => write!(f, "summary({scheme}, k={k})"),
        }
    }
}

/// Symmetric pairwise distances in condensed upper-triangular form.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    pub ids: Vec<String>,
    pub condensed: Vec<f64>,
    pub space: Space,
}

impl DistanceMatrix {
    pub fn new(ids: Vec<String>, condensed: Vec<f64>, space: Space) -> Result<Self> {
        let n = ids.len();
        if condensed.len() != n * (n - 1) / 2 {
            return Err(Error::Consistency(format!(
                "condensed length {} does not match {n} items",
                condensed.len()
            )));
        }
        if condensed.iter().any(|&d| d < 0.0 || !d.is_finite()) {
            return Err(Error::Consistency("distances must be finite and non-negative".into()));
        }
        Ok(Self { ids, condensed, space })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let n = self.len();
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.condensed[i * (2 * n - i - 1) / 2 + (j - i - 1)]
    }
}

/// All unordered pair edit distances; `f` absent means original space.
pub fn distance_matrix(
    corpus: &SymbolCorpus,
    f: Option<&MappingFunction>,
    reduced: bool,
) -> Result<DistanceMatrix> {
    if corpus.len() < 2 {
        return Err(Error::Parameter("clustering needs at least 2 traces".into()));
    }
    let (condensed, space) = match f {
        None => {
            let d = all_pairs_distances(&corpus.sequences);
            (d.values, Space::Original)
        }
        Some(f) => {
            let index = SummaryIndex::build(corpus, f, reduced)?;
            let seqs: Vec<&[u32]> = index.summaries.iter().map(|s| s.symbols.as_slice()).collect();
            let d = all_pairs_distances(&seqs);
            (
                d.values,
                Space::Summary {
                    k: f.k,
                    scheme: format!("{:?}", f.kind).to_lowercase(),
                },
            )
        }
    };
    DistanceMatrix::new(
        corpus.trace_ids.clone(),
        condensed.into_iter().map(f64::from).collect(),
        space,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Average,
    Complete,
}

impl std::str::FromStr for Linkage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" => Ok(Self::Average),
            "complete" => Ok(Self::Complete),
            other => Err(Error::Parameter(format!("unknown linkage {other:?}"))),
        }
    }
}

/// A flat clustering cut from the merge hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub ids: Vec<String>,
    /// Cluster id per trace, dense in `[0, n_clusters)`.
    pub assignments: Vec<u32>,
    pub n_clusters: usize,
    /// Merge records `(left, right, height)`; cluster ids are each side's
    /// smallest member index.
    pub dendrogram: Vec<(u32, u32, f64)>,
}

/// Agglomerative clustering down to `n_clusters` clusters. Merge ties break
/// on the lowest pair of cluster ids (smallest member index).
pub fn hierarchical_cluster(
    matrix: &DistanceMatrix,
    n_clusters: usize,
    linkage: Linkage,
) -> Result<Clustering> {
    let n = matrix.len();
    if n_clusters == 0 || n_clusters > n {
        return Err(Error::Parameter(format!(
            "cluster count must be in [1, {n}], got {n_clusters}"
        )));
    }

    struct ClusterState {
        rep: u32,
        members: Vec<usize>,
    }
    let mut clusters: Vec<ClusterState> = (0..n)
        .map(|i| ClusterState { rep: i as u32, members: vec![i] })
        .collect();
    let mut dist: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { matrix.get(i, j) }).collect())
        .collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut dendrogram = Vec::with_capacity(n - 1);

    let snapshot = |clusters: &[ClusterState], alive: &[usize]| -> Vec<u32> {
        let mut reps: Vec<(u32, usize)> = alive.iter().map(|&c| (clusters[c].rep, c)).collect();
        reps.sort_unstable();
        let mut assignment = vec![0u32; n];
        for (cid, &(_, c)) in reps.iter().enumerate() {
            for &m in &clusters[c].members {
                assignment[m] = cid as u32;
            }
        }
        assignment
    };

    let mut cut = (alive.len() == n_clusters).then(|| snapshot(&clusters, &alive));

    while alive.len() > 1 {
        let mut best: Option<(f64, u32, u32, usize, usize)> = None;
        for (ai, &a) in alive.iter().enumerate() {
            for &b in &alive[ai + 1..] {
                let d = dist[a][b];
                let (lo, hi) = if clusters[a].rep <= clusters[b].rep {
                    (clusters[a].rep, clusters[b].rep)
                } else {
                    (clusters[b].rep, clusters[a].rep)
                };
                let better = match best {
                    None => true,
                    Some((bd, blo, bhi, _, _)) => d < bd || (d == bd && (lo, hi) < (blo, bhi)),
                };
                if better {
                    best = Some((d, lo, hi, a.min(b), a.max(b)));
                }
            }
        }
        let (height, lo, hi, keep, drop) = best.expect("two clusters are alive");
        dendrogram.push((lo, hi, height));

        let (wk, wd) = (clusters[keep].members.len() as f64, clusters[drop].members.len() as f64);
        for &other in &alive {
            if other == keep || other == drop {
                continue;
            }
            let merged = match linkage {
                Linkage::Average => (wk * dist[keep][other] + wd * dist[drop][other]) / (wk + wd),
                Linkage::Complete => dist[keep][other].max(dist[drop][other]),
            };
            dist[keep][other] = merged;
            dist[other][keep] = merged;
        }
        let moved = std::mem::take(&mut clusters[drop].members);
        clusters[keep].members.extend(moved);
        clusters[keep].rep = clusters[keep].rep.min(clusters[drop].rep);
        alive.retain(|&c| c != drop);

        if alive.len() == n_clusters {
            cut = Some(snapshot(&clusters, &alive));
        }
    }

    Ok(Clustering {
        ids: matrix.ids.clone(),
        assignments: cut.expect("merge loop reaches the requested cut"),
        n_clusters,
        dendrogram,
    })
}

/// Distance-based quality of a clustering, measured on original distances.
#[derive(Debug, Clone, Serialize)]
pub struct QualityReport {
    pub n_clusters: usize,
    pub space: String,
    /// Mean silhouette coefficient; `None` when undefined (fewer than two
    /// clusters, or all clusters are singletons).
    pub silhouette: Option<f64>,
    /// Cluster-size-weighted mean intra-cluster distance.
    pub weighted_intra: f64,
    /// Adjusted Rand index against the reference clustering, when supplied.
    pub ari: Option<f64>,
}

pub fn weighted_cluster_quality(
    clustering: &Clustering,
    original: &DistanceMatrix,
    reference: Option<&Clustering>,
) -> Result<QualityReport> {
    let n = original.len();
    if clustering.assignments.len() != n {
        return Err(Error::Consistency(
            "clustering and distance matrix cover different corpora".into(),
        ));
    }
    let k = clustering.n_clusters;
    let mut sizes = vec![0usize; k];
    for &c in &clustering.assignments {
        sizes[c as usize] += 1;
    }

    // Weighted mean intra-cluster distance (singletons contribute 0).
    let mut weighted_intra = 0.0;
    for c in 0..k {
        if sizes[c] < 2 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| clustering.assignments[i] as usize == c).collect();
        let mut total = 0.0;
        let mut pairs = 0usize;
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                total += original.get(i, j);
                pairs += 1;
            }
        }
        weighted_intra += (sizes[c] as f64 / n as f64) * (total / pairs as f64);
    }

    let silhouette = silhouette_mean(&clustering.assignments, &sizes, original);
    let ari = reference.map(|r| {
        if r.assignments.len() != n {
            return Err(Error::Consistency(
                "reference clustering covers a different corpus".into(),
            ));
        }
        Ok(adjusted_rand_index(&clustering.assignments, &r.assignments))
    });
    let ari = match ari {
        None => None,
        Some(r) => Some(r?),
    };

    Ok(QualityReport {
        n_clusters: k,
        space: original.space.to_string(),
        silhouette,
        weighted_intra,
        ari,
    })
}

fn silhouette_mean(assignments: &[u32], sizes: &[usize], d: &DistanceMatrix) -> Option<f64> {
    let n = assignments.len();
    let k = sizes.len();
    if k < 2 || sizes.iter().all(|&s| s <= 1) {
        return None;
    }
    let mut total = 0.0;
    for i in 0..n {
        let own = assignments[i] as usize;
        if sizes[own] == 1 {
            continue; // singleton: silhouette 0 by convention
        }
        let mut sums = vec![0.0f64; k];
        for j in 0..n {
            if j != i {
                sums[assignments[j] as usize] += d.get(i, j);
            }
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Some(total / n as f64)
}

/// Chance-corrected agreement between two partitions of the same items.
pub fn adjusted_rand_index(a: &[u32], b: &[u32]) -> f64 {
    assert_eq!(a.len(), b.len(), "partitions must cover the same items");
    let n = a.len();
    let ka = a.iter().map(|&x| x as usize).max().map_or(0, |m| m + 1);
    let kb = b.iter().map(|&x| x as usize).max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x as usize][y as usize] += 1;
    }
    let choose2 = |v: u64| (v * v.saturating_sub(1)) / 2;
    let sum_ij: u64 = table.iter().flatten().map(|&v| choose2(v)).sum();
    let sum_a: u64 = table.iter().map(|row| choose2(row.iter().sum())).sum();
    let sum_b: u64 = (0..kb)
        .map(|j| choose2(table.iter().map(|row| row[j]).sum()))
        .sum();
    let total = choose2(n as u64);
    if total == 0 {
        return 1.0;
    }
    let expected = sum_a as f64 * sum_b as f64 / total as f64;
    let max_index = (sum_a + sum_b) as f64 / 2.0;
    let denom = max_index - expected;
    if denom.abs() < f64::EPSILON {
        return if (sum_ij as f64 - expected).abs() < f64::EPSILON { 1.0 } else { 0.0 };
    }
    (sum_ij as f64 - expected) / denom
}
