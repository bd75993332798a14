//! Unit-cost edit distance, length-based bounds, and the contractive
//! classification rules for reduced summaries.

use serde::{Deserialize, Serialize};

use crate::summary::SummarySequence;

/// Levenshtein distance with unit-cost insertions, deletions, and
/// substitutions. Two-row DP over the shorter sequence.
pub fn edit_distance(a: &[u32], b: &[u32]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let n = short.len();
    let mut row: Vec<usize> = (0..=n).collect();
    for (j, &bj) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = j + 1;
        for i in 1..=n {
            let up = row[i];
            row[i] = if short[i - 1] == bj {
                diag
            } else {
                diag.min(up).min(row[i - 1]) + 1
            };
            diag = up;
        }
    }
    row[n]
}

/// Banded edit distance: returns `Some(d)` iff the exact distance `d` is at
/// most `chi`, computing only the diagonal band of width `2*chi+1`.
pub fn edit_distance_bounded(a: &[u32], b: &[u32], chi: usize) -> Option<usize> {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let (n, m) = (short.len(), long.len());
    if m - n > chi {
        return None; // length lower bound already exceeds the threshold
    }
    if n == 0 {
        return Some(m);
    }
    let inf = chi + 1;
    // row over the short sequence; cells outside the band stay `inf`.
    let mut row: Vec<usize> = (0..=n).map(|i| if i <= chi { i } else { inf }).collect();
    for j in 1..=m {
        let lo = j.saturating_sub(chi).max(1);
        let hi = (j + chi).min(n);
        if lo > hi {
            return None;
        }
        let mut diag = row[lo - 1];
        row[lo - 1] = if lo == 1 { j.min(inf) } else { inf };
        let mut best = row[lo - 1];
        for i in lo..=hi {
            let up = row[i];
            let mut v = if short[i - 1] == long[j - 1] {
                diag
            } else {
                diag.min(up).min(row[i - 1]).saturating_add(1)
            };
            if v > inf {
                v = inf;
            }
            row[i] = v;
            best = best.min(v);
            diag = up;
        }
        if hi < n {
            row[hi + 1..].iter_mut().for_each(|c| *c = inf);
        }
        if best >= inf {
            return None; // whole band over threshold; it can only grow
        }
    }
    (row[n] <= chi).then_some(row[n])
}

/// Length-based edit-distance bounds: `gamma` (length difference) is a lower
/// bound, `lambda` (max length) an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBounds {
    pub gamma: usize,
    pub lambda: usize,
}

pub fn bounds(a: &[u32], b: &[u32]) -> DistanceBounds {
    DistanceBounds {
        gamma: a.len().abs_diff(b.len()),
        lambda: a.len().max(b.len()),
    }
}

/// Rule-based contractive classification; no distance is ever computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleVerdict {
    /// Summary distance cannot exceed the original distance for this pair.
    Holds,
    /// Summary distance provably exceeds the original distance.
    ViolatesByRule,
    /// The bounds overlap; nothing can be concluded without a computation.
    Undetermined,
}

/// Result of exact verification by dynamic programming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactCheck {
    Confirmed,
    Violated,
}

/// Combined classification and (optional) exact verification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractiveVerdict {
    pub rule: RuleVerdict,
    pub exact: Option<ExactCheck>,
}

/// Classifies a pair against the contractive property using only lengths.
///
/// `sp` and `sq` must be reduced summaries of `p` and `q` under one mapping.
pub fn classify_contractive(
    p: &[u32],
    q: &[u32],
    sp: &SummarySequence,
    sq: &SummarySequence,
) -> ContractiveVerdict {
    let orig = DistanceBounds {
        gamma: p.len().abs_diff(q.len()),
        lambda: p.len().max(q.len()),
    };
    let summ = DistanceBounds {
        gamma: sp.len().abs_diff(sq.len()),
        lambda: sp.len().max(sq.len()),
    };
    let rule = if orig.gamma >= summ.lambda {
        RuleVerdict::Holds
    } else if summ.gamma > orig.lambda {
        RuleVerdict::ViolatesByRule
    } else {
        RuleVerdict::Undetermined
    };
    ContractiveVerdict { rule, exact: None }
}

/// Computes both distances and reports whether the contractive property holds
/// for this pair.
pub fn verify_contractive(
    p: &[u32],
    q: &[u32],
    sp: &SummarySequence,
    sq: &SummarySequence,
) -> ExactCheck {
    let ed = edit_distance(p, q);
    let ed_s = edit_distance(&sp.symbols, &sq.symbols);
    if ed >= ed_s {
        ExactCheck::Confirmed
    } else {
        ExactCheck::Violated
    }
}
