//! Low-rank factorizations used to embed dimensions into topic space:
//! truncated SVD via randomized subspace iteration, and multiplicative-update
//! NMF.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const OVERSAMPLING: usize = 8;
const POWER_ITERATIONS: usize = 4;
const NMF_MAX_ITERATIONS: usize = 500;
const NMF_RELATIVE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionMethod {
    Svd,
    Nmf,
}

impl std::str::FromStr for ReductionMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svd" => Ok(Self::Svd),
            "nmf" => Ok(Self::Nmf),
            other => Err(Error::Parameter(format!("unknown method {other:?}"))),
        }
    }
}

impl std::fmt::Display for ReductionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Svd => "svd",
            Self::Nmf => "nmf",
        })
    }
}

/// Rank-k factorization `M ~ m_prime * w.transpose()`.
///
/// `m_prime` is `|rows| x k` (sequences on the new dimensions), `w` is
/// `|cols| x k` (original dimensions over the new dimensions).
#[derive(Debug, Clone)]
pub struct Reduction {
    pub m_prime: DMatrix<f64>,
    pub w: DMatrix<f64>,
    /// Frobenius objective after the initial guess and each accepted NMF
    /// iteration; `None` for SVD.
    pub nmf_objective: Option<Vec<f64>>,
}

impl Reduction {
    pub fn reconstruction(&self) -> DMatrix<f64> {
        &self.m_prime * self.w.transpose()
    }
}

/// Factorizes a non-negative matrix with the chosen method.
pub fn reduce_dimensions(
    m: &DMatrix<f64>,
    k: usize,
    method: ReductionMethod,
    seed: u64,
) -> Result<Reduction> {
    let (rows, cols) = m.shape();
    if k == 0 || k > rows.min(cols) {
        return Err(Error::Parameter(format!(
            "k must be in [1, {}], got {k}",
            rows.min(cols)
        )));
    }
    if m.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("matrix is all zeros".into()));
    }
    match method {
        ReductionMethod::Svd => truncated_svd(m, k, seed),
        ReductionMethod::Nmf => nmf(m, k, seed),
    }
}

fn orthonormal_basis(m: DMatrix<f64>) -> DMatrix<f64> {
    m.qr().q()
}

/// Randomized subspace iteration (range finding, then a small exact SVD).
fn truncated_svd(m: &DMatrix<f64>, k: usize, seed: u64) -> Result<Reduction> {
    let (rows, cols) = m.shape();
    let samples = (k + OVERSAMPLING).min(rows).min(cols);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = DMatrix::from_fn(cols, samples, |_, _| StandardNormal.sample(&mut rng));

    let mut q = orthonormal_basis(m * gaussian);
    for _ in 0..POWER_ITERATIONS {
        let z = orthonormal_basis(m.transpose() * &q);
        q = orthonormal_basis(m * z);
    }

    let b = q.transpose() * m; // samples x cols
    let svd = b.svd(true, true);
    let u_small = svd.u.ok_or_else(|| Error::Degenerate("svd did not produce U".into()))?;
    let v_t = svd.v_t.ok_or_else(|| Error::Degenerate("svd did not produce V^T".into()))?;

    let u = (&q * u_small).columns(0, k).into_owned();
    let sigma = svd.singular_values.rows(0, k).into_owned();
    let mut m_prime = u;
    for (c, &s) in sigma.iter().enumerate() {
        m_prime.column_mut(c).scale_mut(s);
    }
    let w = v_t.rows(0, k).transpose();
    Ok(Reduction {
        m_prime,
        w,
        nmf_objective: None,
    })
}

/// Multiplicative-update NMF. An update that fails to lower the objective is
/// discarded, so the recorded objective history is non-increasing.
fn nmf(m: &DMatrix<f64>, k: usize, seed: u64) -> Result<Reduction> {
    const EPS: f64 = 1e-12;
    let (rows, cols) = m.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // uniform over (0, 1]
    let mut draw = |_: usize, _: usize| 1.0 - rand::Rng::gen::<f64>(&mut rng);
    let mut a = DMatrix::from_fn(rows, k, &mut draw);
    let mut h = DMatrix::from_fn(k, cols, &mut draw);

    let objective = |a: &DMatrix<f64>, h: &DMatrix<f64>| (m - a * h).norm();
    let mut obj = objective(&a, &h);
    let mut history = vec![obj];

    for _ in 0..NMF_MAX_ITERATIONS {
        // H <- H .* (A^T M) ./ (A^T A H)
        let mut h_next = h.clone();
        let numer = a.transpose() * m;
        let denom = a.transpose() * &a * &h;
        h_next.zip_zip_apply(&numer, &denom, |v, n, d| *v *= n / (d + EPS));
        // A <- A .* (M H^T) ./ (A H H^T)
        let mut a_next = a.clone();
        let numer = m * h_next.transpose();
        let denom = &a * (&h_next * h_next.transpose());
        a_next.zip_zip_apply(&numer, &denom, |v, n, d| *v *= n / (d + EPS));

        let next_obj = objective(&a_next, &h_next);
        if next_obj > obj {
            break;
        }
        let improvement = (obj - next_obj) / obj.max(EPS);
        a = a_next;
        h = h_next;
        obj = next_obj;
        history.push(obj);
        if improvement < NMF_RELATIVE_TOLERANCE {
            break;
        }
    }

    Ok(Reduction {
        m_prime: a,
        w: h.transpose(),
        nmf_objective: Some(history),
    })
}
