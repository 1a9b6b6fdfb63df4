//! Toric sheaf-cohomology dimensions, `O_X`-regularity, and the prediction
//! chain that turns regularity into `(N_p)`.
//!
//! Two contexts are supported: powers `L^d` of a line bundle given by a
//! lattice polytope, and line bundles `O(a_1, …, a_ℓ)` on a product of
//! projective spaces.

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, compositions};
use crate::error::{Error, Result};
use crate::lattice::LatticePolytope;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CohomologyContext {
    Polytope { dim: usize },
    Product { dims: Vec<usize> },
}

impl CohomologyContext {
    pub fn total_dim(&self) -> usize {
        match self {
            CohomologyContext::Polytope { dim } => *dim,
            CohomologyContext::Product { dims } => dims.iter().sum(),
        }
    }
}

/// `dim H^i` for every `i`, for one twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub context: CohomologyContext,
    pub twist: Vec<i64>,
    pub dims: Vec<u128>,
}

impl CohomologyProfile {
    pub fn euler_characteristic(&self) -> i128 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i128 } else { -(d as i128) })
            .sum()
    }
}

/// `dim H^i(X, L^d)` for the ample `L` with polytope `P`: sections for
/// `d >= 0`, interior points of `(-d)P` in top degree for `d < 0`.
pub fn coh_dim_ample_power(p: &LatticePolytope, d: i64, i: usize) -> u128 {
    let n = p.dim();
    if d >= 0 {
        if i == 0 {
            p.count_points(d as usize) as u128
        } else {
            0
        }
    } else if i == n {
        p.interior_lattice_points((-d) as usize).len() as u128
    } else {
        0
    }
}

pub fn profile_ample_power(p: &LatticePolytope, d: i64) -> CohomologyProfile {
    CohomologyProfile {
        context: CohomologyContext::Polytope { dim: p.dim() },
        twist: vec![d],
        dims: (0..=p.dim()).map(|i| coh_dim_ample_power(p, d, i)).collect(),
    }
}

/// Whether `L^m` is `O_X`-regular with respect to `L`:
/// `H^i(L^{m-i}) = 0` for `1 <= i <= dim P`.
pub fn is_regular_single(p: &LatticePolytope, m: i64) -> bool {
    (1..=p.dim()).all(|i| coh_dim_ample_power(p, m - i as i64, i) == 0)
}

/// `dim H^i(P^n, O(a))`.
pub fn coh_dim_projective_space(n: usize, a: i64, i: usize) -> u128 {
    let n64 = n as i64;
    if i == 0 && a >= 0 {
        binomial((a + n64) as u64, n as u64)
    } else if i == n && a <= -n64 - 1 {
        binomial((-a - 1) as u64, n as u64)
    } else {
        0
    }
}

/// `dim H^i(P^{n_1} × … × P^{n_ℓ}, O(a_1, …, a_ℓ))` by the Künneth formula.
pub fn coh_dim_product(n: &[usize], a: &[i64], i: usize) -> Result<u128> {
    if n.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: n.len(),
            got: a.len(),
        });
    }
    Ok(compositions(i, n.len())
        .into_iter()
        .map(|parts| {
            parts
                .iter()
                .zip(n.iter().zip(a))
                .map(|(&ik, (&nk, &ak))| coh_dim_projective_space(nk, ak, ik))
                .product::<u128>()
        })
        .sum())
}

pub fn profile_product(n: &[usize], a: &[i64]) -> Result<CohomologyProfile> {
    let total: usize = n.iter().sum();
    Ok(CohomologyProfile {
        context: CohomologyContext::Product { dims: n.to_vec() },
        twist: a.to_vec(),
        dims: (0..=total)
            .map(|i| coh_dim_product(n, a, i))
            .collect::<Result<_>>()?,
    })
}

/// Whether `O(a)` is `O_X`-regular with respect to the pullbacks
/// `B_k = O(e_k)`: `H^i(O(a - u)) = 0` for all `i >= 1`, `u ∈ N^ℓ`, `|u| = i`.
pub fn is_regular_product(n: &[usize], a: &[i64]) -> Result<bool> {
    if n.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: n.len(),
            got: a.len(),
        });
    }
    let total: usize = n.iter().sum();
    for i in 1..=total {
        for u in compositions(i, n.len()) {
            let twist: Vec<i64> = a.iter().zip(&u).map(|(&x, &y)| x - y as i64).collect();
            if coh_dim_product(n, &twist, i)? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A weight sequence `w_1, w_2, …` in `N^ℓ` and the level `p` whose twist
/// `m_p = w_1 + … + w_p` is to be predicted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainTheoremPlan {
    pub weights: Vec<Vec<u64>>,
    pub p: usize,
}

impl MainTheoremPlan {
    pub fn new(weights: Vec<Vec<u64>>, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("prediction needs p >= 1".into()));
        }
        if weights.len() < p {
            return Err(Error::InvalidInput(format!(
                "{} weights given, need at least p = {p}",
                weights.len()
            )));
        }
        let ell = weights[0].len();
        if ell == 0 || weights.iter().any(|w| w.len() != ell) {
            return Err(Error::InvalidInput("weights must share one positive length".into()));
        }
        Ok(MainTheoremPlan { weights, p })
    }

    /// `w_1 = first`, `w_i = tail` for `i >= 2`.
    pub fn with_tail(first: Vec<u64>, tail: Vec<u64>, p: usize) -> Result<Self> {
        let mut weights = vec![first];
        weights.extend(std::iter::repeat(tail).take(p.saturating_sub(1)));
        Self::new(weights, p)
    }

    pub fn ell(&self) -> usize {
        self.weights[0].len()
    }

    /// `m_i = w_1 + … + w_i`.
    pub fn partial_sum(&self, i: usize) -> Vec<u64> {
        let mut m = vec![0u64; self.ell()];
        for w in &self.weights[..i] {
            for (a, b) in m.iter_mut().zip(w) {
                *a += b;
            }
        }
        m
    }

    /// Sufficient test for `B^{w_i} ⊗ B_j^{-1} ∈ 𝓑` for all `j` and
    /// `i <= p`: `w_i - e_j ∈ N^ℓ`, i.e. every coordinate of `w_i` is >= 1.
    pub fn membership_ok(&self) -> bool {
        self.weights[..self.p].iter().all(|w| w.iter().all(|&c| c >= 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub p: usize,
    pub twist: Vec<u64>,
}

/// If `B^{m_1}` is regular and the weights pass the membership test, the
/// bundle `B^{m_p}` satisfies `(N_p)`. No prediction otherwise.
pub fn predict_np_main(plan: &MainTheoremPlan, regular_m1: bool, membership_ok: bool) -> Option<Prediction> {
    (regular_m1 && membership_ok).then(|| Prediction {
        p: plan.p,
        twist: plan.partial_sum(plan.p),
    })
}

/// Hypotheses for `ℓ = 1`, `B_1 = L` with polytope `P`.
pub fn predict_single(p: &LatticePolytope, plan: &MainTheoremPlan) -> Result<Option<Prediction>> {
    if plan.ell() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: plan.ell(),
        });
    }
    let regular = is_regular_single(p, plan.weights[0][0] as i64);
    Ok(predict_np_main(plan, regular, plan.membership_ok()))
}

/// Hypotheses on a product of projective spaces with `B_k = O(e_k)`.
pub fn predict_product(n: &[usize], plan: &MainTheoremPlan) -> Result<Option<Prediction>> {
    let m1: Vec<i64> = plan.weights[0].iter().map(|&c| c as i64).collect();
    let regular = is_regular_product(n, &m1)?;
    Ok(predict_np_main(plan, regular, plan.membership_ok()))
}
