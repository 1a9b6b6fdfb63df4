//! Sufficient conditions for `(N_p)` as auditable certificates.
//!
//! Each check echoes its inputs and the invariants it computed. A result
//! without `guaranteed_p` means "this criterion says nothing", never that
//! `(N_p)` fails.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ehrhart::{ehrhart_polynomial, r_invariant};
use crate::error::{Error, Result};
use crate::lattice::LatticePolytope;
use crate::semigroup::is_normal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: String,
    pub inputs: BTreeMap<String, String>,
    pub invariants: BTreeMap<String, String>,
    /// Computed bound; one entry per coordinate for product criteria.
    pub threshold: Vec<i64>,
    pub guaranteed_p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CriterionResult {
    fn new(criterion: &str) -> Self {
        CriterionResult {
            criterion: criterion.to_string(),
            inputs: BTreeMap::new(),
            invariants: BTreeMap::new(),
            threshold: Vec::new(),
            guaranteed_p: None,
            note: None,
        }
    }

    fn input(mut self, k: &str, v: impl ToString) -> Self {
        self.inputs.insert(k.to_string(), v.to_string());
        self
    }

    fn invariant(mut self, k: &str, v: impl ToString) -> Self {
        self.invariants.insert(k.to_string(), v.to_string());
        self
    }

    pub fn guarantees(&self, p: usize) -> bool {
        self.guaranteed_p.is_some_and(|g| g >= p)
    }
}

fn fmt_vec<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// `L^d` satisfies `(N_p)` when `d >= n - 1 + p`.
pub fn cor1(n: usize, d: usize, p: usize) -> CriterionResult {
    let threshold = n as i64 - 1 + p as i64;
    let mut r = CriterionResult::new("cor1").input("n", n).input("d", d).input("p", p);
    r.threshold = vec![threshold];
    if d as i64 >= threshold {
        r.guaranteed_p = Some(p);
    }
    r
}

/// `L^d` satisfies `(N_p)` when `p >= 1` and
/// `d >= max(deg h - r + p - 1, p)`. For `p = 0` the check is routed to
/// [`cor1`].
pub fn cor_hilbert(poly: &LatticePolytope, d: usize, p: usize) -> Result<CriterionResult> {
    if p == 0 {
        let mut r = cor1(poly.dim(), d, 0);
        r.note = Some("p = 0 is outside the Hilbert-polynomial criterion; routed to cor1".into());
        return Ok(r);
    }
    let h = ehrhart_polynomial(poly);
    let deg = h.degree() as i64;
    let roots = r_invariant(poly, &h)? as i64;
    let threshold = (deg - roots + p as i64 - 1).max(p as i64);
    let mut r = CriterionResult::new("cor_hilbert")
        .input("d", d)
        .input("p", p)
        .invariant("deg_h", deg)
        .invariant("r", roots)
        .invariant("ehrhart", fmt_vec(&h.coeff_strings()));
    r.threshold = vec![threshold];
    if d as i64 >= threshold {
        r.guaranteed_p = Some(p);
    }
    Ok(r)
}

/// `(n - r(P)) P` is normal. The claim is cross-checked by running the
/// normality test on the dilation; a factor of 0 is reported as vacuous.
pub fn cor_polytope(poly: &LatticePolytope) -> Result<CriterionResult> {
    let n = poly.dim();
    if n == 0 {
        return Err(Error::InvalidInput("cor_polytope needs dim P >= 1".into()));
    }
    let h = ehrhart_polynomial(poly);
    let roots = r_invariant(poly, &h)?;
    let factor = n - roots;
    let mut r = CriterionResult::new("cor_polytope")
        .invariant("n", n)
        .invariant("r", roots);
    r.threshold = vec![factor as i64];
    let checked = factor.max(1);
    let report = is_normal(&poly.dilate(checked)?, None);
    r = r
        .invariant("checked_dilation", checked)
        .invariant("checked_dilation_normal", report.normal)
        .invariant("checked_up_to", report.checked_up_to);
    if factor == 0 {
        r.note = Some(format!("n = r(P) = {n}: the dilation factor is 0 and the statement is vacuous"));
    } else {
        if !report.normal {
            return Err(Error::Consistency(format!(
                "{factor}P predicted normal but witness {:?} found",
                report.witness
            )));
        }
        r.guaranteed_p = Some(0);
    }
    Ok(r)
}

/// [`cor_polytope`] read as a statement about `L^d`: it guarantees `(N_0)`
/// exactly when `d = n - r(P) >= 1`.
pub fn cor_polytope_at(poly: &LatticePolytope, d: usize) -> Result<CriterionResult> {
    let mut r = cor_polytope(poly)?.input("d", d);
    if r.threshold[0] != d as i64 {
        r.guaranteed_p = None;
    }
    Ok(r)
}

/// `O(d_1, …, d_ℓ)` on `P^{n_1} × … × P^{n_ℓ}` satisfies `(N_p)` for
/// `p <= min { d_i : d_i != 0 }`.
pub fn cor_prodproj(n: &[usize], d: &[u64], p: usize) -> Result<CriterionResult> {
    if n.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: n.len(),
            got: d.len(),
        });
    }
    let mut r = CriterionResult::new("cor_prodproj")
        .input("n", fmt_vec(n))
        .input("d", fmt_vec(d))
        .input("p", p);
    match d.iter().copied().filter(|&x| x != 0).min() {
        Some(m) => {
            r.threshold = vec![m as i64];
            if p as u64 <= m {
                r.guaranteed_p = Some(p);
            }
        }
        None => r.note = Some("all degrees are zero".into()),
    }
    Ok(r)
}

/// Adjoint bundles on a product of projective spaces, where
/// `K_X = O(-n_1 - 1, …, -n_ℓ - 1)` and the nef cone is generated by the
/// pullbacks of `O(1)`. With unit weights, `K_X ⊗ B^{m_{N+p}}` (or
/// `m_{N+1+p}` on `P^N`) satisfies `(N_p)`, so `O(m)` does for
/// `m >= threshold` coordinatewise.
pub fn cor_canonical_product(n: &[usize], m: &[i64], p: usize) -> Result<CriterionResult> {
    if n.len() != m.len() {
        return Err(Error::DimensionMismatch {
            expected: n.len(),
            got: m.len(),
        });
    }
    if n.is_empty() {
        return Err(Error::InvalidInput("empty product".into()));
    }
    let total: usize = n.iter().sum();
    let steps = if n.len() == 1 { total + 1 + p } else { total + p } as i64;
    let canonical: Vec<i64> = n.iter().map(|&k| -(k as i64) - 1).collect();
    let threshold: Vec<i64> = canonical.iter().map(|k| steps + k).collect();
    let mut r = CriterionResult::new("cor_canonical_product")
        .input("n", fmt_vec(n))
        .input("m", fmt_vec(m))
        .input("p", p)
        .invariant("canonical", fmt_vec(&canonical))
        .invariant("summed_weights", steps);
    if p == 0 {
        r.note = Some("the adjoint criterion needs p >= 1".into());
    } else if m.iter().zip(&threshold).all(|(a, t)| a >= t) {
        r.guaranteed_p = Some(p);
    }
    r.threshold = threshold;
    Ok(r)
}

/// Every polytope criterion that speaks about `L^d` and level `p`.
pub fn polytope_criteria(poly: &LatticePolytope, d: usize, p: usize) -> Result<Vec<CriterionResult>> {
    let mut out = vec![cor1(poly.dim(), d, p)];
    if p >= 1 {
        out.push(cor_hilbert(poly, d, p)?);
    }
    if p == 0 && poly.dim() >= 1 {
        out.push(cor_polytope_at(poly, d)?);
    }
    Ok(out)
}
