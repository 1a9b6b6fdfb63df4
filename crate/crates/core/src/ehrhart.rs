//! Ehrhart polynomials, their integer roots, and reciprocity.

use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::LatticePolytope;
use crate::scalar::lift;
use crate::{Rational, RationalPolynomial};

/// `h(d) = #(dP ∩ Z^n)` as an exact rational polynomial of degree `dim P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    poly: RationalPolynomial,
}

impl EhrhartPolynomial {
    /// Wrap coefficients (lowest degree first), checking the structural
    /// invariants of an Ehrhart polynomial.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        let poly = RationalPolynomial::new(coeffs);
        if poly.coeff(0) != Rational::one() {
            return Err(Error::InvalidInput("constant term must be 1".into()));
        }
        if !poly.leading().is_some_and(|c| c.is_positive()) {
            return Err(Error::InvalidInput("leading coefficient must be positive".into()));
        }
        Ok(EhrhartPolynomial { poly })
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    pub fn polynomial(&self) -> &RationalPolynomial {
        &self.poly
    }

    pub fn eval(&self, d: i64) -> Rational {
        self.poly.eval_int(d)
    }

    /// Value at `d` as an integer; errors if it is not integral.
    pub fn eval_integer(&self, d: i64) -> Result<i64> {
        let v = self.eval(d);
        if !v.is_integer() {
            return Err(Error::Consistency(format!("h({d}) = {v} is not an integer")));
        }
        v.to_integer()
            .to_i64()
            .ok_or(Error::Overflow("Ehrhart evaluation"))
    }

    /// `dim(P)! * leading coefficient`, the normalized volume.
    pub fn normalized_volume(&self) -> Rational {
        let fact: u64 = (1..=self.degree() as u64).product();
        self.poly.leading().cloned().unwrap_or_else(Rational::zero) * lift::<Rational>(fact as i64)
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(|c| c.to_string()).collect()
    }
}

impl std::fmt::Display for EhrhartPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.poly.fmt(f)
    }
}

#[derive(Serialize, Deserialize)]
struct EhrhartJson {
    coeffs: Vec<String>,
}

impl Serialize for EhrhartPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EhrhartJson {
            coeffs: self.coeff_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EhrhartPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = EhrhartJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| Rational::from_str(s).map_err(|e| D::Error::custom(format!("{s}: {e}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        EhrhartPolynomial::from_coeffs(coeffs).map_err(D::Error::custom)
    }
}

/// Integer roots of an Ehrhart polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootData {
    pub r: usize,
    pub integer_roots: Vec<i64>,
}

/// Interpolate through the exact counts at `d = 0..=dim P`.
pub fn ehrhart_polynomial(p: &LatticePolytope) -> EhrhartPolynomial {
    let n = p.dim();
    let nodes: Vec<(Rational, Rational)> = (0..=n)
        .map(|d| (lift(d as i64), lift(p.count_points(d) as i64)))
        .collect();
    let poly = RationalPolynomial::interpolate(&nodes);
    debug_assert_eq!(poly.degree(), Some(n));
    EhrhartPolynomial { poly }
}

/// The largest `r` with `h(-1) = ... = h(-r) = 0`; roots counted as a set.
pub fn integer_root_count(h: &EhrhartPolynomial) -> RootData {
    let r = (1..=h.degree() as i64)
        .take_while(|&s| h.eval(-s).is_zero())
        .count();
    RootData {
        r,
        integer_roots: (1..=r as i64).map(|s| -s).collect(),
    }
}

/// Largest `r` such that `rP` has no interior lattice point, found by direct
/// search over dilations.
pub fn r_of_polytope(p: &LatticePolytope) -> Result<usize> {
    if p.dim() == 0 {
        return Err(Error::InvalidInput("r(P) needs dim P >= 1".into()));
    }
    // rP is interior-free for r < r(P) + 1 and r(P) <= dim P.
    let r = (1..=p.dim() + 1)
        .find(|&d| !p.interior_lattice_points(d).is_empty())
        .map(|d| d - 1)
        .ok_or_else(|| Error::Consistency("no interior point up to (dim + 1) P".into()))?;
    Ok(r)
}

/// `r(P)` computed both from the roots of `h` and by direct search; the two
/// routes must agree.
pub fn r_invariant(p: &LatticePolytope, h: &EhrhartPolynomial) -> Result<usize> {
    let by_roots = integer_root_count(h).r;
    if cfg!(debug_assertions) && p.dim() > 0 {
        let direct = r_of_polytope(p)?;
        if direct != by_roots {
            return Err(Error::Consistency(format!(
                "r(P) by search = {direct}, by roots of h = {by_roots}"
            )));
        }
    }
    Ok(by_roots)
}

/// `(-1)^n h(-d)` equals the interior count of `dP` for `1 <= d <= dmax`.
pub fn reciprocity_check(p: &LatticePolytope, dmax: usize) -> bool {
    let h = ehrhart_polynomial(p);
    let sign = if p.dim() % 2 == 0 { Rational::one() } else { -Rational::one() };
    (1..=dmax).all(|d| {
        let lhs = sign.clone() * h.eval(-(d as i64));
        lhs == lift(p.interior_lattice_points(d).len() as i64)
    })
}
