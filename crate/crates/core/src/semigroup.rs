//! Normality of lattice polytopes via iterated sumsets.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolytope};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub point: LatticePoint,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub normal: bool,
    pub checked_up_to: usize,
    pub witness: Option<Witness>,
}

/// Default bound on `m`: decompositions in degrees above `n - 1` always exist.
pub fn default_mmax(dim: usize) -> usize {
    dim.saturating_sub(1).max(2)
}

/// Check that every lattice point of `mP` is a sum of `m` lattice points of
/// `P` for `m = 2..=mmax`. The witness is the lexicographically smallest
/// failing point at the smallest failing `m`.
pub fn is_normal(p: &LatticePolytope, mmax: Option<usize>) -> NormalityReport {
    let bound = mmax.unwrap_or_else(|| default_mmax(p.dim()));
    let generators = p.lattice_points(1);
    let mut sumset: HashSet<LatticePoint> = generators.iter().cloned().collect();
    for m in 2..=bound {
        sumset = sumset
            .iter()
            .flat_map(|s| generators.iter().map(move |g| s.add(g)))
            .collect();
        if let Some(bad) = p.lattice_points(m).into_iter().find(|x| !sumset.contains(x)) {
            return NormalityReport {
                normal: false,
                checked_up_to: m,
                witness: Some(Witness { point: bad, m }),
            };
        }
    }
    NormalityReport {
        normal: true,
        checked_up_to: bound,
        witness: None,
    }
}

/// An explicit decomposition `x = p_1 + ... + p_m` with `p_i` lattice points
/// of `P` (non-decreasing in lexicographic order), or `None` if there is none.
pub fn decompose(p: &LatticePolytope, x: &LatticePoint, m: usize) -> Result<Option<Vec<LatticePoint>>> {
    if !p.contains(m, x)? {
        return Err(Error::NotInDilation {
            point: x.0.clone(),
            m,
        });
    }
    let generators = p.lattice_points(1);
    let mut stack = Vec::with_capacity(m);
    Ok(search(p, &generators, x, m, 0, &mut stack).then_some(stack))
}

fn search(
    p: &LatticePolytope,
    gens: &[LatticePoint],
    x: &LatticePoint,
    m: usize,
    start: usize,
    stack: &mut Vec<LatticePoint>,
) -> bool {
    if m == 0 {
        return x.0.iter().all(|&c| c == 0);
    }
    if m == 1 {
        return match gens.binary_search(x) {
            Ok(i) if i >= start => {
                stack.push(x.clone());
                true
            }
            _ => false,
        };
    }
    for (i, g) in gens.iter().enumerate().skip(start) {
        let rest = x.sub(g);
        if !p.contains(m - 1, &rest).unwrap_or(false) {
            continue;
        }
        stack.push(g.clone());
        if search(p, gens, &rest, m - 1, i, stack) {
            return true;
        }
        stack.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[&[i64]]) -> LatticePolytope {
        let pts: Vec<LatticePoint> = v.iter().map(|c| LatticePoint(c.to_vec())).collect();
        LatticePolytope::from_vertices(&pts).unwrap()
    }

    fn lp(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    fn singular_simplex() -> LatticePolytope {
        poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]])
    }

    #[test]
    fn unit_simplices_are_normal() {
        for n in 1..=4usize {
            let mut v = vec![vec![0i64; n]];
            for i in 0..n {
                let mut e = vec![0i64; n];
                e[i] = 1;
                v.push(e);
            }
            let pts: Vec<LatticePoint> = v.into_iter().map(LatticePoint).collect();
            let p = LatticePolytope::from_vertices(&pts).unwrap();
            let rep = is_normal(&p, None);
            assert!(rep.normal, "n = {n}");
            assert_eq!(rep.checked_up_to, default_mmax(n));
            assert!(rep.witness.is_none());
        }
    }

    #[test]
    fn singular_simplex_is_not_normal() {
        let rep = is_normal(&singular_simplex(), None);
        assert!(!rep.normal);
        assert_eq!(
            rep.witness,
            Some(Witness {
                point: lp(&[1, 1, 1]),
                m: 2
            })
        );
        assert_eq!(decompose(&singular_simplex(), &lp(&[1, 1, 1]), 2).unwrap(), None);
    }

    #[test]
    fn doubled_singular_simplex_is_normal() {
        let p = singular_simplex().dilate(2).unwrap();
        assert!(is_normal(&p, Some(2)).normal);
        assert!(is_normal(&p, None).normal);
    }

    #[test]
    fn decomposition_examples() {
        let cubic = poly(&[&[1, 0], &[0, 1], &[2, 2]]);
        let parts = decompose(&cubic, &lp(&[3, 3]), 3).unwrap().unwrap();
        assert_eq!(parts.len(), 3);
        let sum = parts.iter().fold(lp(&[0, 0]), |a, b| a.add(b));
        assert_eq!(sum, lp(&[3, 3]));
        for q in &parts {
            assert!(cubic.contains(1, q).unwrap());
        }
        for g in cubic.lattice_points(1) {
            assert_eq!(decompose(&cubic, &g, 1).unwrap(), Some(vec![g.clone()]));
        }
    }

    #[test]
    fn decompose_rejects_outside_points() {
        let cubic = poly(&[&[1, 0], &[0, 1], &[2, 2]]);
        assert!(matches!(
            decompose(&cubic, &lp(&[5, 0]), 1),
            Err(Error::NotInDilation { .. })
        ));
    }
}
