//! Reproducible random lattice polytopes for property suites.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolytope};

pub const MAX_CORPUS_DIM: usize = 4;
pub const MAX_COORD_BOUND: u64 = 6;
const MAX_MISSES: usize = 2000;

/// `count` distinct full-dimensional polytopes in `[0, coord_bound]^dim`,
/// each the hull of `dim + 1 ..= dim + 3` random points, translated so every
/// coordinate minimum is 0. Distinct means distinct up to translation.
pub fn generate_corpus(seed: u64, count: usize, dim: usize, coord_bound: u64) -> Result<Vec<LatticePolytope>> {
    if dim == 0 || dim > MAX_CORPUS_DIM {
        return Err(Error::InvalidInput(format!("corpus dim must be in 1..={MAX_CORPUS_DIM}")));
    }
    if coord_bound == 0 || coord_bound > MAX_COORD_BOUND {
        return Err(Error::InvalidInput(format!(
            "coord_bound must be in 1..={MAX_COORD_BOUND}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let mut misses = 0;
    while out.len() < count && misses < MAX_MISSES {
        misses += 1;
        let npts = rng.gen_range(dim + 1..=dim + 3);
        let pts: Vec<LatticePoint> = (0..npts)
            .map(|_| LatticePoint((0..dim).map(|_| rng.gen_range(0..=coord_bound as i64)).collect()))
            .collect();
        let poly = LatticePolytope::from_vertices(&pts)?;
        if poly.dim() < dim {
            continue;
        }
        let poly = translate_to_origin(&poly)?;
        if seen.insert(poly.vertices().to_vec()) {
            out.push(poly);
            misses = 0;
        }
    }
    if out.len() < count {
        return Err(Error::InvalidInput(format!(
            "found only {} distinct polytopes of this size; asked for {count}",
            out.len()
        )));
    }
    Ok(out)
}

fn translate_to_origin(p: &LatticePolytope) -> Result<LatticePolytope> {
    let dim = p.ambient_dim();
    let shift: Vec<i64> = (0..dim)
        .map(|k| p.vertices().iter().map(|v| v.0[k]).min().unwrap_or(0))
        .collect();
    let shift = LatticePoint(shift);
    let moved: Vec<LatticePoint> = p.vertices().iter().map(|v| v.sub(&shift)).collect();
    LatticePolytope::from_vertices(&moved)
}
