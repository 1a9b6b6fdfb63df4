//! Graded Betti numbers of the section ring of a lattice polytope.
//!
//! `R = ⊕_d R_d` with `R_d` spanned by the lattice points of `c·d·P`, viewed
//! as a module over `S = Sym(R_1)`. We compute
//! `β_{i,j} = dim Tor_i(R, k)_j` as the homology of the Koszul strand
//!
//! ```text
//! ∧^{i+1} V ⊗ R_{j-i-1}  →  ∧^i V ⊗ R_{j-i}  →  ∧^{i-1} V ⊗ R_{j-i+1}
//! ```
//!
//! with `V = R_1`. Every basis element `e_S ⊗ u` carries a torus weight
//! `Σ_{s∈S} v_s + u` in `Z^n`, and the differential preserves it, so each
//! strand splits into independent blocks, one per weight. Ranks are taken
//! block by block.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, combinations};
use crate::ehrhart::{ehrhart_polynomial, EhrhartPolynomial};
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolytope};
use crate::linalg::{RankMethod, SparseMatrix};

/// Default cap on the number of basis elements of one Koszul strand.
pub const DEFAULT_STRAND_LIMIT: usize = 20_000_000;

/// The section ring of `L^c`, truncated at degree `dmax`.
#[derive(Clone, Debug)]
pub struct GradedSectionRing {
    base: LatticePolytope,
    dilation: usize,
    bases: Vec<Vec<LatticePoint>>,
    index: Vec<HashMap<LatticePoint, usize>>,
}

impl GradedSectionRing {
    pub fn base_polytope(&self) -> &LatticePolytope {
        &self.base
    }

    pub fn dilation(&self) -> usize {
        self.dilation
    }

    pub fn dmax(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn dim_v(&self) -> usize {
        self.bases[1].len()
    }

    /// Basis of `R_d`: the lattice points of `c·d·P`, sorted.
    pub fn basis(&self, d: usize) -> &[LatticePoint] {
        &self.bases[d]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, d: usize, x: &LatticePoint) -> Option<usize> {
        self.index.get(d)?.get(x).copied()
    }

    /// Whether multiplication `R_a ⊗ R_b → R_{a+b}` is onto. The map sends
    /// monomials to monomials, so its rank is the number of distinct sums.
    pub fn multiplication_surjective(&self, a: usize, b: usize) -> Result<bool> {
        if a + b > self.dmax() {
            return Err(Error::WindowExceeded(format!(
                "degree {} exceeds ring truncation {}",
                a + b,
                self.dmax()
            )));
        }
        let mut hit = vec![false; self.bases[a + b].len()];
        for u in &self.bases[a] {
            for v in &self.bases[b] {
                let s = u.add(v);
                let idx = self.index[a + b]
                    .get(&s)
                    .ok_or_else(|| Error::Consistency(format!("{s:?} missing from R_{}", a + b)))?;
                hit[*idx] = true;
            }
        }
        Ok(hit.into_iter().all(|h| h))
    }
}

/// `R_d = (c·d·P) ∩ Z^n` for `d = 0..=dmax`.
pub fn build_ring(p: &LatticePolytope, c: usize, dmax: usize) -> Result<GradedSectionRing> {
    if c == 0 {
        return Err(Error::InvalidInput("dilation c must be >= 1".into()));
    }
    if dmax == 0 {
        return Err(Error::InvalidInput("dmax must be >= 1".into()));
    }
    let bases: Vec<Vec<LatticePoint>> = (0..=dmax).map(|d| p.lattice_points(c * d)).collect();
    let index = bases
        .iter()
        .map(|b| b.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect())
        .collect();
    Ok(GradedSectionRing {
        base: p.clone(),
        dilation: c,
        bases,
        index,
    })
}

/// Rank strategy and size guard for Koszul computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KoszulConfig {
    pub rank: RankMethod,
    pub strand_limit: usize,
}

impl Default for KoszulConfig {
    fn default() -> Self {
        KoszulConfig {
            rank: RankMethod::default(),
            strand_limit: DEFAULT_STRAND_LIMIT,
        }
    }
}

impl KoszulConfig {
    pub fn exact() -> Self {
        KoszulConfig {
            rank: RankMethod::Exact,
            ..Self::default()
        }
    }
}

/// A basis element `e_S ⊗ u` of `∧^i V ⊗ R_k`: sorted indices into `R_1`
/// and an index into `R_k`.
pub type KoszulElement = (Vec<usize>, usize);

/// Basis of `∧^i V ⊗ R_k` grouped by torus weight (sorted by weight).
pub fn strand_blocks(
    ring: &GradedSectionRing,
    i: usize,
    k: usize,
    limit: usize,
) -> Result<Vec<(LatticePoint, Vec<KoszulElement>)>> {
    if k > ring.dmax() {
        return Err(Error::WindowExceeded(format!(
            "R_{k} requested but the ring is truncated at degree {}",
            ring.dmax()
        )));
    }
    let v = ring.dim_v();
    let size = binomial(v as u64, i as u64).saturating_mul(ring.bases[k].len() as u128);
    if size > limit as u128 {
        return Err(Error::WindowExceeded(format!(
            "strand ∧^{i}V ⊗ R_{k} has {size} basis elements (limit {limit})"
        )));
    }
    let n = ring.base.ambient_dim();
    let gens = &ring.bases[1];
    let mut blocks: BTreeMap<LatticePoint, Vec<KoszulElement>> = BTreeMap::new();
    for subset in combinations(v, i) {
        let mut weight = vec![0i64; n];
        for &s in &subset {
            for (w, g) in weight.iter_mut().zip(&gens[s].0) {
                *w += g;
            }
        }
        for (ui, u) in ring.bases[k].iter().enumerate() {
            let key = LatticePoint(weight.iter().zip(&u.0).map(|(a, b)| a + b).collect());
            blocks.entry(key).or_default().push((subset.clone(), ui));
        }
    }
    Ok(blocks.into_iter().collect())
}

/// Matrix of `∂: ∧^i V ⊗ R_k → ∧^{i-1} V ⊗ R_{k+1}` restricted to `domain`
/// (one row per domain element). Columns are the codomain elements that
/// occur, returned in column order.
///
/// `∂(e_{s_1} ∧ … ∧ e_{s_i} ⊗ u) = Σ_t (-1)^{t+1} e_{s_1} ∧ … ê_{s_t} … ∧ e_{s_i} ⊗ x_{s_t} u`.
pub fn differential_matrix(
    ring: &GradedSectionRing,
    k: usize,
    domain: &[KoszulElement],
) -> Result<(SparseMatrix, Vec<KoszulElement>)> {
    if k + 1 > ring.dmax() {
        return Err(Error::WindowExceeded(format!(
            "differential out of degree {k} needs R_{} but the ring stops at {}",
            k + 1,
            ring.dmax()
        )));
    }
    let gens = &ring.bases[1];
    let src = &ring.bases[k];
    let tgt_index = &ring.index[k + 1];
    let mut cols: HashMap<KoszulElement, usize> = HashMap::new();
    let mut keys: Vec<KoszulElement> = Vec::new();
    let mut rows = Vec::with_capacity(domain.len());
    for (subset, u) in domain {
        let mut row = Vec::with_capacity(subset.len());
        for (t, &s) in subset.iter().enumerate() {
            let product = gens[s].add(&src[*u]);
            let target = *tgt_index
                .get(&product)
                .ok_or_else(|| Error::Consistency(format!("{product:?} missing from R_{}", k + 1)))?;
            let mut rest = subset.clone();
            rest.remove(t);
            let key = (rest, target);
            let col = match cols.get(&key) {
                Some(&c) => c,
                None => {
                    keys.push(key.clone());
                    cols.insert(key, keys.len() - 1);
                    keys.len() - 1
                }
            };
            row.push((col, if t % 2 == 0 { 1 } else { -1 }));
        }
        rows.push(row);
    }
    Ok((
        SparseMatrix {
            ncols: keys.len(),
            rows,
        },
        keys,
    ))
}

/// `rank ∂_{i,k}` over the whole strand, summed block by block.
pub fn differential_rank(
    ring: &GradedSectionRing,
    i: usize,
    k: usize,
    config: &KoszulConfig,
) -> Result<usize> {
    if i == 0 || i > ring.dim_v() {
        return Ok(0);
    }
    let blocks = strand_blocks(ring, i, k, config.strand_limit)?;
    blocks
        .par_iter()
        .map(|(_, dom)| differential_matrix(ring, k, dom).map(|(m, _)| config.rank.rank(&m)))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Checks `∂_{i-1,k+1} ∘ ∂_{i,k} = 0` on every weight block by an exact
/// matrix product.
pub fn check_d_squared(ring: &GradedSectionRing, i: usize, k: usize) -> Result<bool> {
    if i < 2 {
        return Ok(true);
    }
    for (_, dom) in strand_blocks(ring, i, k, DEFAULT_STRAND_LIMIT)? {
        let (a, keys) = differential_matrix(ring, k, &dom)?;
        let (b, _) = differential_matrix(ring, k + 1, &keys)?;
        if a.mul(&b).iter().flatten().any(|&x| x != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Memoized strand ranks for one ring.
struct RankCache<'a> {
    ring: &'a GradedSectionRing,
    config: KoszulConfig,
    ranks: HashMap<(usize, usize), usize>,
}

impl<'a> RankCache<'a> {
    fn new(ring: &'a GradedSectionRing, config: KoszulConfig) -> Self {
        RankCache {
            ring,
            config,
            ranks: HashMap::new(),
        }
    }

    fn rank(&mut self, i: usize, k: usize) -> Result<usize> {
        if let Some(&r) = self.ranks.get(&(i, k)) {
            return Ok(r);
        }
        let r = differential_rank(self.ring, i, k, &self.config)?;
        self.ranks.insert((i, k), r);
        Ok(r)
    }

    fn betti(&mut self, i: usize, j: usize) -> Result<u64> {
        let ring = self.ring;
        if j < i || i > ring.dim_v() {
            return Ok(0);
        }
        let k = j - i;
        check_window(ring, i, j)?;
        let size = binomial(ring.dim_v() as u64, i as u64) * ring.bases[k].len() as u128;
        let out = self.rank(i, k)? as u128;
        let inc = if k == 0 { 0 } else { self.rank(i + 1, k - 1)? as u128 };
        size.checked_sub(out + inc)
            .map(|b| b as u64)
            .ok_or_else(|| Error::Consistency(format!("negative Betti number at ({i},{j})")))
    }
}

fn check_window(ring: &GradedSectionRing, i: usize, j: usize) -> Result<()> {
    if j < i {
        return Ok(());
    }
    if j - i + 1 > ring.dmax() {
        return Err(Error::WindowExceeded(format!(
            "β_{{{i},{j}}} needs R up to degree {} but the ring stops at {}",
            j - i + 1,
            ring.dmax()
        )));
    }
    Ok(())
}

/// A single graded Betti number.
pub fn koszul_betti(ring: &GradedSectionRing, i: usize, j: usize, config: &KoszulConfig) -> Result<u64> {
    RankCache::new(ring, *config).betti(i, j)
}

/// `β_{i,j}` for `0 <= i <= max_i` and `i <= j <= i + max_slope`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    #[serde(rename = "betti", with = "entry_keys")]
    entries: BTreeMap<(usize, usize), u64>,
    pub max_i: usize,
    pub max_slope: usize,
    pub dim_v: usize,
    pub dilation: usize,
    pub ring_dims: Vec<usize>,
    pub exact: bool,
    pub ehrhart: EhrhartPolynomial,
}

/// `(i, j)` keys as `"i,j"` strings.
mod entry_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, usize), u64>, s: S) -> Result<S::Ok, S::Error> {
        let flat: BTreeMap<String, u64> = m.iter().map(|(&(i, j), &v)| (format!("{i},{j}"), v)).collect();
        flat.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), u64>, D::Error> {
        let flat = BTreeMap::<String, u64>::deserialize(d)?;
        flat.into_iter()
            .map(|(k, v)| {
                let (i, j) = k.split_once(',').ok_or_else(|| D::Error::custom(format!("bad key {k}")))?;
                let i = i.trim().parse().map_err(D::Error::custom)?;
                let j = j.trim().parse().map_err(D::Error::custom)?;
                Ok(((i, j), v))
            })
            .collect()
    }
}

impl BettiTable {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries in `(i, j)` order.
    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn in_window(&self, i: usize, j: usize) -> bool {
        i <= self.max_i && j >= i && j - i <= self.max_slope
    }

    /// `{"i,j": β}` over the nonzero entries.
    pub fn to_json_map(&self) -> BTreeMap<String, u64> {
        self.nonzero().map(|((i, j), v)| (format!("{i},{j}"), v)).collect()
    }

    /// Conventional display: rows are `j - i`, columns are `i`.
    pub fn to_text(&self) -> String {
        let cols = self.max_i + 1;
        let cell = |i: usize, s: usize| -> String {
            match self.get(i, i + s) {
                0 => ".".to_string(),
                v => v.to_string(),
            }
        };
        let mut width = 5;
        for i in 0..cols {
            for s in 0..=self.max_slope {
                width = width.max(cell(i, s).len() + 1);
            }
        }
        let mut out = String::new();
        let _ = write!(out, "{:>7}", "");
        for i in 0..cols {
            let _ = write!(out, "{:>width$}", i);
        }
        out.push('\n');
        let _ = write!(out, "{:>7}", "total:");
        for i in 0..cols {
            let total: u64 = (0..=self.max_slope).map(|s| self.get(i, i + s)).sum();
            let _ = write!(out, "{:>width$}", total);
        }
        out.push('\n');
        for s in 0..=self.max_slope {
            let _ = write!(out, "{:>7}", format!("{s}:"));
            for i in 0..cols {
                let _ = write!(out, "{:>width$}", cell(i, s));
            }
            out.push('\n');
        }
        out
    }
}

/// The full window `0 <= i <= max_i`, `0 <= j - i <= max_slope`.
pub fn betti_table(
    ring: &GradedSectionRing,
    max_i: usize,
    max_slope: usize,
    config: &KoszulConfig,
) -> Result<BettiTable> {
    if max_slope + 1 > ring.dmax() {
        return Err(Error::WindowExceeded(format!(
            "slope window {max_slope} needs a ring truncated at degree >= {} (have {})",
            max_slope + 1,
            ring.dmax()
        )));
    }
    let mut cache = RankCache::new(ring, *config);
    let mut entries = BTreeMap::new();
    for i in 0..=max_i {
        for s in 0..=max_slope {
            let b = cache.betti(i, i + s)?;
            if b != 0 {
                entries.insert((i, i + s), b);
            }
        }
    }
    if entries.get(&(0, 0)) != Some(&1) {
        return Err(Error::Consistency("β_{0,0} != 1".into()));
    }
    Ok(BettiTable {
        entries,
        max_i,
        max_slope,
        dim_v: ring.dim_v(),
        dilation: ring.dilation,
        ring_dims: ring.dims(),
        exact: config.rank.is_exact(),
        ehrhart: ehrhart_polynomial(&ring.base),
    })
}

/// Degree-`j` coefficient of `H_R(t)·(1 - t)^{dim V}`.
pub fn k_polynomial_coefficient(h: &EhrhartPolynomial, c: usize, dim_v: usize, j: usize) -> Result<i128> {
    let mut acc: i128 = 0;
    for m in 0..=j.min(dim_v) {
        let hd = h.eval_integer((c * (j - m)) as i64)? as i128;
        let bin = binomial(dim_v as u64, m as u64) as i128;
        acc += if m % 2 == 0 { bin * hd } else { -bin * hd };
    }
    Ok(acc)
}

/// Degrees `j` whose alternating Betti sum is fully inside the table window.
pub fn checksum_degrees(table: &BettiTable) -> std::ops::RangeInclusive<usize> {
    if table.max_i >= table.dim_v {
        0..=table.dim_v + table.max_slope
    } else {
        0..=table.max_i
    }
}

/// Compare `Σ_i (-1)^i β_{i,j}` against the K-polynomial from the Hilbert
/// function for every degree the window covers.
pub fn k_polynomial_checksum(table: &BettiTable) -> bool {
    checksum_degrees(table).all(|j| {
        let alt: i128 = (0..=j.min(table.max_i))
            .map(|i| {
                let b = table.get(i, j) as i128;
                if i % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .sum();
        k_polynomial_coefficient(&table.ehrhart, table.dilation, table.dim_v, j)
            .map(|k| k == alt)
            .unwrap_or(false)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NpStatus {
    Fails { i: usize, j: usize, beta: u64 },
    VerifiedUpTo { bound: usize },
    Proven { criterion: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpVerdict {
    pub p: usize,
    #[serde(flatten)]
    pub status: NpStatus,
}

impl NpVerdict {
    pub fn fails(&self) -> bool {
        matches!(self.status, NpStatus::Fails { .. })
    }
}

/// `(N_p)` verdicts for `p = 0..=pmax` read off a Betti table.
pub fn np_from_table(table: &BettiTable, pmax: usize) -> Result<Vec<NpVerdict>> {
    if pmax > table.max_i {
        return Err(Error::WindowExceeded(format!(
            "pmax {pmax} exceeds the table's homological window {}",
            table.max_i
        )));
    }
    let offending = |i: usize, j: usize| if i == 0 { j > 0 } else { j != i + 1 };
    let mut verdicts = Vec::with_capacity(pmax + 1);
    let mut failure: Option<NpStatus> = None;
    for p in 0..=pmax {
        if failure.is_none() {
            failure = (0..=table.max_slope)
                .map(|s| (p, p + s))
                .find(|&(i, j)| offending(i, j) && table.get(i, j) > 0)
                .map(|(i, j)| NpStatus::Fails {
                    i,
                    j,
                    beta: table.get(i, j),
                });
        }
        let status = failure.clone().unwrap_or(NpStatus::VerifiedUpTo {
            bound: table.max_slope,
        });
        verdicts.push(NpVerdict { p, status });
    }
    Ok(verdicts)
}

/// Whether every strand a `max_i × max_slope` table touches has at most
/// `limit` basis elements (and the ring is deep enough).
pub fn within_reach(ring: &GradedSectionRing, max_i: usize, max_slope: usize, limit: usize) -> bool {
    if max_slope + 1 > ring.dmax() {
        return false;
    }
    let v = ring.dim_v() as u64;
    let top = |i: usize| if i <= max_i { max_slope } else { max_slope.saturating_sub(1) };
    (1..=max_i + 1).all(|i| {
        (0..=top(i)).all(|k| binomial(v, i as u64).saturating_mul(ring.bases[k].len() as u128) <= limit as u128)
    })
}

/// `(N_p)` verdicts for `p = 0..=pmax` with slopes up to `max_slope`.
pub fn np_level(
    ring: &GradedSectionRing,
    pmax: usize,
    max_slope: usize,
    config: &KoszulConfig,
) -> Result<Vec<NpVerdict>> {
    let table = betti_table(ring, pmax, max_slope, config)?;
    np_from_table(&table, pmax)
}

/// Default slope window: `dim P + 2`.
pub fn default_max_slope(p: &LatticePolytope) -> usize {
    p.dim() + 2
}
