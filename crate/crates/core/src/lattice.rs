//! Lattice polytopes: normalization to a full-dimensional lattice, facet
//! enumeration, and lattice-point enumeration of dilations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::combinations;
use crate::error::{Error, Result};
use crate::linalg::{cross_normal, gcd_slice, int_rank, unimodular_column_reduce};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| a * k).collect())
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The closed half-space `{x : <normal, x> >= offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl HalfSpace {
    pub fn eval(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `<normal, x> - d * offset`, nonnegative exactly on the half-space of `dP`.
    pub fn slack(&self, x: &[i64], d: i64) -> i64 {
        self.eval(x) - d * self.offset
    }
}

/// Affine unimodular change of coordinates from the input lattice onto the
/// lattice of the normalized polytope: `y = ((x - d * origin) * transform)[..dim]`
/// for points of the `d`-th dilation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub original_dim: usize,
    pub origin: Vec<i64>,
    pub transform: Vec<Vec<i64>>,
    pub dim: usize,
}

impl Embedding {
    /// Image of a point of the original `d`-th dilation; `None` if the point
    /// is off the affine span.
    pub fn map_point(&self, x: &[i64], d: i64) -> Option<LatticePoint> {
        let shifted: Vec<i64> = x.iter().zip(&self.origin).map(|(a, o)| a - d * o).collect();
        let image: Vec<i64> = (0..self.original_dim)
            .map(|j| (0..self.original_dim).map(|k| shifted[k] * self.transform[k][j]).sum())
            .collect();
        if image[self.dim..].iter().any(|&c| c != 0) {
            return None;
        }
        Some(LatticePoint(image[..self.dim].to_vec()))
    }
}

/// Convex hull of finitely many lattice points, stored in a lattice in which
/// it is full-dimensional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    vertices: Vec<LatticePoint>,
    facets: Vec<HalfSpace>,
    ambient_dim: usize,
    dim: usize,
    embedding: Option<Embedding>,
}

/// JSON input form: `{"vertices": [[int, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeInput {
    pub vertices: Vec<Vec<i64>>,
}

impl PolytopeInput {
    pub fn to_polytope(&self) -> Result<LatticePolytope> {
        let pts: Vec<LatticePoint> = self.vertices.iter().cloned().map(LatticePoint).collect();
        normalize_full_dim(&pts)
    }
}

impl LatticePolytope {
    pub fn from_vertices<V: Into<LatticePoint> + Clone>(vertices: &[V]) -> Result<Self> {
        let pts: Vec<LatticePoint> = vertices.iter().cloned().map(Into::into).collect();
        normalize_full_dim(&pts)
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The recorded change of coordinates, if the input was not already
    /// full-dimensional.
    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn to_input(&self) -> PolytopeInput {
        PolytopeInput {
            vertices: self.vertices.iter().map(|v| v.0.clone()).collect(),
        }
    }

    /// The polytope `kP` as a polytope in its own right.
    pub fn dilate(&self, k: usize) -> Result<LatticePolytope> {
        if k == 0 {
            return Err(Error::InvalidInput("dilation factor must be >= 1".into()));
        }
        let scaled: Vec<LatticePoint> = self.vertices.iter().map(|v| v.scale(k as i64)).collect();
        normalize_full_dim(&scaled)
    }

    /// Per-coordinate `(min, max)` over the vertices.
    fn bounding_box(&self) -> Vec<(i64, i64)> {
        (0..self.ambient_dim)
            .map(|k| {
                let it = self.vertices.iter().map(|v| v.0[k]);
                (it.clone().min().unwrap_or(0), it.max().unwrap_or(0))
            })
            .collect()
    }

    fn enumerate(&self, d: usize, strict: bool) -> Vec<LatticePoint> {
        let n = self.ambient_dim;
        let d = d as i64;
        if n == 0 {
            return if strict { vec![] } else { vec![LatticePoint(vec![])] };
        }
        let bbox = self.bounding_box();
        let bump = i64::from(strict);
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        self.enumerate_rec(0, d, bump, &bbox, &mut x, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        k: usize,
        d: i64,
        bump: i64,
        bbox: &[(i64, i64)],
        x: &mut Vec<i64>,
        out: &mut Vec<LatticePoint>,
    ) {
        let n = self.ambient_dim;
        let (mut lo, mut hi) = (d * bbox[k].0, d * bbox[k].1);
        if k + 1 == n {
            // Tighten the last coordinate using facets that involve it.
            for f in &self.facets {
                let a = f.normal[k];
                let rest: i64 = (0..k).map(|j| f.normal[j] * x[j]).sum();
                let rhs = d * f.offset + bump - rest;
                if a > 0 {
                    lo = lo.max(div_ceil(rhs, a));
                } else if a < 0 {
                    hi = hi.min(div_floor(rhs, a));
                } else if rest < d * f.offset + bump {
                    return;
                }
            }
            for v in lo..=hi {
                x[k] = v;
                out.push(LatticePoint(x.clone()));
            }
            return;
        }
        for v in lo..=hi {
            x[k] = v;
            self.enumerate_rec(k + 1, d, bump, bbox, x, out);
        }
    }

    /// Lattice points of `dP`, sorted lexicographically.
    pub fn lattice_points(&self, d: usize) -> Vec<LatticePoint> {
        self.enumerate(d, false)
    }

    /// Lattice points in the relative interior of `dP`, sorted.
    pub fn interior_lattice_points(&self, d: usize) -> Vec<LatticePoint> {
        if self.dim == 0 || d == 0 {
            return Vec::new();
        }
        self.enumerate(d, true)
    }

    pub fn count_points(&self, d: usize) -> usize {
        self.lattice_points(d).len()
    }

    /// Whether `x` lies in the closed dilation `dP`.
    pub fn contains(&self, d: usize, x: &LatticePoint) -> Result<bool> {
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.dim(),
            });
        }
        let d = d as i64;
        if self.ambient_dim == 0 {
            return Ok(true);
        }
        Ok(self.facets.iter().all(|f| f.slack(&x.0, d) >= 0))
    }

    pub fn contains_strictly(&self, d: usize, x: &LatticePoint) -> Result<bool> {
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.dim(),
            });
        }
        let d = d as i64;
        Ok(self.ambient_dim > 0 && self.facets.iter().all(|f| f.slack(&x.0, d) > 0))
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

fn check_points(points: &[LatticePoint]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidInput("vertex list is empty".into()))?;
    let n = first.dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.dim(),
        });
    }
    Ok(n)
}

fn affine_rank(points: &[LatticePoint]) -> usize {
    let diffs: Vec<Vec<i64>> = points[1..].iter().map(|p| p.sub(&points[0]).0).collect();
    if diffs.is_empty() {
        0
    } else {
        int_rank(&diffs)
    }
}

/// Re-embed the convex hull of `vertices` so that its affine lattice span is
/// the whole ambient lattice, then compute its facets and drop non-vertices.
pub fn normalize_full_dim(vertices: &[LatticePoint]) -> Result<LatticePolytope> {
    let n = check_points(vertices)?;
    let pts: Vec<LatticePoint> = vertices.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();

    let (pts, embedding, dim) = if affine_rank(&pts) == n {
        (pts, None, n)
    } else {
        let origin = pts[0].clone();
        let diffs: Vec<Vec<i64>> = pts.iter().map(|p| p.sub(&origin).0).collect();
        let (rank, transform) = unimodular_column_reduce(&diffs, n)?;
        let embedding = Embedding {
            original_dim: n,
            origin: origin.0.clone(),
            transform,
            dim: rank,
        };
        let mapped = pts
            .iter()
            .map(|p| {
                embedding
                    .map_point(&p.0, 1)
                    .ok_or_else(|| Error::Consistency("vertex left its own affine span".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        (mapped, Some(embedding), rank)
    };

    let facets = convex_hull_facets(&pts)?;
    let mut verts: Vec<LatticePoint> = pts
        .into_iter()
        .filter(|p| is_vertex(p, &facets, dim))
        .collect();
    verts.sort();
    Ok(LatticePolytope {
        vertices: verts,
        facets,
        ambient_dim: dim,
        dim,
        embedding,
    })
}

fn is_vertex(p: &LatticePoint, facets: &[HalfSpace], dim: usize) -> bool {
    if dim == 0 {
        return true;
    }
    let tight: Vec<Vec<i64>> = facets
        .iter()
        .filter(|f| f.slack(&p.0, 1) == 0)
        .map(|f| f.normal.clone())
        .collect();
    tight.len() >= dim && int_rank(&tight) == dim
}

/// Irredundant H-representation of the convex hull of a full-dimensional
/// point set, by enumerating hyperplanes through `dim`-subsets of the points.
pub fn convex_hull_facets(points: &[LatticePoint]) -> Result<Vec<HalfSpace>> {
    let n = check_points(points)?;
    let pts: Vec<LatticePoint> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let rank = affine_rank(&pts);
    if rank < n {
        return Err(Error::Degenerate { dim: rank, ambient: n });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut facets = BTreeSet::new();
    for subset in combinations(pts.len(), n) {
        let base = &pts[subset[0]];
        let diffs: Vec<Vec<i64>> = subset[1..].iter().map(|&i| pts[i].sub(base).0).collect();
        let normal = cross_normal(&diffs, n)?;
        let g = gcd_slice(&normal);
        if g == 0 {
            continue;
        }
        let normal: Vec<i64> = normal.iter().map(|c| c / g).collect();
        let h = HalfSpace {
            offset: normal.iter().zip(&base.0).map(|(a, b)| a * b).sum(),
            normal,
        };
        let slacks: Vec<i64> = pts.iter().map(|p| h.slack(&p.0, 1)).collect();
        if slacks.iter().all(|&s| s >= 0) {
            facets.insert(h);
        } else if slacks.iter().all(|&s| s <= 0) {
            facets.insert(HalfSpace {
                normal: h.normal.iter().map(|c| -c).collect(),
                offset: -h.offset,
            });
        }
    }
    Ok(facets.into_iter().collect())
}
