//! Exact computations for lattice polytopes and the projective toric
//! embeddings they define: Ehrhart polynomials, normality, toric sheaf
//! cohomology, graded Betti numbers of the section ring via Koszul homology,
//! and the syzygy property `(N_p)`.
//!
//! The linear algebra is generic over [`scalar::Scalar`]; the aliases below
//! fix the concrete scalars used throughout.

pub mod cohomology;
pub mod combinatorics;
pub mod corpus;
pub mod criteria;
pub mod ehrhart;
pub mod error;
pub mod koszul;
pub mod lattice;
pub mod linalg;
pub mod polynomial;
pub mod scalar;
pub mod semigroup;

pub use error::{Error, Result};
pub use lattice::{HalfSpace, LatticePoint, LatticePolytope, PolytopeInput};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Prime field used by the modular rank fast path.
pub type ModPrime = scalar::Fp<{ scalar::MERSENNE_61 }>;
/// Polynomials with exact rational coefficients.
pub type RationalPolynomial = polynomial::Polynomial<Rational>;

/// Version tag folded into cache keys.
pub const ENGINE_VERSION: &str = concat!("toricsyz-", env!("CARGO_PKG_VERSION"));
