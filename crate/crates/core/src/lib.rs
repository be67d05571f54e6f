//! Spectral extremal problems on uniform supertrees.
//!
//! Hypergraph primitives, named families of supertrees, exact matching
//! polynomials, spectral radius by two independent methods, an exact
//! comparator for the matching-polynomial quasi-order, enumeration of
//! supertrees up to isomorphism and verification drivers.

pub mod canonical;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod hypergraph;
pub mod io;
pub mod matching;
pub mod ordering;
pub mod poly;
pub mod roots;
pub mod spectral;
pub mod verify;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use canonical::{canonical_code, CanonicalCode};
pub use enumerate::{enumerate_supertrees, enumerate_with_diameter};
pub use error::{Error, Result};
pub use families::{Built, FamilySpec};
pub use hypergraph::{coalesce, power, Hypergraph, Structure, VertexRole};
pub use io::{ingest, parse_hypergraph, Document};
pub use matching::{matching_polynomial, MatchingCache, MatchingPolynomial};
pub use ordering::{compare, OrderingVerdict, Relation};
pub use poly::{Poly, SturmChain};
pub use spectral::{rho_from_matching_poly, rho_power_iteration, Method, SpectralEstimate};

/// Integer polynomial, coefficients low to high.
pub type IntPoly = Poly<BigInt>;
/// Exact rational polynomial.
pub type RatPoly = Poly<BigRational>;
/// Spectral estimate in double precision.
pub type SpectralResult = SpectralEstimate<f64>;
