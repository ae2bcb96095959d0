//! Exact computation with nearly convex sets, functions and set-valued
//! mappings modeled as punctured polyhedra.
//!
//! All algorithms are generic over a [`Field`] of exact scalars. The aliases
//! at the crate root fix the scalar to arbitrary-precision rationals.

pub mod error;
pub mod function;
pub mod gendiff;
pub mod linalg;
pub mod lp;
pub mod ncset;
pub mod polyhedron;
pub mod rational;
pub mod scalar;
pub mod svmap;
pub mod text;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use lp::{lp_solve, LpProblem, LpResult, Sense};
pub use scalar::Field;

/// Arbitrary-precision rational in lowest terms.
pub type Rat = rational::Rational;
pub type RVec = Vec<Rat>;
pub type RMat = Matrix<Rat>;

pub type Polyhedron = polyhedron::Polyhedron<Rat>;
pub type HRep = polyhedron::HRep<Rat>;
pub type GenRep = polyhedron::GenRep<Rat>;
pub type PuncturedPolyhedron = ncset::PuncturedPolyhedron<Rat>;
pub use ncset::Fidelity;
pub type SvMap = svmap::SvMap<Rat>;
pub type NcFunction = function::NcFunction<Rat>;
pub type Piece = function::Piece<Rat>;

/// Parses a rational written as `p/q` or `p`.
pub fn rat(s: &str) -> Rat {
    Rat::parse_rational(s).unwrap_or_else(|| panic!("not a rational: {s}"))
}

/// Parses a whitespace-separated vector of rationals.
pub fn rvec(s: &str) -> RVec {
    s.split_whitespace().map(rat).collect()
}
