//! Exact curvature and Ricci soliton verification for the solvable Lie
//! algebras `𝔟 ⋉ heis(2n+1)` carrying the one-loop deformed metrics.

pub mod cli;
pub mod coord;
pub mod error;
pub mod family;
pub mod hypersurface;
pub mod lie;
pub mod linalg;
pub mod metric;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{q, Field, FloatJet2, Jet2, OrderedField, Rational, Ring, Surd};
pub use lie::StructureConstants;
pub use linalg::{Matrix, Polynomial};
pub use family::FamilyParams;
pub use metric::{MetricLieAlgebra, SolitonKind, SolitonVerdict};

/// Exact rational matrix.
pub type QMatrix = Matrix<Rational>;
/// Rational polynomial.
pub type QPolynomial = Polynomial<Rational>;
/// Rational structure constants.
pub type QStructure = StructureConstants<Rational>;
/// Family parameters over the rationals.
pub type QFamilyParams = FamilyParams<Rational>;
