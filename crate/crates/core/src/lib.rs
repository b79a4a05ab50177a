//! Khovanov homology ranks of oriented link diagrams, and the two-variable
//! Poincaré polynomials `v_n(K)(t, x)` obtained from the Khovanov polynomial
//! by the substitution `q = x·e^y`.
//!
//! The pipeline is
//!
//! ```text
//! PD code ─▶ Diagram ─▶ enhanced states ─▶ chain complex ─▶ BigradedRanks
//!                                                            │
//!                       KhPoly ◀─────────────────────────────┘
//!                         ├─▶ JonesPoly (t = -1)  ◀─▶ Kauffman bracket oracle
//!                         └─▶ VnPoly (v_n, v_{n,j}) ─▶ Vassiliev values
//! ```
//!
//! All arithmetic is exact: integers for ranks and Jones coefficients,
//! big rationals for everything produced by the `y`-expansion.

pub mod corpus;
pub mod diagram;
pub mod expansion;
pub mod homology;
pub mod laurent;
pub mod matrix;
pub mod polynomials;
pub mod series;
pub mod statecube;
pub mod text;

pub use corpus::{Corpus, CorpusEntry, CorpusError, VerifyReport};
pub use diagram::{Crossing, Diagram, DiagramError, Sign};
pub use expansion::{BirmanLinSeries, VnPoly};
pub use homology::{BigradedRanks, HomologyError, Ring};
pub use matrix::IntMatrix;
pub use polynomials::{BracketPoly, JonesError, JonesPoly, KhPoly, NormalizedJones};
pub use statecube::{CircleSet, EnhancedState, State};

/// Exact rational numbers with big-integer numerator and denominator.
pub type Rational = num_rational::BigRational;
