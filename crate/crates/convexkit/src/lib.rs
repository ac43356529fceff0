//! Exact-arithmetic toolkit for abstract convexity in finite dimensions.
//!
//! Everything is computed over arbitrary-precision rationals; no floating
//! point enters any decision. The crate is organized around a small exact
//! linear-programming kernel ([`lp`]) and polyhedral primitives ([`cone`],
//! [`polytope`]) on top of which the domain operations are built:
//!
//! * [`generation`] — support sets of affine minorants, upper envelopes,
//!   H-convexity tests, Young–Fenchel conjugates and biconjugates, support
//!   functions of polytopes.
//! * [`separation`] — conic correspondences, nonoblateness and general
//!   position of cone pairs, polar cones, polar decomposition of
//!   intersections, and the sandwich theorem for sublinear functions.
//! * [`calculus`] — canonical sublinear operators of finite operator
//!   families, factorization through the embedding map, support sets and
//!   support hulls, and the subdifferential of compositions.
//! * [`approximation`] — ε-subdifferentials, two-level lexicographic scalars
//!   with infinitesimal parts, infinitesimal subdifferentials, infimal
//!   convolution, and the exact chain rule for convolutions.
//! * [`suite`] — seeded, deterministic invariant suites over randomized
//!   corpora, shared by the CLI `check` subcommand and the acceptance tests.
//!
//! Batch suites run data-parallel when the `parallel` feature (default) is
//! enabled; results are merged by instance index so output never depends on
//! thread scheduling.

pub mod affine;
pub mod approximation;
pub mod calculus;
pub mod cone;
pub mod error;
pub mod exec;
pub mod func;
pub mod generation;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod project;
pub mod scalar;
pub mod separation;
pub mod suite;

pub use affine::AffineFunctional;
pub use cone::PolyCone;
pub use polytope::Polytope;
pub use error::Error;
pub use func::{Function, LexPiece, LexPolyFunc, PolyFunc, SampledFunc};
pub use scalar::{ExtScalar, LexScalar, Rational};
