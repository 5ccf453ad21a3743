//! Finite additively idempotent semirings (ai-semirings).
//!
//! The crate works with semirings given by explicit Cayley tables and with
//! finite join-semilattices given by cover relations. On top of those it
//! offers:
//!
//! * axiom validation and the natural order `a <= b <=> a + b = b`
//!   ([`algebra`]),
//! * endomorphism semirings `End(A)` of semilattices ([`semilattice`]),
//! * a polynomial/identity language with exhaustive and sampled
//!   satisfaction checks ([`terms`]),
//! * decision procedures for minimal, maximal and isolated words
//!   ([`zimin`]),
//! * the `v_{n,m}^{(h)}` word family and the `v = v^2` image test
//!   ([`vwords`]),
//! * named constructions such as `B21`, `A21`, `A21bar`, rook semirings and
//!   the maps between them ([`catalog`]),
//! * subsemiring closure, homomorphism/isomorphism search and subgroup
//!   analysis ([`structure`]),
//! * the classification driver and the reproduction report
//!   ([`classify`], [`repro`]).
//!
//! Exhaustive loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and plain iterators otherwise. Results are
//! identical either way.

pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod io;
pub mod par;
pub mod repro;
pub mod semilattice;
pub mod structure;
pub mod terms;
pub mod vwords;
pub mod zimin;

pub use algebra::{ElementId, FiniteAiSemiring, NaturalOrder, SemiringTables, ValidationReport};
pub use error::{Error, Result};
pub use semilattice::{Endomorphism, Semilattice};
