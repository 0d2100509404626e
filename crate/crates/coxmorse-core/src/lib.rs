//! Exact combinatorial topology of `Perm_k(W)`, the subcomplex of the
//! `W`-permutahedron whose faces are parabolic cosets containing no
//! irreducible rank-(k-1) standard coset.
//!
//! The crate is organized around seven pieces:
//!
//! * [`diagram`] / [`coxeter`] — finite Coxeter systems with an ordered
//!   generator set, exact root permutation tables, element enumeration,
//!   lengths, descents and parabolic machinery.
//! * [`perm_complex`] — the regular CW face poset of `Perm_k(W)`, f-vectors
//!   (with and without group enumeration) and cubical incidence signs for
//!   `k = 3`.
//! * [`ind_complex`] — generalized independence complexes `Ind_k(G)`,
//!   lexicographic shellings of forests, restriction maps and the matchings
//!   they induce.
//! * [`morse`] — the coset matching algorithm on `Perm_k(W)`, its fiber-wise
//!   reconstruction, acyclicity audits, critical-cell classification, the
//!   type-A set-composition form, and alternating-path boundary sums for
//!   `k = 3`.
//! * [`homology`] — sparse integer Smith normal form, chain complexes, the
//!   order-complex (barycentric) oracle, and Morse homology.
//! * [`betti`] — closed-form and enumeration-free Betti computations plus
//!   the golden table of exceptional-group values.

pub mod betti;
pub mod coxeter;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod ind_complex;
pub mod morse;
pub mod perm_complex;
pub mod phi;

pub use coxeter::{CoxeterSystem, GroupElement};
pub use diagram::{CoxeterDiagram, GenSet};
pub use error::Error;

/// Default cap on group enumeration, overridable via `COXMORSE_BUDGET`
/// or explicit budget arguments.
pub const DEFAULT_BUDGET: u64 = 3_000_000;

/// Resolve the enumeration budget: explicit value, else `COXMORSE_BUDGET`,
/// else [`DEFAULT_BUDGET`].
pub fn resolve_budget(explicit: Option<u64>) -> u64 {
    if let Some(b) = explicit {
        return b;
    }
    std::env::var("COXMORSE_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}
