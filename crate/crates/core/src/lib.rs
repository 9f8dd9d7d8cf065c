//! Exact cohomology, mutations, dual bases and regularity for the helix of
//! the standard geometric collection on projective spaces `P^n` and odd
//! quadrics `Q_n`.
//!
//! Sheaves are finite direct sums of twisted atoms from a catalog that is
//! closed under duals and under the mutations occurring in the helix:
//! line bundles, exterior powers of the (co)tangent bundle, the spinor bundle
//! `Sigma` and Kapranov's bundles `psi_j`, `psi_j^*`. All arithmetic is exact;
//! a rank the long-exact-sequence chase cannot determine is reported as an
//! interval and never guessed.
//!
//! ```
//! use helixlab_core::{parse_sheaf_expr, Engine, RegValue, Variety};
//!
//! let q3: Variety = "Q3".parse().unwrap();
//! let engine = Engine::new(q3);
//! let sigma = parse_sheaf_expr("Sigma", q3).unwrap();
//! let h = engine.cohomology_table(&sigma).unwrap();
//! assert_eq!(h.ranks[0].to_string(), "4");
//!
//! let o1 = parse_sheaf_expr("O(1)", q3).unwrap();
//! assert_eq!(engine.reg_sigma(&o1, None).unwrap().value, RegValue::Exact(-1));
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod arith;
pub mod cohomology;
pub mod error;
pub mod k0;
pub mod mutation;
pub mod parse;
pub mod regularity;
pub mod sheaf;
pub mod variety;

pub use arith::binom;
pub use cohomology::{bott, CohomTable, Engine, ExtTable, RankValue};
pub use error::Error;
pub use k0::{k0_class, k0_left_mutation, k0_right_mutation, K0Vector};
pub use mutation::{
    helix_element, standard_collection, thread, Collection, DualBasis, ExceptionalityReport, ExtIssue, Side,
    Verdict,
};
pub use parse::parse_sheaf_expr;
pub use regularity::{
    default_max_width, E1Entry, E1Grid, MRegularity, QuadricComparison, RegValue, RegularityReport,
    ResolutionTerm, Witness,
};
pub use sheaf::{canonical_bundle, Atom, SheafExpr, Term, MAX_TWIST};
pub use variety::{Variety, VarietyKind, MAX_DIM};
