//! Finite covers of groups by cosets.
//!
//! The library represents two kinds of cover systems: residue-class systems
//! over the integers ([`zsystems`]) and coset systems in explicit finite
//! groups ([`groups`]). Both reduce to a common finite carrier
//! ([`analysis::CoverInstance`]) on which the cover predicates run: covering
//! multiplicity, m-cover, exact m-cover, minimal m-cover, regularity and
//! partition. On top of that sit structured checkers for a catalog of
//! inequalities and statements about such covers ([`verifiers`]), and
//! exhaustive instance enumeration with conjecture hunts ([`search`]).
//!
//! Enumeration and batch verification are data-parallel; the `parallel`
//! feature (on by default) backs them with rayon, and [`exec::ExecMode`]
//! selects the sequential path at runtime.

pub mod analysis;
pub mod corpus;
pub mod exec;
pub mod groups;
pub mod mycielski;
pub mod search;
pub mod verifiers;
pub mod zsystems;

pub use analysis::{CoverInstance, IndexSet, PropertyReport};
pub use groups::{Coset, CosetSystem, FiniteGroup, Subgroup};
pub use verifiers::{Outcome, Verdict};
pub use zsystems::{ResidueClass, ZSystem};
