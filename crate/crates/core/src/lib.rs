//! Ranking-based semantics for assumption-based argumentation over classical
//! propositional logic.
//!
//! The pipeline goes from formulas and truth-table entailment, through
//! attack diagrams over sets of assumptions and the categoriser, to
//! culpability measures and executable postulate checks. A second
//! formalism builds frameworks of support/conclusion arguments under a
//! choice of attack rules.

pub mod abf;
pub mod af;
pub mod culpability;
pub mod entailment;
pub mod error;
pub mod formula;
pub mod gradual;
pub mod kb;
pub mod kbfile;
pub mod postulates;
pub mod sequent;

pub use abf::{build_attack_diagram, validate_abf, Abf, AttackDiagram, NodePolicy, Subset};
pub use af::{AbstractAF, NodeLabel};
pub use entailment::{entails, equiv_under, is_consistent, Oracle, PremiseSet};
pub use error::{Error, Result};
pub use formula::{parse_formula, Formula};
pub use kbfile::{parse_kb, KbFileError};
pub use gradual::{categoriser, group_compare, Ranking, Semantics};
