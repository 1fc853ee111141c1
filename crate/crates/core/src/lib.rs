//! Proportional committee selection and justified-representation checking
//! for approval elections.
//!
//! The crate has three layers:
//!
//! * committee rules ([`rules`]): PAV (exact, sequential, local-search),
//!   Monroe (exact and greedy), the method of equal shares, and sequential
//!   Phragmén, all with exact rational arithmetic and deterministic
//!   lexicographic tie-breaking;
//! * axiom checking ([`verify`], [`pricing`]): exact decision procedures
//!   with violation certificates for JR, PJR, EJR, FJR, FPJR, EJR+, PJR+,
//!   and core stability, plus priceability (exact rational LP) and perfect
//!   representation (max-flow);
//! * experiment support ([`reduce`], [`lab`]): balanced-biclique hardness
//!   instance compilers, random ballot cultures, implication matrices, and
//!   counterexample minimization.
//!
//! Everything is deterministic: identical inputs produce identical outputs,
//! byte for byte.

pub mod bitset;
pub mod combinatorics;
pub mod election;
pub mod error;
pub mod kernels;
pub mod lab;
pub mod pricing;
pub mod reduce;
pub mod rules;
pub mod verify;

pub use bitset::BitSet;
pub use election::{
    check_weak_cohesion, witness_candidate, Axiom, AxiomReport, Certificate,
    CohesionCertificate, Committee, CoreDeviation, Election,
};
pub use error::{Error, Result};
