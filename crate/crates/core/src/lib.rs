//! Kernel of an oracle-provability workbench: second-order arithmetic syntax,
//! Gödel coding, ordinal notations, oracle theories with a finitary proof
//! checker, nested ω-rule certificates and bounded provability tables,
//! transfinite recursion operators, and countable coded ω-models.

pub mod builder;
pub mod certificate;
pub mod complete;
pub mod descriptor;
pub mod error;
pub mod eval;
pub mod formula;
pub mod godel;
pub mod ipc;
pub mod model;
pub mod ordinal;
pub mod proof;
pub mod synth;
pub mod theory;
pub mod tr;
pub mod term;

pub use descriptor::{OracleSet, SetDescriptor};
pub use error::*;
pub use eval::{evaluate, Caps, Env, ThreeValued};
pub use formula::{classify, ClassKind, Formula, FormulaClass};
pub use godel::{decode, decode_formula, encode_formula, encode_term, Decoded, GodelCode};
pub use ordinal::{
    check_wo, cnf_add, cnf_compare, lex_product, nat_left_mul, omega_left_mul, omega_power,
    CnfOrdinal, FiniteWellOrder, WellOrder, WoViolation,
};
pub use term::{pair_code, pair_u64, unpair_code, ProjSide, SetVar, Term, Var};
