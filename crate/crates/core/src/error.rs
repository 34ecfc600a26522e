//! Error types shared across the kernel.

use thiserror::Error;

use crate::term::{SetVar, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound first-order variable {0}")]
    UnboundVar(Var),
    #[error("unbound set variable {0}")]
    UnboundSetVar(SetVar),
    #[error("no oracle bound in environment")]
    UnboundOracle,
    #[error("term magnitude guard exceeded ({bits} bits)")]
    MagnitudeExceeded { bits: u64 },
    #[error("open term has no value")]
    OpenTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("negation normal form does not support second-order quantifiers")]
    SecondOrderUnsupported,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GodelError {
    #[error("code {0} does not decode to a kernel object")]
    OutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("empty index set for lexicographic product")]
    EmptyIndexSet,
    #[error("operation requires a finite well-order")]
    NotFinite,
    #[error("operation requires a notation order with omega-multiples: {0}")]
    UnsupportedOrder(String),
    #[error("element {0} is not in the order's carrier")]
    NotAnElement(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("payload class {found} not admitted by {schema} (requires {required})")]
    PayloadOutsideClass {
        schema: String,
        required: String,
        found: String,
    },
    #[error("oracle symbol occurs in payload for an oracle-free class")]
    OracleInPayload,
    #[error("set variable {0} occurs free in comprehension payload")]
    SetVarFreeInPayload(SetVar),
    #[error("transfinite induction requires a finite well-order here")]
    TiNeedsFiniteOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("line {line}: dangling reference to line {referenced}")]
    DanglingReference { line: usize, referenced: usize },
    #[error("line {line}: {reason}")]
    BadJustification { line: usize, reason: String },
    #[error("empty proof")]
    Empty,
    #[error("conclusion mismatch: last line differs from the stated conclusion")]
    ConclusionMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("cannot witness: {0}")]
    CannotWitness(String),
    #[error("formula class too high for requested level: {0}")]
    ClassTooHigh(String),
    #[error("free set variables must be oracle-substituted before synthesis: {0}")]
    FreeSetVar(SetVar),
    #[error("evaluation failed during synthesis: {0}")]
    Eval(#[from] EvalError),
    #[error("witness descriptor required but not supplied")]
    MissingWitness,
    #[error("level budget exhausted: needed {needed}, allowed {allowed}")]
    LevelBudget { needed: u64, allowed: u64 },
    #[error("unsupported shape: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("level witness {0} is not in the order's carrier")]
    LevelNotInCarrier(u64),
    #[error("check level {0} is not in the order's carrier")]
    CheckLevelNotInCarrier(u64),
    #[error("malformed template: {0}")]
    MalformedTemplate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaturateError {
    #[error("relation is not a well-order; refusing to saturate")]
    NotWellOrder,
    #[error("order has no finite carrier enumeration")]
    InfiniteCarrier,
    #[error("saturation budget of {0} closure additions exhausted")]
    BudgetExhausted(u64),
    #[error("seed certificate for level {level} rejected: {reason}")]
    SeedRejected { level: u64, reason: String },
    #[error("seed conclusion outside the table universe")]
    SeedOutsideUniverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrError {
    #[error("relation is not a well-order")]
    NotWellOrder,
    #[error("indeterminate stage evaluation at stage {stage}, element {element}")]
    Indeterminate { stage: u64, element: u64 },
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("stage sets have mismatched cutoffs ({0} vs {1})")]
    CutoffMismatch(u64, u64),
    #[error("stage sets live over different orders")]
    OrderMismatch,
    #[error("pair universe of {bits} bits exceeds the enumeration limit of {limit}")]
    UniverseTooLarge { bits: u64, limit: u64 },
    #[error("table universe does not cover required formula codes: {missing} missing")]
    Coverage { missing: usize },
    #[error("order does not support the required level arithmetic")]
    UnsupportedOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("sentence has free first-order variables")]
    OpenSentence,
    #[error("set constant C{0} is not listed in the model")]
    UnknownSetConstant(u32),
    #[error("oracle mismatch: model M0 differs from the table's oracle descriptor")]
    OracleMismatch,
    #[error("satisfaction table scope is not closed under subformulas: {0}")]
    ScopeNotClosed(String),
    #[error("indeterminate definition at index {index}, element {element}")]
    IndeterminateDefinition { index: usize, element: u64 },
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("audit does not support composite oracle descriptors")]
    CompositeOracle,
}
