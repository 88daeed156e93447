use thiserror::Error;

/// Errors surfaced by the algebra engine and the CLI. Each variant carries a
/// stable code string used in machine-readable reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("element has a nonzero constant term (not in the maximal ideal)")]
    ConstantTerm,
    #[error("operands live over different rings")]
    RingMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("the relation sum a_j A_j is nonzero in the ring")]
    RelationViolated,
    #[error("quotient is not of finite length")]
    NotFiniteColength,
    #[error("homology in degree {0} has infinite length")]
    NotFiniteLength(i64),
    #[error("image generator {0} does not lie in the kernel submodule")]
    ImageNotInKernel(usize),
    #[error("hilbert grid did not stabilize within caps ({0}, {1})")]
    StabilizationNotReached(u32, u32),
    #[error("summand {0} of the alternating sum violates the finiteness hypothesis")]
    TermUndefined(usize),
    #[error("no admissible coordinate transform found within the attempt budget")]
    TransformNotFound,
    #[error("no valid reduction found within the attempt budget")]
    ReductionNotFound,
    #[error("the singular locus is not isolated at the origin")]
    NotIsolated,
    #[error("a Jacobian entry is a unit; the setup hypotheses are violated")]
    UnitJacobianEntry,
    #[error("independent computation routes disagree: {0}")]
    Disagreement(String),
    #[error("io error: {0}")]
    Io(String),
}

impl AlgError {
    /// Stable code string for reports.
    pub fn code(&self) -> &'static str {
        match self {
            AlgError::Syntax { .. } => "SYNTAX_ERROR",
            AlgError::UnknownVariable(_) => "UNKNOWN_VARIABLE",
            AlgError::VariableCountMismatch(..) => "VARIABLE_COUNT_MISMATCH",
            AlgError::RankMismatch(..) => "RANK_MISMATCH",
            AlgError::ZeroInput => "ZERO_INPUT",
            AlgError::ConstantTerm => "CONSTANT_TERM_VIOLATION",
            AlgError::RingMismatch => "RING_MISMATCH",
            AlgError::InvalidInput(_) => "INVALID_INPUT",
            AlgError::RelationViolated => "RELATION_VIOLATED",
            AlgError::NotFiniteColength => "NOT_FINITE_COLENGTH",
            AlgError::NotFiniteLength(_) => "NOT_FINITE_LENGTH",
            AlgError::ImageNotInKernel(_) => "IMAGE_NOT_IN_KERNEL",
            AlgError::StabilizationNotReached(..) => "STABILIZATION_NOT_REACHED",
            AlgError::TermUndefined(_) => "TERM_UNDEFINED",
            AlgError::TransformNotFound => "TRANSFORM_NOT_FOUND",
            AlgError::ReductionNotFound => "REDUCTION_NOT_FOUND",
            AlgError::NotIsolated => "NOT_ISOLATED",
            AlgError::UnitJacobianEntry => "UNIT_JACOBIAN_ENTRY",
            AlgError::Disagreement(_) => "DISAGREEMENT",
            AlgError::Io(_) => "IO_ERROR",
        }
    }

    /// Process exit code: 2 for input/parse problems, 1 for computation errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            AlgError::Syntax { .. }
            | AlgError::UnknownVariable(_)
            | AlgError::VariableCountMismatch(..)
            | AlgError::RankMismatch(..)
            | AlgError::InvalidInput(_)
            | AlgError::Io(_) => 2,
            _ => 1,
        }
    }
}
