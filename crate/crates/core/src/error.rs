use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// The reason a pair `(k, q)` fails to be a short exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExactnessFailure {
    #[error("codomain of k is not the domain of q")]
    NotComposable,
    #[error("k is not a homomorphism")]
    KernelMapNotHomomorphism,
    #[error("q is not a homomorphism")]
    QuotientMapNotHomomorphism,
    #[error("k is not injective")]
    NotInjective,
    #[error("q is not surjective")]
    NotSurjective,
    #[error("the image of k is not the kernel of q")]
    NotKernel,
    #[error("q is not the cokernel of k")]
    NotCokernel,
    #[error("the characterisations of exactness disagree (ker/coker: {first}, normal mono: {second}, normal epi: {third})")]
    Inconsistent {
        first: bool,
        second: bool,
        third: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("term parse error: {0}")]
    Parse(String),
    #[error("operation `{op}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("variable {0} is not bound by the assignment")]
    UnboundVariable(usize),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("equation {equation} fails at assignment {assignment:?}: {lhs} != {rhs}")]
    EquationViolated {
        equation: usize,
        assignment: Vec<usize>,
        lhs: usize,
        rhs: usize,
    },
    #[error("carrier of size {size} exceeds the limit {limit}")]
    CarrierTooLarge { size: usize, limit: usize },
    #[error("algebras belong to different varieties")]
    VarietyMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("partition is not compatible with the operations")]
    IncompatiblePartition,
    #[error("variety `{0}` carries no semi-abelian witness")]
    MissingWitness(String),
    #[error("not exact: {0}")]
    NotExact(ExactnessFailure),
    #[error("witness violation: {0}")]
    WitnessViolation(String),
    #[error("limits exceeded: {0}")]
    LimitsExceeded(String),
    #[error("unsupported variety: {0}")]
    UnsupportedVariety(String),
    #[error("end objects do not match")]
    EndpointMismatch,
    #[error("map f_{0} has no normal image factorisation")]
    NotNormal(usize),
    #[error("sequence is not exact at f_{0}")]
    NotExactAt(usize),
    #[error("no lift exists: {0}")]
    NoLift(String),
    #[error("extension is not Schreier (fiber over {fiber} has no transversal)")]
    NotSchreier { fiber: usize },
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("comparison map into the pullback is not surjective")]
    ComparisonNotSurjective,
    #[error("unknown name: {0}")]
    UnknownName(String),
}

impl From<ExactnessFailure> for Error {
    fn from(f: ExactnessFailure) -> Self {
        Error::NotExact(f)
    }
}
