use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // finite group construction
    #[error("multiplication table is not square over {0} labels")]
    MalformedTable(usize),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("table is not closed: entry ({0}, {1}) = {2} is out of range")]
    NotClosed(usize, usize, usize),
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("element subset is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("map is not a group homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("unsupported group for this operation: {0}")]
    UnsupportedGroup(String),

    // arithmetic
    #[error("undefined arithmetic with infinity: {0}")]
    Undefined(String),

    // stacks and functions
    #[error("duplicate stratum id {0:?}")]
    DuplicateStratum(String),
    #[error("unknown stratum id {0:?}")]
    UnknownStratum(String),
    #[error("operands live on different stacks")]
    StackMismatch,
    #[error("function is only locally constructible (nonzero default on a stack with remainder)")]
    NotConstructible,
    #[error("weight is undefined at stratum {stratum:?}: {reason}")]
    UndefinedWeight { stratum: String, reason: String },

    // morphisms
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("kernel Euler characteristic vanishes at stratum {0:?}")]
    ZeroKernelChi(String),
    #[error("insufficient stabilizer data to compose: {0}")]
    InsufficientStabData(String),
    #[error("morphism is not of finite type")]
    NotFiniteType,
    #[error("morphism is not representable at stratum {0:?}")]
    NotRepresentable(String),
    #[error("stabilizer at stratum {0:?} is not a finite group")]
    NonFiniteStabilizer(String),
    #[error("fiber products of stacks with remainders are not supported")]
    RemainderUnsupported,

    // group actions
    #[error("invalid group action: {0}")]
    InvalidAction(String),

    // descriptors
    #[error("parse error: {0}")]
    Parse(String),
}
