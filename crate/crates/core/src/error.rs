use thiserror::Error;

/// Errors raised by constructions whose preconditions fail.
///
/// Axiom checks (categories, functors, diagrams, representations) never
/// return these; they produce a [`crate::report::ValidationReport`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quiver has a loop or oriented cycle through `{0}`; its free category is infinite")]
    CyclicQuiver(String),
    #[error("relation is not antisymmetric: `{0}` and `{1}` are mutually comparable")]
    NotAPoset(String, String),
    #[error("composition table is not associative at ({0}, {1}, {2})")]
    NonAssociativeTable(String, String, String),
    #[error("missing or invalid identity for `{0}`")]
    MissingIdentity(String),
    #[error("composition table is not total: ({0}, {1}) is composable but has no entry")]
    IncompleteTable(String, String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("morphism set is empty")]
    EmptySet,
    #[error("category is not partially ordered (`{0}` and `{1}` are mutually reachable)")]
    NotPartiallyOrdered(String, String),
    #[error("morphism set is not a prime ideal")]
    NotPrime,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("modules or bimodules live over different algebras: {0}")]
    AlgebraMismatch(String),
    #[error("morphism is not an epimorphism")]
    NotEpi,
    #[error("morphism is not a monomorphism")]
    NotMono,
    #[error("diagram shape does not match the supplied data: {0}")]
    ShapeMismatch(String),
    #[error("functor does not match the diagram: {0}")]
    FunctorMismatch(String),
    #[error("morphisms `{0}` and `{1}` are not composable")]
    NotComposable(String, String),
    #[error("ring diagram is not a functor: {0}")]
    NotAFunctor(String),
    #[error("generator data is inconsistent with the relations: {0}")]
    InconsistentRelations(String),
    #[error("no generator data for morphism `{0}`")]
    MissingGenerator(String),
    #[error("representations live over different diagrams")]
    DiagramMismatch,
    #[error("composite of the sequence is not zero at vertex `{0}`")]
    NonZeroComposite(String),
    #[error("representation is zero")]
    ZeroRepresentation,
    #[error("index category is not direct")]
    NotDirect,
    #[error("index category is not inverse")]
    NotInverse,
    #[error("representation is not projective")]
    NotProjective,
    #[error("representation is not injective")]
    NotInjective,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("size bound exceeded: {0}")]
    SizeBoundExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
