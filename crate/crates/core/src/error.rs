use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("gate block is not unitary (max deviation {0:e})")]
    NonUnitary(f64),

    #[error("index map is not a bijection")]
    NotAPermutation,

    #[error("gate acts on qubit {0} more than once")]
    DuplicateQubit(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("projection onto a branch of probability {0:e}")]
    ImpossibleBranch(f64),

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{what} = {value} outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("transform dimension must be positive")]
    ZeroDimension,

    #[error("empty factor list")]
    EmptyFactors,

    #[error("unknown transform label `{0}`")]
    UnknownLabel(String),

    #[error("unknown count model `{0}`")]
    UnknownModel(String),

    #[error("label {0} is not an element of X")]
    LabelOutsideX(usize),

    #[error("state belongs to a different group action")]
    ActionMismatch,

    #[error("serial {serial} is not valid for N = {order}")]
    InvalidSerial { serial: usize, order: usize },

    #[error("sine transform input must be in 1..N, got {0}")]
    SineInputZero(usize),

    #[error("no u with u*{h} = N/8 (mod {order})")]
    NoDistinguisherShift { h: usize, order: usize },

    #[error("generating set is not symmetric: {0} present without its inverse")]
    AsymmetricGenerators(usize),

    #[error("generating set has {0} elements, more than the supported 16")]
    TooManyGenerators(usize),

    #[error("generator recovery collision for label pair ({0}, {1})")]
    RecoveryCollision(usize, usize),

    #[error("{qubits} qubits exceed the simulation budget of {limit}")]
    BudgetExceeded { qubits: usize, limit: usize },

    #[error(
        "serial estimate is ambiguous (score gap {gap:e} below {tolerance:e}); \
         retry with more precision bits"
    )]
    AmbiguousSerial { gap: f64, tolerance: f64 },

    #[error("state left the two-dimensional verification subspace (residual {0:e})")]
    UnreachableBranch(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
