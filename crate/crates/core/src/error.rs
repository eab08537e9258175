use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 65536")]
    BadModulus(u32),
    #[error("residue {value} is out of range for F_{prime}")]
    ResidueOutOfRange { value: u64, prime: u32 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("spectrum does not split over the prime field ({found} of {dim} dimensions have eigenvalues in F_ℓ)")]
    NonSplitSpectrum { found: usize, dim: usize },
    #[error("invalid bilinear form: {0}")]
    BadForm(String),
    #[error("invariant-form space has dimension {0}, expected exactly 1")]
    NoUniquePairing(usize),
    #[error("matrix does not preserve the form")]
    NotAnIsometry,
    #[error("reflection factorisation did not terminate within {0} reflections")]
    InternalFactorizationFailure(usize),
    #[error("subgroup_class requires derived-subgroup containment to be established first")]
    PrecedenceViolation,
    #[error("orbit storage exceeded the limit of {0} vectors")]
    ResourceLimit(usize),
    #[error("element order exceeds {0}")]
    OrderOverflow(u64),
    #[error("irreducibility test inconclusive after {0} random trials")]
    Inconclusive(usize),
    #[error("tuple is not in the convolution category: {0}")]
    NotInCategory(String),
    #[error("quotient has dimension {got}, rank formula predicts {predicted}")]
    DegenerateQuotient { got: usize, predicted: usize },
    #[error("ordered product of local monodromies is not the identity")]
    ProductNotIdentity,
    #[error("bad puncture locus: {0}")]
    BadLocus(String),
    #[error("dimension formula is negative ({0})")]
    NegativeDimension(i64),
    #[error("{0}")]
    Invalid(String),
}
