use core::fmt;

/// Errors surfaced by construction and verification routines.
///
/// Verification *failures* are never errors: a check that runs to completion
/// and does not hold returns a report with `pass == false`. Errors signal
/// inputs outside a routine's contract or a numerical routine giving up.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix dimensions are inconsistent with the operation.
    DimMismatch { expected: usize, got: usize },
    /// Input matrix is not square / not Hermitian / contains non-finite entries.
    InvalidOperator(&'static str),
    /// Jacobi sweep or root iteration failed to converge.
    NonConvergence(&'static str),
    /// Exponent magnitude would overflow `exp`.
    Overflow { max_exponent: f64 },
    /// Block embedding with p + q = 0.
    InvalidArity,
    /// Scaling function has no defined value on this input.
    ScalingUndefined,
    /// A convex-mixture verification received a zero operand.
    ZeroOperandInMixture,
    /// State map requested for a map with p = 0 (no unitary blocks).
    NoUnitaryBlocks,
    /// Power-sum data is inconsistent with a real spectrum.
    NonRealRoot { max_imag: f64 },
    /// Duplication bookkeeping x*dim(spec) = y*dim(dual) failed.
    DimIncompatible,
    /// Entropic verification requires f == 1/(p+q).
    WrongScaling,
    /// Mixture weights do not form a probability distribution.
    InvalidDistribution,
    /// Similar-duality bound (i) requires strictly positive scalings.
    NegativeScaling,
    /// Subspace projector rank does not match the encoded subspace.
    RankMismatch { expected: usize, got: usize },
    /// State is not supported on the encoded subspace.
    UnencodedState { deviation: f64 },
    /// Lattice exceeds the exact-enumeration limit.
    TooLarge { sites: usize },
    /// Parameter outside the mathematical domain (e.g. K <= 0).
    DomainError(&'static str),
    /// Series expansion requested outside its declared regime.
    RegimeViolation { coupling: f64 },
    /// Gibbs-map input state has a (numerically) zero eigenvalue.
    SingularState,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidOperator(msg) => write!(f, "invalid operator: {msg}"),
            Error::NonConvergence(what) => write!(f, "{what} did not converge"),
            Error::Overflow { max_exponent } => {
                write!(f, "exponent {max_exponent} exceeds overflow threshold")
            }
            Error::InvalidArity => write!(f, "block embedding requires p + q >= 1"),
            Error::ScalingUndefined => write!(f, "scaling function undefined on this input"),
            Error::ZeroOperandInMixture => {
                write!(f, "zero operand in mixture: scaling denominator undefined")
            }
            Error::NoUnitaryBlocks => {
                write!(f, "no compatible state map exists for p = 0")
            }
            Error::NonRealRoot { max_imag } => {
                write!(f, "root certification failed: |Im| = {max_imag}")
            }
            Error::DimIncompatible => write!(f, "incompatible spectrum duplication arities"),
            Error::WrongScaling => write!(f, "entropic map requires f = 1/(p+q)"),
            Error::InvalidDistribution => write!(f, "weights are not a probability distribution"),
            Error::NegativeScaling => write!(f, "bound requires positive scaling values"),
            Error::RankMismatch { expected, got } => {
                write!(f, "projector rank mismatch: expected {expected}, got {got}")
            }
            Error::UnencodedState { deviation } => {
                write!(f, "state not supported on encoded subspace (deviation {deviation})")
            }
            Error::TooLarge { sites } => {
                write!(f, "lattice with {sites} sites exceeds enumeration limit of 25")
            }
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::RegimeViolation { coupling } => {
                write!(f, "coupling K = {coupling} outside the declared expansion regime")
            }
            Error::SingularState => write!(f, "Gibbs state has a zero eigenvalue"),
        }
    }
}
