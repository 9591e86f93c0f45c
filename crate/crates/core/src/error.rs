use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed rational `{0}`")]
    Rational(String),
    #[error("malformed scalar `{0}`, expected `c0 + c1*w + c2*w^2 + c3*w^3`")]
    Scalar(String),
    #[error("malformed monomial `{0}`")]
    Monomial(String),
    #[error("malformed document: {0}")]
    Document(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("product of distinct odd symbols `{0}` and `{1}` is outside the single-odd-generator regime")]
    DistinctOddSymbols(String, String),
    #[error("symbol `{0}` is declared with conflicting parities")]
    ParityConflict(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not parity-homogeneous")]
    MixedParity,
    #[error("dimension mismatch: l = {0} vs l = {1}")]
    DimensionMismatch(usize, usize),
    #[error("malformed matrix: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("bracket [{0}, {1}] leaves the span of the basis")]
    SpanViolation(String, String),
    #[error("invariant form is degenerate")]
    DegenerateForm,
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UeaError {
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("element is not in PBW normal order")]
    NotNormalOrdered,
    #[error("term `{0}` does not preserve the highest-weight line")]
    OffDiagonal(String),
    #[error("realization of the element is not a scalar matrix")]
    NotScalarMatrix,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("zero simple root")]
    ZeroRoot,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RadialError {
    #[error("a non-real phase survived in coefficient {0}")]
    PhaseResidue(String),
    #[error("input element is not PBW normal ordered")]
    UnorderedInput,
    #[error("word `{0}` is outside the supported radial-part calculus")]
    UnsupportedWord(String),
    #[error("coupling symbols `{0}` did not contract into g^2")]
    UncontractedCoupling(String),
    #[error("radial part does not have Toda form: {0}")]
    NotTodaForm(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Uea(#[from] UeaError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TodaError {
    #[error("coupling for simple root {0} is not positive")]
    NonPositiveCoupling(usize),
    #[error("spec has {found} couplings, root system needs {expected}")]
    CouplingCount { expected: usize, found: usize },
    #[error("shift is not integral on root {0}; transported coupling is not polynomial")]
    NonIntegralTransport(String),
    #[error("logarithm of `{0}` is not defined")]
    NonPositiveValue(String),
    #[error("operation requires a BC-type spec")]
    NotBcType,
    #[error("simple roots are linearly dependent")]
    SingularSystem,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("grid needs at least 16 points and q_min < q_max")]
    BadGrid,
    #[error("Wronskian at the reference point is degenerate ({0:e})")]
    DegenerateWronskian(f64),
    #[error("operator coefficient `{0}` is not numeric")]
    NonNumeric(String),
    #[error("operator is not of Laplacian-plus-potential form: {0}")]
    NotSchrodinger(String),
    #[error("sample length {0} does not match grid size {1}")]
    LengthMismatch(usize, usize),
    #[error("couplings must be non-negative")]
    NegativeCoupling,
}
