use thiserror::Error;

/// Errors raised by the series, cocycle and geometry layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading y-coefficient is not an invertible Laurent monomial")]
    NonMonomialLeading,
    #[error("rational power leaves a non-integral x exponent or an unavailable root of the leading coefficient")]
    NonIntegralPower,
    #[error("substituted series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series is not invertible under composition (needs f(0)=0, f'(0) invertible)")]
    NotInvertible,
    #[error("cocycle is not in prenormal form: {0}")]
    NotPrenormal(String),
    #[error("cocycle is not in normal form: {0}")]
    NotNormal(String),
    #[error("chart extraction degenerates (h'(0) = 0)")]
    DegenerateExtraction,
    #[error("group action produced a cocycle outside the normal-form support: {0}")]
    NormalityBroken(String),
    #[error("theta must be nonzero")]
    ZeroTheta,
    #[error("equivalence search is inconclusive: {0}")]
    Inconclusive(String),
    #[error("truncation order {0} too low (need at least 5)")]
    TruncationTooLow(usize),
    #[error("germ has no quadratic term; tangency is degenerate")]
    DegenerateTangency,
    #[error("singular coordinate change")]
    SingularChange,
    #[error("unknown catalog tag `{0}`")]
    UnknownTag(String),
    #[error("invalid parameters for `{tag}`: {reason}")]
    BadParams { tag: String, reason: String },
    #[error("foliation is vertical at the basepoint")]
    VerticalAtBase,
    #[error("pencil is degenerate at the basepoint")]
    DegeneratePencil,
    #[error("foliations coincide at the basepoint")]
    CoincidentFoliations,
    #[error("3-web is degenerate at the basepoint")]
    DegenerateWeb,
    #[error("evaluator undefined at ({x}, {y})")]
    EvaluatorDomain { x: f64, y: f64 },
    #[error("shooting did not converge after {iterations} iterations (error {error:e})")]
    NoConvergence { iterations: usize, error: f64 },
    #[error("expression cannot be expanded exactly: {0}")]
    NotExact(String),
    #[error("mismatched truncation: {0}")]
    Truncation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
