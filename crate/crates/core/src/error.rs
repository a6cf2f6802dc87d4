use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value has a pole at A = {0}")]
    PoleAtA(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("inadmissible tree: {0}")]
    InadmissibleTree(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad position: {0}")]
    BadPosition(String),
    #[error("crossing at the addressed vertex is not classical")]
    NotClassicalCrossing,
    #[error("crossing at the addressed vertex is not virtual")]
    NotVirtualCrossing,
    #[error("fragment does not match the rule pattern: {0}")]
    PatternMismatch(String),
    #[error("singular basis: {0}")]
    SingularBasis(String),
    #[error("basis deficiency: {0}")]
    BasisDeficiency(String),
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::PoleAtA(_) => "pole_at_a",
            Error::BoundaryMismatch(_) => "boundary_mismatch",
            Error::InadmissibleTree(_) => "inadmissible_tree",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::BadPosition(_) => "bad_position",
            Error::NotClassicalCrossing => "not_classical_crossing",
            Error::NotVirtualCrossing => "not_virtual_crossing",
            Error::PatternMismatch(_) => "pattern_mismatch",
            Error::SingularBasis(_) => "singular_basis",
            Error::BasisDeficiency(_) => "basis_deficiency",
            Error::Syntax { .. } => "syntax",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
