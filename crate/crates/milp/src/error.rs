use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("variable `{name}` has lower bound {lower} above upper bound {upper}")]
    InvertedBounds {
        name: String,
        lower: f64,
        upper: f64,
    },
    #[error("binary variable `{name}` has bounds [{lower}, {upper}] outside [0, 1]")]
    BinaryBounds {
        name: String,
        lower: f64,
        upper: f64,
    },
    #[error("variable `{name}` has a NaN or unusable infinite bound")]
    NonFiniteBound { name: String },
    #[error("unknown variable id {0}")]
    UnknownVariable(usize),
    #[error("non-finite coefficient in `{tag}`{}", var.as_ref().map(|v| format!(" on `{v}`")).unwrap_or_default())]
    NonFiniteCoefficient { tag: String, var: Option<String> },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("LP engine failure: {0}")]
    Engine(String),
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("I/O failure while writing model: {0}")]
    Io(#[from] std::io::Error),
}
