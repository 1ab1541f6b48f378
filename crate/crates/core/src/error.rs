use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    /// Two operator expressions built for different ħ substitutions were
    /// combined; that silently mixes unit conventions, so it is rejected.
    #[error("mismatched hbar values: {left} vs {right} (inconsistent unit conventions)")]
    HbarMismatch { left: String, right: String },

    #[error("hbar = 0 has no Moyal bracket; use the Poisson bracket instead")]
    HbarZero,

    #[error("unknown generator name `{0}`")]
    UnknownGenerator(String),
}
