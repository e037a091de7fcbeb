use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix failed the density-matrix checks.
    #[error("non-physical state: {0}")]
    NonPhysical(String),

    #[error("degenerate dispersion: delay map undefined (D_G * L = 0)")]
    DegenerateDispersion,

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    #[error("grid must be strictly increasing: {0}")]
    UnorderedGrid(&'static str),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("count record has zero total")]
    ZeroCounts,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} is outside [0, 1]")))
    }
}
