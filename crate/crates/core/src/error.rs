use thiserror::Error;

/// Errors raised by the floe engine, the continuum solver and the binning layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FloeError {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("g(xi) evaluated at xi = {0} > 0, outside the contact branch")]
    RatioDomain(f64),

    #[error("floes {i} and {j} have coincident centers")]
    SingularConfiguration { i: usize, j: usize },

    #[error("integration diverged at t = {t}: floe {floe} has a non-finite state")]
    Diverged { floe: usize, t: f64 },

    #[error("packing failed: placed {placed} of {requested} floes")]
    PackingFailed { placed: usize, requested: usize },

    #[error("CFL violated: dt*|u|max/h = {courant:.4} > {limit}; try dt <= {suggested_dt:.3e}")]
    CflViolation { courant: f64, limit: f64, suggested_dt: f64 },

    #[error("drag must be disabled (alpha = beta = 0) for this check")]
    DragEnabled,

    #[error("floe population is not identical: {0}")]
    HeterogeneousPopulation(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("every cell is empty; discrepancy is undefined")]
    AllCellsEmpty,
}

pub type Result<T> = std::result::Result<T, FloeError>;

pub(crate) fn param_err(name: &'static str, reason: impl Into<String>) -> FloeError {
    FloeError::Parameter { name, reason: reason.into() }
}
