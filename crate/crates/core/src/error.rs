use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("did not converge: {0}")]
    NoConvergence(String),

    #[error("primitive {index} is linearly dependent on its predecessors (pivot {pivot:.3e})")]
    LinearDependence { index: usize, pivot: f64 },

    #[error("ambiguous doublet subspace: singular value {value:.3e} lies in the gap")]
    AmbiguousRank { value: f64 },

    #[error("xi = {xi:.6} outside the bound's domain (needs xi < {limit:.6})")]
    OutOfDomain { xi: f64, limit: f64 },

    #[error("analytic {what} = {analytic:.15e} disagrees with quadrature {numeric:.15e}")]
    QuadratureMismatch { what: String, analytic: f64, numeric: f64 },

    #[error("unrecognized saturation set for rank {rank}: {detail}")]
    UnknownCombination { rank: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
