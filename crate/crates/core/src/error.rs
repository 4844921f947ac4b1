use crate::basis::BasisIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("bessel zero j({n},{m}) did not converge; last iterate {last}")]
    ZeroNonconvergence { n: usize, m: usize, last: f64 },

    #[error("non-finite field value at node ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    #[error("ill-conditioned {{0,1}} block system at M = {m} (condition estimate {cond:e})")]
    IllConditioned { m: usize, cond: f64 },

    #[error("degenerate pivot {index} during Gram-Schmidt (norm^2 = {norm2:e})")]
    Degenerate { index: usize, norm2: f64 },

    #[error("growth guard exceeded: j*t/K > {limit} for modes {}", list(modes))]
    GrowthGuard { limit: f64, modes: Vec<BasisIndex> },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn list(modes: &[BasisIndex]) -> String {
    modes
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
