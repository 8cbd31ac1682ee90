use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by the transform, quadrature and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation budget exceeded after {n_evals} evaluations (partial value {partial}, err est {abs_err_est:.3e})")]
    BudgetExceeded {
        n_evals: usize,
        partial: Complex64,
        abs_err_est: f64,
    },

    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },

    #[error("contour tail not decaying: |g| at the truncation edge is {edge_ratio:.3e} of the running integral")]
    TailNotDecaying { edge_ratio: f64 },

    #[error("integral tail does not decay; transform divergent: {0}")]
    DivergentTail(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("gamma pole at z = {re} + {im}i")]
    PoleError { re: f64, im: f64 },

    #[error("invalid contour: {0}")]
    ContourError(String),

    #[error("function handle provides no derivative of order {order}")]
    MissingDerivative { order: u32 },

    #[error("derivative order {0} unsupported (max 4)")]
    UnsupportedOrder(u32),

    #[error("syntax error at offset {position}: expected {expected}")]
    SyntaxError { position: usize, expected: String },

    #[error("growth certificate violated at x = {x}: |f(x)| = {actual:.6e} > bound {bound:.6e}")]
    GrowthCertificateViolated { x: f64, actual: f64, bound: f64 },

    #[error("series tail bound {tail_bound:.3e} exceeds tolerance {tol:.3e}; raise k_max or t")]
    TailBoundExceeded { tail_bound: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
