//! Dense linear algebra, Lyapunov solvers, hypergeometric series, and least
//! squares used by the rest of the crate.

mod hypergeometric;
mod lyapunov;
mod matrix;
mod ols;
mod spectral;

pub use hypergeometric::{
    binomial, hyp2f1_equal_ab, hyp2f1_equal_ab_euler, terminating_polynomial,
};
pub use lyapunov::{solve_continuous_lyapunov, solve_discrete_lyapunov};
pub use matrix::DenseMatrix;
pub use ols::{ols_fit, OlsFit};
pub use spectral::spectral_radius;
