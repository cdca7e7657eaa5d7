//! Explicit multiparameter solutions of variable-coefficient
//! reaction-diffusion (Fisher-KPP type) and Burgers-type equations.
//!
//! The crate builds solutions in three moves:
//!
//! 1. solve a linear second-order characteristic equation and derive a set
//!    of kernel functions ([`kernel`]),
//! 2. combine the kernels with free initial data into the time-dependent
//!    parameters `(mu, alpha, beta, gamma, delta, epsilon, kappa)` of a
//!    Riccati or Ermakov system ([`riccati`], [`burgers`]),
//! 3. push a known closed-form solution of an autonomous model (a seed,
//!    [`seeds`]) through the similarity substitution
//!    `u = mu^{-1/2} e^{alpha x^2 + delta x + kappa} v(beta x + epsilon, gamma)`
//!    ([`transform`]).
//!
//! Every constructed solution can be checked against its own PDE by central
//! finite differences ([`verify`]), and a data catalog of ready-made
//! coefficient families ties the pieces together ([`catalog`]).

pub mod burgers;
pub mod catalog;
pub mod coeffs;
pub mod error;
pub mod expr;
pub mod kernel;
pub mod ode;
pub mod riccati;
pub mod seeds;
pub mod specfun;
pub mod transform;
pub mod verify;

pub use coeffs::{CoeffValues, CoefficientSet};
pub use error::{Error, Result};
pub use expr::{differentiate, eval_expr, parse_expr, Expression};
