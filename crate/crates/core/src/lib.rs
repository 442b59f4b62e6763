pub mod classifier;
pub mod cli;
pub mod cole_hopf;
pub mod errata;
pub mod error;
pub mod expr;
pub mod numeric;
pub mod riccati;
pub mod schrodinger;
pub mod tol;

pub use error::{Error, Result};
