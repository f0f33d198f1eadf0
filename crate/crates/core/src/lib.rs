pub mod calculus;
pub mod choquet;
pub mod divided;
pub mod error;
pub mod func;
pub mod hermitian;
pub mod kubo_ando;
pub mod io;
pub mod lab;
pub mod nnls;
pub mod quadrature;
pub mod representation;
pub mod suite;

pub use error::{Error, Result};
