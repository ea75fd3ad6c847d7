pub mod airy;
pub mod asymptotics;
pub mod bvp;
pub mod canonical;
pub mod cli;
pub mod error;
pub mod family;
pub mod gk;
pub mod grid;
pub mod io;
pub mod logc;
pub mod poly;
pub mod quadrature;
pub mod saddle;
pub mod sdpath;

pub use error::{Error, Result};
pub use logc::LogComplex;
