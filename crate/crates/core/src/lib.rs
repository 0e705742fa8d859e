//! Network inference from stationary time series generated by linear
//! stochastic delay dynamics.

pub mod bench;
pub mod dynamics;
pub mod error;
pub mod graphs;
pub mod motifs;
pub mod numerics;
pub mod pem;

pub use error::{Error, ErrorKind, Result, Stage};
