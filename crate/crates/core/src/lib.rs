//! Exact q-series, Heegner divisors and twisted Borcherds products.

pub mod algebra;
mod error;
pub mod borcherds;
pub mod heegner;
pub mod lfun;
pub mod modforms;
pub mod numeval;
pub mod scenarios;
pub mod vvforms;

pub use error::{Error, Result};
