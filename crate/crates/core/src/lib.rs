//! Exact analysis of corners `E·A·E` of matrix algebras over Q(i).

pub mod battery;
pub mod classify3;
pub mod compress;
pub mod error;
pub mod exactnum;
pub mod generators;
pub mod span;
pub mod structure;

pub use error::{Error, Result};
pub use exactnum::{GaussianRational, Mat};
pub use span::Span;
