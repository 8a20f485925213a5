//! Zeros of truncated power series over the complex numbers and over the
//! p-adics: Newton polygons, Gauss-point equidistribution, factor-degree
//! certificates and an explicit non-equidistributing integer series.

pub mod complex;
pub mod conditions;
pub mod config;
pub mod counterexample;
pub mod error;
pub mod factor;
pub mod exact;
pub mod fp;
pub mod padic;
pub mod poly;
pub mod runner;
pub mod select;
pub mod series;

pub use error::{Error, Result};
