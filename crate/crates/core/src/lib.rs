//! Exact counts of colored Birch and colored Tverberg partitions.

#![allow(clippy::needless_range_loop)]

pub mod birch;
pub mod bounds;
pub mod config;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod geometry;
pub mod lp;
pub mod partition;
pub mod rational;
pub mod rng;
pub mod tverberg;
pub mod words;

pub use error::{Error, Result};
