//! Optimal Ate pairing over Barreto-Naehrig curves, with an operation-counting
//! cost model for software and hardware-assisted targets.

pub mod costmodel;
pub mod curve;
pub mod error;
pub mod fp;
pub mod pairing;
pub mod params;
pub mod primes;
pub mod selftest;
pub mod tower;
pub mod vectors;

pub use error::{Error, Result};
