//! Polar codes and their practical companions: construction, SC and BP
//! decoding, polar-outer/LDPC-inner concatenation, rate-compatible polar
//! coding by nested information sets or puncturing, and a Monte-Carlo
//! harness for BER/FER curves and gap-to-capacity measurements.
//!
//! Bit vectors are `Vec<u8>` holding 0/1; LLRs are `ln P(y|0) - ln P(y|1)`.

pub mod channels;
pub mod concat;
pub mod error;
pub mod harness;
pub mod ldpc;
pub mod polar;
pub mod ratecomp;
pub mod seeding;

#[cfg(test)]
mod test_support;

pub use channels::{ChannelFamily, ChannelModel, ChannelSpec, Observation, CLAMP};
pub use error::{Error, Result};
pub use polar::PolarCode;
