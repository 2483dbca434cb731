//! Simulation library for double-mapping modulation (DMM): two independently
//! coded binary streams share one complex symbol, the first as a BPSK
//! amplitude and the second as a 0 or π/2 rotation of that amplitude.
//!
//! Modules:
//! - [`ldpc`]: GF(2) linear block codes, sum-product decoding and the
//!   repetition wrapper used to build very low rate outer codes.
//! - [`modem`]: BPSK mapping, the rotation operator and soft/hard demappers.
//! - [`channel`]: calibrated complex AWGN with counter-based seeded streams.
//! - [`capacity`]: mutual information of BPSK/QPSK over AWGN and rate bounds.
//! - [`simkit`]: the end-to-end transceiver, BER sweeps, genie comparison and
//!   CSV/JSON persistence.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod ldpc;
pub mod modem;
pub mod simkit;

pub use error::{Error, Result};

/// Ordered sequence of binary values, one `u8` (0 or 1) per bit.
pub type BitVec = Vec<u8>;
