use std::sync::Arc;

use super::LdpcCode;
use crate::{Error, Result};

/// A base code whose every code bit is transmitted `rep_factor` times in a
/// row. Effective rate is `base.rate() / rep_factor`.
#[derive(Clone, Debug)]
pub struct RepetitionCode {
    base: Arc<LdpcCode>,
    rep_factor: usize,
}

impl RepetitionCode {
    pub fn new(base: Arc<LdpcCode>, rep_factor: usize) -> Result<Self> {
        if rep_factor == 0 {
            return Err(Error::Code("rep_factor must be at least 1".into()));
        }
        Ok(RepetitionCode { base, rep_factor })
    }

    pub fn base(&self) -> &LdpcCode {
        &self.base
    }

    pub fn rep_factor(&self) -> usize {
        self.rep_factor
    }

    pub fn n_encoded(&self) -> usize {
        self.base.n_code() * self.rep_factor
    }

    pub fn k_info(&self) -> usize {
        self.base.k_info()
    }

    pub fn rate(&self) -> f64 {
        self.k_info() as f64 / self.n_encoded() as f64
    }

    /// Repeats each bit of a base codeword `rep_factor` consecutive times.
    pub fn expand(&self, codeword: &[u8]) -> Result<Vec<u8>> {
        if codeword.len() != self.base.n_code() {
            return Err(Error::Shape {
                expected: self.base.n_code(),
                got: codeword.len(),
            });
        }
        Ok(codeword
            .iter()
            .flat_map(|&b| std::iter::repeat_n(b, self.rep_factor))
            .collect())
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        self.expand(&self.base.encode(info)?)
    }

    /// Soft-combines the copies of each base code bit by summing their LLRs,
    /// which is the exact base-bit LLR on a memoryless channel.
    pub fn combine(&self, llr: &[f64]) -> Result<Vec<f64>> {
        if llr.len() != self.n_encoded() {
            return Err(Error::Shape {
                expected: self.n_encoded(),
                got: llr.len(),
            });
        }
        Ok(llr
            .chunks_exact(self.rep_factor)
            .map(|c| c.iter().sum())
            .collect())
    }
}
