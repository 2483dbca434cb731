//! One frame through the transmitter, the channel and the two-stage receiver.
//!
//! Each frame draws three independent streams from `(seed, frame_index)`:
//! inner info bits, outer info bits and unit-variance channel noise `n0`.
//!
//! The noise sample of symbol `m` is expressed in the inner BPSK frame and
//! carried through the symbol's rotation: `y = s_k + Γ_β·σ·n0`. Complex AWGN
//! is circularly symmetric, so `Γ_β·σ·n0` is an AWGN sample independent of
//! the data, and a receiver that derotates by the true `β` sees exactly
//! `x1 + σ·n0`, the same samples a plain BPSK link on the same stream sees.

use rand::Rng;

use super::config::{OuterRebuild, System};
use crate::channel::{scale_noise, unit_noise, ChannelParams, SeededRng};
use crate::ldpc::{decode_bp, DecodeOutcome};
use crate::modem::{
    demap_inner_llr, demap_outer_llr, derotate, map_bpsk, map_dmm, rotate, CSymbol, RotationAngle,
};

const STREAM_INNER_INFO: u64 = 0;
const STREAM_OUTER_INFO: u64 = 1;
const STREAM_NOISE: u64 = 2;
const STREAMS_PER_FRAME: u64 = 4;

/// Demappers divide by the noise variance; a noiseless channel uses this
/// floor so that LLRs saturate instead of becoming NaN.
const MIN_DEMAP_VARIANCE: f64 = 1e-12;

fn stream(seed: u64, frame_index: u64, kind: u64) -> SeededRng {
    SeededRng::new(seed, frame_index * STREAMS_PER_FRAME + kind)
}

fn random_bits(len: usize, s: SeededRng) -> Vec<u8> {
    let mut rng = s.rng();
    (0..len).map(|_| rng.random::<bool>() as u8).collect()
}

fn demap_variance(p: &ChannelParams) -> f64 {
    p.sigma2_dim.max(MIN_DEMAP_VARIANCE)
}

/// Source of the rotation estimates used to derotate before inner decoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaSource {
    /// From the outer decoder output.
    Estimated,
    /// The transmitted rotations.
    Genie,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transmission {
    pub info_inner: Vec<u8>,
    pub info_outer: Vec<u8>,
    pub code_inner: Vec<u8>,
    pub code_outer: Vec<u8>,
    pub beta: Vec<RotationAngle>,
    pub symbols: Vec<CSymbol>,
    /// Unit-variance noise before scaling and rotation.
    pub noise: Vec<CSymbol>,
    /// Stored received sequence; both receiver stages read it.
    pub received: Vec<CSymbol>,
}

/// Everything recorded about one frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTrace {
    pub tx: Transmission,
    pub outer_llr: Vec<f64>,
    pub outer: DecodeOutcome,
    pub beta_hat: Vec<RotationAngle>,
    pub inner_llr: Vec<f64>,
    pub inner: DecodeOutcome,
}

impl FrameTrace {
    pub fn outcome(&self) -> FrameOutcome {
        FrameOutcome {
            inner_bit_errors: count_errors(&self.inner.info, &self.tx.info_inner),
            outer_bit_errors: count_errors(&self.outer.info, &self.tx.info_outer),
            inner_iterations: self.inner.iterations as u64,
            outer_iterations: self.outer.iterations as u64,
        }
    }
}

/// BPSK with the inner code only.
#[derive(Clone, Debug, PartialEq)]
pub struct BaselineTrace {
    pub info: Vec<u8>,
    pub code: Vec<u8>,
    pub received: Vec<CSymbol>,
    pub llr: Vec<f64>,
    pub decoded: DecodeOutcome,
}

impl BaselineTrace {
    pub fn outcome(&self) -> FrameOutcome {
        FrameOutcome {
            inner_bit_errors: count_errors(&self.decoded.info, &self.info),
            outer_bit_errors: 0,
            inner_iterations: self.decoded.iterations as u64,
            outer_iterations: 0,
        }
    }
}

/// Per-frame counters fed to the sweep tallies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    pub inner_bit_errors: u64,
    pub outer_bit_errors: u64,
    pub inner_iterations: u64,
    pub outer_iterations: u64,
}

impl FrameOutcome {
    pub fn is_error(&self) -> bool {
        self.inner_bit_errors + self.outer_bit_errors > 0
    }
}

fn count_errors(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

impl System {
    /// Info bits, encoding, mapping and channel for one frame.
    pub fn transmit(&self, frame_index: u64, p: &ChannelParams) -> Transmission {
        let seed = self.config().seed;
        let info_inner = random_bits(
            self.inner().k_info(),
            stream(seed, frame_index, STREAM_INNER_INFO),
        );
        let info_outer = random_bits(
            self.outer().k_info(),
            stream(seed, frame_index, STREAM_OUTER_INFO),
        );
        let code_inner = self.inner().encode(&info_inner).expect("inner info length");
        let code_outer = self.outer().encode(&info_outer).expect("outer info length");
        let es = self.constellation().es();

        let beta: Vec<RotationAngle> = code_outer
            .iter()
            .map(|&b| RotationAngle::from_bit(b))
            .collect();
        let symbols: Vec<CSymbol> = code_inner
            .iter()
            .zip(&code_outer)
            .map(|(&v1, &v2)| map_dmm(v1, v2, es))
            .collect();
        let noise = unit_noise(symbols.len(), stream(seed, frame_index, STREAM_NOISE));
        let received = symbols
            .iter()
            .zip(&noise)
            .zip(&beta)
            .map(|((&s, &n0), &b)| s + rotate(scale_noise(n0, p), b, false))
            .collect();
        Transmission {
            info_inner,
            info_outer,
            code_inner,
            code_outer,
            beta,
            symbols,
            noise,
            received,
        }
    }

    pub fn outer_llrs(&self, received: &[CSymbol], p: &ChannelParams) -> Vec<f64> {
        let var = demap_variance(p);
        received
            .iter()
            .map(|&y| demap_outer_llr(y, self.constellation(), var))
            .collect()
    }

    /// Outer stage: soft demap, combine the repeated copies, decode.
    pub fn decode_outer(&self, outer_llr: &[f64]) -> DecodeOutcome {
        let combined = self.outer().combine(outer_llr).expect("outer LLR length");
        decode_bp(self.outer().base(), &combined, self.config().max_iter)
    }

    /// Per-symbol rotation estimates rebuilt from the outer decoder output.
    pub fn rebuild_beta(&self, outer: &DecodeOutcome) -> Vec<RotationAngle> {
        let bits = match self.config().outer_rebuild {
            OuterRebuild::Reencode => self.outer().encode(&outer.info),
            OuterRebuild::Direct => self.outer().expand(&outer.codeword),
        }
        .expect("outer decoder output length");
        bits.into_iter().map(RotationAngle::from_bit).collect()
    }

    /// Inner stage demapping: derotate each stored symbol by its estimate
    /// and take the BPSK LLR of the real part.
    pub fn inner_llrs(
        &self,
        received: &[CSymbol],
        beta_hat: &[RotationAngle],
        p: &ChannelParams,
    ) -> Vec<f64> {
        let var = demap_variance(p);
        let es = self.constellation().es();
        received
            .iter()
            .zip(beta_hat)
            .map(|(&y, &b)| demap_inner_llr(derotate(y, b), es, var))
            .collect()
    }

    /// Receives a stored transmission.
    pub fn receive(&self, tx: Transmission, p: &ChannelParams, source: BetaSource) -> FrameTrace {
        let outer_llr = self.outer_llrs(&tx.received, p);
        let outer = self.decode_outer(&outer_llr);
        let beta_hat = match source {
            BetaSource::Estimated => self.rebuild_beta(&outer),
            BetaSource::Genie => tx.beta.clone(),
        };
        let inner_llr = self.inner_llrs(&tx.received, &beta_hat, p);
        let inner = decode_bp(self.inner(), &inner_llr, self.config().max_iter);
        FrameTrace {
            tx,
            outer_llr,
            outer,
            beta_hat,
            inner_llr,
            inner,
        }
    }

    /// Receives one stored transmission twice, with genie and with estimated
    /// rotations, sharing the outer decode. Returns `(genie, estimated)`.
    pub fn receive_paired(
        &self,
        tx: &Transmission,
        p: &ChannelParams,
    ) -> (FrameOutcome, FrameOutcome) {
        let outer = self.decode_outer(&self.outer_llrs(&tx.received, p));
        let outer_bit_errors = count_errors(&outer.info, &tx.info_outer);
        let inner_with = |beta_hat: &[RotationAngle]| {
            let llr = self.inner_llrs(&tx.received, beta_hat, p);
            let inner = decode_bp(self.inner(), &llr, self.config().max_iter);
            FrameOutcome {
                inner_bit_errors: count_errors(&inner.info, &tx.info_inner),
                outer_bit_errors,
                inner_iterations: inner.iterations as u64,
                outer_iterations: outer.iterations as u64,
            }
        };
        let genie = inner_with(&tx.beta);
        let beta_hat = self.rebuild_beta(&outer);
        // identical derotation gives an identical inner decode
        let estimated = if beta_hat == tx.beta {
            genie
        } else {
            inner_with(&beta_hat)
        };
        (genie, estimated)
    }

    /// Full frame; the rotation source follows `genie_beta` in the config.
    pub fn run_frame(&self, frame_index: u64, p: &ChannelParams) -> FrameTrace {
        let source = if self.config().genie_beta {
            BetaSource::Genie
        } else {
            BetaSource::Estimated
        };
        self.receive(self.transmit(frame_index, p), p, source)
    }

    /// Conventional BPSK with the inner code over the same info and noise
    /// streams as [`Self::transmit`].
    pub fn run_bpsk_frame(&self, frame_index: u64, p: &ChannelParams) -> BaselineTrace {
        let seed = self.config().seed;
        let es = self.constellation().es();
        let info = random_bits(
            self.inner().k_info(),
            stream(seed, frame_index, STREAM_INNER_INFO),
        );
        let code = self.inner().encode(&info).expect("inner info length");
        let noise = unit_noise(code.len(), stream(seed, frame_index, STREAM_NOISE));
        let received: Vec<CSymbol> = code
            .iter()
            .zip(&noise)
            .map(|(&v, &n0)| map_bpsk(v, es) + scale_noise(n0, p))
            .collect();
        let var = demap_variance(p);
        let llr: Vec<f64> = received
            .iter()
            .map(|&y| demap_inner_llr(y, es, var))
            .collect();
        let decoded = decode_bp(self.inner(), &llr, self.config().max_iter);
        BaselineTrace {
            info,
            code,
            received,
            llr,
            decoded,
        }
    }
}
