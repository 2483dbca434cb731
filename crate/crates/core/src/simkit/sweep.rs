//! Monte-Carlo BER/FER sweeps over an Es/N0 grid.

use serde::{Deserialize, Serialize};

use super::config::System;
use super::exec::Execution;
use super::pipeline::{BetaSource, FrameOutcome};
use crate::channel::{ebn0_from_esn0, ChannelParams};
use crate::Result;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// Counters accumulated over the frames of one grid point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub frames: u64,
    pub frame_errors: u64,
    pub inner_bits: u64,
    pub inner_bit_errors: u64,
    pub outer_bits: u64,
    pub outer_bit_errors: u64,
    pub inner_iterations: u64,
    pub outer_iterations: u64,
}

impl Tally {
    pub fn add(&mut self, o: &FrameOutcome, k_inner: u64, k_outer: u64) {
        self.frames += 1;
        self.frame_errors += o.is_error() as u64;
        self.inner_bits += k_inner;
        self.inner_bit_errors += o.inner_bit_errors;
        self.outer_bits += k_outer;
        self.outer_bit_errors += o.outer_bit_errors;
        self.inner_iterations += o.inner_iterations;
        self.outer_iterations += o.outer_iterations;
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub esn0_db: f64,
    pub ebn0_db: f64,
    pub tally: Tally,
}

impl SweepPoint {
    pub fn ber_inner(&self) -> f64 {
        ratio(self.tally.inner_bit_errors, self.tally.inner_bits).unwrap_or(0.0)
    }

    /// `None` when the sweep carried no outer stream.
    pub fn ber_outer(&self) -> Option<f64> {
        ratio(self.tally.outer_bit_errors, self.tally.outer_bits)
    }

    /// Info-bit errors of both streams over all info bits sent.
    pub fn ber_combined(&self) -> f64 {
        ratio(
            self.tally.inner_bit_errors + self.tally.outer_bit_errors,
            self.bits(),
        )
        .unwrap_or(0.0)
    }

    pub fn fer(&self) -> f64 {
        ratio(self.tally.frame_errors, self.tally.frames).unwrap_or(0.0)
    }

    pub fn bits(&self) -> u64 {
        self.tally.inner_bits + self.tally.outer_bits
    }

    pub fn mean_iterations_inner(&self) -> f64 {
        ratio(self.tally.inner_iterations, self.tally.frames).unwrap_or(0.0)
    }

    pub fn mean_iterations_outer(&self) -> Option<f64> {
        (self.tally.outer_bits > 0)
            .then(|| ratio(self.tally.outer_iterations, self.tally.frames).unwrap_or(0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Two-stream receiver with estimated rotations.
    Dmm,
    /// Two-stream receiver given the true rotations.
    DmmGenie,
    /// BPSK with the inner code alone.
    BpskBaseline,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    /// Spectral efficiency used for the Eb/N0 axis.
    pub eta: f64,
    pub points: Vec<SweepPoint>,
}

/// Genie and estimated-rotation sweeps over shared frames.
#[derive(Clone, Debug, PartialEq)]
pub struct GenieComparison {
    pub genie: SweepResult,
    pub affected: SweepResult,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapRow {
    pub esn0_db: f64,
    pub ebn0_db: f64,
    pub ber_outer: f64,
    pub ber_inner_genie: f64,
    pub ber_inner_affected: f64,
    /// `affected − genie`.
    pub gap: f64,
    /// Width of the 95% Wilson interval of the genie inner BER.
    pub ci95_width_genie: f64,
}

impl GenieComparison {
    pub fn gaps(&self) -> Vec<GapRow> {
        self.genie
            .points
            .iter()
            .zip(&self.affected.points)
            .map(|(g, a)| {
                let (lo, hi) = wilson_interval(g.tally.inner_bit_errors, g.tally.inner_bits, Z_95);
                GapRow {
                    esn0_db: g.esn0_db,
                    ebn0_db: g.ebn0_db,
                    ber_outer: a.ber_outer().unwrap_or(0.0),
                    ber_inner_genie: g.ber_inner(),
                    ber_inner_affected: a.ber_inner(),
                    gap: a.ber_inner() - g.ber_inner(),
                    ci95_width_genie: hi - lo,
                }
            })
            .collect()
    }
}

impl System {
    fn grid_params(&self) -> Result<Vec<ChannelParams>> {
        self.config()
            .esn0_grid_db
            .iter()
            .map(|&db| ChannelParams::from_esn0_db(self.constellation().es(), db))
            .collect()
    }

    fn k_pair(&self) -> (u64, u64) {
        (self.inner().k_info() as u64, self.outer().k_info() as u64)
    }

    fn sweep_with<F>(
        &self,
        exec: Execution,
        kind: SweepKind,
        eta: f64,
        frame: F,
    ) -> Result<SweepResult>
    where
        F: Fn(u64, &ChannelParams) -> FrameOutcome + Sync,
    {
        let (k1, k2) = match kind {
            SweepKind::BpskBaseline => (self.k_pair().0, 0),
            _ => self.k_pair(),
        };
        let stop = self.config().stop;
        let params = self.grid_params()?;
        let points = exec.install(|| {
            params
                .iter()
                .map(|p| {
                    let mut tally = Tally::default();
                    exec.run_frames(
                        stop.max_frames,
                        |i| frame(i, p),
                        |o| {
                            tally.add(&o, k1, k2);
                            tally.frame_errors >= stop.min_frame_errors
                        },
                    );
                    (p.es_n0_db, tally)
                })
                .collect::<Vec<_>>()
        });
        let points = points
            .into_iter()
            .map(|(esn0_db, tally)| {
                Ok(SweepPoint {
                    esn0_db,
                    ebn0_db: ebn0_from_esn0(esn0_db, eta)?,
                    tally,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SweepResult { kind, eta, points })
    }

    /// Runs frames at each grid point until `min_frame_errors` frames failed
    /// on either stream or `max_frames` were sent.
    pub fn run_sweep(&self, exec: Execution) -> Result<SweepResult> {
        let (kind, source) = if self.config().genie_beta {
            (SweepKind::DmmGenie, BetaSource::Genie)
        } else {
            (SweepKind::Dmm, BetaSource::Estimated)
        };
        self.sweep_with(exec, kind, self.eta(), |i, p| {
            self.receive(self.transmit(i, p), p, source).outcome()
        })
    }

    /// BPSK with the inner code over the same seeds; `η = R1`.
    pub fn run_bpsk_baseline(&self, exec: Execution) -> Result<SweepResult> {
        self.sweep_with(
            exec,
            SweepKind::BpskBaseline,
            self.eta_baseline(),
            |i, p| self.run_bpsk_frame(i, p).outcome(),
        )
    }

    /// Genie and estimated rotations on the same frames. A grid point stops
    /// once both receivers reached `min_frame_errors`, or at `max_frames`.
    pub fn run_genie_compare(&self, exec: Execution) -> Result<GenieComparison> {
        let (k1, k2) = self.k_pair();
        let stop = self.config().stop;
        let eta = self.eta();
        let params = self.grid_params()?;
        let tallies = exec.install(|| {
            params
                .iter()
                .map(|p| {
                    let mut genie = Tally::default();
                    let mut affected = Tally::default();
                    exec.run_frames(
                        stop.max_frames,
                        |i| self.receive_paired(&self.transmit(i, p), p),
                        |(g, a)| {
                            genie.add(&g, k1, k2);
                            affected.add(&a, k1, k2);
                            genie.frame_errors.min(affected.frame_errors) >= stop.min_frame_errors
                        },
                    );
                    (p.es_n0_db, genie, affected)
                })
                .collect::<Vec<_>>()
        });
        let mut genie = Vec::new();
        let mut affected = Vec::new();
        for (esn0_db, g, a) in tallies {
            let ebn0_db = ebn0_from_esn0(esn0_db, eta)?;
            genie.push(SweepPoint {
                esn0_db,
                ebn0_db,
                tally: g,
            });
            affected.push(SweepPoint {
                esn0_db,
                ebn0_db,
                tally: a,
            });
        }
        Ok(GenieComparison {
            genie: SweepResult {
                kind: SweepKind::DmmGenie,
                eta,
                points: genie,
            },
            affected: SweepResult {
                kind: SweepKind::Dmm,
                eta,
                points: affected,
            },
        })
    }
}
