//! Mutual information of finite-alphabet inputs over AWGN, and the rate
//! bookkeeping that goes with it.
//!
//! `I(X;Y) = H(Y) − H(N)`, with `H(Y)` the differential entropy of the
//! equiprobable Gaussian mixture at the channel output, evaluated by adaptive
//! quadrature over ±12 noise standard deviations beyond the outermost points.
//! BPSK is one-dimensional and sees the per-dimension noise `σ_N²/2`; QPSK is
//! integrated over the plane.

pub mod quadrature;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::channel::{db_to_linear, linear_to_db};
use crate::modem::Constellation;
use crate::{Error, Result};

pub const QUAD_ABS_TOL: f64 = 1e-9;
const SPAN_SIGMAS: f64 = 12.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Bpsk,
    Qpsk,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> f64 {
        match self {
            Modulation::Bpsk => 1.0,
            Modulation::Qpsk => 2.0,
        }
    }

    pub fn mutual_information(self, esn0_db: f64) -> MiPoint {
        match self {
            Modulation::Bpsk => mi_bpsk(esn0_db),
            Modulation::Qpsk => mi_qpsk(esn0_db),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiPoint {
    pub esn0_db: f64,
    pub mi_bits: f64,
    /// `Es/N0 − 10·log10(mi)`; absent when `mi` is zero.
    pub ebn0_db: Option<f64>,
}

impl MiPoint {
    fn new(esn0_db: f64, mi_bits: f64) -> Self {
        MiPoint {
            esn0_db,
            mi_bits,
            ebn0_db: (mi_bits > 0.0).then(|| esn0_db - linear_to_db(mi_bits)),
        }
    }
}

/// Per-dimension noise variance at unit symbol energy.
fn sigma2_dim(esn0_db: f64) -> f64 {
    0.5 / db_to_linear(esn0_db)
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `−p·log2 p` given `ln p`.
fn entropy_density(ln_p: f64) -> f64 {
    if ln_p == f64::NEG_INFINITY {
        0.0
    } else {
        -ln_p.exp() * ln_p / std::f64::consts::LN_2
    }
}

fn breakpoints(points: &[f64], sigma: f64) -> Vec<f64> {
    let lo = points.iter().cloned().fold(f64::INFINITY, f64::min) - SPAN_SIGMAS * sigma;
    let hi = points.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + SPAN_SIGMAS * sigma;
    let mut b: Vec<f64> = points.iter().cloned().chain([lo, hi, 0.0]).collect();
    b.retain(|x| (lo..=hi).contains(x));
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// Entropy (bits) of an equiprobable mixture of 1-D Gaussians.
pub fn mixture_entropy_1d(points: &[f64], sigma2: f64, abs_tol: f64) -> f64 {
    let ln_norm = -0.5 * (2.0 * std::f64::consts::PI * sigma2).ln() - (points.len() as f64).ln();
    let ln_p =
        |y: f64| ln_norm + log_sum_exp(points.iter().map(|&s| -(y - s) * (y - s) / (2.0 * sigma2)));
    quadrature::integrate(
        |y| entropy_density(ln_p(y)),
        &breakpoints(points, sigma2.sqrt()),
        abs_tol,
    )
}

/// Entropy (bits) of an equiprobable mixture of circular 2-D Gaussians with
/// per-dimension variance `sigma2`, by nested 1-D quadrature.
pub fn mixture_entropy_2d(points: &[(f64, f64)], sigma2: f64, abs_tol: f64) -> f64 {
    let ln_norm = -(2.0 * std::f64::consts::PI * sigma2).ln() - (points.len() as f64).ln();
    let ln_p = |x: f64, y: f64| {
        ln_norm
            + log_sum_exp(
                points
                    .iter()
                    .map(|&(a, b)| -((x - a) * (x - a) + (y - b) * (y - b)) / (2.0 * sigma2)),
            )
    };
    let sigma = sigma2.sqrt();
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let bx = breakpoints(&xs, sigma);
    let by = breakpoints(&ys, sigma);
    let width = by[by.len() - 1] - by[0];
    let inner_tol = 0.1 * abs_tol / width;
    quadrature::integrate(
        |x| quadrature::integrate(|y| entropy_density(ln_p(x, y)), &by, inner_tol),
        &bx,
        0.9 * abs_tol,
    )
}

/// Mutual information of equiprobable BPSK at `Es/N0` (dB).
pub fn mi_bpsk(esn0_db: f64) -> MiPoint {
    let s2 = sigma2_dim(esn0_db);
    let h_y = mixture_entropy_1d(&[1.0, -1.0], s2, QUAD_ABS_TOL);
    let h_n = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * s2).log2();
    MiPoint::new(esn0_db, (h_y - h_n).clamp(0.0, 1.0))
}

/// Mutual information of equiprobable QPSK at `Es/N0` (dB).
pub fn mi_qpsk(esn0_db: f64) -> MiPoint {
    let s2 = sigma2_dim(esn0_db);
    let b = 0.5f64.sqrt();
    let pts = [(b, b), (-b, b), (-b, -b), (b, -b)];
    let h_y = mixture_entropy_2d(&pts, s2, QUAD_ABS_TOL);
    let h_n = (2.0 * std::f64::consts::PI * std::f64::consts::E * s2).log2();
    MiPoint::new(esn0_db, (h_y - h_n).clamp(0.0, 2.0))
}

/// `Es/N0` (dB) at which the mutual information equals `target` bits, by
/// bisection on a monotone curve.
pub fn esn0_at_mi(modulation: Modulation, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < modulation.bits_per_symbol()) {
        return Err(Error::Domain(format!("target mutual information {target}")));
    }
    let (mut lo, mut hi) = (-40.0, 40.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if modulation.mutual_information(mid).mi_bits < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `Eb/N0` (dB) at which the modulation's mutual information equals `rate`.
pub fn ebn0_at_rate(modulation: Modulation, rate: f64) -> Result<f64> {
    Ok(esn0_at_mi(modulation, rate)? - linear_to_db(rate))
}

/// Ratio of the inner stream's distance-to-noise figure (`4Es` over `σ_N²/2`)
/// to the outer stream's (`2Es` over `σ_N²`), computed from the constellation
/// geometry. The noise power cancels.
pub fn distance_noise_ratio(cst: &Constellation) -> f64 {
    let p = cst.points();
    let mut in_pair = f64::INFINITY;
    let mut cross = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let d = p[i].dist_sqr(p[j]);
            if Constellation::outer_bit(i) == Constellation::outer_bit(j) {
                in_pair = in_pair.min(d);
            } else {
                cross = cross.min(d);
            }
        }
    }
    // sigma_N^2 = 1
    (in_pair / 0.5) / (cross / 1.0)
}

/// Upper bound on the outer code rate for inner rate `r1`: `R2 < R1 / 4`.
pub fn rate_bound_outer(r1: f64) -> Result<f64> {
    if !(r1 > 0.0 && r1 < 1.0) {
        return Err(Error::Domain(format!("inner code rate {r1}")));
    }
    Ok(r1 / distance_noise_ratio(&Constellation::new(1.0)))
}

/// Spectral efficiency `η = R1 + R2` in bits per channel use.
pub fn eta_total(r1: f64, r2: f64) -> f64 {
    r1 + r2
}

/// Writes `esn0_db,mi_bits,ebn0_db` rows; dB values carry four decimals.
pub fn write_mi_csv<W: Write>(points: &[MiPoint], mut w: W) -> io::Result<()> {
    writeln!(w, "esn0_db,mi_bits,ebn0_db")?;
    for p in points {
        let eb = p.ebn0_db.map(|e| format!("{e:.4}")).unwrap_or_default();
        writeln!(w, "{:.4},{:.10},{}", p.esn0_db, p.mi_bits, eb)?;
    }
    Ok(())
}
