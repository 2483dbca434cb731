//! Complex AWGN with explicit SNR bookkeeping.
//!
//! `Es/N0` is `Es / σ_N²` where `σ_N²` is the total complex noise power, so
//! each of the two real dimensions carries variance `σ_N² / 2`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::modem::CSymbol;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub es: f64,
    pub sigma2_total: f64,
    pub sigma2_dim: f64,
    pub es_n0_db: f64,
}

impl ChannelParams {
    pub fn from_esn0_db(es: f64, es_n0_db: f64) -> Result<Self> {
        if !(es > 0.0 && es.is_finite()) {
            return Err(Error::Domain(format!("symbol energy {es}")));
        }
        if !es_n0_db.is_finite() {
            return Err(Error::Domain(format!("Es/N0 {es_n0_db} dB")));
        }
        let sigma2_total = es / db_to_linear(es_n0_db);
        Ok(ChannelParams {
            es,
            sigma2_total,
            sigma2_dim: sigma2_total / 2.0,
            es_n0_db,
        })
    }

    /// Zero-noise channel; `es_n0_db` is `+∞`.
    pub fn noiseless(es: f64) -> Self {
        ChannelParams {
            es,
            sigma2_total: 0.0,
            sigma2_dim: 0.0,
            es_n0_db: f64::INFINITY,
        }
    }

    pub fn sigma_dim(&self) -> f64 {
        self.sigma2_dim.sqrt()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// `Eb/N0 = Es/N0 − 10·log10(η)`.
pub fn ebn0_from_esn0(esn0_db: f64, eta: f64) -> Result<f64> {
    if eta.is_nan() || eta <= 0.0 {
        return Err(Error::Domain(format!("spectral efficiency {eta}")));
    }
    Ok(esn0_db - linear_to_db(eta))
}

/// Identifies one reproducible random stream: ChaCha8 keyed by `seed`, with
/// `stream_id` selecting one of its 2^64 independent streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededRng {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeededRng {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        SeededRng { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Unit-variance complex Gaussian samples `(n_I, n_Q)`, each component
/// `N(0, 1)`.
pub fn unit_noise(len: usize, stream: SeededRng) -> Vec<CSymbol> {
    let mut rng = stream.rng();
    (0..len)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            CSymbol::new(re, im)
        })
        .collect()
}

/// Scales a unit-variance sample to per-dimension variance `sigma2_dim`.
#[inline]
pub fn scale_noise(n0: CSymbol, p: &ChannelParams) -> CSymbol {
    let s = p.sigma_dim();
    CSymbol::new(s * n0.re, s * n0.im)
}

/// `y_m = s_m + n_m` with independent `N(0, sigma2_dim)` components.
pub fn add_noise(symbols: &[CSymbol], p: &ChannelParams, stream: SeededRng) -> Vec<CSymbol> {
    if p.sigma2_dim == 0.0 {
        return symbols.to_vec();
    }
    symbols
        .iter()
        .zip(unit_noise(symbols.len(), stream))
        .map(|(&s, n0)| s + scale_noise(n0, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modem::{rotate, RotationAngle};

    fn moments(xs: impl Iterator<Item = f64>) -> (f64, f64, usize) {
        let v: Vec<f64> = xs.collect();
        let n = v.len();
        let mean = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (mean, var, n)
    }

    #[test]
    fn params_bookkeeping() {
        let p = ChannelParams::from_esn0_db(1.0, 3.0).unwrap();
        assert_eq!(p.sigma2_dim, p.sigma2_total / 2.0);
        assert!((linear_to_db(p.es / p.sigma2_total) - 3.0).abs() < 1e-12);
        assert!(ChannelParams::from_esn0_db(0.0, 3.0).is_err());
        assert!(ChannelParams::from_esn0_db(1.0, f64::NAN).is_err());
    }

    #[test]
    fn noiseless_is_identity() {
        let s = vec![CSymbol::new(1.0, 0.0), CSymbol::new(0.0, -1.0)];
        assert_eq!(
            add_noise(&s, &ChannelParams::noiseless(1.0), SeededRng::new(1, 2)),
            s
        );
    }

    #[test]
    fn same_stream_same_noise() {
        let s = vec![CSymbol::default(); 100];
        let p = ChannelParams::from_esn0_db(1.0, 0.0).unwrap();
        let a = add_noise(&s, &p, SeededRng::new(5, 9));
        assert_eq!(a, add_noise(&s, &p, SeededRng::new(5, 9)));
        assert_ne!(a, add_noise(&s, &p, SeededRng::new(5, 10)));
        assert_ne!(a, add_noise(&s, &p, SeededRng::new(6, 9)));
    }

    #[test]
    fn noise_calibration_at_one_million_samples() {
        // sigma2_total = 1 -> sigma2_dim = 0.5
        let p = ChannelParams::from_esn0_db(1.0, 0.0).unwrap();
        assert_eq!(p.sigma2_dim, 0.5);
        let n = 1_000_000;
        let y = add_noise(&vec![CSymbol::default(); n], &p, SeededRng::new(2024, 0));
        let (m_re, v_re, _) = moments(y.iter().map(|z| z.re));
        let (m_im, v_im, _) = moments(y.iter().map(|z| z.im));
        // sample variance of a Gaussian has sd σ²·sqrt(2/(n-1))
        let var_band = 3.0 * 0.5 * (2.0 / (n as f64 - 1.0)).sqrt();
        assert!((v_re - 0.5).abs() < var_band, "{v_re}");
        assert!((v_im - 0.5).abs() < var_band, "{v_im}");
        assert!((v_re + v_im - 1.0).abs() < 2.0 * var_band);
        let mean_band = 4.0 * (0.5 / n as f64).sqrt();
        assert!(m_re.abs() < mean_band && m_im.abs() < mean_band);
    }

    #[test]
    fn rotated_noise_keeps_moments() {
        let n = 200_000;
        let noise = unit_noise(n, SeededRng::new(77, 3));
        let rot: Vec<CSymbol> = noise
            .iter()
            .map(|&z| rotate(z, RotationAngle::HalfPi, false))
            .collect();
        let (m0, v0, _) = moments(noise.iter().map(|z| z.re));
        let (m1, v1, _) = moments(rot.iter().map(|z| z.re));
        let band = 4.0 * (2.0 / n as f64).sqrt();
        assert!((v0 - v1).abs() < 2.0 * band);
        assert!(m0.abs() < 4.0 / (n as f64).sqrt() && m1.abs() < 4.0 / (n as f64).sqrt());
    }

    #[test]
    fn ebn0_conversion() {
        assert_eq!(ebn0_from_esn0(0.0, 1.0).unwrap(), 0.0);
        assert!((ebn0_from_esn0(0.0, 0.5).unwrap() - 3.010_299_956_6).abs() < 1e-9);
        let shift = ebn0_from_esn0(0.0, 7.0 / 12.0).unwrap();
        assert!((shift - 2.3408).abs() < 1e-4, "{shift}");
        assert!(ebn0_from_esn0(0.0, 0.0).is_err());
        assert!(ebn0_from_esn0(0.0, -1.0).is_err());
    }
}
