//! Double-mapping modulation.
//!
//! The inner code bit picks a BPSK amplitude `x1 = ±√Es` on the real axis.
//! The outer code bit picks a rotation `β ∈ {0, π/2}` applied to `x1`, so each
//! outer bit value owns an antipodal pair of points:
//!
//! | v1 | v2 | β   | symbol          |
//! |----|----|-----|-----------------|
//! | 0  | 0  | 0   | s1 = ( √Es, 0)  |
//! | 1  | 0  | 0   | s3 = (−√Es, 0)  |
//! | 0  | 1  | π/2 | s2 = (0,  √Es)  |
//! | 1  | 1  | π/2 | s4 = (0, −√Es)  |
//!
//! Rotations by the two admissible angles are exact component swaps, so
//! rotating and derotating is bit-exact.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CSymbol {
    pub re: f64,
    pub im: f64,
}

impl CSymbol {
    pub const fn new(re: f64, im: f64) -> Self {
        CSymbol { re, im }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn dist_sqr(self, other: CSymbol) -> f64 {
        let (dr, di) = (self.re - other.re, self.im - other.im);
        dr * dr + di * di
    }
}

impl std::ops::Add for CSymbol {
    type Output = CSymbol;
    fn add(self, rhs: CSymbol) -> CSymbol {
        CSymbol::new(self.re + rhs.re, self.im + rhs.im)
    }
}

/// Rotation angle carried by an outer code bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RotationAngle {
    Zero,
    HalfPi,
}

impl RotationAngle {
    /// `0 → 0`, `1 → π/2`.
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            RotationAngle::Zero
        } else {
            RotationAngle::HalfPi
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            RotationAngle::Zero => 0,
            RotationAngle::HalfPi => 1,
        }
    }

    pub fn radians(self) -> f64 {
        match self {
            RotationAngle::Zero => 0.0,
            RotationAngle::HalfPi => std::f64::consts::FRAC_PI_2,
        }
    }
}

/// The four DMM points for symbol energy `es`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constellation {
    es: f64,
}

impl Constellation {
    pub fn new(es: f64) -> Self {
        assert!(es > 0.0, "symbol energy must be positive");
        Constellation { es }
    }

    pub fn es(&self) -> f64 {
        self.es
    }

    pub fn amplitude(&self) -> f64 {
        self.es.sqrt()
    }

    /// `[s1, s2, s3, s4]`.
    pub fn points(&self) -> [CSymbol; 4] {
        let a = self.amplitude();
        [
            CSymbol::new(a, 0.0),
            CSymbol::new(0.0, a),
            CSymbol::new(-a, 0.0),
            CSymbol::new(0.0, -a),
        ]
    }

    /// Outer bit carried by point `s_{k+1}`: 0 for s1/s3, 1 for s2/s4.
    pub fn outer_bit(k: usize) -> u8 {
        (k % 2) as u8
    }
}

pub fn map_bpsk(v1: u8, es: f64) -> CSymbol {
    let a = es.sqrt();
    CSymbol::new(if v1 & 1 == 0 { a } else { -a }, 0.0)
}

/// `z · e^{jβ}`, or `z · e^{−jβ}` when `inverse`.
pub fn rotate(z: CSymbol, beta: RotationAngle, inverse: bool) -> CSymbol {
    match (beta, inverse) {
        (RotationAngle::Zero, _) => z,
        (RotationAngle::HalfPi, false) => CSymbol::new(-z.im, z.re),
        (RotationAngle::HalfPi, true) => CSymbol::new(z.im, -z.re),
    }
}

pub fn map_dmm(v1: u8, v2: u8, es: f64) -> CSymbol {
    rotate(map_bpsk(v1, es), RotationAngle::from_bit(v2), false)
}

pub fn derotate(y: CSymbol, beta_hat: RotationAngle) -> CSymbol {
    rotate(y, beta_hat, true)
}

/// Minimum-distance decision on the outer bit.
pub fn demap_outer_hard(y: CSymbol, cst: &Constellation) -> u8 {
    let (k, _) = cst
        .points()
        .iter()
        .map(|&s| y.dist_sqr(s))
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |best, (k, d)| if d < best.1 { (k, d) } else { best },
        );
    Constellation::outer_bit(k)
}

/// `ln cosh(x)` without overflow.
fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Exact outer-bit LLR
/// `ln[(p(y|s1) + p(y|s3)) / (p(y|s2) + p(y|s4))]` with per-dimension noise
/// variance `sigma2_dim`. Expanding the Gaussian exponents, the common terms
/// cancel and the ratio reduces to `ln cosh(a·re/σ²) − ln cosh(a·im/σ²)`.
pub fn demap_outer_llr(y: CSymbol, cst: &Constellation, sigma2_dim: f64) -> f64 {
    debug_assert!(sigma2_dim > 0.0);
    let a = cst.amplitude();
    ln_cosh(a * y.re / sigma2_dim) - ln_cosh(a * y.im / sigma2_dim)
}

/// BPSK LLR on the real part of a derotated symbol; the quadrature part is
/// discarded.
pub fn demap_inner_llr(y1: CSymbol, es: f64, sigma2_dim: f64) -> f64 {
    debug_assert!(sigma2_dim > 0.0);
    2.0 * es.sqrt() * y1.re / sigma2_dim
}
