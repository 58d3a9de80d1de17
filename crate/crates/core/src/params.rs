use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::output::complex;

/// Distance below which a parameter is treated as sitting on a pole.
const POLAR_EPS: f64 = 1e-12;

/// The angular parameter `L` and Sommerfeld parameter `η`, both complex.
///
/// Construction rejects the polar set of the coefficient recurrence:
/// `L = −1` and `2L + 1 ∈ {−2, −3, …}`. The latter also covers every pole of
/// `Γ(2L+2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoulombParams {
    #[serde(rename = "L", with = "complex")]
    l: Complex64,
    #[serde(with = "complex")]
    eta: Complex64,
}

impl CoulombParams {
    pub fn new(l: Complex64, eta: Complex64) -> Result<Self> {
        if !(l.is_finite() && eta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "non-finite parameters L = {l}, eta = {eta}"
            )));
        }
        if (l + 1.0).norm() < POLAR_EPS {
            return Err(Error::InvalidParams("L + 1 = 0".into()));
        }
        let w = 2.0 * l + 1.0;
        if w.im.abs() < POLAR_EPS {
            let k = w.re.round();
            if k <= -2.0 && (w.re - k).abs() < POLAR_EPS {
                return Err(Error::InvalidParams(format!(
                    "2L + 1 = {k}: recurrence denominator n(n+2L+1) vanishes at n = {}",
                    -k
                )));
            }
        }
        Ok(Self { l, eta })
    }

    pub fn real(l: f64, eta: f64) -> Result<Self> {
        Self::new(Complex64::new(l, 0.0), Complex64::new(eta, 0.0))
    }

    #[inline]
    pub fn l(&self) -> Complex64 {
        self.l
    }

    #[inline]
    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    /// `a_1 = η/(L+1)`.
    #[inline]
    pub fn first_ratio(&self) -> Complex64 {
        self.eta / (self.l + 1.0)
    }

    /// True when the recurrence and `g` have real coefficients.
    pub fn is_real(&self) -> bool {
        self.l.im == 0.0 && self.eta.im == 0.0
    }

    /// `L` is a nonnegative integer, so `z^L` is single valued.
    pub fn l_is_nonneg_integer(&self) -> bool {
        self.l.im == 0.0 && self.l.re >= 0.0 && self.l.re.fract() == 0.0
    }
}
