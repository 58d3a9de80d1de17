//! The ratio `P(z) = z g'(z)/g(z)` and residuals of the two differential
//! equations it is tied to:
//!
//! ```text
//! z² g'' + 2L z g' + (z² − 2ηz − 2L) g = 0
//! z P' + P² + (2L−1) P + z² − 2ηz − 2L = 0
//! ```

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::output::complex;
use crate::params::CoulombParams;
use crate::series::{CoefficientTable, ComplexValue, Derivatives};
use crate::zeros::ZeroSet;

/// `P` is not evaluated where `|g| < POLE_GUARD · tol`.
pub const POLE_GUARD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioValue {
    #[serde(with = "complex")]
    pub z: Complex64,
    #[serde(rename = "P", with = "complex")]
    pub p: Complex64,
    pub nearest_zero_distance: Option<f64>,
}

impl RatioValue {
    /// Fill in the distance to the closest listed zero (the origin excluded).
    pub fn with_zero_set(mut self, zeros: &ZeroSet) -> Self {
        self.nearest_zero_distance = zeros
            .zeros()
            .iter()
            .map(|zero| (zero.location - self.z).norm())
            .reduce(f64::min);
        self
    }
}

/// A residual together with the bound it is expected to stay under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub residual: f64,
    pub allowance: f64,
}

impl Residual {
    pub fn within_contract(&self) -> bool {
        self.residual <= self.allowance
    }
}

/// `P = z g'/g` from precomputed derivatives, with the pole guard.
pub(crate) fn ratio_from(z: Complex64, g: Complex64, g1: Complex64, tol: f64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let abs_g = g.norm();
    if abs_g < POLE_GUARD * tol {
        return Err(Error::NearZeroOfG { z, abs_g });
    }
    Ok(z * g1 / g)
}

fn derivatives_at(params: &CoulombParams, z: Complex64, tol: f64, max_deriv: u32) -> Result<Derivatives> {
    CoefficientTable::to_tolerance(params, z.norm(), tol, max_deriv)?.derivatives(z)
}

/// `P(z) = z g'(z)/g(z)`; exactly 1 at the origin.
pub fn eval_p(params: &CoulombParams, z: Complex64, tol: f64) -> Result<RatioValue> {
    let p = if z == Complex64::new(0.0, 0.0) {
        Complex64::new(1.0, 0.0)
    } else {
        let d = derivatives_at(params, z, tol, 1)?;
        ratio_from(z, d.g, d.g1, tol)?
    };
    Ok(RatioValue {
        z,
        p,
        nearest_zero_distance: None,
    })
}

/// `P(z)` with a first-order propagated error from the errors in `g`, `g'`.
pub fn eval_p_value(params: &CoulombParams, z: Complex64, tol: f64) -> Result<ComplexValue> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(ComplexValue::exact(Complex64::new(1.0, 0.0)));
    }
    let d = derivatives_at(params, z, tol, 1)?;
    let p = ratio_from(z, d.g, d.g1, tol)?;
    let abs_g = d.g.norm();
    let abs_error = z.norm() * (d.abs_error[1] + p.norm() / z.norm() * d.abs_error[0]) / abs_g
        + 4.0 * f64::EPSILON * p.norm();
    Ok(ComplexValue { value: p, abs_error })
}

/// `|z² g'' + 2Lz g' + (z² − 2ηz − 2L) g|` from the differentiated series.
pub fn ode_residual_g(params: &CoulombParams, z: Complex64, tol: f64) -> Result<Residual> {
    let d = derivatives_at(params, z, tol, 2)?;
    let l = params.l();
    let eta = params.eta();
    let residual = (z * z * d.g2 + 2.0 * l * z * d.g1 + (z * z - 2.0 * eta * z - 2.0 * l) * d.g).norm();
    let scale = d.g.norm().max(d.g1.norm()).max(d.g2.norm());
    Ok(Residual {
        residual,
        allowance: 100.0 * tol * (1.0 + z.norm_sqr()) * scale,
    })
}

/// `P` and `P'`, where `P' = (g' + z g'')/g − z (g')²/g²`.
pub fn eval_p_and_derivative(params: &CoulombParams, z: Complex64, tol: f64) -> Result<(Complex64, Complex64)> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok((Complex64::new(1.0, 0.0), params.first_ratio()));
    }
    let d = derivatives_at(params, z, tol, 2)?;
    let p = ratio_from(z, d.g, d.g1, tol)?;
    let q = d.g1 / d.g;
    let dp = (d.g1 + z * d.g2) / d.g - z * q * q;
    Ok((p, dp))
}

/// `|zP' + P² + (2L−1)P + z² − 2ηz − 2L|`.
///
/// The quadratic part is evaluated as `(P−1)(P+2L)`, which is exact at the
/// origin where `P = 1`.
pub fn ode_residual_p(params: &CoulombParams, z: Complex64, tol: f64) -> Result<Residual> {
    let (p, dp) = eval_p_and_derivative(params, z, tol)?;
    let l = params.l();
    let eta = params.eta();
    let residual = (z * dp + (p - 1.0) * (p + 2.0 * l) + z * z - 2.0 * eta * z).norm();
    let scale = 1f64.max(p.norm()).max(p.norm_sqr()).max(dp.norm());
    Ok(Residual {
        residual,
        allowance: 100.0 * tol * (1.0 + z.norm_sqr()) * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::make_coefficients;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ratio_at_origin_is_one() {
        for (l, eta) in [(0.0, 0.0), (0.5, 0.1), (2.0, -1.0)] {
            let p = CoulombParams::real(l, eta).unwrap();
            assert_eq!(eval_p(&p, c(0.0, 0.0), 1e-12).unwrap().p, c(1.0, 0.0));
        }
    }

    #[test]
    fn sine_ratio_is_z_cot_z() {
        let p = CoulombParams::real(0.0, 0.0).unwrap();
        let r = eval_p(&p, c(1.0, 0.0), 1e-12).unwrap();
        assert!((r.p - c(1.0 / 1f64.tan(), 0.0)).norm() < 1e-12);
        assert!((r.p.re - 0.642_092_615_934_330_7).abs() < 1e-12);
    }

    #[test]
    fn pole_guard_at_pi() {
        let p = CoulombParams::real(0.0, 0.0).unwrap();
        assert!(matches!(eval_p(&p, c(PI, 0.0), 1e-12), Err(Error::NearZeroOfG { .. })));
        assert!(eval_p(&p, c(3.1, 0.0), 1e-12).is_ok());
    }

    #[test]
    fn residuals_vanish_at_origin() {
        let p = CoulombParams::real(0.5, 0.1).unwrap();
        assert_eq!(ode_residual_g(&p, c(0.0, 0.0), 1e-12).unwrap().residual, 0.0);
        assert_eq!(ode_residual_p(&p, c(0.0, 0.0), 1e-12).unwrap().residual, 0.0);
    }

    #[test]
    fn residual_examples() {
        let p = CoulombParams::real(0.0, 0.0).unwrap();
        assert!(ode_residual_g(&p, c(0.5, 0.0), 1e-12).unwrap().residual < 1e-10);
        assert!(ode_residual_p(&p, c(0.3, 0.0), 1e-12).unwrap().residual < 1e-9);
        let p = CoulombParams::new(c(1.2, 0.0), c(0.3, 0.1)).unwrap();
        let r = ode_residual_g(&p, c(0.0, 0.7), 1e-12).unwrap();
        assert!(r.residual < 1e-9 && r.within_contract());
        let p = CoulombParams::real(0.5, 0.1).unwrap();
        let z = Complex64::from_polar(0.5, PI / 3.0);
        let r = ode_residual_p(&p, z, 1e-12).unwrap();
        assert!(r.residual < 1e-9 && r.within_contract());
    }

    #[test]
    fn ratio_slope_at_origin() {
        // P = 1 + a_1 z + (2a_2 − a_1²) z² + …; the symmetric quotient removes
        // the z² term
        let p = CoulombParams::new(c(0.4, 0.2), c(0.7, -0.3)).unwrap();
        let h = 1e-4;
        let plus = eval_p(&p, c(h, 0.0), 1e-14).unwrap().p;
        let minus = eval_p(&p, c(-h, 0.0), 1e-14).unwrap().p;
        assert!(((plus - minus) / (2.0 * h) - p.first_ratio()).norm() <= 1e-5);
        let (_, dp0) = eval_p_and_derivative(&p, c(0.0, 0.0), 1e-14).unwrap();
        assert_eq!(dp0, p.first_ratio());
        // one-sided quotient is off by the z² coefficient times h
        let a = make_coefficients(&p, 2, 1.0).unwrap();
        let c2 = 2.0 * a.coeffs()[2] - a.coeffs()[1] * a.coeffs()[1];
        assert!(((plus - 1.0) / h - p.first_ratio() - c2 * h).norm() <= 1e-7);
    }
}
