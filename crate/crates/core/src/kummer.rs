//! Independent coefficient expansion of `g(z)/z = e^{−iz} ₁F₁(L+1−iη; 2L+2; 2iz)`.
//!
//! The Cauchy product of the two Maclaurin series cancels heavily (the
//! partial terms grow like `3^n/n!` while the coefficients decay like `1/n!`),
//! so it is accumulated in double-double arithmetic and rounded once at the
//! end. Used to cross-check the three-term recurrence in [`crate::series`].

use num_complex::Complex64;

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::params::CoulombParams;
use crate::series::CoefficientTable;

/// Coefficients `a_0..=order` from the `e^{−iz}` and `₁F₁` series.
pub fn kummer_coefficients(params: &CoulombParams, order: usize) -> Result<Vec<Complex64>> {
    let l = params.l();
    let eta = params.eta();
    // a = L + 1 − iη,  b = 2L + 2, both formed without rounding
    let a = CDd::new(
        Dd::new(l.re) + Dd::new(1.0) + Dd::new(eta.im),
        Dd::new(l.im) - Dd::new(eta.re),
    );
    let b = CDd::new(Dd::new(2.0 * l.re) + Dd::new(2.0), Dd::new(2.0 * l.im));

    let two_i = CDd::from_f64(0.0, 2.0);
    let minus_i = CDd::from_f64(0.0, -1.0);

    // hyp[j] = (a)_j (2i)^j / ((b)_j j!),  expo[k] = (−i)^k / k!
    let mut hyp = Vec::with_capacity(order + 1);
    let mut expo = Vec::with_capacity(order + 1);
    hyp.push(CDd::from_f64(1.0, 0.0));
    expo.push(CDd::from_f64(1.0, 0.0));
    for j in 1..=order {
        let jf = CDd::from_f64(j as f64, 0.0);
        let shift = CDd::from_f64(j as f64 - 1.0, 0.0);
        let denom = (b + shift) * jf;
        if denom.is_zero() {
            return Err(Error::InvalidParams(format!("(2L+2)_{j} vanishes")));
        }
        hyp.push(hyp[j - 1] * (a + shift) * two_i / denom);
        expo.push(expo[j - 1] * minus_i / jf);
    }

    Ok((0..=order)
        .map(|n| {
            (0..=n)
                .map(|j| expo[n - j] * hyp[j])
                .fold(CDd::default(), |acc, t| acc + t)
                .to_c64()
        })
        .collect())
}

/// Coefficient table built from [`kummer_coefficients`] with the same tail
/// majorant as the recurrence tables.
pub fn kummer_oracle(params: &CoulombParams, order: usize, radius: f64) -> Result<CoefficientTable> {
    if order < 2 {
        return Err(Error::Precondition(format!("order must be at least 2, got {order}")));
    }
    CoefficientTable::from_coeffs(*params, kummer_coefficients(params, order)?, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::make_coefficients;

    #[test]
    fn matches_sine_series() {
        let p = CoulombParams::real(0.0, 0.0).unwrap();
        let k = kummer_coefficients(&p, 3).unwrap();
        let r = make_coefficients(&p, 3, 1.0).unwrap();
        for (a, b) in k.iter().zip(r.coeffs()) {
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-300) || (a - b).norm() < 1e-30);
        }
    }

    #[test]
    fn first_ratio() {
        let p = CoulombParams::real(0.0, 1.0).unwrap();
        let k = kummer_coefficients(&p, 1).unwrap();
        assert!((k[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn agrees_through_order_twenty() {
        let p = CoulombParams::real(2.0, 0.5).unwrap();
        let k = kummer_oracle(&p, 20, 1.0).unwrap();
        let r = make_coefficients(&p, 20, 1.0).unwrap();
        for (n, (a, b)) in k.coeffs().iter().zip(r.coeffs()).enumerate() {
            assert!((a - b).norm() <= 1e-12 * b.norm(), "n={n}: {a} vs {b}");
        }
    }
}
