//! Power series of the normalized regular Coulomb wave function
//!
//! ```text
//! g(z) = Σ_{n≥0} a_n z^{n+1}
//! a_0 = 1,  a_1 = η/(L+1),  n(n+2L+1) a_n = 2η a_{n-1} − a_{n-2}
//! F(z) = C_L(η) z^L g(z),   C_L(η) = 2^L e^{−πη/2} |Γ(L+1+iη)| / Γ(2L+2)
//! ```
//!
//! `g` is entire and always evaluated from its own series, so it carries no
//! branch cut. Truncation uses a geometric majorant of the recurrence tail:
//! once `c = (2|η|R + R²) / ((N+1)(N+1−|2L+1|)) < 1`, the scaled terms
//! `t_n = |a_n| R^{n+1}` past `N` decay at least like `c^{⌈(n−N)/2⌉}` relative
//! to `max(t_N, t_{N−1})`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::gamma_complex;
use crate::output::{complex, complex_vec};
use crate::params::CoulombParams;

/// Hard cap on the truncation order.
pub const MAX_ORDER: usize = 500;

const MIN_ORDER: usize = 4;

/// A complex result with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    #[serde(with = "complex")]
    pub value: Complex64,
    pub abs_error: f64,
}

impl ComplexValue {
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            abs_error: 0.0,
        }
    }
}

/// `g` and its first two derivatives at one point, with error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub g: Complex64,
    pub g1: Complex64,
    pub g2: Complex64,
    pub abs_error: [f64; 3],
}

/// Truncated coefficients `a_0..=a_N` of `g(z)/z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    params: CoulombParams,
    order: usize,
    radius: f64,
    tail_bound: f64,
    #[serde(with = "complex_vec")]
    coeffs: Vec<Complex64>,
}

/// `a_n` from `a_{n-1}`, `a_{n-2}`.
#[inline]
fn next_coefficient(params: &CoulombParams, n: usize, prev: Complex64, prev2: Complex64) -> Result<Complex64> {
    let nf = n as f64;
    let denom = nf * (nf + 2.0 * params.l() + 1.0);
    if denom.norm() == 0.0 {
        return Err(Error::InvalidParams(format!(
            "recurrence denominator n(n+2L+1) vanishes at n = {n}"
        )));
    }
    Ok((2.0 * params.eta() * prev - prev2) / denom)
}

/// Geometric majorant of `Σ_{n>N} |d^k/dz^k (a_n z^{n+1})|` on `|z| ≤ radius`,
/// or `None` when the ratio test has not kicked in yet at this order.
fn tail_majorant(params: &CoulombParams, coeffs: &[Complex64], radius: f64, deriv: u32) -> Option<f64> {
    let n = coeffs.len() - 1;
    if n < 2 {
        return None;
    }
    let next = (n + 1) as f64;
    let w = (2.0 * params.l() + 1.0).norm();
    let d = next * (next - w);
    if !(d > 0.0) {
        return None;
    }
    let c = (2.0 * params.eta().norm() * radius + radius * radius) / d;
    if !(c < 1.0) {
        return None;
    }
    let k = deriv as i32;
    let u = (coeffs[n].norm() * radius.powi(n as i32 + 1 - k))
        .max(coeffs[n - 1].norm() * radius.powi(n as i32 - k));
    // Σ_{j≥1} (a + 2j)^k c^j with a = N + 1
    let s0 = c / (1.0 - c);
    let s1 = c / ((1.0 - c) * (1.0 - c));
    let s2 = c * (1.0 + c) / ((1.0 - c) * (1.0 - c) * (1.0 - c));
    let a = next;
    let series = match deriv {
        0 => s0,
        1 => a * s0 + 2.0 * s1,
        2 => a * a * s0 + 4.0 * a * s1 + 4.0 * s2,
        _ => return None,
    };
    let bound = 2.0 * u * series;
    bound.is_finite().then_some(bound)
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius >= 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("radius must be finite and nonnegative, got {radius}")))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("tol must be positive, got {tol}")))
    }
}

/// Coefficients `a_0..=a_order` with a tail bound valid on `|z| ≤ radius`.
pub fn make_coefficients(params: &CoulombParams, order: usize, radius: f64) -> Result<CoefficientTable> {
    if order < 2 {
        return Err(Error::Precondition(format!("order must be at least 2, got {order}")));
    }
    if !(radius > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {radius}")));
    }
    check_radius(radius)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    coeffs.push(params.first_ratio());
    for n in 2..=order {
        let a = next_coefficient(params, n, coeffs[n - 1], coeffs[n - 2])?;
        coeffs.push(a);
    }
    CoefficientTable::from_coeffs(*params, coeffs, radius)
}

impl CoefficientTable {
    /// Wrap externally computed coefficients, attaching the recurrence tail
    /// bound at `radius`.
    pub fn from_coeffs(params: CoulombParams, coeffs: Vec<Complex64>, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        let order = coeffs.len().saturating_sub(1);
        if order < 2 {
            return Err(Error::Precondition(format!("order must be at least 2, got {order}")));
        }
        let tail_bound = tail_majorant(&params, &coeffs, radius, 0).ok_or_else(|| {
            Error::NoConvergence(format!(
                "tail majorization fails at order {order}, radius {radius}"
            ))
        })?;
        Ok(Self {
            params,
            order,
            radius,
            tail_bound,
            coeffs,
        })
    }

    /// Smallest table whose tails for `g, …, g^{(max_deriv)}` are all below
    /// `tol / 2` on `|z| ≤ radius`.
    pub fn to_tolerance(params: &CoulombParams, radius: f64, tol: f64, max_deriv: u32) -> Result<Self> {
        check_radius(radius)?;
        check_tol(tol)?;
        if max_deriv > 2 {
            return Err(Error::Precondition("at most two derivatives are supported".into()));
        }
        let target = 0.5 * tol;
        let mut coeffs = Vec::with_capacity(64);
        coeffs.push(Complex64::new(1.0, 0.0));
        coeffs.push(params.first_ratio());
        for n in 2..=MAX_ORDER {
            let a = next_coefficient(params, n, coeffs[n - 1], coeffs[n - 2])?;
            coeffs.push(a);
            if n < MIN_ORDER {
                continue;
            }
            let ok = (0..=max_deriv)
                .all(|k| tail_majorant(params, &coeffs, radius, k).is_some_and(|b| b < target));
            if ok {
                let tail_bound = tail_majorant(params, &coeffs, radius, 0).expect("checked above");
                return Ok(Self {
                    params: *params,
                    order: n,
                    radius,
                    tail_bound,
                    coeffs,
                });
            }
        }
        Err(Error::NoConvergence(format!(
            "no tail bound below {tol:e} at radius {radius} within order {MAX_ORDER}"
        )))
    }

    pub fn params(&self) -> &CoulombParams {
        &self.params
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Bound on `|Σ_{n>N} a_n z^{n+1}|` for `|z| ≤ radius`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Tail bound for the `k`-th derivative (`k ≤ 2`) on `|z| ≤ radius`.
    pub fn tail_bound_derivative(&self, k: u32) -> Option<f64> {
        tail_majorant(&self.params, &self.coeffs, self.radius, k)
    }

    /// Largest `|a_n|` in the table.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    fn check_inside(&self, z: Complex64) -> Result<()> {
        if z.norm() > self.radius * (1.0 + 1e-12) {
            return Err(Error::Precondition(format!(
                "|z| = {} exceeds the table radius {}",
                z.norm(),
                self.radius
            )));
        }
        Ok(())
    }

    /// `g`, `g'`, `g''` at `z` by Horner's scheme on the truncated series.
    ///
    /// The error estimate adds the tail bounds to a rounding term proportional
    /// to the absolute-value majorant of each sum.
    pub fn derivatives(&self, z: Complex64) -> Result<Derivatives> {
        self.check_inside(z)?;
        let r = z.norm();
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut d, mut dd) = (zero, zero, zero);
        let (mut mp, mut md, mut mdd) = (0.0f64, 0.0f64, 0.0f64);
        // coefficient of z^{n+1} is a_n, constant term is 0
        for a in self.coeffs.iter().rev().chain(std::iter::once(&zero)) {
            dd = dd * z + d;
            d = d * z + p;
            p = p * z + a;
            mdd = mdd * r + md;
            md = md * r + mp;
            mp = mp * r + a.norm();
        }
        let round = 8.0 * f64::EPSILON;
        let tails = [0, 1, 2].map(|k| self.tail_bound_derivative(k).unwrap_or(f64::INFINITY));
        Ok(Derivatives {
            g: p,
            g1: d,
            g2: 2.0 * dd,
            abs_error: [
                tails[0] + round * mp,
                tails[1] + round * md,
                tails[2] + round * 2.0 * mdd,
            ],
        })
    }

    /// `g(z)` from the table.
    pub fn eval_g(&self, z: Complex64) -> Result<ComplexValue> {
        self.check_inside(z)?;
        let r = z.norm();
        let mut p = Complex64::new(0.0, 0.0);
        let mut m = 0.0f64;
        for a in self.coeffs.iter().rev() {
            p = p * z + a;
            m = m * r + a.norm();
        }
        Ok(ComplexValue {
            value: p * z,
            abs_error: self.tail_bound + 8.0 * f64::EPSILON * m * r,
        })
    }

    /// `g(z)` and `g'(z)` from the table.
    pub fn eval_g_and_prime(&self, z: Complex64) -> Result<(ComplexValue, ComplexValue)> {
        let d = self.derivatives(z)?;
        Ok((
            ComplexValue {
                value: d.g,
                abs_error: d.abs_error[0],
            },
            ComplexValue {
                value: d.g1,
                abs_error: d.abs_error[1],
            },
        ))
    }
}

/// `g(z)` with adaptive truncation, `abs_error ≤ tol` up to rounding.
pub fn eval_g(params: &CoulombParams, z: Complex64, tol: f64) -> Result<ComplexValue> {
    check_tol(tol)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(ComplexValue::exact(z));
    }
    CoefficientTable::to_tolerance(params, z.norm(), tol, 0)?.eval_g(z)
}

/// `g'(z) = Σ (n+1) a_n z^n` with adaptive truncation.
pub fn eval_g_prime(params: &CoulombParams, z: Complex64, tol: f64) -> Result<ComplexValue> {
    check_tol(tol)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(ComplexValue::exact(Complex64::new(1.0, 0.0)));
    }
    let (_, g1) = CoefficientTable::to_tolerance(params, z.norm(), tol, 1)?.eval_g_and_prime(z)?;
    Ok(g1)
}

/// `g, g', g''` at `z` with adaptive truncation.
pub fn eval_derivatives(params: &CoulombParams, z: Complex64, tol: f64) -> Result<Derivatives> {
    check_tol(tol)?;
    CoefficientTable::to_tolerance(params, z.norm(), tol, 2)?.derivatives(z)
}

/// `C_L(η) = 2^L e^{−πη/2} |Γ(L+1+iη)| / Γ(2L+2)`, principal branch for `2^L`.
pub fn normalization_constant(params: &CoulombParams) -> Result<ComplexValue> {
    let l = params.l();
    let eta = params.eta();
    let i = Complex64::i();
    let numer = gamma_complex(l + 1.0 + i * eta)?;
    let denom = gamma_complex(2.0 * l + 2.0)?;
    let prefactor = (l * LN_2 - 0.5 * PI * eta).exp();
    let value = prefactor * numer.value.norm() / denom.value;
    if !value.is_finite() {
        return Err(Error::Domain(format!("C_L(eta) is not finite for L = {l}, eta = {eta}")));
    }
    let rel = numer.abs_error / numer.value.norm()
        + denom.abs_error / denom.value.norm()
        + 4.0 * f64::EPSILON * (1.0 + (l * LN_2 - 0.5 * PI * eta).norm());
    Ok(ComplexValue {
        value,
        abs_error: value.norm() * rel,
    })
}

/// `z^L` on the principal branch.
fn pow_l(params: &CoulombParams, z: Complex64) -> Complex64 {
    if params.l_is_nonneg_integer() && params.l().re <= i32::MAX as f64 {
        z.powi(params.l().re as i32)
    } else {
        (params.l() * z.ln()).exp()
    }
}

/// `F_{L,η}(z) = C_L(η) z^L g(z)`.
///
/// For non-integer `L` this uses the principal branch of `z^L`, so the result
/// is discontinuous across the negative real axis.
pub fn eval_f(params: &CoulombParams, z: Complex64, tol: f64) -> Result<ComplexValue> {
    check_tol(tol)?;
    let c = normalization_constant(params)?;
    if z == Complex64::new(0.0, 0.0) {
        if !params.l_is_nonneg_integer() && params.l().re < 0.0 {
            return Err(Error::BranchPoint(params.l()));
        }
        return Ok(ComplexValue::exact(z));
    }
    let g = eval_g(params, z, tol)?;
    let zl = pow_l(params, z);
    let scale = c.value * zl;
    Ok(ComplexValue {
        value: scale * g.value,
        abs_error: scale.norm() * g.abs_error
            + c.abs_error * zl.norm() * g.value.norm()
            + 4.0 * f64::EPSILON * (scale * g.value).norm(),
    })
}
