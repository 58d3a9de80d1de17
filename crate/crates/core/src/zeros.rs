//! Zeros of `g` inside a trust radius and the canonical product
//!
//! ```text
//! g(z) = z e^{ηz/(L+1)} Π_n (1 − z/ρ_n) e^{z/ρ_n}
//! ```
//!
//! Seeds are the roots of the truncated polynomial `Σ_{n≤N} a_n z^n` (Aberth–
//! Ehrlich with Newton-polygon starting points); each seed inside the radius is
//! polished by Newton's method on the series. The list is checked against the
//! argument-principle count of `g` on the boundary circle, which includes the
//! simple zero at the origin.
//!
//! Zeros are ordered by modulus, then by argument in `(−π, π]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::CoulombParams;
use crate::series::{eval_g, CoefficientTable, ComplexValue};
use crate::DEFAULT_TOL;

const NEWTON_MAX_STEPS: usize = 100;
const ABERTH_MAX_ITERS: usize = 2000;
const WINDING_START_SAMPLES: usize = 4096;
const WINDING_MAX_SAMPLES: usize = 1 << 22;
const DISTINCT_SEPARATION: f64 = 1e-8;

/// A located zero and `|g|` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub location: Complex64,
    pub residual: f64,
}

impl Serialize for Zero {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Zero", 3)?;
        st.serialize_field("re", &self.location.re)?;
        st.serialize_field("im", &self.location.im)?;
        st.serialize_field("residual", &self.residual)?;
        st.end()
    }
}

/// Nonzero zeros of `g` with `|ρ| ≤ trust_radius`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSet {
    params: CoulombParams,
    trust_radius: f64,
    zeros: Vec<Zero>,
    truncation_order: usize,
    winding: i64,
}

impl ZeroSet {
    pub fn params(&self) -> &CoulombParams {
        &self.params
    }

    pub fn trust_radius(&self) -> f64 {
        self.trust_radius
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn locations(&self) -> Vec<Complex64> {
        self.zeros.iter().map(|z| z.location).collect()
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    /// Argument-principle count over `|z| = trust_radius`, origin included.
    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

fn order_key(z: Complex64) -> (i64, f64) {
    // moduli equal to ~1e-8 are tied and broken by argument
    ((z.norm() * 1e8).round() as i64, z.arg())
}

fn sort_zeros(zeros: &mut [Zero]) {
    zeros.sort_by(|a, b| {
        let (ma, aa) = order_key(a.location);
        let (mb, ab) = order_key(b.location);
        ma.cmp(&mb).then(aa.total_cmp(&ab))
    });
}

/// `p/p'` at `z` and whether `|p(z)|` is at the rounding level.
///
/// For `|z| > 1` the reversed polynomial is used so large roots do not overflow.
fn newton_correction(coeffs: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let degree = coeffs.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    let horner = |x: Complex64, it: &mut dyn Iterator<Item = &Complex64>| {
        let r = x.norm();
        let (mut p, mut d, mut m) = (zero, zero, 0.0f64);
        for c in it {
            d = d * x + p;
            p = p * x + c;
            m = m * r + c.norm();
        }
        (p, d, m)
    };
    let tol = 4.0 * f64::EPSILON * (degree as f64 + 1.0);
    if z.norm() <= 1.0 {
        let (p, d, m) = horner(z, &mut coeffs.iter().rev());
        (p / d, p.norm() <= tol * m)
    } else {
        let y = 1.0 / z;
        let (q, dq, m) = horner(y, &mut coeffs.iter());
        let ratio = y * (degree as f64 - y * dq / q);
        (1.0 / ratio, q.norm() <= tol * m)
    }
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(k, ln|c_k|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    let points: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(points.len());
    for &pt in &points {
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            // drop the middle point when it lies on or below the chord
            let cross = (k2 as f64 - k1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut guesses = Vec::with_capacity(degree);
    for (edge, w) in hull.windows(2).enumerate() {
        let (i, yi) = w[0];
        let (j, yj) = w[1];
        let count = j - i;
        let radius = ((yi - yj) / count as f64).exp();
        let offset = 2.0 * PI * edge as f64 / degree as f64 + 0.4;
        for m in 0..count {
            let angle = 2.0 * PI * m as f64 / count as f64 + offset;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

/// All roots of `Σ c_k z^k` by Aberth–Ehrlich iteration.
///
/// Trailing zero coefficients are dropped; returns estimates even when some
/// roots have not met the rounding-level stopping test.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let end = coeffs.iter().rposition(|c| c.norm() > 0.0).map_or(0, |k| k + 1);
    let coeffs = &coeffs[..end];
    if coeffs.len() < 2 {
        return Vec::new();
    }
    let lead_zeros = coeffs.iter().position(|c| c.norm() > 0.0).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); lead_zeros];
    let coeffs = &coeffs[lead_zeros..];
    if coeffs.len() < 2 {
        return roots;
    }
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; z.len()];
    for _ in 0..ABERTH_MAX_ITERS {
        let mut all_done = true;
        for k in 0..z.len() {
            if done[k] {
                continue;
            }
            let (w, converged) = newton_correction(coeffs, z[k]);
            if converged || !w.is_finite() {
                done[k] = true;
                continue;
            }
            all_done = false;
            let s: Complex64 = (0..z.len()).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = w / (1.0 - w * s);
            if step.is_finite() {
                z[k] -= step;
                if step.norm() <= f64::EPSILON * z[k].norm() {
                    done[k] = true;
                }
            } else {
                done[k] = true;
            }
        }
        if all_done {
            break;
        }
    }
    roots.extend(z);
    roots
}

/// Argument-principle count `(1/2πi) ∮ g'/g dz` over `|z| = radius`.
///
/// On the circle this is the mean of `z g'/g`; trapezoidal sums are doubled
/// until two successive levels agree on an integer within 0.25.
pub fn winding_number(table: &CoefficientTable, radius: f64) -> Result<i64> {
    let sample = |k: usize, n: usize| -> Result<Complex64> {
        let z = Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64);
        let d = table.derivatives(z)?;
        if d.g.norm() == 0.0 {
            return Err(Error::NoConvergence(format!("g vanishes on the contour at {z}")));
        }
        Ok(z * d.g1 / d.g)
    };
    let mut n = WINDING_START_SAMPLES;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += sample(k, n)?;
    }
    let mut previous = sum / n as f64;
    while n < WINDING_MAX_SAMPLES {
        for k in 0..n {
            sum += sample(2 * k + 1, 2 * n)?;
        }
        n *= 2;
        let estimate = sum / n as f64;
        let near = |w: Complex64| (w.re - w.re.round()).abs() < 0.25 && w.im.abs() < 0.25;
        if near(previous) && near(estimate) && previous.re.round() == estimate.re.round() {
            return Ok(estimate.re.round() as i64);
        }
        previous = estimate;
    }
    Err(Error::NoConvergence(format!(
        "winding number over |z| = {radius} did not settle within {WINDING_MAX_SAMPLES} samples"
    )))
}

/// Newton's method on the series; returns the polished point or `None` if the
/// iterate leaves the table's disk.
fn polish(table: &CoefficientTable, seed: Complex64, tol: f64) -> Result<Option<Complex64>> {
    let mut z = seed;
    for _ in 0..NEWTON_MAX_STEPS {
        if z.norm() > table.radius() {
            return Ok(None);
        }
        let d = table.derivatives(z)?;
        let threshold = tol.max(2.0 * d.abs_error[0]);
        let step = d.g / d.g1;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if d.g.norm() <= threshold || step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            // one step past the threshold is already taken
            return Ok((z.norm() <= table.radius()).then_some(z));
        }
    }
    Err(Error::NoConvergence(format!(
        "Newton polish from {seed} did not converge in {NEWTON_MAX_STEPS} steps"
    )))
}

/// Zeros of `g` in `0 < |z| ≤ trust_radius`.
pub fn find_zeros(params: &CoulombParams, trust_radius: f64, tol: f64) -> Result<ZeroSet> {
    if !(trust_radius > 0.0 && trust_radius.is_finite()) {
        return Err(Error::Precondition(format!(
            "trust radius must be positive, got {trust_radius}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol must be positive, got {tol}")));
    }
    let table = CoefficientTable::to_tolerance(params, 1.05 * trust_radius, 0.1 * tol, 1)?;
    let seeds = polynomial_roots(table.coeffs());

    let mut zeros: Vec<Zero> = Vec::new();
    for seed in seeds.into_iter().filter(|s| s.norm() <= 1.02 * trust_radius) {
        let Some(location) = polish(&table, seed, tol)? else {
            continue;
        };
        if location.norm() > trust_radius || location.norm() < DISTINCT_SEPARATION {
            continue;
        }
        if zeros.iter().any(|z| (z.location - location).norm() < DISTINCT_SEPARATION) {
            continue;
        }
        let g = eval_g(params, location, tol)?;
        let floor = tol.max(2.0 * g.abs_error);
        if g.value.norm() > floor {
            return Err(Error::NoConvergence(format!(
                "polished zero {location} has residual {:e} above {floor:e}",
                g.value.norm()
            )));
        }
        zeros.push(Zero {
            location,
            residual: g.value.norm(),
        });
    }
    sort_zeros(&mut zeros);

    let winding = winding_number(&table, trust_radius)?;
    if winding != zeros.len() as i64 + 1 {
        return Err(Error::WindingMismatch {
            radius: trust_radius,
            winding,
            listed: zeros.len(),
        });
    }
    Ok(ZeroSet {
        params: *params,
        trust_radius,
        zeros,
        truncation_order: table.order(),
        winding,
    })
}

/// Partial canonical product over the first `n_product` zeros of `zero_set`.
///
/// `abs_error` is a heuristic: `|value|·|f_n − 1|` for the last factor `f_n`
/// (or `|value|` with no factors).
pub fn weierstrass_eval(
    params: &CoulombParams,
    z: Complex64,
    zero_set: &ZeroSet,
    n_product: usize,
) -> Result<ComplexValue> {
    if zero_set.params() != params {
        return Err(Error::Precondition("zero set belongs to different parameters".into()));
    }
    if n_product > zero_set.len() {
        return Err(Error::Precondition(format!(
            "n_product = {n_product} exceeds the {} available zeros",
            zero_set.len()
        )));
    }
    let mut value = z * (params.first_ratio() * z).exp();
    let mut last = None;
    for zero in &zero_set.zeros[..n_product] {
        let u = z / zero.location;
        let factor = (1.0 - u) * u.exp();
        value *= factor;
        last = Some(factor);
    }
    let abs_error = match last {
        Some(f) => value.norm() * (f - 1.0).norm(),
        None => value.norm(),
    };
    Ok(ComplexValue { value, abs_error })
}

/// `|weierstrass_eval(n) − g(z)|` for `n = 1..=len`.
pub fn product_convergence_report(
    params: &CoulombParams,
    z: Complex64,
    zero_set: &ZeroSet,
) -> Result<Vec<(usize, f64)>> {
    let g = eval_g(params, z, DEFAULT_TOL)?.value;
    (1..=zero_set.len())
        .map(|n| Ok((n, (weierstrass_eval(params, z, zero_set, n)?.value - g).norm())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn aberth_on_known_polynomial() {
        // (z − 1)(z + 2)(z − i) = z³ + (1 − i) z² + (−2 − i) z + 2i
        let coeffs = [c(0.0, 2.0), c(-2.0, -1.0), c(1.0, -1.0), c(1.0, 0.0)];
        let mut roots = polynomial_roots(&coeffs);
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let want = [c(-2.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)];
        for (r, w) in roots.iter().zip(want) {
            assert!((r - w).norm() < 1e-13, "{r} vs {w}");
        }
    }

    #[test]
    fn aberth_trims_and_handles_zero_roots() {
        // z² (z − 3), with a trailing zero coefficient
        let coeffs = [c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let roots = polynomial_roots(&coeffs);
        assert_eq!(roots.len(), 3);
        assert_eq!(roots.iter().filter(|r| r.norm() == 0.0).count(), 2);
        assert!(roots.iter().any(|r| (r - 3.0).norm() < 1e-14));
    }

    #[test]
    fn aberth_wide_dynamic_range() {
        // Taylor polynomial of e^z of degree 30: roots spread over a wide annulus
        let mut coeffs = vec![c(1.0, 0.0)];
        for k in 1..=30 {
            let prev = coeffs[k - 1];
            coeffs.push(prev / k as f64);
        }
        let roots = polynomial_roots(&coeffs);
        assert_eq!(roots.len(), 30);
        // backward-stable: |p(r)| at the rounding level of Σ|c_k||r|^k
        for r in roots {
            let p = coeffs.iter().rev().fold(c(0.0, 0.0), |acc, k| acc * r + k);
            let m = coeffs.iter().rev().fold(0.0, |acc, k| acc * r.norm() + k.norm());
            assert!(p.norm() <= 1e-12 * m, "{r}");
        }
    }

    #[test]
    fn sine_zeros() {
        let p = CoulombParams::real(0.0, 0.0).unwrap();
        let zs = find_zeros(&p, 4.0, 1e-12).unwrap();
        assert_eq!(zs.len(), 2);
        assert_eq!(zs.winding(), 3);
        assert!((zs.zeros()[0].location - c(PI, 0.0)).norm() < 1e-12);
        assert!((zs.zeros()[1].location - c(-PI, 0.0)).norm() < 1e-12);

        let zs = find_zeros(&p, 1.0, 1e-12).unwrap();
        assert!(zs.is_empty());
        assert_eq!(zs.winding(), 1);
    }

    #[test]
    fn conjugate_pairs_for_real_coefficients() {
        let p = CoulombParams::real(0.7, 0.0).unwrap();
        let zs = find_zeros(&p, 12.0, 1e-12).unwrap();
        assert!(!zs.is_empty());
        for z in zs.zeros() {
            let conj = z.location.conj();
            assert!(zs.zeros().iter().any(|w| (w.location - conj).norm() < 1e-8));
        }
    }

    #[test]
    fn complex_parameters() {
        let p = CoulombParams::new(c(0.3, 0.4), c(-1.2, 0.8)).unwrap();
        let zs = find_zeros(&p, 10.0, 1e-12).unwrap();
        assert_eq!(zs.winding(), zs.len() as i64 + 1);
        let table = CoefficientTable::to_tolerance(&p, 10.0, 1e-12, 0).unwrap();
        let scale = table.max_abs_coeff();
        for z in zs.zeros() {
            assert!(z.residual <= 1e-10 * scale);
        }
        for (i, a) in zs.zeros().iter().enumerate() {
            for b in &zs.zeros()[i + 1..] {
                assert!((a.location - b.location).norm() > 1e-8);
            }
        }
    }

    #[test]
    fn product_basics() {
        let p = CoulombParams::real(0.5, 0.3).unwrap();
        let zs = find_zeros(&p, 8.0, 1e-12).unwrap();
        assert_eq!(weierstrass_eval(&p, c(0.0, 0.0), &zs, zs.len()).unwrap().value, c(0.0, 0.0));
        let z = c(0.2, 0.1);
        let empty = weierstrass_eval(&p, z, &zs, 0).unwrap().value;
        assert!((empty - z * (p.first_ratio() * z).exp()).norm() < 1e-16);
        assert!(weierstrass_eval(&p, z, &zs, zs.len() + 1).is_err());
        let report = product_convergence_report(&p, c(0.0, 0.0), &zs).unwrap();
        assert!(report.iter().all(|&(_, e)| e == 0.0));
    }

    #[test]
    fn sine_product_matches_closed_form_partial_product() {
        // with ±π..±6π the product is z Π_{n≤6} (1 − z²/(nπ)²)
        let p = CoulombParams::real(0.0, 0.0).unwrap();
        let zs = find_zeros(&p, 20.0, 1e-12).unwrap();
        assert_eq!(zs.len(), 12);
        let z = 0.5;
        let want: f64 = (1..=6).map(|n| 1.0 - z * z / (n as f64 * PI).powi(2)).product::<f64>() * z;
        let got = weierstrass_eval(&p, c(z, 0.0), &zs, 12).unwrap().value;
        assert!((got - c(want, 0.0)).norm() < 1e-9);
        let report = product_convergence_report(&p, c(z, 0.0), &zs).unwrap();
        assert!(((report[11].1) - (want - z.sin()).abs()).abs() < 1e-9);
    }
}
