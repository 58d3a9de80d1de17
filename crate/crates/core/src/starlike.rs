//! Starlikeness classes of the normalized function on the unit disk.
//!
//! For a class with subordinating function `q` (`√(1+z)` or `e^z`, both
//! univalent with `q(0) = 1 = P(0)`), `P ≺ q` is equivalent to
//! `P(𝔻) ⊂ q(𝔻)`. [`certify`] checks that containment on a polar grid that
//! stops just short of the unit circle, so its verdict is a numerical one.

use std::f64::consts::{E, PI, SQRT_2};
use std::fmt;
use std::io;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::ratio_from;
use crate::error::{Error, Result};
use crate::output::{complex, fmt_f64};
use crate::params::CoulombParams;
use crate::series::CoefficientTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StarlikeClass {
    /// `Re P > 0`
    Classical,
    /// `P ≺ √(1+z)`: `P` in the right loop of `|w² − 1| < 1`
    Lemniscate,
    /// `P ≺ e^z`: `|Log P| < 1`
    Exponential,
}

impl StarlikeClass {
    pub const ALL: [StarlikeClass; 3] = [Self::Classical, Self::Lemniscate, Self::Exponential];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::Lemniscate => "lemniscate",
            Self::Exponential => "exponential",
        }
    }

    /// Signed margin of `w`: positive exactly when `w` lies in the class region.
    pub fn margin(&self, w: Complex64) -> f64 {
        match self {
            Self::Classical => classical_margin(w),
            Self::Exponential => exponential_margin(w),
            Self::Lemniscate => {
                // |w² − 1| < 1 has two loops; only the one with Re w > 0 is q(𝔻)
                let m = lemniscate_margin(w);
                if w.re > 0.0 {
                    m
                } else {
                    m.min(w.re)
                }
            }
        }
    }
}

impl fmt::Display for StarlikeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StarlikeClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "classical" => Ok(Self::Classical),
            "lemniscate" => Ok(Self::Lemniscate),
            "exponential" => Ok(Self::Exponential),
            other => Err(format!(
                "unknown class '{other}' (expected classical, lemniscate or exponential)"
            )),
        }
    }
}

/// `1 − |w² − 1|`.
pub fn lemniscate_margin(w: Complex64) -> f64 {
    1.0 - (w * w - 1.0).norm()
}

/// `1 − |Log w|`, or `−∞` on the closed negative real axis (including 0).
pub fn exponential_margin(w: Complex64) -> f64 {
    if w.im == 0.0 && w.re <= 0.0 {
        return f64::NEG_INFINITY;
    }
    1.0 - w.ln().norm()
}

/// `Re w`.
pub fn classical_margin(w: Complex64) -> f64 {
    w.re
}

/// A sufficient parameter condition and its slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub satisfied: bool,
    pub slack: f64,
}

impl ConditionCheck {
    fn from_slack(slack: f64) -> Self {
        Self {
            satisfied: slack > 0.0,
            slack,
        }
    }
}

/// Lemniscate condition: `√2/4 − (√2−1)|2L−1| − 2|η| > 0`.
pub fn theorem1_condition(params: &CoulombParams) -> ConditionCheck {
    let spread = (2.0 * params.l() - 1.0).norm();
    ConditionCheck::from_slack(SQRT_2 / 4.0 - (SQRT_2 - 1.0) * spread - 2.0 * params.eta().norm())
}

/// Exponential condition: `(e−1)/e² − (e−1)|2L−1| − 2|η| > 0`.
pub fn theorem2_condition(params: &CoulombParams) -> ConditionCheck {
    let spread = (2.0 * params.l() - 1.0).norm();
    ConditionCheck::from_slack((E - 1.0) / (E * E) - (E - 1.0) * spread - 2.0 * params.eta().norm())
}

/// The sufficient condition matching `class`, if there is one.
pub fn hypothesis(params: &CoulombParams, class: StarlikeClass) -> Option<ConditionCheck> {
    match class {
        StarlikeClass::Classical => None,
        StarlikeClass::Lemniscate => Some(theorem1_condition(params)),
        StarlikeClass::Exponential => Some(theorem2_condition(params)),
    }
}

/// Concentric rings of equally spaced sample points inside the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanGrid {
    radii: Vec<f64>,
    r_max: f64,
    angles_per_ring: usize,
    rings: usize,
}

impl Default for ScanGrid {
    /// 40 rings up to `r = 0.999`, 720 angles each.
    fn default() -> Self {
        Self::uniform(0.999, 40, 720).expect("default grid is valid")
    }
}

impl ScanGrid {
    /// Radii `r_max·k/rings` for `k = 1..=rings`.
    pub fn uniform(r_max: f64, rings: usize, angles_per_ring: usize) -> Result<Self> {
        if rings == 0 {
            return Err(Error::Precondition("grid needs at least one ring".into()));
        }
        let radii = (1..=rings).map(|k| r_max * k as f64 / rings as f64).collect();
        Self::from_radii(radii, angles_per_ring)
    }

    pub fn from_radii(radii: Vec<f64>, angles_per_ring: usize) -> Result<Self> {
        if radii.is_empty() || angles_per_ring == 0 {
            return Err(Error::Precondition("grid needs at least one ring and one angle".into()));
        }
        if !(radii[0] > 0.0) || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Precondition("grid radii must be positive and strictly increasing".into()));
        }
        let r_max = *radii.last().expect("nonempty");
        if !(r_max < 1.0) {
            return Err(Error::Precondition(format!("grid radii must stay below 1, got {r_max}")));
        }
        Ok(Self {
            rings: radii.len(),
            radii,
            r_max,
            angles_per_ring,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn angles_per_ring(&self) -> usize {
        self.angles_per_ring
    }

    pub fn rings(&self) -> usize {
        self.rings
    }

    pub fn point(&self, ring: usize, angle: usize) -> Complex64 {
        Complex64::from_polar(
            self.radii[ring],
            2.0 * PI * angle as f64 / self.angles_per_ring as f64,
        )
    }

    pub fn len(&self) -> usize {
        self.rings * self.angles_per_ring
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub params: CoulombParams,
    pub class: StarlikeClass,
    pub grid: ScanGrid,
    pub min_margin: f64,
    #[serde(with = "complex")]
    pub worst_point: Complex64,
    /// `false` for the classical class, which has no matching condition.
    pub hypothesis_satisfied: bool,
    pub hypothesis_slack: Option<f64>,
    pub certified: bool,
    pub per_ring_margins: Vec<f64>,
    /// Set when `g` vanished (within the pole guard) at `worst_point`.
    pub zero_in_disk: bool,
}

enum RingOutcome {
    Margin { value: f64, angle: usize },
    Zero { angle: usize },
}

fn scan_ring(table: &CoefficientTable, grid: &ScanGrid, class: StarlikeClass, ring: usize, tol: f64) -> Result<RingOutcome> {
    let mut best = (f64::INFINITY, 0usize);
    for angle in 0..grid.angles_per_ring() {
        let z = grid.point(ring, angle);
        let d = table.derivatives(z)?;
        let p = match ratio_from(z, d.g, d.g1, tol) {
            Ok(p) => p,
            Err(Error::NearZeroOfG { .. }) => return Ok(RingOutcome::Zero { angle }),
            Err(e) => return Err(e),
        };
        let m = class.margin(p);
        // NaN margins count as failures
        let m = if m.is_nan() { f64::NEG_INFINITY } else { m };
        if m < best.0 {
            best = (m, angle);
        }
    }
    Ok(RingOutcome::Margin {
        value: best.0,
        angle: best.1,
    })
}

/// Evaluate `P` on every grid point and record the class margins.
///
/// Rings are scanned in parallel; the minimum is taken in (ring, angle) order
/// so the report does not depend on the number of workers. If `g` hits the
/// pole guard at a grid point the report comes back inside
/// [`Error::ZeroInDisk`] with `certified = false`.
pub fn certify(params: &CoulombParams, class: StarlikeClass, grid: &ScanGrid, tol: f64) -> Result<CertificationReport> {
    let table = CoefficientTable::to_tolerance(params, grid.r_max(), tol, 1)?;
    let outcomes: Vec<RingOutcome> = (0..grid.rings())
        .into_par_iter()
        .map(|ring| scan_ring(&table, grid, class, ring, tol))
        .collect::<Result<_>>()?;

    let hyp = hypothesis(params, class);
    let mut report = CertificationReport {
        params: *params,
        class,
        grid: grid.clone(),
        min_margin: f64::INFINITY,
        worst_point: Complex64::new(0.0, 0.0),
        hypothesis_satisfied: hyp.is_some_and(|h| h.satisfied),
        hypothesis_slack: hyp.map(|h| h.slack),
        certified: false,
        per_ring_margins: Vec::with_capacity(grid.rings()),
        zero_in_disk: false,
    };
    let mut zero_at = None;
    for (ring, outcome) in outcomes.iter().enumerate() {
        match *outcome {
            RingOutcome::Margin { value, angle } => {
                report.per_ring_margins.push(value);
                if value < report.min_margin && zero_at.is_none() {
                    report.min_margin = value;
                    report.worst_point = grid.point(ring, angle);
                }
            }
            RingOutcome::Zero { angle } => {
                report.per_ring_margins.push(f64::NEG_INFINITY);
                if zero_at.is_none() {
                    zero_at = Some(grid.point(ring, angle));
                }
            }
        }
    }
    if let Some(z) = zero_at {
        report.min_margin = f64::NEG_INFINITY;
        report.worst_point = z;
        report.zero_in_disk = true;
        return Err(Error::ZeroInDisk(Box::new(report)));
    }
    report.certified = report.min_margin > 0.0;
    Ok(report)
}

/// `min, min+step, …` up to `max` (inclusive, with a small rounding allowance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl ParamRange {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite() && step > 0.0) {
            return Err(Error::Precondition(format!(
                "range needs finite bounds and a positive step, got [{min}, {max}] step {step}"
            )));
        }
        Ok(Self { min, max, step })
    }

    pub fn single(x: f64) -> Self {
        Self {
            min: x,
            max: x,
            step: 1.0,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.max < self.min {
            return Vec::new();
        }
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        // snap to 12 decimals so lattice points print as written
        (0..count)
            .map(|i| ((self.min + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(rename = "L")]
    pub l: f64,
    pub eta: f64,
    pub slack: Option<f64>,
    pub min_margin: Option<f64>,
    pub certified: bool,
    pub error: Option<String>,
}

/// Certify `class` on every point of a real `(L, η)` lattice.
///
/// Per-point failures are kept in the row and never abort the scan.
pub fn parameter_scan(
    l_range: &ParamRange,
    eta_range: &ParamRange,
    class: StarlikeClass,
    grid: &ScanGrid,
    tol: f64,
) -> Vec<ScanRow> {
    let lattice: Vec<(f64, f64)> = l_range
        .values()
        .into_iter()
        .flat_map(|l| eta_range.values().into_iter().map(move |eta| (l, eta)))
        .collect();
    lattice
        .into_par_iter()
        .map(|(l, eta)| {
            let mut row = ScanRow {
                l,
                eta,
                slack: None,
                min_margin: None,
                certified: false,
                error: None,
            };
            let params = match CoulombParams::real(l, eta) {
                Ok(p) => p,
                Err(e) => {
                    row.error = Some(e.to_string());
                    return row;
                }
            };
            row.slack = hypothesis(&params, class).map(|h| h.slack);
            match certify(&params, class, grid, tol) {
                Ok(report) => {
                    row.min_margin = Some(report.min_margin);
                    row.certified = report.certified;
                }
                Err(Error::ZeroInDisk(report)) => {
                    row.min_margin = Some(report.min_margin);
                    row.error = Some(format!("g vanishes near {}", report.worst_point));
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect()
}

/// CSV with header `L,eta,slack,min_margin,certified`; missing values are empty.
pub fn write_scan_csv<W: io::Write>(rows: &[ScanRow], writer: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["L", "eta", "slack", "min_margin", "certified"])?;
    let opt = |x: Option<f64>| x.filter(|v| v.is_finite()).map(fmt_f64).unwrap_or_default();
    for row in rows {
        out.write_record([
            fmt_f64(row.l),
            fmt_f64(row.eta),
            opt(row.slack),
            opt(row.min_margin),
            row.certified.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn margins_at_reference_points() {
        assert_eq!(lemniscate_margin(c(1.0, 0.0)), 1.0);
        assert!(lemniscate_margin(c(SQRT_2, 0.0)).abs() < 1e-15);
        assert_eq!(lemniscate_margin(c(0.0, 1.0)), -1.0);
        assert_eq!(exponential_margin(c(1.0, 0.0)), 1.0);
        assert!(exponential_margin(c(E, 0.0)).abs() < 1e-15);
        assert_eq!(exponential_margin(c(-1.0, 0.0)), f64::NEG_INFINITY);
        assert_eq!(exponential_margin(c(0.0, 0.0)), f64::NEG_INFINITY);
        assert_eq!(classical_margin(c(1.0, 0.0)), 1.0);
        assert_eq!(classical_margin(c(0.0, 1.0)), 0.0);
        assert_eq!(classical_margin(c(-2.0, 1.0)), -2.0);
        for class in StarlikeClass::ALL {
            assert!(class.margin(c(1.0, 0.0)) > 0.0);
        }
    }

    #[test]
    fn left_loop_is_rejected() {
        assert!(lemniscate_margin(c(-1.0, 0.0)) > 0.0);
        assert!(StarlikeClass::Lemniscate.margin(c(-1.0, 0.0)) < 0.0);
    }

    #[test]
    fn conditions() {
        let p = CoulombParams::real(0.5, 0.0).unwrap();
        assert!((theorem1_condition(&p).slack - SQRT_2 / 4.0).abs() < 1e-15);
        assert!((theorem2_condition(&p).slack - 0.232_544_157_934_830_6).abs() < 1e-12);
        let p = CoulombParams::real(0.5, 0.1).unwrap();
        assert!((theorem1_condition(&p).slack - 0.153_553_390_593_273_8).abs() < 1e-12);
        assert!((theorem2_condition(&p).slack - 0.032_544_157_934_830_6).abs() < 1e-12);
        let p = CoulombParams::real(0.5, 0.2).unwrap();
        assert!(!theorem1_condition(&p).satisfied);
        assert!((theorem1_condition(&p).slack + 0.046_446_609_406_726_2).abs() < 1e-12);
        let p = CoulombParams::real(0.6, 0.0).unwrap();
        let want = (E - 1.0) / (E * E) - (E - 1.0) * 0.2;
        assert!((theorem2_condition(&p).slack - want).abs() < 1e-15);
        assert!((want + 0.111_111_5).abs() < 1e-6);
        assert!(!theorem2_condition(&p).satisfied);
    }

    #[test]
    fn ranges() {
        assert!(ParamRange::new(1.0, 0.0, 0.1).unwrap().values().is_empty());
        assert_eq!(ParamRange::new(0.4, 0.6, 0.1).unwrap().values(), vec![0.4, 0.5, 0.6]);
        assert_eq!(ParamRange::new(-0.1, 0.1, 0.01).unwrap().values().len(), 21);
        assert!(ParamRange::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(ScanGrid::from_radii(vec![0.5, 0.4], 10).is_err());
        assert!(ScanGrid::from_radii(vec![0.5, 1.0], 10).is_err());
        let g = ScanGrid::default();
        assert_eq!((g.rings(), g.angles_per_ring(), g.r_max()), (40, 720, 0.999));
    }

    #[test]
    fn sine_is_starlike() {
        let p = CoulombParams::real(0.0, 0.0).unwrap();
        let grid = ScanGrid::uniform(0.999, 10, 180).unwrap();
        let r = certify(&p, StarlikeClass::Classical, &grid, 1e-12).unwrap();
        assert!(r.certified);
        assert!(!r.hypothesis_satisfied && r.hypothesis_slack.is_none());
        // Re(z cot z) is smallest at z = ±0.999
        assert!((r.min_margin - 0.999 / 0.999f64.tan()).abs() < 1e-9);
    }

    #[test]
    fn report_points_at_its_minimum() {
        let p = CoulombParams::real(0.5, 0.1).unwrap();
        let grid = ScanGrid::uniform(0.999, 8, 90).unwrap();
        let r = certify(&p, StarlikeClass::Exponential, &grid, 1e-12).unwrap();
        let w = crate::analytic::eval_p(&p, r.worst_point, 1e-12).unwrap().p;
        assert!((StarlikeClass::Exponential.margin(w) - r.min_margin).abs() < 1e-10);
        let ring_min = r.per_ring_margins.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(ring_min, r.min_margin);
    }

    #[test]
    fn zero_inside_disk_is_reported() {
        // g = sin for (0, 0): a zero at π sits on a ring of radius π/4·4
        let p = CoulombParams::real(0.0, 0.0).unwrap();
        let grid = ScanGrid::from_radii(vec![0.5], 4).unwrap();
        assert!(certify(&p, StarlikeClass::Classical, &grid, 1e-12).is_ok());
        // large η pushes a zero of g into the disk
        let p = CoulombParams::real(0.0, -3.0).unwrap();
        let zs = crate::zeros::find_zeros(&p, 1.0, 1e-12).unwrap();
        let rho = zs.zeros()[0].location;
        let grid = ScanGrid::from_radii(vec![rho.norm()], 1).unwrap();
        // put the only grid point right on the zero
        assert!(rho.im.abs() < 1e-12 && rho.re > 0.0);
        match certify(&p, StarlikeClass::Lemniscate, &grid, 1e-12) {
            Err(Error::ZeroInDisk(report)) => {
                assert!(!report.certified);
                assert!(report.zero_in_disk);
                assert_eq!(report.min_margin, f64::NEG_INFINITY);
            }
            other => panic!("expected ZeroInDisk, got {other:?}"),
        }
    }

    #[test]
    fn csv_layout() {
        let rows = vec![ScanRow {
            l: 0.5,
            eta: 0.0,
            slack: Some(SQRT_2 / 4.0),
            min_margin: None,
            certified: false,
            error: Some("x".into()),
        }];
        let mut buf = Vec::new();
        write_scan_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "L,eta,slack,min_margin,certified\n5.0000000000000000e-1,0.0000000000000000e0,3.5355339059327379e-1,,false\n"
        );
    }
}
