//! Covering numbers by column oscillation, box-dimension and Assouad-spectrum
//! estimation, closed-form bound audits, and the BV stability property checks.

mod bv;
mod count;
mod dimension;

pub use bv::{graph_sum_osc_check, rotate_monotone_check, RotationCheck};
pub use count::{column_cover_count, CoverReport};
pub use dimension::{
    admissible_ladder, audit_upper_bound, box_dimension, regularized_spectrum, spectrum_at_theta,
    AuditOptions, AuditReport, AuditRow, BoxDimension, Regularity, SpectrumEstimate,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed axes-oriented square of side 2·half_side centered at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Square {
    pub center: (f64, f64),
    pub half_side: f64,
}

impl Square {
    pub fn new(center: (f64, f64), half_side: f64) -> Result<Self> {
        if !(half_side > 0.0 && half_side.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "half_side = {half_side} must be positive"
            )));
        }
        Ok(Self { center, half_side })
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.center.0 - self.half_side, self.center.0 + self.half_side)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.center.1 - self.half_side, self.center.1 + self.half_side)
    }

    pub fn contains(&self, t: f64, v: f64) -> bool {
        let (xl, xr) = self.x_range();
        let (yl, yr) = self.y_range();
        t >= xl && t <= xr && v >= yl && v <= yr
    }
}

/// A scale pair (R, r) tied by the canonical choice r = R^{1/θ}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalePair {
    pub big: f64,
    pub theta: f64,
    pub small: f64,
}

impl ScalePair {
    pub fn new(big: f64, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::ThetaOutOfRange {
                theta,
                lo: 0.0,
                hi: 1.0,
            });
        }
        if !(big > 0.0 && big < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "R = {big} must lie in (0, 1)"
            )));
        }
        let small = big.powf(1.0 / theta);
        Ok(Self { big, theta, small })
    }
}

/// θ-grid of estimated covering exponents with per-point evidence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumCurve {
    pub points: Vec<SpectrumPoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub theta: f64,
    pub exponent: f64,
    pub evidence: Evidence,
}

/// The maximizing (center, R, r, count) behind an exponent estimate, plus the
/// noise-robust regression variant over the ladder.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Evidence {
    pub center: (f64, f64),
    pub big: f64,
    pub small: f64,
    pub count: u64,
    pub regression_exponent: f64,
}

impl SpectrumCurve {
    pub fn new(points: Vec<SpectrumPoint>) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[0].theta < w[1].theta) {
                return Err(Error::InvalidParameter(
                    "spectrum curve thetas must strictly increase".into(),
                ));
            }
        }
        for p in &points {
            if !(0.0..=2.0).contains(&p.exponent) {
                return Err(Error::InvalidParameter(format!(
                    "exponent {} at theta {} outside [0, 2]",
                    p.exponent, p.theta
                )));
            }
        }
        Ok(Self { points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_pair_ordering() {
        let sp = ScalePair::new(0.25, 0.5).unwrap();
        assert!(sp.small == 0.25f64.powf(2.0));
        assert!(0.0 < sp.small && sp.small < sp.big && sp.big < 1.0);
        assert!(ScalePair::new(0.25, 1.2).is_err());
        assert!(ScalePair::new(1.5, 0.5).is_err());
    }

    #[test]
    fn curve_validation() {
        let mk = |theta: f64, exponent: f64| SpectrumPoint {
            theta,
            exponent,
            evidence: Evidence {
                center: (0.0, 0.0),
                big: 0.5,
                small: 0.25,
                count: 1,
                regression_exponent: exponent,
            },
        };
        assert!(SpectrumCurve::new(vec![mk(0.2, 1.3), mk(0.4, 1.5)]).is_ok());
        assert!(SpectrumCurve::new(vec![mk(0.4, 1.3), mk(0.2, 1.5)]).is_err());
        assert!(SpectrumCurve::new(vec![mk(0.2, 2.5)]).is_err());
    }
}
