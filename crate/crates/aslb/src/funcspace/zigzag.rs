//! The Sobolev zigzag: a piecewise linear graph oscillating between y = x and
//! y = -x with vertices (a_m, (-1)^m a_m), a_m ↓ 0. The plain sequence is
//! a_m = m^{1-s}; the log-corrected borderline variant is a_m = m^{1-s} log⁻²m
//! for m ≥ 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZigzagVariant {
    Plain,
    LogCorrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZigzagSpec {
    pub s: f64,
    pub variant: ZigzagVariant,
    pub m_max: u64,
}

impl ZigzagSpec {
    pub fn new(s: f64, variant: ZigzagVariant, m_max: u64) -> Result<Self> {
        if !(s.is_finite() && s > 2.0) {
            return Err(Error::InvalidSpec(format!("zigzag: s = {s} must be > 2")));
        }
        if m_max < 2 {
            return Err(Error::InvalidSpec(format!(
                "zigzag: m_max = {m_max} must be >= 2"
            )));
        }
        Ok(Self { s, variant, m_max })
    }

    /// First vertex index: 1 for the plain sequence, 2 for the log-corrected
    /// one (log(1) = 0 would divide by zero).
    pub fn m_min(&self) -> u64 {
        match self.variant {
            ZigzagVariant::Plain => 1,
            ZigzagVariant::LogCorrected => 2,
        }
    }

    /// The decreasing amplitude sequence a_m.
    pub fn amplitude(&self, m: u64) -> f64 {
        let mf = m as f64;
        match self.variant {
            ZigzagVariant::Plain => mf.powf(1.0 - self.s),
            ZigzagVariant::LogCorrected => mf.powf(1.0 - self.s) / mf.ln().powi(2),
        }
    }

    /// Gap ε_m = a_m - a_{m+1}.
    pub fn gap(&self, m: u64) -> f64 {
        self.amplitude(m) - self.amplitude(m + 1)
    }

    /// Vertex z_m = (a_m, (-1)^m a_m).
    pub fn vertex(&self, m: u64) -> (f64, f64) {
        let a = self.amplitude(m);
        if m % 2 == 0 {
            (a, a)
        } else {
            (a, -a)
        }
    }
}

/// Breakpoint interpolant with strictly increasing x.
///
/// Evaluation at a stored breakpoint returns the stored y bit-for-bit; on the
/// open segment the interpolation is anchored at the right breakpoint,
/// `y = y_hi + slope·(x - x_hi)`, which reproduces the zigzag's closed-form
/// case split exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearFunction {
    breakpoints: Vec<(f64, f64)>,
}

impl PiecewiseLinearFunction {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidSpec(
                "piecewise linear function needs at least 2 breakpoints".into(),
            ));
        }
        for w in breakpoints.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidSpec(format!(
                    "breakpoint abscissae must strictly increase: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if breakpoints
            .iter()
            .any(|&(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::InvalidSpec("non-finite breakpoint".into()));
        }
        Ok(Self { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn domain(&self) -> (f64, f64) {
        (
            self.breakpoints[0].0,
            self.breakpoints[self.breakpoints.len() - 1].0,
        )
    }

    /// Evaluate at `x`; arguments outside the domain clamp to the end values.
    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.breakpoints;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        if x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        // Largest k with x_k <= x.
        let mut lo = 0usize;
        let mut hi = pts.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if pts[mid].0 <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (x_lo, y_lo) = pts[lo];
        if x == x_lo {
            return y_lo;
        }
        let (x_hi, y_hi) = pts[hi];
        let slope = (y_hi - y_lo) / (x_hi - x_lo);
        y_hi + slope * (x - x_hi)
    }
}

/// Build the zigzag as a breakpoint list: (0, 0) followed by z_{m_max}, …,
/// z_{m_min} in increasing x.
pub fn build_zigzag(spec: &ZigzagSpec) -> Result<PiecewiseLinearFunction> {
    ZigzagSpec::new(spec.s, spec.variant, spec.m_max)?;
    let mut pts = Vec::with_capacity((spec.m_max - spec.m_min() + 2) as usize);
    pts.push((0.0, 0.0));
    for m in (spec.m_min()..=spec.m_max).rev() {
        pts.push(spec.vertex(m));
    }
    PiecewiseLinearFunction::new(pts)
}
