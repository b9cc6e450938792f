//! BV stability property checks: the monotone-rotation argument (a rotated
//! monotone graph is the graph of a 1-Lipschitz function) and subadditivity
//! of oscillation under graph sums.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::SampledFunction;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RotationCheck {
    pub max_abs_slope: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Rotate the sampled graph of a monotone function clockwise by π/4 and
/// measure the worst difference quotient; 1-Lipschitz means ≤ 1 + tol.
pub fn rotate_monotone_check(f: &SampledFunction, tolerance: f64) -> Result<RotationCheck> {
    let mut nondecreasing = true;
    let mut nonincreasing = true;
    let mut first_violation = None;
    for i in 1..f.len() {
        let d = f.values[i] - f.values[i - 1];
        if d > 0.0 {
            nonincreasing = false;
        }
        if d < 0.0 {
            nondecreasing = false;
        }
        if !nondecreasing && !nonincreasing {
            first_violation = Some(f.t(i));
            break;
        }
    }
    if let Some(at) = first_violation {
        return Err(Error::NotMonotone { at });
    }
    let sign = if nondecreasing { 1.0 } else { -1.0 };

    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut pts: Vec<(f64, f64)> = (0..f.len())
        .map(|i| {
            let x = f.t(i);
            let y = sign * f.values[i];
            ((x + y) * inv_sqrt2, (y - x) * inv_sqrt2)
        })
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite samples"));

    let mut max_abs_slope: f64 = 0.0;
    for w in pts.windows(2) {
        let du = w[1].0 - w[0].0;
        if du <= 0.0 {
            continue;
        }
        max_abs_slope = max_abs_slope.max(((w[1].1 - w[0].1) / du).abs());
    }
    Ok(RotationCheck {
        max_abs_slope,
        pass: max_abs_slope <= 1.0 + tolerance,
        tolerance,
    })
}

/// Oscillation subadditivity under graph sums on seeded random subintervals:
/// osc(g+h, J) ≤ osc(g, J) + osc(h, J). The comparison allows a rounding
/// slack of a few ulps of the sample magnitudes.
pub fn graph_sum_osc_check(
    g: &SampledFunction,
    h: &SampledFunction,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    if g.domain_lo.to_bits() != h.domain_lo.to_bits()
        || g.step.to_bits() != h.step.to_bits()
        || g.len() != h.len()
    {
        return Err(Error::GridMismatch(format!(
            "lo {} vs {}, step {} vs {}, len {} vs {}",
            g.domain_lo,
            h.domain_lo,
            g.step,
            h.step,
            g.len(),
            h.len()
        )));
    }
    let n = g.len();
    let scale = g
        .values
        .iter()
        .chain(&h.values)
        .fold(0f64, |m, v| m.max(v.abs()));
    let slack = 8.0 * f64::EPSILON * (1.0 + scale);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        let (mut gmin, mut gmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut hmin, mut hmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut smin, mut smax) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in i..=j {
            let gv = g.values[k];
            let hv = h.values[k];
            let sv = gv + hv;
            gmin = gmin.min(gv);
            gmax = gmax.max(gv);
            hmin = hmin.min(hv);
            hmax = hmax.max(hv);
            smin = smin.min(sv);
            smax = smax.max(sv);
        }
        if (smax - smin) > (gmax - gmin) + (hmax - hmin) + slack {
            return Ok(false);
        }
    }
    Ok(true)
}
