//! Local maxima of sampled functions and the punctured-window radius δ(m):
//! the largest ρ with f(x) < f(m) strictly on (m−ρ, m+ρ) \ {m}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{PointEval, SampledFunction};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaRadius {
    pub m: f64,
    pub delta: f64,
}

/// Grid points that are strict maxima over ±window neighbors (interior only),
/// refined by golden-section on the generator when one is recorded.
///
/// A plateau of equal values strictly above its flanks counts as one maximum
/// reported at its leftmost point (grid ties carry no canonical choice; the
/// boundary-case blancmange produces them in abundance on dyadic grids).
pub fn find_local_maxima(f: &SampledFunction, window: usize) -> Result<Vec<f64>> {
    if window < 1 {
        return Err(Error::InvalidParameter("window must be >= 1".into()));
    }
    let n = f.len();
    let mut out = Vec::new();
    if n < 2 * window + 1 {
        return Ok(out);
    }
    let evaluator = f.evaluator();
    let mut i = window;
    while i < n - window {
        let v = f.values[i];
        // Maximal plateau [i, j] of equal values.
        let mut j = i;
        while j + 1 < n && f.values[j + 1] == v {
            j += 1;
        }
        if j + window < n {
            let mut is_max = true;
            for k in i.saturating_sub(window)..i {
                if f.values[k] >= v {
                    is_max = false;
                    break;
                }
            }
            if is_max {
                for k in j + 1..=(j + window) {
                    if f.values[k] >= v {
                        is_max = false;
                        break;
                    }
                }
            }
            if is_max {
                let t = f.t(i);
                match &evaluator {
                    Some(gen) => {
                        let (tr, vr) = refine_maximum(gen.as_ref(), t, f.step, 40);
                        out.push(if vr > v { tr } else { t });
                    }
                    None => out.push(t),
                }
            }
        }
        i = j + 1;
    }
    Ok(out)
}

/// Golden-section ascent on (t−radius, t+radius). The target need not be
/// unimodal there; the result is kept only if it beats the starting value.
pub fn refine_maximum(gen: &dyn PointEval, t: f64, radius: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = t - radius;
    let mut b = t + radius;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = gen.value(c);
    let mut fd = gen.value(d);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = gen.value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = gen.value(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// δ(m) for a grid local maximum: bidirectional scan outward until a grid
/// value reaches f(m), capped at the distance to the domain ends. The
/// reported radius is certified at grid resolution and can only undershoot
/// the true δ.
pub fn delta_radius(f: &SampledFunction, m: f64) -> Result<DeltaRadius> {
    let idx = (((m - f.domain_lo) / f.step).round() as i64).clamp(0, f.len() as i64 - 1) as usize;
    if idx == 0 || idx + 1 >= f.len() {
        return Err(Error::NotAMaximum(m));
    }
    let v = f.values[idx];
    // Plateau members are admissible inputs; the scan still stops at ties.
    if f.values[idx - 1] > v
        || f.values[idx + 1] > v
        || (f.values[idx - 1] == v && f.values[idx + 1] == v)
    {
        return Err(Error::NotAMaximum(m));
    }
    let t = f.t(idx);
    let cap_steps = idx.min(f.len() - 1 - idx);
    let mut stop = cap_steps + 1;
    for j in 1..=cap_steps {
        if f.values[idx - j] >= v || f.values[idx + j] >= v {
            stop = j;
            break;
        }
    }
    let delta = if stop > cap_steps {
        cap_steps as f64 * f.step
    } else {
        (stop - 1) as f64 * f.step
    };
    if delta <= 0.0 {
        return Err(Error::NotAMaximum(m));
    }
    Ok(DeltaRadius { m: t, delta })
}

/// Scan-based δ for the planner: works on an evaluator at `scan_step`
/// resolution around a maximum location, capped at `cap`. When the scan hits
/// the first return f(m ∓ d) ≥ f(m), the crossing is refined by bisection so
/// the rectangle's edge lands where the graph re-enters the band — the value
/// at m − δ then sits just below f(m), giving a continuous fold junction.
pub(crate) fn delta_scan(gen: &dyn PointEval, m: f64, f_m: f64, scan_step: f64, cap: f64) -> f64 {
    let max_steps = (cap / scan_step).floor() as usize;
    for j in 1..=max_steps {
        let d = j as f64 * scan_step;
        let left_hit = gen.value_at_offset(m, -d) >= f_m;
        let right_hit = gen.value_at_offset(m, d) >= f_m;
        if !(left_hit || right_hit) {
            continue;
        }
        let lo = (j - 1) as f64 * scan_step;
        let mut delta = f64::INFINITY;
        for (sign, hit) in [(-1.0, left_hit), (1.0, right_hit)] {
            if !hit {
                continue;
            }
            let mut a = lo;
            let mut b = d;
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                if gen.value_at_offset(m, sign * mid) >= f_m {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            delta = delta.min(a);
        }
        return delta;
    }
    max_steps as f64 * scan_step
}
