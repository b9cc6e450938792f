//! Hölder witnesses: the (α, C, c, r₀) bundle certifying the upper bound
//! |f(t)−f(s)| ≤ C|t−s|^α and the lower oscillation osc(f,I) ≥ c|I|^α.
//!
//! The constants are never hard-coded for a family; they are measured from
//! samples over dyadic interval/pair ladders. A measured witness is an
//! empirical certificate, not a theorem.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::sampled::SampledFunction;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderWitness {
    pub alpha: f64,
    pub c_upper: f64,
    pub c_lower: f64,
    pub r0: f64,
}

impl HolderWitness {
    pub fn new(alpha: f64, c_upper: f64, c_lower: f64, r0: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must lie in (0, 1)"
            )));
        }
        if !(c_upper > 0.0 && c_lower > 0.0 && c_lower <= c_upper) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < c_lower <= c_upper, got c_lower = {c_lower}, c_upper = {c_upper}"
            )));
        }
        if !(r0 > 0.0) {
            return Err(Error::InvalidParameter(format!("r0 = {r0} must be > 0")));
        }
        Ok(Self {
            alpha,
            c_upper,
            c_lower,
            r0,
        })
    }
}

/// Measure a Hölder witness from samples.
///
/// C is the max of |Δf|/|Δt|^α over all consecutive pairs plus strided pairs
/// at every dyadic separation; c is the min of osc(f, I)/|I|^α over dyadic
/// intervals with 4·step ≤ |I| ≤ r0 at staggered positions, plus seeded random
/// intervals. r0 is capped at the domain length.
pub fn measure_witness(
    f: &SampledFunction,
    alpha: f64,
    r0: f64,
    seed: u64,
) -> Result<HolderWitness> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must lie in (0, 1)"
        )));
    }
    let span = f.domain_hi - f.domain_lo;
    let r0 = r0.min(span);
    if !(r0 > 4.0 * f.step) {
        return Err(Error::InvalidParameter(format!(
            "r0 = {r0} not resolvable at grid step {}",
            f.step
        )));
    }
    let n = f.len();

    // Upper constant: strided pair scan at every dyadic separation.
    let mut c_upper: f64 = 0.0;
    let mut sep = 1usize;
    while sep < n {
        let dt = sep as f64 * f.step;
        let w = dt.powf(alpha);
        let stride = (n / 8192).max(1);
        let mut i = 0usize;
        while i + sep < n {
            let d = (f.values[i + sep] - f.values[i]).abs();
            c_upper = c_upper.max(d / w);
            i += stride;
        }
        sep *= 2;
    }

    // Lower constant: dyadic interval ladder, lengths r0·2^{-d} down to the
    // resolution floor, each at staggered positions, plus random intervals.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_lower = f64::INFINITY;
    let mut len = r0;
    while len >= 4.0 * f.step {
        let w = len.powf(alpha);
        let positions = 256usize;
        for k in 0..positions {
            let frac = k as f64 / positions as f64;
            let lo = f.domain_lo + frac * (span - len);
            if let Some(o) = grid_osc(f, lo, lo + len) {
                c_lower = c_lower.min(o / w);
            }
        }
        for _ in 0..64 {
            let lo = f.domain_lo + rng.gen::<f64>() * (span - len);
            if let Some(o) = grid_osc(f, lo, lo + len) {
                c_lower = c_lower.min(o / w);
            }
        }
        len *= 0.5;
    }
    if !c_lower.is_finite() || c_lower <= 0.0 {
        return Err(Error::InvalidParameter(
            "measured lower oscillation constant is not positive; \
             the function does not witness the co-Hölder condition at this resolution"
                .into(),
        ));
    }
    HolderWitness::new(alpha, c_upper.max(c_lower), c_lower, r0)
}

fn grid_osc(f: &SampledFunction, lo: f64, hi: f64) -> Option<f64> {
    let (a, b) = f.index_range(lo, hi)?;
    if b <= a {
        return None;
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in &f.values[a..=b] {
        min = min.min(v);
        max = max.max(v);
    }
    Some(max - min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::families::TakagiSpec;
    use crate::funcspace::sampled::{sample_family, FamilySpec};

    #[test]
    fn takagi_witness_is_sane() {
        let a = 0.5f64.sqrt();
        let spec = FamilySpec::Takagi(TakagiSpec::new(a, 2.0, 1e-12).unwrap());
        let f = sample_family(&spec, 0.0, 1.0, (1 << 16) + 1).unwrap();
        let w = measure_witness(&f, 0.5, 0.1, 7).unwrap();
        assert!(w.c_lower > 0.05, "c = {}", w.c_lower);
        assert!(w.c_upper < 10.0, "C = {}", w.c_upper);
        assert!(w.c_lower <= w.c_upper);
        // The measured constants must actually certify fresh random pairs.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..2000 {
            let i = rng.gen_range(0..f.len());
            let j = rng.gen_range(0..f.len());
            if i == j {
                continue;
            }
            let dt = (f.t(i) - f.t(j)).abs();
            let df = (f.values[i] - f.values[j]).abs();
            assert!(df <= w.c_upper * dt.powf(0.5) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn witness_validation() {
        assert!(HolderWitness::new(0.5, 1.0, 2.0, 0.1).is_err()); // c > C
        assert!(HolderWitness::new(1.5, 1.0, 0.5, 0.1).is_err());
        assert!(HolderWitness::new(0.5, 1.0, 0.5, 0.0).is_err());
    }
}
