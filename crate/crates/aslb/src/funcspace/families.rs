//! The lacunary function families: Weierstrass sums `Σ aⁿ cos(bⁿ t)` and
//! Takagi sums `Σ aⁿ D(bⁿ t)` with the 1-periodic sawtooth `D`.
//!
//! Both families are truncated at the tail bound `a^M/(1-a) ≤ tol`, so the
//! returned value is within `truncation_tol` of the series value regardless of
//! the parameters. For integer `b` the Takagi evaluator reduces `bⁿ t mod 1`
//! with a scaled-fraction recurrence instead of forming `bⁿ·t`; for `b` a power
//! of two every step of that recurrence is exact in f64, which makes dyadic
//! arguments evaluate to the exact finite sum and supports sub-ulp offset
//! evaluation around a fixed base point (used by the folding verifier).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1-periodic sawtooth: `D(t) = t` on `[0, 1/2]`, `D(t) = 1 - t` on `[1/2, 1]`.
pub fn sawtooth(t: f64) -> f64 {
    let u = t - t.floor();
    if u <= 0.5 {
        u
    } else {
        1.0 - u
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassSpec {
    pub a: f64,
    pub b: f64,
    pub truncation_tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TakagiSpec {
    pub a: f64,
    pub b: f64,
    pub truncation_tol: f64,
}

fn validate_lacunary(a: f64, b: f64, tol: f64, family: &str) -> Result<()> {
    if !(a.is_finite() && a > 0.0 && a < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "{family}: a = {a} must lie in (0, 1)"
        )));
    }
    // a·b ≥ 1 with the boundary admitted: the classical blancmange is
    // exactly a·b = 1 (α = 1 there).
    if !(b.is_finite() && b > 1.0 && a * b >= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "{family}: b = {b} must be at least 1/a = {}",
            1.0 / a
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "{family}: truncation_tol = {tol} must be positive"
        )));
    }
    Ok(())
}

/// Number of terms `M` such that the tail `a^M/(1-a)` is at most `tol`.
fn term_count(a: f64, tol: f64) -> usize {
    let m = ((tol * (1.0 - a)).ln() / a.ln()).ceil();
    if m.is_finite() && m > 1.0 {
        m as usize
    } else {
        1
    }
}

impl WeierstrassSpec {
    pub fn new(a: f64, b: f64, truncation_tol: f64) -> Result<Self> {
        validate_lacunary(a, b, truncation_tol, "weierstrass")?;
        Ok(Self {
            a,
            b,
            truncation_tol,
        })
    }

    /// Hölder exponent `α = -log_b(a)`, in (0, 1) whenever the spec is valid.
    pub fn alpha(&self) -> f64 {
        -self.a.ln() / self.b.ln()
    }

    pub fn terms(&self) -> usize {
        term_count(self.a, self.truncation_tol)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut sum = 0.0;
        let mut apow = 1.0;
        let mut bpow = 1.0;
        for _ in 0..self.terms() {
            let arg = bpow * t;
            if !arg.is_finite() {
                break;
            }
            sum += apow * arg.cos();
            apow *= self.a;
            bpow *= self.b;
        }
        sum
    }
}

impl TakagiSpec {
    pub fn new(a: f64, b: f64, truncation_tol: f64) -> Result<Self> {
        validate_lacunary(a, b, truncation_tol, "takagi")?;
        Ok(Self {
            a,
            b,
            truncation_tol,
        })
    }

    pub fn alpha(&self) -> f64 {
        -self.a.ln() / self.b.ln()
    }

    pub fn terms(&self) -> usize {
        term_count(self.a, self.truncation_tol)
    }

    fn b_is_integer(&self) -> bool {
        self.b.fract() == 0.0 && self.b <= 2f64.powi(52)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_offset(t, 0.0)
    }

    /// Evaluate `T(base + delta)` without forming `base + delta`.
    ///
    /// For integer `b` the argument of each term is reduced mod 1 through the
    /// recurrences `u_{n+1} = frac(b·u_n)` and `w_{n+1} = sfrac(b·w_n)` applied
    /// to the base and the offset separately, using `frac(A+B) =
    /// frac(frac A + frac B)`. For `b` a power of two every step is exact, so
    /// `delta` far below one ulp of `base` still moves the result.
    pub fn eval_offset(&self, base: f64, delta: f64) -> f64 {
        let terms = self.terms();
        let mut sum = 0.0;
        let mut apow = 1.0;
        if self.b_is_integer() {
            let mut u = base - base.floor();
            let mut w = delta.fract();
            // delta may exceed 1 in magnitude; its integer part is periodic-away.
            for _ in 0..terms {
                sum += apow * sawtooth(u + w);
                apow *= self.a;
                let bu = self.b * u;
                u = bu - bu.floor();
                let bw = self.b * w;
                w = bw - bw.trunc();
            }
        } else {
            let t = base + delta;
            let mut bpow = 1.0;
            for _ in 0..terms {
                let arg = bpow * t;
                if !arg.is_finite() {
                    break;
                }
                sum += apow * sawtooth(arg);
                apow *= self.a;
                bpow *= self.b;
            }
        }
        sum
    }

    /// Whether `eval_offset` resolves offsets below one ulp of the base point.
    pub fn has_exact_offset_path(&self) -> bool {
        self.b_is_integer() && self.b.log2().fract() == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sawtooth_anchor_values() {
        assert_eq!(sawtooth(0.0), 0.0);
        assert_eq!(sawtooth(0.5), 0.5);
        assert_eq!(sawtooth(0.75), 0.25);
        // 1-periodicity on a few representative points
        assert_eq!(sawtooth(3.25), sawtooth(0.25));
        assert_eq!(sawtooth(-0.25), sawtooth(0.75));
        assert!(sawtooth(1e9 + 0.3) >= 0.0 && sawtooth(1e9 + 0.3) <= 0.5);
    }

    #[test]
    fn weierstrass_geometric_at_zero() {
        let spec = WeierstrassSpec::new(0.5, 3.0, 1e-12).unwrap();
        // cos(0) = 1 for every term, so the sum is 1/(1-a) = 2.
        assert!((spec.eval(0.0) - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn weierstrass_matches_long_direct_sum() {
        let spec = WeierstrassSpec::new(0.5, 3.0, 1e-12).unwrap();
        let t = std::f64::consts::PI;
        // Oracle: 200-term direct summation.
        let mut oracle = 0.0;
        for n in 0..200 {
            oracle += 0.5f64.powi(n) * (3.0f64.powi(n) * t).cos();
        }
        assert!((spec.eval(t) - oracle).abs() <= 1e-12 + 1e-9);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(WeierstrassSpec::new(0.9, 1.0, 1e-9).is_err()); // b <= 1/a
        assert!(WeierstrassSpec::new(1.2, 3.0, 1e-9).is_err());
        assert!(TakagiSpec::new(0.5, 2.0, 0.0).is_err());
        assert!(TakagiSpec::new(0.5, 1.5, 1e-9).is_err()); // b <= 1/a = 2
    }

    #[test]
    fn takagi_trivial_points() {
        let spec = TakagiSpec::new(0.5, 2.0, 1e-12).unwrap();
        assert_eq!(spec.eval(0.0), 0.0);
        // Only the n = 0 term survives at t = 1/2.
        assert_eq!(spec.eval(0.5), 0.5);
    }

    #[test]
    fn takagi_dyadic_is_exact_finite_sum() {
        let a = 0.5f64.sqrt();
        let spec = TakagiSpec::new(a, 2.0, 1e-12).unwrap();
        // t = 1/4: D(1/4) = 1/4, D(1/2) = 1/2, all later terms vanish.
        let oracle = 0.25 + a * 0.5;
        assert_eq!(spec.eval(0.25), oracle);
        // Truncation invariance at dyadics: the tail is exactly zero.
        let loose = TakagiSpec::new(a, 2.0, 1e-3).unwrap();
        let tight = TakagiSpec::new(a, 2.0, 1e-15).unwrap();
        for k in 0..64u32 {
            let t = k as f64 / 64.0;
            assert_eq!(loose.eval(t), tight.eval(t), "t = {t}");
        }
    }

    #[test]
    fn truncation_honesty() {
        // Doubling the term count moves any value by less than truncation_tol.
        let tol = 1e-9;
        let w = WeierstrassSpec::new(0.6, 2.5, tol).unwrap();
        let tk = TakagiSpec::new(0.7, 3.0, tol).unwrap();
        for k in 0..50 {
            let t = k as f64 / 50.0;
            let mut w2 = 0.0;
            let (mut apow, mut bpow) = (1.0, 1.0);
            for _ in 0..2 * w.terms() {
                w2 += apow * (bpow * t).cos();
                apow *= w.a;
                bpow *= w.b;
            }
            assert!((w.eval(t) - w2).abs() < tol);

            let mut t2 = 0.0;
            let (mut apow, mut u) = (1.0, t - t.floor());
            for _ in 0..2 * tk.terms() {
                t2 += apow * sawtooth(u);
                apow *= tk.a;
                let bu = tk.b * u;
                u = bu - bu.floor();
            }
            assert!((tk.eval(t) - t2).abs() < tol);
        }
    }

    #[test]
    fn takagi_offset_path_consistent_at_coarse_offsets() {
        let spec = TakagiSpec::new(0.5f64.sqrt(), 2.0, 1e-12).unwrap();
        // Where base + delta is exactly representable, both routes agree.
        for k in 1..40 {
            let base = 0.5;
            let delta = k as f64 * 2f64.powi(-20);
            let direct = spec.eval(base + delta);
            let offset = spec.eval_offset(base, delta);
            assert!((direct - offset).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn takagi_offset_path_resolves_sub_ulp() {
        let spec = TakagiSpec::new(0.5f64.sqrt(), 2.0, 1e-14).unwrap();
        assert!(spec.has_exact_offset_path());
        let base = 0.5 + 1.0 / 3.0; // non-dyadic base near the fold region
        // Offsets far below ulp(base) ≈ 2^-53 must still move the value, with
        // spread of roughly c·span^α for a 1/2-Hölder graph.
        let vals: Vec<f64> = (0..=8)
            .map(|k| spec.eval_offset(base, k as f64 * 2f64.powi(-70)))
            .collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max)
            - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 1e-14 && spread < 1e-8, "spread = {spread:e}");
    }
}
