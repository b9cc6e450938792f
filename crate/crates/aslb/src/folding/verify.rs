//! Certificates for a folded function: the 3C-Hölder bound on sampled pairs,
//! the per-column oscillation lower bound osc(f̃, I_j) ≥ c̃·r̃ᵅ with
//! c̃ = min{1, c/2}, and the column-count lower bound N ≥ ½·c̃·r̃^{α+θ−2},
//! per square and per θ with the transferred scales r̃_k = r_k^{θ0/θ}.
//!
//! Column widths shrink like δ_k^{1/θ}; a square/θ pair whose columns fall
//! below four evaluation quanta is reported unresolvable and excluded from
//! pass/fail rather than silently measured at garbage resolution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::folding::run::FoldedFunction;
use crate::funcspace::{ulp, HolderWitness, SampledFunction};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FoldVerifyOptions {
    /// Sampled pairs for the 3C-Hölder check.
    pub pairs: usize,
    /// Columns examined per (square, θ).
    pub columns_per_square: usize,
    /// Evaluation points per column (capped by resolvability).
    pub points_per_column: usize,
    pub seed: u64,
    /// Allow the generator's sub-ulp offset path (extended precision).
    pub use_offset_path: bool,
}

impl Default for FoldVerifyOptions {
    fn default() -> Self {
        Self {
            pairs: 20_000,
            columns_per_square: 256,
            points_per_column: 33,
            seed: 2,
            use_offset_path: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HolderCheck {
    pub pairs: usize,
    /// max |f̃(t)−f̃(s)| / (3C|t−s|^α) over all sampled pairs.
    pub max_ratio: f64,
    pub worst_pair: (f64, f64),
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SquareThetaCheck {
    pub square: usize,
    pub theta: f64,
    pub r_tilde: f64,
    pub resolvable: bool,
    pub columns_total: f64,
    pub columns_checked: usize,
    /// min over checked columns of osc / (c̃·r̃^α).
    pub min_osc_ratio: f64,
    pub osc_pass: bool,
    pub count_estimate: f64,
    pub count_required: f64,
    pub count_pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoldVerifyReport {
    pub c_tilde: f64,
    pub holder: HolderCheck,
    pub checks: Vec<SquareThetaCheck>,
    pub unresolvable: usize,
    /// Hölder check and every resolvable (square, θ) check passed.
    pub all_pass: bool,
}

/// Spot-check a measured witness on fresh sampled pairs and intervals;
/// offenders come back as warning strings, never hard failures.
pub fn validate_witness(
    f: &SampledFunction,
    witness: &HolderWitness,
    trials: usize,
    seed: u64,
) -> Vec<String> {
    let mut warnings = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.len();
    let mut worst_upper: f64 = 0.0;
    let mut worst_pair = (0.0, 0.0);
    for _ in 0..trials {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let dt = (f.t(i) - f.t(j)).abs();
        let ratio = (f.values[i] - f.values[j]).abs() / (witness.c_upper * dt.powf(witness.alpha));
        if ratio > worst_upper {
            worst_upper = ratio;
            worst_pair = (f.t(i), f.t(j));
        }
    }
    if worst_upper > 1.0 + 1e-9 {
        warnings.push(format!(
            "upper Hölder exceeded: ratio {worst_upper:.6} at pair ({}, {})",
            worst_pair.0, worst_pair.1
        ));
    }
    let span = f.domain_hi - f.domain_lo;
    let mut worst_lower = f64::INFINITY;
    let mut worst_iv = (0.0, 0.0);
    for _ in 0..trials / 4 {
        let len = (4.0 * f.step) * (witness.r0 / (4.0 * f.step)).powf(rng.gen::<f64>());
        let lo = f.domain_lo + rng.gen::<f64>() * (span - len);
        if let Some((a, b)) = f.index_range(lo, lo + len) {
            if b <= a {
                continue;
            }
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for &v in &f.values[a..=b] {
                min = min.min(v);
                max = max.max(v);
            }
            let ratio = (max - min) / (witness.c_lower * len.powf(witness.alpha));
            if ratio < worst_lower {
                worst_lower = ratio;
                worst_iv = (lo, lo + len);
            }
        }
    }
    if worst_lower < 1.0 - 1e-9 {
        warnings.push(format!(
            "lower oscillation undershot: ratio {worst_lower:.6} on [{}, {}]",
            worst_iv.0, worst_iv.1
        ));
    }
    warnings
}

pub fn verify_fold(
    ff: &FoldedFunction,
    witness: &HolderWitness,
    theta_grid: &[f64],
    options: &FoldVerifyOptions,
) -> Result<FoldVerifyReport> {
    let c_tilde = (witness.c_lower / 2.0).min(1.0);
    let alpha = witness.alpha;
    let eval = ff.evaluator();
    let (lo, hi) = ff.plan.domain;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    // (a) 3C-Hölder over random and adversarial pairs.
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(options.pairs);
    let budget = options.pairs.saturating_sub(96 * ff.plan.squares.len().max(1));
    for _ in 0..budget {
        let t = lo + rng.gen::<f64>() * (hi - lo);
        let s = lo + rng.gen::<f64>() * (hi - lo);
        pairs.push((t, s));
    }
    let to_orig = |x_work: f64| -> f64 {
        if ff.plan.mirrored {
            lo + hi - x_work
        } else {
            x_work
        }
    };
    for sq in &ff.plan.squares {
        // Straddling and in-rectangle pairs at dyadic separations.
        for e in 0..32 {
            let d = sq.side * 2f64.powi(-(e % 16) - 1);
            let edge = to_orig(sq.rect_x.0);
            let m = to_orig(sq.rect_x.1);
            pairs.push((edge - d, edge + d));
            pairs.push((m - d, m + d));
            pairs.push((m - d, m - d * 0.5));
        }
    }
    let mut max_ratio: f64 = 0.0;
    let mut worst_pair = (lo, hi);
    for &(t, s) in &pairs {
        let (t, s) = (t.clamp(lo, hi), s.clamp(lo, hi));
        if t == s {
            continue;
        }
        let num = (eval.value(t) - eval.value(s)).abs();
        let den = 3.0 * witness.c_upper * (t - s).abs().powf(alpha);
        let ratio = num / den;
        if ratio > max_ratio {
            max_ratio = ratio;
            worst_pair = (t, s);
        }
    }
    let holder = HolderCheck {
        pairs: pairs.len(),
        max_ratio,
        worst_pair,
        pass: max_ratio <= 1.0 + 1e-9,
    };

    // (b) + (c) per square and per θ.
    let mut checks = Vec::new();
    let mut unresolvable = 0usize;
    for (k, sq) in ff.plan.squares.iter().enumerate() {
        let res = if options.use_offset_path {
            eval.offset_resolution(k)
        } else {
            4.0 * ulp(sq.max_location)
        };
        for &theta in theta_grid {
            let r_tilde = sq.side.powf(1.0 / theta);
            let columns_total = (sq.side / r_tilde - 1.0).floor().max(0.0);
            let resolvable = r_tilde >= 4.0 * res && columns_total >= 1.0;
            if !resolvable {
                unresolvable += 1;
                checks.push(SquareThetaCheck {
                    square: k,
                    theta,
                    r_tilde,
                    resolvable,
                    columns_total,
                    columns_checked: 0,
                    min_osc_ratio: f64::NAN,
                    osc_pass: false,
                    count_estimate: f64::NAN,
                    count_required: f64::NAN,
                    count_pass: false,
                });
                continue;
            }
            // Column indices: ends, seeded randoms, fold-crossing columns.
            let mut js: Vec<u64> = vec![0, columns_total as u64 - 1];
            let want = options.columns_per_square.max(4);
            while js.len() < want.min(columns_total as usize) {
                js.push(rng.gen_range(0..columns_total as u64));
            }
            // Fold boundary events show up as patch values touching 0/1;
            // the columns hosting them are the adversarial ones.
            let crossings: Vec<u64> = ff.patches[k]
                .unit_values
                .windows(2)
                .enumerate()
                .filter(|(_, w)| {
                    (w[0] <= 1e-6 || w[0] >= 1.0 - 1e-6) != (w[1] <= 1e-6 || w[1] >= 1.0 - 1e-6)
                })
                .map(|(i, _)| {
                    let u = i as f64 / (ff.patches[k].unit_values.len() - 1) as f64;
                    ((u * sq.side / r_tilde) as u64).min(columns_total as u64 - 1)
                })
                .take(32)
                .collect();
            js.extend(crossings);
            js.sort_unstable();
            js.dedup();

            let points = options
                .points_per_column
                .min(((r_tilde / res) as usize + 1).max(2))
                .max(2);
            let mut min_osc_ratio = f64::INFINITY;
            let mut count_sum = 0.0f64;
            for &j in &js {
                let col_lo = j as f64 * r_tilde - sq.side;
                let mut vmin = f64::INFINITY;
                let mut vmax = f64::NEG_INFINITY;
                for i in 0..points {
                    let off = col_lo + (i as f64 / (points - 1) as f64) * r_tilde;
                    let v = eval.value_at_square_offset(k, off.clamp(-sq.side, 0.0));
                    vmin = vmin.min(v);
                    vmax = vmax.max(v);
                }
                let osc = vmax - vmin;
                min_osc_ratio = min_osc_ratio.min(osc / (c_tilde * r_tilde.powf(alpha)));
                count_sum += (osc / r_tilde).floor() + 1.0;
            }
            let count_estimate = count_sum / js.len() as f64 * columns_total;
            // 0.5·c̃·r̃^{α+θ−2}, in logs to dodge overflow.
            let count_required =
                ((alpha + theta - 2.0) * r_tilde.ln() + (0.5 * c_tilde).ln()).exp();
            let osc_pass = min_osc_ratio >= 1.0;
            let count_pass = count_estimate >= count_required;
            checks.push(SquareThetaCheck {
                square: k,
                theta,
                r_tilde,
                resolvable,
                columns_total,
                columns_checked: js.len(),
                min_osc_ratio,
                osc_pass,
                count_estimate,
                count_required,
                count_pass,
            });
        }
    }

    let all_pass = holder.pass
        && checks
            .iter()
            .filter(|c| c.resolvable)
            .all(|c| c.osc_pass && c.count_pass);
    Ok(FoldVerifyReport {
        c_tilde,
        holder,
        checks,
        unresolvable,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::plan::FoldPlan;
    use crate::folding::run::FoldedFunction;
    use crate::funcspace::{sample_function, FnEval, FunctionMeta};

    #[test]
    fn c_tilde_is_half_c() {
        // c = 0.4 gives c̃ = 0.2.
        assert_eq!((0.4f64 / 2.0).min(1.0), 0.2);
    }

    #[test]
    fn empty_plan_is_vacuously_verified() {
        let f = sample_function(
            &FnEval(|t| t),
            0.0,
            1.0,
            257,
            FunctionMeta::custom("identity"),
        )
        .unwrap();
        let ff = FoldedFunction {
            base: f,
            plan: FoldPlan {
                theta0: 0.3,
                alpha: 0.5,
                holder_constant: 1.0,
                mirrored: false,
                domain: (0.0, 1.0),
                squares: vec![],
                witness_warnings: vec![],
            },
            patches: vec![],
            reflection_counts: vec![],
        };
        let w = HolderWitness::new(0.5, 1.0, 0.5, 0.1).unwrap();
        let rep = verify_fold(&ff, &w, &[0.2, 0.3], &FoldVerifyOptions::default()).unwrap();
        assert!(rep.checks.is_empty());
        assert!(rep.holder.pass, "ratio = {}", rep.holder.max_ratio);
        assert!(rep.all_pass);
    }
}
