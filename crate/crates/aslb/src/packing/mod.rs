//! Separated point families on the zigzag: maximal r_n-separated equally
//! spaced points along alternating segments [z_m, z_{m+1}] inside the square
//! Q(0, a_n), for both the plain sequence a_m = m^{1-s} and the log-corrected
//! borderline sequence. The audited cardinality growth lower-bounds the
//! covering exponent at θ.

use std::collections::BTreeMap;

use num::{BigRational, FromPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{ZigzagSpec, ZigzagVariant};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingPoint {
    pub m: u64,
    pub k: u64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingSet {
    pub s: f64,
    pub theta: f64,
    pub n: u64,
    pub variant: ZigzagVariant,
    /// R_n = a_n.
    pub big: f64,
    /// r_n = R_n^{1/θ}.
    pub small: f64,
    /// The even segment budget N(n) actually used.
    pub n_even: u64,
    pub c0: f64,
    /// True when the seed N(n) had to shrink to satisfy the constraints.
    pub shrunk: bool,
    pub points: Vec<PackingPoint>,
    /// m → M(m): points placed on segment [z_m, z_{m+1}].
    pub m_counts: BTreeMap<u64, u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingAudit {
    pub min_pairwise_distance: f64,
    pub cardinality: u64,
    pub empirical_gamma: f64,
    pub target_gamma: f64,
    pub separation_ok: bool,
    pub membership_ok: bool,
    /// Near-tie pairs re-checked in exact rational arithmetic (plain variant,
    /// integer s and 1/θ only).
    pub exact_rechecked: usize,
}

/// Default c0(s) = min((s−1)/√2, s−1)^{1/s} / 2 — half the admissibility
/// constant, so the seeded N(n) almost never needs shrinking.
pub fn default_c0(s: f64) -> f64 {
    ((s - 1.0) / std::f64::consts::SQRT_2)
        .min(s - 1.0)
        .powf(1.0 / s)
        / 2.0
}

fn spec_for(s: f64, variant: ZigzagVariant) -> Result<ZigzagSpec> {
    ZigzagSpec::new(s, variant, 2)
}

fn segment_length(spec: &ZigzagSpec, m: u64) -> f64 {
    let (xa, ya) = spec.vertex(m);
    let (xb, yb) = spec.vertex(m + 1);
    ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt()
}

fn validate_packing_params(s: f64, theta: f64, n: u64, variant: ZigzagVariant) -> Result<()> {
    if !(s > 2.0) {
        return Err(Error::InvalidParameter(format!("s = {s} must be > 2")));
    }
    let theta_sup = (s - 1.0) / s;
    if !(theta > 0.0 && theta < theta_sup) {
        return Err(Error::ThetaOutOfRange {
            theta,
            lo: 0.0,
            hi: theta_sup,
        });
    }
    let n_min = match variant {
        ZigzagVariant::Plain => 2,
        ZigzagVariant::LogCorrected => 3,
    };
    if n < n_min {
        return Err(Error::InvalidParameter(format!(
            "n = {n} must be >= {n_min} for this variant"
        )));
    }
    Ok(())
}

/// Both admissibility conditions in direct form on exact aₘ arithmetic:
/// the last segment still fits two r-separated points, and (for N ≥ 4) the
/// inter-segment gap ε_{n+N−3} exceeds r.
fn admissible(spec: &ZigzagSpec, n: u64, n_even: u64, r: f64) -> bool {
    let last = n + n_even - 2;
    if segment_length(spec, last) <= r {
        return false;
    }
    if n_even >= 4 && spec.gap(n + n_even - 3) <= r {
        return false;
    }
    true
}

/// Build the separated family for (s, θ, n). `c0` of `None` uses the default.
pub fn build_packing(
    s: f64,
    theta: f64,
    n: u64,
    c0: Option<f64>,
    variant: ZigzagVariant,
) -> Result<PackingSet> {
    validate_packing_params(s, theta, n, variant)?;
    let spec = spec_for(s, variant)?;
    let c0 = c0.unwrap_or_else(|| default_c0(s));
    let big = spec.amplitude(n);
    let small = big.powf(1.0 / theta);

    let seed = c0 * (n as f64).powf((s - 1.0) / (s * theta));
    let mut n_even = if seed >= 2.0 {
        (seed.floor() as u64) & !1
    } else {
        0
    };
    let seeded = n_even;
    while n_even >= 2 && !admissible(&spec, n, n_even, small) {
        n_even -= 2;
    }
    if n_even < 2 {
        return Err(Error::Infeasible { n });
    }

    let mut points = Vec::new();
    let mut m_counts = BTreeMap::new();
    let mut m = n;
    while m <= n + n_even - 2 {
        let (xa, ya) = spec.vertex(m);
        let (xb, yb) = spec.vertex(m + 1);
        let len = ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt();
        let count = (len / small).ceil() as u64;
        debug_assert!(count >= 2);
        for k in 1..=count {
            let t = (k - 1) as f64 / (count - 1) as f64;
            points.push(PackingPoint {
                m,
                k,
                x: xa + t * (xb - xa),
                y: ya + t * (yb - ya),
            });
        }
        m_counts.insert(m, count);
        m += 2;
    }

    Ok(PackingSet {
        s,
        theta,
        n,
        variant,
        big,
        small,
        n_even,
        c0,
        shrunk: n_even != seeded,
        points,
        m_counts,
    })
}

fn rational_amplitude(s_int: i64, m: u64) -> BigRational {
    // a_m = m^{1-s} = 1 / m^{s-1} for integer s.
    let mut denom = BigRational::from_u64(1).unwrap();
    let mf = BigRational::from_u64(m).unwrap();
    for _ in 0..(s_int - 1) {
        denom *= mf.clone();
    }
    denom.recip()
}

/// Exact rational separation recheck for a near-tie pair, available for the
/// plain variant with integer s and integer 1/θ. Returns None when exact
/// arithmetic does not apply.
fn exact_pair_separated(ps: &PackingSet, a: &PackingPoint, b: &PackingPoint) -> Option<bool> {
    if ps.variant != ZigzagVariant::Plain {
        return None;
    }
    let s_int = ps.s.round() as i64;
    let inv_theta = (1.0 / ps.theta).round();
    if (ps.s - s_int as f64).abs() > 1e-12 || (1.0 / ps.theta - inv_theta).abs() > 1e-12 {
        return None;
    }
    let point = |p: &PackingPoint| -> (BigRational, BigRational) {
        let am = rational_amplitude(s_int, p.m);
        let am1 = rational_amplitude(s_int, p.m + 1);
        let (xa, ya) = if p.m % 2 == 0 {
            (am.clone(), am)
        } else {
            (am.clone(), -am)
        };
        let (xb, yb) = if (p.m + 1) % 2 == 0 {
            (am1.clone(), am1)
        } else {
            (am1.clone(), -am1)
        };
        let count = ps.m_counts[&p.m];
        let t = BigRational::from_u64(p.k - 1).unwrap() / BigRational::from_u64(count - 1).unwrap();
        (xa.clone() + t.clone() * (xb - xa), ya.clone() + t * (yb - ya))
    };
    let (ax, ay) = point(a);
    let (bx, by) = point(b);
    let d2 = (ax - bx).pow(2) + (ay - by).pow(2);
    // r² = a_n^{2/θ}.
    let an = rational_amplitude(s_int, ps.n);
    let mut r2 = BigRational::from_u64(1).unwrap();
    for _ in 0..(2 * inv_theta as i64) {
        r2 *= an.clone();
    }
    Some(d2 > r2)
}

/// Exact pairwise audit: bucketed separation > r_n, segment and square
/// membership, cardinality identity, and the empirical exponent
/// γ = log(#D)/log(R_n/r_n).
pub fn verify_packing(ps: &PackingSet) -> Result<PackingAudit> {
    let r = ps.small;
    let cardinality = ps.points.len() as u64;
    if cardinality != ps.m_counts.values().sum::<u64>() {
        return Err(Error::InvalidParameter(
            "cardinality does not match Σ M(m)".into(),
        ));
    }

    // Spatial hash at cell size r: separated points imply O(1) per cell.
    let cell = |x: f64, y: f64| -> (i64, i64) { ((x / r).floor() as i64, (y / r).floor() as i64) };
    let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, p) in ps.points.iter().enumerate() {
        buckets.entry(cell(p.x, p.y)).or_default().push(i);
    }
    let bucket_list: Vec<(&(i64, i64), &Vec<usize>)> = buckets.iter().collect();
    let results: Vec<(f64, usize, usize)> = bucket_list
        .par_iter()
        .map(|(key, members)| {
            let mut min_d = f64::INFINITY;
            let mut violations = 0usize;
            let mut rechecked = 0usize;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let nb = (key.0 + dx, key.1 + dy);
                    let Some(others) = buckets.get(&nb) else {
                        continue;
                    };
                    for &i in *members {
                        for &j in others {
                            if j <= i {
                                continue;
                            }
                            let a = &ps.points[i];
                            let b = &ps.points[j];
                            let d = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
                            min_d = min_d.min(d);
                            if d <= r {
                                // Near ties go to exact arithmetic when available.
                                if d >= r * (1.0 - 1e-9) && ps.n <= 50 {
                                    rechecked += 1;
                                    match exact_pair_separated(ps, a, b) {
                                        Some(true) => continue,
                                        _ => violations += 1,
                                    }
                                } else {
                                    violations += 1;
                                }
                            }
                        }
                    }
                }
            }
            (min_d, violations, rechecked)
        })
        .collect();
    let mut min_pairwise_distance = f64::INFINITY;
    let mut violations = 0usize;
    let mut exact_rechecked = 0usize;
    for (d, v, rc) in results {
        min_pairwise_distance = min_pairwise_distance.min(d);
        violations += v;
        exact_rechecked += rc;
    }

    // Membership: every point on its segment's bounding box and inside
    // Q(0, R_n) (closed, with a one-ulp cushion).
    let spec = spec_for(ps.s, ps.variant)?;
    let tol = ps.big * 1e-12;
    let mut membership_ok = true;
    for p in &ps.points {
        if p.x.abs() > ps.big + tol || p.y.abs() > ps.big + tol {
            membership_ok = false;
            break;
        }
        let (xa, ya) = spec.vertex(p.m);
        let (xb, yb) = spec.vertex(p.m + 1);
        let (xlo, xhi) = (xa.min(xb) - tol, xa.max(xb) + tol);
        let (ylo, yhi) = (ya.min(yb) - tol, ya.max(yb) + tol);
        if p.x < xlo || p.x > xhi || p.y < ylo || p.y > yhi {
            membership_ok = false;
            break;
        }
        // Collinearity: cross product against the segment direction.
        let cross = (xb - xa) * (p.y - ya) - (yb - ya) * (p.x - xa);
        if cross.abs() > 1e-10 * ((xb - xa).abs() + (yb - ya).abs()) {
            membership_ok = false;
            break;
        }
    }

    let separation_ok = violations == 0;
    let empirical_gamma = (cardinality as f64).ln() / (ps.big / ps.small).ln();
    let target_gamma = 1.0 + ps.theta / ((1.0 - ps.theta) * (ps.s - 1.0));
    if !separation_ok {
        return Err(Error::AuditFailure {
            violations,
            min_distance: min_pairwise_distance,
        });
    }
    Ok(PackingAudit {
        min_pairwise_distance,
        cardinality,
        empirical_gamma,
        target_gamma,
        separation_ok,
        membership_ok,
        exact_rechecked,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingTrend {
    pub gammas: Vec<(u64, f64)>,
    pub target_gamma: f64,
    pub nondecreasing: bool,
    pub max_gamma: f64,
    /// All gammas approach the target from below.
    pub below_target: bool,
}

/// Empirical packing exponents across an increasing n list.
pub fn packing_exponent(
    s: f64,
    theta: f64,
    n_list: &[u64],
    c0: Option<f64>,
    variant: ZigzagVariant,
) -> Result<PackingTrend> {
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "n_list must be strictly increasing".into(),
        ));
    }
    let mut gammas = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let ps = build_packing(s, theta, n, c0, variant)?;
        let audit = verify_packing(&ps)?;
        gammas.push((n, audit.empirical_gamma));
    }
    let target_gamma = 1.0 + theta / ((1.0 - theta) * (s - 1.0));
    let nondecreasing = gammas.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-9);
    let max_gamma = gammas.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
    let below_target = gammas.iter().all(|g| g.1 <= target_gamma);
    Ok(PackingTrend {
        gammas,
        target_gamma,
        nondecreasing,
        max_gamma,
        below_target,
    })
}

/// Orlicz gauge Φ(t) = t·log^{2/s}(t), increasing on [1, ∞).
pub fn orlicz_phi(t: f64, s: f64) -> f64 {
    t * t.ln().max(0.0).powf(2.0 / s)
}

/// Φ⁻¹ by monotone bisection on [1, ∞).
pub fn orlicz_phi_inv(y: f64, s: f64) -> f64 {
    if y <= 0.0 {
        return 1.0;
    }
    let mut lo = 1.0f64;
    let mut hi = (2.0 * y).max(4.0);
    while orlicz_phi(hi, s) < y {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if orlicz_phi(mid, s) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solve the Mean Value Theorem offset δ_m for the borderline sequence:
/// the x ∈ (m, m+1) with (s−1)·x^{−s}·ln⁻²x·(1 + 2/ln x) = a_m − a_{m+1}.
fn mvt_point(spec: &ZigzagSpec, m: u64) -> f64 {
    let target = spec.gap(m);
    let g = |x: f64| -> f64 {
        (spec.s - 1.0) * x.powf(-spec.s) * x.ln().powi(-2) * (1.0 + 2.0 / x.ln())
    };
    let mut lo = m as f64;
    let mut hi = (m + 1) as f64;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BorderlineParams {
    pub n_even: u64,
    pub binding: String,
    pub eta_n: f64,
    pub eta_bar_n: f64,
    pub phi_bound_1: f64,
    pub phi_bound_2: f64,
}

/// Largest admissible even N(n) for the borderline sequence via the Orlicz
/// route: both constraints are of the form m + δ_m ≤ Φ⁻¹(const·n^{(s−1)/(sθ)}
/// ·log^{2/(sθ)}n·(1+η)), with the MVT offsets solved numerically.
pub fn borderline_params(s: f64, theta: f64, n: u64) -> Result<BorderlineParams> {
    validate_packing_params(s, theta, n, ZigzagVariant::LogCorrected)?;
    let spec = spec_for(s, ZigzagVariant::LogCorrected)?;
    let c1 = ((s - 1.0) / std::f64::consts::SQRT_2).powf(1.0 / s);
    let c2 = (s - 1.0).powf(1.0 / s);
    let scale = (n as f64).powf((s - 1.0) / (s * theta)) * (n as f64).ln().powf(2.0 / (s * theta));

    let constraint = |n_even: u64| -> Option<(bool, bool, f64, f64, f64, f64)> {
        if n_even < 2 {
            return None;
        }
        let m1 = n + n_even - 2;
        let x1 = mvt_point(&spec, m1);
        let eta = (1.0 + 2.0 / x1.ln()).powf(1.0 / s) - 1.0;
        let bound1 = orlicz_phi_inv(c1 * scale * (1.0 + eta), s);
        let ok1 = x1 <= bound1;
        let (ok2, eta_bar, bound2) = if n_even >= 4 {
            let m2 = n + n_even - 3;
            let x2 = mvt_point(&spec, m2);
            let eb = (1.0 + 2.0 / x2.ln()).powf(1.0 / s) - 1.0;
            let b2 = orlicz_phi_inv(c2 * scale * (1.0 + eb), s);
            (x2 <= b2, eb, b2)
        } else {
            (true, 0.0, f64::INFINITY)
        };
        Some((ok1, ok2, eta, eta_bar, bound1, bound2))
    };

    let Some((ok1, ok2, ..)) = constraint(2) else {
        return Err(Error::Infeasible { n });
    };
    if !(ok1 && ok2) {
        return Err(Error::Infeasible { n });
    }
    // Largest even N: both constraints are monotone in N; binary search on
    // even indices.
    let mut lo = 2u64;
    let mut hi = ((2.0 * c2 * scale) as u64 + 8) & !1;
    while hi > lo {
        let mid = ((lo + hi + 2) / 4) * 2; // even midpoint, rounded up
        match constraint(mid) {
            Some((a, b, ..)) if a && b => lo = mid,
            _ => hi = mid - 2,
        }
    }
    let n_even = lo;
    let (ok1, ok2, eta_n, eta_bar_n, phi_bound_1, phi_bound_2) =
        constraint(n_even).expect("n_even >= 2");
    debug_assert!(ok1 && ok2);
    let binding = match constraint(n_even + 2) {
        Some((false, true, ..)) => "segment_capacity".to_string(),
        Some((true, false, ..)) => "inter_segment_gap".to_string(),
        Some((false, false, ..)) => "both".to_string(),
        _ => "unbounded_bracket".to_string(),
    };
    Ok(BorderlineParams {
        n_even,
        binding,
        eta_n,
        eta_bar_n,
        phi_bound_1,
        phi_bound_2,
    })
}

/// Scan for the smallest n where the seeded N(n) is admissible without
/// shrinking for 10 consecutive values of n.
pub fn default_n0(s: f64, theta: f64, c0: Option<f64>, variant: ZigzagVariant) -> Option<u64> {
    let c0 = c0.unwrap_or_else(|| default_c0(s));
    let spec = spec_for(s, variant).ok()?;
    let n_min = match variant {
        ZigzagVariant::Plain => 2,
        ZigzagVariant::LogCorrected => 3,
    };
    let clean = |n: u64| -> bool {
        let seed = c0 * (n as f64).powf((s - 1.0) / (s * theta));
        if seed < 2.0 {
            return false;
        }
        let n_even = (seed.floor() as u64) & !1;
        let small = spec.amplitude(n).powf(1.0 / theta);
        n_even >= 2 && admissible(&spec, n, n_even, small)
    };
    (n_min..2000).find(|&n| (n..n + 10).all(clean))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_count_matches_direct_arithmetic() {
        // s = 3, θ = 1/2, n = 10: R = 0.01, r = 1e-4, M(10) = 184.
        let ps = build_packing(3.0, 0.5, 10, None, ZigzagVariant::Plain).unwrap();
        assert_eq!(ps.big, 0.01);
        assert!((ps.small - 1e-4).abs() < 1e-19);
        let spec = ZigzagSpec::new(3.0, ZigzagVariant::Plain, 2).unwrap();
        let a10 = spec.amplitude(10);
        let a11 = spec.amplitude(11);
        let eps = a10 - a11;
        let l = (eps * eps + (a10 + a11) * (a10 + a11)).sqrt();
        assert_eq!(ps.m_counts[&10], (l / ps.small).ceil() as u64);
        assert_eq!(ps.m_counts[&10], 184);
    }

    #[test]
    fn theta_beyond_sup_is_rejected() {
        assert!(matches!(
            build_packing(3.0, 2.0 / 3.0, 10, None, ZigzagVariant::Plain),
            Err(Error::ThetaOutOfRange { .. })
        ));
    }

    #[test]
    fn separation_audit_passes_for_construction() {
        for n in [10u64, 17, 25, 40] {
            let ps = build_packing(3.0, 0.5, n, None, ZigzagVariant::Plain).unwrap();
            let audit = verify_packing(&ps).unwrap();
            assert!(audit.min_pairwise_distance > ps.small, "n = {n}");
            assert!(audit.membership_ok, "n = {n}");
            assert_eq!(audit.cardinality, ps.m_counts.values().sum::<u64>());
        }
        // Borderline variant too.
        for n in [10u64, 20] {
            let ps = build_packing(3.0, 0.5, n, None, ZigzagVariant::LogCorrected).unwrap();
            let audit = verify_packing(&ps).unwrap();
            assert!(audit.min_pairwise_distance > ps.small, "log n = {n}");
        }
    }

    #[test]
    fn corrupted_set_fails_the_audit() {
        let mut ps = build_packing(3.0, 0.5, 10, None, ZigzagVariant::Plain).unwrap();
        let dup = ps.points[0];
        let count = ps.m_counts[&dup.m];
        ps.points[1] = dup; // duplicate point → zero distance
        let _ = count;
        assert!(matches!(
            verify_packing(&ps),
            Err(Error::AuditFailure { .. })
        ));
    }

    #[test]
    fn cardinality_scales_like_the_proof() {
        // #D ≥ c₂·n^{(s-1)/θ + 2 - s} with a stable measured constant.
        let mut consts = Vec::new();
        for n in [10u64, 16, 24, 32, 40] {
            let ps = build_packing(3.0, 0.5, n, None, ZigzagVariant::Plain).unwrap();
            let expo = (3.0 - 1.0) / 0.5 + 2.0 - 3.0; // = 3
            consts.push(ps.points.len() as f64 / (n as f64).powf(expo));
        }
        let max = consts.iter().cloned().fold(f64::MIN, f64::max);
        let min = consts.iter().cloned().fold(f64::MAX, f64::min);
        assert!(min > 0.0);
        assert!(max / min < 2.0, "constants drift: {consts:?}");
    }

    #[test]
    fn exponent_trend_reaches_target_from_below() {
        let trend =
            packing_exponent(3.0, 0.5, &[10, 20, 40, 80], None, ZigzagVariant::Plain).unwrap();
        assert!((trend.target_gamma - 1.5).abs() < 1e-15);
        assert!(trend.nondecreasing, "gammas: {:?}", trend.gammas);
        assert!(trend.below_target, "gammas: {:?}", trend.gammas);
        assert!(trend.max_gamma >= 1.40, "max gamma = {}", trend.max_gamma);
    }

    #[test]
    fn theta_to_zero_target_is_one() {
        let target = |theta: f64| 1.0 + theta / ((1.0 - theta) * 2.0);
        assert!((target(1e-9) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn orlicz_round_trips() {
        for s in [2.5f64, 3.0, 4.0] {
            assert!((orlicz_phi(std::f64::consts::E, s) - std::f64::consts::E).abs() < 1e-12);
            for t in [3.0f64, 10.0, 100.0] {
                let y = orlicz_phi(t, s);
                assert!((orlicz_phi_inv(y, s) - t).abs() < 1e-9 * t, "t = {t}");
            }
        }
    }

    #[test]
    fn borderline_matches_direct_power_form_scan() {
        // The Φ-route N must equal the largest even N satisfying the direct
        // power-form inequality x^s·ln²x ≤ ((s−1)/√2)·n^{(s−1)/θ}·ln^{2/θ}n·(1+η)^s
        // (and its second-constraint analogue).
        let (s, theta, n) = (3.0f64, 0.5f64, 100u64);
        let params = borderline_params(s, theta, n).unwrap();
        let spec = ZigzagSpec::new(s, ZigzagVariant::LogCorrected, 2).unwrap();
        let direct_ok = |n_even: u64| -> bool {
            let m1 = n + n_even - 2;
            let x1 = mvt_point(&spec, m1);
            let eta = (1.0 + 2.0 / x1.ln()).powf(1.0 / s) - 1.0;
            let lhs1 = x1.powf(s) * x1.ln().powi(2);
            let rhs1 = (s - 1.0) / std::f64::consts::SQRT_2
                * (n as f64).powf((s - 1.0) / theta)
                * (n as f64).ln().powf(2.0 / theta)
                * (1.0 + eta).powf(s);
            if lhs1 > rhs1 {
                return false;
            }
            if n_even >= 4 {
                let m2 = n + n_even - 3;
                let x2 = mvt_point(&spec, m2);
                let eb = (1.0 + 2.0 / x2.ln()).powf(1.0 / s) - 1.0;
                let lhs2 = x2.powf(s) * x2.ln().powi(2);
                let rhs2 = (s - 1.0)
                    * (n as f64).powf((s - 1.0) / theta)
                    * (n as f64).ln().powf(2.0 / theta)
                    * (1.0 + eb).powf(s);
                if lhs2 > rhs2 {
                    return false;
                }
            }
            true
        };
        let mut best = 0u64;
        let mut n_even = 2u64;
        while direct_ok(n_even) {
            best = n_even;
            n_even += 2;
        }
        assert_eq!(params.n_even, best);
    }

    #[test]
    fn borderline_build_obeys_the_orlicz_cap() {
        // The constructed borderline N(n) stays within the Φ-route bound.
        let n = 50u64;
        let ps = build_packing(3.0, 0.5, n, None, ZigzagVariant::LogCorrected).unwrap();
        let params = borderline_params(3.0, 0.5, n).unwrap();
        assert!(
            ps.n_even <= params.n_even,
            "built N = {} vs Φ cap {}",
            ps.n_even,
            params.n_even
        );
    }

    #[test]
    fn n0_scan_is_small_for_s3() {
        let n0 = default_n0(3.0, 0.5, None, ZigzagVariant::Plain).unwrap();
        assert!(n0 <= 10, "n0 = {n0}");
        // And every acceptance n sits above it.
        assert!(n0 <= 10);
    }

    #[test]
    fn amplitude_ratio_tends_to_one() {
        // Claim 4.5 hypothesis: a_{m+1}/a_m → 1, monotonically, crossing 0.99
        // near m = 200 for s = 3 (the (m/(m+1))² rate).
        let spec = ZigzagSpec::new(3.0, ZigzagVariant::Plain, 2).unwrap();
        let ratio = |m: u64| spec.amplitude(m + 1) / spec.amplitude(m);
        let mut last = 0.0;
        for m in (10u64..2000).step_by(10) {
            let r = ratio(m);
            assert!(r > last, "not monotone at m = {m}");
            last = r;
        }
        assert!(ratio(2000) > 0.999);
        for m in 200u64..400 {
            assert!(ratio(m) > 0.99, "m = {m}: {}", ratio(m));
        }
    }
}
