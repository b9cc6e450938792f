//! Square planning: pick the seed maximum next to the domain midpoint, then
//! descend — each new maximum lives in the window (m_k, m_k + 10⁻ᵏ·δ_k/2) of
//! the previous one, so the radii collapse faster than 10⁻ᵏ and the left-half
//! rectangles are pairwise disjoint.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folding::maxima::delta_scan;
use crate::folding::LocalFrame;
use crate::funcspace::{GridEval, HolderWitness, PointEval, SampledFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    Extended,
}

impl Precision {
    /// Depth cap: nested radii shrink faster than 10^{-k(k-1)/2}, so absolute
    /// double-precision coordinates support 4 squares; the offset evaluation
    /// path stretches that to 6.
    pub fn depth_cap(self) -> usize {
        match self {
            Precision::Double => 4,
            Precision::Extended => 6,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FoldOptions {
    pub precision: Precision,
    /// Sample count for the per-window maxima scans below grid scale.
    pub window_samples: usize,
    /// Sample count for each rectangle's stored patch.
    pub patch_samples: usize,
}

impl Default for FoldOptions {
    fn default() -> Self {
        Self {
            precision: Precision::Double,
            window_samples: 2049,
            patch_samples: 4097,
        }
    }
}

/// One planned square Q_k = Q((m_k, f(m_k)), δ_k), with its left-half fold
/// rectangle. Coordinates are in the working orientation (see
/// [`FoldPlan::mirrored`]).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlannedSquare {
    pub max_location: f64,
    pub max_value: f64,
    /// Side parameter r_k^{θ0} = δ(m_k).
    pub side: f64,
    pub rect_x: (f64, f64),
    pub rect_y: (f64, f64),
    pub frame: LocalFrame,
    /// Runner-up maxima in the same search window (working coordinates).
    pub alternatives: Vec<f64>,
}

impl PlannedSquare {
    pub fn band(&self) -> (f64, f64) {
        self.rect_y
    }
}

/// The square sequence for one folding run. All square geometry is stored in
/// working coordinates: when `mirrored` is true the working abscissa is
/// x' = domain_lo + domain_hi − x and results must be read back through that
/// involution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoldPlan {
    pub theta0: f64,
    pub alpha: f64,
    pub holder_constant: f64,
    pub mirrored: bool,
    pub domain: (f64, f64),
    pub squares: Vec<PlannedSquare>,
    pub witness_warnings: Vec<String>,
}

impl FoldPlan {
    /// M_k + 1: the reflection budget for square k from the Hölder constant.
    pub fn reflection_budget(&self, k: usize) -> f64 {
        let delta = self.squares[k].side;
        (self.holder_constant * delta.powf(self.alpha - 1.0) - 2.0).ceil() + 1.0
    }
}

/// Evaluator in working orientation: optionally x-mirrored.
pub(crate) struct WorkEval<'a> {
    pub inner: &'a dyn PointEval,
    /// `Some(lo + hi)` when mirrored: x_work ↦ sum − x_work before evaluating.
    pub mirror_sum: Option<f64>,
}

impl PointEval for WorkEval<'_> {
    fn value(&self, t: f64) -> f64 {
        match self.mirror_sum {
            Some(s) => self.inner.value(s - t),
            None => self.inner.value(t),
        }
    }

    fn value_at_offset(&self, base: f64, delta: f64) -> f64 {
        match self.mirror_sum {
            Some(s) => self.inner.value_at_offset(s - base, -delta),
            None => self.inner.value_at_offset(base, delta),
        }
    }

    fn offset_resolution(&self, base: f64, span: f64) -> f64 {
        match self.mirror_sum {
            Some(s) => self.inner.offset_resolution(s - base, span),
            None => self.inner.offset_resolution(base, span),
        }
    }
}

/// Strict local maxima of `gen` sampled at `n` points across
/// (center + lo_off, center + hi_off), returned as offsets from `center`
/// sorted by descending value (ties: leftmost first).
fn window_maxima(
    gen: &dyn PointEval,
    center: f64,
    lo_off: f64,
    hi_off: f64,
    n: usize,
) -> Vec<(f64, f64)> {
    let step = (hi_off - lo_off) / (n - 1) as f64;
    let vals: Vec<f64> = (0..n)
        .map(|i| gen.value_at_offset(center, lo_off + i as f64 * step))
        .collect();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for i in 1..n - 1 {
        if vals[i] > vals[i - 1] && vals[i] > vals[i + 1] {
            out.push((lo_off + i as f64 * step, vals[i]));
        }
    }
    out.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then(a.0.partial_cmp(&b.0).unwrap())
    });
    out
}

/// Iterative zoom toward the true maximum inside [lo_off, hi_off]: rescan a
/// shrinking bracket around the running argmax until the bracket reaches the
/// evaluator's resolution. A grid-scale anchor would sit ~C·σᵅ below the true
/// window sup and sub-resolution peaks would void its δ; the zoomed anchor
/// dominates its whole window up to evaluation precision.
fn argmax_zoom(
    gen: &dyn PointEval,
    center: f64,
    lo_off: f64,
    hi_off: f64,
    floor: f64,
) -> (f64, f64) {
    let pts = 129usize;
    let mut a = lo_off;
    let mut b = hi_off;
    let mut best_off = 0.5 * (a + b);
    let mut best_val = f64::NEG_INFINITY;
    for _ in 0..40 {
        let step = (b - a) / (pts - 1) as f64;
        for i in 0..pts {
            let off = a + i as f64 * step;
            let v = gen.value_at_offset(center, off);
            if v > best_val {
                best_val = v;
                best_off = off;
            }
        }
        if b - a <= floor * 4.0 {
            break;
        }
        a = (best_off - step).max(lo_off);
        b = (best_off + step).min(hi_off);
    }
    (best_off, best_val)
}

/// Search a window for a maximum whose certified δ yields a fold rectangle
/// the graph enters through the left side within the band (continuity of the
/// folded function) and whose square nests inside the previous one.
/// Returns (m, f(m), δ, alternatives).
#[allow(clippy::too_many_arguments)]
fn pick_square(
    gen: &dyn PointEval,
    center: f64,
    width: f64,
    scan_n: usize,
    domain: (f64, f64),
    delta_limit: f64,
    prev: Option<(f64, f64)>,
    left_barrier: Option<f64>,
) -> Result<(f64, f64, f64, Vec<f64>)> {
    let candidates = window_maxima(gen, center, 0.0, width, scan_n);
    if candidates.is_empty() {
        return Err(Error::NoMaximumFound {
            lo: center,
            hi: center + width,
        });
    }
    let scan_step = width / (scan_n - 1) as f64;
    let res = gen.offset_resolution(center, width).max(f64::MIN_POSITIVE);
    let all: Vec<f64> = candidates.iter().map(|c| center + c.0).collect();

    // Candidate anchors: the window-global zoomed argmax first, then zooms
    // around the leading grid maxima.
    let mut anchors: Vec<f64> = Vec::with_capacity(65);
    anchors.push(argmax_zoom(gen, center, 0.0, width, res).0);
    for (off, _) in candidates.iter().take(64) {
        anchors.push(
            argmax_zoom(
                gen,
                center,
                (off - scan_step).max(0.0),
                (off + scan_step).min(width),
                res,
            )
            .0,
        );
    }

    // Among the anchors passing every gate, keep the best conditioned square
    // (largest certified δ).
    let mut best: Option<(f64, f64, f64)> = None;
    for zoff in anchors {
        // Re-anchor at the representable abscissa: everything downstream
        // (δ, the rectangle, offset evaluation) is defined relative to the
        // stored point.
        let m = center + zoff;
        let val = gen.value(m);
        if gen.value_at_offset(m, -scan_step) >= val || gen.value_at_offset(m, scan_step) >= val {
            continue;
        }
        // The rectangle must stay strictly right of the previous maximum:
        // the coarse δ certificate of the previous square says nothing about
        // sub-grid peaks, so disjointness is enforced here, not inferred.
        let mut cap = (m - domain.0).min(domain.1 - m).min(delta_limit);
        if let Some(barrier) = left_barrier {
            cap = cap.min(m - barrier);
        }
        if cap <= scan_step {
            continue;
        }
        let d_max = delta_scan(gen, m, val, scan_step, cap);
        if d_max <= 0.0 {
            continue;
        }
        // Continuity at the junction: the value at the rectangle's left edge
        // must lie in the band [f(m) − δ, f(m) + δ]. When the punctured
        // radius was bound by a left-side return the bisected edge already
        // sits at ≈ f(m); otherwise walk the left side down from d_max to the
        // largest near-return distance whose deficit fits the band.
        let mut delta = 0.0f64;
        let edge = gen.value_at_offset(m, -d_max);
        if (val - edge).abs() <= d_max {
            delta = d_max;
        } else {
            let mut j = (d_max / scan_step).floor() as i64;
            while j >= 1 {
                let d = j as f64 * scan_step;
                if val - gen.value_at_offset(m, -d) <= d {
                    // Zoom the near-return peak inside this cell.
                    let (doff, dval) = argmax_zoom(
                        gen,
                        m,
                        -(d + scan_step).min(d_max),
                        -(d - scan_step).max(0.0),
                        res,
                    );
                    let d_star = -doff;
                    if d_star > 0.0 && d_star <= d_max && (val - dval).abs() <= d_star {
                        delta = d_star;
                        break;
                    }
                    delta = d;
                    break;
                }
                j -= 1;
            }
        }
        if delta <= 0.0 {
            continue;
        }
        // Q_{k+1} ⊂ Q_k, both vertically: |drop| + δ within the previous
        // radius (x-nesting follows from the window width and the barrier).
        if let Some((prev_val, prev_side)) = prev {
            if (prev_val - val).abs() + delta > prev_side {
                continue;
            }
        }
        if best.map_or(true, |(_, _, d)| delta > d) {
            best = Some((m, val, delta));
        }
    }
    match best {
        Some((m, val, delta)) => {
            let alternatives = all.iter().cloned().filter(|&a| a != m).take(8).collect();
            Ok((m, val, delta, alternatives))
        }
        None => Err(Error::NoMaximumFound {
            lo: center,
            hi: center + width,
        }),
    }
}

/// Plan K nested squares for folding `f` with the given witness and θ0.
pub fn plan_squares(
    f: &SampledFunction,
    witness: &HolderWitness,
    theta0: f64,
    k_squares: usize,
    options: &FoldOptions,
) -> Result<FoldPlan> {
    if k_squares == 0 {
        return Err(Error::InvalidParameter("K must be >= 1".into()));
    }
    let cap = options.precision.depth_cap();
    if k_squares > cap {
        return Err(Error::DepthExceeded {
            requested: k_squares,
            cap,
            precision: options.precision.as_str(),
        });
    }
    if !(theta0 > 0.0 && theta0 < witness.alpha) {
        return Err(Error::ThetaOutOfRange {
            theta: theta0,
            lo: 0.0,
            hi: witness.alpha,
        });
    }

    let boxed;
    let grid;
    let base: &dyn PointEval = match f.evaluator() {
        Some(b) => {
            boxed = b;
            boxed.as_ref()
        }
        None => {
            grid = GridEval(f);
            &grid
        }
    };

    let domain = (f.domain_lo, f.domain_hi);
    let mid = 0.5 * (domain.0 + domain.1);
    let w = witness.r0.min((domain.1 - domain.0) / 10.0) / 2.0;

    // Seed maxima on both sides of the midpoint decide the orientation:
    // folding wants the working m_1 (right window) no higher than its left
    // neighbor maximum m_0, so the δ-scan terminates against m_0.
    let n_seed = ((w / f.step).ceil() as usize + 1).clamp(16, 1 << 16);
    let left = window_maxima(base, mid, -w, 0.0, n_seed);
    let right = window_maxima(base, mid, 0.0, w, n_seed);
    let keep_orientation = match (left.first(), right.first()) {
        (Some(l), Some(r)) => r.1 <= l.1,
        (Some(_), None) => false,
        (None, Some(_)) => true,
        (None, None) => {
            return Err(Error::NoMaximumFound {
                lo: mid - w,
                hi: mid + w,
            })
        }
    };
    let sum = domain.0 + domain.1;
    let work = WorkEval {
        inner: base,
        mirror_sum: if keep_orientation { None } else { Some(sum) },
    };

    let mut squares: Vec<PlannedSquare> = Vec::with_capacity(k_squares);
    let mut warnings = Vec::new();
    for k in 0..k_squares {
        let (center, width, delta_limit, prev, barrier) = if k == 0 {
            (mid, w, 2.0 * w, None, None)
        } else {
            let p = &squares[k - 1];
            (
                p.max_location,
                10f64.powi(-(k as i32)) * p.side / 2.0,
                10f64.powi(-(k as i32)) * p.side,
                Some((p.max_value, p.side)),
                Some(p.max_location),
            )
        };
        let res = work.offset_resolution(center, width).max(f64::MIN_POSITIVE);
        let max_n = (width / res) as usize + 1;
        let scan_n = if k == 0 { n_seed } else { options.window_samples }.min(max_n);
        if scan_n < 16 {
            return Err(Error::NoMaximumFound {
                lo: center,
                hi: center + width,
            });
        }
        let (m, v, delta, alternatives) =
            pick_square(&work, center, width, scan_n, domain, delta_limit, prev, barrier)?;
        if delta < 4.0 * res {
            warnings.push(format!(
                "square {k}: certified delta {delta:e} sits within 4 evaluation quanta"
            ));
        }
        let frame = LocalFrame {
            x_origin: m - delta,
            x_scale: delta,
            y_origin: v - delta,
            y_scale: 2.0 * delta,
        };
        squares.push(PlannedSquare {
            max_location: m,
            max_value: v,
            side: delta,
            rect_x: (m - delta, m),
            rect_y: (v - delta, v + delta),
            frame,
            alternatives,
        });
    }

    Ok(FoldPlan {
        theta0,
        alpha: witness.alpha,
        holder_constant: witness.c_upper,
        mirrored: !keep_orientation,
        domain,
        squares,
        witness_warnings: warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{
        measure_witness, sample_family, sample_function, FamilySpec, FnEval, FunctionMeta,
        TakagiSpec,
    };

    fn takagi_setup() -> (SampledFunction, HolderWitness) {
        let spec = FamilySpec::Takagi(TakagiSpec::new(0.5f64.sqrt(), 2.0, 1e-12).unwrap());
        let f = sample_family(&spec, 0.0, 1.0, (1 << 18) + 1).unwrap();
        let w = measure_witness(&f, 0.5, 0.1, 11).unwrap();
        (f, w)
    }

    #[test]
    fn takagi_plan_nests_radii() {
        let (f, w) = takagi_setup();
        let plan = plan_squares(&f, &w, 0.3, 2, &FoldOptions::default()).unwrap();
        assert_eq!(plan.squares.len(), 2);
        let d1 = plan.squares[0].side;
        let d2 = plan.squares[1].side;
        assert!(d2 < 0.1 * d1, "d2 = {d2} vs d1 = {d1}");
        // Rectangles disjoint: R_2 sits strictly right of m_1.
        assert!(plan.squares[1].rect_x.0 > plan.squares[0].rect_x.1);
        // Q_2 ⊂ Q_1.
        let q1 = &plan.squares[0];
        let q2 = &plan.squares[1];
        assert!(q2.max_location - q2.side >= q1.max_location - q1.side);
        assert!(q2.max_location + q2.side <= q1.max_location + q1.side);
        assert!(q2.max_value - q2.side >= q1.max_value - q1.side);
        assert!(q2.max_value + q2.side <= q1.max_value + q1.side);
    }

    #[test]
    fn zero_depth_is_rejected() {
        let (f, w) = takagi_setup();
        assert!(matches!(
            plan_squares(&f, &w, 0.3, 0, &FoldOptions::default()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn depth_cap_is_enforced() {
        let (f, w) = takagi_setup();
        assert!(matches!(
            plan_squares(&f, &w, 0.3, 5, &FoldOptions::default()),
            Err(Error::DepthExceeded { .. })
        ));
        let extended = FoldOptions {
            precision: Precision::Extended,
            ..FoldOptions::default()
        };
        assert!(matches!(
            plan_squares(&f, &w, 0.3, 7, &extended),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn identity_has_no_maxima_to_plan() {
        let f = sample_function(
            &FnEval(|t| t),
            0.0,
            1.0,
            4097,
            FunctionMeta::custom("identity"),
        )
        .unwrap();
        let w = HolderWitness::new(0.5, 2.0, 0.1, 0.1).unwrap();
        assert!(matches!(
            plan_squares(&f, &w, 0.3, 1, &FoldOptions::default()),
            Err(Error::NoMaximumFound { .. })
        ));
    }
}
