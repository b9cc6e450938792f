//! Column-counting of grid cells met by a sampled graph inside a square.
//!
//! The square's x-projection is split into M = ⌈2R/r⌉ closed column intervals
//! of width r anchored at the left edge (adjacent columns share their boundary
//! abscissa); rows of height r are anchored at the bottom edge and indexed
//! half-open, so a value on a row boundary rounds up. Within a column the
//! counted cells are the closed row span between the lowest and highest
//! in-square sample — the graph is continuous, so it meets every intermediate
//! row — giving the per-column count osc/r + O(1) of the covering argument.
//! The resolution guard step ≤ r/4 keeps the sampled column oscillation from
//! silently undercounting the true one.

use serde::{Deserialize, Serialize};

use crate::covering::Square;
use crate::error::{Error, Result};
use crate::funcspace::SampledFunction;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverReport {
    pub square: Square,
    pub r: f64,
    pub count: u64,
    pub per_column_counts: Vec<u64>,
}

pub fn column_cover_count(f: &SampledFunction, q: &Square, r: f64) -> Result<CoverReport> {
    if !(r > 0.0 && r <= 2.0 * q.half_side) {
        return Err(Error::InvalidParameter(format!(
            "r = {r} must lie in (0, 2R] with R = {}",
            q.half_side
        )));
    }
    if f.step > r / 4.0 {
        return Err(Error::ResolutionTooCoarse {
            step: f.step,
            limit: r / 4.0,
        });
    }
    let (xl, xr) = q.x_range();
    let (yl, yr) = q.y_range();
    let m = ((2.0 * q.half_side) / r).ceil() as usize;
    let (first, last) = f.index_range(xl, xr).ok_or(Error::Disjoint)?;

    // Per-column min/max row over in-square samples.
    let mut row_lo: Vec<i64> = vec![i64::MAX; m];
    let mut row_hi: Vec<i64> = vec![i64::MIN; m];
    let mut any_inside = false;
    for i in first..=last {
        let v = f.values[i];
        if v < yl || v > yr {
            continue;
        }
        any_inside = true;
        let t = f.t(i);
        let row = ((v - yl) / r).floor() as i64;
        let j_main = (((t - xl) / r).floor() as i64).clamp(0, m as i64 - 1);
        // Closed columns: a sample on a shared boundary belongs to both.
        for j in (j_main - 1)..=(j_main + 1) {
            if j < 0 || j >= m as i64 {
                continue;
            }
            let col_lo = xl + j as f64 * r;
            let col_hi = xl + (j + 1) as f64 * r;
            if t >= col_lo && t <= col_hi {
                let ju = j as usize;
                row_lo[ju] = row_lo[ju].min(row);
                row_hi[ju] = row_hi[ju].max(row);
            }
        }
    }
    if !any_inside {
        return Err(Error::Disjoint);
    }
    let per_column_counts: Vec<u64> = row_lo
        .iter()
        .zip(&row_hi)
        .map(|(&lo, &hi)| if lo > hi { 0 } else { (hi - lo + 1) as u64 })
        .collect();
    let count = per_column_counts.iter().sum();
    Ok(CoverReport {
        square: *q,
        r,
        count,
        per_column_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{
        sample_family, sample_function, FamilySpec, FnEval, FunctionMeta, TakagiSpec,
    };
    use std::collections::BTreeSet;

    fn sq(cx: f64, cy: f64, r: f64) -> Square {
        Square::new((cx, cy), r).unwrap()
    }

    /// Brute-force oracle: materialize the cell set column by column, filling
    /// every row between the column's lowest and highest sample row, scanning
    /// all M columns per sample.
    fn brute_force_cells(f: &SampledFunction, q: &Square, r: f64) -> u64 {
        let (xl, xr) = q.x_range();
        let (yl, yr) = q.y_range();
        let m = ((2.0 * q.half_side) / r).ceil() as usize;
        let mut cells: BTreeSet<(i64, i64)> = BTreeSet::new();
        for j in 0..m {
            let col_lo = xl + j as f64 * r;
            let col_hi = xl + (j + 1) as f64 * r;
            let mut rows: Vec<i64> = Vec::new();
            for i in 0..f.len() {
                let t = f.t(i);
                let v = f.values[i];
                if t < xl || t > xr || v < yl || v > yr {
                    continue;
                }
                if t >= col_lo && t <= col_hi {
                    rows.push(((v - yl) / r).floor() as i64);
                }
            }
            if let (Some(&lo), Some(&hi)) = (rows.iter().min(), rows.iter().max()) {
                for row in lo..=hi {
                    cells.insert((j as i64, row));
                }
            }
        }
        cells.len() as u64
    }

    #[test]
    fn flat_line_one_row_per_column() {
        let f = sample_function(
            &FnEval(|_| 0.0),
            -1.0,
            1.0,
            129,
            FunctionMeta::custom("zero"),
        )
        .unwrap();
        let rep = column_cover_count(&f, &sq(0.0, 0.0, 1.0), 0.25).unwrap();
        assert_eq!(rep.per_column_counts, vec![1; 8]);
        assert_eq!(rep.count, 8);
    }

    #[test]
    fn diagonal_counts_eight() {
        // Identity on [-1,1], square of half-side 1 at the origin, r = 1/2:
        // each closed column spans two rows (its right-boundary sample rounds
        // into the next row), total 8. Verified against the cell oracle.
        let f = sample_function(
            &FnEval(|t| t),
            -1.0,
            1.0,
            17,
            FunctionMeta::custom("identity"),
        )
        .unwrap();
        let q = sq(0.0, 0.0, 1.0);
        let rep = column_cover_count(&f, &q, 0.5).unwrap();
        assert_eq!(rep.count, 8);
        assert_eq!(rep.count, brute_force_cells(&f, &q, 0.5));
    }

    #[test]
    fn takagi_count_matches_cell_oracle() {
        let spec = FamilySpec::Takagi(TakagiSpec::new(0.5f64.sqrt(), 2.0, 1e-12).unwrap());
        let f = sample_family(&spec, 0.0, 1.0, (1 << 14) + 1).unwrap();
        let t_half = f.values[f.len() / 2];
        let q = sq(0.5, t_half, 0.25);
        let r = 2f64.powi(-8);
        let rep = column_cover_count(&f, &q, r).unwrap();
        assert_eq!(rep.count, brute_force_cells(&f, &q, r));
        assert_eq!(rep.count, rep.per_column_counts.iter().sum::<u64>());
        assert!(rep.count >= 1);
    }

    #[test]
    fn guard_and_disjoint_errors() {
        let f = sample_function(
            &FnEval(|t| t),
            0.0,
            1.0,
            11,
            FunctionMeta::custom("identity"),
        )
        .unwrap();
        assert!(matches!(
            column_cover_count(&f, &sq(0.5, 0.5, 0.25), 0.2),
            Err(Error::ResolutionTooCoarse { .. })
        ));
        let fine = sample_function(
            &FnEval(|t| t),
            0.0,
            1.0,
            4097,
            FunctionMeta::custom("identity"),
        )
        .unwrap();
        assert!(matches!(
            column_cover_count(&fine, &sq(0.1, 0.9, 0.05), 0.01),
            Err(Error::Disjoint)
        ));
    }

    #[test]
    fn count_monotone_in_r() {
        let spec = FamilySpec::Takagi(TakagiSpec::new(0.5f64.sqrt(), 2.0, 1e-12).unwrap());
        let f = sample_family(&spec, 0.0, 1.0, (1 << 15) + 1).unwrap();
        let q = sq(0.5, f.values[f.len() / 2], 0.25);
        let mut last = 0u64;
        for k in 4..=10 {
            let rep = column_cover_count(&f, &q, 2f64.powi(-k)).unwrap();
            assert!(
                rep.count >= last,
                "count must grow as r shrinks: {} < {last} at k = {k}",
                rep.count
            );
            last = rep.count;
        }
        // And on non-dyadic ratios.
        let mut last = 0u64;
        for i in 0..6 {
            let r = 0.11 * 0.63f64.powi(i);
            let rep = column_cover_count(&f, &q, r).unwrap();
            assert!(rep.count >= last);
            last = rep.count;
        }
    }

    // ---- 9-factor comparability against exact minimal covers ----

    fn dist(p: (f64, f64), q: (f64, f64)) -> f64 {
        ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
    }

    /// Exact minimal cover by diameter-≤-r sets for points ordered along a
    /// monotone curve: the ≤r relation is an indifference order, so the greedy
    /// sweep is optimal.
    fn sweep_cover_monotone(pts: &[(f64, f64)], r: f64) -> usize {
        let mut covers = 0usize;
        let mut i = 0usize;
        while i < pts.len() {
            let mut j = i;
            while j + 1 < pts.len() && dist(pts[i], pts[j + 1]) <= r {
                j += 1;
            }
            covers += 1;
            i = j + 1;
        }
        covers
    }

    /// Exact minimum clique cover of the ≤r-distance graph by branch and
    /// bound. Covering by arbitrary diameter-≤-r sets is equivalent: any such
    /// set of points is a clique and vice versa. Exponential; tiny instances
    /// only.
    fn exact_cover_bnb(pts: &[(f64, f64)], r: f64) -> usize {
        fn rec(
            pts: &[(f64, f64)],
            r: f64,
            idx: usize,
            cliques: &mut Vec<Vec<usize>>,
            best: &mut usize,
        ) {
            if cliques.len() >= *best {
                return;
            }
            if idx == pts.len() {
                *best = cliques.len();
                return;
            }
            for c in 0..cliques.len() {
                if cliques[c].iter().all(|&m| dist(pts[m], pts[idx]) <= r) {
                    cliques[c].push(idx);
                    rec(pts, r, idx + 1, cliques, best);
                    cliques[c].pop();
                }
            }
            cliques.push(vec![idx]);
            rec(pts, r, idx + 1, cliques, best);
            cliques.pop();
        }
        let mut best = pts.len();
        rec(pts, r, 0, &mut Vec::new(), &mut best);
        best
    }

    fn graph_points(f: &SampledFunction) -> Vec<(f64, f64)> {
        (0..f.len()).map(|i| (f.t(i), f.values[i])).collect()
    }

    #[test]
    fn nine_factor_bound_on_monotone_instances() {
        // Column count <= 9 × minimal cover by arbitrary diameter-r sets.
        let cases: Vec<(Box<dyn Fn(f64) -> f64 + Sync>, f64, f64)> = vec![
            (Box::new(|t: f64| t), -1.0, 1.0),
            (Box::new(|t: f64| t * t), 0.0, 1.0),
            (Box::new(|t: f64| (3.0 * t).floor() / 3.0 + 0.2 * t), 0.0, 1.0),
            (Box::new(|t: f64| t.max(0.0).sqrt()), 0.0, 1.0),
        ];
        for (gen, lo, hi) in &cases {
            let f = sample_function(
                &FnEval(|t| gen(t)),
                *lo,
                *hi,
                181,
                FunctionMeta::custom("monotone"),
            )
            .unwrap();
            let (vmin, vmax) = f.value_range();
            let q = Square::new(
                ((lo + hi) / 2.0, (vmin + vmax) / 2.0),
                ((hi - lo) / 2.0).max((vmax - vmin) / 2.0) + 1e-9,
            )
            .unwrap();
            for frac in [0.5, 0.25, 0.125] {
                let r = frac * q.half_side;
                let rep = column_cover_count(&f, &q, r).unwrap();
                let minimal = sweep_cover_monotone(&graph_points(&f), r);
                assert!(
                    rep.count as usize <= 9 * minimal,
                    "count {} > 9 × {minimal} at r = {r}",
                    rep.count
                );
            }
        }
    }

    #[test]
    fn nine_factor_bound_on_small_nonmonotone_instance() {
        let f = sample_function(
            &FnEval(|t: f64| (6.0 * t).sin() * 0.4),
            0.0,
            1.0,
            33,
            FunctionMeta::custom("wiggle"),
        )
        .unwrap();
        let q = sq(0.5, 0.0, 0.5);
        let r = 0.125;
        let rep = column_cover_count(&f, &q, r).unwrap();
        let pts = graph_points(&f);
        let minimal = exact_cover_bnb(&pts, r);
        assert!(
            rep.count as usize <= 9 * minimal,
            "count {} > 9 × {minimal}",
            rep.count
        );
        // The sweep bound can only over-count on non-monotone data.
        assert!(minimal <= sweep_cover_monotone(&pts, r));
    }
}
