//! Execute a fold plan: apply the accordion map over every planned rectangle,
//! cache per-rectangle patches in local frames, and expose pointwise
//! evaluation of the folded function.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::folding::fold::fold_value;
use crate::folding::plan::{plan_squares, FoldOptions, FoldPlan};
use crate::folding::verify::validate_witness;
use crate::folding::LocalFrame;
use crate::funcspace::{GridEval, HolderWitness, PointEval, SampledFunction};

/// Folded samples of one rectangle in its local frame: unit abscissae
/// u = 0..1 across [m−δ, m], unit ordinates w = (y − y_lo)/(2δ).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Patch {
    pub frame: LocalFrame,
    pub unit_values: Vec<f64>,
}

/// The modified function: base samples plus per-rectangle folded patches.
/// Values outside every rectangle equal the base function exactly; inside
/// rectangle k they are the accordion image of the base values in its band.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoldedFunction {
    pub base: SampledFunction,
    pub plan: FoldPlan,
    pub patches: Vec<Patch>,
    pub reflection_counts: Vec<u32>,
}

enum BaseEval<'a> {
    Owned(Box<dyn PointEval + Send>),
    Grid(GridEval<'a>),
}

impl BaseEval<'_> {
    fn as_dyn(&self) -> &dyn PointEval {
        match self {
            BaseEval::Owned(b) => b.as_ref(),
            BaseEval::Grid(g) => g,
        }
    }
}

/// Pointwise evaluator of the folded function.
pub struct FoldedEval<'a> {
    plan: &'a FoldPlan,
    base: BaseEval<'a>,
}

impl<'a> FoldedEval<'a> {
    fn mirror_sum(&self) -> Option<f64> {
        if self.plan.mirrored {
            Some(self.plan.domain.0 + self.plan.domain.1)
        } else {
            None
        }
    }

    fn to_work(&self, x: f64) -> f64 {
        match self.mirror_sum() {
            Some(s) => s - x,
            None => x,
        }
    }

    /// Folded value at an original-coordinate abscissa.
    pub fn value(&self, x: f64) -> f64 {
        let v = self.base.as_dyn().value(x);
        let x_work = self.to_work(x);
        for sq in &self.plan.squares {
            if x_work >= sq.rect_x.0 && x_work <= sq.rect_x.1 {
                return fold_value(v, sq.rect_y.0, sq.rect_y.1).0;
            }
        }
        v
    }

    /// Unfolded base value at m_k + offset in working coordinates, routed
    /// through the generator's offset path so offsets far below one ulp of
    /// m_k still resolve.
    pub fn raw_at_square_offset(&self, k: usize, offset: f64) -> f64 {
        let sq = &self.plan.squares[k];
        match self.mirror_sum() {
            Some(s) => self
                .base
                .as_dyn()
                .value_at_offset(s - sq.max_location, -offset),
            None => self.base.as_dyn().value_at_offset(sq.max_location, offset),
        }
    }

    /// Folded value at m_k + offset in working coordinates; `offset` in
    /// [−δ_k, 0] lands inside rectangle k.
    pub fn value_at_square_offset(&self, k: usize, offset: f64) -> f64 {
        let sq = &self.plan.squares[k];
        let v = self.raw_at_square_offset(k, offset);
        if offset >= -sq.side && offset <= 0.0 {
            fold_value(v, sq.rect_y.0, sq.rect_y.1).0
        } else {
            v
        }
    }

    /// Finest resolvable offset step around square k's maximum.
    pub fn offset_resolution(&self, k: usize) -> f64 {
        let sq = &self.plan.squares[k];
        match self.mirror_sum() {
            Some(s) => self
                .base
                .as_dyn()
                .offset_resolution(s - sq.max_location, sq.side),
            None => self
                .base
                .as_dyn()
                .offset_resolution(sq.max_location, sq.side),
        }
    }
}

impl FoldedFunction {
    pub fn evaluator(&self) -> FoldedEval<'_> {
        let base = match self.base.evaluator() {
            Some(b) => BaseEval::Owned(b),
            None => BaseEval::Grid(GridEval(&self.base)),
        };
        FoldedEval {
            plan: &self.plan,
            base,
        }
    }
}

/// Plan squares, fold every rectangle, and cache the patches.
pub fn run_folding(
    f: &SampledFunction,
    witness: &HolderWitness,
    theta0: f64,
    k_squares: usize,
    options: &FoldOptions,
) -> Result<FoldedFunction> {
    let mut plan = plan_squares(f, witness, theta0, k_squares, options)?;
    plan.witness_warnings
        .extend(validate_witness(f, witness, 4096, 0xA51B));

    let mut ff = FoldedFunction {
        base: f.clone(),
        plan,
        patches: Vec::with_capacity(k_squares),
        reflection_counts: Vec::with_capacity(k_squares),
    };
    let eval = ff.evaluator();
    let mut patches = Vec::with_capacity(ff.plan.squares.len());
    let mut counts = Vec::with_capacity(ff.plan.squares.len());
    for (k, sq) in ff.plan.squares.iter().enumerate() {
        let p = options.patch_samples.max(2);
        let mut unit_values = Vec::with_capacity(p);
        let mut worst = 0u32;
        for i in 0..p {
            let u = i as f64 / (p - 1) as f64;
            let offset = (u - 1.0) * sq.side;
            let v = eval.raw_at_square_offset(k, offset);
            let (fv, n) = fold_value(v, sq.rect_y.0, sq.rect_y.1);
            worst = worst.max(n);
            unit_values.push(sq.frame.w(fv));
        }
        patches.push(Patch {
            frame: sq.frame,
            unit_values,
        });
        counts.push(worst);
    }
    drop(eval);
    ff.patches = patches;
    ff.reflection_counts = counts;
    Ok(ff)
}
