//! Graph folding: select a nested sequence of squares at local maxima, fold
//! the graph into the left-half rectangles by alternating horizontal
//! reflections, and verify the folded function's Hölder and oscillation
//! certificates square by square.

mod fold;
mod maxima;
mod plan;
mod run;
mod verify;

pub use fold::{fold_rectangle, fold_segment_accordion, fold_segment_arcs, fold_value};
pub use maxima::{delta_radius, find_local_maxima, refine_maximum, DeltaRadius};
pub use plan::{plan_squares, FoldOptions, FoldPlan, PlannedSquare, Precision};
pub use run::{run_folding, FoldedEval, FoldedFunction, Patch};
pub use verify::{
    validate_witness, verify_fold, FoldVerifyOptions, FoldVerifyReport, HolderCheck,
    SquareThetaCheck,
};

use serde::{Deserialize, Serialize};

/// Affine map from unit-square coordinates (u, w) ∈ [0,1]² to a rectangle:
/// x = x_origin + u·x_scale, y = y_origin + w·y_scale. Patch samples live in
/// unit coordinates so deep squares stay representable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalFrame {
    pub x_origin: f64,
    pub x_scale: f64,
    pub y_origin: f64,
    pub y_scale: f64,
}

impl LocalFrame {
    pub fn x(&self, u: f64) -> f64 {
        self.x_origin + u * self.x_scale
    }

    pub fn y(&self, w: f64) -> f64 {
        self.y_origin + w * self.y_scale
    }

    pub fn u(&self, x: f64) -> f64 {
        (x - self.x_origin) / self.x_scale
    }

    pub fn w(&self, y: f64) -> f64 {
        (y - self.y_origin) / self.y_scale
    }
}
