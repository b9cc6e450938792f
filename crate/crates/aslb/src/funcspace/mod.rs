//! Function families and their graph samples: Weierstrass, Takagi, the
//! Sobolev zigzag, oscillation measurement, p-energies, and Hölder witnesses.
//!
//! All operations are pure; sampled functions are immutable after
//! construction and safe to share across workers.

mod energy;
mod families;
mod sampled;
mod witness;
mod zigzag;

pub use energy::{p_energy, EnergyReport, EnergyVerdict};
pub use families::{sawtooth, TakagiSpec, WeierstrassSpec};
pub use sampled::{
    oscillation, sample_family, sample_function, ulp, FamilySpec, FnEval, FunctionMeta, GridEval,
    PointEval, SampledFunction,
};
pub use witness::{measure_witness, HolderWitness};
pub use zigzag::{build_zigzag, PiecewiseLinearFunction, ZigzagSpec, ZigzagVariant};
