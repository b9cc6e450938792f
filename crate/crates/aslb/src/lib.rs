//! aslb — Assouad spectrum laboratory.
//!
//! Numerics for the Assouad spectrum of graphs of Hölder and Sobolev
//! functions: column-counting covering estimates and bound audits, the
//! graph-folding construction of extremal Hölder graphs, co-Hölder
//! lower-bound certificates, and separated packing families on the Sobolev
//! zigzag.

pub mod coholder;
pub mod covering;
pub mod error;
pub mod folding;
pub mod funcspace;
pub mod io;
pub mod linreg;
pub mod packing;

pub use error::{Error, Result};
