//! Numerical analysis of the Chialvo neuron map.
//!
//! The reduced map `f_{r,k}(x) = x² exp(r − x) + k` is S-unimodal with its
//! critical point at `c = 2`. This crate locates and classifies its fixed
//! points, certifies flip and fold bifurcations, finds Misiurewicz
//! parameters together with the transversality term Γ, scans the `(r, k)`
//! plane for topological chaos, analyses orbits, and simulates the full
//! two-dimensional model.

pub mod bifurcation;
pub mod chaos;
pub mod chialvo2d;
pub mod diagram;
pub mod error;
pub mod fixed_points;
pub mod map;
pub mod misiurewicz;
pub mod orbit;
pub mod par;
pub mod roots;
pub mod table;

pub use error::{Error, Result};
pub use map::{MapParams, CRITICAL_POINT};
pub use par::Execution;
