//! Exact local invariants of planar harmonic and real-analytic map germs
//! at smooth critical points.
//!
//! The library computes, in exact cyclotomic arithmetic, the order `m`, the
//! complex multiplicity `mu`, the critical value order `j`, the order-pair
//! of the critical value curve, and the topological model of a germ, and
//! cross-checks `mu = j + m^2` through independent algorithms: a root-of-
//! unity order sum, a Fulton-style local intersection oracle, and an
//! iterated Jacobian-determinant recursion.

pub mod analytic;
pub mod field;
pub mod harmonic;
pub mod intersection;
pub mod order;
pub mod par;
pub mod report;
pub mod series1;
pub mod series2;
pub mod text;
pub mod verify;

pub use field::{CycloNumber, FieldError};
pub use order::OrderValue;
pub use series1::Series1;
pub use series2::{Axis, Series2};
