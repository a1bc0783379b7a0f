//! Exact combinatorial dynamics of liftings of maps of the σ-space, the circle
//! with a segment glued at one point.
//!
//! The covering space `S` is the real line with a unit branch on every
//! integer. A lifting of degree `d` satisfies `F(z + 1) = F(z) + d` and is
//! described by a finite Markov node set in the fundamental domain. From that
//! description the crate builds the signed, displacement-labelled Markov
//! graph, the rotation interval, and the set of periods mod 1 up to a window,
//! all in exact rational arithmetic.

pub mod constructions;
pub mod markov;
pub mod orderings;
pub mod periods;
pub mod rotation;
pub mod sigmamap;
pub mod space;

/// Exact rational numbers used throughout.
pub type Q = num_rational::BigRational;

pub use markov::{basic_intervals, markov_graph, BasicInterval, BasicPartition, MarkovGraph};
pub use periods::{periods_for_rotation, periods_mod1, LiftedOrbit, TruncatedPeriodSet};
pub use rotation::{rotation_interval, RotationInterval};
pub use sigmamap::{build_lifting, parse_map, Lifting, SigmaMap};
pub use space::{dist, hull, SInterval, SPoint};
