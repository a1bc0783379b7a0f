//! Independent period oracles.
//!
//! Both oracles pull the breakpoints of `f^n` back one step at a time,
//! depth first, until every piece maps affinely into a single segment, then
//! solve `f^n(x) = x + k` on each piece. Nothing here looks at Markov graphs
//! or closed-walk counts, so agreement with the main engine is meaningful.
//! Only the point type and the node list of a map are shared.

mod pullback;
pub mod sigma;
pub mod star;

pub use sigma::{fixed_points, periods_mod1, periods_with_rotation, OracleSolution};
pub use star::star_true_periods;
