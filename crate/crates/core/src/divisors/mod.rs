//! Discretely supported ℚ-valued functions on ℂ, periodic divisors, the
//! periodicity reconstruction from a (φ, ψ) pair, and first-order descent.

mod descent;
mod func;
mod model;
mod periodicity;
mod point;

pub use descent::{descent_solve, DescentOutcome, NoDescentReason, MAX_DESCENT_LEVEL};
pub use func::{
    delta_from_alpha, delta_value, fundamental_sums, is_periodic, scale_disc, scale_periodic,
    DiscFn, PeriodicFn, PeriodicityCheck,
};
pub use periodicity::{
    periodicity_solve, r_coefficients, reconstruct_p, reconstruct_q, PeriodicityOutcome,
    MAX_PERIODICITY_LEVEL,
};
pub use point::{PointC, ScaleLattice, WeightedSum};
