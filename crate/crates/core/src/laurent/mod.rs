//! Truncated Laurent series and everything computed in them.

pub mod membership;
pub mod series;
pub mod solve;
pub mod weierstrass;

pub use membership::{embed_s, s_membership, MembershipBounds, SElement};
pub use series::{scale_arg, LaurentSeries, SeriesRepr, EXACT};
pub use solve::{
    solve_scalar_first_order, solve_system_regular, verify_system, RegularSolution, ScalarSolution,
    Verification,
};
pub use weierstrass::{embed, weierstrass_series, WeierstrassKind};
