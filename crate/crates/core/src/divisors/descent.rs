use num_traits::{One, Zero};
use serde::Serialize;

use super::func::{delta_value, fundamental_sums, PeriodicFn};
use super::model::{nonzero_cycle, solve_level, to_i64, Level, Table};
use super::point::{PointC, ScaleLattice};
use crate::exact::{rat, Rational};
use crate::{Error, Result};

/// Levels `s` (lattice `s·r`) tried by the bounded search.
pub const MAX_DESCENT_LEVEL: i64 = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NoDescentReason {
    /// α is nonzero on the class of 0.
    Ord0 {
        #[serde(with = "crate::exact::scalar::rational_str")]
        value: Rational,
    },
    /// α has nonzero sum along a closed ×q orbit, so δ grows along it.
    NonPeriodic {
        orbit: Vec<PointC>,
        #[serde(with = "crate::exact::scalar::rational_str")]
        cycle_sum: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DescentOutcome {
    Descends {
        delta: PeriodicFn,
        lattice: ScaleLattice,
        /// Value of the periodic δ on the class of 0 (the canonical δ has δ(0) = 0).
        #[serde(with = "crate::exact::scalar::rational_str")]
        mod_at_0: Rational,
        /// Level `s` at which δ was found periodic, before the `(q−1)` rescaling.
        level: i64,
        searched: String,
    },
    NoDescent(NoDescentReason),
    /// Bounded search exhausted.
    Inconclusive {
        max_level: i64,
        searched: String,
    },
}

/// Decide whether `α = φ(δ) − δ` for a periodic divisor δ, i.e. whether an
/// order-one equation with divisor data α descends to constants.
pub fn descent_solve(alpha: &PeriodicFn, q: u64) -> Result<DescentOutcome> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "q = {q} must be at least 2"
        )));
    }
    if !alpha.is_gen_free() {
        return Err(Error::UnsupportedPoint(
            "descent needs a torsion-supported alpha".into(),
        ));
    }
    let v0 = alpha.value_at_origin();
    if !v0.is_zero() {
        return Ok(DescentOutcome::NoDescent(NoDescentReason::Ord0 {
            value: v0,
        }));
    }
    let (total, weighted) = fundamental_sums(alpha);
    if !total.is_zero() || !weighted.in_lattice(alpha.lattice()) {
        return Err(Error::Precondition(format!(
            "alpha is not principal: degree {total}, Abel-Jacobi sum {:?}",
            weighted.v
        )));
    }
    let base = alpha.lattice();
    let d = to_i64(&alpha.torsion_denominator(), "denominator")?;
    let qi = q as i64;
    let table = Table::new(alpha, d)?;
    if let Some((cycle, sum)) = nonzero_cycle(&table, qi) {
        let orbit = cycle
            .iter()
            .map(|[a, b]| PointC::torsion(base.r() * rat(*a, d), base.r() * rat(*b, d)))
            .collect();
        return Ok(DescentOutcome::NoDescent(NoDescentReason::NonPeriodic {
            orbit,
            cycle_sum: sum,
        }));
    }
    let searched = format!(
        "levels s = 1..{MAX_DESCENT_LEVEL} on the 1/{d} torsion grid; q-invariant corrections are \
         pinned by boundary points, so the correction family is trivial"
    );
    for s in 1..=MAX_DESCENT_LEVEL {
        if d * s > super::model::MAX_GRID_SIDE {
            break;
        }
        let Some(level) = solve_level(&table, qi, s)? else {
            continue;
        };
        certify(&level, alpha, q)?;
        let delta = level.to_periodic(base)?;
        let mod_at_0 = delta.value_at_origin();
        let delta = rescale_for_abel_jacobi(delta, q)?;
        let lattice = delta.lattice().clone();
        return Ok(DescentOutcome::Descends {
            delta,
            lattice,
            mod_at_0,
            level: s,
            searched,
        });
    }
    Ok(DescentOutcome::Inconclusive {
        max_level: MAX_DESCENT_LEVEL,
        searched,
    })
}

/// Cross-check every grid value against the canonical orbit sum.
fn certify(level: &Level, alpha: &PeriodicFn, q: u64) -> Result<()> {
    let r = alpha.lattice().r();
    let n = level.n();
    for a in 0..n {
        for b in 0..n {
            // the class of 0 is checked at its nonzero lift s·r·ω₁
            let a_lift = if a == 0 && b == 0 { n } else { a };
            let z = PointC::torsion(r * rat(a_lift, level.d), r * rat(b, level.d));
            if delta_value(alpha, q, &z) != *level.at(a, b) {
                return Err(Error::Precondition(format!(
                    "finite model disagrees with the canonical solution at {z}"
                )));
            }
        }
    }
    Ok(())
}

/// Pass to `(q−1)·L`, then further until the Abel–Jacobi sum lies in the lattice.
fn rescale_for_abel_jacobi(delta: PeriodicFn, q: u64) -> Result<PeriodicFn> {
    let delta = delta.refine(q - 1)?;
    let (total, w) = fundamental_sums(&delta);
    if !total.is_zero() {
        return Err(Error::Precondition(format!(
            "periodic delta has degree {total}"
        )));
    }
    if w.in_lattice(delta.lattice()) {
        return Ok(delta);
    }
    // refining by k multiplies the sum by k², the lattice by k
    let r = delta.lattice().r().clone();
    let mut k = num_bigint::BigInt::one();
    for x in &w.v {
        k = num_integer::Integer::lcm(&k, (x / &r).denom());
    }
    let k = to_i64(&k, "Abel-Jacobi refinement")? as u64;
    let out = delta.refine(k)?;
    debug_assert!(fundamental_sums(&out).1.in_lattice(out.lattice()));
    Ok(out)
}
