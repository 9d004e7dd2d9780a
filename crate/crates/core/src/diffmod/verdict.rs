use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::divisors::{descent_solve, scale_periodic, DescentOutcome, NoDescentReason, PeriodicFn, PointC, ScaleLattice};
use crate::exact::{ell_is_constant, EllFn, Scalar};
use crate::isogeny::{ec_mul, function_from_divisor, pullback, PointXY};
use crate::{Error, Result};

/// A torsion point known both by period coordinates and on the curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: PointC,
    pub point: PointXY,
}

/// The coefficient `a` of `φ(u) = a·u`, with labelled points used to turn a
/// divisor certificate into an actual `b`. The labels must be compatible
/// with the group law; the final constancy check catches any that are not.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderOneData {
    pub a: EllFn,
    pub points: Vec<LabeledPoint>,
}

fn ser_opt_ellfn<S: Serializer>(f: &Option<EllFn>, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.as_ref().map(EllFn::to_repr).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VerdictOrderOne {
    /// `a = c·φ(b)/b`. `delta` is the divisor of `b` (certified by
    /// `φδ − δ = α`); `b` and `c` are present when they could be materialized.
    Descends {
        delta: PeriodicFn,
        lattice: ScaleLattice,
        #[serde(serialize_with = "ser_opt_ellfn")]
        b: Option<EllFn>,
        b_divisor: Option<Vec<(PointXY, i64)>>,
        c: Option<Scalar>,
        note: String,
    },
    PsiTranscendental {
        /// `"ord0"` or `"no_descent_orbit"`.
        reason: String,
        evidence: NoDescentReason,
    },
    Inconclusive {
        /// Always `"inconclusive_bounds"`.
        reason: String,
        max_level: i64,
        searched: String,
    },
}

impl VerdictOrderOne {
    pub fn reason_code(&self) -> Option<&str> {
        match self {
            VerdictOrderOne::Descends { .. } => None,
            VerdictOrderOne::PsiTranscendental { reason, .. }
            | VerdictOrderOne::Inconclusive { reason, .. } => Some(reason),
        }
    }
}

/// Decide whether `φ(u) = a·u` descends to constants, from the divisor α of `a`.
pub fn order_one_verdict(
    alpha: &PeriodicFn,
    a_data: Option<&OrderOneData>,
    q: u64,
) -> Result<VerdictOrderOne> {
    if let Some(data) = a_data {
        check_data(data)?;
    }
    let (delta, lattice, searched) = match descent_solve(alpha, q)? {
        DescentOutcome::NoDescent(ev) => {
            let reason = match ev {
                NoDescentReason::Ord0 { .. } => "ord0",
                NoDescentReason::NonPeriodic { .. } => "no_descent_orbit",
            };
            return Ok(VerdictOrderOne::PsiTranscendental {
                reason: reason.into(),
                evidence: ev,
            });
        }
        DescentOutcome::Inconclusive { max_level, searched } => {
            return Ok(VerdictOrderOne::Inconclusive {
                reason: "inconclusive_bounds".into(),
                max_level,
                searched,
            })
        }
        DescentOutcome::Descends {
            delta,
            lattice,
            searched,
            ..
        } => (delta, lattice, searched),
    };
    // independent re-certification of the divisor equation
    let residual = scale_periodic(&delta, q)?.sub(&delta)?.sub(alpha)?;
    if !residual.is_zero() {
        return Err(Error::Precondition(format!(
            "descent output fails φδ − δ = α: residual {residual:?}"
        )));
    }
    let Some(data) = a_data else {
        return Ok(VerdictOrderOne::Descends {
            delta,
            lattice,
            b: None,
            b_divisor: None,
            c: None,
            note: format!("divisor certificate only; {searched}"),
        });
    };
    let Some(div) = divisor_on_curve(&delta, data)? else {
        return Ok(VerdictOrderOne::Descends {
            delta,
            lattice,
            b: None,
            b_divisor: None,
            c: None,
            note: "δ has no coordinates over the supplied points; divisor certificate only".into(),
        });
    };
    let curve = data.a.curve();
    let b = function_from_divisor(curve, &div)?;
    let ratio = data.a.try_mul(&b)?.try_div(&pullback(&b, q)?)?;
    let c = ell_is_constant(&ratio).ok_or_else(|| {
        Error::Precondition(
            "a·b/φ(b) is not constant: alpha is not div(a) or the labels are inconsistent".into(),
        )
    })?;
    Ok(VerdictOrderOne::Descends {
        delta,
        lattice,
        b: Some(b),
        b_divisor: Some(div),
        c: Some(c),
        note: "b from divisor, c = a·b/φ(b) certified constant".into(),
    })
}

fn check_data(data: &OrderOneData) -> Result<()> {
    for l in &data.points {
        if !l.label.is_torsion() || !l.point.on_curve(data.a.curve()) {
            return Err(Error::InvalidArgument(format!(
                "labelled point {} is not a torsion point on the curve",
                l.label
            )));
        }
    }
    Ok(())
}

/// Express δ (coarsened to Λ₀) as a divisor on the curve, using multiples
/// of the labelled points.
fn divisor_on_curve(delta: &PeriodicFn, data: &OrderOneData) -> Result<Option<Vec<(PointXY, i64)>>> {
    let base = ScaleLattice::base();
    let Some(coarse) = delta.coarsen(&base) else {
        return Ok(None);
    };
    let curve = data.a.curve();
    let mut out = Vec::new();
    for (z, v) in coarse.reps() {
        let Some(n) = v.is_integer().then(|| v.to_integer().to_i64()).flatten() else {
            return Ok(None);
        };
        if z.is_origin() {
            out.push((PointXY::Infinity, n));
            continue;
        }
        let mut found = None;
        'labels: for l in data.points.iter() {
            let order = l
                .label
                .v()
                .iter()
                .fold(num_bigint::BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            let Some(order) = order.to_i64() else { continue };
            for k in 1..order {
                if base.equivalent(&l.label.scale(&crate::exact::rat_int(k)), z) {
                    found = Some(ec_mul(curve, &l.point, k)?);
                    break 'labels;
                }
            }
        }
        match found {
            Some(p) => out.push((p, n)),
            None => return Ok(None),
        }
    }
    debug_assert!(out.iter().map(|(_, n)| n).sum::<i64>().is_zero());
    Ok(Some(out))
}
