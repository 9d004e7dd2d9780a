//! Laurent expansions of the Weierstrass functions and the embedding `K -> C((z))`.

use serde::{Deserialize, Serialize};

use super::series::LaurentSeries;
use crate::error::{Error, Result};
use crate::exact::{CurveParams, EllFn, Poly, RatFn, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeierstrassKind {
    Wp,
    WpPrime,
    Zeta,
    Sigma,
}

/// Smallest accepted truncation order.
pub const MIN_ORDER: i64 = 8;

/// `c_2 .. c_kmax` with `wp = z^-2 + sum c_k z^(2k-2)`; index 0 and 1 unused.
fn wp_coefficients(curve: &CurveParams, kmax: usize) -> Vec<Scalar> {
    let mut c = vec![Scalar::zero(); kmax.max(3) + 1];
    c[2] = &curve.g2 / &Scalar::int(20);
    c[3] = &curve.g3 / &Scalar::int(28);
    for k in 4..=kmax {
        let mut s = Scalar::zero();
        for i in 2..=k - 2 {
            s += &(&c[i] * &c[k - i]);
        }
        let d = ((2 * k + 1) * (k - 3)) as i64;
        c[k] = &(&s * &Scalar::int(3)) / &Scalar::int(d);
    }
    c.truncate(kmax + 1);
    c
}

fn wp_series(curve: &CurveParams, order: i64) -> LaurentSeries {
    // exponents -2 .. order-1; z^(2k-2) < order  <=>  k <= (order + 1) / 2
    let kmax = ((order + 1) / 2).max(2) as usize;
    let c = wp_coefficients(curve, kmax);
    let mut coeffs = vec![Scalar::zero(); (order + 2) as usize];
    coeffs[0] = Scalar::one();
    for (k, ck) in c.iter().enumerate().skip(2) {
        let e = 2 * k as i64 - 2;
        if e < order {
            coeffs[(e + 2) as usize] = ck.clone();
        }
    }
    LaurentSeries::new(-2, coeffs, order)
}

/// Expansion of `wp`, `wp'`, `zeta` or `sigma` at 0, known below `z^order`.
pub fn weierstrass_series(
    curve: &CurveParams,
    kind: WeierstrassKind,
    order: i64,
) -> Result<LaurentSeries> {
    if order < MIN_ORDER {
        return Err(Error::InvalidArgument(format!(
            "order {order} is below the minimum {MIN_ORDER}"
        )));
    }
    match kind {
        WeierstrassKind::Wp => Ok(wp_series(curve, order)),
        WeierstrassKind::WpPrime => Ok(wp_series(curve, order + 1).derivative()),
        WeierstrassKind::Zeta => {
            // zeta = 1/z - sum c_k z^(2k-1) / (2k-1)
            let kmax = (order / 2 + 1) as usize;
            let c = wp_coefficients(curve, kmax);
            let mut coeffs = vec![Scalar::zero(); (order + 1) as usize];
            coeffs[0] = Scalar::one();
            for (k, ck) in c.iter().enumerate().skip(2) {
                let e = 2 * k as i64 - 1;
                if e < order {
                    coeffs[(e + 1) as usize] = -&(ck / &Scalar::int(e));
                }
            }
            Ok(LaurentSeries::new(-1, coeffs, order))
        }
        WeierstrassKind::Sigma => {
            // sigma = z exp(-sum c_k z^(2k) / ((2k-1) 2k))
            let kmax = (order / 2 + 1) as usize;
            let c = wp_coefficients(curve, kmax);
            let inner = order - 1;
            let mut coeffs = vec![Scalar::zero(); inner.max(0) as usize];
            for (k, ck) in c.iter().enumerate().skip(2) {
                let e = 2 * k as i64;
                if e < inner {
                    coeffs[e as usize] = -&(ck / &Scalar::int(e * (e - 1)));
                }
            }
            let e = LaurentSeries::new(0, coeffs, inner).exp()?;
            Ok(e.shift(1))
        }
    }
}

/// Evaluate a polynomial at a series by Horner's rule.
fn poly_at(p: &Poly, s: &LaurentSeries, trunc: i64) -> LaurentSeries {
    let mut acc = LaurentSeries::zero(trunc);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(s).add(&LaurentSeries::constant(c.clone(), trunc));
    }
    acc
}

fn ratfn_at(r: &RatFn, s: &LaurentSeries, trunc: i64) -> Result<LaurentSeries> {
    let n = poly_at(r.num(), s, trunc);
    if r.den().is_constant() {
        return Ok(n.scale(&r.den().coeff(0).inv()?));
    }
    let d = poly_at(r.den(), s, trunc);
    if d.is_zero() {
        return Err(Error::Precision(
            "denominator vanishes to truncation".into(),
        ));
    }
    n.div(&d)
}

/// Expansion of `f` at 0 obtained by substituting `x -> wp`, `y -> wp'`,
/// returned with truncation exactly `order`.
pub fn embed(f: &EllFn, order: i64) -> Result<LaurentSeries> {
    if let Some(c) = f.as_constant() {
        return Ok(LaurentSeries::constant(c, order));
    }
    let curve = f.curve();
    // Substitution keeps relative precision: wp known to z^T is known to
    // T + 2 terms past its leading one, and so is every polynomial or quotient
    // in it. The leading exponent of each part is read off the degrees.
    let deg =
        |r: &RatFn| r.num().degree().unwrap_or(0) as i64 - r.den().degree().unwrap_or(0) as i64;
    let va = if f.a().is_zero() {
        i64::MAX
    } else {
        -2 * deg(f.a())
    };
    let vb = if f.b().is_zero() {
        i64::MAX
    } else {
        -2 * deg(f.b()) - 3
    };
    let lead = va.min(vb);
    let mut margin = 2;
    for _ in 0..8 {
        let work = (order - lead + margin).max(MIN_ORDER);
        let wp = wp_series(curve, work);
        let mut out = ratfn_at(f.a(), &wp, work)?;
        if !f.b().is_zero() {
            let wpp = wp_series(curve, work + 1).derivative();
            out = out.add(&ratfn_at(f.b(), &wp, work)?.mul(&wpp));
        }
        if out.trunc() >= order {
            return Ok(out.truncate(order));
        }
        margin = 2 * margin + (order - out.trunc());
    }
    Err(Error::Precision(format!("could not reach order {order}")))
}
