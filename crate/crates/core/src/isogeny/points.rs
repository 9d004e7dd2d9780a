//! Points of the curve, the chord-tangent law and functions with a given divisor.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{CurveParams, EllFn, Poly, RatFn, Scalar};

/// A point of `y^2 = 4x^3 - g2 x - g3`; the curve is supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointXY {
    Infinity,
    Affine { x: Scalar, y: Scalar },
}

impl PointXY {
    pub fn affine(x: Scalar, y: Scalar) -> Self {
        PointXY::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, PointXY::Infinity)
    }

    pub fn on_curve(&self, curve: &CurveParams) -> bool {
        match self {
            PointXY::Infinity => true,
            PointXY::Affine { x, y } => curve.contains(x, y),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Tag(String),
    Affine { x: Scalar, y: Scalar },
}

impl Serialize for PointXY {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PointXY::Infinity => PointRepr::Tag("infinity".into()),
            PointXY::Affine { x, y } => PointRepr::Affine {
                x: x.clone(),
                y: y.clone(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointXY {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PointRepr::deserialize(d)? {
            PointRepr::Tag(t) if t == "infinity" => Ok(PointXY::Infinity),
            PointRepr::Tag(t) => Err(serde::de::Error::custom(format!(
                "expected \"infinity\", got {t:?}"
            ))),
            PointRepr::Affine { x, y } => Ok(PointXY::Affine { x, y }),
        }
    }
}

fn check_on(curve: &CurveParams, p: &PointXY) -> Result<()> {
    if p.on_curve(curve) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p:?} is not on the curve")))
    }
}

pub fn ec_neg(p: &PointXY) -> PointXY {
    match p {
        PointXY::Infinity => PointXY::Infinity,
        PointXY::Affine { x, y } => PointXY::affine(x.clone(), -y),
    }
}

/// Slope of the chord through `p`, `q` (tangent if equal); `None` for a vertical line.
fn slope(curve: &CurveParams, p: (&Scalar, &Scalar), q: (&Scalar, &Scalar)) -> Option<Scalar> {
    let (x1, y1) = p;
    let (x2, y2) = q;
    if x1 != x2 {
        return Some(&(y2 - y1) / &(x2 - x1));
    }
    if y1 != y2 || y1.is_zero() {
        return None;
    }
    // implicit derivative of y^2 = 4x^3 - g2 x - g3
    let num = &(&(x1 * x1) * &Scalar::int(12)) - &curve.g2;
    Some(&num / &(y1 * &Scalar::int(2)))
}

/// Chord-tangent addition.
pub fn ec_add(curve: &CurveParams, p: &PointXY, q: &PointXY) -> Result<PointXY> {
    check_on(curve, p)?;
    check_on(curve, q)?;
    Ok(add_unchecked(curve, p, q))
}

fn add_unchecked(curve: &CurveParams, p: &PointXY, q: &PointXY) -> PointXY {
    let (PointXY::Affine { x: x1, y: y1 }, PointXY::Affine { x: x2, y: y2 }) = (p, q) else {
        return if p.is_infinity() {
            q.clone()
        } else {
            p.clone()
        };
    };
    let Some(l) = slope(curve, (x1, y1), (x2, y2)) else {
        return PointXY::Infinity;
    };
    let x3 = &(&(&(&l * &l) / &Scalar::int(4)) - x1) - x2;
    let y3 = -(&(&l * &(&x3 - x1)) + y1);
    PointXY::affine(x3, y3)
}

/// `[n] p` by double-and-add.
pub fn ec_mul(curve: &CurveParams, p: &PointXY, n: i64) -> Result<PointXY> {
    check_on(curve, p)?;
    let mut base = if n < 0 { ec_neg(p) } else { p.clone() };
    let mut k = n.unsigned_abs();
    let mut acc = PointXY::Infinity;
    while k > 0 {
        if k & 1 == 1 {
            acc = add_unchecked(curve, &acc, &base);
        }
        base = add_unchecked(curve, &base, &base);
        k >>= 1;
    }
    Ok(acc)
}

fn line_x(x0: &Scalar, curve: &Arc<CurveParams>) -> EllFn {
    EllFn::from_x(RatFn::poly(Poly::new(vec![-x0, Scalar::one()])), curve)
}

/// A function whose divisor is `sum n_P (P)`, built from chord/vertical
/// quotients. Only defined up to a constant factor; this is the representative
/// the construction produces, certified by [`verify_divisor`] before returning.
pub fn function_from_divisor(
    curve: &Arc<CurveParams>,
    divisor: &[(PointXY, i64)],
) -> Result<EllFn> {
    for (p, _) in divisor {
        check_on(curve, p)?;
    }
    let degree: i64 = divisor.iter().map(|(_, n)| n).sum();
    if degree != 0 {
        return Err(Error::Precondition(format!(
            "divisor has degree {degree}, not 0"
        )));
    }
    let mut sum = PointXY::Infinity;
    for (p, n) in divisor {
        sum = add_unchecked(curve, &sum, &ec_mul(curve, p, *n)?);
    }
    if !sum.is_infinity() {
        return Err(Error::Precondition(format!(
            "divisor sums to {sum:?} in the group, not to the origin"
        )));
    }

    // Invariant: D_seen - div(h) = (s) - (O).
    let mut h = EllFn::one(curve);
    let mut s = PointXY::Infinity;
    for (p, n) in divisor {
        let PointXY::Affine { x: xp, .. } = p else {
            continue;
        };
        let step = if *n > 0 { p.clone() } else { ec_neg(p) };
        for _ in 0..n.unsigned_abs() {
            let (l, next) = chord_step(curve, &s, &step);
            h = h.try_mul(&l)?;
            s = next;
            if *n < 0 {
                // -(P) + (O) = (-P) - (O) - div(x - x_P)
                h = h.try_div(&line_x(xp, curve))?;
            }
        }
    }
    debug_assert!(s.is_infinity());
    if !verify_divisor(&h, divisor)? {
        return Err(Error::Precondition(
            "constructed function failed its divisor certificate".into(),
        ));
    }
    Ok(h)
}

/// For `(s) + (p) - 2(O)`: the function `l/v` with divisor `(s) + (p) - (s+p) - (O)`, and `s + p`.
fn chord_step(curve: &Arc<CurveParams>, s: &PointXY, p: &PointXY) -> (EllFn, PointXY) {
    let sum = add_unchecked(curve, s, p);
    let (PointXY::Affine { x: xs, y: ys }, PointXY::Affine { x: xp, y: yp }) = (s, p) else {
        return (EllFn::one(curve), sum);
    };
    let Some(l) = slope(curve, (xs, ys), (xp, yp)) else {
        return (line_x(xs, curve), sum);
    };
    // y - ys - l (x - xs)
    let line = EllFn::new(
        RatFn::poly(Poly::new(vec![&(&l * xs) - ys, -&l])),
        RatFn::one(),
        curve.clone(),
    );
    let PointXY::Affine { x: x3, .. } = &sum else {
        unreachable!("non-vertical chord")
    };
    (
        line.try_div(&line_x(x3, curve))
            .expect("vertical line is nonzero"),
        sum,
    )
}

/// Multiplicity of `x0` as a root of `p`.
fn root_order(p: &Poly, x0: &Scalar) -> i64 {
    if p.is_zero() {
        return i64::MAX;
    }
    let lin = Poly::new(vec![-x0, Scalar::one()]);
    let mut p = p.clone();
    let mut k = 0;
    loop {
        let (q, r) = p.div_rem(&lin).expect("nonzero divisor");
        if !r.is_zero() {
            return k;
        }
        p = q;
        k += 1;
    }
}

fn ratfn_order(r: &RatFn, x0: &Scalar) -> i64 {
    if r.is_zero() {
        return i64::MAX;
    }
    root_order(r.num(), x0) - root_order(r.den(), x0)
}

/// `r / (x - x0)^k` for a possibly negative `k`.
fn strip(r: &RatFn, x0: &Scalar, k: i64) -> RatFn {
    if r.is_zero() {
        return r.clone();
    }
    let f = RatFn::poly(Poly::new(vec![-x0, Scalar::one()]).pow(k.unsigned_abs() as u32));
    if k >= 0 {
        r.div(&f).expect("nonzero")
    } else {
        r * &f
    }
}

/// Order of vanishing of `f` at `p` (negative for poles).
pub fn ord_at(f: &EllFn, p: &PointXY) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument(
            "the zero function has no order".into(),
        ));
    }
    check_on(f.curve(), p)?;
    let deg =
        |r: &RatFn| r.num().degree().unwrap_or(0) as i64 - r.den().degree().unwrap_or(0) as i64;
    let PointXY::Affine { x: x0, y: y0 } = p else {
        // ord_O x = -2, ord_O y = -3; the two parts never cancel
        let oa = if f.a().is_zero() {
            i64::MAX
        } else {
            -2 * deg(f.a())
        };
        let ob = if f.b().is_zero() {
            i64::MAX
        } else {
            -2 * deg(f.b()) - 3
        };
        return Ok(oa.min(ob));
    };
    let k = ratfn_order(f.a(), x0).min(ratfn_order(f.b(), x0));
    let a = strip(f.a(), x0, k);
    let b = strip(f.b(), x0, k);
    let a0 = if a.is_zero() {
        Scalar::zero()
    } else {
        a.eval(x0)?
    };
    let b0 = if b.is_zero() {
        Scalar::zero()
    } else {
        b.eval(x0)?
    };
    if y0.is_zero() {
        // y is a uniformizer and x - x0 vanishes to order 2
        return Ok(if a0.is_zero() { 2 * k + 1 } else { 2 * k });
    }
    if !(&a0 + &(&b0 * y0)).is_zero() {
        return Ok(k);
    }
    // ord_P + ord_{-P} equals the order of the norm at x0, and ord_{-P} = k
    Ok(ratfn_order(&f.norm(), x0) - k)
}

/// Check that `div f` is exactly `divisor`: orders agree at every listed point
/// (including the origin), and every affine pole of `f` sits over a listed `x`;
/// since degrees vanish, no unlisted zero can then remain.
pub fn verify_divisor(f: &EllFn, divisor: &[(PointXY, i64)]) -> Result<bool> {
    let mut want: BTreeMap<PointXY, i64> = BTreeMap::new();
    for (p, n) in divisor {
        *want.entry(p.clone()).or_default() += n;
    }
    want.entry(PointXY::Infinity).or_default();
    for (p, n) in &want {
        if ord_at(f, p)? != *n {
            return Ok(false);
        }
    }
    let xs: Vec<&Scalar> = want
        .keys()
        .filter_map(|p| match p {
            PointXY::Affine { x, .. } => Some(x),
            PointXY::Infinity => None,
        })
        .collect();
    for den in [f.a().den(), f.b().den()] {
        let mut d = den.clone();
        for x0 in &xs {
            let k = root_order(&d, x0);
            if k > 0 {
                d = d.div_exact(&Poly::new(vec![-*x0, Scalar::one()]).pow(k as u32))?;
            }
        }
        if !d.is_constant() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> Arc<CurveParams> {
        Arc::new(CurveParams::from_ints(4, 0).unwrap())
    }

    fn pt(x: i64, y: i64) -> PointXY {
        PointXY::affine(Scalar::int(x), Scalar::int(y))
    }

    #[test]
    fn two_torsion() {
        let c = curve();
        let t = pt(0, 0);
        assert_eq!(ec_add(&c, &t, &t).unwrap(), PointXY::Infinity);
        assert_eq!(ec_add(&c, &t, &PointXY::Infinity).unwrap(), t);
    }

    #[test]
    fn associativity_sample() {
        // y^2 = 4x^3 + 4
        let c = Arc::new(CurveParams::from_ints(0, -4).unwrap());
        let p = pt(0, 2);
        let q = pt(2, 6);
        assert!(p.on_curve(&c) && q.on_curve(&c));
        let r = ec_add(&c, &p, &p).unwrap();
        let lhs = ec_add(&c, &ec_add(&c, &p, &q).unwrap(), &r).unwrap();
        let rhs = ec_add(&c, &p, &ec_add(&c, &q, &r).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.on_curve(&c));
    }

    #[test]
    fn vertical_divisor() {
        let c = curve();
        let t = pt(1, 0);
        let f = function_from_divisor(&c, &[(t.clone(), 2), (PointXY::Infinity, -2)]).unwrap();
        assert_eq!(f, &EllFn::x(&c) - &EllFn::one(&c));
        let g = function_from_divisor(&c, &[(pt(0, 0), 2), (PointXY::Infinity, -2)]).unwrap();
        assert_eq!(g, EllFn::x(&c));
        assert!(function_from_divisor(&c, &[]).unwrap().is_one());
    }

    #[test]
    fn divisor_preconditions() {
        let c = curve();
        assert!(function_from_divisor(&c, &[(pt(0, 0), 1)]).is_err());
        // (0,0) - (1,0) has degree 0 but is not principal
        assert!(function_from_divisor(&c, &[(pt(0, 0), 1), (pt(1, 0), -1)]).is_err());
    }

    #[test]
    fn gaussian_four_torsion() {
        let c = curve();
        // x = i, y = 2 - 2i: 4 i^3 - 4 i = -8i and (2 - 2i)^2 = -8i
        let p = PointXY::affine(Scalar::i(), Scalar::gauss(2, -2));
        assert!(p.on_curve(&c));
        assert_eq!(ec_mul(&c, &p, 4).unwrap(), PointXY::Infinity);
        let d = vec![(p.clone(), 3), (ec_neg(&p), -1), (PointXY::Infinity, -2)];
        let f = function_from_divisor(&c, &d).unwrap();
        assert_eq!(ord_at(&f, &p).unwrap(), 3);
        assert_eq!(ord_at(&f, &ec_neg(&p)).unwrap(), -1);
        assert_eq!(ord_at(&f, &PointXY::Infinity).unwrap(), -2);
    }
}
