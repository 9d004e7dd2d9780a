//! The function field `K = C(x, y)` of the curve `y^2 = 4x^3 - g2 x - g3`,
//! where `x` plays the role of the Weierstrass function and `y` of its derivative.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::ratfn::RatFn;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Curve invariants fixing the relation `y^2 = 4x^3 - g2 x - g3`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CurveParams {
    pub g2: Scalar,
    pub g3: Scalar,
}

impl CurveParams {
    pub fn new(g2: Scalar, g3: Scalar) -> Result<Self> {
        let c = CurveParams { g2, g3 };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn from_ints(g2: i64, g3: i64) -> Result<Self> {
        CurveParams::new(Scalar::int(g2), Scalar::int(g3))
    }

    /// `g2^3 - 27 g3^2`.
    pub fn discriminant(&self) -> Scalar {
        let g2c = &(&self.g2 * &self.g2) * &self.g2;
        let g3s = &self.g3 * &self.g3;
        &g2c - &(&Scalar::int(27) * &g3s)
    }

    /// The cubic `4x^3 - g2 x - g3`.
    pub fn cubic(&self) -> Poly {
        Poly::new(vec![-&self.g3, -&self.g2, Scalar::zero(), Scalar::int(4)])
    }

    /// `dy/dz = 6x^2 - g2/2`.
    pub fn y_derivative(&self) -> Poly {
        Poly::new(vec![
            -&(&self.g2 / &Scalar::int(2)),
            Scalar::zero(),
            Scalar::int(6),
        ])
    }

    pub fn contains(&self, x: &Scalar, y: &Scalar) -> bool {
        &(y * y) == &self.cubic().eval(x)
    }
}

/// An element `a(x) + b(x) y` of the elliptic function field.
#[derive(Clone)]
pub struct EllFn {
    a: RatFn,
    b: RatFn,
    curve: Arc<CurveParams>,
}

/// JSON shape of an [`EllFn`]; the curve travels separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllFnRepr {
    pub a: RatFn,
    pub b: RatFn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

impl EllFn {
    pub fn new(a: RatFn, b: RatFn, curve: Arc<CurveParams>) -> Self {
        EllFn { a, b, curve }
    }

    pub fn from_repr(r: EllFnRepr, curve: Arc<CurveParams>) -> Self {
        EllFn::new(r.a, r.b, curve)
    }

    pub fn to_repr(&self) -> EllFnRepr {
        EllFnRepr {
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }

    pub fn constant(c: Scalar, curve: &Arc<CurveParams>) -> Self {
        EllFn::new(RatFn::constant(c), RatFn::zero(), curve.clone())
    }

    pub fn zero(curve: &Arc<CurveParams>) -> Self {
        EllFn::constant(Scalar::zero(), curve)
    }

    pub fn one(curve: &Arc<CurveParams>) -> Self {
        EllFn::constant(Scalar::one(), curve)
    }

    pub fn x(curve: &Arc<CurveParams>) -> Self {
        EllFn::new(RatFn::x(), RatFn::zero(), curve.clone())
    }

    pub fn y(curve: &Arc<CurveParams>) -> Self {
        EllFn::new(RatFn::zero(), RatFn::one(), curve.clone())
    }

    /// A rational function of `x` alone.
    pub fn from_x(a: RatFn, curve: &Arc<CurveParams>) -> Self {
        EllFn::new(a, RatFn::zero(), curve.clone())
    }

    pub fn a(&self) -> &RatFn {
        &self.a
    }

    pub fn b(&self) -> &RatFn {
        &self.b
    }

    pub fn curve(&self) -> &Arc<CurveParams> {
        &self.curve
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.as_constant().is_some_and(|c| c.is_one())
    }

    /// Constant value when `f` is a constant function.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.b.is_zero() {
            self.a.as_constant()
        } else {
            None
        }
    }

    fn same_curve(&self, other: &EllFn) -> Result<()> {
        if Arc::ptr_eq(&self.curve, &other.curve) || self.curve == other.curve {
            Ok(())
        } else {
            Err(Error::CurveMismatch)
        }
    }

    pub fn scale(&self, c: &Scalar) -> EllFn {
        EllFn::new(self.a.scale(c), self.b.scale(c), self.curve.clone())
    }

    /// Image under `y -> -y`, i.e. `f(-z)`.
    pub fn conj(&self) -> EllFn {
        EllFn::new(self.a.clone(), -&self.b, self.curve.clone())
    }

    /// `f * conj(f) = a^2 - b^2 (4x^3 - g2 x - g3)`, a function of `x` alone.
    pub fn norm(&self) -> RatFn {
        let w = RatFn::poly(self.curve.cubic());
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &w)
    }

    pub fn try_add(&self, rhs: &EllFn) -> Result<EllFn> {
        self.same_curve(rhs)?;
        Ok(EllFn::new(
            &self.a + &rhs.a,
            &self.b + &rhs.b,
            self.curve.clone(),
        ))
    }

    pub fn try_sub(&self, rhs: &EllFn) -> Result<EllFn> {
        self.same_curve(rhs)?;
        Ok(EllFn::new(
            &self.a - &rhs.a,
            &self.b - &rhs.b,
            self.curve.clone(),
        ))
    }

    pub fn try_mul(&self, rhs: &EllFn) -> Result<EllFn> {
        self.same_curve(rhs)?;
        let (a1, b1, a2, b2) = (&self.a, &self.b, &rhs.a, &rhs.b);
        let a = if b1.is_zero() || b2.is_zero() {
            a1 * a2
        } else {
            let w = RatFn::poly(self.curve.cubic());
            &(a1 * a2) + &(&(b1 * b2) * &w)
        };
        let b = &(a1 * b2) + &(a2 * b1);
        Ok(EllFn::new(a, b, self.curve.clone()))
    }

    pub fn inv(&self) -> Result<EllFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(EllFn::new(self.a.inv()?, RatFn::zero(), self.curve.clone()));
        }
        let n = self.norm().inv()?;
        Ok(EllFn::new(
            &self.a * &n,
            -&(&self.b * &n),
            self.curve.clone(),
        ))
    }

    pub fn try_div(&self, rhs: &EllFn) -> Result<EllFn> {
        self.same_curve(rhs)?;
        self.try_mul(&rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<EllFn> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = EllFn::one(&self.curve);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// `d/dz` using `dx/dz = y` and `dy/dz = 6x^2 - g2/2`.
    pub fn derive(&self) -> EllFn {
        let w = RatFn::poly(self.curve.cubic());
        let dy = RatFn::poly(self.curve.y_derivative());
        let a = &(&self.b.derivative() * &w) + &(&self.b * &dy);
        EllFn::new(a, self.a.derivative(), self.curve.clone())
    }

    /// Value at an affine point of the curve; errors at poles of the representation.
    pub fn eval_point(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        Ok(&self.a.eval(x)? + &(&self.b.eval(x)? * y))
    }
}

/// Field operation dispatch.
pub fn ell_arith(lhs: &EllFn, rhs: &EllFn, kind: ArithKind) -> Result<EllFn> {
    match kind {
        ArithKind::Add => lhs.try_add(rhs),
        ArithKind::Sub => lhs.try_sub(rhs),
        ArithKind::Mul => lhs.try_mul(rhs),
        ArithKind::Div => lhs.try_div(rhs),
    }
}

pub fn ell_derive(f: &EllFn) -> EllFn {
    f.derive()
}

pub fn ell_is_constant(f: &EllFn) -> Option<Scalar> {
    f.as_constant()
}

impl PartialEq for EllFn {
    fn eq(&self, other: &Self) -> bool {
        self.same_curve(other).is_ok() && self.a == other.a && self.b == other.b
    }
}

impl Eq for EllFn {}

impl fmt::Debug for EllFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for EllFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*y", self.b),
            _ => write!(f, "{} + ({})*y", self.a, self.b),
        }
    }
}

// Operator forms panic on curve mismatch; the `try_*` methods report it.
impl<'a> Add<&'a EllFn> for &'a EllFn {
    type Output = EllFn;
    fn add(self, rhs: &EllFn) -> EllFn {
        self.try_add(rhs).expect("curve mismatch")
    }
}

impl<'a> Sub<&'a EllFn> for &'a EllFn {
    type Output = EllFn;
    fn sub(self, rhs: &EllFn) -> EllFn {
        self.try_sub(rhs).expect("curve mismatch")
    }
}

impl<'a> Mul<&'a EllFn> for &'a EllFn {
    type Output = EllFn;
    fn mul(self, rhs: &EllFn) -> EllFn {
        self.try_mul(rhs).expect("curve mismatch")
    }
}

impl Neg for &EllFn {
    type Output = EllFn;
    fn neg(self) -> EllFn {
        EllFn::new(-&self.a, -&self.b, self.curve.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(g2: i64, g3: i64) -> Arc<CurveParams> {
        Arc::new(CurveParams::from_ints(g2, g3).unwrap())
    }

    #[test]
    fn product_reduces_y_squared() {
        let c = curve(4, 0);
        let (x, y) = (EllFn::x(&c), EllFn::y(&c));
        // (x + y)(x - y) = x^2 - 4x^3 + g2 x + g3
        let lhs = &(&x + &y) * &(&x - &y);
        let expect = EllFn::from_x(RatFn::poly(Poly::from_ints(&[0, 4, 1, -4])), &c);
        assert_eq!(lhs, expect);
        // x*x + y*y = x^2 + 4x^3 - g2 x - g3
        let lhs = &(&x * &x) + &(&y * &y);
        assert_eq!(
            lhs,
            EllFn::from_x(RatFn::poly(Poly::from_ints(&[0, -4, 1, 4])), &c)
        );
    }

    #[test]
    fn inverse_of_y_over_x_minus_one() {
        let c = curve(4, 0);
        let f = EllFn::y(&c)
            .try_div(&(&EllFn::x(&c) - &EllFn::one(&c)))
            .unwrap();
        assert!((&f * &f.inv().unwrap()).is_one());
        assert!(f.try_div(&f).unwrap().is_one());
    }

    #[test]
    fn derivatives_of_generators() {
        let c = curve(4, 0);
        assert_eq!(EllFn::x(&c).derive(), EllFn::y(&c));
        let expect = EllFn::from_x(RatFn::poly(Poly::from_ints(&[-2, 0, 6])), &c);
        assert_eq!(EllFn::y(&c).derive(), expect);
        assert!(EllFn::constant(Scalar::int(5), &c).derive().is_zero());
    }

    #[test]
    fn constancy_test() {
        let c = curve(4, 0);
        assert_eq!(
            ell_is_constant(&EllFn::constant(Scalar::int(5), &c)),
            Some(Scalar::int(5))
        );
        assert_eq!(ell_is_constant(&EllFn::x(&c)), None);
        let r = RatFn::new(Poly::from_ints(&[2, 2]), Poly::from_ints(&[1, 1])).unwrap();
        assert_eq!(ell_is_constant(&EllFn::from_x(r, &c)), Some(Scalar::int(2)));
    }

    #[test]
    fn errors_are_explicit() {
        let c = curve(4, 0);
        let d = curve(0, 4);
        assert_eq!(
            EllFn::x(&c).try_add(&EllFn::x(&d)),
            Err(Error::CurveMismatch)
        );
        assert_eq!(
            EllFn::x(&c).try_div(&EllFn::zero(&c)),
            Err(Error::DivisionByZero)
        );
        assert_eq!(CurveParams::from_ints(0, 0), Err(Error::SingularCurve));
    }
}
