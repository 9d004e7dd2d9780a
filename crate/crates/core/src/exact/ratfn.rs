//! Rational functions in one variable, kept in lowest terms with monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

#[derive(Deserialize)]
struct RatFnRepr {
    num: Poly,
    den: Poly,
}

impl<'de> Deserialize<'de> for RatFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = RatFnRepr::deserialize(d)?;
        RatFn::new(r.num, r.den).map_err(D::Error::custom)
    }
}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl RatFn {
    /// Reduce `num/den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        Ok(Self::normalized(num, den))
    }

    /// Canonical form of a fraction the caller knows to be reduced.
    pub(crate) fn from_coprime(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        debug_assert!(
            num.is_zero() || num.gcd(&den).is_one(),
            "fraction not reduced"
        );
        if num.is_zero() {
            return RatFn::zero();
        }
        Self::normalized(num, den)
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let l = den.leading().unwrap().clone();
        if l.is_one() {
            RatFn { num, den }
        } else {
            let li = l.inv().unwrap();
            RatFn {
                num: num.scale(&li),
                den: den.scale(&li),
            }
        }
    }

    pub fn poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        RatFn::poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatFn::poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFn::poly(Poly::one())
    }

    pub fn x() -> Self {
        RatFn::poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value if both numerator and denominator are constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &Scalar) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFn) -> Result<RatFn> {
        Ok(self * &rhs.inv()?)
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFn {
        self * &RatFn::poly(p.clone())
    }

    pub fn derivative(&self) -> RatFn {
        // With g = gcd(d, d'), (n' d/g - n d'/g) / (d d/g) is already reduced:
        // at a root of d the first term vanishes and the second does not.
        let dd = self.den.derivative();
        let g = self.den.gcd(&dd);
        let (s, t) = if g.is_one() {
            (self.den.clone(), dd)
        } else {
            (
                self.den.div_exact(&g).expect("gcd divides"),
                dd.div_exact(&g).expect("gcd divides"),
            )
        };
        let n = &(&self.num.derivative() * &s) - &(&self.num * &t);
        RatFn::from_coprime(n, &self.den * &s)
    }

    /// Value at a point; errors at a pole.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.num.eval(x) / &d)
    }

    /// `self(r)` for another rational function `r`.
    pub fn compose(&self, r: &RatFn) -> RatFn {
        if let Some(c) = self.as_constant() {
            return RatFn::constant(c);
        }
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let n = dn.max(dd);
        // num(u/v)/den(u/v) = num~(u,v) v^(n-dn) / (den~(u,v) v^(n-dd))
        let top = &self.num.homogenize(&r.num, &r.den, dn) * &r.den.pow((n - dn) as u32);
        let bot = &self.den.homogenize(&r.num, &r.den, dd) * &r.den.pow((n - dd) as u32);
        assert!(!bot.is_zero(), "composition denominator vanished");
        // Both inputs are reduced, so the homogenized pair is coprime.
        RatFn::from_coprime(top, bot)
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        if self.den.is_one() {
            return RatFn::normalized(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            return RatFn::normalized(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFn::new(num, &a * &rhs.den).unwrap()
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFn::poly(&self.num * &rhs.num);
        }
        // cross-cancel so the product is reduced without a big gcd
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFn::normalized(&n1 * &n2, &d1 * &d2)
    }
}
