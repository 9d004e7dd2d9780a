//! Truncated formal Laurent series over [`Scalar`].
//!
//! A series stores the coefficients of `z^val .. z^(val + len)`; every exponent
//! from there up to `trunc` is known to be zero, and nothing is known at or
//! beyond `trunc`. Arithmetic propagates the guaranteed truncation order
//! pessimistically. Exact series (polynomials in `z, 1/z`) use [`EXACT`].

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rational, Scalar};
use crate::linalg::RingElem;

/// Truncation order of a series that is known exactly.
pub const EXACT: i64 = 1 << 60;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    val: i64,
    trunc: i64,
    coeffs: Vec<Scalar>,
}

impl LaurentSeries {
    /// Series with coefficient `coeffs[i]` at `z^(start+i)`, known below `trunc`.
    pub fn new(start: i64, coeffs: Vec<Scalar>, trunc: i64) -> Self {
        let trunc = trunc.min(EXACT);
        let mut coeffs = coeffs;
        let keep = (trunc - start).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => LaurentSeries::zero(trunc),
            Some(k) => {
                coeffs.drain(..k);
                LaurentSeries {
                    val: start + k as i64,
                    trunc,
                    coeffs,
                }
            }
        }
    }

    pub fn zero(trunc: i64) -> Self {
        let trunc = trunc.min(EXACT);
        LaurentSeries {
            val: trunc,
            trunc,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(c: Scalar, exp: i64, trunc: i64) -> Self {
        LaurentSeries::new(exp, vec![c], trunc)
    }

    pub fn constant(c: Scalar, trunc: i64) -> Self {
        LaurentSeries::monomial(c, 0, trunc)
    }

    pub fn one() -> Self {
        LaurentSeries::constant(Scalar::one(), EXACT)
    }

    /// The exact series `z`.
    pub fn z() -> Self {
        LaurentSeries::monomial(Scalar::one(), 1, EXACT)
    }

    /// Lowest nonzero exponent, `None` if zero to truncation.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc >= EXACT
    }

    /// Zero to truncation.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^n`; `n` must lie below the truncation order.
    pub fn coeff(&self, n: i64) -> Scalar {
        debug_assert!(
            n < self.trunc,
            "coefficient {n} beyond truncation {}",
            self.trunc
        );
        if n < self.val || self.coeffs.is_empty() {
            return Scalar::zero();
        }
        self.coeffs
            .get((n - self.val) as usize)
            .cloned()
            .unwrap_or_default()
    }

    /// Coefficient if known.
    pub fn get(&self, n: i64) -> Option<Scalar> {
        (n < self.trunc).then(|| self.coeff(n))
    }

    /// Stored `(exponent, coefficient)` pairs, nonzero leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    /// Last exponent that may carry a nonzero stored coefficient, plus one.
    fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Forget everything at or above `t`.
    pub fn truncate(&self, t: i64) -> LaurentSeries {
        if t >= self.trunc {
            return self.clone();
        }
        LaurentSeries::new(self.val, self.coeffs.clone(), t)
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries {
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LaurentSeries {
        if c.is_zero() {
            return LaurentSeries::zero(self.trunc);
        }
        LaurentSeries {
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        let t = if self.is_exact() {
            EXACT
        } else {
            self.trunc + k
        };
        if self.is_zero() {
            return LaurentSeries::zero(t);
        }
        LaurentSeries {
            val: self.val + k,
            trunc: t,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn add(&self, o: &LaurentSeries) -> LaurentSeries {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &LaurentSeries) -> LaurentSeries {
        self.combine(o, true)
    }

    fn combine(&self, o: &LaurentSeries, negate: bool) -> LaurentSeries {
        let trunc = self.trunc.min(o.trunc);
        if self.is_zero() && o.is_zero() {
            return LaurentSeries::zero(trunc);
        }
        let lo = self.lo_or(trunc).min(o.lo_or(trunc));
        // a zero operand stores nothing; its `end` is its truncation
        let end = |s: &LaurentSeries| if s.is_zero() { lo } else { s.end() };
        let hi = end(self).max(end(o)).min(trunc).max(lo);
        let coeffs = (lo..hi)
            .map(|n| {
                let a = self.stored(n);
                let b = o.stored(n);
                if negate {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        LaurentSeries::new(lo, coeffs, trunc)
    }

    fn lo_or(&self, t: i64) -> i64 {
        if self.is_zero() {
            t
        } else {
            self.val
        }
    }

    fn stored(&self, n: i64) -> Scalar {
        if self.coeffs.is_empty() || n < self.val || n >= self.end() {
            Scalar::zero()
        } else {
            self.coeffs[(n - self.val) as usize].clone()
        }
    }

    pub fn mul(&self, o: &LaurentSeries) -> LaurentSeries {
        let trunc = match (self.valuation(), o.valuation()) {
            (Some(a), Some(b)) => (a + o.trunc).min(b + self.trunc),
            (None, Some(b)) => b + self.trunc,
            (Some(a), None) => a + o.trunc,
            (None, None) => self.trunc + o.trunc,
        }
        .min(EXACT);
        if self.is_zero() || o.is_zero() {
            return LaurentSeries::zero(trunc);
        }
        let lo = self.val + o.val;
        let hi = (self.end() + o.end() - 1).min(trunc);
        if hi <= lo {
            return LaurentSeries::zero(trunc);
        }
        let mut out = vec![Scalar::zero(); (hi - lo) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= out.len() {
                    break;
                }
                if !b.is_zero() {
                    out[k] += &(a * b);
                }
            }
        }
        LaurentSeries::new(lo, out, trunc)
    }

    /// Multiplicative inverse; exact non-monomial series need a finite truncation first.
    pub fn inv(&self) -> Result<LaurentSeries> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let v = self.val;
        if self.coeffs.len() == 1 && self.is_exact() {
            return Ok(LaurentSeries::monomial(self.coeffs[0].inv()?, -v, EXACT));
        }
        if self.is_exact() {
            return Err(Error::Precision(
                "inverse of an exact series needs a truncation".into(),
            ));
        }
        let n = (self.trunc - v) as usize;
        let c0 = self.coeffs[0].inv()?;
        let mut out: Vec<Scalar> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(c0.clone());
                continue;
            }
            let mut acc = Scalar::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += &(a * &out[k - j]);
                }
            }
            out.push(-&(&acc * &c0));
        }
        Ok(LaurentSeries::new(-v, out, self.trunc - 2 * v))
    }

    pub fn div(&self, o: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u32) -> LaurentSeries {
        let mut base = self.clone();
        let mut acc = LaurentSeries::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `d/dz`, losing one order of truncation.
    pub fn derivative(&self) -> LaurentSeries {
        let t = if self.is_exact() {
            EXACT
        } else {
            self.trunc - 1
        };
        let coeffs = self
            .terms()
            .map(|(n, c)| c * &Scalar::int(n))
            .collect::<Vec<_>>();
        LaurentSeries::new(self.val - 1, coeffs, t)
    }

    /// Termwise primitive with zero constant term; fails on a residue.
    pub fn integrate(&self) -> Result<LaurentSeries> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (n, c) in self.terms() {
            if n == -1 {
                if !c.is_zero() {
                    return Err(Error::InvalidArgument(
                        "series has a nonzero residue".into(),
                    ));
                }
                coeffs.push(Scalar::zero());
            } else {
                coeffs.push(c / &Scalar::int(n + 1));
            }
        }
        let t = if self.is_exact() {
            EXACT
        } else {
            self.trunc + 1
        };
        if self.is_zero() {
            return Ok(LaurentSeries::zero(t));
        }
        Ok(LaurentSeries::new(self.val + 1, coeffs, t))
    }

    /// `f(z) -> f(s z)` for a nonzero rational `s`.
    pub fn dilate(&self, s: &Rational) -> LaurentSeries {
        let s = Scalar::real(s.clone());
        let coeffs = self
            .terms()
            .map(|(n, c)| c * &s.pow(n).expect("nonzero dilation"))
            .collect();
        if self.is_zero() {
            return self.clone();
        }
        LaurentSeries::new(self.val, coeffs, self.trunc)
    }

    /// `exp(h)` for `h` with positive valuation.
    pub fn exp(&self) -> Result<LaurentSeries> {
        if self.valuation().is_some_and(|v| v < 1) {
            return Err(Error::InvalidArgument(
                "exp needs positive valuation".into(),
            ));
        }
        if self.is_exact() && !self.is_zero() {
            return Err(Error::Precision(
                "exp of an exact series needs a truncation".into(),
            ));
        }
        let n = self.trunc.max(1) as usize;
        let h: Vec<Scalar> = (0..n as i64).map(|k| self.coeff(k)).collect();
        // e' = h' e  =>  k e_k = sum_{j=1..k} j h_j e_{k-j}
        let mut e = vec![Scalar::one()];
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if !h[j].is_zero() {
                    acc += &(&(&h[j] * &Scalar::int(j as i64)) * &e[k - j]);
                }
            }
            e.push(&acc / &Scalar::int(k as i64));
        }
        Ok(LaurentSeries::new(0, e, self.trunc))
    }

    /// Floating-point value of the stored terms at `z`.
    pub fn eval_f64(&self, z: Complex64) -> Complex64 {
        self.terms().fold(Complex64::new(0.0, 0.0), |acc, (n, c)| {
            acc + c.to_complex() * z.powi(n as i32)
        })
    }

    /// JSON-facing view with a dense coefficient list from `val` to `trunc`.
    pub fn to_repr(&self) -> SeriesRepr {
        let trunc = (!self.is_exact()).then_some(self.trunc);
        let (val, coeffs) = if self.is_zero() {
            (self.trunc.min(0), Vec::new())
        } else {
            let end = if self.is_exact() {
                self.end()
            } else {
                self.trunc
            };
            (self.val, (self.val..end).map(|n| self.stored(n)).collect())
        };
        if self.is_zero() && trunc.is_some() {
            let t = self.trunc;
            return SeriesRepr {
                val: t,
                trunc,
                coeffs: Vec::new(),
            };
        }
        SeriesRepr { val, trunc, coeffs }
    }

    pub fn from_repr(r: SeriesRepr) -> Self {
        LaurentSeries::new(r.val, r.coeffs, r.trunc.unwrap_or(EXACT))
    }
}

/// `{"val":-2,"trunc":40,"coeffs":[...]}`; `trunc` is null for exact series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRepr {
    pub val: i64,
    pub trunc: Option<i64>,
    pub coeffs: Vec<Scalar>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(LaurentSeries::from_repr(SeriesRepr::deserialize(d)?))
    }
}

/// `f(z) -> f(m z)` for a positive integer `m`.
pub fn scale_arg(f: &LaurentSeries, m: u64) -> LaurentSeries {
    f.dilate(&Rational::from_integer(BigInt::from(m)))
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*z^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            write!(f, " + O(z^{})", self.trunc)?;
        }
        Ok(())
    }
}

impl RingElem for LaurentSeries {
    fn zero_like(&self) -> Self {
        LaurentSeries::zero(EXACT)
    }
    fn one_like(&self) -> Self {
        LaurentSeries::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn inv_elem(&self) -> Result<Self> {
        self.inv()
    }
    fn pivot_weight(&self) -> i64 {
        self.valuation().unwrap_or(i64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn s(start: i64, cs: &[i64], trunc: i64) -> LaurentSeries {
        LaurentSeries::new(start, cs.iter().map(|&c| Scalar::int(c)).collect(), trunc)
    }

    #[test]
    fn truncation_is_pessimistic() {
        let a = s(-2, &[1, 0, 3], 10);
        let b = s(1, &[2], 5);
        let p = a.mul(&b);
        // min(-2 + 5, 1 + 10)
        assert_eq!(p.trunc(), 3);
        assert_eq!(p.coeff(-1), Scalar::int(2));
        assert_eq!(a.add(&b).trunc(), 5);
    }

    #[test]
    fn inverse_round_trip() {
        let a = s(-1, &[2, 1, 5, -3], 12);
        let one = a.mul(&a.inv().unwrap());
        assert_eq!(one.valuation(), Some(0));
        for n in 1..one.trunc() {
            assert!(one.coeff(n).is_zero());
        }
        assert_eq!(one.coeff(0), Scalar::one());
    }

    #[test]
    fn scale_arg_examples() {
        let f = s(-1, &[1, 0, 1], EXACT);
        let g = scale_arg(&f, 2);
        assert_eq!(g.coeff(-1), Scalar::frac(1, 2));
        assert_eq!(g.coeff(1), Scalar::int(2));
        assert_eq!(scale_arg(&f, 1), f);
        assert_eq!(f.dilate(&rat(1, 1)), f);
    }

    #[test]
    fn exp_of_z() {
        let e = LaurentSeries::z().truncate(6).exp().unwrap();
        assert_eq!(e.coeff(5), Scalar::frac(1, 120));
    }

    #[test]
    fn json_is_dense_to_truncation() {
        let a = s(-2, &[1, 0, 3], 3);
        let j = serde_json::to_value(&a).unwrap();
        assert_eq!(j["val"], -2);
        assert_eq!(j["trunc"], 3);
        assert_eq!(j["coeffs"].as_array().unwrap().len(), 5);
        let back: LaurentSeries = serde_json::from_value(j).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn exact_plus_exact_zero() {
        let f = LaurentSeries::new(0, vec![Scalar::one(), Scalar::int(-1)], EXACT);
        let z = LaurentSeries::zero(EXACT);
        assert_eq!(f.add(&z), f);
        assert_eq!(z.sub(&f), f.neg());
    }
}
