use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::scalar::{format_rational, parse_rational};
use crate::exact::Rational;
use crate::{Error, Result};

/// A point `c·g + v₁ω₁ + v₂ω₂` of ℂ, where `g` is a formal generator that is
/// ℚ-independent of the periods. Gen-free points are the torsion points ℚΛ₀.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointC {
    c: Rational,
    gen: Option<String>,
    v: [Rational; 2],
}

impl PointC {
    /// Normalizing constructor: a zero multiplier drops the generator.
    pub fn new(c: Rational, gen: Option<String>, v: [Rational; 2]) -> Result<Self> {
        match gen {
            None if !c.is_zero() => Err(Error::InvalidArgument(
                "point without generator must have c = 0".into(),
            )),
            Some(_) if c.is_zero() => Ok(PointC { c, gen: None, v }),
            gen => Ok(PointC { c, gen, v }),
        }
    }

    pub fn torsion(v1: Rational, v2: Rational) -> Self {
        PointC {
            c: Rational::zero(),
            gen: None,
            v: [v1, v2],
        }
    }

    pub fn generic(c: Rational, gen: &str, v1: Rational, v2: Rational) -> Self {
        Self::new(c, Some(gen.to_string()), [v1, v2]).expect("generator given")
    }

    pub fn origin() -> Self {
        Self::torsion(Rational::zero(), Rational::zero())
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn gen(&self) -> Option<&str> {
        self.gen.as_deref()
    }

    pub fn v(&self) -> &[Rational; 2] {
        &self.v
    }

    pub fn is_torsion(&self) -> bool {
        self.gen.is_none()
    }

    pub fn is_origin(&self) -> bool {
        self.is_torsion() && self.v[0].is_zero() && self.v[1].is_zero()
    }

    pub fn neg(&self) -> Self {
        PointC {
            c: -&self.c,
            gen: self.gen.clone(),
            v: [-&self.v[0], -&self.v[1]],
        }
    }

    /// Sum; fails when both summands carry different generators.
    pub fn add(&self, other: &PointC) -> Result<PointC> {
        let gen = match (&self.gen, &other.gen) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::UnsupportedPoint(format!(
                    "sum mixes generators {a} and {b}"
                )))
            }
            (Some(a), _) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        PointC::new(
            &self.c + &other.c,
            gen,
            [&self.v[0] + &other.v[0], &self.v[1] + &other.v[1]],
        )
    }

    pub fn sub(&self, other: &PointC) -> Result<PointC> {
        self.add(&other.neg())
    }

    /// Rational multiple `s·P`.
    pub fn scale(&self, s: &Rational) -> PointC {
        PointC::new(
            &self.c * s,
            self.gen.clone(),
            [&self.v[0] * s, &self.v[1] * s],
        )
        .expect("scaling keeps the normal form")
    }

    /// Translate by a period combination `a·ω₁ + b·ω₂`.
    pub fn translate(&self, a: &Rational, b: &Rational) -> PointC {
        PointC {
            c: self.c.clone(),
            gen: self.gen.clone(),
            v: [&self.v[0] + a, &self.v[1] + b],
        }
    }
}

impl fmt::Display for PointC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = &self.gen {
            write!(f, "{}·{} + ", self.c, g)?;
        }
        write!(f, "({}, {})", self.v[0], self.v[1])
    }
}

impl fmt::Debug for PointC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    c: String,
    gen: Option<String>,
    v: [String; 2],
}

impl Serialize for PointC {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr {
            c: format_rational(&self.c),
            gen: self.gen.clone(),
            v: [format_rational(&self.v[0]), format_rational(&self.v[1])],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointC {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PointRepr::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(D::Error::custom);
        PointC::new(p(&r.c)?, r.gen, [p(&r.v[0])?, p(&r.v[1])?]).map_err(D::Error::custom)
    }
}

/// The scalar sublattice `r·Λ₀`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaleLattice {
    r: Rational,
}

impl ScaleLattice {
    pub fn new(r: Rational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "lattice scale {r} must be positive"
            )));
        }
        Ok(ScaleLattice { r })
    }

    pub fn base() -> Self {
        ScaleLattice { r: Rational::one() }
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    /// `k·r·Λ₀` for a positive rational `k`.
    pub fn scaled(&self, k: &Rational) -> Result<Self> {
        Self::new(&self.r * k)
    }

    /// Smallest common sublattice: `lcm(r₁, r₂)·Λ₀`.
    pub fn common(&self, other: &ScaleLattice) -> ScaleLattice {
        let (a, b) = (&self.r, &other.r);
        let n = a.numer().lcm(b.numer());
        let d = a.denom().gcd(b.denom());
        ScaleLattice {
            r: Rational::new(n, d),
        }
    }

    /// Canonical representative: period part reduced into `[0, r)²`.
    pub fn reduce(&self, p: &PointC) -> PointC {
        let red = |x: &Rational| x - &self.r * (x / &self.r).floor();
        PointC {
            c: p.c.clone(),
            gen: p.gen.clone(),
            v: [red(&p.v[0]), red(&p.v[1])],
        }
    }

    pub fn contains(&self, p: &PointC) -> bool {
        p.is_torsion() && p.v.iter().all(|x| (x / &self.r).is_integer())
    }

    pub fn equivalent(&self, a: &PointC, b: &PointC) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    /// Period coordinates of `p` in units of `r`.
    pub(crate) fn units(&self, p: &PointC) -> [Rational; 2] {
        [&p.v[0] / &self.r, &p.v[1] / &self.r]
    }
}

impl Serialize for ScaleLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.r))
    }
}

impl<'de> Deserialize<'de> for ScaleLattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        let r = parse_rational(&s).map_err(D::Error::custom)?;
        ScaleLattice::new(r).map_err(D::Error::custom)
    }
}

/// `Σ value·point` kept as rational-linear data; unlike [`PointC`] it may
/// involve several generators at once.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightedSum {
    pub gens: std::collections::BTreeMap<String, Rational>,
    pub v: [Rational; 2],
}

impl WeightedSum {
    pub fn accumulate(&mut self, w: &Rational, p: &PointC) {
        if let Some(g) = &p.gen {
            let e = self.gens.entry(g.clone()).or_insert_with(Rational::zero);
            *e += w * &p.c;
            if e.is_zero() {
                self.gens.remove(g);
            }
        }
        self.v[0] += w * &p.v[0];
        self.v[1] += w * &p.v[1];
    }

    /// Membership in `r·Λ₀`: no generator part and integral period coordinates.
    pub fn in_lattice(&self, lattice: &ScaleLattice) -> bool {
        self.gens.is_empty() && self.v.iter().all(|x| (x / lattice.r()).is_integer())
    }

    /// The sum as a single point when at most one generator occurs.
    pub fn to_point(&self) -> Option<PointC> {
        match self.gens.len() {
            0 => Some(PointC::torsion(self.v[0].clone(), self.v[1].clone())),
            1 => {
                let (g, c) = self.gens.iter().next().unwrap();
                Some(PointC::generic(
                    c.clone(),
                    g,
                    self.v[0].clone(),
                    self.v[1].clone(),
                ))
            }
            _ => None,
        }
    }
}

impl Serialize for WeightedSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gens: std::collections::BTreeMap<&str, String> = self
            .gens
            .iter()
            .map(|(g, c)| (g.as_str(), format_rational(c)))
            .collect();
        serde_json::json!({
            "gens": gens,
            "v": [format_rational(&self.v[0]), format_rational(&self.v[1])],
        })
        .serialize(s)
    }
}

/// `Some(ν)` when `x = m^ν` for an integer `ν ≥ 0`.
pub(crate) fn power_exponent(x: &Rational, m: u64) -> Option<u32> {
    if !x.is_integer() || !x.is_positive() {
        return None;
    }
    let m = BigInt::from(m);
    let mut n = x.to_integer();
    let mut k = 0;
    while !n.is_one() {
        let (q, rem) = n.div_rem(&m);
        if !rem.is_zero() {
            return None;
        }
        n = q;
        k += 1;
    }
    Some(k)
}
