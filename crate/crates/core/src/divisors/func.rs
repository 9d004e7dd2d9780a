use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::{power_exponent, PointC, ScaleLattice, WeightedSum};
use crate::exact::scalar::{format_rational, parse_rational};
use crate::exact::{rat_int, Rational};
use crate::{Error, Result};

fn collect(entries: impl IntoIterator<Item = (PointC, Rational)>) -> BTreeMap<PointC, Rational> {
    let mut out: BTreeMap<PointC, Rational> = BTreeMap::new();
    for (p, v) in entries {
        *out.entry(p).or_insert_with(Rational::zero) += v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// A finitely supported function ℂ → ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiscFn {
    support: BTreeMap<PointC, Rational>,
}

impl DiscFn {
    /// Duplicate points are summed; zero values dropped.
    pub fn new(entries: impl IntoIterator<Item = (PointC, Rational)>) -> Self {
        DiscFn {
            support: collect(entries),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn support(&self) -> &BTreeMap<PointC, Rational> {
        &self.support
    }

    pub fn value(&self, z: &PointC) -> Rational {
        self.support.get(z).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &DiscFn) -> DiscFn {
        DiscFn::new(
            self.support
                .iter()
                .chain(&other.support)
                .map(|(p, v)| (p.clone(), v.clone())),
        )
    }

    pub fn neg(&self) -> DiscFn {
        DiscFn::new(self.support.iter().map(|(p, v)| (p.clone(), -v)))
    }

    pub fn sub(&self, other: &DiscFn) -> DiscFn {
        self.add(&other.neg())
    }
}

/// A Λ-periodic discretely supported function, presented by one
/// representative per class modulo the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicFn {
    lattice: ScaleLattice,
    reps: BTreeMap<PointC, Rational>,
}

impl PeriodicFn {
    /// Representatives are reduced mod the lattice; values of equivalent
    /// points are summed.
    pub fn new(
        lattice: ScaleLattice,
        entries: impl IntoIterator<Item = (PointC, Rational)>,
    ) -> Self {
        let reps = collect(entries.into_iter().map(|(p, v)| (lattice.reduce(&p), v)));
        PeriodicFn { lattice, reps }
    }

    pub fn zero(lattice: ScaleLattice) -> Self {
        PeriodicFn {
            lattice,
            reps: BTreeMap::new(),
        }
    }

    pub fn lattice(&self) -> &ScaleLattice {
        &self.lattice
    }

    pub fn reps(&self) -> &BTreeMap<PointC, Rational> {
        &self.reps
    }

    pub fn is_zero(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn is_gen_free(&self) -> bool {
        self.reps.keys().all(PointC::is_torsion)
    }

    pub fn value(&self, z: &PointC) -> Rational {
        self.reps
            .get(&self.lattice.reduce(z))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Value on the lattice class of 0.
    pub fn value_at_origin(&self) -> Rational {
        self.value(&PointC::origin())
    }

    /// The same function presented on the sublattice `k·r·Λ₀`, `k` a positive integer.
    pub fn refine(&self, k: u64) -> Result<PeriodicFn> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "refinement factor must be positive".into(),
            ));
        }
        let lattice = self.lattice.scaled(&rat_int(k as i64))?;
        let r = self.lattice.r();
        let mut entries = Vec::with_capacity(self.reps.len() * (k * k) as usize);
        for (p, val) in &self.reps {
            for a in 0..k {
                for b in 0..k {
                    let q = p.translate(&(r * rat_int(a as i64)), &(r * rat_int(b as i64)));
                    entries.push((q, val.clone()));
                }
            }
        }
        Ok(PeriodicFn::new(lattice, entries))
    }

    /// Present on the common lattice `r' = k·r` (k must be an integer).
    pub fn on_lattice(&self, target: &ScaleLattice) -> Result<PeriodicFn> {
        let k = target.r() / self.lattice.r();
        if !k.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "lattice {} is not a sublattice multiple of {}",
                target.r(),
                self.lattice.r()
            )));
        }
        let k = u64::try_from(k.to_integer())
            .map_err(|_| Error::InvalidArgument("refinement factor too large".into()))?;
        self.refine(k)
    }

    /// The same function on a coarser lattice `target ⊇ self.lattice`, if it
    /// is periodic for it.
    pub fn coarsen(&self, target: &ScaleLattice) -> Option<PeriodicFn> {
        let k = self.lattice.r() / target.r();
        if !k.is_integer() {
            return None;
        }
        let k = u64::try_from(k.to_integer()).ok()?;
        let mut reps = BTreeMap::new();
        for (p, v) in &self.reps {
            match reps.insert(target.reduce(p), v.clone()) {
                Some(old) if old != *v => return None,
                _ => {}
            }
        }
        let out = PeriodicFn {
            lattice: target.clone(),
            reps,
        };
        (out.refine(k).ok()? == *self).then_some(out)
    }

    pub fn add(&self, other: &PeriodicFn) -> Result<PeriodicFn> {
        let l = self.lattice.common(&other.lattice);
        let (a, b) = (self.on_lattice(&l)?, other.on_lattice(&l)?);
        Ok(PeriodicFn::new(l, a.reps.into_iter().chain(b.reps)))
    }

    pub fn neg(&self) -> PeriodicFn {
        PeriodicFn {
            lattice: self.lattice.clone(),
            reps: self.reps.iter().map(|(p, v)| (p.clone(), -v)).collect(),
        }
    }

    pub fn sub(&self, other: &PeriodicFn) -> Result<PeriodicFn> {
        self.add(&other.neg())
    }

    /// Multiply every value by `c`.
    pub fn scale_values(&self, c: &Rational) -> PeriodicFn {
        PeriodicFn::new(
            self.lattice.clone(),
            self.reps.iter().map(|(p, v)| (p.clone(), v * c)),
        )
    }

    /// `z ↦ f(z/k)`, periodic for `k·r·Λ₀`.
    pub fn dilate(&self, k: u64) -> Result<PeriodicFn> {
        let kr = rat_int(k as i64);
        let lattice = self.lattice.scaled(&kr)?;
        Ok(PeriodicFn::new(
            lattice,
            self.reps.iter().map(|(p, v)| (p.scale(&kr), v.clone())),
        ))
    }

    /// Forget periodicity on the given finite point set.
    pub fn restrict(&self, points: impl IntoIterator<Item = PointC>) -> DiscFn {
        DiscFn::new(points.into_iter().map(|p| {
            let v = self.value(&p);
            (p, v)
        }))
    }

    /// Lcm of the denominators of the gen-free representatives, in units of `r`.
    pub(crate) fn torsion_denominator(&self) -> BigInt {
        let mut d = BigInt::one();
        for p in self.reps.keys().filter(|p| p.is_torsion()) {
            for x in self.lattice.units(p) {
                d = d.lcm(x.denom());
            }
        }
        d
    }

    /// Values agree everywhere except possibly on the lattice class of 0
    /// (of the coarser of the two lattices).
    pub fn agrees_off_origin(&self, other: &PeriodicFn) -> Result<bool> {
        let l = self.lattice.common(&other.lattice);
        let (a, b) = (self.on_lattice(&l)?, other.on_lattice(&l)?);
        let zero = PointC::origin();
        Ok(a.reps
            .keys()
            .chain(b.reps.keys())
            .all(|p| *p == zero || a.value(p) == b.value(p)))
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    point: PointC,
    val: String,
}

fn entries_out(m: &BTreeMap<PointC, Rational>) -> Vec<Entry> {
    m.iter()
        .map(|(p, v)| Entry {
            point: p.clone(),
            val: format_rational(v),
        })
        .collect()
}

fn entries_in<E: serde::de::Error>(
    es: Vec<Entry>,
) -> std::result::Result<Vec<(PointC, Rational)>, E> {
    es.into_iter()
        .map(|e| Ok((e.point, parse_rational(&e.val).map_err(E::custom)?)))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct PeriodicRepr {
    r: ScaleLattice,
    reps: Vec<Entry>,
}

impl Serialize for PeriodicFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PeriodicRepr {
            r: self.lattice.clone(),
            reps: entries_out(&self.reps),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodicFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PeriodicRepr::deserialize(d)?;
        Ok(PeriodicFn::new(r.r, entries_in::<D::Error>(r.reps)?))
    }
}

#[derive(Serialize, Deserialize)]
struct DiscRepr {
    support: Vec<Entry>,
}

impl Serialize for DiscFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiscRepr {
            support: entries_out(&self.support),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DiscRepr::deserialize(d)?;
        Ok(DiscFn::new(entries_in::<D::Error>(r.support)?))
    }
}

/// `z ↦ f(s·z)`: the support moves to `P/s`.
pub fn scale_disc(f: &DiscFn, s: &Rational) -> Result<DiscFn> {
    if s.is_zero() || s < &Rational::zero() {
        return Err(Error::InvalidArgument(format!(
            "scale {s} must be positive"
        )));
    }
    let inv = s.recip();
    Ok(DiscFn::new(
        f.support.iter().map(|(p, v)| (p.scale(&inv), v.clone())),
    ))
}

/// `[z] ↦ f([m·z])` on the same lattice: each representative is replaced by
/// its m² preimages under multiplication by m.
pub fn scale_periodic(f: &PeriodicFn, m: u64) -> Result<PeriodicFn> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "scale must be a positive integer".into(),
        ));
    }
    let r = f.lattice.r();
    let inv = Rational::new(BigInt::one(), BigInt::from(m));
    let mut entries = Vec::new();
    for (p, val) in &f.reps {
        for a in 0..m {
            for b in 0..m {
                let q = p.translate(&(r * rat_int(a as i64)), &(r * rat_int(b as i64)));
                entries.push((q.scale(&inv), val.clone()));
            }
        }
    }
    Ok(PeriodicFn::new(f.lattice.clone(), entries))
}

/// Sum of values over a fundamental domain and the Abel–Jacobi sum
/// `Σ value·rep` over reduced representatives.
pub fn fundamental_sums(f: &PeriodicFn) -> (Rational, WeightedSum) {
    let mut total = Rational::zero();
    let mut w = WeightedSum::default();
    for (p, v) in &f.reps {
        total += v;
        w.accumulate(v, p);
    }
    (total, w)
}

/// Outcome of [`is_periodic`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityCheck {
    pub ok: bool,
    pub witness: Option<PointC>,
}

/// Check `f(z + λ) = f(z)` for the lattice generators λ and every `z` in
/// the support of `f` or the probe list.
pub fn is_periodic(f: &DiscFn, lattice: &ScaleLattice, probe: &[PointC]) -> PeriodicityCheck {
    let r = lattice.r();
    let zero = Rational::zero();
    let steps = [(r.clone(), zero.clone()), (zero.clone(), r.clone())];
    let points: BTreeSet<&PointC> = f.support.keys().chain(probe).collect();
    for z in points {
        for (a, b) in &steps {
            for sign in [1i64, -1] {
                let s = rat_int(sign);
                let w = z.translate(&(a * &s), &(b * &s));
                if f.value(&w) != f.value(z) {
                    return PeriodicityCheck {
                        ok: false,
                        witness: Some(w),
                    };
                }
            }
        }
    }
    PeriodicityCheck {
        ok: true,
        witness: None,
    }
}

/// Evaluator for `Σ_{ν≥1} w_ν · f(z/m^ν)`, a finite sum for `z ≠ 0`:
/// gen-free `z/m^ν` leave the denominators of the support after finitely
/// many steps, and a gen-carrying `z` meets each generator multiplier at
/// most once.
pub(crate) struct OrbitEval<'a> {
    f: &'a PeriodicFn,
    m: u64,
    d: BigInt,
    minv: Rational,
}

impl<'a> OrbitEval<'a> {
    pub fn new(f: &'a PeriodicFn, m: u64) -> Self {
        OrbitEval {
            f,
            m,
            d: f.torsion_denominator(),
            minv: Rational::new(BigInt::one(), BigInt::from(m)),
        }
    }

    pub fn sum(&self, z: &PointC, mut weight: impl FnMut(u32) -> Rational) -> Rational {
        let f = self.f;
        let mut acc = Rational::zero();
        if z.is_origin() {
            return acc;
        }
        if z.is_torsion() {
            let mut w = z.clone();
            let mut nu = 0u32;
            loop {
                nu += 1;
                w = w.scale(&self.minv);
                let fits = f
                    .lattice
                    .units(&w)
                    .iter()
                    .all(|x| self.d.is_multiple_of(x.denom()));
                if !fits {
                    return acc;
                }
                let val = f.value(&w);
                if !val.is_zero() {
                    acc += weight(nu) * val;
                }
            }
        }
        let nus: BTreeSet<u32> = f
            .reps
            .keys()
            .filter(|p| p.gen() == z.gen())
            .filter_map(|p| power_exponent(&(z.c() / p.c()), self.m))
            .filter(|&nu| nu >= 1)
            .collect();
        for nu in nus {
            let w = z.scale(&Rational::new(BigInt::one(), BigInt::from(self.m).pow(nu)));
            let val = f.value(&w);
            if !val.is_zero() {
                acc += weight(nu) * val;
            }
        }
        acc
    }
}

/// The canonical solution `δ(z) = Σ_{ν≥1} α(z/q^ν)` of `δ(qz) − δ(z) = α(z)`
/// at a single point, with `δ(0) = 0`.
pub fn delta_value(alpha: &PeriodicFn, q: u64, z: &PointC) -> Rational {
    OrbitEval::new(alpha, q).sum(z, |_| Rational::one())
}

/// [`delta_value`] evaluated on `q^ν·P` for representatives `P` of α and
/// `1 ≤ ν ≤ depth`.
pub fn delta_from_alpha(alpha: &PeriodicFn, q: u64, depth: u32) -> Result<DiscFn> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "q = {q} must be at least 2"
        )));
    }
    if !alpha.is_gen_free() {
        return Err(Error::UnsupportedPoint(
            "non-torsion support: use periodicity_solve for generator points".into(),
        ));
    }
    let qr = rat_int(q as i64);
    let mut pts = BTreeSet::new();
    for p in alpha.reps.keys() {
        let mut w = p.clone();
        for _ in 0..depth {
            w = w.scale(&qr);
            pts.insert(w.clone());
        }
    }
    let ev = OrbitEval::new(alpha, q);
    Ok(DiscFn::new(pts.into_iter().map(|p| {
        let v = ev.sum(&p, |_| Rational::one());
        (p, v)
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn pt(a: i64, b: i64, c: i64, d: i64) -> PointC {
        PointC::torsion(rat(a, b), rat(c, d))
    }

    fn delta0() -> PeriodicFn {
        PeriodicFn::new(
            ScaleLattice::base(),
            [
                (pt(1, 3, 0, 1), rat_int(1)),
                (pt(2, 3, 0, 1), rat_int(1)),
                (pt(0, 1, 0, 1), rat_int(-2)),
            ],
        )
    }

    #[test]
    fn scale_disc_moves_support() {
        let f = DiscFn::new([(pt(1, 2, 0, 1), rat_int(2))]);
        let g = scale_disc(&f, &rat_int(2)).unwrap();
        assert_eq!(g, DiscFn::new([(pt(1, 4, 0, 1), rat_int(2))]));
        assert_eq!(scale_disc(&f, &rat_int(1)).unwrap(), f);
    }

    #[test]
    fn scale_periodic_preimages() {
        let f = PeriodicFn::new(ScaleLattice::base(), [(pt(1, 2, 0, 1), rat_int(2))]);
        let g = scale_periodic(&f, 2).unwrap();
        let expect = [
            pt(1, 4, 0, 1),
            pt(3, 4, 0, 1),
            pt(1, 4, 1, 2),
            pt(3, 4, 1, 2),
        ];
        assert_eq!(g.reps().len(), 4);
        for p in expect {
            assert_eq!(g.value(&p), rat_int(2));
        }
        assert_eq!(scale_periodic(&f, 1).unwrap(), f);
    }

    #[test]
    fn sums() {
        let f = PeriodicFn::new(
            ScaleLattice::base(),
            [(pt(1, 3, 0, 1), rat_int(3)), (pt(0, 1, 0, 1), rat_int(-3))],
        );
        let (t, w) = fundamental_sums(&f);
        assert!(t.is_zero());
        assert_eq!(w.v, [rat_int(1), rat_int(0)]);
        assert!(w.in_lattice(f.lattice()));
        let g = PeriodicFn::new(
            ScaleLattice::base(),
            [(pt(1, 3, 0, 1), rat_int(1)), (pt(0, 1, 0, 1), rat_int(-1))],
        );
        assert!(!fundamental_sums(&g).1.in_lattice(g.lattice()));
    }

    #[test]
    fn delta_hand_values() {
        let alpha = delta0();
        let d = delta_from_alpha(&alpha, 2, 3).unwrap();
        assert_eq!(d.value(&pt(2, 3, 0, 1)), rat_int(1));
        assert_eq!(d.value(&pt(1, 3, 0, 1)), rat_int(0));
        assert_eq!(d.value(&pt(4, 3, 0, 1)), rat_int(2));
        assert_eq!(delta_value(&alpha, 2, &PointC::origin()), rat_int(0));
        assert!(
            delta_from_alpha(&PeriodicFn::zero(ScaleLattice::base()), 2, 4)
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn periodic_check() {
        let f = DiscFn::new([(pt(1, 5, 0, 1), rat_int(1))]);
        let c = is_periodic(&f, &ScaleLattice::base(), &[]);
        assert!(!c.ok);
        assert_eq!(c.witness, Some(pt(6, 5, 0, 1)));
        assert!(is_periodic(&DiscFn::zero(), &ScaleLattice::base(), &[pt(1, 2, 0, 1)]).ok);
    }
}
