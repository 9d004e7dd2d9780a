//! The ring `S = K[z, 1/z, zeta]` and a bounded membership test for series.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::series::LaurentSeries;
use super::weierstrass::{embed, weierstrass_series, WeierstrassKind};
use crate::error::{Error, Result};
use crate::exact::{CurveParams, EllFn, EllFnRepr, Poly, RatFn, Scalar};
use crate::linalg::{solve, Mat};
use crate::modp::{gaussian_split_primes, mul_mod, pow_mod, solve_mod, GaussianModP, ModSolve};

/// `sum k_ij z^i zeta^j` with coefficients in `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SElement {
    terms: BTreeMap<(i64, u32), EllFn>,
    curve: Arc<CurveParams>,
    max_zeta_pow: u32,
}

impl SElement {
    pub fn new(curve: &Arc<CurveParams>, max_zeta_pow: u32) -> Self {
        SElement {
            terms: BTreeMap::new(),
            curve: curve.clone(),
            max_zeta_pow,
        }
    }

    /// Add `k z^i zeta^j` to the element.
    pub fn add_term(&mut self, i: i64, j: u32, k: EllFn) -> Result<()> {
        if j > self.max_zeta_pow {
            return Err(Error::InvalidArgument(format!(
                "zeta power {j} exceeds the declared maximum {}",
                self.max_zeta_pow
            )));
        }
        if **k.curve() != *self.curve {
            return Err(Error::CurveMismatch);
        }
        let sum = match self.terms.remove(&(i, j)) {
            Some(old) => old.try_add(&k)?,
            None => k,
        };
        if !sum.is_zero() {
            self.terms.insert((i, j), sum);
        }
        Ok(())
    }

    pub fn with_term(mut self, i: i64, j: u32, k: EllFn) -> Result<Self> {
        self.add_term(i, j, k)?;
        Ok(self)
    }

    pub fn terms(&self) -> &BTreeMap<(i64, u32), EllFn> {
        &self.terms
    }

    pub fn term(&self, i: i64, j: u32) -> Option<&EllFn> {
        self.terms.get(&(i, j))
    }

    pub fn curve(&self) -> &Arc<CurveParams> {
        &self.curve
    }

    pub fn max_zeta_pow(&self) -> u32 {
        self.max_zeta_pow
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct STermRepr {
    z: i64,
    zeta: u32,
    coeff: EllFnRepr,
}

#[derive(Serialize, Deserialize)]
struct SElementRepr {
    g2: Scalar,
    g3: Scalar,
    max_zeta_pow: u32,
    terms: Vec<STermRepr>,
}

impl Serialize for SElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SElementRepr {
            g2: self.curve.g2.clone(),
            g3: self.curve.g3.clone(),
            max_zeta_pow: self.max_zeta_pow,
            terms: self
                .terms
                .iter()
                .map(|(&(z, zeta), k)| STermRepr {
                    z,
                    zeta,
                    coeff: k.to_repr(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SElementRepr::deserialize(d)?;
        let curve = Arc::new(CurveParams::new(r.g2, r.g3).map_err(D::Error::custom)?);
        let mut out = SElement::new(&curve, r.max_zeta_pow);
        for t in r.terms {
            out.add_term(t.z, t.zeta, EllFn::from_repr(t.coeff, curve.clone()))
                .map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

/// Expansion of an element of `S`, truncated at exactly `order`.
pub fn embed_s(s: &SElement, order: i64) -> Result<LaurentSeries> {
    if s.is_zero() {
        return Ok(LaurentSeries::zero(order));
    }
    let max_j = s.terms.keys().map(|&(_, j)| j as i64).max().unwrap_or(0);
    let min_i = s.terms.keys().map(|&(i, _)| i).min().unwrap_or(0);
    let work = order + 2 * max_j + (-min_i).max(0) + 4;
    let zeta = weierstrass_series(&s.curve, WeierstrassKind::Zeta, work.max(8))?;
    let mut powers = vec![LaurentSeries::one()];
    for _ in 0..max_j {
        let next = powers.last().unwrap().mul(&zeta);
        powers.push(next);
    }
    let mut acc = LaurentSeries::zero(order);
    for (&(i, j), k) in &s.terms {
        let term = embed(k, work)?.mul(&powers[j as usize]).shift(i);
        if term.trunc() < order {
            return Err(Error::Precision(format!(
                "term z^{i} zeta^{j} reached only order {}",
                term.trunc()
            )));
        }
        acc = acc.add(&term);
    }
    Ok(acc.truncate(order))
}

/// Search space of [`s_membership`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipBounds {
    pub max_zeta_pow: u32,
    /// `z^i` with `|i| <= max_z_range`.
    pub max_z_range: u32,
    /// Coefficients in `K` with a pole of order at most this at 0.
    pub max_pole_order: u32,
}

/// Monomials `x^a y^b`, `b <= 1`, ordered by pole order at 0.
fn k_basis(curve: &Arc<CurveParams>, max_pole: u32) -> Vec<EllFn> {
    let mut out = vec![EllFn::one(curve)];
    for pole in 2..=max_pole as usize {
        let (a, b) = if pole % 2 == 0 {
            (pole / 2, 0)
        } else {
            ((pole - 3) / 2, 1)
        };
        let xa = EllFn::from_x(RatFn::poly(Poly::monomial(Scalar::one(), a)), curve);
        out.push(if b == 1 { &xa * &EllFn::y(curve) } else { xa });
    }
    out
}

/// Number of unknowns in the linear system for `bounds`.
pub fn candidate_dimension(b: &MembershipBounds) -> usize {
    b.max_pole_order.max(1) as usize
        * (2 * b.max_z_range as usize + 1)
        * (b.max_zeta_pow as usize + 1)
}

const MARGIN: i64 = 10;

/// Look for `s` in `S` within `bounds` whose expansion equals `f` to its
/// truncation. A returned element is certified by re-expansion; `None` means
/// no such element exists within the bounds.
pub fn s_membership(
    f: &LaurentSeries,
    curve: &Arc<CurveParams>,
    bounds: MembershipBounds,
) -> Result<Option<SElement>> {
    let dim = candidate_dimension(&bounds) as i64;
    let (r, jmax, pmax) = (
        bounds.max_z_range as i64,
        bounds.max_zeta_pow as i64,
        bounds.max_pole_order.max(1) as i64,
    );
    let min_val = -(pmax + r + jmax);
    let lo = f.valuation().map_or(min_val, |v| v.min(min_val));
    let trunc = if f.is_exact() {
        let last = f.terms().last().map_or(0, |(n, _)| n + 1);
        last.max(lo + dim + MARGIN)
    } else {
        f.trunc()
    };
    if trunc - lo < dim + MARGIN {
        return Err(Error::Precision(format!(
            "series known to z^{} but the bounds need {} coefficients from z^{lo}",
            trunc,
            dim + MARGIN
        )));
    }
    let f = f.truncate(trunc);
    match solve_mod_p(&f, curve, &bounds, lo, trunc) {
        ModVerdict::Inconsistent => return Ok(None),
        ModVerdict::Unique(support) => {
            // The exact solution is unique, so its support is that of the
            // modular one unless p divides a coefficient; certify either way.
            if let Some(s) = solve_exact(&f, curve, &bounds, lo, trunc, Some(&support))? {
                if embed_s(&s, trunc)? == f {
                    return Ok(Some(s));
                }
            }
        }
        ModVerdict::Unknown => {}
    }
    let Some(out) = solve_exact(&f, curve, &bounds, lo, trunc, None)? else {
        return Ok(None);
    };
    if embed_s(&out, trunc)? != f {
        return Err(Error::Precision(
            "membership witness failed re-expansion".into(),
        ));
    }
    Ok(Some(out))
}

/// Exact solve over all candidate columns, or only over `only`.
fn solve_exact(
    f: &LaurentSeries,
    curve: &Arc<CurveParams>,
    bounds: &MembershipBounds,
    lo: i64,
    trunc: i64,
    only: Option<&[usize]>,
) -> Result<Option<SElement>> {
    let (r, jmax, pmax) = (
        bounds.max_z_range as i64,
        bounds.max_zeta_pow as i64,
        bounds.max_pole_order.max(1) as i64,
    );
    let per_j = (2 * r + 1) as usize;
    let per_k = per_j * (jmax as usize + 1);
    let basis = k_basis(curve, pmax as u32);
    let wanted: Vec<usize> = match only {
        Some(cols) => cols.to_vec(),
        None => (0..per_k * basis.len()).collect(),
    };
    let work = trunc + pmax + r + 2 * jmax + 4;
    let zeta = weierstrass_series(curve, WeierstrassKind::Zeta, work)?;
    let mut zeta_pows = vec![LaurentSeries::one()];
    for _ in 0..jmax {
        let next = zeta_pows.last().unwrap().mul(&zeta);
        zeta_pows.push(next);
    }
    let mut k_series: BTreeMap<usize, LaurentSeries> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut columns = Vec::new();
    for &col in &wanted {
        let (bi, j, i) = (col / per_k, (col % per_k) / per_j, (col % per_j) as i64 - r);
        if !k_series.contains_key(&bi) {
            k_series.insert(bi, embed(&basis[bi], work)?);
        }
        let s = k_series[&bi].mul(&zeta_pows[j]).shift(i);
        if s.trunc() < trunc {
            return Err(Error::Precision(
                "basis expansion fell short of the target order".into(),
            ));
        }
        labels.push((bi, i, j as u32));
        columns.push(s);
    }
    let rows = (trunc - lo) as usize;
    let m = Mat::from_fn(rows, columns.len(), |row, col| {
        columns[col].coeff(lo + row as i64)
    });
    let rhs: Vec<Scalar> = (0..rows).map(|row| f.coeff(lo + row as i64)).collect();
    let Some(sol) = solve(&m, &rhs) else {
        return Ok(None);
    };
    let mut out = SElement::new(curve, bounds.max_zeta_pow);
    for (c, &(bi, i, j)) in sol.iter().zip(&labels) {
        if !c.is_zero() {
            out.add_term(i, j, basis[bi].scale(c))?;
        }
    }
    Ok(Some(out))
}

enum ModVerdict {
    Inconsistent,
    /// Columns carrying a nonzero coefficient in the unique modular solution.
    Unique(Vec<usize>),
    Unknown,
}

/// Series over `F_p` known on exponents `start .. start + c.len()`.
struct ModSeries {
    start: i64,
    c: Vec<u64>,
}

impl ModSeries {
    fn mul(&self, o: &ModSeries, p: u64) -> ModSeries {
        let len = self.c.len().min(o.c.len());
        let mut c = vec![0u64; len];
        for (i, a) in self.c.iter().enumerate().take(len) {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(len - i) {
                c[i + j] = (c[i + j] + mul_mod(*a, *b, p)) % p;
            }
        }
        ModSeries {
            start: self.start + o.start,
            c,
        }
    }

    fn at(&self, n: i64) -> u64 {
        assert!(
            n < self.start + self.c.len() as i64,
            "modular series too short"
        );
        if n < self.start {
            0
        } else {
            self.c[(n - self.start) as usize]
        }
    }
}

/// Run the whole linear system through `Z[i] -> F_p`. If the basis keeps full
/// column rank mod `p`, it has full rank over `Q(i)`; then an inconsistent
/// reduction proves the exact system inconsistent, and a consistent one
/// locates the support of the unique candidate.
fn solve_mod_p(
    f: &LaurentSeries,
    curve: &CurveParams,
    bounds: &MembershipBounds,
    lo: i64,
    trunc: i64,
) -> ModVerdict {
    let (r, jmax, pmax) = (
        bounds.max_z_range as i64,
        bounds.max_zeta_pow as i64,
        bounds.max_pole_order.max(1) as i64,
    );
    let len = (trunc + pmax + jmax + r + 6) as usize;
    'primes: for p in gaussian_split_primes().take(3) {
        let red = GaussianModP::new(p);
        let inv = |n: i64| pow_mod(n.rem_euclid(p as i64) as u64, p - 2, p);
        let (Some(g2), Some(g3)) = (red.scalar(&curve.g2), red.scalar(&curve.g3)) else {
            continue;
        };
        let kmax = len / 2 + 2;
        let mut ck = vec![0u64; kmax + 1];
        ck[2] = mul_mod(g2, inv(20), p);
        ck[3] = mul_mod(g3, inv(28), p);
        for k in 4..=kmax {
            let s = (2..=k - 2).fold(0, |acc, i| (acc + mul_mod(ck[i], ck[k - i], p)) % p);
            ck[k] = mul_mod(mul_mod(s, 3, p), inv(((2 * k + 1) * (k - 3)) as i64), p);
        }
        // wp from z^-2, wp' from z^-3, zeta from z^-1; each with `len` known coefficients
        let mut wp = vec![0u64; len + 1];
        let mut zeta = vec![0u64; len];
        wp[0] = 1;
        zeta[0] = 1;
        for (k, c) in ck.iter().enumerate().skip(2) {
            let e = 2 * k;
            if e <= len {
                wp[e] = *c;
            }
            if e < len {
                zeta[e] = (p - mul_mod(*c, inv(e as i64 - 1), p)) % p;
            }
        }
        let wpp: Vec<u64> = wp
            .iter()
            .enumerate()
            .map(|(i, c)| mul_mod(*c, (i as i64 - 2).rem_euclid(p as i64) as u64, p))
            .collect();
        let wp = ModSeries {
            start: -2,
            c: wp[..len].to_vec(),
        };
        let wpp = ModSeries {
            start: -3,
            c: wpp[..len].to_vec(),
        };
        let zeta = ModSeries { start: -1, c: zeta };

        let one = ModSeries {
            start: 0,
            c: {
                let mut v = vec![0; len];
                v[0] = 1;
                v
            },
        };
        let mut zeta_pows = vec![one];
        for _ in 0..jmax {
            let next = zeta_pows.last().unwrap().mul(&zeta, p);
            zeta_pows.push(next);
        }
        let mut wp_pows = vec![ModSeries {
            start: 0,
            c: zeta_pows[0].c.clone(),
        }];
        let mut columns = Vec::new();
        for pole in std::iter::once(0).chain(2..=pmax) {
            let (a, b) = if pole % 2 == 0 {
                (pole / 2, 0)
            } else {
                ((pole - 3) / 2, 1)
            };
            while wp_pows.len() <= a as usize {
                let next = wp_pows.last().unwrap().mul(&wp, p);
                wp_pows.push(next);
            }
            let k = if b == 1 {
                wp_pows[a as usize].mul(&wpp, p)
            } else {
                ModSeries {
                    start: wp_pows[a as usize].start,
                    c: wp_pows[a as usize].c.clone(),
                }
            };
            for zp in &zeta_pows {
                let kz = k.mul(zp, p);
                for i in -r..=r {
                    columns.push(ModSeries {
                        start: kz.start + i,
                        c: kz.c.clone(),
                    });
                }
            }
        }
        let mut aug = Vec::new();
        for n in lo..trunc {
            let Some(rhs) = red.scalar(&f.coeff(n)) else {
                continue 'primes;
            };
            let mut row: Vec<u64> = columns.iter().map(|c| c.at(n)).collect();
            row.push(rhs);
            aug.push(row);
        }
        match solve_mod(aug, columns.len(), p) {
            ModSolve::Inconsistent => return ModVerdict::Inconsistent,
            ModSolve::Unique(x) => {
                return ModVerdict::Unique(
                    x.iter()
                        .enumerate()
                        .filter(|(_, v)| **v != 0)
                        .map(|(i, _)| i)
                        .collect(),
                )
            }
            ModSolve::Deficient => {}
        }
    }
    ModVerdict::Unknown
}
