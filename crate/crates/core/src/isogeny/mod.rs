//! Multiplication-by-m on the function field, division polynomials and the
//! elements `g_m = zeta(mz) - m zeta(z)`.

mod points;

pub use points::{ec_add, ec_mul, ec_neg, function_from_divisor, ord_at, verify_divisor, PointXY};

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{CurveParams, EllFn, Poly, RatFn, Scalar};

/// Short Weierstrass form `Y^2 = X^3 + A X + B`, reached by `X = x`, `Y = y/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShortCurve {
    pub a: Scalar,
    pub b: Scalar,
}

impl ShortCurve {
    pub fn from_curve(c: &CurveParams) -> Self {
        let q = Scalar::frac(-1, 4);
        ShortCurve {
            a: &c.g2 * &q,
            b: &c.g3 * &q,
        }
    }

    pub fn to_curve(&self) -> Result<CurveParams> {
        let m4 = Scalar::int(-4);
        CurveParams::new(&self.a * &m4, &self.b * &m4)
    }

    /// `X^3 + A X + B`.
    pub fn cubic(&self) -> Poly {
        Poly::new(vec![
            self.b.clone(),
            self.a.clone(),
            Scalar::zero(),
            Scalar::one(),
        ])
    }
}

/// `poly(X) * Y^y_pow` on the short curve, with `y_pow` in `{0, 1}` once reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiEntry {
    pub poly: Poly,
    pub y_pow: u32,
}

impl PsiEntry {
    fn new(poly: Poly, y_pow: u32) -> Self {
        PsiEntry { poly, y_pow }
    }

    fn mul(&self, o: &PsiEntry, f: &Poly) -> PsiEntry {
        let mut poly = &self.poly * &o.poly;
        let mut e = self.y_pow + o.y_pow;
        while e >= 2 {
            poly = &poly * f;
            e -= 2;
        }
        PsiEntry::new(poly, e)
    }

    fn sub(&self, o: &PsiEntry) -> PsiEntry {
        debug_assert!(self.y_pow == o.y_pow || self.poly.is_zero() || o.poly.is_zero());
        let e = if self.poly.is_zero() {
            o.y_pow
        } else {
            self.y_pow
        };
        PsiEntry::new(&self.poly - &o.poly, e)
    }

    /// Divide by `2Y`.
    fn div_2y(&self, f: &Poly) -> Result<PsiEntry> {
        let half = Scalar::frac(1, 2);
        if self.y_pow >= 1 {
            return Ok(PsiEntry::new(self.poly.scale(&half), self.y_pow - 1));
        }
        Ok(PsiEntry::new(self.poly.div_exact(f)?.scale(&half), 1))
    }

    /// The entry as an element of `K`, using `Y = y/2`.
    pub fn to_ellfn(&self, curve: &Arc<CurveParams>) -> EllFn {
        let p = EllFn::from_x(RatFn::poly(self.poly.clone()), curve);
        if self.y_pow == 0 {
            p
        } else {
            &p * &EllFn::y(curve).scale(&Scalar::frac(1, 2))
        }
    }
}

/// Division polynomials `psi_0 .. psi_m` of the short model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivPolySeq {
    pub short: ShortCurve,
    pub psi: Vec<PsiEntry>,
}

impl DivPolySeq {
    pub fn get(&self, n: usize) -> &PsiEntry {
        &self.psi[n]
    }
}

/// The standard division-polynomial recurrence up to index `m`.
pub fn division_polys(curve: &CurveParams, m: usize) -> Result<DivPolySeq> {
    if m < 1 {
        return Err(Error::InvalidArgument(
            "division polynomials start at index 1".into(),
        ));
    }
    let s = ShortCurve::from_curve(curve);
    let (a, b) = (&s.a, &s.b);
    let f = s.cubic();
    let c = |n: i64| Scalar::int(n);
    let a2 = a * a;
    let mut psi = vec![
        PsiEntry::new(Poly::zero(), 0),
        PsiEntry::new(Poly::one(), 0),
        PsiEntry::new(Poly::constant(c(2)), 1),
        // 3X^4 + 6AX^2 + 12BX - A^2
        PsiEntry::new(
            Poly::new(vec![-&a2, b * &c(12), a * &c(6), Scalar::zero(), c(3)]),
            0,
        ),
        // 4Y(X^6 + 5AX^4 + 20BX^3 - 5A^2X^2 - 4ABX - 8B^2 - A^3)
        PsiEntry::new(
            Poly::new(vec![
                &(&(b * b) * &c(-8)) - &(&a2 * a),
                &(a * b) * &c(-4),
                &a2 * &c(-5),
                b * &c(20),
                a * &c(5),
                Scalar::zero(),
                Scalar::one(),
            ])
            .scale(&c(4)),
            1,
        ),
    ];
    for n in 5..=m {
        let k = n / 2;
        let next = if n % 2 == 1 {
            // psi_{2k+1} = psi_{k+2} psi_k^3 - psi_{k-1} psi_{k+1}^3
            let t1 = psi[k + 2]
                .mul(&psi[k], &f)
                .mul(&psi[k], &f)
                .mul(&psi[k], &f);
            let t2 = psi[k - 1]
                .mul(&psi[k + 1], &f)
                .mul(&psi[k + 1], &f)
                .mul(&psi[k + 1], &f);
            t1.sub(&t2)
        } else {
            // psi_{2k} = psi_k (psi_{k+2} psi_{k-1}^2 - psi_{k-2} psi_{k+1}^2) / (2Y)
            let t1 = psi[k + 2].mul(&psi[k - 1], &f).mul(&psi[k - 1], &f);
            let t2 = psi[k - 2].mul(&psi[k + 1], &f).mul(&psi[k + 1], &f);
            let inner = t1.sub(&t2).div_2y(&f)?;
            psi[k].mul(&inner, &f)
        };
        psi.push(next);
    }
    psi.truncate(m + 1);
    Ok(DivPolySeq { short: s, psi })
}

/// `x o [m] = R(x)` and `y o [m] = W(x) y`.
#[derive(Clone, Debug)]
struct MultiplicationMap {
    r: RatFn,
    w: RatFn,
}

type MapCache = RwLock<HashMap<(CurveParams, u64), MultiplicationMap>>;

fn map_cache() -> &'static MapCache {
    static CACHE: OnceLock<MapCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn multiplication_map(curve: &CurveParams, m: u64) -> Result<MultiplicationMap> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "multiplication by 0 has no pullback".into(),
        ));
    }
    let key = (curve.clone(), m);
    if let Some(r) = map_cache().read().expect("cache poisoned").get(&key) {
        return Ok(r.clone());
    }
    let map = if m == 1 {
        MultiplicationMap {
            r: RatFn::x(),
            w: RatFn::one(),
        }
    } else {
        let mu = m as usize;
        let seq = division_polys(curve, 2 * mu)?;
        let f = seq.short.cubic();
        // x o [m] = (x psi_m^2 - psi_{m-1} psi_{m+1}) / psi_m^2, coprime
        let num = seq.psi[mu - 1].mul(&seq.psi[mu + 1], &f);
        let den = seq.psi[mu].mul(&seq.psi[mu], &f);
        debug_assert!(num.y_pow == 0 && den.y_pow == 0);
        let r = RatFn::from_coprime(&(&Poly::x() * &den.poly) - &num.poly, den.poly);
        // Y o [m] = psi_2m / (2 psi_m^4) and y = 2Y. Writing psi_n = P_n Y^e_n,
        // W = (P_2m / P_m) / (2 P_m^3 F^(2 e_m)), in lowest terms.
        let pm = &seq.psi[mu];
        let inner = seq.psi[2 * mu].poly.div_exact(&pm.poly)?;
        let mut wden = pm.poly.pow(3).scale(&Scalar::int(2));
        if pm.y_pow == 1 {
            wden = &wden * &f.pow(2);
        }
        MultiplicationMap {
            r,
            w: RatFn::from_coprime(inner, wden),
        }
    };
    map_cache()
        .write()
        .expect("cache poisoned")
        .insert(key, map.clone());
    Ok(map)
}

/// `x o [m]`, a rational function of `x` (cached per curve and `m`).
pub fn x_multiplication_map(curve: &CurveParams, m: u64) -> Result<RatFn> {
    Ok(multiplication_map(curve, m)?.r)
}

/// `f(z) -> f(mz)` on `K`.
pub fn pullback(f: &EllFn, m: u64) -> Result<EllFn> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    if m == 1 || f.as_constant().is_some() {
        return Ok(f.clone());
    }
    let map = multiplication_map(f.curve(), m)?;
    let a = f.a().compose(&map.r);
    let b = if f.b().is_zero() {
        RatFn::zero()
    } else {
        &f.b().compose(&map.r) * &map.w
    };
    Ok(EllFn::new(a, b, f.curve().clone()))
}

/// `Psi_m = sigma(mz) / sigma(z)^(m^2)` as an element of `K`; equals `(-1)^(m+1) psi_m`.
pub fn division_function(curve: &Arc<CurveParams>, m: u64) -> Result<EllFn> {
    let seq = division_polys(curve, m as usize)?;
    let psi = seq.psi[m as usize].to_ellfn(curve);
    Ok(if m % 2 == 0 { -&psi } else { psi })
}

/// `g_m = zeta(mz) - m zeta(z) = (1/m) Psi_m' / Psi_m`.
pub fn g_element(curve: &Arc<CurveParams>, m: u64) -> Result<EllFn> {
    if m < 2 {
        return Err(Error::InvalidArgument("g_m needs m >= 2".into()));
    }
    let psi = division_function(curve, m)?;
    Ok(psi
        .derive()
        .try_div(&psi)?
        .scale(&Scalar::frac(1, m as i64)))
}
