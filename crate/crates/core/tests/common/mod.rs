//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use std::sync::Arc;

use ellipdiff::divisors::{scale_periodic, PeriodicFn, PointC, ScaleLattice};
use ellipdiff::exact::{rat, rat_int, CurveParams, EllFn, Poly, RatFn, Rational, Scalar};
use ellipdiff::linalg::Mat;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn curve(g2: i64, g3: i64) -> Arc<CurveParams> {
    Arc::new(CurveParams::from_ints(g2, g3).unwrap())
}

fn nonzero(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let v = r.gen_range(lo..=hi);
        if v != 0 {
            return v;
        }
    }
}

/// A point of `(1/d)Λ₀` reduced into `[0, 1)²`.
pub fn torsion_point(r: &mut ChaCha8Rng, d: i64) -> PointC {
    PointC::torsion(rat(r.gen_range(0..d), d), rat(r.gen_range(0..d), d))
}

/// Random Λ₀-periodic torsion-supported function with `1..=max_support`
/// points on `(1/d)Λ₀`, values in `±1..=3`.
pub fn random_periodic(r: &mut ChaCha8Rng, d: i64, max_support: usize) -> PeriodicFn {
    let n = r.gen_range(1..=max_support);
    let entries: Vec<_> = (0..n)
        .map(|_| (torsion_point(r, d), rat_int(nonzero(r, -3, 3))))
        .collect();
    PeriodicFn::new(ScaleLattice::base(), entries)
}

/// `e = (e_0, …, e_m)` with `e_m = 1`, `e_0 ∈ {±1, ±2}`.
pub fn random_e(r: &mut ChaCha8Rng) -> Vec<Rational> {
    let m = r.gen_range(1..=2);
    let e0 = [1, -1, 2, -2][r.gen_range(0..4)];
    let mut e = vec![rat_int(e0)];
    for _ in 1..m {
        e.push(rat_int(r.gen_range(-2..=2)));
    }
    e.push(rat_int(1));
    e
}

/// `f_q = φf₀ − f₀`, `f_p = Σ_i e_{m−i} f₀(p^{1−i} z)`.
pub fn forward_periodicity(f0: &PeriodicFn, e: &[Rational], p: u64, q: u64) -> (PeriodicFn, PeriodicFn) {
    let fq = scale_periodic(f0, q).unwrap().sub(f0).unwrap();
    let m = e.len() - 1;
    let mut fp = scale_periodic(f0, p).unwrap().scale_values(&e[m]);
    for i in 1..=m {
        let term = f0.dilate(p.pow(i as u32 - 1)).unwrap().scale_values(&e[m - i]);
        fp = fp.add(&term).unwrap();
    }
    (fp, fq)
}

/// A principal divisor (degree 0, Abel–Jacobi sum in Λ₀) on `(1/d)Λ₀`.
pub fn random_principal(r: &mut ChaCha8Rng, d: i64, max_support: usize) -> PeriodicFn {
    let f = random_periodic(r, d, max_support);
    let mut sum = [Rational::from_integer(0.into()), Rational::from_integer(0.into())];
    let mut deg = Rational::from_integer(0.into());
    for (p, v) in f.reps() {
        sum[0] += &p.v()[0] * v;
        sum[1] += &p.v()[1] * v;
        deg += v;
    }
    let closing = PointC::torsion(-&sum[0], -&sum[1]);
    let fix = PeriodicFn::new(
        ScaleLattice::base(),
        [(closing, rat_int(1)), (PointC::origin(), -deg - rat_int(1))],
    );
    f.add(&fix).unwrap()
}

fn small_poly(r: &mut ChaCha8Rng, deg: usize) -> Poly {
    Poly::new((0..=deg).map(|_| Scalar::int(r.gen_range(-3..=3))).collect())
}

/// `a(x) + b(x)·y` with small numerators and monic linear denominators.
pub fn random_ellfn(r: &mut ChaCha8Rng, c: &Arc<CurveParams>) -> EllFn {
    let part = |r: &mut ChaCha8Rng| {
        let deg = r.gen_range(0..=2);
        let num = small_poly(r, deg);
        let den = if r.gen_bool(0.5) {
            Poly::one()
        } else {
            Poly::new(vec![Scalar::int(r.gen_range(-3..=3)), Scalar::one()])
        };
        RatFn::new(num, den).unwrap()
    };
    let a = part(r);
    let b = if r.gen_bool(0.5) { part(r) } else { RatFn::zero() };
    let f = EllFn::new(a, b, c.clone());
    if f.is_zero() {
        EllFn::x(c)
    } else {
        f
    }
}

pub fn int_mat(n: usize, f: impl FnMut(usize, usize) -> i64) -> Mat<Scalar> {
    let mut f = f;
    Mat::from_fn(n, n, |i, j| Scalar::int(f(i, j)))
}

/// `A` random (upper triangular half the time), `B = c₀ + c₁A + c₂A²`.
pub fn random_commuting_pair(r: &mut ChaCha8Rng, n: usize) -> (Mat<Scalar>, Mat<Scalar>) {
    let tri = r.gen_bool(0.5);
    let a = int_mat(n, |i, j| if tri && i > j { 0 } else { r.gen_range(-3..=3) });
    let id = Mat::identity(n, &Scalar::one());
    let (c0, c1, c2) = (r.gen_range(-2..=2), r.gen_range(-2..=2), r.gen_range(-1..=1));
    let b = id
        .scale(&Scalar::int(c0))
        .add(&a.scale(&Scalar::int(c1)))
        .unwrap()
        .add(&a.mul(&a).unwrap().scale(&Scalar::int(c2)))
        .unwrap();
    (a, b)
}
