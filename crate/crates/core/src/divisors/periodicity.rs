use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::func::{OrbitEval, PeriodicFn};
use super::model::{solve_level, to_i64, Level, Table, MAX_GRID_SIDE};
use super::point::{power_exponent, PointC, ScaleLattice};
use crate::exact::{rat, rat_int, Rational};
use crate::{Error, Result};

/// Levels `s` (lattice `s·r`) tried for the torsion part.
pub const MAX_PERIODICITY_LEVEL: i64 = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PeriodicityOutcome {
    Solved {
        f_tilde: PeriodicFn,
        lattice: ScaleLattice,
        /// Value of f̃ on the class of 0; the reconstruction itself is only
        /// defined off 0.
        #[serde(with = "crate::exact::scalar::rational_str")]
        mod_at_0: Rational,
        level: i64,
    },
    /// The q- and p-reconstructions of f disagree at `witness` (or, for a
    /// witness at the origin, a relation fails on the class of 0 itself).
    Unsatisfiable {
        witness: PointC,
        #[serde(with = "crate::exact::scalar::rational_str")]
        q_value: Rational,
        #[serde(with = "crate::exact::scalar::rational_str")]
        p_value: Rational,
        reason: String,
    },
    Inconclusive {
        max_level: i64,
        detail: String,
    },
}

/// The coefficients `r_1, …, r_n` with `f(z) = Σ r_ν f_p(z/p^ν)`:
/// `r_1 = 1`, `r_{k+1} = −Σ_{i=1}^{min(m,k)} r_{k+1−i} e_{m−i}`.
pub fn r_coefficients(e: &[Rational], n: usize) -> Vec<Rational> {
    let mut r = Vec::new();
    extend_r(&mut r, e, n);
    r.split_off(1)
}

// r[0] is a placeholder so that r[k] = r_k.
fn extend_r(r: &mut Vec<Rational>, e: &[Rational], upto: usize) {
    let m = e.len() - 1;
    if r.is_empty() {
        r.push(Rational::zero());
        r.push(Rational::one());
    }
    while r.len() <= upto {
        let k = r.len() - 1;
        let mut acc = Rational::zero();
        for i in 1..=m.min(k) {
            acc -= &r[k + 1 - i] * &e[m - i];
        }
        r.push(acc);
    }
}

/// `Σ_{ν≥1} f_q(z/q^ν)`: the unique solution of `f(qz) − f(z) = f_q(z)` off 0.
pub fn reconstruct_q(f_q: &PeriodicFn, q: u64, z: &PointC) -> Rational {
    OrbitEval::new(f_q, q).sum(z, |_| Rational::one())
}

/// `Σ_{ν≥1} r_ν f_p(z/p^ν)`: the unique solution of
/// `Σ_i e_{m−i} f(p^{1−i} z) = f_p(z)` off 0.
pub fn reconstruct_p(f_p: &PeriodicFn, e: &[Rational], p: u64, z: &PointC) -> Rational {
    let mut r = Vec::new();
    OrbitEval::new(f_p, p).sum(z, |nu| {
        extend_r(&mut r, e, nu as usize);
        r[nu as usize].clone()
    })
}

fn validate(e: &[Rational], p: u64, q: u64) -> Result<()> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidArgument(format!(
            "need p, q >= 2 (got p={p}, q={q})"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Precondition(format!(
            "p={p} and q={q} are not coprime"
        )));
    }
    if e.len() < 2 || !e[e.len() - 1].is_one() || e[0].is_zero() {
        return Err(Error::InvalidArgument(
            "e must have e_m = 1, e_0 != 0 and m >= 1".into(),
        ));
    }
    Ok(())
}

struct Ctx<'a> {
    fq: &'a PeriodicFn,
    fp: &'a PeriodicFn,
    e: &'a [Rational],
    p: u64,
    q: u64,
    evq: OrbitEval<'a>,
    evp: OrbitEval<'a>,
    r: std::cell::RefCell<Vec<Rational>>,
}

impl<'a> Ctx<'a> {
    fn base(&self) -> &ScaleLattice {
        self.fq.lattice()
    }

    fn m(&self) -> usize {
        self.e.len() - 1
    }

    fn recon_q(&self, z: &PointC) -> Rational {
        self.evq.sum(z, |_| Rational::one())
    }

    fn recon_p(&self, z: &PointC) -> Rational {
        let mut r = self.r.borrow_mut();
        self.evp.sum(z, |nu| {
            extend_r(&mut r, self.e, nu as usize);
            r[nu as usize].clone()
        })
    }

    /// First candidate where the two reconstructions differ.
    fn disagreement(
        &self,
        cands: impl IntoIterator<Item = PointC>,
        reason: &str,
    ) -> Option<PeriodicityOutcome> {
        cands.into_iter().filter(|z| !z.is_origin()).find_map(|z| {
            let (a, b) = (self.recon_q(&z), self.recon_p(&z));
            (a != b).then(|| PeriodicityOutcome::Unsatisfiable {
                witness: z,
                q_value: a,
                p_value: b,
                reason: reason.to_string(),
            })
        })
    }

    /// `p^{1−i}·z` for `i = 0..=m`: where a failed p-relation must expose a
    /// disagreement, because the p-reconstruction satisfies that relation.
    fn relation_points(&self, z: &PointC) -> Vec<PointC> {
        let p = rat_int(self.p as i64);
        (0..=self.m())
            .map(|i| z.scale(&(Rational::one() / p.pow(i as i32 - 1))))
            .collect()
    }
}

/// Reconstruct `f` from `f_q = φf − f` and `f_p = Σ e_{m−i} ψ^{1−i}f`
/// (ψ = scaling by p) and return its periodic modification at 0.
pub fn periodicity_solve(
    f_p: &PeriodicFn,
    f_q: &PeriodicFn,
    e: &[Rational],
    p: u64,
    q: u64,
) -> Result<PeriodicityOutcome> {
    validate(e, p, q)?;
    let base = f_p.lattice().common(f_q.lattice());
    let fq = f_q.on_lattice(&base)?;
    let fp = f_p.on_lattice(&base)?;
    let ctx = Ctx {
        fq: &fq,
        fp: &fp,
        e,
        p,
        q,
        evq: OrbitEval::new(&fq, q),
        evp: OrbitEval::new(&fp, p),
        r: Default::default(),
    };
    let origin = PointC::origin();
    let fq0 = fq.value_at_origin();
    if !fq0.is_zero() {
        return Ok(PeriodicityOutcome::Unsatisfiable {
            witness: origin,
            q_value: fq0,
            p_value: Rational::zero(),
            reason: "f(qz) - f(z) = f_q(z) fails on the class of 0: f_q(0) != 0".into(),
        });
    }
    let esum: Rational = e.iter().sum();
    let fp0 = fp.value(&origin);
    if esum.is_zero() && !fp0.is_zero() {
        return Ok(PeriodicityOutcome::Unsatisfiable {
            witness: origin,
            q_value: Rational::zero(),
            p_value: fp0,
            reason: "the p-relation at z = 0 reads 0 = f_p(0) != 0".into(),
        });
    }

    let level = match torsion_level(&ctx)? {
        Ok(l) => l,
        Err(detail) => {
            if let Some(w) = ctx.disagreement(torsion_candidates(&ctx), "reconstructions differ") {
                return Ok(w);
            }
            return Ok(PeriodicityOutcome::Inconclusive {
                max_level: MAX_PERIODICITY_LEVEL,
                detail,
            });
        }
    };
    if let Some(w) = check_torsion_p_relation(&ctx, &level)? {
        return Ok(w);
    }
    let mut f_tilde = level.to_periodic(&base)?;
    let mod_at_0 = f_tilde.value_at_origin();
    let gens: BTreeSet<String> = fq
        .reps()
        .keys()
        .chain(fp.reps().keys())
        .filter_map(|p| p.gen().map(str::to_string))
        .collect();
    for g in gens {
        match generator_part(&ctx, &g)? {
            Ok(part) => f_tilde = f_tilde.add(&part)?,
            Err(w) => return Ok(w),
        }
    }
    let lattice = f_tilde.lattice().clone();
    Ok(PeriodicityOutcome::Solved {
        f_tilde,
        lattice,
        mod_at_0,
        level: level.s,
    })
}

/// Smallest level at which the q-model for the torsion part is consistent.
fn torsion_level(ctx: &Ctx) -> Result<std::result::Result<Level, String>> {
    let dq = to_i64(&ctx.fq.torsion_denominator(), "denominator")?;
    let table = Table::new(ctx.fq, dq)?;
    for s in 1..=MAX_PERIODICITY_LEVEL {
        if dq * s > MAX_GRID_SIDE {
            return Ok(Err(format!(
                "grid 1/{dq} exceeds the size limit at level {s}"
            )));
        }
        if let Some(level) = solve_level(&table, ctx.q as i64, s)? {
            return Ok(Ok(level));
        }
    }
    Ok(Err(format!(
        "q-model inconsistent at levels 1..={MAX_PERIODICITY_LEVEL} on the 1/{dq} grid"
    )))
}

/// Points `q^a p^b (P + λ)` built from the torsion representatives.
fn torsion_candidates(ctx: &Ctx) -> Vec<PointC> {
    let r = ctx.base().r();
    let mut out = Vec::new();
    for p in ctx
        .fq
        .reps()
        .keys()
        .chain(ctx.fp.reps().keys())
        .filter(|p| p.is_torsion())
    {
        for (i, j) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let lifted = p.translate(&(r * rat_int(i)), &(r * rat_int(j)));
            for a in 0..=2u32 {
                for b in 0..=2u32 {
                    let k = BigInt::from(ctx.q).pow(a) * BigInt::from(ctx.p).pow(b);
                    out.push(lifted.scale(&Rational::from_integer(k)));
                }
            }
        }
    }
    out
}

/// Check `Σ_i e_{m−i} f̃(p^{1−i}z) = f_p(z)` on the torsion grid. Only points
/// where some term can be nonzero are visited.
fn check_torsion_p_relation(ctx: &Ctx, level: &Level) -> Result<Option<PeriodicityOutcome>> {
    let (p, m) = (ctx.p as i64, ctx.m());
    let dq = level.d;
    let dp = to_i64(&ctx.fp.torsion_denominator(), "denominator")?;
    let n_grid = p * dq.lcm(&dp);
    let (kq, kp) = (n_grid / dq, n_grid / dp);
    let s = level.s;
    let pm1 = p.pow(m as u32 - 1);
    let modulus = n_grid * pm1 * s;
    if modulus > 50 * MAX_GRID_SIDE {
        return Err(Error::Precondition(format!(
            "p-relation grid {modulus} too large"
        )));
    }
    let table_p = Table::new(ctx.fp, dp)?;
    let ft = |a: i64, b: i64| level.at_fine(a, b, kq);
    let fpv = |a: i64, b: i64| {
        if a % kp != 0 || b % kp != 0 {
            Rational::zero()
        } else {
            table_p.at(a / kp, b / kp).clone()
        }
    };
    let red = |a: i64| a.rem_euclid(modulus);
    let mut cands: HashSet<(i64, i64)> = HashSet::new();
    let sn = s * n_grid;
    let n = level.n();
    for a in 0..n {
        for b in 0..n {
            if level.at(a, b).is_zero() {
                continue;
            }
            let (aa, bb) = (a * kq, b * kq);
            // p·z ≡ w
            let step = sn / p;
            let cnt = p.pow(m as u32);
            for i in 0..cnt {
                for j in 0..cnt {
                    cands.insert((red(aa / p + step * i), red(bb / p + step * j)));
                }
            }
            // z / p^{i−1} ≡ w
            for i in 1..=m as u32 {
                let f = p.pow(i - 1);
                let cnt = p.pow(m as u32 - i);
                for x in 0..cnt {
                    for y in 0..cnt {
                        cands.insert((red(f * (aa + sn * x)), red(f * (bb + sn * y))));
                    }
                }
            }
        }
    }
    for pt in ctx.fp.reps().keys().filter(|p| p.is_torsion()) {
        let [a, b] = super::model::grid_coords(ctx.base(), pt, n_grid)?;
        let cnt = pm1 * s;
        for x in 0..cnt {
            for y in 0..cnt {
                cands.insert((red(a + n_grid * x), red(b + n_grid * y)));
            }
        }
    }
    let mut cands: Vec<_> = cands.into_iter().collect();
    cands.sort_unstable();
    let m_i = m as i64;
    for (a, b) in cands {
        let mut lhs = Rational::zero();
        for i in 0..=m_i {
            let e = &ctx.e[(m_i - i) as usize];
            if e.is_zero() {
                continue;
            }
            let v = if i == 0 {
                ft(p * a, p * b)
            } else {
                let f = p.pow(i as u32 - 1);
                if a % f != 0 || b % f != 0 {
                    continue;
                }
                ft(a / f, b / f)
            };
            lhs += e * v;
        }
        if lhs != fpv(a, b) {
            let (a, b) = if a == 0 && b == 0 {
                (modulus, 0)
            } else {
                (a, b)
            };
            let r = ctx.base().r();
            let z = PointC::torsion(r * rat(a, n_grid), r * rat(b, n_grid));
            let cands = ctx.relation_points(&z);
            return Ok(Some(
                ctx.disagreement(cands, "p-relation fails for the q-reconstruction")
                    .unwrap_or_else(|| PeriodicityOutcome::Inconclusive {
                        max_level: MAX_PERIODICITY_LEVEL,
                        detail: format!("p-relation fails at {z} but no disagreement located"),
                    }),
            ));
        }
    }
    Ok(None)
}

fn grid(side: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..side).flat_map(move |a| (0..side).map(move |b| (a, b)))
}

fn guard(side: i64) -> Result<i64> {
    if side > MAX_GRID_SIDE {
        return Err(Error::Precondition(format!(
            "generator grid side {side} too large"
        )));
    }
    Ok(side)
}

type GenPart = std::result::Result<PeriodicFn, PeriodicityOutcome>;

/// The part of f̃ on points `c·g + v` for one generator `g`.
///
/// The q-reconstruction can be nonzero only on lines `c ∈ c_q·q^ν`, the
/// p-reconstruction only on `c ∈ c_p·p^μ`; coprimality makes the common
/// lines `T` finite. Off `T` the q-reconstruction must vanish; past the top
/// of a q-chain its lines are rescalings of the first one above the top, so
/// one zero check covers them all. On `T` the q-reconstruction has period
/// `q^ν·r` and the p-reconstruction `p^μ·r`, so agreement forces period `r`.
fn generator_part(ctx: &Ctx, g: &str) -> Result<GenPart> {
    let base = ctx.base().clone();
    let r = base.r().clone();
    let (q, p) = (ctx.q, ctx.p);
    let qb = BigInt::from(q);
    let on_g = |f: &PeriodicFn| -> BTreeSet<Rational> {
        f.reps()
            .keys()
            .filter(|x| x.gen() == Some(g))
            .map(|x| x.c().clone())
            .collect()
    };
    let (cq, cp) = (on_g(ctx.fq), on_g(ctx.fp));
    let mut dg = BigInt::one();
    for x in ctx
        .fq
        .reps()
        .keys()
        .chain(ctx.fp.reps().keys())
        .filter(|x| x.gen() == Some(g))
    {
        for u in base.units(x) {
            dg = dg.lcm(u.denom());
        }
    }
    let dg = to_i64(&dg, "denominator")?;
    let pt = |c: &Rational, a: i64, b: i64, den: i64| {
        PointC::generic(c.clone(), g, &r * rat(a, den), &r * rat(b, den))
    };
    let qpow = |n: u32| Rational::from_integer(qb.pow(n));
    let ppow = |n: i64| rat_int(p as i64).pow(n as i32);
    let fail = |z: Vec<PointC>, why: &str| {
        ctx.disagreement(z.clone(), why)
            .unwrap_or_else(|| PeriodicityOutcome::Inconclusive {
                max_level: MAX_PERIODICITY_LEVEL,
                detail: format!("{why} near {:?} but no disagreement located", z.first()),
            })
    };

    let mut t: BTreeSet<Rational> = BTreeSet::new();
    for a in &cq {
        for b in &cp {
            let ratio = b / a;
            let num = Rational::from_integer(ratio.numer().clone());
            let den = Rational::from_integer(ratio.denom().clone());
            if let (Some(nu), Some(mu)) = (power_exponent(&num, q), power_exponent(&den, p)) {
                if nu >= 1 && mu >= 1 {
                    t.insert(a * num);
                }
            }
        }
    }

    // q-chains: (base multiplier, top exponent)
    let mut chains: Vec<(Rational, u32)> = Vec::new();
    let mut seen: BTreeSet<Rational> = BTreeSet::new();
    for c in &cq {
        if seen.contains(c) {
            continue;
        }
        let members: Vec<&Rational> = cq
            .iter()
            .filter(|d| {
                power_exponent(&(*d / c), q).is_some() || power_exponent(&(c / *d), q).is_some()
            })
            .collect();
        let b0 = *members
            .iter()
            .find(|m0| {
                members
                    .iter()
                    .all(|d| power_exponent(&(*d / **m0), q).is_some())
            })
            .expect("a chain has a least element");
        let kmax = members
            .iter()
            .map(|d| power_exponent(&(*d / b0), q).unwrap())
            .max()
            .unwrap();
        seen.extend(members.into_iter().cloned());
        chains.push((b0.clone(), kmax));
    }

    for (b0, kmax) in &chains {
        for n in 1..=kmax + 1 {
            let l = b0 * qpow(n);
            let top = n == kmax + 1;
            if t.contains(&l) && !top {
                continue;
            }
            let side = guard(dg * q.pow(n) as i64)?;
            let hit = grid(side).find(|&(a, b)| !ctx.recon_q(&pt(&l, a, b, dg)).is_zero());
            let Some((a, b)) = hit else { continue };
            if !top {
                return Ok(Err(fail(
                    vec![pt(&l, a, b, dg)],
                    "q-reconstruction nonzero off the p-support",
                )));
            }
            for extra in 0..=(t.len() as u32 + 1) {
                let l2 = b0 * qpow(kmax + 1 + extra);
                if t.contains(&l2) {
                    continue;
                }
                let k = q.pow(extra) as i64;
                return Ok(Err(fail(
                    vec![pt(&l2, a * k, b * k, dg)],
                    "q-reconstruction nonzero above the chain",
                )));
            }
        }
    }

    let mut entries = Vec::new();
    for l in &t {
        let exps = |cs: &BTreeSet<Rational>, m: u64| {
            cs.iter()
                .filter_map(|c| power_exponent(&(l / c), m))
                .filter(|&n| n >= 1)
                .max()
                .unwrap_or(0)
        };
        let (numax, mumax) = (exps(&cq, q), exps(&cp, p));
        let (qa, pbm) = (q.pow(numax) as i64, p.pow(mumax) as i64);
        for (a, b) in grid(guard(dg * qa)?) {
            let v0 = ctx.recon_q(&pt(l, a, b, dg));
            for (da, db) in [(dg, 0), (0, dg)] {
                if ctx.recon_q(&pt(l, a + da, b + db, dg)) == v0 {
                    continue;
                }
                // t ≡ 0 mod q^ν, t ≡ 1 mod p^μ
                let x = qa.extended_gcd(&pbm).x;
                let tt = qa * x.rem_euclid(pbm);
                let cands = vec![
                    pt(l, a, b, dg),
                    pt(l, a + da, b + db, dg),
                    pt(l, a + tt * da, b + tt * db, dg),
                ];
                return Ok(Err(fail(
                    cands,
                    "q-reconstruction not periodic on a common line",
                )));
            }
        }
        for (a, b) in grid(dg) {
            let z = pt(l, a, b, dg);
            let v = ctx.recon_q(&z);
            if !v.is_zero() {
                entries.push((z, v));
            }
        }
    }
    let part = PeriodicFn::new(base.clone(), entries);

    let m = ctx.m() as i64;
    let mut lines: BTreeSet<Rational> = cp.clone();
    for l in &t {
        for i in 0..=m {
            lines.insert(l * ppow(i - 1));
        }
    }
    let side = guard(p.pow(m as u32) as i64 * dg)?;
    for l in &lines {
        for (a, b) in grid(side) {
            let z = pt(l, a, b, p as i64 * dg);
            let mut lhs = Rational::zero();
            for i in 0..=m {
                lhs += &ctx.e[(m - i) as usize] * part.value(&z.scale(&ppow(1 - i)));
            }
            if lhs != ctx.fp.value(&z) {
                return Ok(Err(fail(
                    ctx.relation_points(&z),
                    "p-relation fails on a generator line",
                )));
            }
        }
    }
    Ok(Ok(part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::func::scale_periodic;

    fn pt(a: i64, b: i64, c: i64, d: i64) -> PointC {
        PointC::torsion(rat(a, b), rat(c, d))
    }

    /// `f_q = φf₀ − f₀`, `f_p = Σ e_{m−i} f₀(p^{1−i}z)`.
    fn forward(f0: &PeriodicFn, e: &[Rational], p: u64, q: u64) -> (PeriodicFn, PeriodicFn) {
        let fq = scale_periodic(f0, q).unwrap().sub(f0).unwrap();
        let m = e.len() - 1;
        let mut fp = scale_periodic(f0, p).unwrap().scale_values(&e[m]);
        for i in 1..=m {
            let term = f0
                .dilate(p.pow(i as u32 - 1))
                .unwrap()
                .scale_values(&e[m - i]);
            fp = fp.add(&term).unwrap();
        }
        (fp, fq)
    }

    fn seed() -> PeriodicFn {
        PeriodicFn::new(
            ScaleLattice::base(),
            [
                (pt(1, 3, 0, 1), rat_int(1)),
                (pt(2, 3, 0, 1), rat_int(1)),
                (pt(1, 4, 1, 2), rat_int(-3)),
                (pt(0, 1, 0, 1), rat_int(-2)),
            ],
        )
    }

    #[test]
    fn r_recursion_m1() {
        let c = rat(-3, 2);
        let r = r_coefficients(&[c.clone(), rat_int(1)], 5);
        for (k, rk) in r.iter().enumerate() {
            assert_eq!(*rk, (-&c).pow(k as i32));
        }
    }

    #[test]
    fn zero_pair() {
        let z = PeriodicFn::zero(ScaleLattice::base());
        match periodicity_solve(&z, &z, &[rat_int(2), rat_int(1)], 3, 2).unwrap() {
            PeriodicityOutcome::Solved {
                f_tilde, mod_at_0, ..
            } => {
                assert!(f_tilde.is_zero());
                assert!(mod_at_0.is_zero());
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn round_trip_both_orders() {
        let f0 = seed();
        for (p, q, e) in [
            (3, 2, vec![rat_int(1), rat_int(1)]),
            (2, 3, vec![rat_int(-2), rat_int(1)]),
            (3, 2, vec![rat_int(2), rat_int(-1), rat_int(1)]),
        ] {
            let (fp, fq) = forward(&f0, &e, p, q);
            match periodicity_solve(&fp, &fq, &e, p, q).unwrap() {
                PeriodicityOutcome::Solved { f_tilde, .. } => {
                    assert!(f_tilde.agrees_off_origin(&f0).unwrap(), "p={p} q={q}")
                }
                o => panic!("{o:?}"),
            }
        }
    }

    #[test]
    fn corrupted_pair_has_witness() {
        let f0 = seed();
        let e = vec![rat_int(1), rat_int(1)];
        let (fp, fq) = forward(&f0, &e, 3, 2);
        let bump = PeriodicFn::new(ScaleLattice::base(), [(pt(1, 5, 0, 1), rat_int(1))]);
        for (fp, fq) in [
            (fp.add(&bump).unwrap(), fq.clone()),
            (fp.clone(), fq.add(&bump).unwrap()),
        ] {
            match periodicity_solve(&fp, &fq, &e, 3, 2).unwrap() {
                PeriodicityOutcome::Unsatisfiable { witness, .. } => {
                    assert!(!witness.is_origin());
                    assert_ne!(
                        reconstruct_q(&fq, 2, &witness),
                        reconstruct_p(&fp, &e, 3, &witness)
                    );
                }
                o => panic!("{o:?}"),
            }
        }
    }

    #[test]
    fn generator_round_trip() {
        let g = |c: i64, a: i64, b: i64| PointC::generic(rat_int(c), "g1", rat(a, b), rat(0, 1));
        let f0 = PeriodicFn::new(
            ScaleLattice::base(),
            [
                (g(1, 1, 2), rat_int(2)),
                (g(1, 0, 1), rat_int(-1)),
                (g(3, 1, 3), rat_int(1)),
                (pt(1, 2, 0, 1), rat_int(1)),
            ],
        );
        let e = vec![rat_int(1), rat_int(1)];
        let (fp, fq) = forward(&f0, &e, 3, 2);
        match periodicity_solve(&fp, &fq, &e, 3, 2).unwrap() {
            PeriodicityOutcome::Solved { f_tilde, .. } => {
                assert!(f_tilde.agrees_off_origin(&f0).unwrap())
            }
            o => panic!("{o:?}"),
        }
        // drop a generator term from f_q only: the pair becomes inconsistent
        let bump = PeriodicFn::new(ScaleLattice::base(), [(g(2, 0, 1), rat_int(1))]);
        let fq2 = fq.add(&bump).unwrap();
        match periodicity_solve(&fp, &fq2, &e, 3, 2).unwrap() {
            PeriodicityOutcome::Unsatisfiable { witness, .. } => {
                assert_ne!(
                    reconstruct_q(&fq2, 2, &witness),
                    reconstruct_p(&fp, &e, 3, &witness)
                );
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let z = PeriodicFn::zero(ScaleLattice::base());
        assert!(periodicity_solve(&z, &z, &[rat_int(1), rat_int(1)], 2, 4).is_err());
        assert!(periodicity_solve(&z, &z, &[rat_int(0), rat_int(1)], 3, 2).is_err());
        assert!(periodicity_solve(&z, &z, &[rat_int(1), rat_int(2)], 3, 2).is_err());
    }
}
