//! Finite model of the cocycle equation `δ(qz) − δ(z) = α(z)` on the torsion
//! grid `(1/d)ℤ² / sℤ²` (coordinates in units of the base lattice scale).
//!
//! A grid point `g` is a *boundary* point when some lift `g + sλ ≠ 0` has
//! `(g + sλ)/q` outside `(1/d)ℤ²`; the canonical solution vanishes there.
//! Every component of `g ↦ qg` reaches a boundary point, so the model has at
//! most one solution, and it agrees with the canonical δ off 0.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::func::PeriodicFn;
use super::point::{PointC, ScaleLattice};
use crate::exact::{rat, rat_int, Rational};
use crate::{Error, Result};

/// Largest grid side accepted before the search gives up.
pub(crate) const MAX_GRID_SIDE: i64 = 3000;

/// Values of a gen-free periodic function on `(1/d)ℤ²/ℤ²`.
pub(crate) struct Table {
    pub d: i64,
    vals: Vec<Rational>,
}

impl Table {
    /// Tabulate the gen-free part of `f` with denominator `d` (in units of
    /// `f`'s lattice scale).
    pub fn new(f: &PeriodicFn, d: i64) -> Result<Table> {
        let mut vals = vec![Rational::zero(); (d * d) as usize];
        for (p, v) in f.reps().iter().filter(|(p, _)| p.is_torsion()) {
            let [a, b] = grid_coords(f.lattice(), p, d)?;
            vals[(a.rem_euclid(d) * d + b.rem_euclid(d)) as usize] = v.clone();
        }
        Ok(Table { d, vals })
    }

    pub fn at(&self, a: i64, b: i64) -> &Rational {
        &self.vals[(a.rem_euclid(self.d) * self.d + b.rem_euclid(self.d)) as usize]
    }
}

/// Integer numerators of `p` on the grid `(1/d)·r·ℤ²`.
pub(crate) fn grid_coords(l: &ScaleLattice, p: &PointC, d: i64) -> Result<[i64; 2]> {
    let u = l.units(p);
    let mut out = [0i64; 2];
    for (o, x) in out.iter_mut().zip(u) {
        let y = x * rat_int(d);
        if !y.is_integer() {
            return Err(Error::InvalidArgument(format!("{p} is off the 1/{d} grid")));
        }
        *o = y
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::InvalidArgument("grid overflow".into()))?;
    }
    Ok(out)
}

pub(crate) fn to_i64(x: &BigInt, what: &str) -> Result<i64> {
    x.to_i64()
        .filter(|&v| v <= MAX_GRID_SIDE)
        .ok_or_else(|| Error::Precondition(format!("{what} {x} exceeds the supported grid size")))
}

/// A solved level: values on `(1/d)ℤ²/sℤ²`, indexed `a·n + b` with `n = d·s`.
pub(crate) struct Level {
    pub d: i64,
    pub s: i64,
    pub vals: Vec<Rational>,
}

impl Level {
    pub fn n(&self) -> i64 {
        self.d * self.s
    }

    pub fn at(&self, a: i64, b: i64) -> &Rational {
        let n = self.n();
        &self.vals[(a.rem_euclid(n) * n + b.rem_euclid(n)) as usize]
    }

    /// Value at an arbitrary grid numerator pair on a finer grid `1/(d·k)`:
    /// zero off the `1/d` grid.
    pub fn at_fine(&self, a: i64, b: i64, k: i64) -> Rational {
        if a % k != 0 || b % k != 0 {
            return Rational::zero();
        }
        self.at(a / k, b / k).clone()
    }

    /// The level as a periodic function on `s·r·Λ₀`.
    pub fn to_periodic(&self, base: &ScaleLattice) -> Result<PeriodicFn> {
        let lattice = base.scaled(&rat_int(self.s))?;
        let n = self.n();
        let r = base.r();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let v = self.at(a, b);
                if !v.is_zero() {
                    let p = PointC::torsion(r * rat(a, self.d), r * rat(b, self.d));
                    entries.push((p, v.clone()));
                }
            }
        }
        Ok(PeriodicFn::new(lattice, entries))
    }
}

/// Solve the model at level `s`; `None` when it is inconsistent.
pub(crate) fn solve_level(alpha: &Table, q: i64, s: i64) -> Result<Option<Level>> {
    let d = alpha.d;
    let n = d * s;
    if n > MAX_GRID_SIDE {
        return Err(Error::Precondition(format!("grid side {n} too large")));
    }
    let idx = |a: i64, b: i64| (a * n + b) as usize;
    let ramified = (s * d) % q == 0;
    let mut vals: Vec<Option<Rational>> = vec![None; (n * n) as usize];
    let mut queue = VecDeque::new();
    for a in 0..n {
        for b in 0..n {
            if !(ramified && a % q == 0 && b % q == 0) {
                vals[idx(a, b)] = Some(Rational::zero());
                queue.push_back((a, b));
            }
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        let (qa, qb) = ((q * a) % n, (q * b) % n);
        let next = vals[idx(a, b)].as_ref().unwrap() + alpha.at(a, b);
        match &vals[idx(qa, qb)] {
            Some(v) if *v != next => return Ok(None),
            Some(_) => {}
            None => {
                vals[idx(qa, qb)] = Some(next);
                queue.push_back((qa, qb));
            }
        }
    }
    if vals.iter().any(Option::is_none) {
        return Ok(None);
    }
    Ok(Some(Level {
        d,
        s,
        vals: vals.into_iter().map(Option::unwrap).collect(),
    }))
}

/// A cycle of `g ↦ qg` on `(1/d)ℤ²/ℤ²` along which α has nonzero sum; no
/// periodic solution exists at any level then.
pub(crate) fn nonzero_cycle(alpha: &Table, q: i64) -> Option<(Vec<[i64; 2]>, Rational)> {
    let n = alpha.d;
    let size = (n * n) as usize;
    let step = |i: usize| {
        let (a, b) = ((i as i64) / n, (i as i64) % n);
        (((q * a) % n) * n + (q * b) % n) as usize
    };
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state = vec![0u8; size];
    for start in 0..size {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut i = start;
        while state[i] == 0 {
            state[i] = 1;
            path.push(i);
            i = step(i);
        }
        if state[i] == 1 {
            let pos = path.iter().position(|&j| j == i).unwrap();
            let cycle: Vec<usize> = path[pos..].to_vec();
            let sum: Rational = cycle
                .iter()
                .map(|&j| alpha.at(j as i64 / n, j as i64 % n).clone())
                .sum();
            if !sum.is_zero() {
                let pts = cycle
                    .iter()
                    .map(|&j| [j as i64 / n, j as i64 % n])
                    .collect();
                return Some((pts, sum));
            }
        }
        for j in path {
            state[j] = 2;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::func::{delta_value, scale_periodic};

    #[test]
    fn forward_round_trip_level_one() {
        let d0 = PeriodicFn::new(
            ScaleLattice::base(),
            [
                (PointC::torsion(rat(1, 3), rat(0, 1)), rat_int(1)),
                (PointC::torsion(rat(2, 3), rat(0, 1)), rat_int(1)),
                (PointC::origin(), rat_int(-2)),
            ],
        );
        let alpha = scale_periodic(&d0, 2).unwrap().sub(&d0).unwrap();
        let d = alpha.torsion_denominator();
        let t = Table::new(&alpha, to_i64(&d, "d").unwrap()).unwrap();
        assert!(nonzero_cycle(&t, 2).is_none());
        let lvl = solve_level(&t, 2, 1).unwrap().expect("consistent");
        let got = lvl.to_periodic(&ScaleLattice::base()).unwrap();
        assert!(got.agrees_off_origin(&d0).unwrap());
        // the class of 0 carries the value of δ at nonzero lattice points
        let one = PointC::torsion(rat(1, 1), rat(0, 1));
        assert_eq!(got.value_at_origin(), delta_value(&alpha, 2, &one));
    }

    #[test]
    fn nonperiodic_cycle_detected() {
        // α = (1/3,0) alone: ×2 swaps 1/3 and 2/3, cycle sum 1
        let alpha = PeriodicFn::new(
            ScaleLattice::base(),
            [(PointC::torsion(rat(1, 3), rat(0, 1)), rat_int(1))],
        );
        let t = Table::new(&alpha, 3).unwrap();
        let (cyc, sum) = nonzero_cycle(&t, 2).unwrap();
        assert_eq!(sum, rat_int(1));
        assert_eq!(cyc.len(), 2);
        assert!(solve_level(&t, 2, 1).unwrap().is_none());
    }
}
