//! Reduction of Gaussian rationals modulo split primes, used to certify
//! rank and coprimality facts cheaply before (or instead of) exact work.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exact::{Poly, Rational, Scalar};

/// Primes `p = 1 mod 4` just below `2^31`, in which `-1` is a square.
pub fn gaussian_split_primes() -> impl Iterator<Item = u64> {
    (1u64..(1 << 29))
        .map(|k| (1u64 << 31) - 4 * k + 1)
        .filter(|&p| {
            (3..)
                .step_by(2)
                .take_while(|d| d * d <= p)
                .all(|d| p % d != 0)
        })
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Reduction `Q(i) -> F_p` sending `i` to a fixed square root of `-1`.
pub struct GaussianModP {
    pub p: u64,
    i: u64,
    bp: BigInt,
}

impl GaussianModP {
    pub fn new(p: u64) -> Self {
        let i = (2..p)
            .map(|c| pow_mod(c, (p - 1) / 4, p))
            .find(|&r| mul_mod(r, r, p) == p - 1)
            .expect("p = 1 mod 4");
        GaussianModP {
            p,
            i,
            bp: BigInt::from(p),
        }
    }

    pub fn rational(&self, r: &Rational) -> Option<u64> {
        let n = r.numer().mod_floor(&self.bp).to_u64()?;
        let d = r.denom().mod_floor(&self.bp).to_u64()?;
        (d != 0).then(|| mul_mod(n, pow_mod(d, self.p - 2, self.p), self.p))
    }

    pub fn scalar(&self, s: &Scalar) -> Option<u64> {
        let re = self.rational(s.re())?;
        let im = self.rational(s.im())?;
        Some((re + mul_mod(self.i, im, self.p)) % self.p)
    }
}

/// Outcome of eliminating an augmented system over `F_p`.
pub enum ModSolve {
    /// Full column rank and an inconsistent right-hand side.
    Inconsistent,
    /// Full column rank; the unique solution.
    Unique(Vec<u64>),
    /// Rank deficient mod `p`: nothing can be concluded.
    Deficient,
}

/// Gauss-Jordan on rows `[A | b]` with `cols` columns in `A`.
pub fn solve_mod(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> ModSolve {
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            return ModSolve::Deficient;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for v in rows[rank][c..].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let f = row[c];
            if r == rank || f == 0 {
                continue;
            }
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + p - mul_mod(f, *y, p)) % p;
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r[cols] != 0) {
        return ModSolve::Inconsistent;
    }
    ModSolve::Unique(rows[..cols].iter().map(|r| r[cols]).collect())
}

impl GaussianModP {
    /// Coefficients of `p` mod `self.p`, ascending; `None` if a denominator
    /// or the leading coefficient vanishes.
    pub fn poly(&self, p: &Poly) -> Option<Vec<u64>> {
        let v: Vec<u64> = p
            .coeffs()
            .iter()
            .map(|c| self.scalar(c))
            .collect::<Option<_>>()?;
        (v.last() != Some(&0)).then_some(v)
    }
}

/// Degree of `gcd(a, b)` over `F_p` for nonzero inputs.
pub fn gcd_degree_mod(a: &[u64], b: &[u64], p: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - mul_mod(f, *c, p)) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True only if `a` and `b` are certainly coprime over `Q(i)`.
pub fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
    let Some(p) = gaussian_split_primes().next() else {
        return false;
    };
    let red = GaussianModP::new(p);
    match (red.poly(a), red.poly(b)) {
        (Some(x), Some(y)) => gcd_degree_mod(&x, &y, p) == 0,
        _ => false,
    }
}
