//! Series solutions and verification of `f(qz) = a f(z) + b` and `Y(qz) = A Y(z)`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::series::{scale_arg, LaurentSeries, EXACT};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::linalg::{nullspace, rank, solve, Mat};

/// Outcome of [`solve_scalar_first_order`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarSolution {
    /// Solution with every free coefficient set to 0; absent when obstructed.
    pub particular: Option<LaurentSeries>,
    /// Exponents `n` with `q^n = a`.
    pub resonances: Vec<i64>,
    /// Number of free coefficients among known exponents.
    pub homogeneous_dim: usize,
    /// Resonant exponent where `b_n != 0`.
    pub obstruction: Option<i64>,
    /// Resonances at or beyond the truncation of `b`, where nothing is decided.
    pub undecided: Vec<i64>,
}

/// The unique `n` with `q^n = a`, if any.
fn resonance(a: &Scalar, q: u64) -> Option<i64> {
    let r = a.as_rational()?;
    if !r.is_positive() {
        return None;
    }
    let q = BigInt::from(q);
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let sign = if den.is_one() {
        1
    } else if num.is_one() {
        std::mem::swap(&mut num, &mut den);
        -1
    } else {
        return None;
    };
    let mut n = 0i64;
    while num > BigInt::one() {
        if &num % &q != BigInt::from(0) {
            return None;
        }
        num /= &q;
        n += 1;
    }
    Some(sign * n)
}

/// Coefficientwise solution of `u(qz) = a u(z) + b(z)`, i.e. `u_n (q^n - a) = b_n`.
pub fn solve_scalar_first_order(a: &Scalar, b: &LaurentSeries, q: u64) -> Result<ScalarSolution> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    if q < 2 {
        return Err(Error::InvalidArgument("q must be at least 2".into()));
    }
    let res = resonance(a, q);
    let mut sol = ScalarSolution {
        particular: None,
        resonances: res.into_iter().collect(),
        homogeneous_dim: 0,
        obstruction: None,
        undecided: Vec::new(),
    };
    if let Some(n) = res {
        if n >= b.trunc() {
            sol.undecided.push(n);
        } else if b.coeff(n).is_zero() {
            sol.homogeneous_dim = 1;
        } else {
            sol.obstruction = Some(n);
            return Ok(sol);
        }
    }
    let qs = Scalar::int(q as i64);
    let coeffs = b
        .terms()
        .map(|(n, c)| {
            if c.is_zero() {
                return Ok(Scalar::zero());
            }
            Ok(c / &(&qs.pow(n)? - a))
        })
        .collect::<Result<Vec<_>>>()?;
    let start = b.valuation().unwrap_or(0);
    sol.particular = Some(if b.is_zero() {
        LaurentSeries::zero(b.trunc())
    } else {
        LaurentSeries::new(start, coeffs, b.trunc())
    });
    Ok(sol)
}

/// Result of [`verify_system`]: when `ok`, the residual vanishes below `z^order`;
/// otherwise `order` is the exponent of its first nonzero coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    pub order: i64,
}

/// Check `U(mz) = A(z) U(z)` to the precision the inputs allow.
pub fn verify_system(
    a: &Mat<LaurentSeries>,
    u: &Mat<LaurentSeries>,
    m: u64,
) -> Result<Verification> {
    if !a.is_square() || a.cols() != u.rows() {
        return Err(Error::Dimension("system and solution shapes differ".into()));
    }
    let lhs = u.map(|e| scale_arg(e, m));
    let res = lhs.sub(&a.mul(u)?)?;
    let bad = res.entries().filter_map(LaurentSeries::valuation).min();
    Ok(match bad {
        Some(v) => Verification {
            ok: false,
            order: v,
        },
        None => Verification {
            ok: true,
            order: res
                .entries()
                .map(LaurentSeries::trunc)
                .min()
                .unwrap_or(EXACT),
        },
    })
}

/// Outcome of [`solve_system_regular`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularSolution {
    /// Independent solution vectors.
    pub solutions: Vec<Vec<LaurentSeries>>,
    /// Exponents `n` with `q^n` an eigenvalue of `A(0)`.
    pub resonances: Vec<i64>,
}

/// Power-series solutions of `Y(qz) = A(z) Y(z)` for `A` holomorphic at 0
/// with `A(0)` invertible. Free coefficients at resonances are set to 0.
pub fn solve_system_regular(a: &Mat<LaurentSeries>, q: u64, order: i64) -> Result<RegularSolution> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Dimension("system matrix must be square".into()));
    }
    if q < 2 {
        return Err(Error::InvalidArgument("q must be at least 2".into()));
    }
    if a.entries().any(|e| e.valuation().is_some_and(|v| v < 0)) {
        return Err(Error::Precondition(
            "A has a pole at 0; use verify_system for such systems".into(),
        ));
    }
    let n = a.rows();
    let a0 = a.map(|e| e.coeff(0));
    if rank(&a0) < n {
        return Err(Error::Precondition(
            "A(0) is singular; use verify_system for such systems".into(),
        ));
    }
    let t = a
        .entries()
        .map(LaurentSeries::trunc)
        .min()
        .unwrap_or(EXACT)
        .min(order);
    let coeff_mats: Vec<Mat<Scalar>> = (0..t).map(|m| a.map(|e| e.coeff(m))).collect();

    // Each partial solution is its list of vector coefficients Y_0 .. Y_{k-1}.
    let mut sols: Vec<Vec<Vec<Scalar>>> = Vec::new();
    let mut resonances = Vec::new();
    let qs = Scalar::int(q as i64);
    for k in 0..t {
        let qk = qs.pow(k)?;
        let mk = Mat::from_fn(n, n, |i, j| {
            let d = if i == j { qk.clone() } else { Scalar::zero() };
            &d - a0.get(i, j)
        });
        let rhs: Vec<Vec<Scalar>> = sols
            .iter()
            .map(|s| {
                let mut acc = vec![Scalar::zero(); n];
                for m in 1..=k as usize {
                    let y = &s[k as usize - m];
                    if y.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    for (acc_i, v) in acc.iter_mut().zip(coeff_mats[m].mul_vec(y).expect("shape")) {
                        *acc_i += &v;
                    }
                }
                acc
            })
            .collect();
        let kernel = nullspace(&mk);
        if kernel.is_empty() {
            for (s, r) in sols.iter_mut().zip(&rhs) {
                s.push(solve(&mk, r).expect("invertible"));
            }
            continue;
        }
        resonances.push(k);
        // Combinations of partial solutions whose right-hand side lies in the image.
        let transpose = Mat::from_fn(n, n, |i, j| mk.get(j, i).clone());
        let left = nullspace(&transpose);
        let constraints = Mat::from_fn(left.len(), sols.len(), |w, s| {
            left[w]
                .iter()
                .zip(&rhs[s])
                .fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y))
        });
        let combos = if sols.is_empty() {
            Vec::new()
        } else if left.is_empty() {
            (0..sols.len()).map(|s| unit(sols.len(), s)).collect()
        } else {
            nullspace(&constraints)
        };
        let mut next = Vec::new();
        for c in combos {
            let mut hist = vec![vec![Scalar::zero(); n]; k as usize];
            let mut r = vec![Scalar::zero(); n];
            for (cs, (s, rs)) in c.iter().zip(sols.iter().zip(&rhs)) {
                if cs.is_zero() {
                    continue;
                }
                for (h, y) in hist.iter_mut().zip(s) {
                    for (hi, yi) in h.iter_mut().zip(y) {
                        *hi += &(cs * yi);
                    }
                }
                for (ri, v) in r.iter_mut().zip(rs) {
                    *ri += &(cs * v);
                }
            }
            hist.push(solve(&mk, &r).expect("constraint guarantees consistency"));
            next.push(hist);
        }
        for v in kernel {
            let mut hist = vec![vec![Scalar::zero(); n]; k as usize];
            hist.push(v);
            next.push(hist);
        }
        sols = next;
    }
    let solutions = sols
        .into_iter()
        .map(|s| {
            (0..n)
                .map(|i| LaurentSeries::new(0, s.iter().map(|y| y[i].clone()).collect(), t))
                .collect()
        })
        .collect();
    Ok(RegularSolution {
        solutions,
        resonances,
    })
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n)
        .map(|j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ser(start: i64, cs: &[i64], t: i64) -> LaurentSeries {
        LaurentSeries::new(start, cs.iter().map(|&c| Scalar::int(c)).collect(), t)
    }

    #[test]
    fn scalar_hand_cases() {
        let one = LaurentSeries::one();
        let s = solve_scalar_first_order(&Scalar::int(3), &one, 2).unwrap();
        assert_eq!(
            s.particular.unwrap(),
            LaurentSeries::constant(Scalar::frac(-1, 2), EXACT)
        );
        assert!(s.resonances.is_empty());

        let s = solve_scalar_first_order(&Scalar::int(2), &LaurentSeries::z(), 2).unwrap();
        assert_eq!(s.particular, None);
        assert_eq!(s.obstruction, Some(1));

        let s = solve_scalar_first_order(&Scalar::one(), &LaurentSeries::zero(EXACT), 2).unwrap();
        assert!(s.particular.unwrap().is_zero());
        assert_eq!((s.homogeneous_dim, s.resonances), (1, vec![0]));
    }

    #[test]
    fn negative_resonance() {
        let s = solve_scalar_first_order(&Scalar::frac(1, 4), &ser(-3, &[1, 0, 1], 5), 2).unwrap();
        assert_eq!(s.resonances, vec![-2]);
        assert_eq!(s.homogeneous_dim, 1);
    }

    #[test]
    fn unipotent_system() {
        let a = Mat::from_rows(vec![
            vec![LaurentSeries::one(), LaurentSeries::z()],
            vec![LaurentSeries::zero(EXACT), LaurentSeries::one()],
        ])
        .unwrap();
        let r = solve_system_regular(&a, 2, 10).unwrap();
        assert_eq!(r.solutions.len(), 2);
        assert_eq!(r.resonances, vec![0]);
        let second = &r.solutions[1];
        assert_eq!(second[0].truncate(10), LaurentSeries::z().truncate(10));
        assert_eq!(second[1].coeff(0), Scalar::one());
    }

    #[test]
    fn diagonal_system_resonates() {
        let a = Mat::from_rows(vec![
            vec![LaurentSeries::one(), LaurentSeries::zero(EXACT)],
            vec![
                LaurentSeries::zero(EXACT),
                LaurentSeries::constant(Scalar::int(3), EXACT),
            ],
        ])
        .unwrap();
        let r = solve_system_regular(&a, 3, 6).unwrap();
        assert_eq!(r.resonances, vec![0, 1]);
        assert_eq!(r.solutions[1][1].valuation(), Some(1));
        let u = Mat::from_fn(2, 2, |i, j| r.solutions[j][i].clone());
        assert!(verify_system(&a, &u, 3).unwrap().ok);
    }

    #[test]
    fn pole_rejected() {
        let a = Mat::from_rows(vec![vec![ser(-1, &[1], EXACT)]]).unwrap();
        assert!(matches!(
            solve_system_regular(&a, 2, 5),
            Err(Error::Precondition(_))
        ));
    }
}
