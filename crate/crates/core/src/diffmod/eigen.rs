//! Exact common eigenvectors of commuting scalar matrices over ℚ(i).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::exact::{Poly, Rational, Scalar};
use crate::linalg::{nullspace, solve, Mat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Eigenvector {
    /// `A v = λ v`, `B v = μ v`; first nonzero entry of `v` is 1.
    Found {
        vector: Vec<Scalar>,
        lambda_a: Scalar,
        lambda_b: Scalar,
    },
    /// No eigenvalue in ℚ(i): `factor` has no roots there. It is
    /// irreducible when `degree ≤ 3`.
    NeedsExtension { factor: Poly, degree: usize, irreducible: bool },
}

/// `det(x·I − A)`, by Faddeev–LeVerrier.
pub fn char_poly(a: &Mat<Scalar>) -> Result<Poly> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let n = a.rows();
    let id = Mat::identity(n, &Scalar::one());
    let mut c = vec![Scalar::zero(); n + 1];
    c[n] = Scalar::one();
    let mut m = Mat::from_fn(n, n, |_, _| Scalar::zero());
    for k in 1..=n {
        m = a.mul(&m)?.add(&id.scale(&c[n - k + 1]))?;
        let am = a.mul(&m)?;
        let tr = (0..n).fold(Scalar::zero(), |acc, i| &acc + am.get(i, i));
        c[n - k] = -&(&tr / &Scalar::int(k as i64));
    }
    Ok(Poly::new(c))
}

/// Distinct roots of `p` in ℚ(i), ordered by ascending real part then
/// descending imaginary part, and the root-free cofactor of the square-free
/// part. Numeric root-finding only proposes candidates; each is checked exactly.
pub fn gaussian_roots(p: &Poly) -> Result<(Vec<Scalar>, Poly)> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("roots of the zero polynomial".into()));
    }
    let mut rest = p.div_exact(&p.gcd(&p.derivative()))?.monic();
    let mut roots = Vec::new();
    loop {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let g = gaussian_integral(&rest);
        let lead = g.leading().unwrap().to_complex();
        let mut found = false;
        for z in durand_kerner(&rest) {
            let w = lead * z;
            if !(w.re.is_finite() && w.im.is_finite()) || w.norm() > 1e15 {
                continue;
            }
            let cand = &Scalar::gauss(w.re.round() as i64, w.im.round() as i64) / &g.leading().unwrap().clone();
            if rest.eval(&cand).is_zero() {
                rest = rest.div_exact(&Poly::new(vec![-&cand, Scalar::one()]))?;
                roots.push(cand);
                found = true;
                break;
            }
        }
        if !found {
            break;
        }
    }
    roots.sort_by(|a, b| a.re().cmp(b.re()).then_with(|| b.im().cmp(a.im())));
    Ok((roots, rest))
}

/// `p` scaled by the lcm of its coefficient denominators, so it lies in ℤ[i][x].
fn gaussian_integral(p: &Poly) -> Poly {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.re().denom()).lcm(c.im().denom());
    }
    p.scale(&Scalar::real(Rational::from_integer(l)))
}

fn durand_kerner(p: &Poly) -> Vec<Complex64> {
    let n = p.degree().unwrap_or(0);
    let cs: Vec<Complex64> = p.monic().coeffs().iter().map(Scalar::to_complex).collect();
    let eval = |z: Complex64| cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let bound = 1.0 + cs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound.min(1e6)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

fn sub_lambda(a: &Mat<Scalar>, l: &Scalar) -> Result<Mat<Scalar>> {
    a.sub(&Mat::identity(a.rows(), &Scalar::one()).scale(l))
}

fn normalize(mut v: Vec<Scalar>) -> Vec<Scalar> {
    if let Some(f) = v.iter().find(|x| !x.is_zero()).cloned() {
        let inv = f.inv().expect("nonzero");
        for x in &mut v {
            *x = &*x * &inv;
        }
    }
    v
}

fn extension(factor: Poly) -> Eigenvector {
    let degree = factor.degree().unwrap_or(0);
    Eigenvector::NeedsExtension {
        factor,
        degree,
        irreducible: degree <= 3,
    }
}

/// A common eigenvector of commuting `A`, `B`, exact over ℚ(i).
pub fn common_eigenvector(a: &Mat<Scalar>, b: &Mat<Scalar>) -> Result<Eigenvector> {
    if !a.is_square() || a.rows() != b.rows() || !b.is_square() {
        return Err(Error::Dimension("A and B must be square of the same size".into()));
    }
    if a.mul(b)? != b.mul(a)? {
        return Err(Error::Precondition("A and B do not commute".into()));
    }
    let n = a.rows();
    let (lams, cof_a) = gaussian_roots(&char_poly(a)?)?;
    if lams.is_empty() {
        return Ok(extension(cof_a));
    }
    let mut last_cof = None;
    for lam in lams {
        let basis = nullspace(&sub_lambda(a, &lam)?);
        let k = basis.len();
        let v = Mat::from_fn(n, k, |i, j| basis[j][i].clone());
        // B preserves ker(A − λ): write B·v_j in the basis
        let mut cols = Vec::with_capacity(k);
        for bv in &basis {
            let img = b.mul_vec(bv)?;
            cols.push(solve(&v, &img).ok_or_else(|| {
                Error::Precondition("eigenspace of A is not B-stable".into())
            })?);
        }
        let c = Mat::from_fn(k, k, |i, j| cols[j][i].clone());
        let (mus, cof_c) = gaussian_roots(&char_poly(&c)?)?;
        let Some(mu) = mus.into_iter().next() else {
            last_cof = Some(cof_c);
            continue;
        };
        let w = nullspace(&sub_lambda(&c, &mu)?).remove(0);
        let vec = normalize(v.mul_vec(&w)?);
        let av = a.mul_vec(&vec)?;
        let bv = b.mul_vec(&vec)?;
        let ok = vec.iter().zip(&av).all(|(x, y)| &(x * &lam) == y)
            && vec.iter().zip(&bv).all(|(x, y)| &(x * &mu) == y);
        if !ok {
            return Err(Error::Numeric("eigenvector failed exact verification".into()));
        }
        return Ok(Eigenvector::Found {
            vector: vec,
            lambda_a: lam,
            lambda_b: mu,
        });
    }
    Ok(extension(last_cof.expect("some eigenvalue was tried")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat<Scalar> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn char_poly_2x2() {
        // x² − 5x − 2 for [[1,2],[3,4]]
        assert_eq!(char_poly(&m(&[&[1, 2], &[3, 4]])).unwrap(), Poly::from_ints(&[-2, -5, 1]));
    }

    #[test]
    fn rotation_needs_i() {
        let a = m(&[&[0, -1], &[1, 0]]);
        let id = m(&[&[1, 0], &[0, 1]]);
        match common_eigenvector(&a, &id).unwrap() {
            Eigenvector::Found { vector, lambda_a, .. } => {
                assert_eq!(vector, vec![Scalar::one(), Scalar::gauss(0, -1)]);
                assert_eq!(lambda_a, Scalar::i());
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn identity_gives_e1() {
        let id = m(&[&[1, 0], &[0, 1]]);
        match common_eigenvector(&id, &id).unwrap() {
            Eigenvector::Found { vector, .. } => assert_eq!(vector, vec![Scalar::one(), Scalar::zero()]),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn sqrt2_needs_extension() {
        let a = m(&[&[0, 2], &[1, 0]]);
        match common_eigenvector(&a, &a).unwrap() {
            Eigenvector::NeedsExtension { factor, irreducible, .. } => {
                assert_eq!(factor, Poly::from_ints(&[-2, 0, 1]));
                assert!(irreducible);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn rational_and_gaussian_roots() {
        // (2x − 1)(x − (1+2i))(x² + 3)
        let p = &(&Poly::from_ints(&[-1, 2]) * &Poly::new(vec![Scalar::gauss(-1, -2), Scalar::one()]))
            * &Poly::from_ints(&[3, 0, 1]);
        let (roots, cof) = gaussian_roots(&p).unwrap();
        assert_eq!(roots, vec![Scalar::frac(1, 2), Scalar::gauss(1, 2)]);
        assert_eq!(cof, Poly::from_ints(&[3, 0, 1]));
    }

    #[test]
    fn non_commuting_rejected() {
        assert!(common_eigenvector(&m(&[&[1, 1], &[0, 1]]), &m(&[&[1, 0], &[1, 1]])).is_err());
    }
}
