//! Floating-point ℘, ℘', ζ, σ, η and (g₂, g₃) from a period pair.
//!
//! Each row `z + nω₂ + ℤω₁` of the lattice sum is summed in closed form
//! (`Σ (u+m)⁻² = π² csc²(πu)` and its relatives), so the remaining sum over
//! rows converges geometrically once the basis is reduced (`Im τ ≥ √3/2`).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::laurent::WeierstrassKind;
use crate::{Error, Result};

/// Complex number in JSON form `{"re": .., "im": ..}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C64 {
    fn from(z: Complex64) -> Self {
        C64 { re: z.re, im: z.im }
    }
}

impl From<C64> for Complex64 {
    fn from(z: C64) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// An oriented basis of a lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodPair {
    w1: Complex64,
    w2: Complex64,
}

impl PeriodPair {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        for w in [w1, w2] {
            let n = w.norm();
            if !n.is_finite() || !(1e-6..=1e6).contains(&n) {
                return Err(Error::InvalidArgument(format!("period {w} outside 1e±6")));
            }
        }
        let tau = w2 / w1;
        if !(tau.im > 1e-12 * tau.norm()) {
            return Err(Error::InvalidArgument(format!(
                "periods ({w1}, {w2}) are not an oriented basis (Im τ = {})",
                tau.im
            )));
        }
        Ok(PeriodPair { w1, w2 })
    }

    pub fn w1(&self) -> Complex64 {
        self.w1
    }

    pub fn w2(&self) -> Complex64 {
        self.w2
    }

    /// A basis of the same lattice with `|Re τ| ≤ 1/2`, `|τ| ≥ 1`.
    pub fn reduced(&self) -> PeriodPair {
        let (mut a, mut b) = (self.w1, self.w2);
        for _ in 0..200 {
            if b.norm_sqr() < a.norm_sqr() {
                std::mem::swap(&mut a, &mut b);
            }
            let k = (b / a).re.round();
            if k == 0.0 {
                break;
            }
            b -= a * k;
        }
        if (b / a).im < 0.0 {
            b = -b;
        }
        PeriodPair { w1: a, w2: b }
    }

    /// Real coordinates `(s, t)` with `z = s·ω₁ + t·ω₂`.
    fn coords(&self, z: Complex64) -> (f64, f64) {
        let det = (self.w1.conj() * self.w2).im;
        let s = (z.conj() * self.w2).im / det;
        let t = (self.w1.conj() * z).im / det;
        (s, t)
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn distance_to_lattice(&self, z: Complex64) -> f64 {
        let r = self.reduced();
        let (s, t) = r.coords(z);
        let (s0, t0) = (s.round(), t.round());
        let mut best = f64::INFINITY;
        for ds in -1..=1 {
            for dt in -1..=1 {
                let w = r.w1 * (s0 + ds as f64) + r.w2 * (t0 + dt as f64);
                best = best.min((z - w).norm());
            }
        }
        best
    }
}

/// Absolute tolerance and the number of lattice rows summed on each side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumTol {
    pub abs_tol: f64,
    pub lattice_cutoff: u32,
}

impl Default for NumTol {
    fn default() -> Self {
        NumTol {
            abs_tol: 1e-12,
            lattice_cutoff: 30,
        }
    }
}

impl NumTol {
    pub fn new(abs_tol: f64, lattice_cutoff: u32) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance {abs_tol} must be > 0")));
        }
        if lattice_cutoff < 20 {
            return Err(Error::InvalidArgument(format!("cutoff {lattice_cutoff} must be >= 20")));
        }
        Ok(NumTol { abs_tol, lattice_cutoff })
    }
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `e^{2πix}` or `e^{−2πix}`, whichever has modulus ≤ 1.
fn nome(x: Complex64) -> (Complex64, f64) {
    if x.im >= 0.0 {
        ((2.0 * PI * I * x).exp(), 1.0)
    } else {
        ((-2.0 * PI * I * x).exp(), -1.0)
    }
}

/// `cot(πx)`, stable for large `|Im x|`.
fn cot_pi(x: Complex64) -> Complex64 {
    let (w, s) = nome(x);
    -I * s * (1.0 + w) / (1.0 - w)
}

/// `csc²(πx)`.
fn csc2_pi(x: Complex64) -> Complex64 {
    let (w, _) = nome(x);
    -4.0 * w / ((1.0 - w) * (1.0 - w))
}

/// `sin(πx)` relative to its dominant exponential is not needed; the σ
/// product uses `sin²(πu)/sin²(πnτ) = csc²(πnτ)·sin²(πu)` directly.
fn sin_pi(x: Complex64) -> Complex64 {
    (PI * x).sin()
}

struct Rows {
    l: PeriodPair,
    tau: Complex64,
    n: i64,
    tol: f64,
}

impl Rows {
    fn new(l: &PeriodPair, tol: &NumTol) -> Rows {
        let l = l.reduced();
        Rows {
            tau: l.w2 / l.w1,
            l,
            n: tol.lattice_cutoff as i64,
            tol: tol.abs_tol,
        }
    }

    fn k(&self) -> Complex64 {
        PI / self.l.w1
    }

    /// Eisenstein-summed `Σ_n Σ'_m (mω₁ + nω₂)⁻²`.
    fn g2e(&self) -> Complex64 {
        let mut s = Complex64::new(1.0 / 3.0, 0.0);
        for n in 1..=self.n {
            s += 2.0 * csc2_pi(self.tau * n as f64);
        }
        self.k() * self.k() * s
    }

    /// Sum `f(row)` over `|n| ≤ N`, checking that the outermost rows are negligible.
    fn sum(&self, mut f: impl FnMut(i64) -> Complex64) -> Result<Complex64> {
        let mut s = f(0);
        let mut edge = 0.0f64;
        for n in 1..=self.n {
            let (a, b) = (f(n), f(-n));
            s += a + b;
            if n == self.n {
                edge = a.norm() + b.norm();
            }
        }
        if !s.is_finite() || edge > self.tol {
            return Err(Error::Precision(format!(
                "lattice sum not converged at cutoff {} (edge rows {edge:e})",
                self.n
            )));
        }
        Ok(s)
    }
}

fn check_pole(l: &PeriodPair, z: Complex64) -> Result<()> {
    let d = l.distance_to_lattice(z);
    if d < 1e-6 * l.w1.norm() {
        return Err(Error::Numeric(format!("z = {z} is within {d:e} of a lattice point")));
    }
    Ok(())
}

/// `(g₂, g₃) = (60 G₄, 140 G₆)` via the q-expansions of `E₄`, `E₆`.
pub fn invariants_from_periods(l: &PeriodPair, tol: &NumTol) -> Result<(Complex64, Complex64)> {
    let r = l.reduced();
    let tau = r.w2 / r.w1;
    let q = (2.0 * PI * I * tau).exp();
    let (mut e4, mut e6) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut qn = Complex64::new(1.0, 0.0);
    let big_n = tol.lattice_cutoff as u64;
    for n in 1..=big_n {
        qn *= q;
        let (s3, s5) = (1..=n)
            .filter(|d| n % d == 0)
            .fold((0.0, 0.0), |(a, b), d| (a + (d as f64).powi(3), b + (d as f64).powi(5)));
        e4 += qn * s3;
        e6 += qn * s5;
    }
    // tail: σ_k(n) ≤ n^{k+1}, so |Σ_{n>N}| ≤ Σ n⁶|q|ⁿ, bounded by a geometric series
    let aq = q.norm();
    let nn = (big_n + 1) as f64;
    let tail = 504.0 * nn.powi(6) * aq.powf(nn) / (1.0 - aq * ((nn + 1.0) / nn).powi(6)).max(1e-300);
    let w = r.w1;
    let g2 = (4.0 * PI.powi(4) / 3.0) * (1.0 + 240.0 * e4) / w.powi(4);
    let g3 = (8.0 * PI.powi(6) / 27.0) * (1.0 - 504.0 * e6) / w.powi(6);
    let scale = (8.0 * PI.powi(6) / 27.0) / w.norm().powi(6) + (4.0 * PI.powi(4) / 3.0) / w.norm().powi(4);
    if tail * scale > tol.abs_tol {
        return Err(Error::Precision(format!("Eisenstein tail {:e} above tolerance", tail * scale)));
    }
    Ok((g2, g3))
}

pub fn wp(z: Complex64, l: &PeriodPair, tol: &NumTol) -> Result<Complex64> {
    check_pole(l, z)?;
    let rows = Rows::new(l, tol);
    let (s, t) = rows.l.coords(z);
    let u = (z - rows.l.w1 * s.round() - rows.l.w2 * t.round()) / rows.l.w1;
    let k = rows.k();
    let s = rows.sum(|n| csc2_pi(u + rows.tau * n as f64))?;
    Ok(k * k * s - rows.g2e())
}

pub fn wp_prime(z: Complex64, l: &PeriodPair, tol: &NumTol) -> Result<Complex64> {
    check_pole(l, z)?;
    let rows = Rows::new(l, tol);
    let (s, t) = rows.l.coords(z);
    let u = (z - rows.l.w1 * s.round() - rows.l.w2 * t.round()) / rows.l.w1;
    let k = rows.k();
    let s = rows.sum(|n| {
        let x = u + rows.tau * n as f64;
        csc2_pi(x) * cot_pi(x)
    })?;
    Ok(-2.0 * k * k * k * s)
}

pub fn zeta(z: Complex64, l: &PeriodPair, tol: &NumTol) -> Result<Complex64> {
    check_pole(l, z)?;
    let rows = Rows::new(l, tol);
    let u = z / rows.l.w1;
    let s = rows.sum(|n| {
        let c = cot_pi(u + rows.tau * n as f64);
        if n == 0 {
            c
        } else {
            c - cot_pi(rows.tau * n as f64)
        }
    })?;
    Ok(rows.k() * s + rows.g2e() * z)
}

pub fn sigma(z: Complex64, l: &PeriodPair, tol: &NumTol) -> Result<Complex64> {
    let rows = Rows::new(l, tol);
    let u = z / rows.l.w1;
    let s2 = sin_pi(u) * sin_pi(u);
    let mut prod = Complex64::new(1.0, 0.0);
    let mut last = 0.0;
    for n in 1..=rows.n {
        let f = s2 * csc2_pi(rows.tau * n as f64);
        prod *= 1.0 - f;
        last = f.norm();
    }
    if last * prod.norm() > rows.tol || !prod.is_finite() {
        return Err(Error::Precision(format!("σ product not converged (last factor {last:e})")));
    }
    Ok(sin_pi(u) / rows.k() * (rows.g2e() * z * z / 2.0).exp() * prod)
}

/// Dispatch on the function kind.
pub fn eval(kind: WeierstrassKind, z: Complex64, l: &PeriodPair, tol: &NumTol) -> Result<Complex64> {
    match kind {
        WeierstrassKind::Wp => wp(z, l, tol),
        WeierstrassKind::WpPrime => wp_prime(z, l, tol),
        WeierstrassKind::Zeta => zeta(z, l, tol),
        WeierstrassKind::Sigma => sigma(z, l, tol),
    }
}

/// Quasi-period of ζ along `ω`, from one probe point.
pub fn eta_at(omega: Complex64, probe: Complex64, l: &PeriodPair, tol: &NumTol) -> Result<Complex64> {
    Ok(zeta(probe + omega, l, tol)? - zeta(probe, l, tol)?)
}

/// `(η₁, η₂)` for the basis `(ω₁, ω₂)`; two probes must agree to `10·abs_tol`.
pub fn eta_values(l: &PeriodPair, tol: &NumTol) -> Result<(Complex64, Complex64)> {
    let probes = [(0.31, 0.27), (0.13, 0.41), (0.44, 0.09), (0.21, 0.37), (0.37, 0.18)];
    let mut got: Vec<(Complex64, Complex64)> = Vec::new();
    for (s, t) in probes {
        let z0 = l.w1 * s + l.w2 * t;
        let e1 = eta_at(l.w1, z0, l, tol);
        let e2 = eta_at(l.w2, z0, l, tol);
        match (e1, e2) {
            (Ok(a), Ok(b)) => got.push((a, b)),
            (Err(Error::Numeric(_)), _) | (_, Err(Error::Numeric(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
        if got.len() == 2 {
            let (a, b) = (got[0], got[1]);
            let spread = (a.0 - b.0).norm().max((a.1 - b.1).norm());
            if spread > 10.0 * tol.abs_tol.max(1e-13 * a.0.norm().max(1.0)) {
                return Err(Error::Precision(format!("η probes disagree by {spread:e}")));
            }
            return Ok(a);
        }
    }
    Err(Error::Numeric("no usable probe points for η".into()))
}

/// `η₁ω₂ − η₂ω₁ − 2πi`; zero for an oriented basis.
pub fn legendre_defect(l: &PeriodPair, tol: &NumTol) -> Result<Complex64> {
    let (e1, e2) = eta_values(l, tol)?;
    Ok(e1 * l.w2 - e2 * l.w1 - 2.0 * PI * I)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lat(a: Complex64, b: Complex64) -> PeriodPair {
        PeriodPair::new(a, b).unwrap()
    }

    #[test]
    fn square_and_hexagonal() {
        let t = NumTol::default();
        let (g2, g3) = invariants_from_periods(&lat(c(1.0, 0.0), c(0.0, 1.0)), &t).unwrap();
        assert!(g3.norm() < 1e-9, "{g3}");
        assert!(g2.norm() > 1.0);
        let hex = c(0.5, 3f64.sqrt() / 2.0);
        let (g2, _) = invariants_from_periods(&lat(c(1.0, 0.0), hex), &t).unwrap();
        assert!(g2.norm() < 1e-9, "{g2}");
    }

    #[test]
    fn eisenstein_matches_direct_sum() {
        // brute-force Σ' ω⁻ᵏ over boxes of the (1, 2i) lattice; the box
        // truncation error is O(1/N²), removed by Richardson extrapolation
        let l = lat(c(1.0, 0.0), c(0.0, 2.0));
        let (g2, g3) = invariants_from_periods(&l, &NumTol::default()).unwrap();
        let boxsum = |n: i64, k: i32| {
            let mut s = c(0.0, 0.0);
            for a in -n..=n {
                for b in -n..=n {
                    if a != 0 || b != 0 {
                        s += c(a as f64, 2.0 * b as f64).powi(-k);
                    }
                }
            }
            s
        };
        let s4 = (4.0 * boxsum(200, 4) - boxsum(100, 4)) / 3.0;
        let s6 = boxsum(200, 6);
        assert!((g2 - 60.0 * s4).norm() < 1e-6, "{} vs {}", g2, 60.0 * s4);
        assert!((g3 - 140.0 * s6).norm() < 1e-8);
        assert!((g2.powi(3) - 27.0 * g3 * g3).norm() > 1.0);
    }

    #[test]
    fn wp_near_zero_and_differential_equation() {
        let l = lat(c(1.0, 0.0), c(0.3, 1.7));
        let t = NumTol::default();
        let (g2, g3) = invariants_from_periods(&l, &t).unwrap();
        for z in [c(0.21, 0.13), c(-0.4, 0.9), c(0.77, -0.31)] {
            let p = wp(z, &l, &t).unwrap();
            let dp = wp_prime(z, &l, &t).unwrap();
            let res = dp * dp - (4.0 * p * p * p - g2 * p - g3);
            assert!(res.norm() < 1e-8 * (1.0 + p.norm().powi(3)), "{res}");
        }
    }

    #[test]
    fn symmetries() {
        let l = lat(c(1.0, 0.0), c(0.0, 2.0));
        let t = NumTol::default();
        let z = c(0.23, 0.41);
        assert!((zeta(-z, &l, &t).unwrap() + zeta(z, &l, &t).unwrap()).norm() < 1e-12);
        assert!((wp(z + l.w1(), &l, &t).unwrap() - wp(z, &l, &t).unwrap()).norm() < 1e-10);
        assert!((sigma(-z, &l, &t).unwrap() + sigma(z, &l, &t).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn sigma_logderivative_is_zeta() {
        let l = lat(c(1.0, 0.0), c(0.2, 1.1));
        let t = NumTol::default();
        let z = c(0.3, 0.2);
        let h = 1e-5;
        let d = (sigma(z + h, &l, &t).unwrap().ln() - sigma(z - h, &l, &t).unwrap().ln()) / (2.0 * h);
        assert!((d - zeta(z, &l, &t).unwrap()).norm() < 1e-7);
    }

    #[test]
    fn legendre_relation() {
        let l = lat(c(1.0, 0.0), c(0.0, 2.0));
        let t = NumTol::default();
        assert!(legendre_defect(&l, &t).unwrap().norm() < 1e-10);
        let (e1, e2) = eta_values(&l, &t).unwrap();
        let e12 = eta_at(l.w1() + l.w2(), c(0.17, 0.33), &l, &t).unwrap();
        assert!((e12 - e1 - e2).norm() < 1e-10);
    }

    #[test]
    fn errors() {
        let l = lat(c(1.0, 0.0), c(0.0, 1.0));
        let t = NumTol::default();
        assert!(matches!(wp(c(1.0, 1.0), &l, &t), Err(Error::Numeric(_))));
        assert!(PeriodPair::new(c(1.0, 0.0), c(2.0, 0.0)).is_err());
        assert!(PeriodPair::new(c(0.0, 1.0), c(1.0, 0.0)).is_err());
        assert!(NumTol::new(0.0, 30).is_err());
        assert!(NumTol::new(1e-10, 5).is_err());
    }
}
