//! Difference systems `φ(Y) = AY` over the elliptic function field, where
//! `φ` is the pullback along multiplication by an integer.

mod eigen;
mod verdict;

use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{CurveParams, EllFn, EllFnRepr, Scalar};
use crate::isogeny::{g_element, pullback};
use crate::laurent::{embed, scale_arg, verify_system, weierstrass_series, LaurentSeries, WeierstrassKind};
use crate::linalg::Mat;
use crate::{Error, Result};

pub use eigen::{char_poly, common_eigenvector, gaussian_roots, Eigenvector};
pub use verdict::{order_one_verdict, LabeledPoint, OrderOneData, VerdictOrderOne};

/// `φ(Y) = A·Y` with `φ = pullback(·, scale)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffSystem {
    a: Mat<EllFn>,
    scale: u64,
    curve: Arc<CurveParams>,
}

impl DiffSystem {
    /// Checks squareness, a common curve, `scale ≥ 2` and `det A ≠ 0`.
    pub fn new(a: Mat<EllFn>, scale: u64) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::Dimension("system matrix must be square and nonempty".into()));
        }
        if scale < 2 {
            return Err(Error::InvalidArgument(format!("operator scale {scale} must be >= 2")));
        }
        let curve = a.get(0, 0).curve().clone();
        if a.entries().any(|e| **e.curve() != *curve) {
            return Err(Error::CurveMismatch);
        }
        if a.det()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(DiffSystem { a, scale, curve })
    }

    pub fn matrix(&self) -> &Mat<EllFn> {
        &self.a
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn curve(&self) -> &Arc<CurveParams> {
        &self.curve
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Entrywise Laurent expansion, truncated at `order`.
    pub fn embed(&self, order: i64) -> Result<Mat<LaurentSeries>> {
        self.a.try_map(|e| embed(e, order))
    }
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    curve: CurveParams,
    scale: u64,
    #[serde(rename = "A")]
    a: Vec<Vec<EllFnRepr>>,
}

impl Serialize for DiffSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemRepr {
            curve: (*self.curve).clone(),
            scale: self.scale,
            a: self.a.map(EllFn::to_repr).to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SystemRepr::deserialize(d)?;
        let curve = Arc::new(CurveParams::new(r.curve.g2, r.curve.g3).map_err(D::Error::custom)?);
        let rows = r
            .a
            .into_iter()
            .map(|row| row.into_iter().map(|e| EllFn::from_repr(e, curve.clone())).collect())
            .collect();
        let a = Mat::from_rows(rows).map_err(D::Error::custom)?;
        DiffSystem::new(a, r.scale).map_err(D::Error::custom)
    }
}

/// Entrywise pullback along multiplication by `m`.
pub fn pullback_mat(p: &Mat<EllFn>, m: u64) -> Result<Mat<EllFn>> {
    p.try_map(|e| pullback(e, m))
}

/// Companion system of `a_0 φⁿ(u) + a_1 φⁿ⁻¹(u) + … + a_n u = 0`: ones on
/// the superdiagonal, last row `(−a_n/a_0, …, −a_1/a_0)`.
pub fn companion(coeffs: &[EllFn], scale: u64) -> Result<DiffSystem> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidArgument("need at least a_0 and a_1".into()));
    }
    let n = coeffs.len() - 1;
    let (a0, an) = (&coeffs[0], &coeffs[n]);
    if a0.is_zero() || an.is_zero() {
        return Err(Error::InvalidArgument("a_0 and a_n must be nonzero".into()));
    }
    let curve = a0.curve().clone();
    let inv0 = a0.inv()?;
    let mut m = Mat::from_fn(n, n, |i, j| {
        if j == i + 1 {
            EllFn::one(&curve)
        } else {
            EllFn::zero(&curve)
        }
    });
    for j in 0..n {
        m.set(n - 1, j, -&(&coeffs[n - j] * &inv0));
    }
    DiffSystem::new(m, scale)
}

/// `A' = φ(P)⁻¹·A·P`.
pub fn gauge(sys: &DiffSystem, p: &Mat<EllFn>) -> Result<DiffSystem> {
    if p.rows() != sys.dim() || !p.is_square() {
        return Err(Error::Dimension("gauge matrix shape".into()));
    }
    let phi_p = pullback_mat(p, sys.scale)?;
    let a = phi_p.inverse()?.mul(&sys.a)?.mul(p)?;
    DiffSystem::new(a, sys.scale)
}

/// `A_[t] = φ^{t−1}(A)⋯φ(A)·A`, a system for `φᵗ`.
pub fn iterate_system(sys: &DiffSystem, t: u32) -> Result<DiffSystem> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be >= 1".into()));
    }
    let mut acc = sys.a.clone();
    for k in 1..t {
        let shifted = pullback_mat(&sys.a, sys.scale.pow(k))?;
        acc = shifted.mul(&acc)?;
    }
    DiffSystem::new(acc, sys.scale.pow(t))
}

/// `τ(P) = A⁻¹·φ(P)`.
pub fn tau_step(p: &Mat<EllFn>, sys: &DiffSystem) -> Result<Mat<EllFn>> {
    if p.rows() != sys.dim() {
        return Err(Error::Dimension("tau_step shapes".into()));
    }
    sys.a.inverse()?.mul(&pullback_mat(p, sys.scale)?)
}

/// A `φ`-system and a `ψ`-system on the same curve, `gcd(p, q) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompatPair {
    pub phi: DiffSystem,
    pub psi: DiffSystem,
}

impl CompatPair {
    pub fn new(phi: DiffSystem, psi: DiffSystem) -> Result<Self> {
        if phi.dim() != psi.dim() {
            return Err(Error::Dimension("systems of different size".into()));
        }
        if phi.curve != psi.curve {
            return Err(Error::CurveMismatch);
        }
        if phi.scale.gcd(&psi.scale) != 1 {
            return Err(Error::Precondition(format!(
                "scales {} and {} are not coprime",
                phi.scale, psi.scale
            )));
        }
        Ok(CompatPair { phi, psi })
    }
}

/// Exact test of `φ(A_ψ)·A_φ = ψ(A_φ)·A_ψ`.
pub fn isomonodromy_check(pair: &CompatPair) -> Result<bool> {
    let (a, b) = (&pair.phi, &pair.psi);
    let lhs = pullback_mat(&b.a, a.scale)?.mul(&a.a)?;
    let rhs = pullback_mat(&a.a, b.scale)?.mul(&b.a)?;
    Ok(lhs == rhs)
}

/// Outcome of [`h_matrix`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HMatrix {
    Constant { h: Mat<Scalar>, order: i64 },
    /// First entry (row, column) with a nonconstant term, and that term's exponent.
    NotConstant { entry: (usize, usize), order: i64 },
}

/// `h = ψ(U)⁻¹·A_ψ·U` in series; constant iff every entry is a degree-0
/// series to the available precision.
pub fn h_matrix(u: &Mat<LaurentSeries>, a_psi: &DiffSystem, p: u64) -> Result<HMatrix> {
    if !u.is_square() || u.rows() != a_psi.dim() {
        return Err(Error::Dimension("U and A_psi shapes differ".into()));
    }
    let order = u.entries().map(LaurentSeries::trunc).min().unwrap_or(crate::laurent::EXACT);
    let order = order.min(crate::laurent::EXACT - 1).max(8);
    let psi_u = u.map(|e| scale_arg(e, p));
    let inv = psi_u
        .inverse()
        .map_err(|e| Error::Precision(format!("U is not invertible to truncation: {e}")))?;
    let h = inv.mul(&a_psi.embed(order)?)?.mul(u)?;
    let prec = h.entries().map(LaurentSeries::trunc).min().unwrap_or(0);
    if prec <= 0 {
        return Err(Error::Precision(format!("h known only below z^{prec}")));
    }
    let mut out = Vec::with_capacity(h.rows());
    for i in 0..h.rows() {
        let mut row = Vec::with_capacity(h.cols());
        for j in 0..h.cols() {
            let e = h.get(i, j);
            if let Some((k, _)) = e.terms().find(|(k, c)| *k != 0 && !c.is_zero()) {
                return Ok(HMatrix::NotConstant { entry: (i, j), order: k });
            }
            row.push(e.coeff(0));
        }
        out.push(row);
    }
    Ok(HMatrix::Constant { h: Mat::from_rows(out)?, order: prec })
}

/// `A = [[m, g_m], [0, 1]]` with fundamental matrix `U = [[z, ζ], [0, 1]]`,
/// checked by series substitution before returning.
pub fn pv_example_system(
    curve: &Arc<CurveParams>,
    m: u64,
    order: i64,
) -> Result<(DiffSystem, Mat<LaurentSeries>)> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m = {m} must be >= 2")));
    }
    let g = g_element(curve, m)?;
    let a = Mat::from_rows(vec![
        vec![EllFn::constant(Scalar::int(m as i64), curve), g],
        vec![EllFn::zero(curve), EllFn::one(curve)],
    ])?;
    let sys = DiffSystem::new(a, m)?;
    let zeta = weierstrass_series(curve, WeierstrassKind::Zeta, order)?;
    let exact = |c: i64, e: i64| LaurentSeries::monomial(Scalar::int(c), e, crate::laurent::EXACT);
    let u = Mat::from_rows(vec![vec![exact(1, 1), zeta], vec![LaurentSeries::zero(crate::laurent::EXACT), exact(1, 0)]])?;
    let v = verify_system(&sys.embed(order)?, &u, m)?;
    assert!(v.ok, "ζ(mz) = mζ(z) + g_m fails to order {}", v.order);
    Ok((sys, u))
}
