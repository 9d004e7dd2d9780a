//! Floating-point ℘ from lattice sums against the exact Laurent series for
//! the same lattice, plus Legendre's relation.
use std::sync::Arc;

use ellipdiff::exact::{CurveParams, Scalar};
use ellipdiff::laurent::{weierstrass_series, WeierstrassKind};
use ellipdiff::numeval::{eta_values, invariants_from_periods, wp, NumTol, PeriodPair};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let l = PeriodPair::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0))?;
    let tol = NumTol::default();
    let (g2, g3) = invariants_from_periods(&l, &tol)?;
    println!("g2 = {g2}, g3 = {g3}");
    // rational approximations of the invariants feed the exact layer
    let curve = Arc::new(CurveParams::new(Scalar::from_complex(g2)?, Scalar::from_complex(g3)?)?);
    let series = weierstrass_series(&curve, WeierstrassKind::Wp, 40)?;
    for z in [Complex64::new(0.1, 0.0), Complex64::new(0.05, 0.1), Complex64::new(-0.08, 0.07)] {
        let a = wp(z, &l, &tol)?;
        let b = series.eval_f64(z);
        println!("z = {z}: lattice {a:.12}, series {b:.12}, |diff| = {:e}", (a - b).norm());
    }
    let (e1, e2) = eta_values(&l, &tol)?;
    let defect = e1 * l.w2() - e2 * l.w1() - Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    println!("eta1 = {e1}, eta2 = {e2}, Legendre defect = {:e}", defect.norm());
    Ok(())
}
