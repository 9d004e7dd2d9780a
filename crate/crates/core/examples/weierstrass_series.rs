//! Laurent expansions of ℘, ℘', ζ, σ and the relation ℘'² = 4℘³ − g₂℘ − g₃.
use ellipdiff::exact::{CurveParams, Scalar};
use ellipdiff::laurent::{weierstrass_series, WeierstrassKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curve = CurveParams::from_ints(4, 0)?;
    let order = 20;
    for kind in [WeierstrassKind::Wp, WeierstrassKind::WpPrime, WeierstrassKind::Zeta, WeierstrassKind::Sigma] {
        println!("{kind:?}: {}", weierstrass_series(&curve, kind, order)?);
    }
    let wp = weierstrass_series(&curve, WeierstrassKind::Wp, order)?;
    let dwp = weierstrass_series(&curve, WeierstrassKind::WpPrime, order)?;
    let rhs = wp
        .pow(3)
        .scale(&Scalar::int(4))
        .sub(&wp.scale(&curve.g2))
        .sub(&ellipdiff::laurent::LaurentSeries::constant(curve.g3.clone(), ellipdiff::laurent::EXACT));
    let residual = dwp.mul(&dwp).sub(&rhs);
    println!("residual of the differential equation: zero below z^{} = {}", residual.trunc(), residual.is_zero());
    Ok(())
}
