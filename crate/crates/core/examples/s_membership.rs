//! Is a series in K[z, 1/z, ζ]? ζ, ℘ and z℘ + 3ζ are; Σ n!·zⁿ is not.
use std::sync::Arc;

use ellipdiff::exact::{CurveParams, Scalar};
use ellipdiff::laurent::{s_membership, weierstrass_series, LaurentSeries, MembershipBounds, WeierstrassKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curve = Arc::new(CurveParams::from_ints(4, 0)?);
    let bounds = MembershipBounds { max_zeta_pow: 1, max_z_range: 1, max_pole_order: 3 };
    let order = 60;
    let zeta = weierstrass_series(&curve, WeierstrassKind::Zeta, order)?;
    let wp = weierstrass_series(&curve, WeierstrassKind::Wp, order)?;
    let mixed = LaurentSeries::z().mul(&wp).add(&zeta.scale(&Scalar::int(3)));
    for (name, f) in [("zeta", &zeta), ("wp", &wp), ("z*wp + 3 zeta", &mixed)] {
        let s = s_membership(f, &curve, bounds)?;
        println!("{name}: {}", s.map_or("not found".into(), |s| serde_json::to_string(&s).unwrap()));
    }
    let mut fact = Scalar::one();
    let mut coeffs = Vec::new();
    let long = 300;
    for n in 0..long {
        coeffs.push(fact.clone());
        fact = &fact * &Scalar::int(n + 1);
    }
    let f = LaurentSeries::new(0, coeffs, long);
    let b = MembershipBounds { max_zeta_pow: 3, max_z_range: 3, max_pole_order: 10 };
    println!("factorial series: {:?}", s_membership(&f, &curve, b).map(|s| s.is_some()));
    Ok(())
}
