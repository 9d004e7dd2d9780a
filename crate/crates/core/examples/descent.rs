//! Order-one descent: recover div(b) from α = div(c·φ(b)/b), materialize b,
//! and certify c; then the two transcendence gates.
use std::sync::Arc;

use ellipdiff::diffmod::{order_one_verdict, LabeledPoint, OrderOneData};
use ellipdiff::divisors::{scale_periodic, PeriodicFn, PointC, ScaleLattice};
use ellipdiff::exact::{rat, rat_int, CurveParams, EllFn, Scalar};
use ellipdiff::isogeny::{pullback, PointXY};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curve = Arc::new(CurveParams::from_ints(4, 0)?);
    let q = 3;
    // b = x vanishes doubly at the 2-torsion point T = (0, 0)
    let t = PointC::torsion(rat(1, 2), rat(0, 1));
    let b = EllFn::x(&curve);
    let a = pullback(&b, q)?.try_div(&b)?.scale(&Scalar::int(2));
    let delta = PeriodicFn::new(ScaleLattice::base(), [(t.clone(), rat_int(2)), (PointC::origin(), rat_int(-2))]);
    let alpha = scale_periodic(&delta, q)?.sub(&delta)?;
    let data = OrderOneData {
        a,
        points: vec![LabeledPoint { label: t, point: PointXY::affine(Scalar::zero(), Scalar::zero()) }],
    };
    let v = order_one_verdict(&alpha, Some(&data), q)?;
    println!("{}", serde_json::to_string_pretty(&v)?);

    // a = x − e: nonzero at the class of 0
    println!("x − e: {:?}", order_one_verdict(&delta, None, 2)?.reason_code());
    // a ×2-cycle {1/3, 2/3} with nonzero sum
    let s = |a, b| PointC::torsion(rat(a, b), rat(0, 1));
    let cyc = PeriodicFn::new(ScaleLattice::base(), [(s(1, 3), rat_int(1)), (s(2, 3), rat_int(1)), (s(1, 2), rat_int(-2))]);
    println!("cycle: {:?}", order_one_verdict(&cyc, None, 2)?.reason_code());
    Ok(())
}
