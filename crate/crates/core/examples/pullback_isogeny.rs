//! Pullback along [m]: the x-coordinate of mP, and the series check
//! embed(f∘[m]) = embed(f)(mz).
use std::sync::Arc;

use ellipdiff::exact::{CurveParams, EllFn};
use ellipdiff::isogeny::{g_element, pullback, x_multiplication_map};
use ellipdiff::laurent::{embed, scale_arg};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curve = Arc::new(CurveParams::from_ints(1, 1)?);
    println!("x([2]P) = {}", x_multiplication_map(&curve, 2)?);
    let f = &EllFn::x(&curve) + &EllFn::y(&curve);
    for m in 2..=4u64 {
        let g = pullback(&f, m)?;
        let order = 30;
        let ok = embed(&g, order)? == scale_arg(&embed(&f, order)?, m).truncate(order);
        println!("m = {m}: series check to z^{order}: {ok}");
    }
    // g_m = ζ(mz) − mζ(z) is elliptic
    println!("g_2 = {}", g_element(&curve, 2)?);
    Ok(())
}
