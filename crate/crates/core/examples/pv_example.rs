//! The system φ(Y) = [[q, g_q], [0, 1]]·Y with fundamental matrix
//! [[z, ζ], [0, 1]], checked by series substitution.
use std::sync::Arc;

use ellipdiff::diffmod::{iterate_system, pv_example_system};
use ellipdiff::exact::CurveParams;
use ellipdiff::laurent::verify_system;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curve = Arc::new(CurveParams::from_ints(4, 0)?);
    for q in [2u64, 3, 5] {
        let (a, u) = pv_example_system(&curve, q, 40)?;
        let v = verify_system(&a.embed(40)?, &u, q)?;
        println!("q = {q}: residual zero = {} (to z^{})", v.ok, v.order);
        let a2 = iterate_system(&a, 2)?;
        let v2 = verify_system(&a2.embed(40)?, &u, q * q)?;
        println!("  iterated system for q^2 = {}: {}", q * q, v2.ok);
    }
    Ok(())
}
