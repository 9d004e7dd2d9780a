//! Compatibility φ(B)·A = ψ(A)·B for the pair built from g_q and g_p, the
//! constant h-matrix, and what happens after a perturbation.
use std::sync::Arc;

use ellipdiff::diffmod::{h_matrix, isomonodromy_check, pv_example_system, CompatPair, DiffSystem};
use ellipdiff::exact::{CurveParams, EllFn};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curve = Arc::new(CurveParams::from_ints(4, 0)?);
    let (q, p) = (3u64, 2u64);
    let (a, u) = pv_example_system(&curve, q, 40)?;
    let (b, _) = pv_example_system(&curve, p, 40)?;
    let pair = CompatPair::new(a.clone(), b.clone())?;
    println!("compatible: {}", isomonodromy_check(&pair)?);
    println!("h = {:?}", h_matrix(&u, &b, p)?);

    let mut m = b.matrix().clone();
    m.set(0, 1, m.get(0, 1) + &EllFn::x(&curve));
    let bad = DiffSystem::new(m, p)?;
    println!("perturbed compatible: {}", isomonodromy_check(&CompatPair::new(a, bad.clone())?)?);
    println!("perturbed h = {:?}", h_matrix(&u, &bad, p)?);
    Ok(())
}
