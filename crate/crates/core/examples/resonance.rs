//! u(qz) = a·u(z) + b(z) coefficientwise: particular solution, resonance,
//! obstruction and the homogeneous dimension.
use ellipdiff::exact::Scalar;
use ellipdiff::laurent::{solve_scalar_first_order, LaurentSeries, EXACT};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = 2;
    let one = LaurentSeries::one();
    let z = LaurentSeries::z();
    let zero = LaurentSeries::zero(EXACT);
    for a in [3, 2, 1] {
        for (name, b) in [("1", &one), ("z", &z), ("0", &zero)] {
            let s = solve_scalar_first_order(&Scalar::int(a), b, q)?;
            println!(
                "a = {a}, b = {name}: particular = {:?}, resonances = {:?}, obstruction = {:?}, hom dim = {}",
                s.particular.map(|p| p.to_string()),
                s.resonances,
                s.obstruction,
                s.homogeneous_dim
            );
        }
    }
    Ok(())
}
