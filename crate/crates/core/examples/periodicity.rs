//! Recover a periodic divisor function from its p- and q-data, then corrupt
//! the data and get a witness point instead.
use ellipdiff::divisors::{periodicity_solve, scale_periodic, PeriodicFn, PointC, ScaleLattice};
use ellipdiff::exact::{rat, rat_int};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, q) = (3u64, 2u64);
    let t = |a, b| PointC::torsion(rat(a, b), rat(0, 1));
    let f0 = PeriodicFn::new(
        ScaleLattice::base(),
        [(t(1, 5), rat_int(1)), (t(2, 5), rat_int(-1)), (PointC::torsion(rat(0, 1), rat(1, 2)), rat_int(3))],
    );
    // e = (e_0, e_1) = (1, 1): f_p = f(pz) + f(z)
    let e = [rat_int(1), rat_int(1)];
    let f_q = scale_periodic(&f0, q)?.sub(&f0)?;
    let f_p = scale_periodic(&f0, p)?.add(&f0)?;
    let out = periodicity_solve(&f_p, &f_q, &e, p, q)?;
    println!("{}", serde_json::to_string_pretty(&out)?);

    let bad = f_p.add(&PeriodicFn::new(ScaleLattice::base(), [(t(1, 5), rat_int(1))]))?;
    let out = periodicity_solve(&bad, &f_q, &e, p, q)?;
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}
