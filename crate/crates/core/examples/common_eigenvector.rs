//! Exact common eigenvectors of commuting matrices over ℚ(i).
use ellipdiff::diffmod::common_eigenvector;
use ellipdiff::exact::Scalar;
use ellipdiff::linalg::Mat;

fn m(rows: &[&[i64]]) -> Mat<Scalar> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect()).unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rot = m(&[&[0, -1], &[1, 0]]);
    let id = m(&[&[1, 0], &[0, 1]]);
    println!("rotation: {}", serde_json::to_string(&common_eigenvector(&rot, &id)?)?);
    let a = m(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 5]]);
    let b = a.mul(&a)?.add(&a)?;
    println!("A, A² + A: {}", serde_json::to_string(&common_eigenvector(&a, &b)?)?);
    let c = m(&[&[0, 2], &[1, 0]]);
    println!("sqrt 2: {}", serde_json::to_string(&common_eigenvector(&c, &c)?)?);
    Ok(())
}
