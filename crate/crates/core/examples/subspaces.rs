//! Canonical subspaces, sums, intersections and enumeration.
use std::sync::Arc;

use frcode::subspace::enumerate_subspaces;
use frcode::{gaussian_binomial, Field, Subspace};

fn main() -> frcode::Result<()> {
    let f = Arc::new(Field::gf2());
    let a = Subspace::from_rows(&f, 4, vec![vec![1, 1, 0, 0], vec![0, 1, 1, 0]])?;
    let b = Subspace::from_rows(&f, 4, vec![vec![1, 0, 1, 0], vec![0, 0, 0, 1]])?;
    println!("A = {a:?}, B = {b:?}");
    println!("A + B = {:?}", a.sum(&b)?);
    println!("A n B = {:?}", a.intersect(&b)?);
    for d in 0..=4 {
        let n = enumerate_subspaces(&f, 4, d)?.len();
        println!(
            "{d}-subspaces of GF(2)^4: {n} (gaussian binomial {})",
            gaussian_binomial(2, 4, d)
        );
    }
    Ok(())
}
