//! Symmetric tensor norm, product and contraction on small coefficient maps.

use num::complex::Complex64;
use sheffer::index::MultiIndex;
use sheffer::tensor::{sym_contract, sym_norm, sym_norm_identity, sym_product, SymCoeff, WeightedInnerProduct};

fn main() -> sheffer::Result<()> {
    let c = |re: f64| Complex64::new(re, 0.0);
    // x1^2 + 3 x1 x2
    let theta = SymCoeff::from_terms(2, 2, vec![(MultiIndex::new(&[2, 0]), c(1.0)), (MultiIndex::new(&[1, 1]), c(3.0))])?;
    // x2 - x1
    let eta = SymCoeff::from_terms(2, 1, vec![(MultiIndex::new(&[0, 1]), c(1.0)), (MultiIndex::new(&[1, 0]), c(-1.0))])?;
    let weight = WeightedInnerProduct::from_rows(&[vec![c(2.0), c(0.5)], vec![c(0.5), c(1.0)]])?;
    println!("norm {:.6}  weighted norm {:.6}", sym_norm_identity(&theta), sym_norm(&theta, &weight)?);
    let product = sym_product(&eta, &theta)?;
    for (m, v) in product.coeffs() {
        println!("product {:?} {v}", m.to_vec());
    }
    let contracted = sym_contract(&eta, &theta)?;
    for (m, v) in contracted.coeffs() {
        println!("contraction {:?} {v}", m.to_vec());
    }
    Ok(())
}
