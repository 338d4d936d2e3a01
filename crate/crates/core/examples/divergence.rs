//! Ratio tables on powers of the first coordinate: falling factorials against Hermite.

use num::complex::Complex64;
use sheffer::families::{build_family, FamilyKind, FamilySpec};
use sheffer::norms::{appell_l_prime, divergence_sweep};
use sheffer::tensor::WeightedInnerProduct;

fn main() -> sheffer::Result<()> {
    let w = WeightedInnerProduct::identity(1);
    for kind in [FamilyKind::Falling, FamilyKind::Hermite] {
        let seq = build_family::<Complex64>(&FamilySpec::new(kind, 1, 24))?;
        let l_prime = appell_l_prime(&seq, 2.0, &w)?.unwrap_or(0);
        let table = divergence_sweep(&seq, 2.0, 1..=24, l_prime, &w)?;
        println!("{kind:?} at l' = {l_prime}: {:?}", table.verdict);
        print!("{}", table.to_csv());
    }
    Ok(())
}
