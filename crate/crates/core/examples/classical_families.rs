//! Prints the first members of each catalog family in one variable, exactly.

use num::BigRational;
use sheffer::families::{build_family, FamilyKind, FamilySpec};
use sheffer::index::MultiIndex;

fn main() -> sheffer::Result<()> {
    let n = 5;
    for kind in [FamilyKind::Hermite, FamilyKind::Charlier, FamilyKind::Laguerre, FamilyKind::Falling, FamilyKind::Rising] {
        let seq = build_family::<BigRational>(&FamilySpec::new(kind, 1, n))?;
        println!("{kind:?}");
        for m in 0..=n {
            let p = seq.image_of_monomial(&MultiIndex::new(&[m]))?.to_series();
            let terms: Vec<String> = (0..=m).map(|j| format!("{}", p.coeff_of(&[j]))).collect();
            println!("  S_{m}: [{}]", terms.join(", "));
        }
    }
    Ok(())
}
