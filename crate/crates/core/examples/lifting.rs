//! Lifts a one-variable pair to two variables with weights and checks the binomial identity.

use num::complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sheffer::families::{build_family, FamilyKind, FamilySpec};
use sheffer::index::MultiIndex;
use sheffer::sheffer::binomial_check;

fn main() -> sheffer::Result<()> {
    let mut spec = FamilySpec::new(FamilyKind::Charlier, 2, 6);
    spec.weights = Some(vec![1.0, 2.0]);
    let seq = build_family::<Complex64>(&spec)?;
    let p = seq.image_of_monomial(&MultiIndex::new(&[1, 1]))?.to_series();
    println!("S_(1,1) = {}", p.to_json()?);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let r = binomial_check(&seq, 20, &mut rng)?;
    println!("binomial identity deviation over 20 pairs: {:e}", r.max_deviation);
    Ok(())
}
