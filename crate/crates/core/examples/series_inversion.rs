//! Compositional inverse of a two-variable map and the residual of `B o A`.

use num::complex::Complex64;
use sheffer::families::named_series;
use sheffer::series::VectorSeries;

fn main() -> sheffer::Result<()> {
    let a = VectorSeries::componentwise(&named_series::<Complex64>("log1p", 10)?, 2)?;
    let b = a.inverse()?;
    let residual = b.compose(&a)?.max_abs_diff(&VectorSeries::identity(2, 10));
    for k in 1..=6 {
        println!("coefficient of u1^{k} in the inverse: {}", b.components()[0].coeff_of(&[k, 0]));
    }
    println!("max |B o A - id| = {residual:e}");
    Ok(())
}
