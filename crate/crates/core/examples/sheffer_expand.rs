//! Expands a polynomial in the Charlier basis and maps it back, in double-double.

use num::complex::Complex64;
use sheffer::families::{build_family, FamilyKind, FamilySpec};
use sheffer::scalar::{ComplexWide, Scalar};
use sheffer::series::Series;
use sheffer::sheffer::{sheffer_apply, sheffer_inverse_apply, PolynomialOnDual};

fn main() -> sheffer::Result<()> {
    let seq = build_family::<ComplexWide>(&FamilySpec::new(FamilyKind::Charlier, 2, 4))?;
    let x = Series::<Complex64>::var(2, 0, 4);
    let y = Series::<Complex64>::var(2, 1, 4);
    let p = x.mul(&x)?.mul(&y)?.add(&y)?;
    let p = PolynomialOnDual::from_series(&p).map(Scalar::widen);
    let coeffs = sheffer_inverse_apply(&seq, &p)?;
    println!("coefficients in the sequence basis:");
    println!("{}", coeffs.map(Scalar::to_c64).to_series().to_json()?);
    let back = sheffer_apply(&seq, &coeffs)?;
    println!("round trip deviation {:e}", back.map(Scalar::to_c64).max_abs_diff(&p.map(Scalar::to_c64)));
    Ok(())
}
