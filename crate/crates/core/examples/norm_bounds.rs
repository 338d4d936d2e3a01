//! Operator bound for the falling factorials on every monomial up to degree 10.

use num::complex::Complex64;
use sheffer::families::{build_family, FamilyKind, FamilySpec};
use sheffer::index::graded_basis;
use sheffer::norms::{operator_bound_check, GradedNorm};
use sheffer::sheffer::PolynomialOnDual;

fn main() -> sheffer::Result<()> {
    let n = 10;
    let seq = build_family::<Complex64>(&FamilySpec::new(FamilyKind::Falling, 1, n))?;
    let samples = graded_basis(1, n)
        .iter()
        .map(|m| PolynomialOnDual::monomial(n, &m.to_vec(), Complex64::new(1.0, 0.0)))
        .collect::<sheffer::Result<Vec<_>>>()?;
    let report = operator_bound_check(&seq, &GradedNorm::identity(1, 1.0, 0)?, None, &samples)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
