//! Sheffer sequences and their operators.
//!
//! A sequence is fixed by a unit-linear map `A` and a series `rho` with
//! `rho(0) = 1` through its generating function
//!
//! ```text
//! sum_n (1/n!) <S^(n)(w), x^{(x)n}> = exp<w, A(x)> / rho(A(x)).
//! ```
//!
//! The operator sending `<w^{(x)n}, phi>` to `<S^(n)(w), phi>` is upper
//! triangular in the degree grading. [`ShefferSequence`] stores its blocks
//! `V_{k,n}` (degree `n` in, degree `k` out) together with the blocks of the
//! inverse, which come from the expansion of `exp<w, x>` in the sequence:
//!
//! ```text
//! V[beta, gamma] = gamma!/beta! [x^gamma] A(x)^beta / rho(A(x))
//! W[beta, gamma] = gamma!/beta! [y^gamma] rho(y) B(y)^beta,   B = A^{-1}
//! ```
//!
//! `rho = 1` gives sequences of binomial type, `A = id` Appell sequences.

mod binomial;
mod file;
mod poly;
mod sequence;
mod umbral;

pub use binomial::{binomial_check, BinomialReport};
pub use file::{BlockDoc, SequenceDoc};
pub use poly::{evaluate, PolynomialOnDual};
pub use sequence::{
    build_basic, build_sheffer, sheffer_apply, sheffer_inverse_apply, theta_kappa, Block, ShefferSequence,
};
pub use umbral::umbral_apply_direct;
