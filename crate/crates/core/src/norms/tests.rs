use num::complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::index::{basis, MultiIndex};
use crate::scalar::factorial_f64;
use crate::series::{Series, VectorSeries};
use crate::sheffer::{build_basic, build_sheffer, ShefferSequence};
use crate::tensor::SymCoeff;

type C = Complex64;

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

fn id_weight(d: usize) -> WeightedInnerProduct {
    WeightedInnerProduct::identity(d)
}

fn norm(d: usize, alpha: f64, l: u32) -> GradedNorm {
    GradedNorm::identity(d, alpha, l).unwrap()
}

fn monomial(exps: &[usize]) -> PolynomialOnDual<C> {
    PolynomialOnDual::monomial(exps.iter().sum(), exps, c(1.0)).unwrap()
}

fn uni(coeffs: &[f64], n: usize) -> Series<C> {
    Series::univariate(&coeffs.iter().map(|&x| c(x)).collect::<Vec<_>>(), n)
}

fn log1p(n: usize) -> Series<C> {
    let coeffs: Vec<f64> = (0..=n)
        .map(|k| match k {
            0 => 0.0,
            _ => (if k % 2 == 1 { 1.0 } else { -1.0 }) / k as f64,
        })
        .collect();
    uni(&coeffs, n)
}

fn falling(d: usize, n: usize) -> ShefferSequence<C> {
    build_basic(&VectorSeries::componentwise(&log1p(n), d).unwrap(), n).unwrap()
}

/// `a = log(1+u)`, `rho = exp(sum_i (e^{x_i} - 1))`.
fn lifted_charlier(d: usize, n: usize) -> ShefferSequence<C> {
    let a = VectorSeries::componentwise(&log1p(n), d).unwrap();
    let mut sum = Series::zero(d, n);
    for i in 0..d {
        let e = Series::var(d, i, n).exp().unwrap().sub(&Series::one(d, n)).unwrap();
        sum = sum.add(&e).unwrap();
    }
    build_sheffer(&a, &sum.exp().unwrap(), n).unwrap()
}

fn hermite(n: usize) -> ShefferSequence<C> {
    let rho = uni(&[0.0, 0.0, 0.5], n).exp().unwrap();
    build_sheffer(&VectorSeries::identity(1, n), &rho, n).unwrap()
}

fn random_poly(rng: &mut impl Rng, d: usize, n: usize) -> PolynomialOnDual<C> {
    let parts = (0..=n)
        .map(|k| {
            let terms = basis(d, k)
                .into_iter()
                .map(|m| (m, C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
            SymCoeff::from_terms(d, k, terms).unwrap()
        })
        .collect();
    PolynomialOnDual::from_parts(d, parts).unwrap()
}

#[test]
fn coeff_norm_examples() {
    for (alpha, l) in [(0.5, 0), (1.0, 2), (2.0, 1)] {
        let g = norm(1, alpha, l);
        for n in 0..=8 {
            let want = factorial_f64(n).powf(1.0 / alpha) * 2f64.powi((l * n as u32) as i32);
            let got = coeff_norm(&monomial(&[n]), &g).unwrap();
            assert!((got - want).abs() <= 1e-12 * want);
        }
        assert_eq!(coeff_norm(&monomial(&[0]), &g).unwrap(), 1.0);
    }
    let n = 9;
    let exp_poly = uni(&(0..=n).map(|k| 1.0 / factorial_f64(k)).collect::<Vec<_>>(), n);
    let got = coeff_norm(&PolynomialOnDual::from_series(&exp_poly), &norm(1, 1.0, 0)).unwrap();
    assert!((got - (n + 1) as f64).abs() < 1e-12);
}

#[test]
fn coeff_norm_monotone_in_level_and_order() {
    for exps in [[3, 0], [1, 2], [0, 5]] {
        let p = monomial(&exps);
        for l in 0..4 {
            assert!(coeff_norm(&p, &norm(2, 1.0, l)).unwrap() < coeff_norm(&p, &norm(2, 1.0, l + 1)).unwrap());
        }
        let mut last = f64::INFINITY;
        for alpha in [0.5, 1.0, 1.5, 2.0, 4.0] {
            let v = coeff_norm(&p, &norm(2, alpha, 1)).unwrap();
            assert!(v <= last);
            last = v;
        }
    }
}

#[test]
fn graded_norm_rejects_bad_order() {
    assert!(GradedNorm::identity(1, 0.0, 0).is_err());
    assert!(GradedNorm::identity(1, f64::NAN, 0).is_err());
}

#[test]
fn sup_examples() {
    let cfg = SupConfig::default();
    let one = monomial(&[0, 0]);
    assert!((sup_norm_estimate(&one, &norm(2, 1.0, 0), &cfg).unwrap() - 1.0).abs() < 1e-15);
    let z = monomial(&[1]);
    let got = sup_norm_estimate(&z, &norm(1, 1.0, 0), &cfg).unwrap();
    // fine-grid oracle of r e^{-r}
    let oracle = (0..=200_000).map(|i| i as f64 * 1e-4).map(|r| r * (-r).exp()).fold(0.0, f64::max);
    assert!((got - oracle).abs() < 1e-8, "{got} vs {oracle}");
    assert!((got - (-1f64).exp()).abs() < 1e-9);
    assert_eq!(sup_norm_estimate(&PolynomialOnDual::<C>::zero(1, 3), &norm(1, 1.0, 0), &cfg).unwrap(), 0.0);
    let empty = SupConfig { directions: 0, ..cfg };
    assert!(sup_norm_estimate(&z, &norm(1, 1.0, 0), &empty).is_err());
}

#[test]
fn sup_grows_with_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = SupConfig::default();
    for _ in 0..5 {
        let p = random_poly(&mut rng, 2, 5);
        let mut last = 0.0;
        for l in 0..4 {
            let v = sup_norm_estimate(&p, &norm(2, 1.0, l), &cfg).unwrap();
            assert!(v >= last * (1.0 - 1e-12));
            last = v;
        }
    }
}

#[test]
fn weighted_sup_matches_rescaled_variable() {
    // p(w) = w^3 with weight 4: dual norm |w|/2, so sup |w|^3 e^{-|w|/2} = sup 8 r^3 e^{-r}
    let g = GradedNorm::new(1.0, 0, WeightedInnerProduct::diagonal(&[4.0]).unwrap()).unwrap();
    let got = sup_norm_estimate(&monomial(&[3]), &g, &SupConfig::default()).unwrap();
    let want = 8.0 * 27.0 * (-3f64).exp();
    assert!((got - want).abs() < 1e-9 * want);
}

#[test]
fn sup_is_below_forward_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = SupConfig::default();
    for alpha in [0.5, 1.0, 2.0] {
        for l in 0..3 {
            let p = random_poly(&mut rng, 2, 6);
            let g = norm(2, alpha, l);
            let bound = coeff_norm(&p, &g.with_l(forward_l_prime(alpha, l))).unwrap();
            assert!(sup_norm_estimate(&p, &g, &cfg).unwrap() <= bound);
        }
    }
}

#[test]
fn l_prime_rules() {
    assert_eq!(forward_l_prime(1.0, 0), 1);
    assert_eq!(forward_l_prime(1.0, 3), 3);
    assert_eq!(forward_l_prime(0.5, 1), 4);
    assert_eq!(forward_l_prime(2.0, 2), 1);
    for (alpha, l, d) in [(1.0, 0, 1), (0.5, 2, 2), (2.0, 1, 3)] {
        let (r, q) = reverse_l_prime(alpha, l, d);
        assert!(q <= 0.5);
        if r > 0 {
            let prev = q * 2f64.powf(1.0 / alpha);
            assert!(prev > 0.5);
        }
    }
}

#[test]
fn embedding_examples() {
    let cfg = SupConfig::default();
    for n in 0..=12 {
        let report = embedding_check(&monomial(&[n]), &norm(1, 1.0, 0), &cfg).unwrap();
        assert!(report.pass, "{report:?}");
        let fwd = &report.breakdown[0];
        assert!(fwd.theoretical - fwd.measured >= 0.0);
    }
    let report = embedding_check(&monomial(&[0, 0]), &norm(2, 1.0, 2), &cfg).unwrap();
    assert!(report.pass);
    assert_eq!(report.breakdown[0].measured, 1.0);
    assert_eq!(report.breakdown[0].theoretical, 1.0);
    assert!(embedding_check(&PolynomialOnDual::zero(1, 2), &norm(1, 1.0, 0), &cfg).is_err());
}

#[test]
fn embedding_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let cfg = SupConfig::default();
    for alpha in [0.5, 1.0, 2.0] {
        for _ in 0..6 {
            let d = rng.random_range(1..=2);
            let n = rng.random_range(0..=8);
            let p = random_poly(&mut rng, d, n);
            let report = embedding_check(&p, &norm(d, alpha, rng.random_range(0..=2)), &cfg).unwrap();
            assert!(report.pass, "{report:?}");
        }
    }
}

#[test]
fn operator_bound_examples() {
    let monomials = |d: usize, n: usize| -> Vec<PolynomialOnDual<C>> {
        (0..=n).flat_map(|k| basis(d, k)).map(|m| PolynomialOnDual::monomial(n, &m.to_vec(), c(1.0)).unwrap()).collect()
    };
    let id = build_basic(&VectorSeries::identity(1, 6), 6).unwrap();
    let report = operator_bound_check(&id, &norm(1, 1.0, 0), None, &monomials(1, 6)).unwrap();
    assert!(report.measured <= 1.0 && report.pass, "{report:?}");

    let report = operator_bound_check(&falling(1, 12), &norm(1, 1.0, 0), None, &monomials(1, 12)).unwrap();
    assert!(report.pass, "{report:?}");
    assert!((report.params["c5"] - 1.0).abs() < 1e-12);

    let report = operator_bound_check(&lifted_charlier(2, 8), &norm(2, 1.0, 0), None, &monomials(2, 8)).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn operator_bound_refuses_small_l_prime() {
    let seq = falling(1, 6);
    assert!(matches!(
        operator_bound_check(&seq, &norm(1, 1.0, 0), Some(1), &[monomial(&[3])]),
        Err(crate::Error::Precondition(_))
    ));
    assert!(matches!(
        operator_bound_check(&seq, &norm(1, 2.0, 0), None, &[monomial(&[3])]),
        Err(crate::Error::Precondition(_))
    ));
}

#[test]
fn appell_examples() {
    let w = id_weight(1);
    let report = appell_condition_check(&hermite(16), 2.0, &w).unwrap();
    assert!(report.pass, "{report:?}");

    let trivial = build_basic(&VectorSeries::identity(1, 10), 10).unwrap();
    for beta in [0.5, 1.0, 2.0, 5.0] {
        let report = appell_condition_check(&trivial, beta, &w).unwrap();
        assert!(report.pass);
        assert_eq!(report.measured, 1.0);
    }

    let geometric = uni(&[1.0; 25], 24);
    let seq = build_sheffer(&VectorSeries::identity(1, 24), &geometric, 24).unwrap();
    for beta in [1.5, 2.0, 3.0] {
        let report = appell_condition_check(&seq, beta, &w).unwrap();
        assert!(!report.pass, "beta = {beta}: {report:?}");
    }

    assert!(appell_condition_check(&falling(1, 4), 2.0, &w).is_err());
}

/// `sum_k |s(n,k)| sqrt(k!/n!)` from the unsigned Stirling recurrence.
fn falling_ratio_oracle(n: usize) -> f64 {
    let mut s = vec![vec![0.0f64; n + 1]; n + 1];
    s[0][0] = 1.0;
    for m in 1..=n {
        for k in 1..=m {
            s[m][k] = s[m - 1][k - 1] + (m - 1) as f64 * s[m - 1][k];
        }
    }
    (1..=n).map(|k| s[n][k] * (factorial_f64(k) / factorial_f64(n)).sqrt()).sum()
}

/// `sum_j sqrt(n!/(n-2j)!) / (2^j j!)`.
fn hermite_ratio_oracle(n: usize) -> f64 {
    (0..=n / 2)
        .map(|j| (factorial_f64(n) / factorial_f64(n - 2 * j)).sqrt() / (2f64.powi(j as i32) * factorial_f64(j)))
        .sum()
}

#[test]
fn divergence_tables_match_closed_forms() {
    let w = id_weight(1);
    let table = divergence_sweep(&falling(1, 24), 2.0, 1..=24, 0, &w).unwrap();
    for row in &table.rows {
        let want = falling_ratio_oracle(row.degree);
        assert!((row.ratio - want).abs() <= 1e-9 * want, "n = {}", row.degree);
    }
    assert!(table.ratio(24).unwrap() > 10.0 * table.ratio(5).unwrap());
    assert_eq!(table.verdict, Verdict::UnboundedLooking);

    let table = divergence_sweep(&hermite(24), 2.0, 1..=24, 0, &w).unwrap();
    for row in &table.rows {
        let want = hermite_ratio_oracle(row.degree);
        assert!((row.ratio - want).abs() <= 1e-9 * want, "n = {}", row.degree);
    }
}

#[test]
fn identity_sweep_is_flat() {
    let seq = build_basic(&VectorSeries::identity(2, 10), 10).unwrap();
    let table = divergence_sweep(&seq, 2.0, 1..=10, 0, &id_weight(2)).unwrap();
    assert!(table.rows.iter().all(|r| (r.ratio - 1.0).abs() < 1e-15));
    assert_eq!(table.verdict, Verdict::Bounded);
    let csv = table.to_csv();
    assert!(csv.starts_with("degree,ratio,norm_num,norm_den\n"));
    assert_eq!(csv.lines().count(), 11);
    assert!(divergence_sweep(&seq, 1.0, 1..=3, 0, &id_weight(2)).is_err());
}

#[test]
fn appell_sequences_passing_growth_sweep_bounded() {
    // l' from 2^{l'} > 2 C for the fitted growth constant C
    let w = id_weight(1);
    for alpha in [1.5, 2.0] {
        let seq = hermite(24);
        let report = appell_condition_check(&seq, 2.0, &w).unwrap();
        assert!(report.pass);
        let l_prime = (0..).find(|&r| 2f64.powi(r) > 2.0 * report.measured).unwrap() as u32;
        let table = divergence_sweep(&seq, alpha, 1..=24, l_prime, &w).unwrap();
        assert_eq!(table.verdict, Verdict::Bounded, "{table:?}");
    }
    let table = divergence_sweep(&falling(1, 24), 2.0, 1..=24, 1, &w).unwrap();
    assert_eq!(table.verdict, Verdict::UnboundedLooking);
}

#[test]
fn probe_examples() {
    let w = id_weight(1);
    let report = quasi_holo_probe(&VectorSeries::identity(1, 8), &w).unwrap();
    assert!(report.norms[2..].iter().all(|&x| x == 0.0));
    assert!((report.envelope - 1.0).abs() < 1e-15);

    let report = quasi_holo_probe(&VectorSeries::componentwise(&log1p(10), 1).unwrap(), &w).unwrap();
    for k in 1..=10 {
        assert!((report.norms[k] - 1.0 / k as f64).abs() < 1e-12);
        assert!((report.inverse_norms[k] - 1.0 / factorial_f64(k)).abs() < 1e-12);
    }
    assert!((report.envelope - 1.0).abs() < 1e-12);
    assert!(report.inverse_envelope <= 1.0 + 1e-12);

    let shifted = VectorSeries::new(1, vec![uni(&[0.0, 2.0], 3)]).unwrap();
    assert!(quasi_holo_probe(&shifted, &w).is_err());
}

#[test]
fn block_norms_match_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in 1..=3 {
        let comps = (0..d)
            .map(|i| {
                let mut terms = vec![(MultiIndex::unit(d, i, 1), c(1.0))];
                for k in 2..=4 {
                    for m in basis(d, k) {
                        terms.push((m, C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
                    }
                }
                Series::from_terms(d, 4, terms).unwrap()
            })
            .collect();
        let a = VectorSeries::new(d, comps).unwrap();
        let norms = block_norms(&a, &id_weight(d)).unwrap();
        for k in 1..=4 {
            let monomials = basis(d, k);
            let m = nalgebra::DMatrix::from_fn(d, monomials.len(), |i, j| {
                a.components()[i].coeff(&monomials[j])
                    * (monomials[j].factorial_f64() / factorial_f64(k)).sqrt()
            });
            let svd = m.singular_values().max();
            assert!((norms[k] - svd).abs() <= 1e-9 * svd, "d = {d}, k = {k}");
        }
    }
}

#[test]
fn block_norm_of_linear_map_respects_weight() {
    // x -> diag(1, 3) x has norm 3 in any diagonal weight; a rotation does not.
    let a = VectorSeries::linear(2, &[vec![c(1.0), c(0.0)], vec![c(0.0), c(3.0)]], 2).unwrap();
    let w = WeightedInnerProduct::diagonal(&[2.0, 5.0]).unwrap();
    let got = block_norms(&a, &w).unwrap();
    assert!((got[1] - 3.0).abs() < 1e-10, "{got:?}");
    let shear = VectorSeries::linear(2, &[vec![c(1.0), c(1.0)], vec![c(0.0), c(1.0)]], 2).unwrap();
    // weight diag(1, 4): L* x = (x1, 2 x2), map becomes [[1, 1/2], [0, 1]]
    let w = WeightedInnerProduct::diagonal(&[1.0, 4.0]).unwrap();
    let want: f64 = nalgebra::DMatrix::<f64>::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]).singular_values().max();
    let got = block_norms(&shear, &w).unwrap();
    assert!((got[1] - want).abs() < 1e-10, "{got:?} vs {want}");
}

#[test]
fn report_serialises() {
    let report = BoundReport::new("demo", 1.5, 2.0).param("alpha", 1.0).note("n");
    assert!(report.pass);
    assert_eq!(report.csv_row(), "demo,1.5e0,2e0,true,alpha=1e0");
    let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    assert_eq!(json["measured"], 1.5);
    assert!(!BoundReport::new("nan", f64::NAN, 1.0).pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pass_flag_tracks_slack(m in 0.0f64..10.0, t in 0.0f64..10.0) {
        let r = BoundReport::new("x", m, t);
        prop_assert_eq!(r.pass, m <= t * (1.0 + 1e-9));
    }

    #[test]
    fn coeff_norm_is_a_norm(seed in any::<u64>(), d in 1usize..=3, n in 0usize..=6, alpha in 0.3f64..3.0, l in 0u32..3, k in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = norm(d, alpha, l);
        let p = random_poly(&mut rng, d, n);
        let q = random_poly(&mut rng, d, n);
        let (np, nq) = (coeff_norm(&p, &g).unwrap(), coeff_norm(&q, &g).unwrap());
        prop_assert!(coeff_norm(&p.add(&q).unwrap(), &g).unwrap() <= (np + nq) * (1.0 + 1e-12));
        let scaled = coeff_norm(&p.scale(&C::new(k, 0.5 * k)), &g).unwrap();
        let want = C::new(k, 0.5 * k).norm() * np;
        prop_assert!((scaled - want).abs() <= 1e-12 * want.max(1e-300));
    }
}
