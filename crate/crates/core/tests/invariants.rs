use antidrazin::anti::{generate_t26_instance, T26Family};
use antidrazin::decomp::{inverse, numeric_rank, pseudoinverse};
use antidrazin::matrix::{matmul, matpow};
use antidrazin::{drazin_oracle, ComplexMatrix, ToleranceConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn dense(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        let data = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::new(rows, cols, data).unwrap()
    })
}

fn square() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..6).prop_flat_map(|n| dense(n, n))
}

/// Square matrix of rank at most `r`, as a product of thin factors.
fn low_rank() -> impl Strategy<Value = ComplexMatrix> {
    (2usize..6)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, r)| (dense(n, r), dense(r, n)))
        .prop_map(|(x, y)| &x * &y)
}

/// `S diag(K, N) S^-1` with `K` invertible and `N` nilpotent, so index >= 1 is common.
fn core_nilpotent() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..5, any::<u64>()).prop_map(|(n, seed)| {
        generate_t26_instance(n, T26Family::InvertibleF, seed)
            .or_else(|_| generate_t26_instance(n.max(2), T26Family::ProjectedZero, seed))
            .unwrap()
            .f()
            .clone()
    })
}

fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.distance(b) / (1.0 + a.frobenius_norm().max(b.frobenius_norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative((a, b, c) in (1usize..6).prop_flat_map(|n| (dense(n, n), dense(n, n), dense(n, n)))) {
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert!(rel(&left, &right) <= 1e-12);
        prop_assert_eq!(matmul(&a, &b).unwrap(), &a * &b);
    }

    #[test]
    fn power_exponents_add(a in square(), j in 0usize..4, k in 0usize..4) {
        let split = &matpow(&a, j).unwrap() * &matpow(&a, k).unwrap();
        prop_assert!(rel(&split, &matpow(&a, j + k).unwrap()) <= 1e-10);
    }

    #[test]
    fn penrose_identities(a in prop_oneof![square(), low_rank()]) {
        let p = pseudoinverse(&a, &cfg()).unwrap();
        let ap = &a * &p;
        let pa = &p * &a;
        let tol = 1e-9 * (1.0 + a.frobenius_norm() * p.frobenius_norm()).powi(2);
        prop_assert!((&ap * &a).distance(&a) <= tol);
        prop_assert!((&pa * &p).distance(&p) <= tol);
        prop_assert!(ap.adjoint().distance(&ap) <= tol);
        prop_assert!(pa.adjoint().distance(&pa) <= tol);
    }

    #[test]
    fn rank_matches_adjoint(a in prop_oneof![square(), low_rank()]) {
        prop_assert_eq!(numeric_rank(&a, &cfg()).unwrap(), numeric_rank(&a.adjoint(), &cfg()).unwrap());
    }

    #[test]
    fn oracle_scales_inversely(a in core_nilpotent(), which in 0usize..3) {
        let c = [Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)][which];
        let ad = drazin_oracle(&a, &cfg()).unwrap().inverse;
        let scaled = drazin_oracle(&a.scale(c), &cfg()).unwrap().inverse;
        prop_assert!(rel(&scaled, &ad.scale(c.inv())) <= 1e-9);
    }

    #[test]
    fn oracle_commutes_with_similarity((a, u) in core_nilpotent().prop_flat_map(|a| { let n = a.rows(); (Just(a), dense(n, n)) })) {
        // entries of U have modulus below sqrt 2, so norm(U / 10) < 1 and I + U / 10 is invertible
        let s = &ComplexMatrix::identity(a.rows()) + &u.scale(Complex64::new(0.1, 0.0));
        let s_inv = inverse(&s).unwrap();
        let ad = drazin_oracle(&a, &cfg()).unwrap().inverse;
        let conj = drazin_oracle(&(&(&s * &a) * &s_inv), &cfg()).unwrap().inverse;
        prop_assert!(rel(&conj, &(&(&s * &ad) * &s_inv)) <= 1e-8);
    }

    #[test]
    fn projector_is_idempotent(a in prop_oneof![core_nilpotent(), low_rank()]) {
        let d = drazin_oracle(&a, &cfg()).unwrap();
        let p = &d.projector;
        prop_assert!(rel(&(p * p), p) <= 1e-9);
        prop_assert!(rel(&(&a * &d.inverse), &(&d.inverse * &a)) <= 1e-9);
    }
}
