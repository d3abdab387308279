use ahlab_core::exactlinalg::{ExactMatrix, FieldConfig};
use ahlab_core::interpolation::{hilbert_double_points, Sampling};
use ahlab_core::polyspace::{
    catalecticant, evaluation_row, monomial_basis, power_sum_expand, space_dim, Form, ProjPoint,
};
use ahlab_core::schemes::{SchemeComponent, SchemeSpec};
use ahlab_core::sylvester::{membership_sigma_k, sylvester_g, BinaryForm};
use ahlab_core::verifier::{critical_k, horace_identity, horace_params};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn form_strategy(n: usize, d: usize) -> impl Strategy<Value = Form> {
    let len = space_dim(n, d) as usize;
    prop::collection::vec(-20i64..=20, len)
        .prop_map(move |c| Form::from_integers(n, d, &c).unwrap())
}

fn vector(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(-9i64..=9, n + 1).prop_map(|v| v.into_iter().map(q).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_relation(f in form_strategy(2, 4), x in vector(2)) {
        let lhs: BigRational = f
            .gradient()
            .iter()
            .zip(&x)
            .map(|(g, xi)| g.eval(&x).unwrap() * xi)
            .sum();
        prop_assert_eq!(lhs, f.eval(&x).unwrap() * q(4));
    }

    #[test]
    fn catalecticant_is_linear_and_subadditive(f in form_strategy(2, 4), g in form_strategy(2, 4), c in -5i64..=5) {
        let h = f.add(&g.scale(&q(c))).unwrap();
        let (cf, cg, ch) = (catalecticant(&f, 2).unwrap(), catalecticant(&g, 2).unwrap(), catalecticant(&h, 2).unwrap());
        for r in 0..ch.rows() {
            for col in 0..ch.cols() {
                prop_assert_eq!(ch.entry(r, col), cf.entry(r, col) + cg.entry(r, col) * q(c));
            }
        }
        prop_assert!(ch.rank() <= cf.rank() + cg.rank());
    }

    #[test]
    fn power_sums_bound_catalecticant_rank(ls in prop::collection::vec(vector(3), 1..5)) {
        let terms: Vec<_> = ls.iter().map(|l| (BigRational::one(), l.clone())).collect();
        let f = power_sum_expand(&terms, 4).unwrap();
        prop_assert!(catalecticant(&f, 2).unwrap().rank() <= ls.len());
    }

    #[test]
    fn evaluation_row_is_power_sum_over_multinomials(l in vector(2)) {
        prop_assume!(l.iter().any(|v| !v.is_zero()));
        let basis = monomial_basis(2, 3);
        let row = evaluation_row(&ProjPoint::new(l.clone()).unwrap(), &basis).unwrap();
        let f = power_sum_expand(&[(BigRational::one(), l.clone())], 3).unwrap();
        // the point is rescaled to a leading 1, so compare up to that factor
        let lead = l.iter().find(|v| !v.is_zero()).unwrap().clone();
        let scale = &lead * &lead * &lead;
        for ((c, m), r) in f.coeffs().iter().zip(basis.multinomials()).zip(&row) {
            prop_assert_eq!(c / BigRational::from_integer(m), r * &scale);
        }
    }

    #[test]
    fn modular_rank_never_exceeds_rational_rank(entries in prop::collection::vec(-6i64..=6, 30)) {
        let qm = ExactMatrix::from_integers(5, 6, &entries, FieldConfig::rationals()).unwrap();
        let small = ExactMatrix::from_integers(5, 6, &entries, FieldConfig::prime(7).unwrap()).unwrap();
        let big = ExactMatrix::from_integers(5, 6, &entries, FieldConfig::default_prime()).unwrap();
        prop_assert!(small.rank() <= qm.rank());
        prop_assert_eq!(big.rank(), qm.rank());
        prop_assert_eq!(qm.kernel_basis().len(), 6 - qm.rank());
    }

    #[test]
    fn horace_identity_holds(n in 2usize..=12, d in 4usize..=10, hi in any::<bool>()) {
        let (lo, up) = critical_k(n, d);
        let k = if hi { up } else { lo };
        let p = horace_params(n, d, k).unwrap();
        prop_assert!(horace_identity(n, d, k, p.u, p.epsilon));
        prop_assert!(p.epsilon < n);
        prop_assert!(!horace_identity(n, d, k, p.u + 1, p.epsilon));
    }

    #[test]
    fn covariant_scales(a in prop::collection::vec(-7i64..=7, 8), lam in 1i64..=5) {
        let f = BinaryForm::from_integers(&a).unwrap();
        let g = sylvester_g(&f).unwrap();
        let gl = sylvester_g(&f.scale(&q(lam))).unwrap();
        prop_assert_eq!(gl, g.scale(&q(lam.pow(4))));
        prop_assert_eq!(membership_sigma_k(&f, 3), g.is_zero());
    }

    #[test]
    fn covariant_roots_are_the_forms(rs in prop::collection::btree_set(-12i64..=12, 3)) {
        let terms: Vec<_> = rs.iter().map(|&r| (BigRational::one(), [q(1), BigRational::new(BigInt::from(r), BigInt::from(4))])).collect();
        let f = BinaryForm::power_sum(5, &terms).unwrap();
        let g = sylvester_g(&f).unwrap();
        // p x + q y vanishes at (-q, p)
        for (_, [p, qq]) in &terms {
            prop_assert!(g.eval(&-qq.clone(), p).is_zero());
        }
    }

    #[test]
    fn scheme_json_round_trip(pts in prop::collection::vec(vector(3), 1..4)) {
        let mut spec = SchemeSpec::new(3);
        for p in pts {
            if let Ok(p) = ProjPoint::new(p) {
                spec.push(SchemeComponent::double(p));
            }
        }
        let back = SchemeSpec::from_json(&spec.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, spec);
    }
}

#[test]
fn hilbert_function_grows_with_k() {
    let s = Sampling::default();
    let mut last = 0;
    for k in 0..=8 {
        let r = hilbert_double_points(3, 4, k, &s).unwrap();
        assert!(r.computed >= last && r.computed <= r.expected);
        last = r.computed;
    }
    assert_eq!(last, 32);
}
