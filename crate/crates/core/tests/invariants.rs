use hyperdet_core::arith::{QPoly, RationalFunction};
use hyperdet_core::asm::{self, Asm};
use hyperdet_core::detlib::{det_classical, det_lambda, SquareMatrix};
use hyperdet_core::dyson::dyson_coefficient;
use hyperdet_core::hyper::{
    cayley_hyperdet, cayley_hyperdet_full, lambda_hyperdet, lambda_hyperdet_with, HyperMatrix, PhiConvention,
};
use hyperdet_core::symfun::{
    macdonald_p, macdonald_q, partitions, scalar_product_qt, schur_jacobi_trudi, Basis, Partition, SymFun,
};
use hyperdet_core::Limits;
use proptest::prelude::*;

fn rf(c: i64) -> RationalFunction {
    RationalFunction::from_int(c)
}

fn poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-4i64..=4, 1..4).prop_map(|c| QPoly::from_int_coeffs(&c))
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (poly(), poly().prop_filter("nonzero", |p| !p.is_zero())).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn int_matrix(n: usize) -> impl Strategy<Value = SquareMatrix<RationalFunction>> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| SquareMatrix::from_fn(n, |i, j| rf(v[i * n + j])))
}

fn hypermatrix() -> impl Strategy<Value = HyperMatrix<RationalFunction>> {
    prop::collection::vec(-2i64..=2, 16)
        .prop_map(|v| HyperMatrix::dense(2, 4, v.into_iter().map(rf).collect()).unwrap())
}

fn unimodular3() -> impl Strategy<Value = SquareMatrix<RationalFunction>> {
    prop::collection::vec(-2i64..=2, 6).prop_map(|v| {
        let lower = SquareMatrix::from_fn(3, |i, j| {
            rf(if i == j {
                1
            } else if i > j {
                v[i + j - 1]
            } else {
                0
            })
        });
        let upper = SquareMatrix::from_fn(3, |i, j| {
            rf(if i == j {
                1
            } else if i < j {
                v[2 + i + j]
            } else {
                0
            })
        });
        lower.mul(&upper)
    })
}

fn hypermatrix3() -> impl Strategy<Value = HyperMatrix<RationalFunction>> {
    prop::collection::vec(-2i64..=2, 81)
        .prop_map(|v| HyperMatrix::dense(3, 4, v.into_iter().map(rf).collect()).unwrap())
}

fn lambda_value() -> impl Strategy<Value = RationalFunction> {
    prop_oneof![
        Just(RationalFunction::q()),
        (1i64..5, 1i64..5).prop_map(|(a, b)| rf(a).checked_div(&rf(b + 5)).unwrap()),
        (2i64..5).prop_map(|a| rf(-a)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ratfunc_canonical_form(f in ratfunc(), g in ratfunc().prop_filter("nonzero", |g| !g.is_zero())) {
        let back = (f.clone() * g.clone()).checked_div(&g).unwrap();
        prop_assert_eq!(&back, &f);
        let parsed: RationalFunction = f.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &f);
        if !f.is_zero() {
            prop_assert!(f.den().leading().unwrap() == &num_rational::BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn det_lambda_at_one_is_classical(a in int_matrix(4)) {
        prop_assert_eq!(det_lambda(&a, &rf(1)).unwrap(), det_classical(&a));
    }

    #[test]
    fn lambda_hyperdet_limit_is_cayley(a in hypermatrix(), conv in prop::sample::select(PhiConvention::ALL.to_vec())) {
        let limits = Limits::default();
        prop_assert_eq!(lambda_hyperdet(&a, &rf(1), conv, &limits).unwrap(), cayley_hyperdet(&a, &limits).unwrap());
    }

    #[test]
    fn first_slot_restriction_is_sound(a in hypermatrix(), lambda in lambda_value()) {
        let limits = Limits::default();
        for conv in PhiConvention::ALL {
            prop_assert_eq!(
                lambda_hyperdet(&a, &lambda, conv, &limits).unwrap(),
                lambda_hyperdet_with(&a, &lambda, conv, &limits, true).unwrap()
            );
        }
    }

    #[test]
    fn cayley_reduced_matches_full(a in hypermatrix()) {
        let limits = Limits::default();
        prop_assert_eq!(cayley_hyperdet(&a, &limits).unwrap(), cayley_hyperdet_full(&a, &limits).unwrap());
    }

    #[test]
    fn cayley_scales_by_det_under_contraction(a in hypermatrix(), b in int_matrix(2), slot in 0usize..4) {
        let limits = Limits::default();
        let lhs = cayley_hyperdet(&a.contract(&b, slot).unwrap(), &limits).unwrap();
        prop_assert_eq!(lhs, det_classical(&b) * cayley_hyperdet(&a, &limits).unwrap());
    }

    #[test]
    fn cayley_is_invariant_under_unimodular_action(a in hypermatrix3(), b in unimodular3(), slot in 0usize..4) {
        let limits = Limits::default();
        prop_assert_eq!(det_classical(&b), rf(1));
        let moved = a.contract(&b, slot).unwrap();
        prop_assert_eq!(cayley_hyperdet(&moved, &limits).unwrap(), cayley_hyperdet(&a, &limits).unwrap());
    }

    #[test]
    fn basis_change_round_trips(coeffs in prop::collection::vec(-3i64..=3, 7)) {
        let f = SymFun::from_terms(Basis::Power, partitions(5).into_iter().zip(coeffs.into_iter().map(rf)));
        let m = f.to_basis(Basis::Monomial);
        prop_assert_eq!(m.basis(), Basis::Monomial);
        let back = m.to_basis(Basis::Power);
        prop_assert_eq!(back.coeffs(), f.coeffs());
    }

    #[test]
    fn multiplication_commutes_across_bases(a in prop::collection::vec(-2i64..=2, 3), b in prop::collection::vec(-2i64..=2, 2)) {
        let f = SymFun::from_terms(Basis::Power, partitions(3).into_iter().zip(a.into_iter().map(rf)));
        let g = SymFun::from_terms(Basis::Monomial, partitions(2).into_iter().zip(b.into_iter().map(rf)));
        prop_assert_eq!(f.multiply(&g), g.multiply(&f));
    }
}

#[test]
fn asm_invariants_through_side_five() {
    for n in 1..=5 {
        let all: Vec<Asm> = asm::enumerate(n).unwrap().collect();
        assert_eq!(num_bigint::BigInt::from(all.len()), asm::count_formula(n));
        let perms = all.iter().filter(|x| x.is_permutation()).count();
        assert_eq!(perms, (1..=n).product::<usize>());
        for x in &all {
            assert!(asm::validate(&x.rows()).unwrap());
            assert!(asm::validate(&x.transpose().rows()).unwrap());
            assert_eq!(x.nonzeros().count(), n + 2 * x.negative_count());
            assert_eq!(x.transpose().inversion_number(), x.inversion_number());
        }
    }
}

#[test]
fn macdonald_is_triangular_and_biorthogonal() {
    for m in 1..=2 {
        let parts = partitions(4);
        let ps: Vec<SymFun> = parts.iter().map(|l| macdonald_p(l, m).unwrap()).collect();
        let qs: Vec<SymFun> = parts.iter().map(|l| macdonald_q(l, m).unwrap()).collect();
        for (l, p) in parts.iter().zip(&ps) {
            let in_m = p.to_basis(Basis::Monomial);
            assert_eq!(in_m.coeff(l), rf(1));
            for mu in in_m.coeffs().keys() {
                assert!(mu.dominated_by(l), "{mu} appears in P{l}");
            }
        }
        for (i, p) in ps.iter().enumerate() {
            for (j, q) in qs.iter().enumerate() {
                let want = if i == j { rf(1) } else { rf(0) };
                assert_eq!(scalar_product_qt(p, q, m).unwrap(), want);
            }
        }
    }
}

#[test]
fn macdonald_at_m_one_is_schur() {
    for w in 1..=5 {
        for l in partitions(w) {
            assert_eq!(macdonald_p(&l, 1).unwrap(), schur_jacobi_trudi(&l), "{l}");
        }
    }
}

#[test]
fn dyson_coefficient_is_homogeneous_of_degree_sk() {
    let limits = Limits::default();
    for (k, s, m) in [(1, 2, 1), (2, 2, 1), (1, 2, 2), (1, 3, 1)] {
        let c = dyson_coefficient(k, s, m, &limits).unwrap();
        assert!(c.is_homogeneous());
        assert_eq!(c.degree(), Some(s * k));
        let _: &Partition = c.coeffs().keys().next().unwrap();
    }
}
