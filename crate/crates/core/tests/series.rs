use plusone::scalar::{GaussianRational as Q, Ring};
use plusone::series::{compose_bi, BiSeries, Trunc, USeries};
use proptest::prelude::*;

const N: usize = 6;

fn rat() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4, -3i64..=3).prop_map(|(a, b, c)| Q::from_parts(a, b, c, 2))
}

fn bi(constant: bool) -> impl Strategy<Value = BiSeries<Q>> {
    proptest::collection::vec((0i32..=3, 0usize..=3, rat()), 0..6).prop_flat_map(move |terms| {
        rat().prop_map(move |c0| {
            let mut s = BiSeries::from_terms(terms.clone(), N, Trunc::Total);
            if constant {
                s = s.filter(|m, n| m != 0 || n != 0).add(&BiSeries::constant(c0.clone(), N, Trunc::Total));
            }
            s
        })
    })
}

fn uni() -> impl Strategy<Value = USeries<Q>> {
    proptest::collection::vec(rat(), N + 1).prop_map(|c| USeries::new(c, N))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in bi(false), b in bi(false), c in bi(false)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn reciprocal_inverts(a in bi(true)) {
        prop_assume!(!a.get(0, 0).is_zero());
        prop_assert_eq!(a.mul(&a.reciprocal().unwrap()), BiSeries::one(N, Trunc::Total));
    }

    #[test]
    fn leibniz(a in bi(false), b in bi(false)) {
        let lhs = a.mul(&b).d_dx();
        let rhs = a.d_dx().mul(&b).add(&a.mul(&b.d_dx()));
        prop_assert_eq!(lhs.with_order(N - 1), rhs.with_order(N - 1));
    }

    #[test]
    fn reversion_is_compositional_inverse(mut f in uni(), lead in rat()) {
        prop_assume!(!lead.is_zero());
        f.set(0, Q::zero());
        f.set(1, lead);
        let g = f.revert().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), USeries::identity(N));
        prop_assert_eq!(g.compose(&f).unwrap(), USeries::identity(N));
    }

    #[test]
    fn rational_power_roundtrip(mut f in uni()) {
        f.set(0, Q::one());
        let cube_root = f.pow_rational(1, 3).unwrap();
        prop_assert_eq!(cube_root.mul(&cube_root).mul(&cube_root), f);
    }

    #[test]
    fn identity_substitution(a in bi(true)) {
        let x = BiSeries::x(N, Trunc::Total);
        let y = BiSeries::y(N, Trunc::Total);
        prop_assert_eq!(compose_bi(&a, &x, &y).unwrap(), a);
    }
}

#[test]
fn binomial_coefficients() {
    let f = USeries::new(vec![Q::one(), Q::from_i64(-1)], N);
    let g = f.pow_rational(-1, 2).unwrap();
    let want = [(1, 1), (1, 2), (3, 8), (5, 16), (35, 128)];
    for (k, (n, d)) in want.iter().enumerate() {
        assert_eq!(g.coeff(k), Q::from_frac(*n, *d));
    }
}
