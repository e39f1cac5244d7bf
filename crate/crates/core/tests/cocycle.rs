use plusone::cocycle::{conjugate, reduce_to_normal, ChartMap, Cocycle};
use plusone::fibration::{detect, kill_order4, random_normal, Classification};
use plusone::fixtures::{c_family, phi0, special_covering};
use plusone::scalar::{GaussianRational as Q, Ring};
use plusone::series::USeries;
use plusone::symmetry::{act, equivalent, GroupElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 7;

fn rat() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(a, b)| Q::from_frac(a, b))
}

fn element() -> impl Strategy<Value = GroupElement<Q>> {
    (rat(), rat(), rat(), rat().prop_filter("theta", |t| !t.is_zero()))
        .prop_map(|(a, b, c, t)| GroupElement::new(a, b, c, t).unwrap())
}

fn normal() -> impl Strategy<Value = Cocycle<Q>> {
    any::<u64>().prop_map(|s| random_normal::<Q>(&mut ChaCha8Rng::seed_from_u64(s), N, 3, 3))
}

fn chart() -> impl Strategy<Value = ChartMap<Q>> {
    (proptest::collection::vec(rat(), 3), proptest::collection::vec(rat(), 3), proptest::collection::vec(rat(), 2)).prop_map(
        |(a, b, p)| {
            let alpha = USeries::new([vec![Q::one()], a].concat(), N);
            let beta = USeries::new([vec![Q::zero()], b].concat(), N);
            let phi = USeries::new([vec![Q::zero(), Q::one()], p].concat(), N);
            ChartMap::new(alpha, beta, phi).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn action_is_a_left_action(phi in normal(), g1 in element(), g2 in element()) {
        let nested = act(&g1, &act(&g2, &phi).unwrap()).unwrap();
        prop_assert_eq!(act(&g1.compose(&g2), &phi).unwrap(), nested);
    }

    #[test]
    fn equivalence_finds_the_moving_element(phi in normal(), g in element()) {
        let moved = act(&g, &phi).unwrap();
        let w = equivalent(&phi, &moved).unwrap().expect("orbit mates are equivalent");
        prop_assert_eq!(act(&w, &phi).unwrap(), moved);
    }

    #[test]
    fn reduction_lands_in_the_orbit(phi in normal(), p0 in chart(), pinf in chart()) {
        let raw = conjugate(&pinf, &phi, &p0).unwrap();
        prop_assert!(raw.is_prenormal());
        let r = reduce_to_normal(&raw).unwrap();
        prop_assert!(r.normal.is_normal());
        prop_assert_eq!(conjugate(&r.psi_inf, &raw, &r.psi_0).unwrap(), r.normal.clone());
        prop_assert!(equivalent(&phi, &r.normal).unwrap().is_some());
    }
}

#[test]
fn c_family_is_the_gamma_orbit_of_phi0() {
    let c = Q::from_frac(-3, 4);
    assert_eq!(act(&GroupElement::unipotent(Q::zero(), Q::zero(), c.clone()), &phi0(N)).unwrap(), c_family(&c, N).unwrap());
}

#[test]
fn covering_invariants() {
    let phi = special_covering::<Q>(N).unwrap();
    assert_eq!(detect(&phi, N, 0).unwrap().classification, Classification::Two);
    // a(-3,4) = 0 and b(-2,3) = 1/2: roots gamma = 0 and gamma = 1
    let (killed, g) = kill_order4(&phi).unwrap();
    assert!(killed.a_coeff(-3, 4).is_zero());
    assert!(g.gamma.is_zero() || g.gamma.is_one());
}
