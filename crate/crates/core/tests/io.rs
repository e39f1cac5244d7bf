use plusone::cocycle::Cocycle;
use plusone::fibration::random_normal;
use plusone::io::{canonical, parse_json, FromJson, ToJson};
use plusone::projstruct::ProjectiveStructure;
use plusone::scalar::{GaussianRational as Q, Ring};
use plusone::symmetry::GroupElement;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gaussian_rationals_print_and_parse(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
        let z = Q::from_parts(a, b, c, d);
        prop_assert_eq!(z.to_string().parse::<Q>().unwrap(), z.clone());
        let [re, im] = z.to_string_pair();
        prop_assert_eq!(Q::from_string_pair(&re, &im).unwrap(), z);
    }

    #[test]
    fn cocycles_round_trip(seed in any::<u64>()) {
        let phi = random_normal::<Q>(&mut ChaCha8Rng::seed_from_u64(seed), 7, 5, 4);
        let text = canonical(&phi.to_json());
        prop_assert_eq!(Cocycle::<Q>::from_json(&parse_json(&text).unwrap()).unwrap(), phi);
    }

    #[test]
    fn float_cocycles_round_trip(seed in any::<u64>()) {
        let phi = random_normal::<Complex64>(&mut ChaCha8Rng::seed_from_u64(seed), 6, 5, 4);
        let back = Cocycle::<Complex64>::from_json(&phi.to_json()).unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn group_elements_round_trip(a in -9i64..9, b in -9i64..9, c in -9i64..9, t in 1i64..9) {
        let g = GroupElement::new(Q::from_frac(a, 2), Q::from_frac(b, 3), Q::from_frac(c, 5), Q::from_frac(t, 7)).unwrap();
        prop_assert_eq!(GroupElement::<Q>::from_json(&g.to_json()).unwrap(), g);
    }
}

#[test]
fn structures_round_trip_and_accept_model_input() {
    let from_model = parse_json(r#"{"model": "ii.a", "params": ["1", "-1"]}"#).unwrap();
    let pi = ProjectiveStructure::<Q>::from_json(&from_model).unwrap();
    assert_eq!(ProjectiveStructure::<Q>::from_json(&pi.to_json()).unwrap(), pi);
    let from_exprs = parse_json(r#"{"exprs": ["exp(x)", "-1", "0", "exp(-2*x)"], "basepoint": ["0", "0"], "N": 8}"#).unwrap();
    let pj = ProjectiveStructure::<Q>::from_json(&from_exprs).unwrap();
    assert_eq!(pj, pi.with_order(pj.order()));
}

#[test]
fn group_element_accepts_array_form() {
    let g = GroupElement::<Q>::from_json(&parse_json(r#"["1/2", "0", "-1", "3"]"#).unwrap()).unwrap();
    assert_eq!(g, GroupElement::new(Q::from_frac(1, 2), Q::zero(), Q::from_frac(-1, 1), Q::from_frac(3, 1)).unwrap());
}
