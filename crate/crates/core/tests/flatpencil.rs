use plusone::expr::Expr;
use plusone::flatpencil::{
    complete_slopes_to_pencil, cross_ratio, cross_ratio_scalar, curvature, finite, infinity, nodal_cubic, nodal_family,
    riccati_integrability, structure_from_pencil, Pencil, RiccatiForm,
};
use plusone::projstruct::{geodesic_residual, liouville};
use plusone::scalar::{Field, GaussianRational as Q, Ring};
use plusone::series::{BiSeries, Trunc};
use proptest::prelude::*;

const N: usize = 6;

fn e(s: &str) -> Expr {
    s.parse().unwrap()
}

fn origin() -> (Q, Q) {
    (Q::zero(), Q::zero())
}

fn rat() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=4).prop_map(|(a, b)| Q::from_frac(a, b))
}

fn sample_pencil() -> Pencil<Q> {
    Pencil::from_exprs([e("y"), e("1"), e("1+x*y"), e("x-2")], origin(), N).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn members_have_constant_cross_ratio(t in rat()) {
        prop_assume!(!t.is_zero() && !t.is_one() && t != Q::from_frac(1, 2));
        let p = sample_pencil();
        let sl = |m| p.slope_of(&m).unwrap();
        let (e0, e1, et, ei) = (sl(finite(Q::zero())), sl(finite(Q::one())), sl(finite(t.clone())), sl(infinity()));
        let cr = cross_ratio([&et, &e1, &e0, &ei]).unwrap();
        prop_assert_eq!(cr.clone(), BiSeries::constant(t, cr.order(), Trunc::Total));
    }

    #[test]
    fn members_are_geodesics_of_the_induced_structure(t in rat()) {
        prop_assume!(t != Q::from_frac(1, 2));
        let p = sample_pencil();
        let pi = structure_from_pencil(&p).unwrap();
        let slope = p.slope(&t).unwrap().with_order(pi.order());
        prop_assert!(geodesic_residual(&slope, &pi).is_zero());
    }

    #[test]
    fn nodal_parameters_lie_on_the_cubic(g in rat()) {
        let m = nodal_family(&g, 4).unwrap();
        prop_assert!(nodal_cubic(&m.alpha, &m.beta).is_zero());
    }
}

#[test]
fn scalar_cross_ratio_of_standard_points() {
    let t = Q::from_frac(7, 3);
    let cr = cross_ratio_scalar([&t, &Q::one(), &Q::zero(), &Q::from_i64(1000)]).unwrap();
    assert!((cr.to_c64() - t.to_c64()).norm() < 1e-2);
}

#[test]
fn three_slopes_complete_to_the_same_pencil() {
    let p = sample_pencil();
    let sl = |m| p.slope_of(&m).unwrap();
    let q = complete_slopes_to_pencil(&sl(finite(Q::zero())), &sl(finite(Q::one())), &sl(infinity()), origin()).unwrap();
    for t in [Q::from_i64(2), Q::from_frac(-1, 3)] {
        assert_eq!(q.slope(&t).unwrap(), p.slope(&t).unwrap());
    }
}

#[test]
fn coordinate_pencil_is_flat_with_zero_curvature() {
    let p: Pencil<Q> = Pencil::from_exprs([e("1"), e("0"), e("0"), e("1")], origin(), N).unwrap();
    let pi = structure_from_pencil(&p).unwrap();
    assert!(liouville(&pi).is_zero());
    assert!(curvature(&p).unwrap().is_zero());
}

#[test]
fn pencil_riccati_form_is_integrable() {
    let w = RiccatiForm::from_pencil(&sample_pencil()).unwrap();
    assert!(riccati_integrability(&w).iter().all(|r| r.is_zero()));
}
