//! Pencils of foliations `omega_t = omega_0 + t omega_inf`, their projective
//! structures, Riccati integrability, web curvature and cross-ratios.

use crate::error::{Error, Result};
use crate::expr::{log1p_series, Expr};
use crate::projstruct::{zp_add, zp_mul, ProjectiveStructure, ZPoly};
use crate::scalar::{Field, Ring};
use crate::series::{compose_u, BiSeries, Trunc};

/// A pencil member in homogeneous form: `s omega_0 + t omega_inf`.
pub type Member<F> = (F, F);

pub fn finite<F: Field>(t: F) -> Member<F> {
    (F::one(), t)
}

pub fn infinity<F: Field>() -> Member<F> {
    (F::zero(), F::one())
}

/// A 1-form `P dx + Q dy`.
#[derive(Clone, Debug)]
pub struct Form<F> {
    pub p: BiSeries<F>,
    pub q: BiSeries<F>,
}

impl<F: Field> Form<F> {
    pub fn new(p: BiSeries<F>, q: BiSeries<F>) -> Self {
        let order = p.order().min(q.order());
        Form { p: p.with_trunc(Trunc::Total).with_order(order), q: q.with_trunc(Trunc::Total).with_order(order) }
    }

    /// The form `e dx - dy`, whose foliation is `dy = e dx`.
    pub fn from_slope(e: &BiSeries<F>) -> Self {
        Form::new(e.clone(), BiSeries::constant(F::one().neg_ref(), e.order(), Trunc::Total))
    }

    fn scale_by(&self, f: &BiSeries<F>) -> Self {
        Form::new(self.p.mul(f), self.q.mul(f))
    }

    fn combine(&self, a: &F, o: &Self, b: &F) -> Self {
        Form::new(self.p.scale(a).add(&o.p.scale(b)), self.q.scale(a).add(&o.q.scale(b)))
    }

    /// Slope `-P/Q` of the foliation.
    pub fn slope(&self) -> Result<BiSeries<F>> {
        if self.q.get(0, 0).is_zero() {
            return Err(Error::VerticalAtBase);
        }
        Ok(self.p.mul(&self.q.reciprocal()?).neg())
    }
}

#[derive(Clone, Debug)]
pub struct Pencil<F> {
    pub omega0: Form<F>,
    pub omega_inf: Form<F>,
    pub basepoint: (F, F),
    /// Closed forms of `P, Q, R, S` when known.
    pub closed: Option<[Expr; 4]>,
}

impl<F: Field> Pencil<F> {
    pub fn new(omega0: Form<F>, omega_inf: Form<F>, basepoint: (F, F)) -> Result<Self> {
        let det = omega0.p.mul(&omega_inf.q).sub(&omega0.q.mul(&omega_inf.p));
        if det.get(0, 0).is_zero() {
            return Err(Error::DegeneratePencil);
        }
        Ok(Pencil { omega0, omega_inf, basepoint, closed: None })
    }

    /// `<P dx + Q dy, R dx + S dy>` from closed forms.
    pub fn from_exprs(pqrs: [Expr; 4], basepoint: (F, F), order: usize) -> Result<Self> {
        let s = |k: usize| pqrs[k].taylor(&basepoint, order);
        let mut pencil = Pencil::new(Form::new(s(0)?, s(1)?), Form::new(s(2)?, s(3)?), basepoint.clone())?;
        pencil.closed = Some(pqrs);
        Ok(pencil)
    }

    pub fn order(&self) -> usize {
        self.omega0.p.order()
    }

    pub fn member(&self, m: &Member<F>) -> Form<F> {
        self.omega0.combine(&m.0, &self.omega_inf, &m.1)
    }

    /// Slope field of `omega_0 + t omega_inf`.
    pub fn slope(&self, t: &F) -> Result<BiSeries<F>> {
        self.member(&finite(t.clone())).slope()
    }

    pub fn slope_of(&self, m: &Member<F>) -> Result<BiSeries<F>> {
        self.member(m).slope()
    }
}

fn sample_members<F: Field>() -> Vec<Member<F>> {
    let mut out = vec![infinity()];
    for (n, d) in [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (3, 1), (-1, 2), (5, 1), (-3, 1)] {
        out.push(finite(F::from_frac(n, d)));
    }
    out
}

/// Members with pairwise distinct, non-vertical slopes at the basepoint.
fn transverse_members<F: Field>(pencil: &Pencil<F>, count: usize) -> Result<Vec<(Member<F>, BiSeries<F>)>> {
    let mut chosen: Vec<(Member<F>, BiSeries<F>)> = Vec::new();
    for m in sample_members::<F>() {
        let Ok(e) = pencil.slope_of(&m) else { continue };
        let e0 = e.get(0, 0);
        if chosen.iter().all(|(_, o)| !o.get(0, 0).sub_ref(&e0).is_zero()) {
            chosen.push((m, e));
        }
        if chosen.len() == count {
            return Ok(chosen);
        }
    }
    Err(Error::DegeneratePencil)
}

/// The projective structure for which every member of the pencil is geodesic.
///
/// `e_x + e e_y` is interpolated as a cubic in `e` through four members; one order is lost.
pub fn structure_from_pencil<F: Field>(pencil: &Pencil<F>) -> Result<ProjectiveStructure<F>> {
    let members = transverse_members(pencil, 4)?;
    let order = pencil.order().saturating_sub(1);
    let nodes: Vec<BiSeries<F>> = members.iter().map(|(_, e)| e.with_order(order)).collect();
    let values: Vec<BiSeries<F>> = members.iter().map(|(_, e)| e.d_dx().add(&e.mul(&e.d_dy())).with_order(order)).collect();
    // Newton divided differences
    let mut table = vec![values];
    for j in 1..4 {
        let prev = &table[j - 1];
        let mut next = Vec::new();
        for i in j..4 {
            let num = prev[i - j + 1].sub(&prev[i - j]);
            let den = nodes[i].sub(&nodes[i - j]);
            next.push(num.mul(&den.reciprocal()?));
        }
        table.push(next);
    }
    let mut poly: ZPoly<F> = vec![table[0][0].clone()];
    let mut basis: ZPoly<F> = vec![BiSeries::one(order, Trunc::Total)];
    for j in 1..4 {
        basis = zp_mul(&basis, &vec![nodes[j - 1].neg(), BiSeries::one(order, Trunc::Total)]);
        let term: ZPoly<F> = basis.iter().map(|c| c.mul(&table[j][0])).collect();
        poly = zp_add(&poly, &term);
    }
    poly.resize(4, BiSeries::zero(order, Trunc::Total));
    let coeffs = [poly[0].clone(), poly[1].clone(), poly[2].clone(), poly[3].clone()];
    Ok(ProjectiveStructure::new(coeffs, pencil.basepoint.clone()))
}

/// `omega = dz + (g0 + g1 z + g2 z^2) dx + (h0 + h1 z + h2 z^2) dy`.
#[derive(Clone, Debug)]
pub struct RiccatiForm<F> {
    pub g: [BiSeries<F>; 3],
    pub h: [BiSeries<F>; 3],
}

impl<F: Field> RiccatiForm<F> {
    /// `dz + (F + z G)(dy - z dx)`.
    pub fn trivial_family(f: &BiSeries<F>, g: &BiSeries<F>) -> Self {
        let zero = BiSeries::zero(f.order(), Trunc::Total);
        RiccatiForm { g: [zero.clone(), f.neg(), g.neg()], h: [f.clone(), g.clone(), zero] }
    }

    /// The Riccati foliation whose leaves are the graphs `z = e_t` of the members.
    pub fn from_pencil(pencil: &Pencil<F>) -> Result<Self> {
        let (p, q) = (&pencil.omega0.p, &pencil.omega0.q);
        let (r, s) = (&pencil.omega_inf.p, &pencil.omega_inf.q);
        let delta_inv = r.mul(q).sub(&p.mul(s)).reciprocal()?;
        let part = |d: fn(&BiSeries<F>) -> BiSeries<F>| -> [BiSeries<F>; 3] {
            let (px, qx, rx, sx) = (d(p), d(q), d(r), d(s));
            [
                r.mul(&px).sub(&p.mul(&rx)).mul(&delta_inv),
                r.mul(&qx).add(&s.mul(&px)).sub(&p.mul(&sx)).sub(&q.mul(&rx)).mul(&delta_inv),
                s.mul(&qx).sub(&q.mul(&sx)).mul(&delta_inv),
            ]
        };
        Ok(RiccatiForm { g: part(BiSeries::d_dx), h: part(BiSeries::d_dy) })
    }
}

/// The `z^0, z^1, z^2` coefficients of `omega ^ d omega` (the `z^3` one vanishes identically).
pub fn riccati_integrability<F: Field>(w: &RiccatiForm<F>) -> [BiSeries<F>; 3] {
    let [g0, g1, g2] = &w.g;
    let [h0, h1, h2] = &w.h;
    let two = F::from_i64(2);
    let order = g0.order().min(h0.order()).saturating_sub(1);
    [
        h0.d_dx().sub(&g0.d_dy()).add(&h0.mul(g1)).sub(&g0.mul(h1)),
        h1.d_dx().sub(&g1.d_dy()).add(&h0.mul(g2).sub(&g0.mul(h2)).scale(&two)),
        h2.d_dx().sub(&g2.d_dy()).add(&g2.mul(h1)).sub(&g1.mul(h2)),
    ]
    .map(|c| c.with_order(order))
}

/// First integral of `P dx + Q dy`, normalized to restrict to `y` on `x = 0`
/// (or to `x` on `y = 0` when the foliation is vertical at the basepoint).
pub fn first_integral<F: Field>(omega: &Form<F>) -> Result<BiSeries<F>> {
    let order = omega.p.order();
    let (p0, q0) = (omega.p.get(0, 0), omega.q.get(0, 0));
    let x = BiSeries::x(order, Trunc::Total);
    let y = BiSeries::y(order, Trunc::Total);
    if !q0.is_zero() {
        // F_x = (P/Q) F_y
        let ratio = omega.p.mul(&omega.q.reciprocal()?);
        let mut f = y;
        for _ in 0..=order {
            let next = BiSeries::y(order, Trunc::Total).add(&ratio.mul(&f.d_dy()).integrate_x()?.with_order(order));
            if next == f {
                break;
            }
            f = next;
        }
        Ok(f)
    } else if !p0.is_zero() {
        // F_y = (Q/P) F_x
        let ratio = omega.q.mul(&omega.p.reciprocal()?);
        let mut f = x;
        for _ in 0..=order {
            let next = BiSeries::x(order, Trunc::Total).add(&ratio.mul(&f.d_dx()).integrate_y().with_order(order));
            if next == f {
                break;
            }
            f = next;
        }
        Ok(f)
    } else {
        Err(Error::DegeneratePencil)
    }
}

/// `omega = lambda dF`; `lambda` from whichever partial of `F` is invertible.
fn integrating_factor<F: Field>(omega: &Form<F>, f: &BiSeries<F>) -> Result<BiSeries<F>> {
    let (fx, fy) = (f.d_dx(), f.d_dy());
    if !fx.get(0, 0).is_zero() {
        Ok(omega.p.mul(&fx.reciprocal()?))
    } else {
        Ok(omega.q.mul(&fy.reciprocal()?))
    }
}

/// `log(a / a(0))` for a series with invertible constant term.
fn log_normalized<F: Field>(a: &BiSeries<F>) -> Result<BiSeries<F>> {
    let a0 = a.get(0, 0);
    let w = a.scale(&a0.try_inv().ok_or(Error::NotInvertible)?).sub(&BiSeries::one(a.order(), Trunc::Total));
    compose_u(&log1p_series(a.order()), &w)
}

/// Web curvature of the pencil as the coefficient of `dx ^ dy`, from members 0, 1, infinity.
pub fn curvature<F: Field>(pencil: &Pencil<F>) -> Result<BiSeries<F>> {
    curvature_from(pencil, [finite(F::zero()), finite(F::one()), infinity()])
}

/// Web curvature computed from the 3-web of members `(m0, m1, m_inf)`.
pub fn curvature_from<F: Field>(pencil: &Pencil<F>, members: [Member<F>; 3]) -> Result<BiSeries<F>> {
    let [m0, m1, mi] = members;
    // c0 m0 + ci mi = m1
    let det = m0.0.mul_ref(&mi.1).sub_ref(&m0.1.mul_ref(&mi.0));
    let det_inv = det.try_inv().ok_or(Error::DegeneratePencil)?;
    let c0 = m1.0.mul_ref(&mi.1).sub_ref(&m1.1.mul_ref(&mi.0)).mul_ref(&det_inv);
    let ci = m0.0.mul_ref(&m1.1).sub_ref(&m0.1.mul_ref(&m1.0)).mul_ref(&det_inv);
    if c0.is_zero() || ci.is_zero() {
        return Err(Error::DegeneratePencil);
    }
    let w0 = pencil.member(&(m0.0.mul_ref(&c0), m0.1.mul_ref(&c0)));
    let wi = pencil.member(&(mi.0.mul_ref(&ci), mi.1.mul_ref(&ci)));
    let u = first_integral(&w0)?;
    let v = first_integral(&wi)?;
    let a = integrating_factor(&wi, &v)?.mul(&integrating_factor(&w0, &u)?.reciprocal()?);
    let log_a = log_normalized(&a)?;
    let (ux, uy, vx, vy) = (u.d_dx(), u.d_dy(), v.d_dx(), v.d_dy());
    let jac = ux.mul(&vy).sub(&uy.mul(&vx));
    if jac.get(0, 0).is_zero() {
        return Err(Error::DegeneratePencil);
    }
    let jac_inv = jac.reciprocal()?;
    let d_u = |s: &BiSeries<F>| vy.mul(&s.d_dx()).sub(&vx.mul(&s.d_dy())).mul(&jac_inv);
    let d_v = |s: &BiSeries<F>| ux.mul(&s.d_dy()).sub(&uy.mul(&s.d_dx())).mul(&jac_inv);
    let k = d_v(&d_u(&log_a)).mul(&jac);
    Ok(k.with_order(pencil.order().saturating_sub(2)))
}

/// `(e1 - e3)(e2 - e4) / ((e2 - e3)(e1 - e4))`.
pub fn cross_ratio<F: Field>(e: [&BiSeries<F>; 4]) -> Result<BiSeries<F>> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if e[i].get(0, 0).sub_ref(&e[j].get(0, 0)).is_zero() {
                return Err(Error::CoincidentFoliations);
            }
        }
    }
    let d = |i: usize, j: usize| e[i].sub(e[j]);
    Ok(d(0, 2).mul(&d(1, 3)).mul(&d(1, 2).mul(&d(0, 3)).reciprocal()?))
}

/// Same formula on plain scalars.
pub fn cross_ratio_scalar<F: Field>(e: [&F; 4]) -> Result<F> {
    let d = |i: usize, j: usize| e[i].sub_ref(e[j]);
    let den = d(1, 2).mul_ref(&d(0, 3));
    let inv = den.try_inv().ok_or(Error::CoincidentFoliations)?;
    Ok(d(0, 2).mul_ref(&d(1, 3)).mul_ref(&inv))
}

/// The unique pencil containing the three foliations as members `0`, `1`, `infinity`.
pub fn complete_web_to_pencil<F: Field>(w0: &Form<F>, w1: &Form<F>, wi: &Form<F>, basepoint: (F, F)) -> Result<Pencil<F>> {
    let det = w0.p.mul(&wi.q).sub(&w0.q.mul(&wi.p));
    if det.get(0, 0).is_zero() {
        return Err(Error::DegenerateWeb);
    }
    let det_inv = det.reciprocal()?;
    let a = w1.p.mul(&wi.q).sub(&w1.q.mul(&wi.p)).mul(&det_inv);
    let b = w0.p.mul(&w1.q).sub(&w0.q.mul(&w1.p)).mul(&det_inv);
    if a.get(0, 0).is_zero() || b.get(0, 0).is_zero() {
        return Err(Error::DegenerateWeb);
    }
    Pencil::new(w0.scale_by(&a), wi.scale_by(&b), basepoint).map_err(|_| Error::DegenerateWeb)
}

/// Slope-field version of [`complete_web_to_pencil`].
pub fn complete_slopes_to_pencil<F: Field>(
    e0: &BiSeries<F>,
    e1: &BiSeries<F>,
    ei: &BiSeries<F>,
    basepoint: (F, F),
) -> Result<Pencil<F>> {
    complete_web_to_pencil(&Form::from_slope(e0), &Form::from_slope(e1), &Form::from_slope(ei), basepoint)
}

/// Member of the nodal family: the `(alpha e^x, beta, 0, e^{-2x})` structure and its pencil.
#[derive(Clone, Debug)]
pub struct NodalMember<F> {
    pub alpha: F,
    pub beta: F,
    pub structure: ProjectiveStructure<F>,
    pub pencil: Pencil<F>,
}

/// `27 alpha^2 + 4 beta^3 - 12 beta^2 + 9 beta - 2`.
pub fn nodal_cubic<R: Ring>(alpha: &R, beta: &R) -> R {
    let k = |n: i64| R::from_i64(n);
    let b2 = beta.mul_ref(beta);
    k(27).mul_ref(&alpha.mul_ref(alpha))
        .add_ref(&k(4).mul_ref(&b2.mul_ref(beta)))
        .sub_ref(&k(12).mul_ref(&b2))
        .add_ref(&k(9).mul_ref(beta))
        .sub_ref(&k(2))
}

/// `(alpha, beta) = (gamma (2 gamma^2 - 1), 2 - 3 gamma^2)`, a parametrization of the nodal cubic.
pub fn nodal_parameters<R: Ring>(gamma: &R) -> (R, R) {
    let g2 = gamma.mul_ref(gamma);
    let alpha = gamma.mul_ref(&R::from_i64(2).mul_ref(&g2).sub_ref(&R::one()));
    let beta = R::from_i64(2).sub_ref(&R::from_i64(3).mul_ref(&g2));
    (alpha, beta)
}

pub fn nodal_family<F: Field>(gamma: &F, order: usize) -> Result<NodalMember<F>> {
    let g2 = gamma.mul_ref(gamma);
    let (alpha, beta) = nodal_parameters(gamma);
    // Q = -(y + 2 gamma e^x) must not vanish at the basepoint (0, y0)
    let two_gamma = F::from_i64(2).mul_ref(gamma);
    let y0 = if F::one().add_ref(&two_gamma).is_zero() { F::from_i64(2) } else { F::one() };
    let basepoint = (F::zero(), y0);
    let g = Expr::scalar(gamma);
    let ex: Expr = Expr::exp(Expr::X);
    let c2 = Expr::scalar(&F::from_i64(2).mul_ref(&g2).sub_ref(&F::one()));
    let pqrs = [
        ex.clone() * (g.clone() * Expr::Y + c2 * ex.clone()),
        -(Expr::Y + Expr::int(2) * g.clone() * ex.clone()),
        -(g * ex),
        Expr::int(1),
    ];
    // one extra order so the structure is known to `order`
    let pencil = Pencil::from_exprs(pqrs, basepoint.clone(), order + 1)?;
    let exprs = [
        Expr::scalar(&alpha) * Expr::exp(Expr::X),
        Expr::scalar(&beta),
        Expr::int(0),
        Expr::exp(Expr::int(-2) * Expr::X),
    ];
    let structure = ProjectiveStructure::from_exprs(&exprs, basepoint, order)?;
    Ok(NodalMember { alpha, beta, structure, pencil })
}

/// The two pencils `(y^2 dx - (xy +- i) dy) + t(x^2 dy - (xy -+ i) dx)` at `(1, 0)`.
/// Every member is geodesic and the line `y = t x` is a leaf of the member `t` in both.
pub fn sl2_pencils<F: Field>(order: usize) -> Result<(Pencil<F>, Pencil<F>)> {
    let make = |sign: i64| -> Result<Pencil<F>> {
        let k = Expr::scalar(&F::i().mul_ref(&F::from_i64(sign)));
        let xy = Expr::X * Expr::Y;
        let pqrs = [Expr::Y.pow(2), -(xy.clone() + k.clone()), -(xy - k), Expr::X.pow(2)];
        Pencil::from_exprs(pqrs, (F::one(), F::zero()), order)
    };
    Ok((make(1)?, make(-1)?))
}

/// `omega_t(1, t)` restricted to the line `y = t x`, as a series in `x` at the basepoint.
pub fn line_leaf_residual<F: Field>(pencil: &Pencil<F>, t: &F) -> Result<BiSeries<F>> {
    let [p, q, r, s] = pencil.closed.clone().ok_or_else(|| Error::BadParams {
        tag: "pencil".into(),
        reason: "closed forms needed".into(),
    })?;
    let tt = Expr::scalar(t);
    let line = tt.clone() * Expr::X;
    let form = (p + tt.clone() * r).subst(&Expr::X, &line) + tt.clone() * (q + tt * s).subst(&Expr::X, &line);
    form.taylor(&pencil.basepoint, pencil.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projstruct::geodesic_residual;
    use crate::scalar::GaussianRational as Q;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    fn origin() -> (Q, Q) {
        (Q::zero(), Q::zero())
    }

    fn exy_pencil(order: usize) -> Pencil<Q> {
        Pencil::from_exprs([e("1"), e("0"), e("0"), e("exp(x*y)")], origin(), order).unwrap()
    }

    #[test]
    fn pencil_structure_of_exy() {
        let pi = structure_from_pencil(&exy_pencil(9)).unwrap();
        assert!(pi.a.is_zero() && pi.d.is_zero());
        assert_eq!(pi.b, e("-y").taylor(&origin(), 8).unwrap());
        assert_eq!(pi.c, e("-x").taylor(&origin(), 8).unwrap());
    }

    #[test]
    fn exy_curvature_is_one() {
        let k = curvature(&exy_pencil(10)).unwrap();
        assert_eq!(k, BiSeries::one(8, Trunc::Total));
        let other = curvature_from(&exy_pencil(10), [finite(Q::from_i64(2)), finite(Q::from_i64(-1)), finite(Q::from_frac(1, 3))]).unwrap();
        assert_eq!(other, k);
    }

    #[test]
    fn flat_pencil_has_zero_curvature() {
        let p = Pencil::from_exprs([e("1"), e("0"), e("0"), e("exp(x+y)")], origin(), 8).unwrap();
        assert!(curvature(&p).unwrap().is_zero());
    }

    #[test]
    fn trivial_riccati_family() {
        let (a, b) = (Q::from_frac(2, 3), Q::from_frac(-1, 5));
        let den = e(&format!("1-({a})*x-({b})*y"));
        let f = (Expr::scalar(&a) / den.clone()).taylor(&origin(), 9).unwrap();
        let g = (Expr::scalar(&b) / den).taylor(&origin(), 9).unwrap();
        assert!(riccati_integrability(&RiccatiForm::trivial_family(&f, &g)).iter().all(|c| c.is_zero()));
        let x = e("x").taylor(&origin(), 9).unwrap();
        let zero = BiSeries::zero(9, Trunc::Total);
        let r = riccati_integrability(&RiccatiForm::trivial_family(&x, &zero));
        assert_eq!(r[0], e("1-x^2").taylor(&origin(), 8).unwrap());
    }

    #[test]
    fn pencil_riccati_is_integrable() {
        let r = RiccatiForm::from_pencil(&exy_pencil(8)).unwrap();
        assert!(riccati_integrability(&r).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn first_integrals() {
        let f = first_integral(&Form::new(e("y").taylor(&origin(), 8).unwrap(), e("1").taylor(&origin(), 8).unwrap())).unwrap();
        assert_eq!(f, e("y*exp(x)").taylor(&origin(), 8).unwrap());
        let f = first_integral(&Form::new(e("1").taylor(&origin(), 8).unwrap(), e("0").taylor(&origin(), 8).unwrap())).unwrap();
        assert_eq!(f, BiSeries::x(8, Trunc::Total));
    }

    #[test]
    fn cross_ratio_of_constants() {
        let c = |n: i64| Q::from_i64(n);
        assert_eq!(cross_ratio_scalar([&c(0), &c(1), &c(2), &c(3)]).unwrap(), Q::from_frac(4, 3));
    }

    #[test]
    fn nodal_gamma_one() {
        let m = nodal_family(&Q::one(), 8).unwrap();
        assert_eq!((m.alpha.clone(), m.beta.clone()), (Q::one(), Q::from_i64(-1)));
        assert!(nodal_cubic(&m.alpha, &m.beta).is_zero());
        assert_eq!(structure_from_pencil(&m.pencil).unwrap(), m.structure);
    }

    #[test]
    fn sl2_pencils_geodesic_with_common_leaves() {
        let (pi, _) = crate::projstruct::catalog::<Q>("sl2", &[], 8).unwrap();
        let (plus, minus) = sl2_pencils::<Q>(9).unwrap();
        for pencil in [&plus, &minus] {
            for t in [0, 1, -1, 2] {
                let s = pencil.slope(&Q::from_i64(t)).unwrap();
                assert!(geodesic_residual(&s, &pi).is_zero(), "t={t} {:?}", geodesic_residual(&s, &pi));
                assert!(line_leaf_residual(pencil, &Q::from_i64(t)).unwrap().is_zero());
            }
        }
    }
}
