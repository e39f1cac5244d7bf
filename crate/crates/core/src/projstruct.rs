//! Projective structures `y'' = A + B y' + C y'^2 + D y'^3` as Taylor series at a basepoint.
//!
//! All series are in local coordinates centered at `basepoint` and truncated by total degree.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::Field;
use crate::series::{compose_bi, BiSeries, Trunc, USeries};

/// A named closed form from which numeric values can be recomputed.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluator {
    pub id: String,
    pub params: Vec<String>,
}

impl Evaluator {
    /// The four coefficient expressions, if the id is known.
    pub fn exprs(&self) -> Result<[Expr; 4]> {
        let params: Vec<Expr> = self.params.iter().map(|p| p.parse()).collect::<Result<_>>()?;
        if self.id == "expr" {
            return match params.try_into() {
                Ok(four) => Ok(four),
                Err(_) => Err(Error::BadParams { tag: "expr".into(), reason: "four expressions expected".into() }),
            };
        }
        Ok(model(&self.id, &params)?.coeffs)
    }
}

#[derive(Clone, Debug)]
pub struct ProjectiveStructure<F> {
    pub a: BiSeries<F>,
    pub b: BiSeries<F>,
    pub c: BiSeries<F>,
    pub d: BiSeries<F>,
    pub basepoint: (F, F),
    pub evaluator: Option<Evaluator>,
}

impl<F: Field> PartialEq for ProjectiveStructure<F> {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && self.c == o.c && self.d == o.d && self.basepoint == o.basepoint
    }
}

fn zero_series<F: Field>(order: usize) -> BiSeries<F> {
    BiSeries::zero(order, Trunc::Total)
}

impl<F: Field> ProjectiveStructure<F> {
    pub fn new(coeffs: [BiSeries<F>; 4], basepoint: (F, F)) -> Self {
        let order = coeffs.iter().map(|s| s.order()).min().unwrap_or(0);
        let [a, b, c, d] = coeffs.map(|s| s.with_trunc(Trunc::Total).with_order(order));
        ProjectiveStructure { a, b, c, d, basepoint, evaluator: None }
    }

    /// The flat structure `y'' = 0`.
    pub fn flat(order: usize, basepoint: (F, F)) -> Self {
        let mut s = Self::new([zero_series(order), zero_series(order), zero_series(order), zero_series(order)], basepoint);
        s.evaluator = Some(Evaluator { id: "iv".into(), params: Vec::new() });
        s
    }

    /// Expand closed forms at the basepoint; the expressions are kept as the evaluator.
    pub fn from_exprs(exprs: &[Expr; 4], basepoint: (F, F), order: usize) -> Result<Self> {
        let coeffs = [
            exprs[0].taylor(&basepoint, order)?,
            exprs[1].taylor(&basepoint, order)?,
            exprs[2].taylor(&basepoint, order)?,
            exprs[3].taylor(&basepoint, order)?,
        ];
        let mut s = Self::new(coeffs, basepoint);
        s.evaluator = Some(Evaluator { id: "expr".into(), params: exprs.iter().map(|e| e.to_string()).collect() });
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn coeffs(&self) -> [&BiSeries<F>; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn with_order(&self, order: usize) -> Self {
        let mut s = Self::new(
            [self.a.with_order(order), self.b.with_order(order), self.c.with_order(order), self.d.with_order(order)],
            self.basepoint.clone(),
        );
        s.evaluator = self.evaluator.clone();
        s
    }

    /// `A + B f + C f^2 + D f^3`.
    pub fn cubic(&self, f: &BiSeries<F>) -> BiSeries<F> {
        self.d.mul(f).add(&self.c).mul(f).add(&self.b).mul(f).add(&self.a)
    }

    pub fn is_flat(&self) -> bool {
        self.coeffs().iter().all(|s| s.is_zero())
    }
}

/// Affine connection `d + Omega`, `Omega = (alpha beta; gamma delta)`, each entry `e1 dx + e2 dy`.
#[derive(Clone, Debug)]
pub struct AffineConnection<F> {
    pub alpha: [BiSeries<F>; 2],
    pub beta: [BiSeries<F>; 2],
    pub gamma: [BiSeries<F>; 2],
    pub delta: [BiSeries<F>; 2],
}

impl<F: Field> AffineConnection<F> {
    pub fn zero(order: usize) -> Self {
        let z = || [zero_series(order), zero_series(order)];
        AffineConnection { alpha: z(), beta: z(), gamma: z(), delta: z() }
    }
}

pub fn from_connection<F: Field>(omega: &AffineConnection<F>, basepoint: (F, F)) -> ProjectiveStructure<F> {
    let a = omega.gamma[0].neg();
    let b = omega.alpha[0].sub(&omega.delta[0]).sub(&omega.gamma[1]);
    let c = omega.beta[0].add(&omega.alpha[1]).sub(&omega.delta[1]);
    let d = omega.beta[1].clone();
    ProjectiveStructure::new([a, b, c, d], basepoint)
}

/// The trace-free torsion-free connection inducing `pi`.
pub fn trace_free_connection<F: Field>(pi: &ProjectiveStructure<F>) -> AffineConnection<F> {
    let third = F::from_frac(1, 3);
    let (b3, c3) = (pi.b.scale(&third), pi.c.scale(&third));
    AffineConnection {
        alpha: [b3.clone(), c3.clone()],
        beta: [c3.clone(), pi.d.clone()],
        gamma: [pi.a.neg(), b3.neg()],
        delta: [b3.neg(), c3.neg()],
    }
}

#[derive(Clone, Debug)]
pub struct LiouvillePair<F> {
    pub l1: BiSeries<F>,
    pub l2: BiSeries<F>,
}

impl<F: Field> LiouvillePair<F> {
    pub fn is_zero(&self) -> bool {
        self.l1.is_zero() && self.l2.is_zero()
    }
}

/// Liouville's two relative invariants, computed by formal differentiation (order drops by 2).
pub fn liouville<F: Field>(pi: &ProjectiveStructure<F>) -> LiouvillePair<F> {
    let (a, b, c, d) = (&pi.a, &pi.b, &pi.c, &pi.d);
    let k = |n: i64| F::from_i64(n);
    let l1 = b
        .d_dx()
        .d_dy()
        .scale(&k(2))
        .sub(&c.d_dx().d_dx())
        .sub(&a.d_dy().d_dy().scale(&k(3)))
        .sub(&a.mul(&d.d_dx()).scale(&k(6)))
        .sub(&a.d_dx().mul(d).scale(&k(3)))
        .add(&a.mul(c).d_dy().scale(&k(3)))
        .add(&b.mul(&c.d_dx()))
        .sub(&b.mul(&b.d_dy()).scale(&k(2)));
    let l2 = c
        .d_dx()
        .d_dy()
        .scale(&k(2))
        .sub(&b.d_dy().d_dy())
        .sub(&d.d_dx().d_dx().scale(&k(3)))
        .add(&a.d_dy().mul(d).scale(&k(6)))
        .add(&a.mul(&d.d_dy()).scale(&k(3)))
        .sub(&b.mul(d).d_dx().scale(&k(3)))
        .sub(&b.d_dy().mul(b))
        .add(&c.mul(&c.d_dx()).scale(&k(2)));
    let order = pi.order().saturating_sub(2);
    LiouvillePair { l1: l1.with_order(order), l2: l2.with_order(order) }
}

/// Coordinate changes, written in local coordinates at the basepoint.
#[derive(Clone, Debug)]
pub enum Change<F> {
    /// `(x, y) = (psi(X), Y)` with `psi(0) = 0`, `psi'(0) != 0`.
    XMap(USeries<F>),
    /// `(x, y) = (X, Y + phi(X))` with `phi(0) = 0`.
    YShift(USeries<F>),
    /// `(x, y) = (X, a Y)`.
    YScale(F),
    /// `(x, y) = (a X + b Y, c X + d Y)` with `ad - bc = 1`.
    Linear([[F; 2]; 2]),
}

fn x_series<F: Field>(u: &USeries<F>, order: usize) -> BiSeries<F> {
    BiSeries::from_useries_x(u, order, Trunc::Total)
}

fn compose4<F: Field>(pi: &ProjectiveStructure<F>, x: &BiSeries<F>, y: &BiSeries<F>) -> Result<[BiSeries<F>; 4]> {
    Ok([compose_bi(&pi.a, x, y)?, compose_bi(&pi.b, x, y)?, compose_bi(&pi.c, x, y)?, compose_bi(&pi.d, x, y)?])
}

/// The structure in the new coordinates `(X, Y)`.
pub fn transform<F: Field>(pi: &ProjectiveStructure<F>, change: &Change<F>) -> Result<ProjectiveStructure<F>> {
    let order = pi.order();
    let t = Trunc::Total;
    let xs = BiSeries::x(order, t);
    let ys = BiSeries::y(order, t);
    let out = match change {
        Change::XMap(psi) => {
            if !psi.coeff(0).is_zero() || psi.coeff(1).is_zero() {
                return Err(Error::SingularChange);
            }
            let [a, b, c, d] = compose4(pi, &x_series(psi, order), &ys)?;
            let p1 = x_series(&psi.derivative(), order);
            let p2 = x_series(&psi.derivative().derivative(), order);
            let p1_inv = p1.reciprocal()?;
            let coeffs = [a.mul(&p1).mul(&p1), b.mul(&p1).add(&p2.mul(&p1_inv)), c, d.mul(&p1_inv)];
            ProjectiveStructure::new(coeffs, pi.basepoint.clone())
        }
        Change::YShift(phi) => {
            if !phi.coeff(0).is_zero() {
                return Err(Error::SingularChange);
            }
            let shifted = ys.add(&x_series(phi, order));
            let [a, b, c, d] = compose4(pi, &xs, &shifted)?;
            let p1 = x_series(&phi.derivative(), order);
            let p2 = x_series(&phi.derivative().derivative(), order);
            let k = |n: i64| F::from_i64(n);
            let new_a = d.mul(&p1).add(&c).mul(&p1).add(&b).mul(&p1).add(&a).sub(&p2);
            let new_b = b.add(&c.mul(&p1).scale(&k(2))).add(&d.mul(&p1).mul(&p1).scale(&k(3)));
            let new_c = c.add(&d.mul(&p1).scale(&k(3)));
            ProjectiveStructure::new([new_a, new_b, new_c, d], pi.basepoint.clone())
        }
        Change::YScale(s) => {
            let inv = s.try_inv().ok_or(Error::SingularChange)?;
            let [a, b, c, d] = compose4(pi, &xs, &ys.scale(s))?;
            let base = (pi.basepoint.0.clone(), pi.basepoint.1.mul_ref(&inv));
            ProjectiveStructure::new([a.scale(&inv), b, c.scale(s), d.scale(&s.mul_ref(s))], base)
        }
        Change::Linear(m) => {
            let [[a, b], [c, d]] = m;
            let det = a.mul_ref(d).sub_ref(&b.mul_ref(c));
            if !det.is_one() {
                return Err(Error::SingularChange);
            }
            let nx = xs.scale(a).add(&ys.scale(b));
            let ny = xs.scale(c).add(&ys.scale(d));
            let [ca, cb, cc, cd] = compose4(pi, &nx, &ny)?;
            // (a + bZ)^3 f(..., (c + dZ)/(a + bZ)) as a cubic in Z
            let u = [a.clone(), b.clone()];
            let w = [c.clone(), d.clone()];
            let prods = [
                lin_prod(&[&u, &u, &u]),
                lin_prod(&[&w, &u, &u]),
                lin_prod(&[&w, &w, &u]),
                lin_prod(&[&w, &w, &w]),
            ];
            let mut coeffs = [zero_series(order), zero_series(order), zero_series(order), zero_series(order)];
            for (src, p) in [&ca, &cb, &cc, &cd].into_iter().zip(prods.iter()) {
                for (k, coeff) in p.iter().enumerate() {
                    coeffs[k] = coeffs[k].add(&src.scale(coeff));
                }
            }
            let (x0, y0) = &pi.basepoint;
            let base = (d.mul_ref(x0).sub_ref(&b.mul_ref(y0)), a.mul_ref(y0).sub_ref(&c.mul_ref(x0)));
            ProjectiveStructure::new(coeffs, base)
        }
    };
    Ok(out)
}

/// Coefficients of a product of linear polynomials `p0 + p1 Z`.
fn lin_prod<F: Field>(factors: &[&[F; 2]]) -> Vec<F> {
    let mut acc = vec![F::one()];
    for f in factors {
        let mut next = vec![F::zero(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i] = next[i].add_ref(&c.mul_ref(&f[0]));
            next[i + 1] = next[i + 1].add_ref(&c.mul_ref(&f[1]));
        }
        acc = next;
    }
    acc
}

/// `f_x + f f_y - (A + B f + C f^2 + D f^3)`: zero iff `dy = f dx` is geodesic.
pub fn geodesic_residual<F: Field>(f: &BiSeries<F>, pi: &ProjectiveStructure<F>) -> BiSeries<F> {
    let f = f.with_trunc(Trunc::Total);
    let order = f.order().min(pi.order()).saturating_sub(1);
    f.d_dx().add(&f.mul(&f.d_dy())).sub(&pi.cubic(&f)).with_order(order)
}

/// `xi d/dx + eta d/dy`.
#[derive(Clone, Debug)]
pub struct VectorField<F> {
    pub xi: BiSeries<F>,
    pub eta: BiSeries<F>,
}

impl<F: Field> VectorField<F> {
    pub fn from_exprs(xi: &Expr, eta: &Expr, basepoint: &(F, F), order: usize) -> Result<Self> {
        Ok(VectorField { xi: xi.taylor(basepoint, order)?, eta: eta.taylor(basepoint, order)? })
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorField { xi: self.xi.add(&o.xi), eta: self.eta.add(&o.eta) }
    }
}

/// Polynomials in the slope `z` with series coefficients.
pub(crate) type ZPoly<F> = Vec<BiSeries<F>>;

pub(crate) fn zp_add<F: Field>(p: &ZPoly<F>, q: &ZPoly<F>) -> ZPoly<F> {
    let n = p.len().max(q.len());
    (0..n)
        .map(|k| match (p.get(k), q.get(k)) {
            (Some(a), Some(b)) => a.add(b),
            (Some(a), None) | (None, Some(a)) => a.clone(),
            _ => unreachable!(),
        })
        .collect()
}

pub(crate) fn zp_neg<F: Field>(p: &ZPoly<F>) -> ZPoly<F> {
    p.iter().map(|c| c.neg()).collect()
}

pub(crate) fn zp_mul<F: Field>(p: &ZPoly<F>, q: &ZPoly<F>) -> ZPoly<F> {
    let order = p.iter().chain(q.iter()).map(|c| c.order()).min().unwrap_or(0);
    let mut out = vec![zero_series(order); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].add(&a.mul(b));
        }
    }
    out
}

fn zp_dz<F: Field>(p: &ZPoly<F>) -> ZPoly<F> {
    if p.len() <= 1 {
        return vec![zero_series(p.first().map(|c| c.order()).unwrap_or(0))];
    }
    p.iter().enumerate().skip(1).map(|(k, c)| c.scale(&F::from_i64(k as i64))).collect()
}

fn zp_map<F: Field>(p: &ZPoly<F>, f: impl Fn(&BiSeries<F>) -> BiSeries<F>) -> ZPoly<F> {
    p.iter().map(f).collect()
}

/// The five `z`-coefficients of the obstruction to `V` preserving the geodesic flow,
/// from the prolongation of `V` (order drops by 2).
pub fn symmetry_residual<F: Field>(v: &VectorField<F>, pi: &ProjectiveStructure<F>) -> Vec<BiSeries<F>> {
    let order = pi.order().min(v.xi.order()).min(v.eta.order());
    let (xi, eta) = (v.xi.with_trunc(Trunc::Total), v.eta.with_trunc(Trunc::Total));
    let f: ZPoly<F> = pi.coeffs().iter().map(|c| (*c).clone()).collect();
    let z: ZPoly<F> = vec![zero_series(order), BiSeries::one(order, Trunc::Total)];
    let zeta: ZPoly<F> = vec![eta.d_dx(), eta.d_dy().sub(&xi.d_dx()), xi.d_dy().neg()];
    let total_xi: ZPoly<F> = vec![xi.d_dx(), xi.d_dy()];
    let dx = |p: &ZPoly<F>| zp_map(p, |c| c.d_dx());
    let dy = |p: &ZPoly<F>| zp_map(p, |c| c.d_dy());
    let terms = [
        zp_mul(&vec![xi.clone()], &dx(&f)),
        zp_mul(&vec![eta.clone()], &dy(&f)),
        zp_mul(&zeta, &zp_dz(&f)),
        zp_neg(&dx(&zeta)),
        zp_neg(&zp_mul(&z, &dy(&zeta))),
        zp_neg(&zp_mul(&f, &zp_dz(&zeta))),
        zp_mul(&f, &total_xi),
    ];
    let mut acc: ZPoly<F> = vec![zero_series(order)];
    for t in &terms {
        acc = zp_add(&acc, t);
    }
    let out_order = order.saturating_sub(2);
    let mut out: Vec<BiSeries<F>> = acc.iter().map(|c| c.with_order(out_order)).collect();
    debug_assert!(out.iter().skip(5).all(|c| c.is_zero()));
    out.resize(5, zero_series(out_order));
    out.truncate(5);
    out
}

pub fn has_symmetry<F: Field>(v: &VectorField<F>, pi: &ProjectiveStructure<F>) -> bool {
    symmetry_residual(v, pi).iter().all(|c| c.is_zero())
}

/// A catalog entry: coefficient expressions, default basepoint and declared symmetry generators.
#[derive(Clone, Debug)]
pub struct Model {
    pub tag: String,
    pub coeffs: [Expr; 4],
    pub basepoint: (Expr, Expr),
    pub symmetries: Vec<(Expr, Expr)>,
}

pub const MODEL_TAGS: [&str; 7] = ["i.a", "i.b", "ii.a", "ii.b", "iii", "iv", "sl2"];

fn e(s: &str) -> Expr {
    s.parse().expect("static expression")
}

/// Normal forms of structures with symmetries, plus `y'' = (x y' - y)^3` at `(1, 0)`.
pub fn model(tag: &str, params: &[Expr]) -> Result<Model> {
    let want = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::BadParams { tag: tag.into(), reason: format!("{n} parameters expected, got {}", params.len()) })
        }
    };
    let p = |k: usize| params[k].clone();
    let dy = (e("0"), e("1"));
    let dx_ydy = (e("1"), e("y"));
    let origin = (e("0"), e("0"));
    let m = |coeffs: [Expr; 4], basepoint, symmetries| Model { tag: tag.into(), coeffs, basepoint, symmetries };
    Ok(match tag {
        "i.a" => {
            want(2)?;
            m([p(0), p(1), e("0"), e("1")], origin, vec![dy])
        }
        "i.b" => {
            want(1)?;
            m([p(0), e("0"), e("exp(x)"), e("0")], origin, vec![dy])
        }
        "ii.a" => {
            want(2)?;
            m([p(0) * e("exp(x)"), p(1), e("0"), e("exp(-2*x)")], origin, vec![dy, dx_ydy])
        }
        "ii.b" => {
            want(1)?;
            m([p(0) * e("exp(x)"), e("0"), e("exp(-x)"), e("0")], origin, vec![dy, dx_ydy])
        }
        "iii" => {
            want(0)?;
            m([e("0"), e("1/2"), e("0"), e("exp(-2*x)")], origin, vec![dy, dx_ydy, (e("y"), e("y^2/2"))])
        }
        "iv" => {
            want(0)?;
            let gens = ["1,0", "0,1", "x,0", "y,0", "0,x", "0,y", "x^2,x*y", "x*y,y^2"]
                .iter()
                .map(|s| {
                    let (a, b) = s.split_once(',').unwrap();
                    (e(a), e(b))
                })
                .collect();
            m([e("0"), e("0"), e("0"), e("0")], origin, gens)
        }
        "sl2" => {
            want(0)?;
            m(
                [e("-y^3"), e("3*x*y^2"), e("-3*x^2*y"), e("x^3")],
                (e("1"), e("0")),
                vec![(e("0"), e("x")), (e("-x/2"), e("y/2")), (e("-y/2"), e("0"))],
            )
        }
        other => return Err(Error::UnknownTag(other.into())),
    })
}

/// Expanded catalog structure with its symmetry generators as series.
pub fn catalog<F: Field>(
    tag: &str,
    params: &[Expr],
    order: usize,
) -> Result<(ProjectiveStructure<F>, Vec<VectorField<F>>)> {
    let mdl = model(tag, params)?;
    let base = (mdl.basepoint.0.taylor::<F>(&(F::zero(), F::zero()), 0)?.get(0, 0), mdl.basepoint.1.taylor::<F>(&(F::zero(), F::zero()), 0)?.get(0, 0));
    let mut pi = ProjectiveStructure::from_exprs(&mdl.coeffs, base.clone(), order)?;
    pi.evaluator = Some(Evaluator { id: tag.into(), params: params.iter().map(|p| p.to_string()).collect() });
    let syms = mdl.symmetries.iter().map(|(a, b)| VectorField::from_exprs(a, b, &base, order)).collect::<Result<_>>()?;
    Ok((pi, syms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational as Q, Ring};

    fn origin() -> (Q, Q) {
        (Q::zero(), Q::zero())
    }

    #[test]
    fn every_catalog_model_has_its_symmetries() {
        let params: [(&str, Vec<Expr>); 7] = [
            ("i.a", vec![e("x^2-3*x"), e("1+x^3")]),
            ("i.b", vec![e("2*x-x^4")]),
            ("ii.a", vec![e("3/2"), e("-1/3")]),
            ("ii.b", vec![e("2")]),
            ("iii", vec![]),
            ("iv", vec![]),
            ("sl2", vec![]),
        ];
        for (tag, p) in params {
            let (pi, syms) = catalog::<Q>(tag, &p, 8).unwrap();
            for (k, v) in syms.iter().enumerate() {
                assert!(has_symmetry(v, &pi), "{tag} generator {k}");
            }
        }
    }

    #[test]
    fn non_symmetry_detected() {
        let (pi, _) = catalog::<Q>("ii.a", &[e("1"), e("1")], 8).unwrap();
        let v = VectorField::from_exprs(&e("y"), &e("0"), &origin(), 8).unwrap();
        assert!(!has_symmetry(&v, &pi));
    }

    #[test]
    fn model_ia_liouville() {
        let (pi, _) = catalog::<Q>("i.a", &[e("x^3+2*x"), e("x^2")], 8).unwrap();
        let l = liouville(&pi);
        let want1 = e("-9*x^2-6").taylor::<Q>(&origin(), 6).unwrap();
        let want2 = e("-6*x").taylor::<Q>(&origin(), 6).unwrap();
        assert_eq!(l.l1, want1);
        assert_eq!(l.l2, want2);
    }

    #[test]
    fn remark_connection_recovers_structure() {
        let (pi, _) = catalog::<Q>("sl2", &[], 6).unwrap();
        let omega = AffineConnection {
            alpha: [zero_series(6), zero_series(6)],
            beta: [pi.c.clone(), pi.d.clone()],
            gamma: [pi.a.neg(), pi.b.neg()],
            delta: [zero_series(6), zero_series(6)],
        };
        assert_eq!(from_connection(&omega, pi.basepoint.clone()), pi);
        assert_eq!(from_connection(&trace_free_connection(&pi), pi.basepoint.clone()), pi);
    }

    #[test]
    fn y_scale_rule() {
        let (pi, _) = catalog::<Q>("ii.a", &[e("1"), e("2/3")], 6).unwrap();
        let a = Q::from_i64(3);
        let t = transform(&pi, &Change::YScale(a.clone())).unwrap();
        assert_eq!(t.a, pi.a.scale(&a.inv()));
        assert_eq!(t.c, pi.c.scale(&a));
        assert_eq!(t.d, pi.d.scale(&a.mul_ref(&a)));
    }

    #[test]
    fn sl2_slope_fields_are_geodesic() {
        let (pi, _) = catalog::<Q>("sl2", &[], 8).unwrap();
        let base = pi.basepoint.clone();
        for f in ["y/x", "y^2/(x*y+i)", "y^2/(x*y-i)"] {
            let s = e(f).taylor(&base, 8).unwrap();
            assert!(geodesic_residual(&s, &pi).is_zero(), "{f}");
        }
        let s = e("y^2/(x*y+1)").taylor(&base, 8).unwrap();
        assert!(!geodesic_residual(&s, &pi).is_zero());
    }
}
