//! The group of residual chart changes acting on normal forms.

use std::fmt;

use crate::cocycle::{conjugate, ChartMap, Cocycle};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::polysolve::{groebner, is_unit_ideal, is_zero_dimensional, solve_zero_dim, Budget, Coord};
use crate::scalar::{Field, Ring};
use crate::series::USeries;

/// `(alpha, beta, gamma, theta)`, identity `(0, 0, 0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<R> {
    pub alpha: R,
    pub beta: R,
    pub gamma: R,
    pub theta: R,
}

impl<R: Ring> GroupElement<R> {
    pub fn new(alpha: R, beta: R, gamma: R, theta: R) -> Result<Self> {
        if theta.is_zero() {
            return Err(Error::ZeroTheta);
        }
        Ok(GroupElement { alpha, beta, gamma, theta })
    }

    pub fn identity() -> Self {
        GroupElement { alpha: R::zero(), beta: R::zero(), gamma: R::zero(), theta: R::one() }
    }

    /// `(alpha, beta, gamma, 1)`.
    pub fn unipotent(alpha: R, beta: R, gamma: R) -> Self {
        GroupElement { alpha, beta, gamma, theta: R::one() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `g1 * g2 = (a2 + t2 a1, b2 + t2 b1, c2 + t2^2 c1, t1 t2)`.
    pub fn compose(&self, other: &Self) -> Self {
        let t2 = &other.theta;
        GroupElement {
            alpha: other.alpha.add_ref(&t2.mul_ref(&self.alpha)),
            beta: other.beta.add_ref(&t2.mul_ref(&self.beta)),
            gamma: other.gamma.add_ref(&t2.mul_ref(t2).mul_ref(&self.gamma)),
            theta: self.theta.mul_ref(t2),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let ti = self.theta.try_inv().ok_or(Error::ZeroTheta)?;
        Ok(GroupElement {
            alpha: self.alpha.mul_ref(&ti).neg_ref(),
            beta: self.beta.mul_ref(&ti).neg_ref(),
            gamma: self.gamma.mul_ref(&ti).mul_ref(&ti).neg_ref(),
            theta: ti,
        })
    }

    /// The 4x4 matrix `[[1, a, b, c], [0, t, 0, 0], [0, 0, t, 0], [0, 0, 0, t^2]]`.
    pub fn matrix(&self) -> [[R; 4]; 4] {
        let z = R::zero;
        [
            [R::one(), self.alpha.clone(), self.beta.clone(), self.gamma.clone()],
            [z(), self.theta.clone(), z(), z()],
            [z(), z(), self.theta.clone(), z()],
            [z(), z(), z(), self.theta.mul_ref(&self.theta)],
        ]
    }

    pub fn from_matrix(m: &[[R; 4]; 4]) -> Result<Self> {
        Self::new(m[0][1].clone(), m[0][2].clone(), m[0][3].clone(), m[1][1].clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> GroupElement<S> {
        GroupElement { alpha: f(&self.alpha), beta: f(&self.beta), gamma: f(&self.gamma), theta: f(&self.theta) }
    }
}

impl<R: fmt::Display> fmt::Display for GroupElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.alpha, self.beta, self.gamma, self.theta)
    }
}

pub fn matrix_mul<R: Ring>(a: &[[R; 4]; 4], b: &[[R; 4]; 4]) -> [[R; 4]; 4] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(R::zero(), |acc, k| acc.add_ref(&a[i][k].mul_ref(&b[k][j]))))
    })
}

/// `k0(y) = sum_{n>=3} b_{-2,n} y^n` and `kinf(y) = sum_{n>=3} b_{1-n,n} y^n`.
pub fn extract_k<R: Ring>(phi: &Cocycle<R>) -> (USeries<R>, USeries<R>) {
    let order = phi.order();
    let b = phi.b();
    let k0 = (0..=order).map(|n| if n >= 3 { b.get(-2, n) } else { R::zero() }).collect();
    let kinf = (0..=order).map(|n| if n >= 3 { b.get(1 - n as i32, n) } else { R::zero() }).collect();
    (USeries::new(k0, order), USeries::new(kinf, order))
}

/// The chart pair realizing `g` on `phi`.
pub fn action_charts<R: Ring>(g: &GroupElement<R>, phi: &Cocycle<R>) -> Result<(ChartMap<R>, ChartMap<R>)> {
    if g.theta.try_inv().is_none() {
        return Err(Error::ZeroTheta);
    }
    let order = phi.order();
    let (k0, kinf) = extract_k(phi);
    let lin = |c: &R| USeries::new(vec![R::one(), c.clone()], order);
    let y = USeries::identity(order);
    let y2 = y.mul(&y);

    // infinity chart
    let d = lin(&g.beta).reciprocal()?;
    let d2 = d.mul(&d);
    let beta_inf = y.scale(&g.alpha).mul(&d).add(&y2.scale(&g.gamma).mul(&d2)).add(&kinf.scale(&g.beta).mul(&d2));
    let psi_inf = ChartMap::new(d.clone(), beta_inf, y.scale(&g.theta).mul(&d))?;

    // zero chart
    let e = lin(&g.alpha).reciprocal()?;
    let e2 = e.mul(&e);
    let beta_0 = y.scale(&g.beta).mul(&e).sub(&y2.scale(&g.gamma).mul(&e2)).sub(&k0.scale(&g.alpha).mul(&e2));
    let psi_0 = ChartMap::new(e.clone(), beta_0, y.scale(&g.theta).mul(&e))?;
    Ok((psi_inf, psi_0))
}

/// `g . phi`, realized by series conjugation and checked against the normal support.
pub fn act<R: Ring>(g: &GroupElement<R>, phi: &Cocycle<R>) -> Result<Cocycle<R>> {
    phi.check_normal()?;
    let (psi_inf, psi_0) = action_charts(g, phi)?;
    let out = conjugate(&psi_inf, phi, &psi_0)?;
    out.check_normal().map_err(|e| Error::NormalityBroken(e.to_string()))?;
    Ok(out)
}

/// Variable indices used for symbolic group parameters.
pub const VAR_ALPHA: usize = 0;
pub const VAR_BETA: usize = 1;
pub const VAR_GAMMA: usize = 2;
pub const VAR_THETA: usize = 3;
const VAR_THETA_INV: usize = 4;

/// `(alpha, beta, gamma, 1) . phi` with symbolic `alpha, beta, gamma`.
pub fn act_polynomial<F: Field>(phi: &Cocycle<F>) -> Result<Cocycle<Poly<F>>> {
    let lifted = phi.map(|c| Poly::constant(c.clone()));
    let g = GroupElement::unipotent(Poly::var(VAR_ALPHA), Poly::var(VAR_BETA), Poly::var(VAR_GAMMA));
    act(&g, &lifted)
}

/// The coefficient rows of the action listed for low orders, evaluated from
/// their closed formulas: `(name, predicted value)`.
pub fn displayed_rows<R: Ring>(g: &GroupElement<R>, phi: &Cocycle<R>) -> Result<Vec<(&'static str, R)>> {
    let (al, be, ga) = (&g.alpha, &g.beta, &g.gamma);
    let ti = g.theta.try_inv().ok_or(Error::ZeroTheta)?;
    let t = |k: u32| ti.pow_u(k);
    let a = |m, n| phi.a_coeff(m, n);
    let b = |m, n| phi.b_coeff(m, n);
    let c = |n: i64| R::from_i64(n);
    let sum = |terms: Vec<R>| terms.into_iter().fold(R::zero(), |acc, x| acc.add_ref(&x));
    let m2 = |x: &R, y: &R| x.mul_ref(y);
    Ok(vec![
        (
            "a'(-3,4)",
            sum(vec![
                a(-3, 4),
                m2(ga, ga).neg_ref(),
                c(2).mul_ref(ga).mul_ref(&b(-2, 3)),
                m2(be, &b(-2, 4)).neg_ref(),
                m2(al, &b(-3, 4)),
            ])
            .mul_ref(&t(4)),
        ),
        (
            "a'(-3,5)",
            sum(vec![
                a(-3, 5),
                m2(al, &a(-3, 4)),
                c(2).mul_ref(ga).sub_ref(&m2(al, be)).mul_ref(&b(-2, 4)),
                m2(al, al).mul_ref(&b(-3, 4)),
                m2(be, &b(-2, 5)).neg_ref(),
                m2(al, &b(-3, 5)),
            ])
            .mul_ref(&t(5)),
        ),
        (
            "a'(-4,5)",
            sum(vec![
                a(-4, 5),
                c(2).mul_ref(be).mul_ref(&a(-3, 4)),
                c(3).mul_ref(be).mul_ref(&b(-2, 3)).mul_ref(&b(-2, 3)),
                m2(be, be).mul_ref(&b(-2, 4)).neg_ref(),
                m2(al, be).add_ref(&c(2).mul_ref(ga)).mul_ref(&b(-3, 4)),
                m2(be, &b(-3, 5)).neg_ref(),
                m2(al, &b(-4, 5)),
            ])
            .mul_ref(&t(5)),
        ),
        ("b'(-2,3)", b(-2, 3).sub_ref(ga).mul_ref(&t(2))),
        ("b'(-2,4)", b(-2, 4).mul_ref(&t(3))),
        ("b'(-3,4)", b(-3, 4).mul_ref(&t(3))),
        ("b'(-2,5)", b(-2, 5).add_ref(&m2(al, &b(-2, 4))).mul_ref(&t(4))),
        (
            "b'(-3,5)",
            sum(vec![b(-3, 5), m2(al, &b(-3, 4)), c(2).mul_ref(ga).mul_ref(&b(-2, 3)).neg_ref(), m2(ga, ga)])
                .mul_ref(&t(4)),
        ),
        ("b'(-4,5)", b(-4, 5).add_ref(&m2(be, &b(-3, 4))).mul_ref(&t(4))),
    ])
}

/// Coefficient `(m, n)` of a row name used by [`displayed_rows`].
pub fn row_index(name: &str) -> (bool, i32, usize) {
    let is_a = name.starts_with('a');
    let inner = &name[3..name.len() - 1];
    let (m, n) = inner.split_once(',').unwrap();
    (is_a, m.parse().unwrap(), n.parse().unwrap())
}

/// Equations `P(alpha, beta, gamma) - theta^k c = 0` matching `g . phi1` with `phi2` up to `order`.
fn matching_equations<F: Field>(sym: &Cocycle<Poly<F>>, phi2: &Cocycle<F>, order: usize) -> Vec<Poly<F>> {
    let theta = Poly::<F>::var(VAR_THETA);
    let (sa, sb) = (sym.a(), sym.b());
    let (ta, tb) = (phi2.a(), phi2.b());
    let mut eqs = Vec::new();
    for n in 3..=order {
        for m in (1 - n as i32)..=-2 {
            let rhs = theta.pow_u(n as u32 - 1).scale(&tb.get(m, n));
            eqs.push(sb.get(m, n).sub_ref(&rhs));
            if n >= 4 && m <= -3 {
                let rhs = theta.pow_u(n as u32).scale(&ta.get(m, n));
                eqs.push(sa.get(m, n).sub_ref(&rhs));
            }
        }
    }
    eqs.retain(|e| !e.is_zero());
    eqs.push(theta.mul_ref(&Poly::var(VAR_THETA_INV)).sub_ref(&Poly::one()));
    eqs
}

/// Search for `g` with `g . phi1 = phi2`.
///
/// Low-order coefficients give a polynomial system in `(alpha, beta, gamma, theta)`;
/// when its solution set is not finite (a positive-dimensional stabilizer) the
/// normalizations `theta = 1`, `alpha = 0`, `beta = 0`, `gamma = 0` are added while
/// the system stays consistent. Every candidate is re-checked with the full action.
pub fn equivalent<F: Field>(phi1: &Cocycle<F>, phi2: &Cocycle<F>) -> Result<Option<GroupElement<F>>> {
    phi1.check_normal()?;
    phi2.check_normal()?;
    if phi1.order() != phi2.order() {
        return Err(Error::Truncation(format!("orders {} and {} differ", phi1.order(), phi2.order())));
    }
    let order = phi1.order();
    if phi1 == phi2 {
        return Ok(Some(GroupElement::identity()));
    }
    let low = order.min(6);
    let sym = act_polynomial(&phi1.with_order(low))?;
    let budget = Budget::default();
    let mut eqs = matching_equations(&sym, &phi2.with_order(low), low);
    let vars = [VAR_ALPHA, VAR_BETA, VAR_GAMMA, VAR_THETA, VAR_THETA_INV];
    let mut gb = groebner(&eqs, budget)?;
    if is_unit_ideal(&gb) {
        return Ok(None);
    }
    let normalizations = [
        Poly::var(VAR_THETA).sub_ref(&Poly::one()),
        Poly::var(VAR_ALPHA),
        Poly::var(VAR_BETA),
        Poly::var(VAR_GAMMA),
    ];
    for extra in normalizations {
        if is_zero_dimensional(&gb, &vars) {
            break;
        }
        let mut trial = eqs.clone();
        trial.push(extra);
        let gb2 = groebner(&trial, budget)?;
        if !is_unit_ideal(&gb2) {
            eqs = trial;
            gb = gb2;
        }
    }
    if !is_zero_dimensional(&gb, &vars) {
        return Err(Error::Inconclusive("low-order equations do not cut out finitely many candidates".into()));
    }
    let sols = solve_zero_dim(&gb, &vars, budget)?;
    let mut candidates: Vec<GroupElement<F>> = Vec::new();
    let mut irrational = false;
    for s in sols {
        let pick = |c: &Coord<F>| c.exact.clone().or_else(|| if F::EXACT { None } else { F::from_c64(c.approx) });
        match (pick(&s[0]), pick(&s[1]), pick(&s[2]), pick(&s[3])) {
            (Some(a), Some(b), Some(c), Some(t)) if !t.is_zero() => candidates.push(GroupElement { alpha: a, beta: b, gamma: c, theta: t }),
            _ => irrational = true,
        }
    }
    candidates.sort_by_key(|g| (!g.is_identity(), !g.theta.is_one()));
    for g in candidates {
        if act(&g, phi1).map(|c| c == *phi2).unwrap_or(false) {
            return Ok(Some(g));
        }
    }
    if irrational {
        return Err(Error::Inconclusive("candidate parameters are not representable exactly".into()));
    }
    Ok(None)
}
