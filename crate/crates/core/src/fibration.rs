//! Fibrations transverse to the curve, read off from a normal form.
//!
//! A fibration corresponds to `(alpha, beta, gamma)` such that the a-part of
//! `(alpha, beta, gamma, 1) . Phi` vanishes; the a-coefficients are polynomials
//! in the three parameters and are solved order by order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::cocycle::{reduce_to_normal, Cocycle};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::polysolve::{
    groebner, is_unit_ideal, is_zero_dimensional, newton_multistart, reduce, solve_zero_dim, Budget,
};
use crate::scalar::{Field, Quadratic, Ring};
use crate::series::{BiSeries, Trunc, USeries};
use crate::symmetry::{act, act_polynomial, GroupElement, VAR_ALPHA, VAR_BETA, VAR_GAMMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Classification {
    None,
    One,
    Two,
    ManyOrLinear,
    Undetermined,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::None => "None",
            Classification::One => "One",
            Classification::Two => "Two",
            Classification::ManyOrLinear => "ManyOrLinear",
            Classification::Undetermined => "Undetermined",
        }
    }
}

/// A solution `(alpha, beta, gamma)`; `exact` is set when every coordinate is in the field.
#[derive(Clone, Debug)]
pub struct Witness<F> {
    pub approx: [Complex64; 3],
    pub exact: Option<[F; 3]>,
}

impl<F: Field> Witness<F> {
    pub fn group_element(&self) -> Option<GroupElement<F>> {
        self.exact.as_ref().map(|[a, b, c]| GroupElement::unipotent(a.clone(), b.clone(), c.clone()))
    }
}

#[derive(Clone)]
pub struct FibrationReport<F> {
    pub classification: Classification,
    pub witnesses: Vec<Witness<F>>,
    /// Remaining equations (a reduced basis) when the solution set was not finite.
    pub residuals: Vec<Poly<F>>,
}

/// a-coefficients of `(alpha, beta, gamma, 1) . phi` at y-degree `n`.
impl<F: Field> std::fmt::Debug for FibrationReport<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FibrationReport")
            .field("classification", &self.classification)
            .field("witnesses", &self.witnesses)
            .field("residuals", &self.residuals.len())
            .finish()
    }
}

fn order_equations<F: Field>(sym: &Cocycle<Poly<F>>, n: usize) -> Vec<Poly<F>> {
    let a = sym.a();
    ((1 - n as i32)..=-3).map(|m| a.get(m, n)).filter(|p| !p.is_zero()).collect()
}

/// Whether the a-part of `g . phi` vanishes up to the order of `phi`.
pub fn kills_a_part<R: Ring>(g: &GroupElement<R>, phi: &Cocycle<R>) -> bool {
    act(g, phi).map(|c| c.a().is_zero()).unwrap_or(false)
}

/// Classify the transverse fibrations of a normal form using orders `4..=order`.
pub fn detect<F: Field>(phi: &Cocycle<F>, order: usize, seed: u64) -> Result<FibrationReport<F>> {
    if order < 5 {
        return Err(Error::TruncationTooLow(order));
    }
    if phi.order() < order {
        return Err(Error::Truncation(format!("cocycle known to order {}, {} requested", phi.order(), order)));
    }
    phi.check_normal()?;
    let phi = phi.with_order(order);
    let sym = act_polynomial(&phi)?;
    if F::EXACT {
        detect_exact(&phi, &sym, order)
    } else {
        detect_float(&phi, &sym, order, seed)
    }
}

fn detect_exact<F: Field>(phi: &Cocycle<F>, sym: &Cocycle<Poly<F>>, order: usize) -> Result<FibrationReport<F>> {
    let budget = Budget::default();
    let vars = [VAR_ALPHA, VAR_BETA, VAR_GAMMA];
    let mut eqs: Vec<Poly<F>> = Vec::new();
    let mut gb: Vec<Poly<F>> = Vec::new();
    for n in 4..=order {
        let new: Vec<Poly<F>> = order_equations(sym, n).iter().map(|p| reduce(p, &gb)).filter(|p| !p.is_zero()).collect();
        if new.is_empty() {
            continue;
        }
        eqs.extend(new);
        gb = match groebner(&eqs, budget) {
            Ok(gb) => gb,
            Err(Error::Inconclusive(_)) => {
                return Ok(FibrationReport { classification: Classification::Undetermined, witnesses: Vec::new(), residuals: eqs })
            }
            Err(e) => return Err(e),
        };
        if is_unit_ideal(&gb) {
            return Ok(FibrationReport { classification: Classification::None, witnesses: Vec::new(), residuals: Vec::new() });
        }
    }
    if eqs.is_empty() {
        return Ok(FibrationReport { classification: Classification::ManyOrLinear, witnesses: Vec::new(), residuals: Vec::new() });
    }
    if !is_zero_dimensional(&gb, &vars) {
        // a positive-dimensional family survives every order checked
        return Ok(FibrationReport { classification: Classification::ManyOrLinear, witnesses: Vec::new(), residuals: gb });
    }
    let sols = match solve_zero_dim(&gb, &vars, budget) {
        Ok(s) => s,
        Err(Error::Inconclusive(_)) => {
            return Ok(FibrationReport { classification: Classification::Undetermined, witnesses: Vec::new(), residuals: gb })
        }
        Err(e) => return Err(e),
    };
    let mut witnesses = Vec::new();
    for s in sols {
        let approx = [s[0].approx, s[1].approx, s[2].approx];
        let exact = match (&s[0].exact, &s[1].exact, &s[2].exact) {
            (Some(a), Some(b), Some(c)) => Some([a.clone(), b.clone(), c.clone()]),
            _ => None,
        };
        let w = Witness { approx, exact };
        let ok = match w.group_element() {
            Some(g) => kills_a_part(&g, phi),
            None => kills_numerically(&w, phi),
        };
        if ok {
            witnesses.push(w);
        }
    }
    sort_witnesses(&mut witnesses);
    Ok(FibrationReport { classification: classify(witnesses.len()), witnesses, residuals: Vec::new() })
}

fn classify(count: usize) -> Classification {
    match count {
        0 => Classification::None,
        1 => Classification::One,
        2 => Classification::Two,
        _ => Classification::ManyOrLinear,
    }
}

fn sort_witnesses<F>(w: &mut [Witness<F>]) {
    let key = |w: &Witness<F>| -> Vec<(i64, i64)> {
        w.approx.iter().map(|c| ((c.re * 1e8).round() as i64, (c.im * 1e8).round() as i64)).collect()
    };
    w.sort_by_key(key);
}

fn kills_numerically<F: Field>(w: &Witness<F>, phi: &Cocycle<F>) -> bool {
    let phi_c = phi.map(|c| c.to_c64());
    let g = GroupElement::unipotent(w.approx[0], w.approx[1], w.approx[2]);
    match act(&g, &phi_c) {
        Ok(c) => {
            let scale = 1.0 + w.approx.iter().map(|z| z.norm()).fold(0.0, f64::max);
            c.a().terms().all(|(_, n, v)| v.norm() < 1e-6 * scale.powi(n as i32))
        }
        Err(_) => false,
    }
}

fn detect_float<F: Field>(phi: &Cocycle<F>, sym: &Cocycle<Poly<F>>, order: usize, seed: u64) -> Result<FibrationReport<F>> {
    let eqs: Vec<Poly<Complex64>> = (4..=order)
        .flat_map(|n| order_equations(sym, n))
        .map(|p| p.map(F::to_c64))
        .filter(|p| !p.is_zero())
        .collect();
    if eqs.is_empty() {
        return Ok(FibrationReport { classification: Classification::ManyOrLinear, witnesses: Vec::new(), residuals: Vec::new() });
    }
    let roots = newton_multistart(&eqs, 3, 64, 5.0, 1e-6, seed);
    let singular = roots.iter().filter(|r| r.jacobian_rank < 3).count();
    if singular > 0 {
        // many distinct singular roots indicate a family; a few may be multiple points
        let classification = if singular >= 4 { Classification::ManyOrLinear } else { Classification::Undetermined };
        let residuals = (4..=order).flat_map(|n| order_equations(sym, n)).collect();
        return Ok(FibrationReport { classification, witnesses: Vec::new(), residuals });
    }
    let mut witnesses: Vec<Witness<F>> = roots
        .into_iter()
        .map(|r| {
            let approx = [r.point[0], r.point[1], r.point[2]];
            let exact = match (F::from_c64(approx[0]), F::from_c64(approx[1]), F::from_c64(approx[2])) {
                (Some(a), Some(b), Some(c)) => Some([a, b, c]),
                _ => None,
            };
            Witness { approx, exact }
        })
        .filter(|w| kills_numerically(w, phi))
        .collect();
    sort_witnesses(&mut witnesses);
    Ok(FibrationReport { classification: classify(witnesses.len()), witnesses, residuals: Vec::new() })
}

/// The two roots of `gamma^2 - 2 gamma b_{-2,3} = a_{-3,4}`, smaller modulus first.
fn order4_roots<R: Ring>(b23: &R, disc_root: &R, modulus: impl Fn(&R) -> f64) -> [R; 2] {
    let r1 = b23.add_ref(disc_root);
    let r2 = b23.sub_ref(disc_root);
    if modulus(&r2) < modulus(&r1) {
        [r2, r1]
    } else {
        [r1, r2]
    }
}

/// Use `(0, 0, gamma, 1)` to make `a_{-3,4}` vanish, within the field when the
/// square root exists there.
pub fn kill_order4<F: Field>(phi: &Cocycle<F>) -> Result<(Cocycle<F>, GroupElement<F>)> {
    phi.check_normal()?;
    let b23 = phi.b_coeff(-2, 3);
    let disc = b23.mul_ref(&b23).add_ref(&phi.a_coeff(-3, 4));
    let root = disc.try_root(1, 2).ok_or_else(|| Error::NotExact(format!("square root of {disc} is not in the field")))?;
    let [gamma, _] = order4_roots(&b23, &root, |g| g.to_c64().norm());
    let g = GroupElement::unipotent(F::zero(), F::zero(), gamma);
    Ok((act(&g, phi)?, g))
}

/// [`kill_order4`] over the quadratic extension by the discriminant, which always succeeds.
#[allow(clippy::type_complexity)]
pub fn kill_order4_extended<F: Field>(phi: &Cocycle<F>) -> Result<(Cocycle<Quadratic<F>>, GroupElement<Quadratic<F>>)> {
    phi.check_normal()?;
    let b23 = phi.b_coeff(-2, 3);
    let disc = b23.mul_ref(&b23).add_ref(&phi.a_coeff(-3, 4));
    let root = match disc.try_root(1, 2) {
        Some(r) => Quadratic::base(r),
        None => Quadratic::sqrt_of(disc),
    };
    let [gamma, _] = order4_roots(&Quadratic::base(b23), &root, |g| g.to_c64().norm());
    let g = GroupElement::unipotent(Quadratic::zero(), Quadratic::zero(), gamma);
    let lifted = phi.map(|c| Quadratic::base(c.clone()));
    Ok((act(&g, &lifted)?, g))
}

/// Output of [`bifibrated_example`].
#[derive(Clone, Debug)]
pub struct Bifibrated<F> {
    pub h1: BiSeries<F>,
    pub h2: BiSeries<F>,
    /// `(1/h1, 1/h2 - 1/h1)` as a prenormal cocycle.
    pub raw: Cocycle<F>,
    pub normal: Cocycle<F>,
}

/// Neighborhood with two fibrations `dh1 = 0`, `dh2 = 0` tangent along `x = y`,
/// built from a germ `varphi(u) = u + c u^2 + ...` with `c != 0`.
pub fn bifibrated_example<F: Field>(varphi: &USeries<F>) -> Result<Bifibrated<F>> {
    let order = varphi.order();
    if !varphi.coeff(0).is_zero() || !varphi.coeff(1).is_one() {
        return Err(Error::BadParams { tag: "bifibrated".into(), reason: "germ must be u + c u^2 + ...".into() });
    }
    if varphi.coeff(2).is_zero() {
        return Err(Error::DegenerateTangency);
    }
    // deviation phi(y) = varphi(y)/y - 1
    let dev = USeries::new((1..=order).map(|k| if k == 1 { F::zero() } else { varphi.coeff(k) }).collect(), order);
    let dev_prime = dev.derivative();
    let t = Trunc::YDegree;
    let x = BiSeries::x(order, t);
    let y = BiSeries::y(order, t);
    let p = BiSeries::from_useries_y(&dev, order, t);
    let pp = BiSeries::from_useries_y(&dev_prime, order, t);
    let h1 = x.clone();
    // h2 = x + x phi(y) + (x - y) y phi'(y)
    let h2 = x.add(&x.mul(&p)).add(&x.sub(&y).mul(&y).mul(&pp));
    let inv1 = h1.reciprocal()?;
    let inv2 = h2.reciprocal()?;
    let raw = Cocycle::new(inv1.clone(), inv2.sub(&inv1));
    let normal = reduce_to_normal(&raw)?.normal;
    Ok(Bifibrated { h1, h2, raw, normal })
}

/// Random normal form with small rational coefficients in the allowed supports.
pub fn random_normal<F: Field>(rng: &mut impl Rng, order: usize, max_num: i64, max_den: i64) -> Cocycle<F> {
    let mut a = BiSeries::zero(order, Trunc::YDegree);
    let mut b = BiSeries::zero(order, Trunc::YDegree);
    let draw = |rng: &mut dyn rand::RngCore| F::from_frac(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den));
    for n in 3..=order {
        for m in (1 - n as i32)..=-2 {
            b.add_term(m, n, draw(rng));
        }
    }
    for n in 4..=order {
        for m in (1 - n as i32)..=-3 {
            a.add_term(m, n, draw(rng));
        }
    }
    Cocycle::from_deviation(&a, &b)
}

/// Histogram of classifications over random normal forms whose a-part survives
/// the order-4 normalization.
pub fn count_property_sample(rng: &mut impl Rng, trials: usize, order: usize) -> Result<CountSample> {
    let mut histogram = BTreeMap::new();
    let mut max_witnesses = 0;
    let mut done = 0;
    while done < trials {
        let phi = random_normal::<crate::scalar::GaussianRational>(rng, order, 3, 3);
        let (killed, _) = kill_order4_extended(&phi)?;
        if killed.a().is_zero() {
            continue;
        }
        let report = detect(&phi, order, 0)?;
        max_witnesses = max_witnesses.max(report.witnesses.len());
        *histogram.entry(report.classification).or_insert(0usize) += 1;
        done += 1;
    }
    Ok(CountSample { histogram, max_witnesses })
}

#[derive(Clone, Debug)]
pub struct CountSample {
    pub histogram: BTreeMap<Classification, usize>,
    pub max_witnesses: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    #[test]
    fn low_truncation_rejected() {
        let phi = Cocycle::<Q>::linear(8);
        assert_eq!(detect(&phi, 4, 0).unwrap_err(), Error::TruncationTooLow(4));
    }

    #[test]
    fn linear_is_many() {
        let r = detect(&Cocycle::<Q>::linear(8), 8, 0).unwrap();
        assert_eq!(r.classification, Classification::ManyOrLinear);
    }

    #[test]
    fn order4_kill_rational_case() {
        // a = c y^4/x^3 with b_{-2,3} = 0 and c a square
        let a = BiSeries::monomial(-3, 4, Q::from_i64(4), 8, Trunc::YDegree);
        let phi = Cocycle::from_deviation(&a, &BiSeries::zero(8, Trunc::YDegree));
        let (killed, g) = kill_order4(&phi).unwrap();
        assert!(killed.a_coeff(-3, 4).is_zero());
        assert_eq!(g.gamma.mul_ref(&g.gamma), Q::from_i64(4));
    }

    #[test]
    fn order4_kill_irrational_case() {
        let a = BiSeries::monomial(-3, 4, Q::from_i64(2), 8, Trunc::YDegree);
        let phi = Cocycle::from_deviation(&a, &BiSeries::zero(8, Trunc::YDegree));
        assert!(matches!(kill_order4(&phi), Err(Error::NotExact(_))));
        let (killed, _) = kill_order4_extended(&phi).unwrap();
        assert!(killed.a_coeff(-3, 4).is_zero());
    }

    #[test]
    fn degenerate_tangency() {
        let id = USeries::<Q>::identity(6);
        assert_eq!(bifibrated_example(&id).unwrap_err(), Error::DegenerateTangency);
    }

    fn covering(order: usize) -> Cocycle<Q> {
        let t = Trunc::YDegree;
        let x = BiSeries::<Q>::x(order, t);
        let y = BiSeries::<Q>::y(order, t);
        let xi = x.reciprocal().unwrap();
        let w = BiSeries::one(order, t).sub(&y.mul(&y).mul(&xi)).pow_rational(-1, 2).unwrap();
        Cocycle::new(xi.clone(), y.mul(&xi).mul(&w))
    }

    #[test]
    fn covering_has_two() {
        let phi = covering(8);
        assert!(phi.is_normal());
        let r = detect(&phi, 8, 0).unwrap();
        assert_eq!(r.classification, Classification::Two);
        let gammas: Vec<Q> = r.witnesses.iter().map(|w| w.exact.clone().unwrap()[2].clone()).collect();
        assert!(gammas.contains(&Q::zero()) && gammas.contains(&Q::one()));
    }

    #[test]
    fn single_a_term_has_none() {
        let a = BiSeries::monomial(-3, 5, Q::one(), 8, Trunc::YDegree);
        let phi = Cocycle::from_deviation(&a, &BiSeries::zero(8, Trunc::YDegree));
        assert_eq!(detect(&phi, 8, 0).unwrap().classification, Classification::None);
    }

    #[test]
    fn b_only_has_one() {
        let b = BiSeries::from_terms([(-2, 5, Q::one()), (-4, 5, Q::one())], 8, Trunc::YDegree);
        let phi = Cocycle::from_deviation(&BiSeries::zero(8, Trunc::YDegree), &b);
        let r = detect(&phi, 8, 0).unwrap();
        assert_eq!(r.classification, Classification::One);
    }

    #[test]
    fn float_backend_linear_is_many() {
        let r = detect(&Cocycle::<Complex64>::linear(8), 8, 1).unwrap();
        assert_eq!(r.classification, Classification::ManyOrLinear);
    }

    #[test]
    fn float_backend_agrees_on_covering() {
        let phi = covering(8).map(|c| c.to_c64());
        let r = detect(&phi, 8, 3).unwrap();
        assert_eq!(r.classification, Classification::Two);
    }

    #[test]
    fn bifibrated_gives_two() {
        let germ = USeries::new(vec![Q::zero(), Q::one(), Q::one()], 8);
        let ex = bifibrated_example(&germ).unwrap();
        assert!(ex.normal.is_normal());
        assert_eq!(ex.raw.second.get(-1, 1), Q::from_i64(-2));
        assert_eq!(detect(&ex.normal, 8, 0).unwrap().classification, Classification::Two);
    }
}
