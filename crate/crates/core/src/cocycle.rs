//! Gluing cocycles `Phi = (1/x + a, y/x + b)` and the fibred chart maps acting on them.

use crate::error::{Error, Result};
use crate::scalar::Ring;
use crate::series::{compose_bi, compose_u, BiSeries, Trunc, USeries};

/// Which support a cocycle is known to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Raw,
    Prenormal,
    Normal,
}

impl Form {
    pub fn as_str(self) -> &'static str {
        match self {
            Form::Raw => "raw",
            Form::Prenormal => "prenormal",
            Form::Normal => "normal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Form::Raw),
            "prenormal" => Ok(Form::Prenormal),
            "normal" => Ok(Form::Normal),
            other => Err(Error::Parse(format!("unknown cocycle form `{other}`"))),
        }
    }
}

/// Transition map between the two trivial charts, components truncated in y-degree.
#[derive(Clone, Debug)]
pub struct Cocycle<R> {
    pub first: BiSeries<R>,
    pub second: BiSeries<R>,
}

impl<R: Ring> PartialEq for Cocycle<R> {
    fn eq(&self, other: &Self) -> bool {
        self.first == other.first && self.second == other.second
    }
}

fn one_over_x<R: Ring>(order: usize) -> BiSeries<R> {
    BiSeries::monomial(-1, 0, R::one(), order, Trunc::YDegree)
}

fn y_over_x<R: Ring>(order: usize) -> BiSeries<R> {
    BiSeries::monomial(-1, 1, R::one(), order, Trunc::YDegree)
}

impl<R: Ring> Cocycle<R> {
    pub fn new(first: BiSeries<R>, second: BiSeries<R>) -> Self {
        let order = first.order().min(second.order());
        Cocycle { first: first.with_order(order), second: second.with_order(order) }
    }

    /// The linear model `(1/x, y/x)`.
    pub fn linear(order: usize) -> Self {
        Cocycle { first: one_over_x(order), second: y_over_x(order) }
    }

    /// `(1/x + a, y/x + b)`.
    pub fn from_deviation(a: &BiSeries<R>, b: &BiSeries<R>) -> Self {
        let order = a.order().min(b.order());
        Cocycle::new(one_over_x(order).add(a), y_over_x(order).add(b))
    }

    pub fn order(&self) -> usize {
        self.first.order()
    }

    pub fn a(&self) -> BiSeries<R> {
        self.first.sub(&one_over_x(self.order()))
    }

    pub fn b(&self) -> BiSeries<R> {
        self.second.sub(&y_over_x(self.order()))
    }

    /// Coefficient of `x^m y^n` in the first component.
    pub fn a_coeff(&self, m: i32, n: usize) -> R {
        self.a().get(m, n)
    }

    /// Coefficient of `x^m y^n` in the second component minus `y/x`.
    pub fn b_coeff(&self, m: i32, n: usize) -> R {
        self.b().get(m, n)
    }

    pub fn with_order(&self, order: usize) -> Self {
        Cocycle { first: self.first.with_order(order), second: self.second.with_order(order) }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S + Copy) -> Cocycle<S> {
        Cocycle { first: self.first.map(f), second: self.second.map(f) }
    }

    pub fn check_prenormal(&self) -> Result<()> {
        if !self.first.in_support(-1, 0) {
            return Err(Error::NotPrenormal(format!("first component has terms {:?}", self.first.outside_support(-1, 0))));
        }
        if !self.first.get(-1, 0).is_one() {
            return Err(Error::NotPrenormal("coefficient of 1/x is not 1".into()));
        }
        if !self.second.in_support(-1, 1) {
            return Err(Error::NotPrenormal(format!("second component has terms {:?}", self.second.outside_support(-1, 1))));
        }
        Ok(())
    }

    pub fn is_prenormal(&self) -> bool {
        self.check_prenormal().is_ok()
    }

    pub fn check_normal(&self) -> Result<()> {
        let a = self.a();
        if !a.in_support(-3, 4) {
            return Err(Error::NotNormal(format!("a has terms {:?}", a.outside_support(-3, 4))));
        }
        let b = self.b();
        if !b.in_support(-2, 3) {
            return Err(Error::NotNormal(format!("b has terms {:?}", b.outside_support(-2, 3))));
        }
        Ok(())
    }

    pub fn is_normal(&self) -> bool {
        self.check_normal().is_ok()
    }

    pub fn form(&self) -> Form {
        if self.is_normal() {
            Form::Normal
        } else if self.is_prenormal() {
            Form::Prenormal
        } else {
            Form::Raw
        }
    }

    /// `Phi o Psi` for a chart map `Psi`.
    pub fn compose_right(&self, psi: &ChartMap<R>) -> Result<Self> {
        let (x, y) = psi.as_series(self.order());
        Ok(Cocycle { first: compose_bi(&self.first, &x, &y)?, second: compose_bi(&self.second, &x, &y)? })
    }

    /// `Psi o Phi` for a chart map `Psi`.
    pub fn compose_left(&self, psi: &ChartMap<R>) -> Result<Self> {
        let (first, second) = psi.apply(&self.first, &self.second)?;
        Ok(Cocycle { first, second })
    }
}

/// A fibred map `Psi(x, y) = (alpha(y) x + beta(y), phi(y))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartMap<R> {
    pub alpha: USeries<R>,
    pub beta: USeries<R>,
    pub phi: USeries<R>,
}

impl<R: Ring> ChartMap<R> {
    /// Checks `alpha(0)` invertible, `beta(0) = 0`, `phi(0) = 0`, `phi'(0)` invertible.
    pub fn new(alpha: USeries<R>, beta: USeries<R>, phi: USeries<R>) -> Result<Self> {
        let ok = alpha.coeff(0).try_inv().is_some()
            && beta.coeff(0).is_zero()
            && phi.coeff(0).is_zero()
            && phi.coeff(1).try_inv().is_some();
        if !ok {
            return Err(Error::NotInvertible);
        }
        Ok(ChartMap { alpha, beta, phi })
    }

    pub fn identity(order: usize) -> Self {
        ChartMap { alpha: USeries::one(order), beta: USeries::zero(order), phi: USeries::identity(order) }
    }

    /// `(x, theta y)`.
    pub fn scaling(theta: R, order: usize) -> Self {
        ChartMap { alpha: USeries::one(order), beta: USeries::zero(order), phi: USeries::identity(order).scale(&theta) }
    }

    pub fn order(&self) -> usize {
        self.alpha.order().min(self.beta.order()).min(self.phi.order())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.order())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S + Copy) -> ChartMap<S> {
        ChartMap { alpha: self.alpha.map(f), beta: self.beta.map(f), phi: self.phi.map(f) }
    }

    /// Components as bivariate series in `(x, y)`.
    pub fn as_series(&self, order: usize) -> (BiSeries<R>, BiSeries<R>) {
        let a = BiSeries::from_useries_y(&self.alpha, order, Trunc::YDegree);
        let b = BiSeries::from_useries_y(&self.beta, order, Trunc::YDegree);
        let x = a.shift(1, 0, &R::one()).add(&b);
        (x, BiSeries::from_useries_y(&self.phi, order, Trunc::YDegree))
    }

    /// `Psi(X, Y)` for bivariate series `X`, `Y` with `Y` nilpotent.
    pub fn apply(&self, x: &BiSeries<R>, y: &BiSeries<R>) -> Result<(BiSeries<R>, BiSeries<R>)> {
        let a = compose_u(&self.alpha, y)?;
        let b = compose_u(&self.beta, y)?;
        Ok((a.mul(x).add(&b), compose_u(&self.phi, y)?))
    }

    pub fn inverse(&self) -> Result<Self> {
        let phi_inv = self.phi.revert()?;
        let a = self.alpha.compose(&phi_inv)?;
        let b = self.beta.compose(&phi_inv)?;
        let a_inv = a.reciprocal().map_err(|_| Error::NotInvertible)?;
        Ok(ChartMap { beta: b.mul(&a_inv).neg(), alpha: a_inv, phi: phi_inv })
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let a = self.alpha.compose(&other.phi)?;
        let b = self.beta.compose(&other.phi)?;
        Ok(ChartMap {
            alpha: a.mul(&other.alpha),
            beta: a.mul(&other.beta).add(&b),
            phi: self.phi.compose(&other.phi)?,
        })
    }
}

/// `Psi_inf o Phi o Psi_0^{-1}`.
pub fn conjugate<R: Ring>(psi_inf: &ChartMap<R>, phi: &Cocycle<R>, psi_0: &ChartMap<R>) -> Result<Cocycle<R>> {
    phi.compose_right(&psi_0.inverse()?)?.compose_left(psi_inf)
}

/// Result of the normal-form reduction: `normal = conjugate(psi_inf, input, psi_0)`.
#[derive(Clone, Debug)]
pub struct Reduction<R> {
    pub normal: Cocycle<R>,
    pub psi_0: ChartMap<R>,
    pub psi_inf: ChartMap<R>,
}

fn series_from<R: Ring>(coeffs: impl Fn(usize) -> R, order: usize) -> USeries<R> {
    USeries::new((0..=order).map(coeffs).collect(), order)
}

/// Straighten the `x^-1`, `x^-2` coefficients of the first component and the
/// `x^-1` coefficient of the second by a change of the zero chart.
fn right_half<R: Ring>(phi: &Cocycle<R>) -> Result<ChartMap<R>> {
    let n = phi.order();
    let f = series_from(|k| phi.first.get(-1, k), n);
    let g = series_from(|k| phi.first.get(-2, k), n);
    let h = series_from(|k| phi.second.get(-1, k), n);
    if h.coeff(1).try_inv().is_none() {
        return Err(Error::DegenerateExtraction);
    }
    let f_inv = f.reciprocal()?;
    let beta = g.mul(&f_inv).mul(&f_inv).neg();
    let phi_map = h.mul(&f_inv);
    ChartMap::new(f_inv, beta, phi_map)
}

/// The matching change of the infinity chart, read off along the `y/x` diagonals.
fn left_half<R: Ring>(phi: &Cocycle<R>) -> Result<ChartMap<R>> {
    let n = phi.order();
    let f = series_from(|k| phi.first.get(-(k as i32) - 1, k), n);
    let g = series_from(|k| phi.first.get(-(k as i32), k), n);
    let h = series_from(|k| phi.second.get(-(k as i32), k), n);
    let k = series_from(|k| if k == 0 { R::zero() } else { phi.second.get(1 - k as i32, k) }, n);
    let h_prime = h.derivative().truncate(n);
    let h_prime_inv = h_prime.reciprocal().map_err(|_| Error::DegenerateExtraction)?;
    let beta = g.sub(&f.derivative().truncate(n).mul(&k).mul(&h_prime_inv));
    let l = ChartMap::new(f, beta, h).map_err(|_| Error::DegenerateExtraction)?;
    l.inverse()
}

/// Reduce a prenormal cocycle to normal form.
///
/// The two extraction steps are applied, the result is checked for normality
/// and the conjugation identity is re-verified. If a single pass does not land
/// in normal form the passes are repeated with accumulated charts.
pub fn reduce_to_normal<R: Ring>(phi: &Cocycle<R>) -> Result<Reduction<R>> {
    phi.check_prenormal()?;
    let order = phi.order();
    let mut psi_0 = ChartMap::identity(order);
    let mut psi_inf = ChartMap::identity(order);
    let mut current = phi.clone();
    for _ in 0..=order {
        if current.is_normal() {
            break;
        }
        let r = right_half(&current)?;
        current = current.compose_right(&r.inverse()?)?;
        psi_0 = r.compose(&psi_0)?;
        let l = left_half(&current)?;
        current = current.compose_left(&l)?;
        psi_inf = l.compose(&psi_inf)?;
    }
    current.check_normal()?;
    let check = conjugate(&psi_inf, phi, &psi_0)?;
    if check != current {
        return Err(Error::NotNormal("conjugation identity failed after reduction".into()));
    }
    Ok(Reduction { normal: current, psi_0, psi_inf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    const N: usize = 8;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    #[test]
    fn chart_inverse_round_trips() {
        let id = ChartMap::<Q>::identity(N);
        assert_eq!(id.inverse().unwrap(), id);
        let s = ChartMap::scaling(q(3, 1), N);
        assert_eq!(s.inverse().unwrap(), ChartMap::scaling(q(1, 3), N));
        // (x/(1+ay), y/(1+ay))
        let d = USeries::new(vec![Q::one(), q(2, 1)], N).reciprocal().unwrap();
        let psi = ChartMap::new(d.clone(), USeries::zero(N), USeries::identity(N).mul(&d)).unwrap();
        let inv = psi.inverse().unwrap();
        assert!(psi.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&psi).unwrap().is_identity());
    }

    #[test]
    fn shift_at_infinity() {
        // (x + a y, y) o (1/x, y/x) = ((1 + a y)/x, y/x)
        let a = q(5, 2);
        let psi = ChartMap::new(USeries::one(N), USeries::new(vec![Q::zero(), a.clone()], N), USeries::identity(N)).unwrap();
        let out = conjugate(&psi, &Cocycle::linear(N), &ChartMap::identity(N)).unwrap();
        let expect_first = BiSeries::from_terms([(-1, 0, Q::one()), (-1, 1, a)], N, Trunc::YDegree);
        assert_eq!(out.first, expect_first);
        assert_eq!(out.second, Cocycle::<Q>::linear(N).second);
    }

    #[test]
    fn linear_is_normal_and_fixed() {
        let phi = Cocycle::<Q>::linear(N);
        assert_eq!(phi.form(), Form::Normal);
        let r = reduce_to_normal(&phi).unwrap();
        assert_eq!(r.normal, phi);
        assert!(r.psi_0.is_identity() && r.psi_inf.is_identity());
    }

    #[test]
    fn support_checks() {
        let a = BiSeries::monomial(-2, 4, Q::one(), N, Trunc::YDegree);
        let phi = Cocycle::from_deviation(&a, &BiSeries::zero(N, Trunc::YDegree));
        assert!(phi.is_prenormal());
        assert!(matches!(phi.check_normal(), Err(Error::NotNormal(_))));
        let bad = Cocycle::from_deviation(&BiSeries::monomial(0, 1, Q::one(), N, Trunc::YDegree), &BiSeries::zero(N, Trunc::YDegree));
        assert_eq!(bad.form(), Form::Raw);
    }

    #[test]
    fn reduces_conjugated_linear() {
        // random-ish prenormal-preserving charts
        let p0 = ChartMap::new(
            USeries::new(vec![Q::one(), q(1, 2), q(-1, 3)], N),
            USeries::new(vec![Q::zero(), Q::zero(), q(2, 1)], N),
            USeries::new(vec![Q::zero(), Q::one(), q(1, 4)], N),
        )
        .unwrap();
        let pinf = ChartMap::new(
            USeries::new(vec![Q::one(), q(-2, 1)], N),
            USeries::new(vec![Q::zero(), q(3, 1), q(1, 1)], N),
            USeries::new(vec![Q::zero(), Q::one(), Q::zero(), q(1, 5)], N),
        )
        .unwrap();
        let phi = conjugate(&pinf, &Cocycle::linear(N), &p0).unwrap();
        phi.check_prenormal().unwrap();
        let r = reduce_to_normal(&phi).unwrap();
        assert!(r.normal.is_normal());
        assert_eq!(conjugate(&r.psi_inf, &phi, &r.psi_0).unwrap(), r.normal);
    }
}
