//! Truncated series.
//!
//! [`USeries`] is a univariate power series `c0 + c1 y + ... + cN y^N`.
//! [`BiSeries`] is `sum_n p_n(x) y^n` where each `p_n` is a Laurent
//! polynomial in `x`. Two truncation rules are available: by y-degree
//! (`n <= N`, x-exponents unbounded; used for cocycles) and by total degree
//! (`m + n <= N`; used for Taylor expansions at a basepoint).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Univariate truncated power series.
#[derive(Clone, Debug, PartialEq)]
pub struct USeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> USeries<R> {
    /// Coefficients `c0..cN`; the vector is padded or cut to length `order + 1`.
    pub fn new(mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.resize(order + 1, R::zero());
        USeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: R, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(R::one(), order)
    }

    /// The identity germ `y`.
    pub fn identity(order: usize) -> Self {
        Self::new(vec![R::zero(), R::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn set(&mut self, k: usize, c: R) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> USeries<S> {
        USeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    fn zip(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        let n = self.order().min(o.order());
        USeries { coeffs: (0..=n).map(|k| f(&self.coeffs[k], &o.coeffs[k])).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, R::add_ref)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, R::sub_ref)
    }

    pub fn neg(&self) -> Self {
        self.map(R::neg_ref)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|v| v.mul_ref(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![R::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        USeries { coeffs: out }
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].try_inv().ok_or(Error::NonMonomialLeading)?;
        let n = self.order();
        let mut out = vec![R::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut s = R::zero();
            for j in 1..=k {
                s = s.add_ref(&self.coeffs[j].mul_ref(&out[k - j]));
            }
            out[k] = s.mul_ref(&inv0).neg_ref();
        }
        Ok(USeries { coeffs: out })
    }

    /// `self^(p/q)` for a series with invertible constant term.
    pub fn pow_rational(&self, p: i64, q: u64) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        let lead = c0.try_root(p, q).ok_or(Error::NonIntegralPower)?;
        let inv0 = c0.try_inv().ok_or(Error::NonMonomialLeading)?;
        let u = self.scale(&inv0).sub(&Self::one(self.order()));
        Ok(binomial_series(&u, p, q, self.order(), |a, b| a.mul(b), Self::one(self.order())).scale(&lead))
    }

    /// `self(g)`; `g` must have zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::constant(self.coeff(n), n);
        for k in (0..n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] = acc.coeffs[0].add_ref(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse; needs `f(0) = 0` and `f'(0)` invertible.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let inv1 = self.coeffs[1].try_inv().ok_or(Error::NotInvertible)?;
        let mut g = Self::new(vec![R::zero(), inv1.clone()], n);
        for k in 2..=n {
            let e = self.compose(&g)?.coeff(k);
            if !e.is_zero() {
                g.coeffs[k] = g.coeffs[k].sub_ref(&e.mul_ref(&inv1));
            }
        }
        Ok(g)
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        USeries {
            coeffs: (1..=n).map(|k| self.coeffs[k].mul_ref(&R::from_i64(k as i64))).collect(),
        }
    }

    /// Evaluate the polynomial part at a scalar.
    pub fn eval(&self, y: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(y).add_ref(c);
        }
        acc
    }
}

/// `sum_j binom(p/q, j) u^j`, with `u` nilpotent modulo the truncation.
fn binomial_series<T: Clone>(
    u: &T,
    p: i64,
    q: u64,
    terms: usize,
    mul: impl Fn(&T, &T) -> T,
    one: T,
) -> T
where
    T: ScaleAdd,
{
    let q = q as i64;
    let mut acc = one.clone();
    let mut upow = one;
    let mut num: Vec<(i64, i64)> = Vec::new();
    for j in 1..=terms as i64 {
        upow = mul(&upow, u);
        if upow.is_zero_series() {
            break;
        }
        num.push((p - (j - 1) * q, q * j));
        acc = acc.add_scaled(&upow, &num);
    }
    acc
}

/// Minimal interface shared by both series kinds for the binomial helper.
trait ScaleAdd {
    fn add_scaled(&self, t: &Self, factors: &[(i64, i64)]) -> Self;
    fn is_zero_series(&self) -> bool;
}

fn product_of_fracs<R: Ring>(factors: &[(i64, i64)]) -> R {
    factors.iter().fold(R::one(), |acc, &(n, d)| acc.mul_ref(&R::from_frac(n, d)))
}

impl<R: Ring> ScaleAdd for USeries<R> {
    fn add_scaled(&self, t: &Self, factors: &[(i64, i64)]) -> Self {
        self.add(&t.scale(&product_of_fracs(factors)))
    }
    fn is_zero_series(&self) -> bool {
        self.is_zero()
    }
}

impl<R: Ring> ScaleAdd for BiSeries<R> {
    fn add_scaled(&self, t: &Self, factors: &[(i64, i64)]) -> Self {
        self.add(&t.scale(&product_of_fracs(factors)))
    }
    fn is_zero_series(&self) -> bool {
        self.is_zero()
    }
}

/// Laurent polynomial in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct XLaurent<R> {
    terms: BTreeMap<i32, R>,
}

impl<R: Ring> XLaurent<R> {
    pub fn zero() -> Self {
        XLaurent { terms: BTreeMap::new() }
    }

    pub fn monomial(m: i32, c: R) -> Self {
        let mut l = Self::zero();
        l.add_term(m, c);
        l
    }

    pub fn get(&self, m: i32) -> R {
        self.terms.get(&m).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &R)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some((m, c))` when this is the single term `c x^m`.
    pub fn as_monomial(&self) -> Option<(i32, &R)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&m, c)| (m, c))
        } else {
            None
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, m: i32, c: R) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn retain(&mut self, keep: impl Fn(i32) -> bool) {
        self.terms.retain(|&m, _| keep(m));
    }
}

/// How a [`BiSeries`] is truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trunc {
    /// Keep `y^n` for `n <= N`, any x-exponent.
    YDegree,
    /// Keep `x^m y^n` for `m + n <= N`.
    Total,
}

/// Truncated series `sum_{n <= N} p_n(x) y^n`.
#[derive(Clone)]
pub struct BiSeries<R> {
    order: usize,
    trunc: Trunc,
    rows: Vec<XLaurent<R>>,
}

impl<R: Ring> BiSeries<R> {
    pub fn zero(order: usize, trunc: Trunc) -> Self {
        BiSeries { order, trunc, rows: vec![XLaurent::zero(); order + 1] }
    }

    pub fn monomial(m: i32, n: usize, c: R, order: usize, trunc: Trunc) -> Self {
        let mut s = Self::zero(order, trunc);
        s.add_term(m, n, c);
        s
    }

    pub fn constant(c: R, order: usize, trunc: Trunc) -> Self {
        Self::monomial(0, 0, c, order, trunc)
    }

    pub fn one(order: usize, trunc: Trunc) -> Self {
        Self::constant(R::one(), order, trunc)
    }

    pub fn x(order: usize, trunc: Trunc) -> Self {
        Self::monomial(1, 0, R::one(), order, trunc)
    }

    pub fn y(order: usize, trunc: Trunc) -> Self {
        Self::monomial(0, 1, R::one(), order, trunc)
    }

    /// Build from `(m, n, c)` triples; terms beyond the truncation are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, usize, R)>, order: usize, trunc: Trunc) -> Self {
        let mut s = Self::zero(order, trunc);
        for (m, n, c) in terms {
            s.add_term(m, n, c);
        }
        s
    }

    /// Embed a univariate series in `y`.
    pub fn from_useries_y(u: &USeries<R>, order: usize, trunc: Trunc) -> Self {
        Self::from_terms((0..=u.order()).map(|k| (0, k, u.coeff(k))), order, trunc)
    }

    /// Embed a univariate series in `x` (total truncation makes sense here).
    pub fn from_useries_x(u: &USeries<R>, order: usize, trunc: Trunc) -> Self {
        Self::from_terms((0..=u.order()).map(|k| (k as i32, 0, u.coeff(k))), order, trunc)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    fn keeps(&self, m: i32, n: usize) -> bool {
        n <= self.order && (self.trunc == Trunc::YDegree || m + n as i32 <= self.order as i32)
    }

    pub fn add_term(&mut self, m: i32, n: usize, c: R) {
        if self.keeps(m, n) {
            self.rows[n].add_term(m, c);
        }
    }

    pub fn get(&self, m: i32, n: usize) -> R {
        self.rows.get(n).map(|r| r.get(m)).unwrap_or_else(R::zero)
    }

    pub fn row(&self, n: usize) -> &XLaurent<R> {
        &self.rows[n]
    }

    /// Nonzero terms `(m, n, c)` sorted by `(n, m)`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, usize, &R)> {
        self.rows.iter().enumerate().flat_map(|(n, r)| r.iter().map(move |(m, c)| (m, n, c)))
    }

    pub fn num_terms(&self) -> usize {
        self.rows.iter().map(|r| r.terms.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(XLaurent::is_zero)
    }

    /// Lowest y-degree with a nonzero coefficient.
    pub fn y_valuation(&self) -> Option<usize> {
        self.rows.iter().position(|r| !r.is_zero())
    }

    /// Re-truncate at a different order (extending only adds implicit zeros).
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_terms(self.terms().map(|(m, n, c)| (m, n, c.clone())), order, self.trunc)
    }

    pub fn with_trunc(&self, trunc: Trunc) -> Self {
        Self::from_terms(self.terms().map(|(m, n, c)| (m, n, c.clone())), self.order, trunc)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> BiSeries<S> {
        BiSeries::from_terms(self.terms().map(|(m, n, c)| (m, n, f(c))), self.order, self.trunc)
    }

    /// Keep only terms satisfying the predicate.
    pub fn filter(&self, keep: impl Fn(i32, usize) -> bool) -> Self {
        let mut out = self.clone();
        for (n, r) in out.rows.iter_mut().enumerate() {
            r.retain(|m| keep(m, n));
        }
        out
    }

    fn check_mode(&self, o: &Self) {
        assert_eq!(self.trunc, o.trunc, "mixing truncation modes");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_mode(o);
        let order = self.order.min(o.order);
        let mut out = self.with_order(order);
        for (m, n, c) in o.terms() {
            out.add_term(m, n, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_mode(o);
        let order = self.order.min(o.order);
        let mut out = self.with_order(order);
        for (m, n, c) in o.terms() {
            out.add_term(m, n, c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(R::neg_ref)
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero(self.order, self.trunc);
        }
        self.map(|v| v.mul_ref(c))
    }

    /// Multiply by `c x^m y^n`.
    pub fn shift(&self, m: i32, n: usize, c: &R) -> Self {
        let mut out = Self::zero(self.order, self.trunc);
        for (mm, nn, v) in self.terms() {
            out.add_term(mm + m, nn + n, v.mul_ref(c));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_mode(o);
        let order = self.order.min(o.order);
        let mut out = Self::zero(order, self.trunc);
        for i in 0..=order {
            if self.rows[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if o.rows[j].is_zero() {
                    continue;
                }
                for (ma, ca) in self.rows[i].iter() {
                    for (mb, cb) in o.rows[j].iter() {
                        out.add_term(ma + mb, i + j, ca.mul_ref(cb));
                    }
                }
            }
        }
        out
    }

    pub fn pow_u(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order, self.trunc);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Whether `g` can be substituted into a power series: zero y-degree-0
    /// row (y-truncation) or zero constant term (total truncation).
    pub fn is_nilpotent(&self) -> bool {
        match self.trunc {
            Trunc::YDegree => self.rows[0].is_zero(),
            Trunc::Total => self.get(0, 0).is_zero() && self.rows[0].iter().all(|(m, _)| m > 0),
        }
    }

    /// Split `f = c x^k (1 + u)` with `u` nilpotent.
    fn split_leading(&self) -> Result<(i32, R, Self)> {
        let (k, c) = match self.trunc {
            Trunc::YDegree => {
                let (k, c) = self.rows[0].as_monomial().ok_or(Error::NonMonomialLeading)?;
                (k, c.clone())
            }
            Trunc::Total => {
                let c = self.get(0, 0);
                if c.is_zero() || self.rows[0].min_exp() != Some(0) {
                    return Err(Error::NonMonomialLeading);
                }
                (0, c)
            }
        };
        let inv = c.try_inv().ok_or(Error::NonMonomialLeading)?;
        let u = self.shift(-k, 0, &inv).sub(&Self::one(self.order, self.trunc));
        Ok((k, c, u))
    }

    /// Multiplicative inverse.
    pub fn reciprocal(&self) -> Result<Self> {
        let (k, c, u) = self.split_leading()?;
        let inv = c.try_inv().ok_or(Error::NonMonomialLeading)?;
        let geo = binomial_series(&u, -1, 1, self.order + 1, |a, b| a.mul(b), Self::one(self.order, self.trunc));
        Ok(geo.shift(-k, 0, &inv))
    }

    /// `self^(p/q)` by the binomial series of the unit part.
    pub fn pow_rational(&self, p: i64, q: u64) -> Result<Self> {
        let (k, c, u) = self.split_leading()?;
        let kp = k as i64 * p;
        if kp % q as i64 != 0 {
            return Err(Error::NonIntegralPower);
        }
        let lead = c.try_root(p, q).ok_or(Error::NonIntegralPower)?;
        let series = binomial_series(&u, p, q, self.order + 1, |a, b| a.mul(b), Self::one(self.order, self.trunc));
        Ok(series.shift((kp / q as i64) as i32, 0, &lead))
    }

    /// Partial derivative in `x`. Under total truncation the order drops by one.
    pub fn d_dx(&self) -> Self {
        let order = match self.trunc {
            Trunc::YDegree => self.order,
            Trunc::Total => self.order.saturating_sub(1),
        };
        let mut out = Self::zero(order, self.trunc);
        for (m, n, c) in self.terms() {
            if m != 0 {
                out.add_term(m - 1, n, c.mul_ref(&R::from_i64(m as i64)));
            }
        }
        out
    }

    /// Partial derivative in `y`; the order drops by one.
    pub fn d_dy(&self) -> Self {
        let mut out = Self::zero(self.order.saturating_sub(1), self.trunc);
        for (m, n, c) in self.terms() {
            if n > 0 {
                out.add_term(m, n - 1, c.mul_ref(&R::from_i64(n as i64)));
            }
        }
        out
    }

    fn integrated_order(&self) -> usize {
        match self.trunc {
            Trunc::Total => self.order + 1,
            Trunc::YDegree => self.order,
        }
    }

    /// Antiderivative in `x` vanishing on `x = 0`; needs no `x^-1` terms.
    pub fn integrate_x(&self) -> Result<Self> {
        let mut out = Self::zero(self.integrated_order(), self.trunc);
        for (m, n, c) in self.terms() {
            if m == -1 {
                return Err(Error::NonIntegralPower);
            }
            out.add_term(m + 1, n, c.mul_ref(&R::from_frac(1, m as i64 + 1)));
        }
        Ok(out)
    }

    /// Antiderivative in `y` vanishing on `y = 0`.
    pub fn integrate_y(&self) -> Self {
        let mut out = Self::zero(self.integrated_order(), self.trunc);
        for (m, n, c) in self.terms() {
            out.add_term(m, n + 1, c.mul_ref(&R::from_frac(1, n as i64 + 1)));
        }
        out
    }

    /// Whether every term lies in `V(k, l) = {(m + k, n + l) : -n <= m <= 0}`.
    pub fn in_support(&self, k: i32, l: usize) -> bool {
        self.terms().all(|(mm, nn, _)| {
            if nn < l {
                return false;
            }
            let n = (nn - l) as i32;
            let m = mm - k;
            -n <= m && m <= 0
        })
    }

    /// Terms outside `V(k, l)`, for diagnostics.
    pub fn outside_support(&self, k: i32, l: usize) -> Vec<(i32, usize)> {
        let v = BiSeries::from_terms(self.terms().map(|(m, n, c)| (m, n, c.clone())), self.order, self.trunc);
        v.terms()
            .filter(|&(mm, nn, _)| {
                nn < l || {
                    let n = (nn - l) as i32;
                    let m = mm - k;
                    !(-n <= m && m <= 0)
                }
            })
            .map(|(m, n, _)| (m, n))
            .collect()
    }

    /// Evaluate the truncated sum at a point (negative powers need invertible `x`).
    pub fn eval(&self, x: &R, y: &R) -> Option<R> {
        let mut acc = R::zero();
        for (m, n, c) in self.terms() {
            let xm = x.try_pow_i(m as i64)?;
            acc = acc.add_ref(&c.mul_ref(&xm).mul_ref(&y.pow_u(n as u32)));
        }
        Some(acc)
    }
}

/// `f(g)` for a univariate series `f` and a nilpotent bivariate `g`.
pub fn compose_u<R: Ring>(f: &USeries<R>, g: &BiSeries<R>) -> Result<BiSeries<R>> {
    if !g.is_nilpotent() {
        return Err(Error::NonzeroConstantTerm);
    }
    let order = g.order();
    let top = f.order().min(order + 1);
    let mut acc = BiSeries::constant(f.coeff(top), order, g.trunc());
    for k in (0..top).rev() {
        acc = acc.mul(g);
        acc.add_term(0, 0, f.coeff(k));
    }
    Ok(acc)
}

/// Substitute `x -> X`, `y -> Y` in `f`.
///
/// `Y` must be nilpotent. Negative powers of `X` need a monomial leading
/// coefficient; under total truncation `X` must also be nilpotent.
pub fn compose_bi<R: Ring>(f: &BiSeries<R>, big_x: &BiSeries<R>, big_y: &BiSeries<R>) -> Result<BiSeries<R>> {
    if !big_y.is_nilpotent() {
        return Err(Error::NonzeroConstantTerm);
    }
    let order = big_x.order().min(big_y.order()).min(f.order());
    let trunc = big_x.trunc();
    if trunc == Trunc::Total && !big_x.is_nilpotent() && f.terms().any(|(m, _, _)| m != 0) {
        return Err(Error::NonzeroConstantTerm);
    }
    let big_x = big_x.with_order(order);
    let big_y = big_y.with_order(order);
    let lo = f.terms().map(|(m, _, _)| m).min().unwrap_or(0).min(0);
    let hi = f.terms().map(|(m, _, _)| m).max().unwrap_or(0).max(0);

    let one = BiSeries::one(order, trunc);
    let mut pos = vec![one.clone()];
    for _ in 0..hi {
        let next = pos.last().unwrap().mul(&big_x);
        pos.push(next);
    }
    let mut neg = vec![one.clone()];
    if lo < 0 {
        let inv = big_x.reciprocal()?;
        for _ in 0..(-lo) {
            let next = neg.last().unwrap().mul(&inv);
            neg.push(next);
        }
    }
    let xpow = |m: i32| if m >= 0 { &pos[m as usize] } else { &neg[(-m) as usize] };

    let mut acc = BiSeries::zero(order, trunc);
    let mut ypow = one;
    for n in 0..=order.min(f.order()) {
        if n > 0 {
            ypow = ypow.mul(&big_y);
            if ypow.is_zero() {
                break;
            }
        }
        let row = f.row(n);
        if row.is_zero() {
            continue;
        }
        let mut s = BiSeries::zero(order, trunc);
        for (m, c) in row.iter() {
            s = s.add(&xpow(m).scale(c));
        }
        acc = acc.add(&s.mul(&ypow));
    }
    Ok(acc)
}

impl<R: Ring> PartialEq for BiSeries<R> {
    /// Equality up to the smaller of the two truncation orders.
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.sub(other).is_zero()
    }
}

impl<R: fmt::Debug> fmt::Debug for BiSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeries[N={}, {:?}]{{", self.order, self.trunc)?;
        let mut first = true;
        for (n, row) in self.rows.iter().enumerate() {
            for (m, c) in &row.terms {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "x^{m} y^{n}: {c:?}")?;
            }
        }
        write!(f, "}}")
    }
}

macro_rules! ref_ops {
    ($ty:ident) => {
        impl<R: Ring> Add for &$ty<R> {
            type Output = $ty<R>;
            fn add(self, o: Self) -> $ty<R> {
                $ty::add(self, o)
            }
        }
        impl<R: Ring> Sub for &$ty<R> {
            type Output = $ty<R>;
            fn sub(self, o: Self) -> $ty<R> {
                $ty::sub(self, o)
            }
        }
        impl<R: Ring> Mul for &$ty<R> {
            type Output = $ty<R>;
            fn mul(self, o: Self) -> $ty<R> {
                $ty::mul(self, o)
            }
        }
        impl<R: Ring> Neg for &$ty<R> {
            type Output = $ty<R>;
            fn neg(self) -> $ty<R> {
                $ty::neg(self)
            }
        }
    };
}

ref_ops!(USeries);
ref_ops!(BiSeries);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    const N: usize = 8;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    fn y_over_x() -> BiSeries<Q> {
        BiSeries::monomial(-1, 1, Q::one(), N, Trunc::YDegree)
    }

    #[test]
    fn monomial_product() {
        let t = y_over_x();
        assert_eq!(t.mul(&t), BiSeries::monomial(-2, 2, Q::one(), N, Trunc::YDegree));
    }

    #[test]
    fn reciprocal_of_one_plus_t() {
        let f = BiSeries::one(N, Trunc::YDegree).add(&y_over_x());
        let r = f.reciprocal().unwrap();
        // coefficient recursion: (1+t)^{-1} = sum (-t)^k
        for n in 0..=N {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(r.get(-(n as i32), n), q(sign, 1));
        }
        assert_eq!(f.mul(&r), BiSeries::one(N, Trunc::YDegree));
    }

    #[test]
    fn reciprocal_with_pole() {
        let x_inv = BiSeries::monomial(-1, 0, Q::one(), N, Trunc::YDegree);
        assert_eq!(x_inv.reciprocal().unwrap(), BiSeries::x(N, Trunc::YDegree));
        // x (1 + y^2/x)
        let f = BiSeries::from_terms([(1, 0, Q::one()), (0, 2, Q::one())], N, Trunc::YDegree);
        let r = f.reciprocal().unwrap();
        assert_eq!(r.get(-1, 0), Q::one());
        assert_eq!(r.get(-2, 2), q(-1, 1));
        assert_eq!(r.get(-3, 4), Q::one());
        assert_eq!(f.mul(&r), BiSeries::one(N, Trunc::YDegree));
        let bad = BiSeries::from_terms([(1, 0, Q::one()), (0, 0, Q::one())], N, Trunc::YDegree);
        assert_eq!(bad.reciprocal().unwrap_err(), Error::NonMonomialLeading);
    }

    #[test]
    fn special_binomial() {
        // (1 - y^2/x)^{-1/2} = 1 + y^2/(2x) + 3y^4/(8x^2) + ...
        let f = BiSeries::from_terms([(0, 0, Q::one()), (-1, 2, q(-1, 1))], N, Trunc::YDegree);
        let s = f.pow_rational(-1, 2).unwrap();
        assert_eq!(s.get(-1, 2), q(1, 2));
        assert_eq!(s.get(-2, 4), q(3, 8));
        assert_eq!(s.get(-3, 6), q(5, 16));
        // squared and inverted gives f
        assert_eq!(s.mul(&s).reciprocal().unwrap(), f);
    }

    #[test]
    fn integer_powers_agree() {
        let f = BiSeries::from_terms([(0, 0, Q::one()), (0, 1, Q::one())], N, Trunc::YDegree);
        assert_eq!(f.pow_rational(2, 1).unwrap(), f.mul(&f));
        assert_eq!(f.pow_rational(0, 1).unwrap(), BiSeries::one(N, Trunc::YDegree));
        assert_eq!(f.pow_rational(-3, 1).unwrap(), f.pow_u(3).reciprocal().unwrap());
    }

    #[test]
    fn non_integral_x_power() {
        let f = BiSeries::monomial(1, 0, Q::one(), N, Trunc::YDegree);
        assert_eq!(f.pow_rational(1, 2).unwrap_err(), Error::NonIntegralPower);
        let g = BiSeries::monomial(2, 0, Q::from_i64(4), N, Trunc::YDegree);
        assert_eq!(g.pow_rational(1, 2).unwrap(), BiSeries::monomial(1, 0, Q::from_i64(2), N, Trunc::YDegree));
    }

    #[test]
    fn mobius_round_trip() {
        let a = q(3, 2);
        // y/(1+a y) and y/(1-a y)
        let f = USeries::identity(N).mul(&USeries::new(vec![Q::one(), a.clone()], N).reciprocal().unwrap());
        let g = USeries::identity(N).mul(&USeries::new(vec![Q::one(), a.neg_ref()], N).reciprocal().unwrap());
        assert_eq!(f.compose(&g).unwrap(), USeries::identity(N));
        assert_eq!(f.revert().unwrap(), g);
    }

    #[test]
    fn geometric_of_shift() {
        // (sum y^n) o (y + y^2) against direct polynomial expansion
        let f = USeries::new(vec![Q::one(); N + 1], N);
        let g = USeries::new(vec![Q::zero(), Q::one(), Q::one()], N);
        let c = f.compose(&g).unwrap();
        let mut brute = vec![Q::zero(); N + 1];
        for k in 0..=N {
            // (y + y^2)^k = sum_j binom(k, j) y^{k+j}
            let mut binom = 1i64;
            for j in 0..=k {
                if k + j <= N {
                    brute[k + j] = brute[k + j].add_ref(&Q::from_i64(binom));
                }
                binom = binom * (k - j) as i64 / (j + 1) as i64;
            }
        }
        assert_eq!(c.coeffs(), &brute[..]);
    }

    #[test]
    fn revert_cubic() {
        let f = USeries::new(vec![Q::zero(), Q::one(), Q::zero(), Q::one()], N);
        let g = f.revert().unwrap();
        assert_eq!(f.compose(&g).unwrap(), USeries::identity(N));
        assert_eq!(g.compose(&f).unwrap(), USeries::identity(N));
        assert_eq!(USeries::<Q>::identity(N).revert().unwrap(), USeries::identity(N));
        assert_eq!(USeries::<Q>::one(N).revert().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn compose_u_needs_nilpotent() {
        let f = USeries::<Q>::identity(N);
        let g = BiSeries::one(N, Trunc::YDegree);
        assert_eq!(compose_u(&f, &g).unwrap_err(), Error::NonzeroConstantTerm);
        let t = y_over_x();
        assert_eq!(compose_u(&f, &t).unwrap(), t);
    }

    #[test]
    fn partials() {
        let x = BiSeries::<Q>::x(N, Trunc::Total);
        assert_eq!(x.d_dx(), BiSeries::one(N - 1, Trunc::Total));
        let f = BiSeries::monomial(-1, 2, Q::one(), N, Trunc::YDegree);
        assert_eq!(f.d_dy(), BiSeries::monomial(-1, 1, Q::from_i64(2), N - 1, Trunc::YDegree));
        let xy = BiSeries::monomial(1, 1, Q::one(), N, Trunc::Total);
        assert_eq!(xy.d_dx().d_dy(), BiSeries::one(N - 2, Trunc::Total));
    }

    #[test]
    fn support_predicate() {
        // V(-1,0): y-degree n, x-exponents in [-1-n, -1]
        let f = BiSeries::from_terms([(-1, 0, Q::one()), (-3, 2, Q::one())], N, Trunc::YDegree);
        assert!(f.in_support(-1, 0));
        let g = BiSeries::from_terms([(-4, 2, Q::one())], N, Trunc::YDegree);
        assert!(!g.in_support(-1, 0));
        assert_eq!(g.outside_support(-1, 0), vec![(-4, 2)]);
    }

    #[test]
    fn total_truncation() {
        let x = BiSeries::<Q>::x(3, Trunc::Total);
        let y = BiSeries::<Q>::y(3, Trunc::Total);
        let p = x.add(&y).pow_u(4);
        assert!(p.is_zero());
        let e = BiSeries::one(3, Trunc::Total).sub(&x);
        let r = e.reciprocal().unwrap();
        assert_eq!(r.get(3, 0), Q::one());
        assert_eq!(r.mul(&e), BiSeries::one(3, Trunc::Total));
    }
}
