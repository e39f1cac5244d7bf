//! Sparse multivariate polynomials.
//!
//! Monomials are exponent vectors with trailing zeros trimmed, so the
//! derived `Vec` ordering is lexicographic with variable 0 largest.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Field, Ring};

pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        out.push(a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0));
    }
    out
}

/// `a / b` if `b` divides `a`.
pub fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let bi = b.get(i).copied().unwrap_or(0);
        if a[i] < bi {
            return None;
        }
        out.push(a[i] - bi);
    }
    Some(trim(out))
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0).max(b.get(i).copied().unwrap_or(0)))
        .collect()
}

pub fn mono_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Polynomial with coefficients in `R`.
#[derive(Clone, PartialEq)]
pub struct Poly<R> {
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> Poly<R> {
    pub fn constant(c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Self::monomial(m, R::one())
    }

    pub fn monomial(m: Monomial, c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(m), c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> R {
        self.terms.get(&trim(m.to_vec())).cloned().unwrap_or_else(R::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> R {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    /// Leading monomial and coefficient in lex order.
    pub fn leading(&self) -> Option<(&Monomial, &R)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| mono_degree(m)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.get(var).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// Largest variable index that occurs, plus one.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Variables occurring with nonzero exponent.
    pub fn vars_used(&self) -> Vec<usize> {
        let n = self.num_vars();
        (0..n)
            .filter(|&i| self.terms.keys().any(|m| m.get(i).copied().unwrap_or(0) > 0))
            .collect()
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let p = v.mul_ref(c);
            if !p.is_zero() {
                terms.insert(m.clone(), p);
            }
        }
        Poly { terms }
    }

    pub fn mul_monomial(&self, mono: &[u32], c: &R) -> Self {
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let p = v.mul_ref(c);
            if !p.is_zero() {
                terms.insert(trim(mono_mul(m, mono)), p);
            }
        }
        Poly { terms }
    }

    fn add_term(&mut self, m: Monomial, c: R) {
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

    /// Evaluate at a point; missing coordinates count as zero.
    pub fn eval(&self, point: &[R]) -> R {
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    let v = point.get(i).cloned().unwrap_or_else(R::zero);
                    t = t.mul_ref(&v.pow_u(e));
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Substitute `value` for variable `var`, keeping the others symbolic.
    pub fn substitute(&self, var: usize, value: &R) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0);
            let mut mm = m.clone();
            if var < mm.len() {
                mm[var] = 0;
            }
            out.add_term(trim(mm), c.mul_ref(&value.pow_u(e)));
        }
        out
    }

    /// Map coefficients into another ring.
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Coefficients as a univariate polynomial in `var` (index = power),
    /// valid when no other variable occurs.
    pub fn univariate_coeffs(&self, var: usize) -> Vec<R> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![R::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0) as usize;
            out[e] = out[e].add_ref(c);
        }
        out
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm[var] -= 1;
            out.add_term(trim(mm), c.mul_ref(&R::from_i64(e as i64)));
        }
        out
    }
}

impl<F: Field> Poly<F> {
    /// Scale so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Poly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn sub_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.neg_ref());
        }
        out
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_constant() {
            return o.scale(&self.constant_term());
        }
        if o.is_constant() {
            return self.scale(&o.constant_term());
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(mono_mul(ma, mb), ca.mul_ref(cb));
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Poly::constant(R::from_frac(num, den))
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_constant() {
            self.constant_term().try_inv().map(Poly::constant)
        } else {
            None
        }
    }
    fn try_root(&self, p: i64, q: u64) -> Option<Self> {
        if self.is_constant() {
            self.constant_term().try_root(p, q).map(Poly::constant)
        } else if q == 1 && p >= 0 {
            Some(self.pow_u(p as u32))
        } else {
            None
        }
    }
}

const VAR_NAMES: [&str; 6] = ["a", "b", "c", "t", "s", "u"];

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.iter().enumerate() {
                let name = VAR_NAMES.get(i).copied().unwrap_or("v");
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl<R: Ring + fmt::Debug> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn lex_leading() {
        // a > b > c
        let p = Poly::<Q>::var(2).pow_u(3).add_ref(&Poly::var(0));
        assert_eq!(p.leading().unwrap().0, &vec![1]);
        let p = Poly::<Q>::var(1).add_ref(&Poly::var(2).pow_u(5));
        assert_eq!(p.leading().unwrap().0, &vec![0, 1]);
    }

    #[test]
    fn expand_square() {
        let a = Poly::<Q>::var(0);
        let b = Poly::<Q>::var(1);
        let s = a.add_ref(&b).pow_u(2);
        let expect = a.mul_ref(&a).add_ref(&a.mul_ref(&b).scale(&q(2))).add_ref(&b.mul_ref(&b));
        assert_eq!(s, expect);
        assert_eq!(s.eval(&[q(2), q(3)]), q(25));
        assert!(s.sub_ref(&expect).is_zero());
    }

    #[test]
    fn substitution_and_derivative() {
        let a = Poly::<Q>::var(0);
        let c = Poly::<Q>::var(2);
        let p = a.mul_ref(&c).add_ref(&c.pow_u(2));
        let s = p.substitute(2, &q(1));
        assert_eq!(s, a.add_ref(&Poly::one()));
        assert_eq!(p.derivative(2), a.add_ref(&c.scale(&q(2))));
        assert_eq!(mono_div(&[2, 1], &[1]), Some(vec![1, 1]));
        assert_eq!(mono_div(&[2], &[0, 1]), None);
    }
}
