//! Small polynomial systems: Buchberger's algorithm in lex order and
//! back-substitution through the elimination ideals of a zero-dimensional basis.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{mono_degree, mono_div, mono_lcm, Monomial, Poly};
use crate::scalar::{Field, Ring};

/// Limits guarding Buchberger against blow-up.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_basis: usize,
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 4000, max_basis: 150, max_terms: 4000 }
    }
}

fn lm<F: Field>(p: &Poly<F>) -> &Monomial {
    p.leading().expect("nonzero polynomial").0
}

/// Remainder of `p` under full reduction by `basis` (monic leading coefficients).
pub fn reduce<F: Field>(p: &Poly<F>, basis: &[Poly<F>]) -> Poly<F> {
    let mut p = p.clone();
    let mut rem = Poly::zero();
    while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let hit = basis.iter().find_map(|g| {
            let (gm, gc) = g.leading()?;
            mono_div(&m, gm).map(|q| (g, q, gc.clone()))
        });
        match hit {
            Some((g, q, gc)) => {
                p = p.sub_ref(&g.mul_monomial(&q, &c.div_ref(&gc)));
            }
            None => {
                let t = Poly::monomial(m, c);
                rem = rem.add_ref(&t);
                p = p.sub_ref(&t);
            }
        }
    }
    rem
}

fn s_poly<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = mono_lcm(fm, gm);
    let a = f.mul_monomial(&mono_div(&l, fm).unwrap(), &fc.inv());
    let b = g.mul_monomial(&mono_div(&l, gm).unwrap(), &gc.inv());
    a.sub_ref(&b)
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced lex Groebner basis. Returns `Inconclusive` when the budget is exceeded.
pub fn groebner<F: Field>(input: &[Poly<F>], budget: Budget) -> Result<Vec<Poly<F>>> {
    let mut basis: Vec<Poly<F>> = Vec::new();
    for p in input {
        let r = reduce(p, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(vec![Poly::one()]);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal selection: smallest lcm degree
        let (k, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(i, j))| mono_degree(&mono_lcm(lm(&basis[i]), lm(&basis[j]))))
            .unwrap();
        let (i, j) = pairs.swap_remove(k);
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::Inconclusive("Groebner pair budget exceeded".into()));
        }
        if coprime(lm(&basis[i]), lm(&basis[j])) {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Poly::one()]);
        }
        if r.num_terms() > budget.max_terms || basis.len() >= budget.max_basis {
            return Err(Error::Inconclusive("Groebner basis grew beyond budget".into()));
        }
        let n = basis.len();
        basis.push(r.monic());
        for i in 0..n {
            pairs.push((i, n));
        }
    }
    Ok(interreduce(basis))
}

fn interreduce<F: Field>(basis: Vec<Poly<F>>) -> Vec<Poly<F>> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Poly<F>> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && mono_div(lm(g), lm(h)).is_some() && (lm(g) != lm(h) || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out: Vec<Poly<F>> = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Poly<F>> = keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        let (m, c) = keep[i].leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lead = Poly::monomial(m, c);
        let tail = reduce(&keep[i].sub_ref(&lead), &others);
        out.push(lead.add_ref(&tail).monic());
    }
    out.sort_by(|a, b| lm(a).cmp(lm(b)));
    out
}

pub fn is_unit_ideal<F: Field>(gb: &[Poly<F>]) -> bool {
    gb.iter().any(|g| g.is_constant() && !g.is_zero())
}

/// Every variable in `vars` has a pure-power leading monomial.
pub fn is_zero_dimensional<F: Field>(gb: &[Poly<F>], vars: &[usize]) -> bool {
    vars.iter().all(|&v| {
        gb.iter().any(|g| {
            let m = lm(g);
            m.get(v).copied().unwrap_or(0) > 0 && m.iter().enumerate().all(|(i, &e)| i == v || e == 0)
        })
    })
}

/// One coordinate of a solution: always a float, exact when it could be certified.
#[derive(Clone, Debug, PartialEq)]
pub struct Coord<F> {
    pub approx: Complex64,
    pub exact: Option<F>,
}

// univariate helpers, coefficient index = power

fn trim_u<F: Field>(mut p: Vec<F>) -> Vec<F> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn div_rem_u<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    let b = trim_u(b.to_vec());
    let mut r = trim_u(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lc_inv = b.last().unwrap().inv();
    let mut q = vec![F::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().mul_ref(&lc_inv);
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub_ref(&c.mul_ref(bc));
        }
        q[shift] = c;
        r.pop();
        r = trim_u(r);
    }
    (q, r)
}

fn gcd_u<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut a = trim_u(a.to_vec());
    let mut b = trim_u(b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem_u(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn derivative_u<F: Field>(p: &[F]) -> Vec<F> {
    p.iter().enumerate().skip(1).map(|(k, c)| c.mul_ref(&F::from_i64(k as i64))).collect()
}

/// Square-free part of a univariate polynomial.
pub fn square_free<F: Field>(p: &[F]) -> Vec<F> {
    let p = trim_u(p.to_vec());
    if p.len() <= 2 {
        return p;
    }
    let g = gcd_u(&p, &derivative_u(&p));
    if g.len() <= 1 {
        return p;
    }
    div_rem_u(&p, &g).0
}

fn eval_u<F: Field>(p: &[F], x: &F) -> F {
    p.iter().rev().fold(F::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
}

fn eval_c(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// Complex roots of a univariate polynomial via the eigenvalues of its
/// companion matrix, polished by Newton steps.
pub fn roots_c(p: &[Complex64]) -> Vec<Complex64> {
    let mut p = p.to_vec();
    while p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    let d = p.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lc = p[d];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lc).collect();
    let mut roots = if d == 1 {
        vec![-monic[0]]
    } else {
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            m[(i, d - 1)] = -monic[i];
        }
        let t = Schur::new(m).unpack().1;
        (0..d).map(|i| t[(i, i)]).collect()
    };
    let dp: Vec<Complex64> = (1..=d).map(|k| monic[k] * k as f64).collect();
    for r in roots.iter_mut() {
        for _ in 0..8 {
            let f = eval_c(&monic, *r);
            let df = eval_c(&dp, *r);
            if df.norm() == 0.0 {
                break;
            }
            let step = f / df;
            *r -= step;
            if step.norm() < 1e-15 * r.norm().max(1.0) {
                break;
            }
        }
    }
    roots
}

/// Roots of a square-free univariate polynomial, certified exactly when rational.
pub fn roots_u<F: Field>(p: &[F]) -> Vec<Coord<F>> {
    let pc: Vec<Complex64> = p.iter().map(F::to_c64).collect();
    roots_c(&pc)
        .into_iter()
        .map(|r| {
            let exact = F::from_c64(r).filter(|e| F::EXACT && eval_u(p, e).is_zero());
            let approx = exact.as_ref().map(F::to_c64).unwrap_or(r);
            Coord { approx, exact }
        })
        .collect()
}

/// All solutions of a zero-dimensional lex Groebner basis in the variables `vars`
/// (ascending indices; the last one is eliminated first).
pub fn solve_zero_dim<F: Field>(gb: &[Poly<F>], vars: &[usize], budget: Budget) -> Result<Vec<Vec<Coord<F>>>> {
    if is_unit_ideal(gb) {
        return Ok(Vec::new());
    }
    let Some((&v, rest)) = vars.split_last() else {
        return Ok(vec![Vec::new()]);
    };
    let univ: Vec<&Poly<F>> = gb.iter().filter(|g| !g.is_zero() && g.vars_used().iter().all(|&u| u == v)).collect();
    let Some(q) = univ.iter().min_by_key(|g| g.degree_in(v)) else {
        return Err(Error::Inconclusive(format!("variable {v} is not constrained")));
    };
    let sf = square_free(&q.univariate_coeffs(v));
    let mut out = Vec::new();
    for root in roots_u(&sf) {
        let fibre = match &root.exact {
            Some(e) => {
                let sub: Vec<Poly<F>> = gb.iter().map(|g| g.substitute(v, e)).filter(|g| !g.is_zero()).collect();
                let gb2 = groebner(&sub, budget)?;
                solve_zero_dim(&gb2, rest, budget)?
            }
            None => {
                let sub: Vec<Poly<Complex64>> = gb
                    .iter()
                    .map(|g| g.map(F::to_c64).substitute(v, &root.approx))
                    .filter(|g| !g.is_zero())
                    .collect();
                solve_numeric(&sub, rest)
                    .into_iter()
                    .map(|s| s.into_iter().map(|approx| Coord { approx, exact: None }).collect())
                    .collect()
            }
        };
        for mut s in fibre {
            s.push(root.clone());
            out.push(s);
        }
    }
    Ok(out)
}

/// Numeric continuation of [`solve_zero_dim`] once a coordinate is irrational.
/// The polynomials come from a lex basis specialized at the later coordinates,
/// so each stage has univariate members in the last remaining variable.
fn solve_numeric(polys: &[Poly<Complex64>], vars: &[usize]) -> Vec<Vec<Complex64>> {
    let Some((&v, rest)) = vars.split_last() else {
        return vec![Vec::new()];
    };
    let univ: Vec<Vec<Complex64>> = polys
        .iter()
        .filter(|g| g.vars_used().iter().all(|&u| u == v))
        .map(|g| g.univariate_coeffs(v))
        .filter(|c| c.len() > 1)
        .collect();
    let Some(q) = univ.iter().min_by_key(|c| c.len()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut seen: Vec<Complex64> = Vec::new();
    for r in roots_c(q) {
        if seen.iter().any(|s| (s - r).norm() < 1e-7) {
            continue;
        }
        let scale = r.norm().max(1.0);
        if univ.iter().any(|c| eval_c(c, r).norm() > 1e-6 * scale.powi(c.len() as i32)) {
            continue;
        }
        seen.push(r);
        let sub: Vec<Poly<Complex64>> = polys.iter().map(|g| g.substitute(v, &r)).filter(|g| !g.is_zero()).collect();
        for mut s in solve_numeric(&sub, rest) {
            s.push(r);
            out.push(s);
        }
    }
    out
}

/// A root found by [`newton_multistart`], with the numerical rank of the Jacobian there.
#[derive(Clone, Debug)]
pub struct NumericRoot {
    pub point: Vec<Complex64>,
    pub residual: f64,
    pub jacobian_rank: usize,
}

fn eval_system(polys: &[Poly<Complex64>], x: &[Complex64]) -> DVector<Complex64> {
    DVector::from_iterator(polys.len(), polys.iter().map(|p| p.eval(x)))
}

/// Gauss-Newton from `starts` random points with coordinates of modulus at most
/// `radius`; converged points are deduplicated with tolerance `dedup`.
pub fn newton_multistart(
    polys: &[Poly<Complex64>],
    nvars: usize,
    starts: usize,
    radius: f64,
    dedup: f64,
    seed: u64,
) -> Vec<NumericRoot> {
    let jac: Vec<Vec<Poly<Complex64>>> = polys.iter().map(|p| (0..nvars).map(|v| p.derivative(v)).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<NumericRoot> = Vec::new();
    let scale = polys.iter().map(|p| p.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max)).fold(1.0, f64::max);
    for _ in 0..starts {
        let mut x: Vec<Complex64> = (0..nvars)
            .map(|_| {
                let r = radius * rng.gen::<f64>().sqrt();
                let t = rng.gen::<f64>() * std::f64::consts::TAU;
                Complex64::from_polar(r, t)
            })
            .collect();
        let mut res = f64::INFINITY;
        for _ in 0..60 {
            let f = eval_system(polys, &x);
            res = f.norm();
            if res < 1e-13 * scale || !res.is_finite() {
                break;
            }
            let j = DMatrix::from_fn(polys.len(), nvars, |i, k| jac[i][k].eval(&x));
            let Ok(step) = j.svd(true, true).solve(&f, 1e-12) else { break };
            for (xi, si) in x.iter_mut().zip(step.iter()) {
                *xi -= si;
            }
            if step.norm() < 1e-15 {
                let f = eval_system(polys, &x);
                res = f.norm();
                break;
            }
        }
        if !(res < 1e-9 * scale) {
            continue;
        }
        if found.iter().any(|r| r.point.iter().zip(&x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) < dedup) {
            continue;
        }
        let j = DMatrix::from_fn(polys.len(), nvars, |i, k| jac[i][k].eval(&x));
        let sv = j.singular_values();
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let rank = sv.iter().filter(|s| **s > 1e-7 * smax.max(1.0)).count();
        found.push(NumericRoot { point: x, residual: res, jacobian_rank: rank });
    }
    found.sort_by(|a, b| {
        let ka: Vec<(i64, i64)> = a.point.iter().map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64)).collect();
        let kb: Vec<(i64, i64)> = b.point.iter().map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64)).collect();
        ka.cmp(&kb)
    });
    found
}
