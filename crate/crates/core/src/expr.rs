//! Closed-form expressions in `x, y`: numeric evaluation for the integrators
//! and exact Taylor expansion at a basepoint for the series side.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_string, Field, GaussianRational, Ring};
use crate::series::{compose_u, BiSeries, Trunc, USeries};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Rat(GaussianRational),
    Float(Complex64),
    X,
    Y,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Rat(GaussianRational::from_i64(n))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::Rat(GaussianRational::from_frac(n, d))
    }

    /// A field scalar, kept exact when the field is.
    pub fn scalar<F: Field>(c: &F) -> Expr {
        if F::EXACT {
            if let Some(g) = GaussianRational::approximate(c.to_c64()) {
                if F::from_gaussian(&g) == *c {
                    return Expr::Rat(g);
                }
            }
        }
        Expr::Float(c.to_c64())
    }

    pub fn exp(e: Expr) -> Expr {
        Expr::Exp(Box::new(e))
    }

    pub fn pow(self, k: i32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Expr::Rat(q) => q.is_zero(),
            Expr::Float(c) => *c == Complex64::new(0.0, 0.0),
            _ => false,
        }
    }

    /// Substitute expressions for `x` and `y`.
    pub fn subst(&self, x: &Expr, y: &Expr) -> Expr {
        let b = |e: &Expr| Box::new(e.subst(x, y));
        match self {
            Expr::X => x.clone(),
            Expr::Y => y.clone(),
            Expr::Rat(_) | Expr::Float(_) => self.clone(),
            Expr::Add(p, q) => Expr::Add(b(p), b(q)),
            Expr::Sub(p, q) => Expr::Sub(b(p), b(q)),
            Expr::Mul(p, q) => Expr::Mul(b(p), b(q)),
            Expr::Div(p, q) => Expr::Div(b(p), b(q)),
            Expr::Neg(p) => Expr::Neg(b(p)),
            Expr::Pow(p, k) => Expr::Pow(b(p), *k),
            Expr::Exp(p) => Expr::Exp(b(p)),
        }
    }

    /// The same expression with every rational constant replaced by its float value,
    /// so repeated evaluation avoids big-rational conversions.
    pub fn to_float(&self) -> Expr {
        let b = |e: &Expr| Box::new(e.to_float());
        match self {
            Expr::Rat(q) => Expr::Float(q.to_c64()),
            Expr::Float(_) | Expr::X | Expr::Y => self.clone(),
            Expr::Add(p, q) => Expr::Add(b(p), b(q)),
            Expr::Sub(p, q) => Expr::Sub(b(p), b(q)),
            Expr::Mul(p, q) => Expr::Mul(b(p), b(q)),
            Expr::Div(p, q) => Expr::Div(b(p), b(q)),
            Expr::Neg(p) => Expr::Neg(b(p)),
            Expr::Pow(p, k) => Expr::Pow(b(p), *k),
            Expr::Exp(p) => Expr::Exp(b(p)),
        }
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Result<Complex64> {
        let domain = || Error::EvaluatorDomain { x: x.re, y: y.re };
        let v = match self {
            Expr::Rat(q) => q.to_c64(),
            Expr::Float(c) => *c,
            Expr::X => x,
            Expr::Y => y,
            Expr::Add(a, b) => a.eval(x, y)? + b.eval(x, y)?,
            Expr::Sub(a, b) => a.eval(x, y)? - b.eval(x, y)?,
            Expr::Mul(a, b) => a.eval(x, y)? * b.eval(x, y)?,
            Expr::Div(a, b) => {
                let d = b.eval(x, y)?;
                if d.norm() < 1e-300 {
                    return Err(domain());
                }
                a.eval(x, y)? / d
            }
            Expr::Neg(a) => -a.eval(x, y)?,
            Expr::Pow(a, k) => {
                let base = a.eval(x, y)?;
                if *k < 0 && base.norm() < 1e-300 {
                    return Err(domain());
                }
                base.powi(*k)
            }
            Expr::Exp(a) => a.eval(x, y)?.exp(),
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(domain())
        }
    }

    /// Taylor series in local coordinates `(x - x0, y - y0)`, truncated by total degree.
    pub fn taylor<F: Field>(&self, base: &(F, F), order: usize) -> Result<BiSeries<F>> {
        let t = Trunc::Total;
        Ok(match self {
            Expr::Rat(q) => BiSeries::constant(F::from_gaussian(q), order, t),
            Expr::Float(c) => BiSeries::constant(
                F::from_c64(*c).filter(|_| !F::EXACT).ok_or_else(|| Error::NotExact(format!("float constant {c}")))?,
                order,
                t,
            ),
            Expr::X => BiSeries::x(order, t).add(&BiSeries::constant(base.0.clone(), order, t)),
            Expr::Y => BiSeries::y(order, t).add(&BiSeries::constant(base.1.clone(), order, t)),
            Expr::Add(a, b) => a.taylor(base, order)?.add(&b.taylor(base, order)?),
            Expr::Sub(a, b) => a.taylor(base, order)?.sub(&b.taylor(base, order)?),
            Expr::Mul(a, b) => a.taylor(base, order)?.mul(&b.taylor(base, order)?),
            Expr::Div(a, b) => {
                let d = b.taylor(base, order)?;
                if d.get(0, 0).is_zero() {
                    return Err(Error::NotInvertible);
                }
                a.taylor(base, order)?.mul(&d.reciprocal()?)
            }
            Expr::Neg(a) => a.taylor(base, order)?.neg(),
            Expr::Pow(a, k) => {
                let s = a.taylor(base, order)?;
                if *k >= 0 {
                    s.pow_u(*k as u32)
                } else {
                    if s.get(0, 0).is_zero() {
                        return Err(Error::NotInvertible);
                    }
                    s.reciprocal()?.pow_u(k.unsigned_abs())
                }
            }
            Expr::Exp(a) => {
                let s = a.taylor(base, order)?;
                let c0 = s.get(0, 0);
                let scale = if c0.is_zero() {
                    F::one()
                } else if F::EXACT {
                    return Err(Error::NotExact(format!("exp({c0}) at the basepoint")));
                } else {
                    F::from_c64(c0.to_c64().exp()).ok_or_else(|| Error::NotExact("exp".into()))?
                };
                let u = s.sub(&BiSeries::constant(c0, order, t));
                compose_u(&exp_series::<F>(order), &u)?.scale(&scale)
            }
        })
    }
}

/// `sum u^k / k!` to the given order.
pub fn exp_series<R: Ring>(order: usize) -> USeries<R> {
    let mut c = vec![R::one()];
    for k in 1..=order {
        let next = c[k - 1].mul_ref(&R::from_frac(1, k as i64));
        c.push(next);
    }
    USeries::new(c, order)
}

/// `log(1 + u) = sum (-1)^{k+1} u^k / k`.
pub fn log1p_series<R: Ring>(order: usize) -> USeries<R> {
    let c = (0..=order).map(|k| if k == 0 { R::zero() } else { R::from_frac(if k % 2 == 1 { 1 } else { -1 }, k as i64) }).collect();
    USeries::new(c, order)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $v:ident) => {
        impl std::ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::$v(Box::new(self), Box::new(o))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Rat(q) if !q.re.is_zero() && !q.im.is_zero() => 1,
        Expr::Rat(q) if q.re.is_negative() || q.im.is_negative() => 1,
        Expr::Rat(q) if !q.im.is_zero() || !q.re.denom().is_one() => 2,
        Expr::Float(c) if c.im != 0.0 || c.re < 0.0 => 1,
        _ => 5,
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rat(q) => {
                let re = rational_string(&q.re);
                let im = rational_string(&q.im);
                match (q.re.is_zero(), q.im.is_zero()) {
                    (_, true) => write!(f, "{re}"),
                    (true, false) => write!(f, "{im}*i"),
                    (false, false) if im.starts_with('-') => write!(f, "{re}{im}*i"),
                    (false, false) => write!(f, "{re}+{im}*i"),
                }
            }
            Expr::Float(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else {
                    write!(f, "{}+{}*i", c.re, c.im)
                }
            }
            Expr::X => write!(f, "x"),
            Expr::Y => write!(f, "y"),
            Expr::Add(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "+")?;
                wrap(f, b, 2)
            }
            Expr::Sub(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "-")?;
                wrap(f, b, 2)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "*")?;
                wrap(f, b, 3)
            }
            Expr::Div(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "/")?;
                wrap(f, b, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 3)
            }
            Expr::Pow(a, k) => {
                wrap(f, a, 5)?;
                if *k < 0 {
                    write!(f, "^({k})")
                } else {
                    write!(f, "^{k}")
                }
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(cs[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected `{c}` in expression")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}`")))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        loop {
            if self.eat('+') {
                e = e + self.product()?;
            } else if self.eat('-') {
                e = e - self.product()?;
            } else {
                return Ok(e);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = e * self.unary()?;
            } else if self.eat('/') {
                e = e / self.unary()?;
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let k: i32 = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => n.parse().map_err(|_| Error::Parse(format!("bad exponent `{n}`")))?,
            _ => return Err(Error::Parse("expected integer exponent".into())),
        };
        self.pos += 1;
        if paren {
            self.expect(')')?;
        }
        Ok(base.pow(if neg { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Expr::Rat(n.parse()?)),
            Tok::Ident(id) => match id.as_str() {
                "x" => Ok(Expr::X),
                "y" => Ok(Expr::Y),
                "i" => Ok(Expr::Rat(GaussianRational::i())),
                "exp" => {
                    self.expect('(')?;
                    let e = self.sum()?;
                    self.expect(')')?;
                    Ok(Expr::exp(e))
                }
                other => Err(Error::Parse(format!("unknown identifier `{other}`"))),
            },
            Tok::Op('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected `{c}`"))),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Expr> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(e)
    }
}
