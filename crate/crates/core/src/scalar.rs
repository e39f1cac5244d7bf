//! Coefficient rings.
//!
//! Two scalar backends share one interface: exact Gaussian rationals and
//! double-precision complex numbers compared with an absolute tolerance.
//! Multivariate polynomials over either backend (see [`crate::poly`]) also
//! implement [`Ring`], which lets the series machinery run symbolically.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Absolute tolerance used by the floating backend for zero tests.
pub const FLOAT_TOL: f64 = 1e-10;

/// A commutative ring containing the rationals.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// The rational number `num/den` embedded in the ring.
    fn from_frac(num: i64, den: i64) -> Self;
    /// Multiplicative inverse when it exists in the ring.
    fn try_inv(&self) -> Option<Self>;
    /// `self^(p/q)` when it can be represented in the ring.
    fn try_root(&self, p: i64, q: u64) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_frac(n, 1)
    }

    fn is_one(&self) -> bool {
        self.sub_ref(&Self::one()).is_zero()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }

    fn pow_u(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Integer power, negative exponents through [`Ring::try_inv`].
    fn try_pow_i(&self, k: i64) -> Option<Self> {
        if k >= 0 {
            Some(self.pow_u(k as u32))
        } else {
            self.try_inv().map(|inv| inv.pow_u((-k) as u32))
        }
    }
}

/// A scalar field backend: the coefficient field of cocycles and structures.
pub trait Field: Ring + fmt::Display {
    /// `true` for the exact backend.
    const EXACT: bool;
    /// Name used on the command line.
    const NAME: &'static str;

    fn inv(&self) -> Self {
        self.try_inv().expect("division by zero")
    }
    fn div_ref(&self, other: &Self) -> Self {
        self.mul_ref(&other.inv())
    }
    fn to_c64(&self) -> Complex64;
    /// Best representative of a floating value (exact backend: rational
    /// reconstruction with bounded denominators, `None` if that fails).
    fn from_c64(c: Complex64) -> Option<Self>;
    fn from_gaussian(g: &GaussianRational) -> Self;
    /// The imaginary unit.
    fn i() -> Self;
}

/// Which scalar backend a computation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse(format!("unknown backend `{other}`"))),
        }
    }
}

/// A complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational { re: ratio(re_num, re_den), im: ratio(im_num, im_den) }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Canonical string pair `["p/q", "r/s"]` used in JSON files.
    pub fn to_string_pair(&self) -> [String; 2] {
        [rational_string(&self.re), rational_string(&self.im)]
    }

    pub fn from_string_pair(re: &str, im: &str) -> Result<Self> {
        Ok(GaussianRational { re: parse_rational(re)?, im: parse_rational(im)? })
    }

    /// Rational reconstruction of a float by continued fractions.
    pub fn approximate(c: Complex64) -> Option<Self> {
        Some(GaussianRational { re: rational_from_f64(c.re)?, im: rational_from_f64(c.im)? })
    }
}

pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let digits: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().map_err(|_| bad())? };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac_q = BigRational::new(digits, den);
        let base = BigRational::from_integer(int_part.abs());
        let q = base + frac_q;
        Ok(if neg { -q } else { q })
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

fn rational_from_f64(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x.abs() < 1e-12 {
        return Some(BigRational::zero());
    }
    // continued fraction with denominator bound
    const MAX_DEN: i128 = 1_000_000;
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DEN {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= 1e-9 * x.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    let approx = h1 as f64 / k1 as f64;
    if k1 != 0 && (approx - x).abs() <= 1e-9 * x.abs().max(1.0) {
        Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
    } else {
        None
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn exact_nth_root(q: &BigRational, n: u64) -> Option<BigRational> {
    if q.is_negative() {
        if n % 2 == 1 {
            return exact_nth_root(&-q.clone(), n).map(|r| -r);
        }
        return None;
    }
    let n32 = u32::try_from(n).ok()?;
    let num = q.numer().nth_root(n32);
    let den = q.denom().nth_root(n32);
    if num.pow(n32) == *q.numer() && den.pow(n32) == *q.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn one() -> Self {
        GaussianRational { re: BigRational::one(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational { re: &self.re * &o.re, im: BigRational::zero() };
        }
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg_ref(&self) -> Self {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn from_frac(num: i64, den: i64) -> Self {
        GaussianRational::real(ratio(num, den))
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussianRational::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }
    fn try_root(&self, p: i64, q: u64) -> Option<Self> {
        if q == 1 {
            return self.try_pow_i(p);
        }
        if self.is_one() {
            return Some(Self::one());
        }
        if !self.im.is_zero() {
            return None;
        }
        let r = exact_nth_root(&self.re, q)?;
        GaussianRational::real(r).try_pow_i(p)
    }
}

impl Field for GaussianRational {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        GaussianRational::approximate(c)
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.clone()
    }
    fn i() -> Self {
        GaussianRational::from_parts(0, 1, 1, 1)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", rational_string(&self.re)),
            (true, false) => write!(f, "{}i", rational_string(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", rational_string(&self.re), rational_string(&-self.im.clone()))
                } else {
                    write!(f, "{}+{}i", rational_string(&self.re), rational_string(&self.im))
                }
            }
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts `p/q`, `p/q+r/si`, `-i`, `2.5-0.5i` and similar forms.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if !s.ends_with('i') {
            return Ok(GaussianRational::real(parse_rational(&s)?));
        }
        let body = &s[..s.len() - 1];
        // split at the last sign that is not the leading character
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .last();
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.trim_start_matches('+'))?,
        };
        Ok(GaussianRational { re: parse_rational(re_str)?, im })
    }
}

impl PartialOrd for GaussianRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im)))
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.norm() <= FLOAT_TOL
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(self.inv())
        }
    }
    fn try_root(&self, p: i64, q: u64) -> Option<Self> {
        if self.norm() == 0.0 {
            return if p >= 0 { Some(<Self as Ring>::zero()) } else { None };
        }
        Some(self.powf(p as f64 / q as f64))
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        Some(c)
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.to_c64()
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
}

/// `a + b sqrt(d)` over a base field, for quadratic irrationalities that
/// exact computations cannot avoid (e.g. solving a quadratic in one parameter).
/// All elements taking part in one computation must share the same `d`.
#[derive(Clone, Debug)]
pub struct Quadratic<F> {
    pub a: F,
    pub b: F,
    pub d: Option<F>,
}

impl<F: Field> Quadratic<F> {
    pub fn base(a: F) -> Self {
        Quadratic { a, b: F::zero(), d: None }
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: F) -> Self {
        Quadratic { a: F::zero(), b: F::one(), d: Some(d) }
    }

    fn merged(&self, o: &Self) -> Option<F> {
        match (&self.d, &o.d) {
            (Some(x), Some(y)) => {
                assert!(x.approx_eq(y), "mixing different quadratic extensions");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        let root = self.d.as_ref().map(|d| d.to_c64().sqrt()).unwrap_or_default();
        self.a.to_c64() + self.b.to_c64() * root
    }
}

impl<F: Field> PartialEq for Quadratic<F> {
    fn eq(&self, o: &Self) -> bool {
        self.sub_ref(o).is_zero()
    }
}

impl<F: Field> Ring for Quadratic<F> {
    fn zero() -> Self {
        Self::base(F::zero())
    }
    fn one() -> Self {
        Self::base(F::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && (self.b.is_zero() || self.d.as_ref().is_some_and(|d| d.is_zero()))
    }
    fn add_ref(&self, o: &Self) -> Self {
        Quadratic { a: self.a.add_ref(&o.a), b: self.b.add_ref(&o.b), d: self.merged(o) }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Quadratic { a: self.a.sub_ref(&o.a), b: self.b.sub_ref(&o.b), d: self.merged(o) }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let d = self.merged(o);
        let bb = self.b.mul_ref(&o.b);
        let a = match &d {
            Some(d) => self.a.mul_ref(&o.a).add_ref(&bb.mul_ref(d)),
            None => self.a.mul_ref(&o.a),
        };
        Quadratic { a, b: self.a.mul_ref(&o.b).add_ref(&self.b.mul_ref(&o.a)), d }
    }
    fn neg_ref(&self) -> Self {
        Quadratic { a: self.a.neg_ref(), b: self.b.neg_ref(), d: self.d.clone() }
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Self::base(F::from_frac(num, den))
    }
    fn try_inv(&self) -> Option<Self> {
        let d = self.d.clone().unwrap_or_else(F::zero);
        let norm = self.a.mul_ref(&self.a).sub_ref(&self.b.mul_ref(&self.b).mul_ref(&d));
        let ni = norm.try_inv()?;
        Some(Quadratic { a: self.a.mul_ref(&ni), b: self.b.mul_ref(&ni).neg_ref(), d: self.d.clone() })
    }
    fn try_root(&self, p: i64, q: u64) -> Option<Self> {
        if q == 1 {
            return self.try_pow_i(p);
        }
        if self.b.is_zero() {
            return self.a.try_root(p, q).map(|a| Quadratic { a, b: F::zero(), d: self.d.clone() });
        }
        None
    }
}

/// Parse a scalar string into either backend.
pub fn parse_scalar<F: Field>(s: &str) -> Result<F> {
    let g: GaussianRational = s.parse()?;
    Ok(F::from_gaussian(&g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let g: GaussianRational = "1/2+3/4i".parse().unwrap();
        assert_eq!(g, GaussianRational::from_parts(1, 2, 3, 4));
        let g: GaussianRational = "-i".parse().unwrap();
        assert_eq!(g, GaussianRational::from_parts(0, 1, -1, 1));
        let g: GaussianRational = "-2.5".parse().unwrap();
        assert_eq!(g, GaussianRational::from_parts(-5, 2, 0, 1));
        let g: GaussianRational = "3-2i".parse().unwrap();
        assert_eq!(g, GaussianRational::from_parts(3, 1, -2, 1));
        assert!("1/0".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn inverse_and_roots() {
        let g = GaussianRational::from_parts(1, 1, 2, 1);
        assert!(g.mul_ref(&g.try_inv().unwrap()).is_one());
        let four = GaussianRational::from_i64(4);
        assert_eq!(four.try_root(-1, 2), Some(GaussianRational::from_frac(1, 2)));
        assert_eq!(GaussianRational::from_i64(2).try_root(1, 2), None);
        assert_eq!(GaussianRational::from_i64(-8).try_root(1, 3), Some(GaussianRational::from_i64(-2)));
    }

    #[test]
    fn quadratic_extension() {
        let r = Quadratic::sqrt_of(GaussianRational::from_i64(2));
        assert_eq!(r.mul_ref(&r), Quadratic::base(GaussianRational::from_i64(2)));
        let u = Quadratic::base(GaussianRational::one()).add_ref(&r);
        assert!(u.mul_ref(&u.try_inv().unwrap()).is_one());
        assert!((u.to_c64().re - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn reconstruct() {
        let g = GaussianRational::approximate(Complex64::new(0.375, -1.0 / 3.0)).unwrap();
        assert_eq!(g, GaussianRational::from_parts(3, 8, -1, 3));
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "-3/7", "2i", "1/2-1/3i"] {
            let g: GaussianRational = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
    }
}
