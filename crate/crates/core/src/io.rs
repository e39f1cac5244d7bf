//! Canonical JSON for series, cocycles, group elements, structures and pencils.
//! Keys are sorted; exact scalars are `p/q` strings and floats are numbers in
//! shortest round-trip form, so equal objects serialize to identical bytes.
//!
//! Series: `{"N", "trunc", "terms": [[m, n, re, im], ...]}` sorted by `(n, m)`.
//! Cocycle: `{"N", "a", "b", "form"}` holding the deviation from `(1/x, y/x)`.
//! Structure: `{"A", "B", "C", "D", "basepoint", "evaluator"}`.
//! Pencil: `{"omega0": {"P", "Q"}, "omegaInf": {"P", "Q"}, "basepoint", "closed"}`.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::flatpencil::{Form, Pencil};
use crate::fibration::FibrationReport;
use crate::projstruct::{model, Evaluator, LiouvillePair, ProjectiveStructure};
use crate::scalar::{parse_scalar, Field, GaussianRational};
use crate::series::{BiSeries, Trunc};
use crate::symmetry::GroupElement;

pub const DEFAULT_ORDER: usize = 8;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn float_string(z: Complex64) -> String {
    match (z.re == 0.0 && z.im != 0.0, z.im == 0.0) {
        (_, true) => format!("{}", z.re),
        (true, _) => format!("{}i", z.im),
        _ => format!("{}{:+}i", z.re, z.im),
    }
}

/// A scalar as one string: `p/q+r/si` (exact) or `1.5-0.25i` (float).
pub fn scalar_string<F: Field>(c: &F) -> String {
    if F::EXACT {
        c.to_string()
    } else {
        float_string(c.to_c64())
    }
}

/// A scalar as a JSON value: a string when exact or complex, a number when a real float.
pub fn scalar_json<F: Field>(c: &F) -> Value {
    let z = c.to_c64();
    if !F::EXACT && z.im == 0.0 {
        Value::from(z.re)
    } else {
        Value::String(scalar_string(c))
    }
}

pub fn scalar_from_json<F: Field>(v: &Value) -> Result<F> {
    match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) => parse_scalar(&n.to_string()),
        _ => Err(bad(format!("expected a scalar, got {v}"))),
    }
}

fn part_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(bad(format!("expected a real number, got {v}"))),
    }
}

/// Real and imaginary parts of a scalar as two JSON values.
fn parts_json<F: Field>(c: &F) -> [Value; 2] {
    if F::EXACT {
        let g: GaussianRational = c.to_string().parse().expect("exact scalars print as gaussian rationals");
        let [re, im] = g.to_string_pair();
        [Value::String(re), Value::String(im)]
    } else {
        let z = c.to_c64();
        [Value::from(z.re), Value::from(z.im)]
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing key `{key}`")))
}

fn usize_field(v: &Value, key: &str) -> Result<Option<usize>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => x.as_u64().map(|n| Some(n as usize)).ok_or_else(|| bad(format!("`{key}` must be a non-negative integer"))),
    }
}

fn pair_from_json<F: Field>(v: &Value) -> Result<(F, F)> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([x, y]) => Ok((scalar_from_json(x)?, scalar_from_json(y)?)),
        _ => Err(bad("expected a pair of scalars")),
    }
}

fn pair_to_json<F: Field>(p: &(F, F)) -> Value {
    json!([scalar_json(&p.0), scalar_json(&p.1)])
}

fn basepoint<F: Field>(v: &Value) -> Result<(F, F)> {
    match v.get("basepoint") {
        Some(b) => pair_from_json(b),
        None => Ok((F::zero(), F::zero())),
    }
}

fn exprs_from_json<const N: usize>(v: &Value) -> Result<[Expr; N]> {
    let arr = v.as_array().ok_or_else(|| bad("expected an array of expressions"))?;
    let parsed: Vec<Expr> = arr
        .iter()
        .map(|e| match e {
            Value::String(s) => s.parse(),
            Value::Number(n) => n.to_string().parse(),
            _ => Err(bad("expressions are strings")),
        })
        .collect::<Result<_>>()?;
    parsed.try_into().map_err(|_| bad(format!("expected {N} expressions")))
}

fn exprs_to_json(e: &[Expr]) -> Value {
    Value::Array(e.iter().map(|x| Value::String(x.to_string())).collect())
}

pub trait ToJson {
    fn to_json(&self) -> Value;
}

pub trait FromJson: Sized {
    fn from_json(v: &Value) -> Result<Self>;
}

/// Pretty-printed, key-sorted text with a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(e.to_string()))
}

fn terms_json<F: Field>(s: &BiSeries<F>) -> Value {
    let mut terms: Vec<(usize, i32, &F)> = s.terms().map(|(m, n, c)| (n, m, c)).collect();
    terms.sort_by_key(|t| (t.0, t.1));
    Value::Array(
        terms
            .into_iter()
            .map(|(n, m, c)| {
                let [re, im] = parts_json(c);
                json!([m, n, re, im])
            })
            .collect(),
    )
}

fn terms_from_json<F: Field>(v: &Value, order: usize, trunc: Trunc) -> Result<BiSeries<F>> {
    let mut s = BiSeries::zero(order, trunc);
    for t in v.as_array().ok_or_else(|| bad("`terms` must be an array"))? {
        let t = t.as_array().ok_or_else(|| bad("terms are [m, n, re, im]"))?;
        if t.len() != 3 && t.len() != 4 {
            return Err(bad("terms are [m, n, re, im]"));
        }
        let m = t[0].as_i64().ok_or_else(|| bad("x exponent must be an integer"))?;
        let n = t[1].as_u64().ok_or_else(|| bad("y exponent must be a non-negative integer"))?;
        let c: F = if t.len() == 3 {
            scalar_from_json(&t[2])?
        } else {
            F::from_gaussian(&GaussianRational::from_string_pair(&part_string(&t[2])?, &part_string(&t[3])?)?)
        };
        s.add_term(m as i32, n as usize, c);
    }
    Ok(s)
}

impl<F: Field> ToJson for BiSeries<F> {
    fn to_json(&self) -> Value {
        let trunc = match self.trunc() {
            Trunc::YDegree => "y",
            Trunc::Total => "total",
        };
        json!({ "N": self.order(), "trunc": trunc, "terms": terms_json(self) })
    }
}

fn trunc_of(v: &Value, default: Trunc) -> Result<Trunc> {
    match v.get("trunc").and_then(Value::as_str) {
        None => Ok(default),
        Some("y") => Ok(Trunc::YDegree),
        Some("total") => Ok(Trunc::Total),
        Some(t) => Err(bad(format!("unknown truncation `{t}`"))),
    }
}

fn series_from_json<F: Field>(v: &Value, default: Trunc) -> Result<BiSeries<F>> {
    let order = usize_field(v, "N")?.ok_or_else(|| bad("series needs `N`"))?;
    terms_from_json(field(v, "terms")?, order, trunc_of(v, default)?)
}

impl<F: Field> FromJson for BiSeries<F> {
    fn from_json(v: &Value) -> Result<Self> {
        series_from_json(v, Trunc::YDegree)
    }
}

impl<F: Field> ToJson for Cocycle<F> {
    fn to_json(&self) -> Value {
        json!({
            "N": self.order(),
            "form": self.form().as_str(),
            "a": terms_json(&self.a()),
            "b": terms_json(&self.b()),
        })
    }
}

impl<F: Field> FromJson for Cocycle<F> {
    fn from_json(v: &Value) -> Result<Self> {
        let order = usize_field(v, "N")?.ok_or_else(|| bad("cocycle needs `N`"))?;
        let a = terms_from_json(field(v, "a")?, order, Trunc::YDegree)?;
        let b = terms_from_json(field(v, "b")?, order, Trunc::YDegree)?;
        Ok(Cocycle::from_deviation(&a, &b))
    }
}

impl<F: Field> ToJson for GroupElement<F> {
    fn to_json(&self) -> Value {
        json!({
            "alpha": scalar_string(&self.alpha),
            "beta": scalar_string(&self.beta),
            "gamma": scalar_string(&self.gamma),
            "theta": scalar_string(&self.theta),
        })
    }
}

impl<F: Field> FromJson for GroupElement<F> {
    /// An object with `alpha..theta` (missing entries default to the identity)
    /// or an array of four scalars.
    fn from_json(v: &Value) -> Result<Self> {
        if let Some([a, b, c, t]) = v.as_array().map(|a| a.as_slice()) {
            return GroupElement::new(scalar_from_json(a)?, scalar_from_json(b)?, scalar_from_json(c)?, scalar_from_json(t)?);
        }
        let s = |k: &str| -> Result<F> {
            match v.get(k) {
                Some(x) => scalar_from_json(x),
                None if k == "theta" => Ok(F::one()),
                None => Ok(F::zero()),
            }
        };
        GroupElement::new(s("alpha")?, s("beta")?, s("gamma")?, s("theta")?)
    }
}

impl<F: Field> ToJson for ProjectiveStructure<F> {
    fn to_json(&self) -> Value {
        let evaluator = match &self.evaluator {
            Some(e) => json!({ "id": e.id, "params": e.params }),
            None => Value::Null,
        };
        json!({
            "basepoint": pair_to_json(&self.basepoint),
            "A": self.a.to_json(),
            "B": self.b.to_json(),
            "C": self.c.to_json(),
            "D": self.d.to_json(),
            "evaluator": evaluator,
        })
    }
}

fn string_list(v: Option<&Value>) -> Result<Vec<String>> {
    match v {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(a)) => a
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(bad("params are strings")),
            })
            .collect(),
        Some(_) => Err(bad("`params` must be an array")),
    }
}

/// A catalog model with the given parameters, expanded to `order`.
pub fn model_structure<F: Field>(tag: &str, params: &[String], base: Option<(F, F)>, order: usize) -> Result<ProjectiveStructure<F>> {
    let exprs: Vec<Expr> = params.iter().map(|p| p.parse()).collect::<Result<_>>()?;
    let mdl = model(tag, &exprs)?;
    let zero = (F::zero(), F::zero());
    let base = match base {
        Some(b) => b,
        None => (mdl.basepoint.0.taylor::<F>(&zero, 0)?.get(0, 0), mdl.basepoint.1.taylor::<F>(&zero, 0)?.get(0, 0)),
    };
    let mut pi = ProjectiveStructure::from_exprs(&mdl.coeffs, base, order)?;
    pi.evaluator = Some(Evaluator { id: tag.into(), params: exprs.iter().map(|p| p.to_string()).collect() });
    Ok(pi)
}

impl<F: Field> FromJson for ProjectiveStructure<F> {
    /// Series coefficients (`A`..`D`), closed forms (`exprs`), or a catalog
    /// `model` with `params`; the latter two expand to `N` (default 8).
    fn from_json(v: &Value) -> Result<Self> {
        let order = usize_field(v, "N")?.unwrap_or(DEFAULT_ORDER);
        if let Some(tag) = v.get("model").and_then(Value::as_str) {
            let base = match v.get("basepoint") {
                Some(b) => Some(pair_from_json(b)?),
                None => None,
            };
            return model_structure(tag, &string_list(v.get("params"))?, base, order);
        }
        let base = basepoint(v)?;
        if let Some(e) = v.get("exprs") {
            return ProjectiveStructure::from_exprs(&exprs_from_json::<4>(e)?, base, order);
        }
        let s = |k: &str| -> Result<BiSeries<F>> { series_from_json(field(v, k)?, Trunc::Total) };
        let mut pi = ProjectiveStructure::new([s("A")?, s("B")?, s("C")?, s("D")?], base);
        if let Some(ev) = v.get("evaluator").filter(|e| !e.is_null()) {
            let id = field(ev, "id")?.as_str().ok_or_else(|| bad("evaluator id is a string"))?.to_string();
            pi.evaluator = Some(Evaluator { id, params: string_list(ev.get("params"))? });
        }
        Ok(pi)
    }
}

fn form_to_json<F: Field>(f: &Form<F>) -> Value {
    json!({ "P": f.p.to_json(), "Q": f.q.to_json() })
}

fn form_from_json<F: Field>(v: &Value) -> Result<Form<F>> {
    Ok(Form::new(series_from_json(field(v, "P")?, Trunc::Total)?, series_from_json(field(v, "Q")?, Trunc::Total)?))
}

impl<F: Field> ToJson for Pencil<F> {
    fn to_json(&self) -> Value {
        json!({
            "basepoint": pair_to_json(&self.basepoint),
            "omega0": form_to_json(&self.omega0),
            "omegaInf": form_to_json(&self.omega_inf),
            "closed": self.closed.as_ref().map(|c| exprs_to_json(c)).unwrap_or(Value::Null),
        })
    }
}

impl<F: Field> FromJson for Pencil<F> {
    /// Series forms (`omega0`, `omegaInf`) or closed forms `pqrs` of
    /// `<P dx + Q dy, R dx + S dy>` expanded to `N` (default 8).
    fn from_json(v: &Value) -> Result<Self> {
        let base = basepoint(v)?;
        let closed = match v.get("pqrs").or_else(|| v.get("closed")).filter(|c| !c.is_null()) {
            Some(c) => Some(exprs_from_json::<4>(c)?),
            None => None,
        };
        if v.get("omega0").is_none() {
            let pqrs = closed.ok_or_else(|| bad("pencil needs `omega0`/`omegaInf` or `pqrs`"))?;
            let order = usize_field(v, "N")?.unwrap_or(DEFAULT_ORDER);
            return Pencil::from_exprs(pqrs, base, order);
        }
        let mut p = Pencil::new(form_from_json(field(v, "omega0")?)?, form_from_json(field(v, "omegaInf")?)?, base)?;
        p.closed = closed;
        Ok(p)
    }
}

/// Parts below `1e-9` are solver noise around an exact zero.
fn chop(z: Complex64) -> Complex64 {
    let f = |v: f64| if v.abs() < 1e-9 { 0.0 } else { v };
    Complex64::new(f(z.re), f(z.im))
}

impl<F: Field> ToJson for FibrationReport<F> {
    fn to_json(&self) -> Value {
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| match &w.exact {
                Some(t) if F::EXACT => Value::Array(t.iter().map(|c| Value::String(scalar_string(c))).collect()),
                Some(t) => Value::Array(t.iter().map(|c| scalar_json(&chop(c.to_c64()))).collect()),
                None => Value::Array(w.approx.iter().map(|c| scalar_json(&chop(*c))).collect()),
            })
            .collect();
        json!({
            "classification": self.classification.as_str(),
            "witnesses": witnesses,
            "residual_count": self.residuals.len(),
        })
    }
}

impl<F: Field> ToJson for LiouvillePair<F> {
    fn to_json(&self) -> Value {
        json!({ "L1": self.l1.to_json(), "L2": self.l2.to_json(), "linearizable": self.is_zero() })
    }
}

/// A JSON object from key/value pairs (keys end up sorted).
pub fn object(pairs: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(pairs.into_iter().collect::<Map<String, Value>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational as Q, Ring};

    #[test]
    fn series_round_trip_is_byte_stable() {
        let s: BiSeries<Q> = BiSeries::from_terms([(-2, 3, Q::from_frac(1, 2)), (-3, 5, Q::from_parts(3, 8, -1, 3))], 8, Trunc::YDegree);
        let text = canonical(&s.to_json());
        let back = BiSeries::<Q>::from_json(&parse_json(&text).unwrap()).unwrap();
        assert_eq!(back, s);
        assert_eq!(canonical(&back.to_json()), text);
        assert!(text.contains("\"-1/3\""));
    }

    #[test]
    fn floats_round_trip_exactly() {
        for x in [0.1, -1.0 / 3.0, 1e-17, 6.02e23, std::f64::consts::PI] {
            let z = Complex64::new(x, -x / 7.0);
            let back: Complex64 = parse_scalar(&scalar_string(&z)).unwrap();
            assert_eq!(back, z);
        }
    }

    #[test]
    fn structures_from_models_and_exprs() {
        let v = parse_json(r#"{"model": "iv"}"#).unwrap();
        let pi = ProjectiveStructure::<Q>::from_json(&v).unwrap();
        assert!(pi.is_flat());
        let v = parse_json(r#"{"exprs": ["0", "-y", "-x", "0"], "N": 5}"#).unwrap();
        let pi = ProjectiveStructure::<Q>::from_json(&v).unwrap();
        assert_eq!(pi.order(), 5);
        let back = ProjectiveStructure::<Q>::from_json(&pi.to_json()).unwrap();
        assert_eq!(back, pi);
        assert_eq!(back.evaluator, pi.evaluator);
    }

    #[test]
    fn pencils_and_cocycles_round_trip() {
        let v = parse_json(r#"{"pqrs": ["1", "0", "0", "exp(x*y)"], "basepoint": ["0", "0"]}"#).unwrap();
        let p = Pencil::<Q>::from_json(&v).unwrap();
        let back = Pencil::<Q>::from_json(&p.to_json()).unwrap();
        assert_eq!(back.omega_inf.q, p.omega_inf.q);
        assert_eq!(back.closed, p.closed);
        let phi = Cocycle::<Q>::linear(6);
        assert_eq!(Cocycle::<Q>::from_json(&phi.to_json()).unwrap(), phi);
        let g = GroupElement::new(Q::one(), Q::zero(), Q::from_frac(-2, 3), Q::i()).unwrap();
        assert_eq!(GroupElement::<Q>::from_json(&g.to_json()).unwrap(), g);
    }
}
