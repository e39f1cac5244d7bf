//! Named example objects, shipped as JSON files under `fixtures/` and rebuilt here.

use crate::cocycle::Cocycle;
use crate::error::Result;
use crate::flatpencil::{nodal_family, sl2_pencils, Pencil};
use crate::io::{canonical, ToJson};
use crate::projstruct::{catalog, ProjectiveStructure, MODEL_TAGS};
use crate::scalar::{Field, GaussianRational, Ring};
use crate::series::{BiSeries, Trunc};

/// The linear neighborhood `(1/x, y/x)`.
pub fn phi0<F: Field>(order: usize) -> Cocycle<F> {
    Cocycle::linear(order)
}

/// `(1/x, (y/x)(1 - y^2/x)^(-1/2))`, already in normal form.
pub fn special_covering<F: Field>(order: usize) -> Result<Cocycle<F>> {
    let t = Trunc::YDegree;
    let xi = BiSeries::<F>::monomial(-1, 0, F::one(), order, t);
    let y = BiSeries::<F>::y(order, t);
    let w = BiSeries::one(order, t).sub(&y.mul(&y).mul(&xi)).pow_rational(-1, 2)?;
    Ok(Cocycle::new(xi.clone(), y.mul(&xi).mul(&w)))
}

/// `a = y^5/x^3`, `b = 0`: no transverse fibration.
pub fn without_fibration<F: Field>(order: usize) -> Cocycle<F> {
    let a = BiSeries::monomial(-3, 5, F::one(), order, Trunc::YDegree);
    Cocycle::from_deviation(&a, &BiSeries::zero(order, Trunc::YDegree))
}

/// `a = 0`, `b = y^5/x^2 + y^5/x^4`: exactly one fibration.
pub fn one_fibration<F: Field>(order: usize) -> Cocycle<F> {
    let b = BiSeries::from_terms([(-2, 5, F::one()), (-4, 5, F::one())], order, Trunc::YDegree);
    Cocycle::from_deviation(&BiSeries::zero(order, Trunc::YDegree), &b)
}

/// `(1/x (1 + 2c y^2/x)/(1 + c y^2/x)^2, (y/x)/(1 + c y^2/x))`.
pub fn c_family<F: Field>(c: &F, order: usize) -> Result<Cocycle<F>> {
    let t = Trunc::YDegree;
    let u = BiSeries::from_terms([(0, 0, F::one()), (-1, 2, c.clone())], order, t);
    let num = BiSeries::from_terms([(-1, 0, F::one()), (-2, 2, c.add_ref(c))], order, t);
    let inv = u.reciprocal()?;
    let second = BiSeries::monomial(-1, 1, F::one(), order, t).mul(&inv);
    Ok(Cocycle::new(num.mul(&inv).mul(&inv), second))
}

/// Parameters used for the catalog fixtures.
pub fn catalog_params(tag: &str) -> Vec<&'static str> {
    match tag {
        "i.a" => vec!["x^2-3*x", "1+x^3"],
        "i.b" => vec!["x^2"],
        "ii.a" => vec!["1", "-1"],
        "ii.b" => vec!["2"],
        _ => vec![],
    }
}

pub fn catalog_structure<F: Field>(tag: &str, order: usize) -> Result<ProjectiveStructure<F>> {
    let params = catalog_params(tag).iter().map(|p| p.parse()).collect::<Result<Vec<_>>>()?;
    Ok(catalog(tag, &params, order)?.0)
}

/// `<dx, e^{xy} dy>` at the origin.
pub fn exy_pencil<F: Field>(order: usize) -> Result<Pencil<F>> {
    let e = |s: &str| s.parse();
    Pencil::from_exprs([e("1")?, e("0")?, e("0")?, e("exp(x*y)")?], (F::zero(), F::zero()), order)
}

pub const NODAL_GAMMAS: [i64; 3] = [1, 2, -1];

/// Every fixture as `(file name, canonical JSON)`, exact backend, order 8.
pub fn all() -> Result<Vec<(String, String)>> {
    type Q = GaussianRational;
    let n = 8;
    let mut out = vec![
        ("phi0.json".to_string(), canonical(&phi0::<Q>(n).to_json())),
        ("special_covering.json".to_string(), canonical(&special_covering::<Q>(n)?.to_json())),
        ("without_fibration.json".to_string(), canonical(&without_fibration::<Q>(n).to_json())),
        ("one_fibration.json".to_string(), canonical(&one_fibration::<Q>(n).to_json())),
        ("exy_pencil.json".to_string(), canonical(&exy_pencil::<Q>(n)?.to_json())),
    ];
    for tag in MODEL_TAGS {
        out.push((format!("structure_{tag}.json"), canonical(&catalog_structure::<Q>(tag, n)?.to_json())));
    }
    for g in NODAL_GAMMAS {
        let m = nodal_family(&Q::from_i64(g), n)?;
        out.push((format!("nodal_pencil_{g}.json"), canonical(&m.pencil.to_json())));
    }
    let (plus, minus) = sl2_pencils::<Q>(n)?;
    out.push(("sl2_pencil_plus.json".to_string(), canonical(&plus.to_json())));
    out.push(("sl2_pencil_minus.json".to_string(), canonical(&minus.to_json())));
    Ok(out)
}
