//! Browser bindings. Every function returns a JSON string so the page needs no
//! extra glue beyond the generated wasm-bindgen module.

use num_complex::Complex64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use plusone::flatpencil::{nodal_cubic, nodal_parameters};
use plusone::geoflow::{cross_ratio_field, integrate, Chart, ClosedForm, CrossRatioOptions, Grid, State, StructureField};
use plusone::projstruct::liouville;
use plusone::projstruct::ProjectiveStructure;
use plusone::scalar::{GaussianRational, Ring};

const CHUNK: usize = 25;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn closed_form(a: &str, b: &str, c: &str, d: &str) -> Result<ClosedForm, JsError> {
    ClosedForm::parse([a, b, c, d]).map_err(js_err)
}

/// One geodesic through `(x0, y0)` at angle `theta`, followed in one sense until
/// it leaves the box of half-width `extent`, the evaluator fails, or `max_steps` is reached.
fn trace(ev: &dyn StructureField, x0: f64, y0: f64, theta: f64, h: f64, max_steps: usize, extent: f64) -> Vec<[f64; 2]> {
    let (sin, cos) = theta.sin_cos();
    let start = if sin.abs() <= 2.0 * cos.abs() {
        State::new(x0, y0, sin / cos)
    } else {
        let mut s = State::new(x0, y0, 0.0);
        s.chart = Chart::Inverse;
        s.s = Complex64::new(cos / sin, 0.0);
        s
    };
    // the parameter is x in the slope chart and y in the inverse chart
    let lead = if start.chart == Chart::Slope { cos } else { sin };
    let h = h.copysign(lead);
    let mut pts = vec![[x0, y0]];
    let mut st = start;
    let mut done = 0;
    while done < max_steps {
        let Ok(tr) = integrate(ev, st, h, CHUNK) else { break };
        for s in tr.samples.iter().skip(1) {
            let (x, y) = (s.state.x.re, s.state.y.re);
            if !x.is_finite() || !y.is_finite() || (x - x0).abs() > extent || (y - y0).abs() > extent {
                return pts;
            }
            pts.push([x, y]);
        }
        st = *tr.last();
        done += CHUNK;
    }
    pts
}

/// Geodesics of `y'' = A + B y' + C y'^2 + D y'^3` leaving `(x0, y0)` in `rays` directions.
/// Returns `{"curves": [[[x, y], ...], ...]}`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn geodesic_fan(a: &str, b: &str, c: &str, d: &str, x0: f64, y0: f64, rays: usize, h: f64, extent: f64) -> Result<String, JsError> {
    let ev = closed_form(a, b, c, d)?;
    let max_steps = ((extent * 4.0) / h.abs()).ceil() as usize;
    let mut curves = Vec::with_capacity(rays);
    for k in 0..rays {
        let theta = std::f64::consts::TAU * k as f64 / rays as f64;
        curves.push(trace(&ev, x0, y0, theta, h, max_steps, extent));
    }
    Ok(json!({ "curves": curves }).to_string())
}

/// Cross-ratio of the geodesic foliations through four points of one geodesic,
/// sampled on a grid. `points` holds `x1, y1, ..., x4, y4`.
/// Returns `{"cells": [[x, y, re, im, valid], ...], "variance": v}`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn cross_ratio_grid(
    a: &str,
    b: &str,
    c: &str,
    d: &str,
    points: Vec<f64>,
    window: Vec<f64>,
    nx: usize,
    ny: usize,
    h: f64,
) -> Result<String, JsError> {
    if points.len() != 8 || window.len() != 4 {
        return Err(JsError::new("expected 8 point coordinates and a 4-number window"));
    }
    let ev = closed_form(a, b, c, d)?;
    let pts = [(points[0], points[1]), (points[2], points[3]), (points[4], points[5]), (points[6], points[7])];
    let grid = Grid { x: (window[0], window[1]), y: (window[2], window[3]), nx, ny };
    let opts = CrossRatioOptions { h, ..Default::default() };
    let f = cross_ratio_field(&ev, pts, &grid, &opts).map_err(js_err)?;
    let cells: Vec<Value> = f.cells.iter().map(|c| json!([c.x, c.y, c.value.re, c.value.im, c.valid])).collect();
    Ok(json!({ "cells": cells, "variance": f.variance() }).to_string())
}

/// Member `gamma` of the nodal family: its parameters, the cubic's value there,
/// closed-form coefficients, and whether the Liouville pair vanishes.
#[wasm_bindgen]
pub fn nodal_member(gamma: f64) -> Result<String, JsError> {
    let (alpha, beta) = nodal_parameters(&Complex64::new(gamma, 0.0));
    let cubic = nodal_cubic(&alpha, &beta).re;
    let (alpha, beta) = (alpha.re, beta.re);
    let exprs = [format!("({alpha})*exp(x)"), format!("{beta}"), "0".to_string(), "exp(-2*x)".to_string()];
    let linearizable = match GaussianRational::approximate(Complex64::new(gamma, 0.0)) {
        Some(g) => {
            let (a, b) = nodal_parameters(&g);
            let parsed = [
                format!("({a})*exp(x)").parse().map_err(js_err)?,
                format!("{b}").parse().map_err(js_err)?,
                "0".parse().map_err(js_err)?,
                "exp(-2*x)".parse().map_err(js_err)?,
            ];
            let pi = ProjectiveStructure::from_exprs(&parsed, (GaussianRational::zero(), GaussianRational::zero()), 6)
                .map_err(js_err)?;
            Value::Bool(liouville(&pi).is_zero())
        }
        None => Value::Null,
    };
    Ok(json!({
        "gamma": gamma,
        "alpha": alpha,
        "beta": beta,
        "cubic": cubic,
        "exprs": exprs,
        "linearizable": linearizable,
    })
    .to_string())
}
