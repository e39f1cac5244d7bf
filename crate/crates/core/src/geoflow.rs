//! Numeric geodesics of `y'' = A + B y' + C y'^2 + D y'^3`: fixed-step RK4 on the
//! projectivized tangent bundle with a two-chart slope atlas, two-point shooting,
//! and grids of cross-ratios of the four geodesic foliations through fixed points.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::projstruct::ProjectiveStructure;
use crate::scalar::Field;
use crate::series::BiSeries;

type C = Complex64;

pub const DEFAULT_STEP: f64 = 1e-3;
const MAX_SHOOT_ITER: usize = 50;

/// Numeric values of the four structure coefficients.
pub trait StructureField: Send + Sync {
    fn coeffs(&self, x: C, y: C) -> Result<[C; 4]>;
}

/// Coefficients given by closed-form expressions.
pub struct ClosedForm {
    exprs: [Expr; 4],
}

impl ClosedForm {
    pub fn new(exprs: &[Expr; 4]) -> Self {
        ClosedForm { exprs: [exprs[0].to_float(), exprs[1].to_float(), exprs[2].to_float(), exprs[3].to_float()] }
    }

    pub fn parse(src: [&str; 4]) -> Result<Self> {
        let e = |s: &str| s.parse::<Expr>();
        Ok(Self::new(&[e(src[0])?, e(src[1])?, e(src[2])?, e(src[3])?]))
    }
}

impl StructureField for ClosedForm {
    fn coeffs(&self, x: C, y: C) -> Result<[C; 4]> {
        Ok([self.exprs[0].eval(x, y)?, self.exprs[1].eval(x, y)?, self.exprs[2].eval(x, y)?, self.exprs[3].eval(x, y)?])
    }
}

/// Truncated series summed inside a declared radius around the basepoint.
/// There is no error bound: the radius is the caller's judgement.
pub struct SeriesField {
    coeffs: [BiSeries<C>; 4],
    base: (C, C),
    radius: f64,
}

impl SeriesField {
    pub fn new<F: Field>(pi: &ProjectiveStructure<F>, radius: f64) -> Self {
        let to_c = |s: &BiSeries<F>| s.map(|c| c.to_c64());
        SeriesField {
            coeffs: [to_c(&pi.a), to_c(&pi.b), to_c(&pi.c), to_c(&pi.d)],
            base: (pi.basepoint.0.to_c64(), pi.basepoint.1.to_c64()),
            radius,
        }
    }
}

impl StructureField for SeriesField {
    fn coeffs(&self, x: C, y: C) -> Result<[C; 4]> {
        let (u, v) = (x - self.base.0, y - self.base.1);
        let domain = || Error::EvaluatorDomain { x: x.re, y: y.re };
        if u.norm().max(v.norm()) > self.radius {
            return Err(domain());
        }
        let mut out = [C::default(); 4];
        for (o, s) in out.iter_mut().zip(&self.coeffs) {
            *o = s.eval(&u, &v).ok_or_else(domain)?;
        }
        Ok(out)
    }
}

/// The closed form attached to a structure when it has one, its series otherwise.
pub fn field_of<F: Field>(pi: &ProjectiveStructure<F>, radius: f64) -> Result<Box<dyn StructureField>> {
    match &pi.evaluator {
        Some(ev) => Ok(Box::new(ClosedForm::new(&ev.exprs()?))),
        None => Ok(Box::new(SeriesField::new(pi, radius))),
    }
}

/// Which affine chart of the slope line a state uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `z = dy/dx`, flow of `d/dx + z d/dy + (A + Bz + Cz^2 + Dz^3) d/dz`.
    Slope,
    /// `w = dx/dy`, flow of `w d/dx + d/dy - (D + Cw + Bw^2 + Aw^3) d/dw`.
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State {
    pub x: C,
    pub y: C,
    /// `z` in the slope chart, `w = 1/z` in the inverse chart.
    pub s: C,
    pub chart: Chart,
}

impl State {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        State { x: C::new(x, 0.0), y: C::new(y, 0.0), s: C::new(z, 0.0), chart: Chart::Slope }
    }

    /// `dy/dx`, or `None` for a vertical direction.
    pub fn slope(&self) -> Option<C> {
        match self.chart {
            Chart::Slope => Some(self.s),
            Chart::Inverse if self.s.norm() == 0.0 => None,
            Chart::Inverse => Some(self.s.inv()),
        }
    }

    /// A tangent vector `(dx, dy)` of the direction.
    pub fn direction(&self) -> (C, C) {
        match self.chart {
            Chart::Slope => (C::new(1.0, 0.0), self.s),
            Chart::Inverse => (self.s, C::new(1.0, 0.0)),
        }
    }

    fn offset(&self, k: &[C; 3], h: C) -> State {
        State { x: self.x + k[0] * h, y: self.y + k[1] * h, s: self.s + k[2] * h, chart: self.chart }
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    /// Accumulated step length along the curve parameter.
    pub t: f64,
    pub state: State,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub h: f64,
    pub method: &'static str,
}

impl Trajectory {
    pub fn last(&self) -> &State {
        &self.samples.last().expect("trajectory has its initial sample").state
    }
}

fn rhs(ev: &dyn StructureField, st: &State) -> Result<[C; 3]> {
    let [a, b, c, d] = ev.coeffs(st.x, st.y)?;
    let s = st.s;
    Ok(match st.chart {
        Chart::Slope => [C::new(1.0, 0.0), s, a + s * (b + s * (c + s * d))],
        Chart::Inverse => [s, C::new(1.0, 0.0), -(d + s * (c + s * (b + s * a)))],
    })
}

fn rk4_step(ev: &dyn StructureField, st: &State, h: C) -> Result<State> {
    let k1 = rhs(ev, st)?;
    let k2 = rhs(ev, &st.offset(&k1, h * 0.5))?;
    let k3 = rhs(ev, &st.offset(&k2, h * 0.5))?;
    let k4 = rhs(ev, &st.offset(&k3, h))?;
    let mut k = [C::default(); 3];
    for i in 0..3 {
        k[i] = (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) / 6.0;
    }
    let next = st.offset(&k, h);
    if [next.x, next.y, next.s].iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(next)
    } else {
        Err(Error::EvaluatorDomain { x: st.x.re, y: st.y.re })
    }
}

/// Re-expresses a state in the other chart. Returns the factor by which the flow
/// parameter rescales (`v = z * v~`), so callers can keep moving the same way.
fn swap(st: &State) -> (State, C) {
    let chart = match st.chart {
        Chart::Slope => Chart::Inverse,
        Chart::Inverse => Chart::Slope,
    };
    (State { s: st.s.inv(), chart, ..*st }, st.s)
}

/// RK4 with a fixed step `h` (negative to go backwards). The slope chart is swapped
/// whenever `|z| > 2` in the current chart, so vertical directions pass through smoothly.
pub fn integrate(ev: &dyn StructureField, start: State, h: f64, steps: usize) -> Result<Trajectory> {
    let mut samples = Vec::with_capacity(steps + 1);
    let mut st = start;
    let mut step = C::new(h, 0.0);
    let mut t = 0.0;
    samples.push(Sample { t, state: st });
    for _ in 0..steps {
        if st.s.norm() > 2.0 {
            let (next, factor) = swap(&st);
            st = next;
            step *= factor / factor.norm();
        }
        st = rk4_step(ev, &st, step)?;
        t += h.abs();
        samples.push(Sample { t, state: st });
    }
    Ok(Trajectory { samples, h, method: "rk4" })
}

/// Fixed-chart integration over a given parameter increment in `n` equal steps.
fn march(ev: &dyn StructureField, start: State, total: C, n: usize) -> Result<State> {
    let h = total / n as f64;
    let mut st = start;
    for _ in 0..n {
        st = rk4_step(ev, &st, h)?;
    }
    Ok(st)
}

#[derive(Clone, Debug)]
pub struct ShootingResult {
    /// Initial slope in `chart` (`dy/dx` for the slope chart, `dx/dy` otherwise).
    pub slope: C,
    pub chart: Chart,
    pub error: f64,
    pub iterations: usize,
}

impl ShootingResult {
    /// The initial `dy/dx`, `None` if vertical.
    pub fn z0(&self) -> Option<C> {
        State { x: C::default(), y: C::default(), s: self.slope, chart: self.chart }.slope()
    }

    pub fn direction(&self) -> (C, C) {
        State { x: C::default(), y: C::default(), s: self.slope, chart: self.chart }.direction()
    }
}

/// Geodesic from `p` to `q` by the secant method on the initial slope, with default step.
pub fn shoot(ev: &dyn StructureField, p: (f64, f64), q: (f64, f64), tol: f64) -> Result<ShootingResult> {
    shoot_with(ev, p, q, tol, DEFAULT_STEP)
}

/// As [`shoot`] with an explicit step. The marching variable is whichever of `x`, `y`
/// changes more between the endpoints; the mismatch is in the other coordinate.
pub fn shoot_with(ev: &dyn StructureField, p: (f64, f64), q: (f64, f64), tol: f64, h: f64) -> Result<ShootingResult> {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::BadParams { tag: "shoot".into(), reason: "endpoints coincide".into() });
    }
    let (chart, run, rise, target) =
        if dx.abs() >= dy.abs() { (Chart::Slope, dx, dy, q.1) } else { (Chart::Inverse, dy, dx, q.0) };
    let n = ((run.abs() / h).ceil() as usize).max(1);
    let total = C::new(run, 0.0);
    let mismatch = |s: C| -> Result<C> {
        let start = State { x: C::new(p.0, 0.0), y: C::new(p.1, 0.0), s, chart };
        let end = march(ev, start, total, n)?;
        Ok(match chart {
            Chart::Slope => end.y - target,
            Chart::Inverse => end.x - target,
        })
    };
    let mut s0 = C::new(rise / run, 0.0);
    let mut f0 = mismatch(s0)?;
    let mut s1 = s0 + C::new(1e-3 * (1.0 + s0.norm()), 0.0);
    let mut f1 = mismatch(s1)?;
    if f0.norm() < tol {
        return Ok(ShootingResult { slope: s0, chart, error: f0.norm(), iterations: 0 });
    }
    for it in 1..=MAX_SHOOT_ITER {
        if f1.norm() < tol {
            return Ok(ShootingResult { slope: s1, chart, error: f1.norm(), iterations: it });
        }
        let df = f1 - f0;
        if df.norm() == 0.0 {
            break;
        }
        let s2 = s1 - f1 * (s1 - s0) / df;
        s0 = s1;
        f0 = f1;
        s1 = s2;
        f1 = mismatch(s1)?;
    }
    Err(Error::NoConvergence { iterations: MAX_SHOOT_ITER, error: f1.norm() })
}

/// A rectangular grid of cell centres.
#[derive(Clone, Debug)]
pub struct Grid {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn centres(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                let u = (i as f64 + 0.5) / self.nx as f64;
                let v = (j as f64 + 0.5) / self.ny as f64;
                out.push((self.x.0 + u * (self.x.1 - self.x.0), self.y.0 + v * (self.y.1 - self.y.0)));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CrossRatioOptions {
    pub h: f64,
    pub tol: f64,
    /// Cells closer than this to the connecting geodesic are marked invalid.
    pub margin: f64,
}

impl Default for CrossRatioOptions {
    fn default() -> Self {
        CrossRatioOptions { h: DEFAULT_STEP, tol: 1e-11, margin: 0.05 }
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    pub value: C,
    pub valid: bool,
}

#[derive(Clone, Debug)]
pub struct CrossRatioField {
    pub cells: Vec<Cell>,
}

impl CrossRatioField {
    pub fn valid(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.valid)
    }

    /// Mean squared deviation from the mean over valid cells.
    pub fn variance(&self) -> f64 {
        let vals: Vec<C> = self.valid().map(|c| c.value).collect();
        if vals.is_empty() {
            return 0.0;
        }
        let mean = vals.iter().sum::<C>() / vals.len() as f64;
        vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / vals.len() as f64
    }
}

fn det(a: (C, C), b: (C, C)) -> C {
    a.1 * b.0 - b.1 * a.0
}

/// Cross-ratio `(e1-e3)(e2-e4)/((e2-e3)(e1-e4))` of four directions given as tangent vectors.
pub fn cross_ratio_dirs(d: [(C, C); 4]) -> Option<C> {
    let den = det(d[1], d[2]) * det(d[0], d[3]);
    let scale: f64 = d.iter().map(|v| v.0.norm().max(v.1.norm())).product();
    if den.norm() <= 1e-12 * scale {
        return None;
    }
    Some(det(d[0], d[2]) * det(d[1], d[3]) / den)
}

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let len2 = vx * vx + vy * vy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * vx + (p.1 - a.1) * vy) / len2).clamp(0.0, 1.0) };
    ((p.0 - a.0 - t * vx).powi(2) + (p.1 - a.1 - t * vy).powi(2)).sqrt()
}

/// Samples of the geodesic through `p` with initial direction from `res`, in both
/// directions, until it leaves the box.
fn trace(ev: &dyn StructureField, p: (f64, f64), res: &ShootingResult, bx: ((f64, f64), (f64, f64)), h: f64) -> Vec<(f64, f64)> {
    let inside = |s: &State| s.x.re >= bx.0 .0 && s.x.re <= bx.0 .1 && s.y.re >= bx.1 .0 && s.y.re <= bx.1 .1;
    let start = State { x: C::new(p.0, 0.0), y: C::new(p.1, 0.0), s: res.slope, chart: res.chart };
    let diag = ((bx.0 .1 - bx.0 .0).powi(2) + (bx.1 .1 - bx.1 .0).powi(2)).sqrt();
    let steps = (4.0 * diag / h).ceil() as usize;
    let mut pts = Vec::new();
    for sign in [-1.0, 1.0] {
        let mut branch = vec![p];
        let mut st = start;
        let mut step = C::new(sign * h, 0.0);
        for _ in 0..steps {
            if st.s.norm() > 2.0 {
                let (next, factor) = swap(&st);
                st = next;
                step *= factor / factor.norm();
            }
            match rk4_step(ev, &st, step) {
                Ok(next) if inside(&next) => st = next,
                _ => break,
            }
            branch.push((st.x.re, st.y.re));
        }
        if sign < 0.0 {
            branch.reverse();
            pts.extend(branch);
        } else {
            pts.extend(branch.into_iter().skip(1));
        }
    }
    pts
}

/// Cross-ratio of the four foliations by geodesics through `points` on a grid.
/// The points must lie on one geodesic; cells near it, or where shooting fails,
/// are kept but marked invalid.
pub fn cross_ratio_field(
    ev: &dyn StructureField,
    points: [(f64, f64); 4],
    grid: &Grid,
    opts: &CrossRatioOptions,
) -> Result<CrossRatioField> {
    let to_first: Vec<ShootingResult> =
        points[1..].iter().map(|&q| shoot_with(ev, points[0], q, opts.tol, opts.h)).collect::<Result<_>>()?;
    let d0 = to_first[0].direction();
    for r in &to_first[1..] {
        let d = r.direction();
        let n = (d0.0.norm() + d0.1.norm()) * (d.0.norm() + d.1.norm());
        if det(d0, d).norm() > 1e-6 * n {
            return Err(Error::BadParams { tag: "crossratio".into(), reason: "points are not on one geodesic".into() });
        }
    }
    let m = opts.margin;
    let bx = ((grid.x.0 - m, grid.x.1 + m), (grid.y.0 - m, grid.y.1 + m));
    let curve = trace(ev, points[0], &to_first[0], bx, opts.h.max(1e-3));
    let near_curve = |c: (f64, f64)| -> bool {
        curve.windows(2).any(|w| seg_dist(c, w[0], w[1]) < m) || (curve.len() == 1 && seg_dist(c, curve[0], curve[0]) < m)
    };
    let cells = grid
        .centres()
        .into_par_iter()
        .map(|c| {
            let invalid = Cell { x: c.0, y: c.1, value: C::new(f64::NAN, f64::NAN), valid: false };
            if near_curve(c) || points.iter().any(|&p| seg_dist(c, p, p) < m) {
                return invalid;
            }
            let mut dirs = [(C::default(), C::default()); 4];
            for (d, &p) in dirs.iter_mut().zip(&points) {
                match shoot_with(ev, c, p, opts.tol, opts.h) {
                    Ok(r) => *d = r.direction(),
                    Err(_) => return invalid,
                }
            }
            match cross_ratio_dirs(dirs) {
                Some(v) => Cell { x: c.0, y: c.1, value: v, valid: true },
                None => invalid,
            }
        })
        .collect();
    Ok(CrossRatioField { cells })
}
