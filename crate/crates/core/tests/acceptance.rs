//! Acceptance criteria, one line per criterion. Runs with a plain `main` so the
//! report is always printed; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use plusone::cocycle::{conjugate, reduce_to_normal, ChartMap, Cocycle};
use plusone::expr::Expr;
use plusone::fibration::{count_property_sample, detect, kill_order4_extended, random_normal, Classification};
use plusone::fixtures::{exy_pencil, one_fibration, special_covering, without_fibration};
use plusone::flatpencil::{
    curvature, curvature_from, finite, infinity, line_leaf_residual, nodal_cubic, nodal_family, riccati_integrability,
    sl2_pencils, structure_from_pencil, RiccatiForm,
};
use plusone::geoflow::{cross_ratio_field, integrate, ClosedForm, CrossRatioOptions, Grid, State};
use plusone::projstruct::{catalog, geodesic_residual, liouville, ProjectiveStructure};
use plusone::scalar::{Field, GaussianRational as Q, Ring};
use plusone::series::{BiSeries, Trunc, USeries};
use plusone::symmetry::{act, displayed_rows, equivalent, row_index, GroupElement};
use plusone::verify;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 8;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn small(rng: &mut ChaCha8Rng) -> Q {
    Q::from_frac(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn nonzero(rng: &mut ChaCha8Rng) -> Q {
    loop {
        let q = small(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

fn element(rng: &mut ChaCha8Rng) -> GroupElement<Q> {
    GroupElement::new(small(rng), small(rng), small(rng), nonzero(rng)).unwrap()
}

fn e(s: &str) -> Expr {
    s.parse().unwrap()
}

fn action_oracle() -> Outcome {
    let mut rng = rng(1);
    let mut rows = 0;
    for k in 0..50 {
        let phi = random_normal::<Q>(&mut rng, N, 4, 3);
        let g = element(&mut rng);
        let acted = act(&g, &phi).map_err(err)?;
        for (name, predicted) in displayed_rows(&g, &phi).map_err(err)? {
            let (is_a, m, n) = row_index(name);
            let actual = if is_a { acted.a_coeff(m, n) } else { acted.b_coeff(m, n) };
            ensure(actual == predicted, format!("sample {k}, row {name}: formula {predicted}, conjugation {actual}"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} displayed rows agree with series conjugation over 50 samples"))
}

fn group_axioms() -> Outcome {
    let mut rng = rng(2);
    for k in 0..50 {
        let phi = random_normal::<Q>(&mut rng, N, 4, 3);
        let (g1, g2) = (element(&mut rng), element(&mut rng));
        let nested = act(&g1, &act(&g2, &phi).map_err(err)?).map_err(err)?;
        ensure(act(&g1.compose(&g2), &phi).map_err(err)? == nested, format!("sample {k}: g1.(g2.phi) != (g1 g2).phi"))?;
        ensure(act(&GroupElement::identity(), &phi).map_err(err)? == phi, format!("sample {k}: identity moves phi"))?;
        let back = act(&g1.inverse().map_err(err)?, &act(&g1, &phi).map_err(err)?).map_err(err)?;
        ensure(back == phi, format!("sample {k}: inverse does not undo"))?;
    }
    Ok("compatibility, identity and inverse hold on 50 triples".into())
}

fn special_covering_check() -> Outcome {
    let phi = special_covering::<Q>(N).map_err(err)?;
    let (b3, b5) = (phi.b_coeff(-2, 3), phi.b_coeff(-3, 5));
    ensure(b3 == Q::from_frac(1, 2) && b5 == Q::from_frac(3, 8), format!("b(-2,3) = {b3}, b(-3,5) = {b5}"))?;
    let r = detect(&phi, N, 0).map_err(err)?;
    ensure(r.classification == Classification::Two, format!("classification {}", r.classification.as_str()))?;
    let mut w: Vec<[Q; 3]> = r.witnesses.iter().filter_map(|w| w.exact.clone()).collect();
    w.sort_by_key(|t| t[2].to_string());
    let want = vec![[Q::zero(), Q::zero(), Q::zero()], [Q::zero(), Q::zero(), Q::one()]];
    ensure(w == want, format!("witnesses {w:?}"))?;
    Ok("b(-2,3) = 1/2, b(-3,5) = 3/8, Two with (0,0,0) and (0,0,1)".into())
}

fn classification_examples() -> Outcome {
    let none = detect(&without_fibration::<Q>(N), N, 0).map_err(err)?;
    ensure(none.classification == Classification::None, format!("y^5/x^3 example: {}", none.classification.as_str()))?;
    let fixture = one_fibration::<Q>(N);
    let triple = [fixture.b_coeff(-2, 5), fixture.b_coeff(-3, 5), fixture.b_coeff(-4, 5)];
    ensure(triple == [Q::one(), Q::zero(), Q::one()], format!("fixture b row {triple:?}"))?;
    let one = detect(&fixture, N, 0).map_err(err)?;
    let w: Vec<_> = one.witnesses.iter().filter_map(|w| w.exact.clone()).collect();
    ensure(
        one.classification == Classification::One && w == vec![[Q::zero(), Q::zero(), Q::zero()]],
        format!("one-fibration fixture: {} {w:?}", one.classification.as_str()),
    )?;
    let lin = detect(&Cocycle::<Q>::linear(N), N, 0).map_err(err)?;
    ensure(lin.classification == Classification::ManyOrLinear, format!("linear: {}", lin.classification.as_str()))?;
    Ok("None, One (0,0,0), ManyOrLinear".into())
}

fn kill_order4_check() -> Outcome {
    let mut rng = rng(5);
    let mut extended = 0;
    for k in 0..50 {
        let phi = random_normal::<Q>(&mut rng, N, 4, 3);
        let (killed, g) = kill_order4_extended(&phi).map_err(err)?;
        ensure(killed.a_coeff(-3, 4).is_zero(), format!("sample {k}: a'(-3,4) = {:?}", killed.a_coeff(-3, 4)))?;
        if !g.gamma.b.is_zero() {
            extended += 1;
        }
    }
    Ok(format!("a'(-3,4) = 0 in all 50 samples ({extended} needed a square root outside the field)"))
}

fn random_poly(rng: &mut ChaCha8Rng) -> Expr {
    let deg = rng.gen_range(0..=4);
    let mut p = Expr::int(0);
    for k in 0..=deg {
        p = p + Expr::scalar(&small(rng)) * Expr::X.pow(k);
    }
    p
}

fn liouville_check() -> Outcome {
    let origin = (Q::zero(), Q::zero());
    ensure(liouville(&ProjectiveStructure::<Q>::flat(N, origin.clone())).is_zero(), "flat structure has nonzero invariants")?;
    let mut rng = rng(6);
    for k in 0..10 {
        let (a, b) = (random_poly(&mut rng), random_poly(&mut rng));
        let pi = ProjectiveStructure::from_exprs(&[a.clone(), b.clone(), Expr::int(0), Expr::int(1)], origin.clone(), N)
            .map_err(err)?;
        let l = liouville(&pi);
        let a_ser = a.taylor(&origin, N).map_err(err)?;
        let b_ser = b.taylor(&origin, N).map_err(err)?;
        let m3 = Q::from_i64(-3);
        let w1 = a_ser.d_dx().scale(&m3).with_order(l.l1.order());
        let w2 = b_ser.d_dx().scale(&m3).with_order(l.l2.order());
        ensure(l.l1 == w1 && l.l2 == w2, format!("sample {k}: A = {a}, B = {b}"))?;
    }
    let report = verify::run(0);
    let c = report.get("liouville-i.b").ok_or("missing (i.b) check")?;
    ensure(c.status == verify::Status::PaperDiscrepancy, format!("(i.b) status {}", c.status.as_str()))?;
    Ok(format!("flat -> (0,0); 10 random (A,B,0,1) -> (-3A', -3B'); (i.b): {}", c.detail))
}

fn sl2_check() -> Outcome {
    let (pi, _) = catalog::<Q>("sl2", &[], N).map_err(err)?;
    let base = pi.basepoint.clone();
    for f in ["y/x", "y^2/(x*y+i)", "y^2/(x*y-i)"] {
        let s = e(f).taylor(&base, N).map_err(err)?;
        ensure(geodesic_residual(&s, &pi).is_zero(), format!("{f} is not geodesic"))?;
    }
    let (plus, minus) = sl2_pencils::<Q>(N + 1).map_err(err)?;
    let ts = [Q::zero(), Q::one(), Q::from_i64(-1), Q::from_i64(2), Q::from_frac(1, 3), Q::one().add_ref(&Q::i())];
    for (name, p) in [("+", &plus), ("-", &minus)] {
        for t in &ts {
            let slope = p.slope(t).map_err(err)?;
            ensure(geodesic_residual(&slope, &pi).is_zero(), format!("pencil {name}, t = {t}: not geodesic"))?;
        }
        for t in ts.iter().take(3) {
            ensure(line_leaf_residual(p, t).map_err(err)?.is_zero(), format!("pencil {name}: y = {t} x is not a leaf"))?;
        }
    }
    Ok("three slope factors geodesic; both pencils geodesic at 6 t; y = tx a leaf for t in {0, 1, -1}".into())
}

fn nodal_check() -> Outcome {
    let mut rng = rng(8);
    for _ in 0..20 {
        let gamma = small(&mut rng);
        let m = nodal_family(&gamma, N).map_err(err)?;
        ensure(nodal_cubic(&m.alpha, &m.beta).is_zero(), format!("gamma = {gamma}: ({}, {}) off the cubic", m.alpha, m.beta))?;
        let want = ProjectiveStructure::from_exprs(
            &[Expr::scalar(&m.alpha) * e("exp(x)"), Expr::scalar(&m.beta), Expr::int(0), e("exp(-2*x)")],
            m.pencil.basepoint.clone(),
            N,
        )
        .map_err(err)?;
        ensure(structure_from_pencil(&m.pencil).map_err(err)? == want, format!("gamma = {gamma}: structure differs"))?;
    }
    Ok("20 random gamma: on the cubic, pencil reproduces (alpha e^x, beta, 0, e^-2x)".into())
}

fn curvature_check() -> Outcome {
    let p = exy_pencil::<Q>(N + 2).map_err(err)?;
    let k = curvature(&p).map_err(err)?;
    ensure(k == BiSeries::one(k.order(), Trunc::Total), "K is not 1")?;
    let choices = [
        [finite(Q::from_i64(2)), finite(Q::from_i64(-1)), infinity()],
        [finite(Q::from_frac(1, 2)), finite(Q::from_i64(3)), finite(Q::from_i64(-2))],
        [infinity(), finite(Q::zero()), finite(Q::from_i64(5))],
    ];
    for (j, c) in choices.into_iter().enumerate() {
        ensure(curvature_from(&p, c).map_err(err)? == k, format!("selection {j} changes K"))?;
    }
    Ok(format!("K = 1 to order {}; unchanged under 3 other member selections", k.order()))
}

fn riccati_check() -> Outcome {
    let origin = (Q::zero(), Q::zero());
    let mut rng = rng(10);
    for k in 0..10 {
        let (a, b) = (Expr::scalar(&small(&mut rng)), Expr::scalar(&small(&mut rng)));
        let den = Expr::int(1) - a.clone() * Expr::X - b.clone() * Expr::Y;
        let f = (a / den.clone()).taylor(&origin, N).map_err(err)?;
        let g = (b / den).taylor(&origin, N).map_err(err)?;
        let r = riccati_integrability(&RiccatiForm::trivial_family(&f, &g));
        ensure(r.iter().all(|s| s.is_zero()), format!("sample {k}: nonzero residual"))?;
    }
    Ok("10 random (a, b): zero integrability residual".into())
}

fn random_chart(rng: &mut ChaCha8Rng) -> ChartMap<Q> {
    let tail = |rng: &mut ChaCha8Rng, lead: Q| {
        let mut c = vec![lead];
        c.extend((0..3).map(|_| small(rng)));
        c
    };
    let alpha = USeries::new(tail(rng, Q::one()), N);
    let beta = USeries::new(tail(rng, Q::zero()), N);
    let mut p = vec![Q::zero(), Q::one()];
    p.extend((0..2).map(|_| small(rng)));
    ChartMap::new(alpha, beta, USeries::new(p, N)).unwrap()
}

fn round_trip() -> Outcome {
    let mut rng = rng(11);
    let mut sources = vec![Cocycle::<Q>::linear(N)];
    sources.extend((0..10).map(|_| random_normal::<Q>(&mut rng, N, 3, 3)));
    for (k, phi) in sources.iter().enumerate() {
        let conj = conjugate(&random_chart(&mut rng), phi, &random_chart(&mut rng)).map_err(err)?;
        ensure(conj.is_prenormal(), format!("sample {k}: conjugate is not prenormal"))?;
        let r = reduce_to_normal(&conj).map_err(err)?;
        ensure(r.normal.is_normal(), format!("sample {k}: reduction is not normal"))?;
        ensure(conjugate(&r.psi_inf, &conj, &r.psi_0).map_err(err)? == r.normal, format!("sample {k}: charts inconsistent"))?;
        let w = equivalent(phi, &r.normal).map_err(err)?.ok_or(format!("sample {k}: no witness"))?;
        ensure(act(&w, phi).map_err(err)? == r.normal, format!("sample {k}: witness does not map phi to the reduction"))?;
    }
    Ok("linear + 10 random normal forms: normal after reduction, witness recovered".into())
}

fn numerics() -> Outcome {
    let mut lines = Vec::new();
    let mut failed = Vec::new();

    let flat = ClosedForm::parse(["0", "0", "0", "0"]).map_err(err)?;
    let mut dev: f64 = 0.0;
    for (y0, s) in [(0.0, 0.3), (0.5, -1.2), (-0.2, 1.9)] {
        let tr = integrate(&flat, State::new(0.0, y0, s), 1e-3, 1000).map_err(err)?;
        for smp in &tr.samples {
            let st = &smp.state;
            dev = dev.max((st.y - (y0 + s * st.x)).norm());
        }
    }
    lines.push(format!("lines deviation {dev:.1e}"));
    if dev >= 1e-8 {
        failed.push("lines");
    }

    // exact geodesics y = exp(mx + c) for (0, 0, 1/y, 0)
    let exp_chart = ClosedForm::parse(["0", "0", "1/y", "0"]).map_err(err)?;
    let exact = 0.5f64.exp();
    let error_at = |h: f64| -> Result<f64, String> {
        let steps = (1.0 / h).round() as usize;
        let tr = integrate(&exp_chart, State::new(0.0, 1.0, 0.5), h, steps).map_err(err)?;
        let end = tr.last().clone();
        Ok((end.y.re - exact).abs() + (end.x.re - 1.0).abs())
    };
    let (e1, e2) = (error_at(0.1)?, error_at(0.05)?);
    let ratio = e1 / e2;
    lines.push(format!("step-halving ratio {ratio:.2}"));
    if !(12.0..=20.0).contains(&ratio) {
        failed.push("step-halving");
    }

    let grid = Grid { x: (0.0, 1.0), y: (0.0, 1.0), nx: 20, ny: 20 };
    let opts = CrossRatioOptions::default();
    let flat_pts = [(0.0, 0.0), (0.25, 0.125), (0.5, 0.25), (1.0, 0.5)];
    let f = cross_ratio_field(&flat, flat_pts, &grid, &opts).map_err(err)?;
    lines.push(format!("flat variance {:.1e} ({} cells)", f.variance(), f.valid().count()));
    if f.variance() >= 1e-8 {
        failed.push("flat cross-ratio");
    }

    let k1 = ClosedForm::parse(["0", "-y", "-x", "0"]).map_err(err)?;
    let k1_pts = [(0.1, 0.0), (0.35, 0.0), (0.6, 0.0), (0.85, 0.0)];
    let f = cross_ratio_field(&k1, k1_pts, &grid, &opts).map_err(err)?;
    lines.push(format!("K=1 variance {:.1e} ({} cells)", f.variance(), f.valid().count()));
    if f.variance() <= 1e-3 {
        failed.push("K=1 variance above 1e-3");
    }

    let detail = lines.join("; ");
    if failed.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; failing: {}", failed.join(", ")))
    }
}

fn cap_property() -> Outcome {
    let mut rng = rng(13);
    let s = count_property_sample(&mut rng, 100, N).map_err(err)?;
    let hist: Vec<String> = s.histogram.iter().map(|(k, v)| format!("{}: {v}", k.as_str())).collect();
    ensure(s.max_witnesses < 3, format!("{} isolated witnesses seen", s.max_witnesses))?;
    ensure(!s.histogram.contains_key(&Classification::ManyOrLinear), "ManyOrLinear with nonzero residual")?;
    Ok(format!("100 samples, at most {} witnesses; {}", s.max_witnesses, hist.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("group action matches series conjugation", action_oracle),
        ("group axioms", group_axioms),
        ("special covering", special_covering_check),
        ("classification examples", classification_examples),
        ("order-4 normalization", kill_order4_check),
        ("Liouville invariants", liouville_check),
        ("SL2 structure and pencils", sl2_check),
        ("nodal family", nodal_check),
        ("web curvature", curvature_check),
        ("Riccati integrability", riccati_check),
        ("normal-form round trip", round_trip),
        ("numerics", numerics),
        ("fibration cap", cap_property),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(d) => println!("PASS {:>2} {name} [{secs:.1}s]: {d}", i + 1),
            Err(d) => {
                failures += 1;
                println!("FAIL {:>2} {name} [{secs:.1}s]: {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
