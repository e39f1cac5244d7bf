use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use plusone::cocycle::{reduce_to_normal, Cocycle};
use plusone::error::Error;
use plusone::expr::Expr;
use plusone::fibration::detect;
use plusone::flatpencil::{curvature, structure_from_pencil, Pencil};
use plusone::geoflow::{cross_ratio_field, field_of, integrate, ClosedForm, CrossRatioOptions, Grid, State, StructureField};
use plusone::io::{canonical, model_structure, parse_json, FromJson, ToJson, DEFAULT_ORDER};
use plusone::projstruct::{liouville, ProjectiveStructure};
use plusone::scalar::{parse_scalar, Field, GaussianRational};
use plusone::symmetry::{act, equivalent, GroupElement};
use plusone::verify;

const BACKEND_ENV: &str = "PLUSONE_BACKEND";

#[derive(Parser)]
#[command(name = "plusone", version, about = "Cocycles of (+1)-neighborhoods and planar projective structures")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation order for series.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Scalar backend; the PLUSONE_BACKEND environment variable takes precedence.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    /// Tolerance for numerical shooting.
    #[arg(long, global = true, default_value_t = 1e-11)]
    tol: f64,
    /// Seed for randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a prenormal cocycle to normal form.
    Normalize {
        #[arg(long)]
        input: PathBuf,
    },
    /// Apply a group element (alpha, beta, gamma, theta) to a normal cocycle.
    Act {
        #[arg(long)]
        input: PathBuf,
        /// Four complex scalars, e.g. `0 0 1/2 1+i`.
        #[arg(long, num_args = 4, value_names = ["ALPHA", "BETA", "GAMMA", "THETA"], allow_hyphen_values = true)]
        theta: Vec<String>,
    },
    /// Decide whether two normal cocycles lie in one orbit.
    Equivalent {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Classify the transverse fibrations of a normal cocycle.
    Fibrations {
        #[arg(long)]
        input: PathBuf,
    },
    /// Liouville invariants of a projective structure.
    Liouville {
        #[command(flatten)]
        source: StructureSource,
    },
    /// The projective structure defined by a pencil of foliations.
    Pencil {
        #[arg(long)]
        input: PathBuf,
    },
    /// Web curvature of a pencil.
    Curvature {
        #[arg(long)]
        input: PathBuf,
    },
    /// Integrate a geodesic; CSV rows `t,x,y,z`.
    Geodesic {
        #[command(flatten)]
        source: StructureSource,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        y0: f64,
        /// Initial slope dy/dx.
        #[arg(long, allow_hyphen_values = true)]
        z0: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Radius of trust for series-only structures.
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
    },
    /// Cross-ratio of the four geodesic foliations through points on a geodesic; CSV `x,y,re,im,valid`.
    Crossratio {
        #[command(flatten)]
        source: StructureSource,
        /// Four points `x,y` on one geodesic.
        #[arg(long, num_args = 4, value_parser = parse_pair, allow_hyphen_values = true)]
        points: Vec<(f64, f64)>,
        /// Grid window `x0,x1,y0,y1`.
        #[arg(long, default_value = "0,1,0,1", value_parser = parse_window, allow_hyphen_values = true)]
        window: [f64; 4],
        #[arg(long, default_value_t = 20)]
        nx: usize,
        #[arg(long, default_value_t = 20)]
        ny: usize,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
    },
    /// Run the reproduction suite and print a JSON report.
    Verify,
}

#[derive(Args)]
struct StructureSource {
    #[command(flatten)]
    kind: SourceKind,
    /// Model parameters.
    #[arg(long, num_args = 0.., allow_negative_numbers = true, requires = "model")]
    params: Vec<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceKind {
    /// Structure JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Catalog model tag (i.a, i.b, ii.a, ii.b, iii, iv, sl2).
    #[arg(long)]
    model: Option<String>,
    /// Four closed-form coefficients A B C D in x, y.
    #[arg(long, num_args = 4, allow_hyphen_values = true)]
    exprs: Option<Vec<String>>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let v = parse_floats(s, 4)?;
    Ok([v[0], v[1], v[2], v[3]])
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers"));
    }
    Ok(v)
}

enum Output {
    Json(Value),
    Text(String),
}

/// Failures that are not usage errors; they map to exit code 1.
enum Failure {
    Domain(Error),
    Io(String),
    Checks(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_json(&text)?)
}

fn structure<F: Field>(src: &StructureSource, order: usize) -> Result<ProjectiveStructure<F>, Failure> {
    if let Some(path) = &src.kind.input {
        return Ok(ProjectiveStructure::from_json(&read_json(path)?)?);
    }
    if let Some(tag) = &src.kind.model {
        return Ok(model_structure(tag, &src.params, None, order)?);
    }
    let exprs = src.kind.exprs.as_ref().expect("clap enforces one source");
    let parsed: Vec<Expr> = exprs.iter().map(|e| e.parse()).collect::<Result<_, _>>()?;
    let parsed: [Expr; 4] = parsed.try_into().expect("clap enforces four expressions");
    Ok(ProjectiveStructure::from_exprs(&parsed, (F::zero(), F::zero()), order)?)
}

fn evaluator(src: &StructureSource, order: usize, radius: f64) -> Result<Box<dyn StructureField>, Failure> {
    if let Some(exprs) = &src.kind.exprs {
        let e: [&str; 4] = [&exprs[0], &exprs[1], &exprs[2], &exprs[3]];
        return Ok(Box::new(ClosedForm::parse(e)?));
    }
    Ok(field_of(&structure::<Complex64>(src, order)?, radius)?)
}

fn run_exact_or_float<F: Field>(cmd: &Command, c: &Common) -> Result<Output, Failure> {
    let order = c.order;
    Ok(match cmd {
        Command::Normalize { input } => {
            let phi = Cocycle::<F>::from_json(&read_json(input)?)?.with_order(order);
            Output::Json(reduce_to_normal(&phi)?.normal.to_json())
        }
        Command::Act { input, theta } => {
            let phi = Cocycle::<F>::from_json(&read_json(input)?)?.with_order(order);
            let p: Vec<F> = theta.iter().map(|s| parse_scalar(s)).collect::<Result<_, _>>()?;
            let g = GroupElement::new(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone())?;
            Output::Json(act(&g, &phi)?.to_json())
        }
        Command::Equivalent { input, other } => {
            let a = Cocycle::<F>::from_json(&read_json(input)?)?.with_order(order);
            let b = Cocycle::<F>::from_json(&read_json(other)?)?.with_order(order);
            let w = equivalent(&a, &b)?;
            Output::Json(json!({ "equivalent": w.is_some(), "witness": w.map(|g| g.to_json()) }))
        }
        Command::Fibrations { input } => {
            let phi = Cocycle::<F>::from_json(&read_json(input)?)?;
            Output::Json(detect(&phi, order, c.seed)?.to_json())
        }
        Command::Liouville { source } => Output::Json(liouville(&structure::<F>(source, order)?).to_json()),
        Command::Pencil { input } => {
            let p = Pencil::<F>::from_json(&read_json(input)?)?;
            Output::Json(structure_from_pencil(&p)?.to_json())
        }
        Command::Curvature { input } => {
            let k = curvature(&Pencil::<F>::from_json(&read_json(input)?)?)?;
            Output::Json(json!({ "K": k.to_json(), "hexagonal": k.is_zero() }))
        }
        Command::Geodesic { source, x0, y0, z0, h, steps, radius } => {
            let ev = evaluator(source, order, *radius)?;
            let tr = integrate(ev.as_ref(), State::new(*x0, *y0, *z0), *h, *steps)?;
            let mut csv = String::from("t,x,y,z\n");
            for s in &tr.samples {
                let z = s.state.slope().map(|z| z.re.to_string()).unwrap_or_else(|| "inf".into());
                csv.push_str(&format!("{},{},{},{}\n", s.t, s.state.x.re, s.state.y.re, z));
            }
            Output::Text(csv)
        }
        Command::Crossratio { source, points, window, nx, ny, h, margin, radius } => {
            let ev = evaluator(source, order, *radius)?;
            let grid = Grid { x: (window[0], window[1]), y: (window[2], window[3]), nx: *nx, ny: *ny };
            let opts = CrossRatioOptions { h: *h, tol: c.tol, margin: *margin };
            let pts = [points[0], points[1], points[2], points[3]];
            let f = cross_ratio_field(ev.as_ref(), pts, &grid, &opts)?;
            let mut csv = String::from("x,y,re,im,valid\n");
            for cell in &f.cells {
                csv.push_str(&format!("{},{},{},{},{}\n", cell.x, cell.y, cell.value.re, cell.value.im, cell.valid as u8));
            }
            Output::Text(csv)
        }
        Command::Verify => {
            let report = verify::run(c.seed);
            if report.all_passed_or_reported() {
                Output::Json(report.to_json())
            } else {
                return Err(Failure::Checks(report.to_json()));
            }
        }
    })
}

fn backend(c: &Common) -> Result<BackendArg, Failure> {
    match std::env::var(BACKEND_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.parse::<plusone::scalar::Backend>()? {
            plusone::scalar::Backend::Exact => Ok(BackendArg::Exact),
            plusone::scalar::Backend::Float => Ok(BackendArg::Float),
        },
        _ => Ok(c.backend),
    }
}

fn emit(out: &Output, path: &Option<PathBuf>) -> Result<(), Failure> {
    let text = match out {
        Output::Json(v) => canonical(v),
        Output::Text(t) => t.clone(),
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = backend(&cli.common).and_then(|b| match b {
        BackendArg::Exact => run_exact_or_float::<GaussianRational>(&cli.command, &cli.common),
        BackendArg::Float => run_exact_or_float::<Complex64>(&cli.command, &cli.common),
    });
    let result = result.and_then(|out| emit(&out, &cli.common.out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(report)) => {
            let _ = emit(&Output::Json(report), &cli.common.out);
            eprintln!("error: some checks failed");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
