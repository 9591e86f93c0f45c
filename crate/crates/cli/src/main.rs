use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use osp_toda::diffop::DiffOperator;
use osp_toda::exec::Execution;
use osp_toda::json::SCHEMA;
use osp_toda::numerics::bessel::liouville_samples;
use osp_toda::numerics::shooting::shoot_bc1;
use osp_toda::numerics::spectrum::{covariance, BoxDomain};
use osp_toda::numerics::{bessel_reduction, log_value, ode_residual, Bc1, Grid1D};
use osp_toda::osp::form::invariant_form;
use osp_toda::osp::AlgebraTable;
use osp_toda::poly::coupling;
use osp_toda::radial::{at_imaginary_weight, radial_part, specialize_couplings, RadialDocument};
use osp_toda::roots::{RootSystem, RootType};
use osp_toda::scalar::{format_rational, parse_rational};
use osp_toda::toda::{build_toda, canonicalize, document, osp_spec_numeric, TodaSpec};
use osp_toda::uea::{CasimirDocument, Uea};
use osp_toda::verify::{self, VerifyOptions};
use osp_toda::whittaker::{Character, Side};

const TOLERANCE: f64 = 1e-8;
const MAX_MATRIX: usize = 4096;

#[derive(Parser)]
#[command(name = "osp-toda", version, about = "osp(1|2l) structure, Casimir radial parts and BC Toda chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum CasimirForm {
    /// Σ X^a X_a from the dual basis, as built.
    Dual,
    /// Closed form in Cartan and root generators.
    Closed,
    /// PBW normal order.
    #[value(alias = "normal")]
    Ordered,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    Liouville,
    Bc1,
    Box,
}

#[derive(Subcommand)]
enum Command {
    /// Basis and structure constants of osp(1|2l).
    Basis {
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Root data: simple and positive roots, Cartan matrix, rho.
    Roots {
        #[arg(long = "type", default_value = "b0")]
        kind: RootType,
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Quadratic Casimir in the enveloping algebra.
    Casimir {
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value = "ordered")]
        form: CasimirForm,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run verification suites; exit code 1 if any fails.
    Verify {
        #[arg(long)]
        l: usize,
        /// Comma-separated suite names, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timing: bool,
        /// Run suites one after another.
        #[arg(long)]
        sequential: bool,
    },
    /// Radial part of the Casimir on the Whittaker pairing.
    Radial {
        #[arg(long)]
        l: usize,
        /// `symbolic`, or comma-separated rational values of g_1^2..g_l^2.
        #[arg(long, default_value = "symbolic")]
        couplings: String,
        /// Report the eigenvalue at l = i*mu - rho; optional comma-separated mu values.
        #[arg(long, num_args = 0..=1, default_missing_value = "symbolic")]
        mu: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Toda Hamiltonian of a root system.
    Toda {
        #[arg(long = "type", default_value = "bc")]
        kind: RootType,
        #[arg(long)]
        l: usize,
        /// Rational g^2 values in coordinate order: chain e^(q_i - q_(i+1)), then e^(q_l), then e^(2 q_l).
        #[arg(long)]
        g: String,
        #[arg(long)]
        canonicalize: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Floating-point cross-checks; exit code 1 if a tolerance is missed.
    Numeric {
        #[arg(long, value_enum)]
        case: Case,
        /// Comma-separated spectral parameters.
        #[arg(long, default_value = "0.5,1,2")]
        mu: String,
        /// q_min,q_max,n
        #[arg(long, default_value = "-10,2,2401")]
        grid: String,
        /// Coupling b in b e^q + a e^(2q) (liouville, bc1).
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Coupling a in b e^q + a e^(2q) (bc1).
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Rank for the box case.
        #[arg(long, default_value_t = 1)]
        l: usize,
        /// Comma-separated rational kappa_k^2 for the box case.
        #[arg(long, default_value = "3")]
        kappa2: String,
        /// lo,hi of the box in every coordinate.
        #[arg(long = "box", default_value = "-6,3")]
        domain: String,
        /// Interior points per axis for the box case; defaults to 200, 30, 10, 6 for l = 1..4.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "json")]
        report: String,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn rationals(s: &str) -> Result<Vec<BigRational>, Failure> {
    s.split(',').map(|x| parse_rational(x).map_err(usage)).collect()
}

fn floats(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad number `{x}`")))).collect()
}

fn rank(l: usize) -> Result<usize, Failure> {
    if l == 0 {
        Err(usage("rank must be at least 1"))
    } else {
        Ok(l)
    }
}

fn basis(l: usize, format: Format) -> Outcome {
    let t = AlgebraTable::new(rank(l)?).map_err(usage)?;
    Ok(match format {
        Format::Json => emit(&t.to_json()),
        Format::Latex => {
            let b = t.basis();
            let mut out = String::from("\\begin{align*}\n");
            for x in 0..t.dim() {
                for y in 0..t.dim() {
                    let r = t.bracket_basis(x, y);
                    if !r.is_zero() {
                        out.push_str(&format!("[{}, {}] &= {} \\\\\n", b.latex_label(x), b.latex_label(y), b.latex(r)));
                    }
                }
            }
            out + "\\end{align*}\n"
        }
    })
}

fn roots(kind: RootType, l: usize, format: Format) -> Outcome {
    let rs = RootSystem::new(kind, rank(l)?).map_err(usage)?;
    Ok(match format {
        Format::Json => emit(&rs.to_json()),
        Format::Latex => rs.latex(),
    })
}

fn casimir(l: usize, form: CasimirForm, format: Format) -> Outcome {
    let t = AlgebraTable::new(rank(l)?).map_err(usage)?;
    let u = Uea::new(&t);
    let f = invariant_form(t.basis()).map_err(usage)?;
    let c = u.casimir(&f).map_err(usage)?;
    let (c, name) = match form {
        CasimirForm::Dual => (c, "dual"),
        CasimirForm::Closed => (u.casimir_closed(), "closed"),
        CasimirForm::Ordered => (u.normal_order(&c), "ordered"),
    };
    Ok(match format {
        Format::Json => emit(&CasimirDocument { schema: SCHEMA.into(), l, form: name.into(), terms: u.to_json(&c) }),
        Format::Latex => format!("C_2 = {}\n", u.latex(&c)),
    })
}

fn run_verify(l: usize, suite: &str, timing: bool, sequential: bool) -> Outcome {
    let l = rank(l)?;
    let names: Vec<&str> = suite.split(',').map(str::trim).collect();
    for n in &names {
        if *n != "all" && !verify::SUITES.contains(n) {
            return Err(usage(format!("unknown suite `{n}`; known: all, {}", verify::SUITES.join(", "))));
        }
    }
    let exec = if sequential { Execution::Sequential } else { Execution::default() };
    let opts = VerifyOptions { exec, timing, ..VerifyOptions::default() };
    let reports = verify::run(&names, l, opts);
    let passed = reports.iter().all(|r| r.passed);
    let out = emit(&json!({ "schema": SCHEMA, "l": l, "passed": passed, "suites": reports }));
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.as_str()).collect();
        Err(Failure::Verification(format!("failed suites: {}", failed.join(", "))))
    }
}

fn radial(l: usize, couplings: &str, mu: Option<&str>, format: Format) -> Outcome {
    let t = AlgebraTable::new(rank(l)?).map_err(usage)?;
    let u = Uea::new(&t);
    let rho = RootSystem::b0(l).map_err(usage)?.rho();
    let r = radial_part(
        &u,
        &u.casimir_normal_form(),
        &Character::standard(Side::L, &t),
        &Character::standard(Side::R, &t),
        &rho,
    )
    .map_err(usage)?;
    let mut shown = BTreeMap::new();
    let operator = if couplings == "symbolic" {
        for k in 1..=l {
            shown.insert(coupling(k).name().to_string(), "symbolic".to_string());
        }
        r.operator.clone()
    } else {
        let vals = rationals(couplings)?;
        if vals.len() != l {
            return Err(usage(format!("expected {l} coupling values, got {}", vals.len())));
        }
        let map: BTreeMap<usize, BigRational> = vals.into_iter().enumerate().map(|(i, v)| (i + 1, v)).collect();
        for (k, v) in &map {
            shown.insert(format!("{}^2", coupling(*k).name()), format_rational(v));
        }
        specialize_couplings(&r.operator, &map).map_err(usage)?
    };
    let eigenvalue_mu = match mu {
        None => None,
        Some(m) => {
            let mut p = at_imaginary_weight(&r.eigenvalue, &rho).map_err(usage)?;
            if m != "symbolic" {
                let vals = rationals(m)?;
                if vals.len() != l {
                    return Err(usage(format!("expected {l} mu values, got {}", vals.len())));
                }
                for (i, v) in vals.into_iter().enumerate() {
                    let name = osp_toda::poly::mu(i + 1);
                    p = p.substitute(name.name(), &osp_toda::poly::GradedPoly::from_rational(v)).map_err(usage)?;
                }
            }
            Some(p)
        }
    };
    Ok(match format {
        Format::Json => emit(&RadialDocument {
            schema: SCHEMA.into(),
            l,
            couplings: shown,
            operator: operator.to_json(),
            eigenvalue: r.eigenvalue.to_json(),
            eigenvalue_mu: eigenvalue_mu.as_ref().map(|p| p.to_json()),
        }),
        Format::Latex => {
            let mut s = format!("H_2 = {}\n\\lambda_{{H}} = {}\n", operator.latex(), r.eigenvalue.latex());
            if let Some(p) = eigenvalue_mu {
                s.push_str(&format!("\\lambda_{{H}}\\big|_{{\\lambda = i\\mu - \\rho}} = {}\n", p.latex()));
            }
            s
        }
    })
}

fn toda(kind: RootType, l: usize, g: &str, canon: bool, format: Format) -> Outcome {
    let system = RootSystem::new(kind, rank(l)?).map_err(usage)?;
    let spec = TodaSpec::from_coordinate_order(&system, &rationals(g)?).map_err(usage)?;
    let c = if canon { Some(canonicalize(&spec).map_err(usage)?) } else { None };
    Ok(match format {
        Format::Json => emit(&document(&spec, c.as_ref()).map_err(usage)?),
        Format::Latex => {
            let shown = c.as_ref().map_or(&spec, |c| &c.spec);
            let mut s = format!("H = {}\n", build_toda(shown).map_err(usage)?.latex());
            if let Some(c) = &c {
                let shift: Vec<String> = c.shift.iter().map(|x| x.to_string()).collect();
                s.push_str(&format!("q \\mapsto q + ({})\n", shift.join(", ")));
            }
            s
        }
    })
}

fn grid(s: &str) -> Result<Grid1D, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(usage("grid must be q_min,q_max,n"));
    }
    let f = floats(&format!("{},{}", parts[0], parts[1]))?;
    let n: usize = parts[2].trim().parse().map_err(|_| usage(format!("bad point count `{}`", parts[2])))?;
    Grid1D::new(f[0], f[1], n).map_err(usage)
}

fn verdict(doc: Value, passed: bool) -> Outcome {
    let out = emit(&doc);
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification("numeric tolerance missed".into()))
    }
}

#[allow(clippy::too_many_arguments)]
fn numeric(
    case: Case,
    mu: &str,
    grid_s: &str,
    b: f64,
    a: f64,
    l: usize,
    kappa2: &str,
    domain: &str,
    n: Option<usize>,
) -> Outcome {
    let exec = Execution::default();
    match case {
        Case::Liouville => {
            let g = grid(grid_s)?;
            let pot = Bc1::new(b, 0.0).map_err(usage)?;
            let lap = DiffOperator::laplacian(1).scale(&osp_toda::scalar::Scalar::from_int(-1));
            let op = lap.add(&DiffOperator::potential(1, vec![1], osp_toda::poly::GradedPoly::one()));
            let red = bessel_reduction(&op).map_err(usage)?;
            let reduces = red.len() == 2
                && red.get(&(0, 2)) == Some(&osp_toda::scalar::rat(-1, 4))
                && red.get(&(2, 0)) == Some(&osp_toda::scalar::rat(1, 4));
            let mut rows = Vec::new();
            let mut ok = reduces;
            for m in floats(mu)? {
                let psi = liouville_samples(b, m, &g, exec);
                let r = ode_residual(&pot, m, &psi, &g, exec).map_err(usage)?;
                ok &= r <= TOLERANCE;
                rows.push(json!({ "mu": m, "residual": r, "passed": r <= TOLERANCE }));
            }
            verdict(
                json!({ "schema": SCHEMA, "case": "liouville", "b": b, "grid": g, "tolerance": TOLERANCE,
                        "bessel_reduction": reduces, "results": rows, "passed": ok }),
                ok,
            )
        }
        Case::Bc1 => {
            let g = grid(grid_s)?;
            let pot = Bc1::new(b, a).map_err(usage)?;
            let mut rows = Vec::new();
            let mut ok = true;
            for m in floats(mu)? {
                let r = shoot_bc1(&pot, m, &g, exec).map_err(usage)?;
                let pass = r.wronskian_drift <= TOLERANCE && r.midpoint_mismatch <= TOLERANCE;
                ok &= pass;
                rows.push(json!({ "report": r, "passed": pass }));
            }
            verdict(
                json!({ "schema": SCHEMA, "case": "bc1", "tolerance": TOLERANCE, "results": rows, "passed": ok }),
                ok,
            )
        }
        Case::Box => {
            let l = rank(l)?;
            let n = n.unwrap_or(match l {
                1 => 200,
                2 => 30,
                3 => 10,
                _ => 6,
            });
            if (n as f64).powi(l as i32) > MAX_MATRIX as f64 {
                return Err(usage(format!("{n}^{l} grid points exceed the dense limit of {MAX_MATRIX}")));
            }
            let k2 = rationals(kappa2)?;
            let spec = osp_spec_numeric(l, &k2).map_err(usage)?;
            let c = canonicalize(&spec).map_err(usage)?;
            let shift = c.shift.iter().map(log_value).collect::<Result<Vec<_>, _>>().map_err(usage)?;
            let bounds = floats(domain)?;
            if bounds.len() != 2 {
                return Err(usage("box must be lo,hi"));
            }
            let dom = BoxDomain::new(vec![(bounds[0], bounds[1]); l]).map_err(usage)?;
            let original = build_toda(&spec).map_err(usage)?;
            let canonical = build_toda(&c.spec).map_err(usage)?;
            let rep = covariance(&original, &canonical, &shift, &dom, n, 5).map_err(usage)?;
            let ok = rep.max_difference <= TOLERANCE;
            let shift_s: Vec<String> = c.shift.iter().map(|x| x.to_string()).collect();
            verdict(
                json!({ "schema": SCHEMA, "case": "box", "l": l, "n": n, "tolerance": TOLERANCE,
                        "shift_exact": shift_s, "report": rep, "passed": ok }),
                ok,
            )
        }
    }
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Basis { l, format } => basis(l, format),
        Command::Roots { kind, l, format } => roots(kind, l, format),
        Command::Casimir { l, form, format } => casimir(l, form, format),
        Command::Verify { l, suite, timing, sequential } => run_verify(l, &suite, timing, sequential),
        Command::Radial { l, couplings, mu, format } => radial(l, &couplings, mu.as_deref(), format),
        Command::Toda { kind, l, g, canonicalize, format } => toda(kind, l, &g, canonicalize, format),
        Command::Numeric { case, mu, grid, b, a, l, kappa2, domain, n, report } => {
            if report != "json" {
                return Err(usage("only --report json is supported"));
            }
            numeric(case, &mu, &grid, b, a, l, &kappa2, &domain, n)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
    }
}
