//! Command-line front end: generate the optimal polynomials, measure
//! stability intervals and regions, run the inequality checks and grid
//! oracle, simulate the linear test systems, and analyze Butcher tableaus.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use stabpoly::{
    integrate, optimal, stability, verify, Axis, ButcherTableau, RealPolynomial, StabilityReport,
};

#[derive(Parser)]
#[command(
    name = "stabpoly",
    version,
    about = "Optimal stability polynomials for explicit ODE integrators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Disc,
    Parabolic,
    ParabolicSubsteps,
    SecondOrder,
    Hyperbolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Real,
    Imag,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Pgm,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Bernstein,
    Markov,
    Alpha,
    Oracle,
    QIdentity,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    NegativeReal,
    Imaginary,
    Disc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Composed,
    Tableau,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Heat,
    Advection,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit an optimal polynomial (or substep schedule) as JSON
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure the stability interval of a polynomial along an axis
    Interval {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        axis: AxisArg,
        #[arg(long, default_value_t = stability::DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = stability::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample |P| on a rectangular grid, as CSV or a PGM image
    Region {
        #[arg(long)]
        poly: PathBuf,
        /// re_min,re_max,im_min,im_max
        #[arg(long = "box", allow_hyphen_values = true)]
        boxspec: String,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the numerical verification checks
    Verify {
        #[arg(long)]
        check: CheckArg,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Oracle target axis (oracle check only)
        #[arg(long)]
        target: Option<TargetArg>,
        /// Oracle grid lower bound per free coefficient
        #[arg(long, default_value_t = 0.01)]
        lo: f64,
        /// Oracle grid upper bound per free coefficient
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        /// Oracle grid step
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time-step a linear test system and emit the norm history as CSV
    Simulate {
        #[arg(long)]
        scheme: SchemeArg,
        #[arg(long)]
        system: SystemArg,
        /// Spatial dimension of the test system
        #[arg(long)]
        n: usize,
        /// Polynomial degree (composed scheme)
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Stepsize as a fraction of the theoretical stability limit
        #[arg(long)]
        h_frac: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract and measure the stability polynomial of a Butcher tableau
    Tableau {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn error_code(e: &stabpoly::Error) -> &'static str {
    use stabpoly::Error::*;
    match e {
        DegreeTooSmall { .. } => "m_too_small",
        NonpositiveRoot(_) => "nonpositive_value",
        InconsistentSchedule(_) => "inconsistent_schedule",
        NotExplicit => "not_explicit",
        BadTableau(_) => "bad_tableau",
        DegenerateBox => "degenerate_box",
        GridTooLarge(_) => "grid_too_large",
        ZeroPolynomial => "zero_polynomial",
        NotConsistent => "not_consistent",
        EmptyGrid => "empty_grid",
        UnsupportedOracleDegree(_) => "unsupported_oracle_degree",
        ZeroInitialState => "zero_initial_state",
        DimensionMismatch(_) => "dimension_mismatch",
        BadPolynomial(_) => "bad_polynomial",
        BadPermutation => "bad_permutation",
    }
}

struct CliError {
    code: &'static str,
    detail: String,
}

impl From<stabpoly::Error> for CliError {
    fn from(e: stabpoly::Error) -> Self {
        CliError { code: error_code(&e), detail: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: "io", detail: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError { code: "bad_input", detail: e.to_string() }
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    let body = if body.ends_with('\n') { body.to_string() } else { format!("{body}\n") };
    match out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn read_poly(path: &Path) -> Result<RealPolynomial, CliError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn random_state(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Gen { family, m, out } => {
            let body = match family {
                Family::Disc => serde_json::to_string(&optimal::disc_optimal(m)?)?,
                Family::Parabolic => serde_json::to_string(&optimal::parabolic_optimal(m)?)?,
                Family::ParabolicSubsteps => {
                    serde_json::to_string(&optimal::parabolic_substeps(m)?)?
                }
                Family::SecondOrder => serde_json::to_string(&optimal::second_order_optimal(m)?)?,
                Family::Hyperbolic => serde_json::to_string(&optimal::hyperbolic_optimal(m)?)?,
            };
            emit(out.as_deref(), &body)
        }
        Cmd::Interval { poly, axis, eps, tol, out } => {
            let p = read_poly(&poly)?;
            let axis = match axis {
                AxisArg::Real => Axis::NegativeReal,
                AxisArg::Imag => Axis::Imaginary,
            };
            let width = stability::stability_width(&p, axis, eps, tol);
            emit(out.as_deref(), &serde_json::to_string(&json!({ "width": width }))?)
        }
        Cmd::Region { poly, boxspec, nx, ny, format, out } => {
            let p = read_poly(&poly)?;
            let parts: Vec<f64> = boxspec
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError { code: "bad_input", detail: format!("--box: {e}") })?;
            if parts.len() != 4 {
                return Err(CliError {
                    code: "bad_input",
                    detail: "--box expects re_min,re_max,im_min,im_max".into(),
                });
            }
            let grid = stability::region_scan(&p, parts[0], parts[1], parts[2], parts[3], nx, ny)?;
            let mut buf = Vec::new();
            match format {
                FormatArg::Csv => grid.write_csv(&mut buf)?,
                FormatArg::Pgm => grid.write_pgm(&mut buf)?,
            }
            emit(out.as_deref(), std::str::from_utf8(&buf).expect("ascii output"))
        }
        Cmd::Verify { check, m, target, lo, hi, step, out } => {
            let body = match check {
                CheckArg::Bernstein => {
                    let mut c = vec![0.0; m + 1];
                    c[m] = 1.0;
                    let ratio = verify::bernstein_ratio(
                        &RealPolynomial::new(c),
                        m,
                        stability::DEFAULT_SAMPLES,
                    )?;
                    json!({ "ratio": ratio, "pass": (ratio - 1.0).abs() <= 1e-9 })
                }
                CheckArg::Markov => {
                    let ratio = verify::markov_ratio(
                        &RealPolynomial::chebyshev_t(m),
                        m,
                        stability::DEFAULT_SAMPLES,
                    )?;
                    json!({ "ratio": ratio, "pass": (ratio - 1.0).abs() <= 1e-9 })
                }
                CheckArg::Alpha => {
                    let p = optimal::hyperbolic_optimal(m)?;
                    let alpha = verify::alpha_coefficient(&p)?;
                    let holds = verify::lemma_holds(&p)?;
                    let pass = holds && alpha >= 0.5 - 1e-12;
                    json!({ "alpha": alpha, "lemma_holds": holds, "pass": pass })
                }
                CheckArg::Oracle => {
                    let target = target.unwrap_or(TargetArg::NegativeReal);
                    let (t, reference) = match target {
                        TargetArg::NegativeReal => {
                            (verify::OracleTarget::NegativeReal, optimal::parabolic_optimal(m)?)
                        }
                        TargetArg::Imaginary => {
                            (verify::OracleTarget::Imaginary, optimal::hyperbolic_optimal(m)?)
                        }
                        TargetArg::Disc => (verify::OracleTarget::Disc, optimal::disc_optimal(m)?),
                    };
                    let ranges = vec![(lo, hi); m - 1];
                    let r = verify::oracle_search(m, t, &ranges, step)?;
                    let pass = (2..=m).all(|j| {
                        (r.best_coeffs[j] - reference.coeff(j)).abs() <= step + 1e-12
                    });
                    json!({
                        "best_width": r.best_width,
                        "best_coeffs": r.best_coeffs,
                        "grid_step": r.grid_step,
                        "evaluations": r.evaluations,
                        "pass": pass
                    })
                }
                CheckArg::QIdentity => {
                    let p = optimal::hyperbolic_optimal(m)?;
                    let q = verify::q_expansion(&p)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(0);
                    let mut max_error = 0.0f64;
                    for _ in 0..1000 {
                        let y: f64 = rng.gen_range(0.0..(4 * m * m) as f64);
                        let qv = q.eval_real(y);
                        let direct = p.abs2_at(num_complex::Complex64::new(0.0, y.sqrt()));
                        max_error = max_error.max((qv - direct).abs() / (1.0 + qv.abs()));
                    }
                    json!({ "max_error": max_error, "pass": max_error <= 1e-12 })
                }
            };
            emit(out.as_deref(), &serde_json::to_string(&body)?)
        }
        Cmd::Simulate { scheme, system, n, m, h_frac, steps, seed, out } => {
            let sys = match system {
                SystemArg::Heat => integrate::heat_system(n)?,
                SystemArg::Advection => integrate::advection_system(n, 1.0)?,
            };
            let x0 = random_state(sys.dimension(), seed);
            let lambda = sys.lambda_extreme();
            let record = match (scheme, system) {
                (SchemeArg::Composed, SystemArg::Heat) => {
                    let sched = optimal::parabolic_substeps(m)?;
                    let h = h_frac * 2.0 * (m * m) as f64 / lambda;
                    integrate::composed_euler_run(&sched, &sys, h, steps, &x0)?
                }
                (SchemeArg::Composed, SystemArg::Advection) => {
                    let p = optimal::hyperbolic_optimal(m)?;
                    let h = h_frac * (m - 1) as f64 / lambda;
                    integrate::polynomial_run(&p, &sys, h, steps, &x0)?
                }
                (SchemeArg::Tableau, _) => {
                    let t = ButcherTableau::rk4();
                    let p = stability::stability_polynomial(&t);
                    let axis = match system {
                        SystemArg::Heat => Axis::NegativeReal,
                        SystemArg::Advection => Axis::Imaginary,
                    };
                    let limit = stability::stability_width(
                        &p,
                        axis,
                        stability::DEFAULT_EPS,
                        stability::DEFAULT_TOL,
                    );
                    integrate::rk_run(&t, &sys, h_frac * limit / lambda, steps, &x0)?
                }
            };
            let mut buf = Vec::new();
            integrate::write_run_csv(&record, &mut buf)?;
            emit(out.as_deref(), std::str::from_utf8(&buf).expect("ascii output"))
        }
        Cmd::Tableau { file, out } => {
            let t: ButcherTableau = serde_json::from_str(&fs::read_to_string(&file)?)?;
            let p = stability::stability_polynomial(&t);
            let report = StabilityReport::measure(&p, p.degree());
            let body = json!({ "polynomial": p, "report": report });
            emit(out.as_deref(), &serde_json::to_string(&body)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.code, "detail": e.detail }));
            ExitCode::FAILURE
        }
    }
}
