//! Command-line front end. Exit codes: 0 success, 1 failed check or
//! computation, 2 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bessel::{self, SeriesTruncation, SeriesValue};
use crate::families::FamilySpec;
use crate::gauss::{self, parse_complex, IntegralId, ParamKind, ParamSet, QuadratureConfig};
use crate::operational::{signed_umbral_number, umbral_number};
use crate::polycore::{ComplexFloat, MultiPoly};
use crate::verify::{run_suite, Suite, DEFAULT_SEED};

/// Environment variable capping worker threads (0 or unset = automatic).
pub const THREADS_ENV: &str = "HKDF_KIT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "hkdf-kit", version, about = "Exact Hermite polynomial families, identities and Gaussian integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BesselFn {
    J,
    I,
    J2,
    Ji4,
    Hj,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the exact coefficients of a family member, e.g. `hkdf2:n=5,m=3`.
    Family {
        id: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate a family member at a point, e.g. `--at x=1/2,y=1-i`.
    Eval {
        id: String,
        #[arg(long)]
        at: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run an identity suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Closed form and quadrature of a catalog integral.
    Integrate {
        #[arg(long)]
        id: String,
        #[arg(long)]
        params: String,
        /// Exit with status 1 if the two sides disagree.
        #[arg(long)]
        verify: bool,
        /// Relative tolerance; defaults by integration dimension.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Truncated-series Bessel functions with their tail bounds.
    Bessel {
        #[arg(long = "fn", value_enum)]
        function: BesselFn,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
        #[arg(long = "K")]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Hermite numbers r!/(r/m)! for r = 0..count−1.
    Sequence {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        count: u32,
        /// Apply the sign (−1)^{r/m}.
        #[arg(long)]
        signed: bool,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<bool, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    let result = match cli.command {
        Command::Family { id, format } => family(&id, format, out),
        Command::Eval { id, at, format } => eval(&id, &at, format, out),
        Command::Verify { suite, seed, format } => verify(&suite, seed, format, out),
        Command::Integrate { id, params, verify, tol } => integrate(&id, &params, verify, tol, out),
        Command::Bessel { function, n, x, y, k, format } => bessel_cmd(function, n, x, y, k, format, out),
        Command::Sequence { order, count, signed } => sequence(order, count, signed, out),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Check(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))?;
    if n > 0 {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure::Check(e.to_string()))
}

fn complex_json(z: ComplexFloat) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn build_family(id: &str) -> Result<MultiPoly, Failure> {
    id.parse::<FamilySpec>().and_then(|s| s.build()).map_err(usage)
}

fn family(id: &str, format: Format, out: &mut dyn Write) -> Outcome {
    let p = build_family(id)?;
    let text = match format {
        Format::Json => p.to_json(),
        Format::Text => p.to_string(),
        Format::Csv => {
            let rec = p.to_record();
            let mut lines = vec![rec.vars.iter().cloned().chain(["re".into(), "im".into()]).collect::<Vec<_>>().join(",")];
            for t in &rec.terms {
                let mut row: Vec<String> = t.exponents.iter().map(u32::to_string).collect();
                row.push(t.re.clone());
                row.push(t.im.clone());
                lines.push(row.join(","));
            }
            lines.join("\n")
        }
    };
    emit(out, &text)?;
    Ok(true)
}

fn eval(id: &str, at: &str, format: Format, out: &mut dyn Write) -> Outcome {
    let p = build_family(id)?;
    let mut values: Vec<(String, ComplexFloat)> = Vec::new();
    for item in at.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| usage(format!("expected key=value, got `{item}`")))?;
        let k = k.trim();
        if p.var_index(k).is_none() {
            return Err(usage(format!("`{id}` has no variable `{k}`")));
        }
        values.push((k.to_string(), parse_complex(v).map_err(usage)?));
    }
    let assignment: Vec<(&str, ComplexFloat)> = values.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let z = p.eval(&assignment).map_err(usage)?;
    let text = match format {
        Format::Json => json!({ "id": id, "value": complex_json(z) }).to_string(),
        Format::Csv => format!("re,im\n{},{}", z.re, z.im),
        Format::Text => format!("{} {}", z.re, z.im),
    };
    emit(out, &text)?;
    Ok(true)
}

fn verify(suite: &str, seed: u64, format: Format, out: &mut dyn Write) -> Outcome {
    let suite: Suite = suite.parse().map_err(usage)?;
    let checks = run_suite(suite, seed);
    let failed = checks.iter().filter(|c| !c.pass).count();
    match format {
        Format::Json => {
            let v = json!({
                "suite": suite.name(),
                "seed": seed,
                "checks": checks,
                "passed": checks.len() - failed,
                "failed": failed,
            });
            emit(out, &v.to_string())?;
        }
        Format::Csv => {
            emit(out, "suite,name,pass,detail")?;
            for c in &checks {
                emit(out, &format!("{},{},{},\"{}\"", c.suite, c.name, c.pass, c.detail.replace('"', "\"\"")))?;
            }
        }
        Format::Text => {
            for c in &checks {
                emit(out, &c.to_string())?;
            }
            emit(out, &format!("{} passed, {} failed (suite {}, seed {seed})", checks.len() - failed, failed, suite))?;
        }
    }
    Ok(failed == 0)
}

fn params_json(id: IntegralId, p: &ParamSet) -> Value {
    let mut m = Map::new();
    for &(k, kind) in id.schema() {
        let Some(v) = p.get(k) else { continue };
        let val = if kind == ParamKind::Degree {
            json!(v.re as u64)
        } else if v.im == 0.0 {
            json!(v.re)
        } else {
            complex_json(v)
        };
        m.insert(k.to_string(), val);
    }
    Value::Object(m)
}

fn integrate(id: &str, params: &str, check: bool, tol: Option<f64>, out: &mut dyn Write) -> Outcome {
    let id: IntegralId = id.parse().map_err(usage)?;
    let p = ParamSet::parse(params).map_err(usage)?;
    p.validate(id).map_err(usage)?;
    let tol = tol.unwrap_or_else(|| id.default_rel_tol());
    if !(tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let cfg = QuadratureConfig::for_dimension(id.dimension());
    let res = match gauss::verify(id, &p, &cfg, tol) {
        Ok(r) => r,
        Err(e @ gauss::IntegralError::ComplexWeight { .. }) => return Err(usage(e)),
        Err(e) => return Err(Failure::Check(e.to_string())),
    };
    let v = json!({
        "id": id.name(),
        "params": params_json(id, &p),
        "closed_form": complex_json(res.closed_form_value),
        "oracle": complex_json(res.oracle_value),
        "error_estimate": res.oracle_error_estimate,
        "relative_discrepancy": res.relative_discrepancy,
        "pass": res.pass,
    });
    emit(out, &v.to_string())?;
    Ok(res.pass || !check)
}

fn bessel_cmd(
    function: BesselFn,
    n: i64,
    x: f64,
    y: Option<f64>,
    k: Option<u32>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let needs_y = matches!(function, BesselFn::J2 | BesselFn::Ji4 | BesselFn::Hj);
    let y = match (needs_y, y) {
        (true, Some(y)) => y,
        (true, None) => return Err(usage("--y is required for this function")),
        (false, Some(_)) => return Err(usage("--y is not used by this function")),
        (false, None) => 0.0,
    };
    let default = if function == BesselFn::Hj { SeriesTruncation::s_sums() } else { SeriesTruncation::l_sums() };
    let trunc = k.map(|k| SeriesTruncation { k, ..default }).unwrap_or(default);
    let r: Result<SeriesValue, bessel::BesselError> = match function {
        BesselFn::J => bessel::bessel_j(n, x, trunc),
        BesselFn::I => bessel::bessel_i(n, x, trunc),
        BesselFn::J2 => bessel::bessel_2var(n, x, y, trunc),
        BesselFn::Ji4 => bessel::ji4(n, x, y, trunc),
        BesselFn::Hj => {
            let n = u32::try_from(n).map_err(|_| usage("--n must be non-negative for hj"))?;
            bessel::hermite_bessel(n, x, y, trunc)
        }
    };
    let v = r.map_err(|e| Failure::Check(e.to_string()))?;
    let text = match format {
        Format::Json => json!({ "value": v.value, "tail_bound": v.tail_bound, "K": v.k }).to_string(),
        Format::Csv => format!("value,tail_bound,K\n{},{},{}", v.value, v.tail_bound, v.k),
        Format::Text => format!("value {}\ntail_bound {:e}", v.value, v.tail_bound),
    };
    emit(out, &text)?;
    Ok(true)
}

fn sequence(order: u32, count: u32, signed: bool, out: &mut dyn Write) -> Outcome {
    if order < 2 {
        return Err(usage("--order must be at least 2"));
    }
    if count < 1 {
        return Err(usage("--count must be at least 1"));
    }
    for r in 0..count {
        let v = if signed { signed_umbral_number(order, r) } else { umbral_number(order, r) };
        emit(out, &v.to_string())?;
    }
    Ok(true)
}
