//! Command-line front end for `padic-dynamics`.
//!
//! Exit status: 0 success, 1 malformed input, 2 hypothesis failure,
//! 3 mismatch with theorem, 4 precision exhaustion.

mod poly;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use padic_dynamics::dynamics::{
    check_hypotheses, conjugate_pair, fixed_point_count, make_lubin_tate, random_conjugator, tilt_valuation,
    v_of_m, verify_conjecture,
};
use padic_dynamics::json::{
    pair_to_json, series1_from_json, series1_to_json, series2_to_json, series_from_value, verdict_to_json,
};
use padic_dynamics::lubin::{formal_group, log_derivative_integral, lubin_exp, lubin_log, mult_by_m};
use padic_dynamics::newton::{newton_polygon, verify_iterate_polygon};
use padic_dynamics::{
    DynPair, Error, KScalar, OKScalar, Result, Ring, RingConfig, RingConfigSpec, TruncSeries1, TruncSeries2,
};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Ascii,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "padic-dynamics", version, about = "Exact computation in p-adic dynamical systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Ring configuration JSON file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Pair or series JSON: a path, `-` for stdin, or inline JSON.
    #[arg(long)]
    pub input: Option<String>,
    /// f as an integer polynomial, e.g. `3X+X^3`.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// u as an integer polynomial.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Residue characteristic, when no JSON config is given.
    #[arg(long)]
    pub p: Option<u64>,
    /// Ramification index (E defaults to X^e - p).
    #[arg(long)]
    pub e: Option<usize>,
    /// Residue degree.
    #[arg(long)]
    pub r: Option<usize>,
    /// Working precision n_prec: O_K is stored mod p^n_prec.
    #[arg(long = "p-precision")]
    pub p_precision: Option<u32>,
    /// Truncation degree.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lubin logarithm of f.
    Log(Input),
    /// Compositional inverse of the logarithm of f.
    Exp(Input),
    /// Formal group law with f as an endomorphism.
    FormalGroup(Input),
    /// The series commuting with f with linear coefficient m.
    MultByM {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Newton polygon of the n-th iterate of f.
    NewtonPolygon {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        iterate: u32,
    },
    /// Checks the polygon of f^k against (p^i, e(k-i)) for k = 1..=n.
    VerifyIterates {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        iterate: u32,
    },
    /// Fixed points of u^m for m = 1..=M, against p^v(m).
    FixedPoints {
        #[command(flatten)]
        input: Input,
        /// Largest m (defaults to p^2).
        #[arg(long)]
        m: Option<u64>,
    },
    /// Hypothesis report for a pair.
    Hypotheses(Input),
    /// Builds F from f and checks integrality and the endomorphism property.
    VerifyConjecture(Input),
    /// Lubin-Tate pair f = pX + middle + X^p, u = [m]_f.
    MakeLubinTate {
        #[command(flatten)]
        input: Input,
        /// Unit of Z_p (defaults to 1 + p).
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
    /// Conjugates a pair by a seeded random w with w'(0) = 1.
    Conjugate {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random coefficients of w (defaults to degree - 1).
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Valuation of the tilt of a uniformizer, as a fraction.
    TiltValuation(Input),
}

enum Output {
    Json(Value),
    Text(String),
}

struct Outcome {
    output: Output,
    status: i32,
    note: Option<String>,
}

impl Outcome {
    fn ok(output: Output) -> Self {
        Outcome {
            output,
            status: 0,
            note: None,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed(_) | Error::InvalidConfig(_) | Error::InvalidTemplate(_) | Error::ConfigMismatch => 1,
        Error::MismatchWithTheorem(_) => 3,
        Error::PrecisionExhausted(_) | Error::TruncationTooShallow { .. } => 4,
        Error::NotAUnit
        | Error::NotInvertible(_)
        | Error::RootOfUnityLinearCoefficient { .. }
        | Error::NonIntegralSeries(_)
        | Error::PreconditionFailed(_)
        | Error::NotCommuting(_) => 2,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let text = match outcome.output {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
                Output::Text(t) => t,
            };
            let _ = out.write_all(text.as_bytes());
            if let Some(note) = outcome.note {
                let _ = writeln!(err, "{note}");
            }
            outcome.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::Malformed(e.to_string())
}

fn payload(input: &Input) -> Result<Option<Value>> {
    let Some(src) = &input.input else {
        return Ok(None);
    };
    let text = if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(malformed)?;
        s
    } else if src.trim_start().starts_with('{') {
        src.clone()
    } else {
        std::fs::read_to_string(src).map_err(|e| malformed(format!("{src}: {e}")))?
    };
    serde_json::from_str(&text).map(Some).map_err(malformed)
}

fn load_ring(input: &Input, payload: Option<&Value>) -> Result<Ring> {
    let file = match &input.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
            Some(serde_json::from_str::<Value>(&text).map_err(malformed)?)
        }
        None => None,
    };
    let json = file.as_ref().or_else(|| payload.and_then(|v| v.get("config")));
    let mut spec: RingConfigSpec = match json {
        Some(v) => {
            if input.p.is_some() || input.e.is_some() || input.r.is_some() {
                return Err(Error::Malformed("--p, --e and --r conflict with a JSON config".into()));
            }
            serde_json::from_value(v.clone()).map_err(malformed)?
        }
        None => RingConfigSpec {
            p: input
                .p
                .ok_or_else(|| Error::Malformed("no ring: give --config, a JSON config or --p".into()))?,
            r: input.r.unwrap_or(1),
            e: input.e.unwrap_or(1),
            h: None,
            eisenstein: None,
            n_prec: 20,
        },
    };
    if let Some(n) = input.p_precision {
        spec.n_prec = n;
    }
    RingConfig::from_spec(&spec)
}

/// A series and whether it is an exact polynomial, which may be padded
/// with zeros.
struct Series {
    s: TruncSeries1,
    exact: bool,
}

impl Series {
    fn at_degree(&self, d: usize) -> TruncSeries1 {
        if self.exact || d <= self.s.degree() {
            self.s.truncate(d)
        } else {
            self.s.clone()
        }
    }
}

struct Loaded {
    ring: Ring,
    f: Option<Series>,
    u: Option<Series>,
}

fn load(input: &Input) -> Result<Loaded> {
    let v = payload(input)?;
    let ring = load_ring(input, v.as_ref())?;
    let polys: Vec<Option<Vec<i64>>> = [&input.f, &input.u]
        .iter()
        .map(|t| t.as_deref().map(poly::parse).transpose())
        .collect::<Result<_>>()?;
    let poly_degree = polys.iter().flatten().map(|c| c.len() - 1).max().unwrap_or(1).max(1);
    let series = |key: &str, poly: &Option<Vec<i64>>| -> Result<Option<Series>> {
        let json = v.as_ref().and_then(|v| v.get(key));
        match (poly, json) {
            (Some(_), Some(_)) => Err(Error::Malformed(format!("{key} given both as a flag and in the input"))),
            (Some(c), None) => {
                let d = input.degree.unwrap_or(poly_degree);
                if d == 0 {
                    return Err(Error::Malformed("degree must be positive".into()));
                }
                Ok(Some(Series {
                    s: TruncSeries1::from_int_poly(&ring, c, d)?,
                    exact: c.len() <= d + 1,
                }))
            }
            (None, Some(j)) => {
                let s = series1_from_json(&ring, &series_from_value(j)?)?;
                let s = match input.degree {
                    Some(d) if d < s.degree() => s.truncate(d),
                    _ => s,
                };
                Ok(Some(Series { s, exact: false }))
            }
            (None, None) => Ok(None),
        }
    };
    let f = series("f", &polys[0])?;
    let u = series("u", &polys[1])?;
    Ok(Loaded { ring, f, u })
}

fn need_f(l: &Loaded) -> Result<&Series> {
    l.f.as_ref()
        .ok_or_else(|| Error::Malformed("no f: give --f or --input with an \"f\" series".into()))
}

fn load_pair(input: &Input) -> Result<DynPair> {
    let l = load(input)?;
    let f = need_f(&l)?;
    let u = l
        .u
        .as_ref()
        .ok_or_else(|| Error::Malformed("no u: give --u or --input with a \"u\" series".into()))?;
    let d = f.s.degree().max(u.s.degree());
    DynPair::new(f.at_degree(d), u.at_degree(d))
}

fn coeff_cells(c: &KScalar) -> String {
    let val: Vec<String> = c.unit_part().signed_components().iter().map(i64::to_string).collect();
    format!("{}\t{}\t{}", c.shift(), c.prec(), val.join(","))
}

fn series_tsv(s: &TruncSeries1) -> String {
    let mut t = String::from("i\tshift\tprec\tval\n");
    for i in 1..=s.degree() {
        t += &format!("{i}\t{}\n", coeff_cells(s.coeff(i)));
    }
    t
}

fn series2_tsv(s: &TruncSeries2) -> String {
    let mut t = String::from("i\tj\tshift\tprec\tval\n");
    for ((i, j), c) in s.terms() {
        t += &format!("{i}\t{j}\t{}\n", coeff_cells(c));
    }
    t
}

fn unsupported(cmd: &str, format: Format) -> Error {
    Error::Malformed(format!("{cmd} does not support --format {format:?}").to_lowercase())
}

fn series_output(cmd: &str, input: &Input, ring: &Ring, key: &str, s: &TruncSeries1, extra: Value) -> Result<Output> {
    match input.format {
        Format::Json => {
            let mut v = json!({ "config": ring.to_spec(), key: series1_to_json(s) });
            if let (Value::Object(m), Value::Object(x)) = (&mut v, extra) {
                m.extend(x);
            }
            Ok(Output::Json(v))
        }
        Format::Tsv => Ok(Output::Text(series_tsv(s))),
        f => Err(unsupported(cmd, f)),
    }
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Log(input) => {
            let l = load(input)?;
            let lr = lubin_log(&need_f(&l)?.s)?;
            let extra = json!({
                "lambda": lr.lambda.to_string(),
                "certified_prec": lr.certified_prec(),
                "precision_loss_profile": lr.precision_loss_profile,
                "derivative_integral": log_derivative_integral(&lr.log),
            });
            series_output("log", input, &l.ring, "log", &lr.log, extra).map(Outcome::ok)
        }
        Command::Exp(input) => {
            let l = load(input)?;
            let exp = lubin_exp(&lubin_log(&need_f(&l)?.s)?)?;
            let extra = json!({ "certified_prec": exp.certified_prec() });
            series_output("exp", input, &l.ring, "exp", &exp, extra).map(Outcome::ok)
        }
        Command::FormalGroup(input) => {
            let l = load(input)?;
            let law = formal_group(&need_f(&l)?.s)?;
            let output = match input.format {
                Format::Json => Output::Json(json!({
                    "config": l.ring.to_spec(),
                    "F": series2_to_json(&law),
                    "integral": law.is_integral(),
                    "certified_prec": law.certified_prec(),
                })),
                Format::Tsv => Output::Text(series2_tsv(&law)),
                f => return Err(unsupported("formal-group", f)),
            };
            Ok(Outcome::ok(output))
        }
        Command::MultByM { input, m } => {
            let l = load(input)?;
            let s = mult_by_m(&need_f(&l)?.s, &OKScalar::from_int(&l.ring, *m))?;
            series_output("mult-by-m", input, &l.ring, "f", &s, json!({ "m": m })).map(Outcome::ok)
        }
        Command::NewtonPolygon { input, iterate } => {
            let l = load(input)?;
            let f = need_f(&l)?;
            let d = match (input.degree, f.s.weierstrass_degree()?) {
                (Some(d), _) => d,
                (None, Some(w)) => w
                    .checked_pow(*iterate)
                    .ok_or_else(|| Error::PreconditionFailed("degree overflows".into()))?,
                (None, None) => f.s.degree(),
            };
            let it = f.at_degree(d).iterate(*iterate as u64);
            let np = newton_polygon(&it)?;
            let output = match input.format {
                Format::Json => {
                    let mut v = np.to_json();
                    v["points"] = json!(np.points());
                    v["iterate"] = json!(iterate);
                    Output::Json(v)
                }
                Format::Tsv => {
                    let mut t = String::from("index\tval\tcertified\n");
                    for v in &np.vertices {
                        t += &format!("{}\t{}\t{}\n", v.index, v.val, v.certified);
                    }
                    Output::Text(t)
                }
                Format::Ascii => Output::Text(np.render_ascii()),
                Format::Svg => Output::Text(np.render_svg()),
            };
            Ok(Outcome::ok(output))
        }
        Command::VerifyIterates { input, iterate } => {
            let l = load(input)?;
            let f = need_f(&l)?;
            let p = l.ring.p() as usize;
            let need = p
                .checked_pow(*iterate)
                .ok_or_else(|| Error::PreconditionFailed("p^n overflows".into()))?;
            let f = f.at_degree(need.max(f.s.degree()));
            let reports = (1..=*iterate)
                .map(|k| verify_iterate_polygon(&f, k))
                .collect::<Result<Vec<_>>>()?;
            let bad: Vec<u32> = reports.iter().filter(|r| !r.matches).map(|r| r.n).collect();
            let output = match input.format {
                Format::Json => Output::Json(json!({ "reports": reports })),
                Format::Tsv => {
                    let mut t = String::from("n\tmatches\tfound\texpected\n");
                    for r in &reports {
                        t += &format!("{}\t{}\t{:?}\t{:?}\n", r.n, r.matches, r.found, r.expected);
                    }
                    Output::Text(t)
                }
                f => return Err(unsupported("verify-iterates", f)),
            };
            Ok(Outcome {
                output,
                status: if bad.is_empty() { 0 } else { 3 },
                note: (!bad.is_empty()).then(|| format!("mismatch with theorem at n = {bad:?}; f = {f}")),
            })
        }
        Command::FixedPoints { input, m } => {
            let pair = load_pair(input)?;
            let p = pair.ring().p();
            let top = m.unwrap_or(p * p);
            let rows = (1..=top)
                .map(|m| Ok((m, v_of_m(&pair, m as i64)?, fixed_point_count(&pair, m)?)))
                .collect::<Result<Vec<_>>>()?;
            let output = match input.format {
                Format::Json => Output::Json(json!(rows
                    .iter()
                    .map(|(m, v, c)| json!({ "m": m, "v": v, "fixed_points": c }))
                    .collect::<Vec<_>>())),
                Format::Tsv => {
                    let mut t = String::from("m\tv(m)\tfixed_points\n");
                    for (m, v, c) in rows {
                        t += &format!("{m}\t{v}\t{c}\n");
                    }
                    Output::Text(t)
                }
                f => return Err(unsupported("fixed-points", f)),
            };
            Ok(Outcome::ok(output))
        }
        Command::Hypotheses(input) => {
            let pair = load_pair(input)?;
            let report = check_hypotheses(&pair);
            let output = match input.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report).expect("serializable");
                    v["all_true"] = json!(report.all_true());
                    v["normalized"] = json!(pair.is_normalized());
                    v["ell"] = json!(pair.ell());
                    Output::Json(v)
                }
                Format::Tsv => {
                    let v = serde_json::to_value(&report).expect("serializable");
                    let mut t = String::from("hypothesis\tverdict\tprecision\n");
                    for (name, c) in v.as_object().expect("struct") {
                        t += &format!("{name}\t{}\t{}\n", c["verdict"].as_str().unwrap_or(""), c["precision"]);
                    }
                    Output::Text(t)
                }
                f => return Err(unsupported("hypotheses", f)),
            };
            let failed = report.any_false();
            Ok(Outcome {
                output,
                status: if failed { 2 } else { 0 },
                note: failed.then(|| "hypothesis failure".to_string()),
            })
        }
        Command::VerifyConjecture(input) => {
            let pair = load_pair(input)?;
            let v = verify_conjecture(&pair, input.degree.unwrap_or(pair.degree()))?;
            match input.format {
                Format::Json => {
                    let mut j = verdict_to_json(&v);
                    j["config"] = json!(pair.ring().to_spec());
                    Ok(Outcome::ok(Output::Json(j)))
                }
                f => Err(unsupported("verify-conjecture", f)),
            }
        }
        Command::MakeLubinTate { input, m } => {
            if input.input.is_some() || input.u.is_some() {
                return Err(Error::Malformed("make-lubin-tate takes a ring and optionally --f".into()));
            }
            let ring = load_ring(input, None)?;
            let p = ring.p() as usize;
            let degree = input.degree.unwrap_or(p.max(20));
            let middle = match &input.f {
                Some(text) => {
                    let mut c = poly::parse(text)?;
                    c.resize(c.len().max(p + 1), 0);
                    if c[0] != 0 || c[1] != p as i64 || c[p] < 1 {
                        return Err(Error::InvalidTemplate(format!("{text} is not pX + ... + X^{p}")));
                    }
                    c[p] -= 1;
                    c.iter()
                        .enumerate()
                        .skip(2)
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| (i, OKScalar::from_int(&ring, x)))
                        .collect()
                }
                None => Vec::new(),
            };
            let a = OKScalar::from_int(&ring, m.unwrap_or(1 + p as i64));
            let pair = make_lubin_tate(&ring, &middle, &a, degree)?;
            pair_output("make-lubin-tate", input, &pair)
        }
        Command::Conjugate { input, seed, terms } => {
            let pair = load_pair(input)?;
            let d = pair.degree();
            let w = random_conjugator(pair.ring(), d, terms.unwrap_or(d.saturating_sub(1)), *seed);
            log::info!("w = {w}");
            pair_output("conjugate", input, &conjugate_pair(&pair, &w)?)
        }
        Command::TiltValuation(input) => {
            let ring = load_ring(input, payload(input)?.as_ref())?;
            let t = tilt_valuation(&ring).to_string();
            match input.format {
                Format::Json => Ok(Outcome::ok(Output::Json(json!(t)))),
                Format::Tsv => Ok(Outcome::ok(Output::Text(t + "\n"))),
                f => Err(unsupported("tilt-valuation", f)),
            }
        }
    }
}

fn pair_output(cmd: &str, input: &Input, pair: &DynPair) -> Result<Outcome> {
    match input.format {
        Format::Json => Ok(Outcome::ok(Output::Json(
            serde_json::to_value(pair_to_json(pair)).expect("serializable"),
        ))),
        f => Err(unsupported(cmd, f)),
    }
}
