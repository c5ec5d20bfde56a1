mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fatflat::bounds::{bound_report, Verdict};
use fatflat::checks::{run_checks, CheckConfig};
use fatflat::classify::{classify, exact_value};
use fatflat::divisors::{lower_bound, verify_nef};
use fatflat::field::{format_rational, is_prime, DEFAULT_PRIMES};
use fatflat::interp::{alpha_symbolic, membership, AlphaOptions, AlphaRecord};
use fatflat::json;
use fatflat::projective::random_general_hyperplanes;
use fatflat::scheme::{
    build_fat_flat, build_integer_target, build_plane_family, build_quasi_star, build_rational_target,
    generic_extras, star_configuration, ExtraSpec, PlaneFamily,
};
use fatflat::Error;

#[derive(Parser, Debug)]
#[command(name = "fatflat", version, about = "Initial degrees and Waldschmidt constants of fat flat subschemes")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Modp)]
    mode: Mode,
    /// Two primes for modp mode, as `p1,p2`.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Degree cap for the initial degree search.
    #[arg(long, global = true)]
    cap: Option<u32>,
    /// Output file (a directory for `sweep`).
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Rational,
    Modp,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a scheme or a configuration of plane points.
    Build(BuildArgs),
    /// Initial degrees of symbolic powers.
    Alpha {
        /// Scheme or plane points file.
    scheme: PathBuf,
        #[arg(long, default_value_t = 1)]
        k_min: u32,
        #[arg(long, default_value_t = 4)]
        k_max: u32,
    },
    /// Upper and lower bounds on the Waldschmidt constant.
    Bounds {
        /// Scheme or plane points file.
    scheme: PathBuf,
        #[arg(long, default_value_t = 4)]
        k_max: u32,
        /// Plane points the certificate refers to.
        #[arg(long, requires = "certificate")]
        points: Option<PathBuf>,
        #[arg(long, requires = "points")]
        certificate: Option<PathBuf>,
    },
    /// Whether a form lies in a symbolic power.
    Member {
        /// Scheme or plane points file.
    scheme: PathBuf,
        form: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// Check a nef certificate against plane points.
    NefCheck { points: PathBuf, certificate: PathBuf },
    /// Classify non-reduced plane points against the 5/2 threshold.
    Classify { points: PathBuf },
    /// Run the verification suite.
    VerifyPaper {
        /// Comma-separated check ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Number of random instances in the property check.
        #[arg(long, default_value_t = 200)]
        instances: usize,
    },
    /// Compute initial degrees over a grid of star configurations.
    Sweep {
        grid: PathBuf,
        /// Record wall-clock times (makes the output nondeterministic).
        #[arg(long)]
        timing: bool,
        /// Worker threads; all cores when absent.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuildKind {
    Star,
    Fatflat,
    TheoremA,
    QuasiStar,
    RationalTarget,
    ThmbFamily,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(value_enum)]
    kind: BuildKind,
    /// Ambient dimension; for `thmb-family --case z`, the number of points.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    e: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Plane family: a, b, c, z, w-prime, z-prime, w-double-prime, v-prime.
    #[arg(long)]
    case: Option<String>,
    /// Multiplicities for `v-prime`, comma-separated.
    #[arg(long, value_delimiter = ',')]
    mults: Vec<u32>,
    /// Generic extra subspace `hyperplane:codim:multiplicity` (hyperplanes count from 1).
    #[arg(long = "extra")]
    extras: Vec<String>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unresolved { .. } => 3,
            Error::Certificate(_) => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

pub(crate) type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult<u8> {
    let options = alpha_options(cli)?;
    match &cli.command {
        Command::Build(args) => {
            let value = build(args, cli.seed)?;
            emit(cli, &value, None)?;
            Ok(0)
        }
        Command::Alpha { scheme, k_min, k_max } => {
            let scheme = read_scheme(scheme)?;
            if *k_min < 1 || k_min > k_max {
                return Err(Failure::validation(format!("need 1 <= k-min <= k-max, got {k_min}..{k_max}")));
            }
            let records: Vec<AlphaRecord> =
                (*k_min..=*k_max).map(|k| alpha_symbolic(&scheme, k, &options)).collect::<Result<_, _>>()?;
            let value = Value::Array(records.iter().map(json::alpha_record_to_json).collect());
            emit(cli, &value, Some(&alpha_table(&records)))?;
            Ok(if records.iter().any(|r| r.alpha.is_none()) { 3 } else { 0 })
        }
        Command::Bounds { scheme, k_max, points, certificate } => {
            let scheme = read_scheme(scheme)?;
            let extra = match (points, certificate) {
                (Some(p), Some(c)) => Some((
                    json::points_from_json(&read_json(p)?)?,
                    json::certificate_from_json(&read_json(c)?)?,
                )),
                _ => None,
            };
            let report = bound_report(&scheme, *k_max, &options, extra.as_ref().map(|(p, c)| (p, c)))?;
            let summary = match &report.verdict {
                Verdict::Exact(v) => format!("exact {}", format_rational(v)),
                Verdict::Interval { lower, upper } => format!(
                    "between {} and {}",
                    format_rational(lower),
                    upper.as_ref().map_or_else(|| "?".to_string(), format_rational)
                ),
            };
            let text = format!(
                "{}\nlower bound {} ({})\nwaldschmidt constant: {summary}\n",
                alpha_table(&report.table).trim_end(),
                format_rational(&report.lower.value),
                report.lower.certificate.name()
            );
            emit(cli, &json::bound_report_to_json(&report), Some(&text))?;
            Ok(0)
        }
        Command::Member { scheme, form, k } => {
            let scheme = read_scheme(scheme)?;
            let f = json::form_from_json(&read_json(form)?)?;
            let member = membership(&f, &scheme, *k)?;
            emit(cli, &json!({ "k": k, "member": member }), Some(&format!("{member}\n")))?;
            Ok(0)
        }
        Command::NefCheck { points, certificate } => {
            let z = json::points_from_json(&read_json(points)?)?;
            let cert = json::certificate_from_json(&read_json(certificate)?)?;
            verify_nef(&cert, &z)?;
            let b = lower_bound(&z, &cert)?;
            let value = json!({ "nef": true, "lower_bound": json::rational_to_json(&b) });
            emit(cli, &value, Some(&format!("nef; lower bound {}\n", format_rational(&b))))?;
            Ok(0)
        }
        Command::Classify { points } => {
            let z = json::points_from_json(&read_json(points)?)?;
            let c = classify(&z)?;
            let claim = match exact_value(&c, &z)? {
                fatflat::classify::ValueClaim::Exact(v) => format!("constant exactly {}", format_rational(&v)),
                fatflat::classify::ValueClaim::AtLeast(v) => format!("constant at least {}", format_rational(&v)),
            };
            emit(cli, &json::classification_to_json(&c, &z)?, Some(&format!("{}: {claim}\n", c.name())))?;
            Ok(0)
        }
        Command::VerifyPaper { only, instances } => {
            let primes = options.mode.primes().unwrap_or(DEFAULT_PRIMES);
            let config = CheckConfig { primes, seed: cli.seed, property_instances: *instances };
            let outcomes = run_checks(&config, only.as_deref())?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for o in &outcomes {
                text.push_str(&format!(
                    "{} [{}] {}: {}\n",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.criterion,
                    o.id,
                    o.detail
                ));
                rows.push(json!({ "id": o.id, "criterion": o.criterion, "passed": o.passed, "detail": o.detail }));
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            text.push_str(&format!("{passed} of {} checks passed\n", outcomes.len()));
            match &cli.output {
                Some(path) => {
                    write_json(path, &Value::Array(rows))?;
                    print!("{text}");
                }
                None => print!("{text}"),
            }
            Ok(if passed == outcomes.len() { 0 } else { 4 })
        }
        Command::Sweep { grid, timing, jobs } => {
            let dir = cli.output.as_ref().ok_or_else(|| Failure::validation("sweep needs -o <dir>"))?;
            let (summary, unresolved) = sweep::run(grid, dir, &options, cli.seed, *timing, *jobs)?;
            print!("{summary}");
            Ok(if unresolved > 0 { 3 } else { 0 })
        }
    }
}

fn alpha_options(cli: &Cli) -> CliResult<AlphaOptions> {
    let mut options = match cli.mode {
        Mode::Rational => AlphaOptions::rational(),
        Mode::Modp => {
            let primes = match &cli.primes {
                None => DEFAULT_PRIMES,
                Some(p) if p.len() == 2 && p.iter().all(|&q| is_prime(q)) && p[0] != p[1] => [p[0], p[1]],
                Some(p) => return Err(Failure::validation(format!("--primes needs two distinct primes, got {p:?}"))),
            };
            AlphaOptions::modular(primes)
        }
    };
    if let Some(cap) = cli.cap {
        options = options.with_cap(cap);
    }
    Ok(options)
}

fn build(args: &BuildArgs, seed: u64) -> CliResult<Value> {
    let star = |n: usize, e: usize, s: usize| -> CliResult<_> {
        Ok(star_configuration(n, e, s, random_general_hyperplanes(n, s, seed)?)?)
    };
    let scheme = match args.kind {
        BuildKind::Star => {
            let st = star(args.n.unwrap_or(2), args.e.unwrap_or(2), args.s.unwrap_or(3))?;
            st.fat(args.m.unwrap_or(1))
        }
        BuildKind::Fatflat => {
            let st = star(args.n.unwrap_or(2), args.e.unwrap_or(2), args.s.unwrap_or(3))?;
            let specs = parse_extras(&args.extras)?;
            let extras = generic_extras(&st, &specs, seed)?;
            build_fat_flat(&st, args.m.unwrap_or(2), &extras)?
        }
        BuildKind::TheoremA => {
            let s = args.s.unwrap_or(4);
            let t = args.t.unwrap_or(1);
            let d = args.d.unwrap_or(s as u64 * t as u64);
            build_integer_target(args.n.unwrap_or(3), d, s, t, args.e.unwrap_or(2), &parse_extras(&args.extras)?, seed)?
        }
        BuildKind::QuasiStar => build_quasi_star(args.s.unwrap_or(3), seed)?,
        BuildKind::RationalTarget => {
            let a = args.a.ok_or_else(|| Failure::validation("rational-target needs --a"))?;
            let b = args.b.ok_or_else(|| Failure::validation("rational-target needs --b"))?;
            build_rational_target(a, b, args.n, seed)?
        }
        BuildKind::ThmbFamily => {
            let case = args.case.as_deref().ok_or_else(|| Failure::validation("thmb-family needs --case"))?;
            let (r, s) = match case {
                "a" => (args.r.unwrap_or(2), args.s.unwrap_or(1)),
                _ => (args.r.unwrap_or(1), args.s.unwrap_or(1)),
            };
            let family = PlaneFamily::from_case(case, r, s, args.n.unwrap_or(5), &args.mults)?;
            return Ok(json::points_to_json(&build_plane_family(&family, seed)?));
        }
    };
    Ok(json::scheme_to_json(&scheme))
}

fn parse_extras(specs: &[String]) -> CliResult<Vec<ExtraSpec>> {
    specs
        .iter()
        .map(|spec| {
            let parts: Vec<&str> = spec.split(':').collect();
            let nums: Option<Vec<usize>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
            match nums.as_deref() {
                Some(&[h, codim, mult]) if h >= 1 => {
                    Ok(ExtraSpec { hyperplane: h - 1, codim, multiplicity: mult as u32 })
                }
                _ => Err(Failure::validation(format!("bad --extra {spec:?}; expected hyperplane:codim:multiplicity"))),
            }
        })
        .collect()
}

fn alpha_table(records: &[AlphaRecord]) -> String {
    let mut out = String::from("k\talpha\talpha/k\tmode\n");
    for r in records {
        let (a, ratio) = match r.alpha {
            Some(a) => (a.to_string(), format_rational(&fatflat::field::rational(a as i64, r.k as i64))),
            None => (format!(">{}", r.degree_cap), "?".to_string()),
        };
        out.push_str(&format!("{}\t{a}\t{ratio}\t{}\n", r.k, r.field_mode.name()));
    }
    out
}

/// A scheme file, or a plane points file read as its scheme.
fn read_scheme(path: &Path) -> CliResult<fatflat::scheme::FatFlatScheme> {
    let v = read_json(path)?;
    if v.get("points").is_some() {
        Ok(json::points_from_json(&v)?.to_scheme())
    } else {
        Ok(json::scheme_from_json(&v)?)
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

pub(crate) fn write_json(path: &Path, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

/// Writes the JSON to `-o` and prints the text, or prints the JSON when no
/// output file is given.
fn emit(cli: &Cli, value: &Value, text: Option<&str>) -> CliResult<()> {
    match &cli.output {
        Some(path) => {
            write_json(path, value)?;
            if let Some(t) = text {
                print!("{t}");
            }
        }
        None => println!("{}", serde_json::to_string_pretty(value).expect("json values serialize")),
    }
    Ok(())
}
