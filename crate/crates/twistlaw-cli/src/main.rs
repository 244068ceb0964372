mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use twistlaw::classify::{classify_global_from, classify_place_from, quadratic_lawfulness_hint};
use twistlaw::corpus::{check_fixture, parse_fixtures, CurveCheck};
use twistlaw::localfield::extend::extend;
use twistlaw::localfield::factor::factor;
use twistlaw::localfield::{precision_floor, Elem, LocalField, Poly};
use twistlaw::tate::reduce;
use twistlaw::weierstrass::WeierstrassModel;
use twistlaw::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "twistlaw", version, about = "Root numbers of elliptic curves under quadratic twist")]
struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Starting p-adic precision in digits.
    #[arg(long, global = true, env = "TWISTLAW_PRECISION")]
    precision: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Classify a curve over a number field.
    Classify {
        /// a-invariants, e.g. '[0,1,0,-12,-67/4]'.
        #[arg(long, required_unless_present = "job", conflicts_with = "job")]
        curve: Option<String>,
        /// Q, or defining polynomial coefficients constant first, e.g. '[1,0,1]'.
        #[arg(long, default_value = "Q", conflicts_with = "job")]
        field: String,
        /// Only report the places above this prime.
        #[arg(long)]
        place_filter: Option<u64>,
        /// JSON job file with curve, field and options.
        #[arg(long)]
        job: Option<PathBuf>,
    },
    /// Reduction data and verdict over Q_p or an extension of it.
    Local {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        prime: u64,
        /// Adjoin a root of this polynomial over Q_p; entries of the curve
        /// may then be polynomials in that root.
        #[arg(long)]
        ext: Option<String>,
    },
    /// b- and c-invariants, discriminant and j over a number field.
    Invariants {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Check Kodaira symbols and delta against a JSON lines fixture file.
    Corpus { path: PathBuf },
    /// Factor a polynomial over Q_p or an extension of it.
    Factor {
        #[arg(long)]
        prime: u64,
        /// Rational coefficients, constant first.
        #[arg(long)]
        poly: String,
        #[arg(long)]
        ext: Option<String>,
    },
}

enum Failure {
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted(_) => 3,
        Error::Validation(_)
        | Error::CompositeP(_)
        | Error::PrecisionTooLow { .. }
        | Error::Reducible(_)
        | Error::NotSquarefree
        | Error::DegreeTooLarge(_)
        | Error::IrreducibilityUnverified(_)
        | Error::SingularModel
        | Error::NonInvertibleU
        | Error::MalformedFixture { .. } => 2,
        _ => 4,
    }
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) {
    let s = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable"),
        Format::Text => text(),
    };
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn digits(cli_precision: Option<i64>) -> Result<i64, Error> {
    match cli_precision {
        Some(d) if d < 1 => Err(Error::Validation(format!("precision must be positive, got {d}"))),
        Some(d) => Ok(d),
        None => Ok(precision_floor()),
    }
}

fn prime(p: u64) -> Result<BigInt, Error> {
    if !twistlaw::arith::is_prime_u64(p) {
        return Err(Error::CompositeP(p.to_string()));
    }
    Ok(BigInt::from(p))
}

/// Q_p at `d` digits, or the extension by a root of `ext`, with that root.
fn local_field(p: &BigInt, ext: Option<&[num_rational::BigRational]>, d: i64) -> Result<(LocalField, Elem), Error> {
    let qp = LocalField::qp(p, d);
    match ext {
        None => Ok((qp.clone(), Elem::zero(&qp))),
        Some(c) => {
            let f = Poly::from_rationals(&qp, c);
            if f.degree() < 1 {
                return Err(Error::Validation("extension polynomial must have positive degree".into()));
            }
            if !matches!(factor(&f)?.as_slice(), [(_, 1)]) {
                return Err(Error::Reducible("extension polynomial over Q_p".into()));
            }
            extend(&f)
        }
    }
}

fn entry_at(c: &[num_rational::BigRational], k: &LocalField, theta: &Elem) -> Elem {
    c.iter().rev().fold(Elem::zero(k), |acc, a| acc.mul(theta).add(&Elem::from_rational(k, a)))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let fmt = cli.format;
    let start = digits(cli.precision)?;
    match cli.cmd {
        Cmd::Classify { curve, field, place_filter, job } => {
            let (a, k, filter, fmt, start) = match job {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
                    let (job, a, k) = input::parse_job(&text)?;
                    let fmt = match job.options.format.as_deref() {
                        None => fmt,
                        Some("json") => Format::Json,
                        Some("text") => Format::Text,
                        Some(other) => return Err(Error::Validation(format!("unknown format {other:?}")).into()),
                    };
                    let start = if job.options.precision.is_some() { digits(job.options.precision)? } else { start };
                    (a, k, job.options.place_filter.or(place_filter), fmt, start)
                }
                None => {
                    let a = input::parse_curve(curve.as_deref().unwrap_or_default())?;
                    (a, input::parse_field(&field)?, place_filter, fmt, start)
                }
            };
            let m = input::curve_over(&k, &a)?;
            let mut v = classify_global_from(&m, &k, start)?;
            let hint = (v.global == twistlaw::classify::Verdict::Chaotic).then(|| quadratic_lawfulness_hint(&v));
            if let Some(p) = filter {
                v.places.retain(|r| r.place.p == Some(p));
            }
            let mut value = serde_json::to_value(&v).expect("serializable");
            value["field"] = report::field_value(&k);
            if let Some(h) = hint {
                value["hint"] = json!(h);
            }
            emit(fmt, &value, || report::global_text(&k, &v, hint));
        }
        Cmd::Local { curve, prime: p, ext } => {
            let pb = prime(p)?;
            let a = input::parse_curve(&curve)?;
            let ext = ext.as_deref().map(input::parse_rational_list).transpose()?;
            if ext.is_none() {
                input::rational_curve(&a)?;
            }
            let build = |d: i64| -> Result<(LocalField, WeierstrassModel<Elem>), Error> {
                let (k, theta) = local_field(&pb, ext.as_deref(), d)?;
                let m = WeierstrassModel::new(a.clone().map(|c| entry_at(&c, &k, &theta)));
                Ok((k, m))
            };
            let alignment = classify_place_from(start, build)?;
            let (k, m) = build(start.max(precision_floor()))?;
            let red = match reduce(&m, &k) {
                Err(Error::PrecisionExhausted(_)) => {
                    let (k2, m2) = build(2 * k.digits())?;
                    reduce(&m2, &k2)?
                }
                other => other?,
            };
            let mut value = report::reduction_value(&red);
            value["local_field"] = report::local_field_value(&k);
            value["verdict"] = json!(alignment.verdict);
            value["evidence"] = serde_json::to_value(&alignment.evidence).expect("serializable");
            emit(fmt, &value, || report::local_text(&k, &red, &alignment));
        }
        Cmd::Invariants { curve, field } => {
            let k = input::parse_field(&field)?;
            let m = input::curve_over(&k, &input::parse_curve(&curve)?)?;
            let inv = m.invariants()?;
            let bad = k.bad_prime_candidates(&m)?;
            let value = json!({
                "field": report::field_value(&k),
                "b2": report::nf_value(&inv.b2),
                "b4": report::nf_value(&inv.b4),
                "b6": report::nf_value(&inv.b6),
                "b8": report::nf_value(&inv.b8),
                "c4": report::nf_value(&inv.c4),
                "c6": report::nf_value(&inv.c6),
                "discriminant": report::nf_value(&inv.disc),
                "j": report::nf_value(&inv.j),
                "discriminant_norm": twistlaw::arith::rat_to_string(&k.norm(&inv.disc)),
                "bad_prime_candidates": bad,
            });
            emit(fmt, &value, || {
                ["b2", "b4", "b6", "b8", "c4", "c6", "discriminant", "j", "discriminant_norm", "bad_prime_candidates"]
                    .iter()
                    .map(|key| format!("{key}: {}", value[key]))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
        }
        Cmd::Corpus { path } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            let fixtures = parse_fixtures(&text)?;
            let mut checks: Vec<CurveCheck> =
                fixtures.par_iter().map(|fx| check_fixture(fx, start)).collect::<Result<_, _>>()?;
            checks.sort_by(|a, b| a.label.cmp(&b.label));
            let (kodaira, invariants) = report::corpus_summary(&checks);
            let value = json!({"curves": checks, "summary": kodaira, "invariants": invariants});
            emit(fmt, &value, || report::corpus_text(&checks));
            let bad = checks.iter().filter(|c| !c.mismatches.is_empty() || !c.invariant_failures.is_empty()).count();
            if bad > 0 {
                return Err(Failure::Mismatch(format!("{bad} curves disagree with the fixtures")));
            }
        }
        Cmd::Factor { prime: p, poly, ext } => {
            let pb = prime(p)?;
            let c = input::parse_rational_list(&poly)?;
            let ext = ext.as_deref().map(input::parse_rational_list).transpose()?;
            let (k, _) = local_field(&pb, ext.as_deref(), start.max(precision_floor()))?;
            let f = Poly::from_rationals(&k, &c);
            if f.degree() < 1 {
                return Err(Error::Validation("nothing to factor".into()).into());
            }
            let factors = factor(&f)?;
            let list: Vec<Value> = factors
                .iter()
                .map(|(g, mult)| {
                    let coeffs: Vec<String> = g.coeffs().iter().map(report::elem_string).collect();
                    json!({"degree": g.degree(), "multiplicity": mult, "coefficients": coeffs})
                })
                .collect();
            let value = json!({"local_field": report::local_field_value(&k), "factors": list});
            emit(fmt, &value, || {
                list.iter()
                    .map(|f| format!("degree {} multiplicity {}: {}", f["degree"], f["multiplicity"], f["coefficients"]))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({"error": "Validation", "message": e.to_string()}));
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("{}", json!({"error": "Mismatch", "message": msg}));
            ExitCode::from(1)
        }
    }
}
