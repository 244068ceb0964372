//! Parsing curves, fields and job files.
//!
//! Curve entries are exact rationals ("p/q" strings or JSON integers) or
//! polynomials in the field generator, [["1/2", 0], ["3", 1]] = 1/2 + 3g.
//! Bare rationals such as -67/4 are accepted on the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::Value;

use twistlaw::arith::parse_rational;
use twistlaw::numberfield::{make_number_field, rationals, NfElem, NumberField};
use twistlaw::weierstrass::WeierstrassModel;
use twistlaw::Error;

/// A curve entry before a field is known: coefficients of 1, g, g^2, ...
pub type Entry = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub a_invariants: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Name(String),
    Poly(Vec<Value>),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    pub precision: Option<i64>,
    pub format: Option<String>,
    pub place_filter: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub curve: CurveSpec,
    pub field: FieldSpec,
    #[serde(default)]
    pub options: JobOptions,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

/// Wraps bare numeric tokens in quotes so that -67/4 and 1.5 reach the
/// exact parser as strings instead of failing or becoming floats.
fn quote_bare_tokens(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 8);
    let mut chars = s.chars().peekable();
    let mut in_str = false;
    while let Some(c) = chars.next() {
        if in_str {
            out.push(c);
            if c == '\\' {
                if let Some(n) = chars.next() {
                    out.push(n);
                }
            } else if c == '"' {
                in_str = false;
            }
            continue;
        }
        if c == '"' {
            in_str = true;
            out.push(c);
        } else if c == '-' || c == '+' || c.is_ascii_digit() || c == '.' {
            let mut tok = String::from(c);
            while let Some(&n) = chars.peek() {
                if n.is_ascii_alphanumeric() || "/.+-".contains(n) {
                    tok.push(n);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push('"');
            out.push_str(&tok);
            out.push('"');
        } else {
            out.push(c);
        }
    }
    out
}

fn parse_json_loose(s: &str) -> Result<Value, Error> {
    serde_json::from_str(&quote_bare_tokens(s)).map_err(|e| invalid(format!("cannot parse {s:?}: {e}")))
}

fn rational(v: &Value) -> Result<BigRational, Error> {
    match v {
        Value::String(s) => {
            if s.contains(['.', 'e', 'E']) {
                return Err(invalid(format!("floats are not accepted: {s:?}")));
            }
            parse_rational(s)
        }
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(i.into())),
            None => match n.as_u64() {
                Some(u) => Ok(BigRational::from_integer(u.into())),
                None => Err(invalid(format!("floats are not accepted: {n}"))),
            },
        },
        other => Err(invalid(format!("expected a rational, got {other}"))),
    }
}

fn exponent(v: &Value) -> Result<usize, Error> {
    let e = rational(v)?;
    if !e.is_integer() || e < BigRational::zero() || e > BigRational::from_integer(64.into()) {
        return Err(invalid(format!("bad exponent {v}")));
    }
    e.to_integer().try_into().map_err(|_| invalid(format!("bad exponent {v}")))
}

fn entry(v: &Value) -> Result<Entry, Error> {
    match v {
        Value::Array(terms) => {
            let mut c: Entry = Vec::new();
            for t in terms {
                let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    invalid(format!("polynomial terms are [coefficient, exponent] pairs, got {t}"))
                })?;
                let (a, e) = (rational(&pair[0])?, exponent(&pair[1])?);
                if c.len() <= e {
                    c.resize(e + 1, BigRational::zero());
                }
                c[e] += a;
            }
            Ok(c)
        }
        v => Ok(vec![rational(v)?]),
    }
}

fn entries(a: &[Value]) -> Result<[Entry; 5], Error> {
    if a.len() != 5 {
        return Err(invalid(format!("expected five a-invariants, got {}", a.len())));
    }
    let v: Vec<Entry> = a.iter().map(entry).collect::<Result<_, _>>()?;
    Ok(v.try_into().expect("five entries"))
}

fn curve_value(v: &Value) -> Result<[Entry; 5], Error> {
    match v {
        Value::Array(a) => entries(a),
        Value::Object(_) => {
            let parsed: CurveSpec = serde_json::from_value(v.clone()).map_err(|e| invalid(e.to_string()))?;
            entries(&parsed.a_invariants)
        }
        _ => Err(invalid("a curve is a list of five a-invariants")),
    }
}

/// `[a1,a2,a3,a4,a6]` or `{"a_invariants": [...]}`.
pub fn parse_curve(s: &str) -> Result<[Entry; 5], Error> {
    curve_value(&parse_json_loose(s)?)
}

fn field_value(f: &FieldSpec) -> Result<NumberField, Error> {
    match f {
        FieldSpec::Name(s) if s.trim() == "Q" => Ok(rationals()),
        FieldSpec::Name(s) => Err(invalid(format!("unknown field {s:?}; use Q or a coefficient list"))),
        FieldSpec::Poly(c) => {
            let c: Vec<BigInt> = c
                .iter()
                .map(|v| {
                    let r = rational(v)?;
                    if r.is_integer() {
                        Ok(r.to_integer())
                    } else {
                        Err(invalid(format!("defining polynomial coefficients must be integers, got {v}")))
                    }
                })
                .collect::<Result<_, _>>()?;
            make_number_field(&c)
        }
    }
}

/// `Q`, or integer coefficients of the defining polynomial, constant first.
pub fn parse_field(s: &str) -> Result<NumberField, Error> {
    if s.trim() == "Q" {
        return Ok(rationals());
    }
    match parse_json_loose(s)? {
        Value::Array(c) => field_value(&FieldSpec::Poly(c)),
        Value::String(n) => field_value(&FieldSpec::Name(n)),
        other => Err(invalid(format!("cannot read a field from {other}"))),
    }
}

/// Rational coefficients of a polynomial, constant first.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>, Error> {
    match parse_json_loose(s)? {
        Value::Array(c) => c.iter().map(rational).collect(),
        other => Err(invalid(format!("expected a coefficient list, got {other}"))),
    }
}

pub fn parse_job(text: &str) -> Result<(JobSpec, [Entry; 5], NumberField), Error> {
    let job: JobSpec = serde_json::from_str(text).map_err(|e| invalid(format!("job file: {e}")))?;
    let curve = entries(&job.curve.a_invariants)?;
    let field = field_value(&job.field)?;
    Ok((job, curve, field))
}

/// The curve over K, with entry coefficients read in the power basis.
pub fn curve_over(k: &NumberField, a: &[Entry; 5]) -> Result<WeierstrassModel<NfElem>, Error> {
    if k.is_rationals() {
        let a = rational_curve(a).map_err(|_| invalid("polynomial entries need a field other than Q"))?;
        return Ok(WeierstrassModel::new(a.map(|c| k.from_rational(c))));
    }
    Ok(WeierstrassModel::new(a.clone().map(|c| k.elem(c))))
}

/// The curve's entries as rationals, rejecting polynomial entries.
pub fn rational_curve(a: &[Entry; 5]) -> Result<[BigRational; 5], Error> {
    let v: Vec<BigRational> = a
        .iter()
        .map(|c| {
            if c.iter().skip(1).any(|x| !x.is_zero()) {
                Err(invalid("polynomial entries need --ext"))
            } else {
                Ok(c.first().cloned().unwrap_or_else(BigRational::zero))
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(v.try_into().expect("five entries"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bare_rationals_and_polynomials() {
        let c = parse_curve("[0,1,0,-12,-67/4]").unwrap();
        assert_eq!(c[4], vec![r(-67, 4)]);
        let c = parse_curve(r#"{"a_invariants": ["1", 0, [["1/2", 0], ["3", 1]], "-2", -1]}"#).unwrap();
        assert_eq!(c[2], vec![r(1, 2), r(3, 1)]);
        assert_eq!(c[0], vec![r(1, 1)]);
    }

    #[test]
    fn floats_and_junk_are_rejected() {
        assert!(parse_curve("[0,1,0,-12,1.5]").is_err());
        assert!(parse_curve(r#"["0","1","0","-12","1e3"]"#).is_err());
        assert!(parse_curve("[0,1,0,-12]").is_err());
        assert!(parse_curve(r#"{"a_invariants": [0,0,0,0,1], "x": 1}"#).is_err());
        assert!(parse_field("[1,0,1/2]").is_err());
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn job_files_reject_unknown_keys() {
        let ok = r#"{"curve": {"a_invariants": ["1","-1","0","-2","-1"]}, "field": [1,0,1], "options": {"place_filter": 7}}"#;
        let (job, _, k) = parse_job(ok).unwrap();
        assert_eq!(job.options.place_filter, Some(7));
        assert_eq!(k.degree(), 2);
        let (_, _, q) = parse_job(r#"{"curve": {"a_invariants": [0,0,0,0,1]}, "field": "Q"}"#).unwrap();
        assert!(q.is_rationals());
        assert!(parse_job(r#"{"curve": {"a_invariants": [0,0,0,0,1]}, "field": "Q", "extra": 1}"#).is_err());
        assert!(parse_job(r#"{"curve": {"a_invariants": [0,0,0,0,1]}, "field": "Q", "options": {"colour": 1}}"#).is_err());
    }
}
