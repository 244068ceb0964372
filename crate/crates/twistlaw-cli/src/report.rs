//! JSON values and plain-text renderings of results.

use num_traits::Zero;
use serde_json::{json, Value};

use twistlaw::arith::rat_to_string;
use twistlaw::classify::{Alignment, Branch, GlobalVerdict, Hint, PlaceReport};
use twistlaw::corpus::CurveCheck;
use twistlaw::localfield::normgroup::NormTest;
use twistlaw::localfield::{Elem, LocalField};
use twistlaw::numberfield::{NfElem, NumberField};
use twistlaw::tate::ReductionData;

pub fn elem_string(x: &Elem) -> String {
    if x.is_exact_zero() {
        return "0".into();
    }
    match x.to_rational_approx() {
        Some(r) => rat_to_string(&r),
        None => x.to_string(),
    }
}

/// Rationals as "p/q", other elements as [[coefficient, exponent], ...].
pub fn nf_value(x: &NfElem) -> Value {
    match x.as_rational() {
        Some(r) => Value::String(rat_to_string(&r)),
        None => Value::Array(
            x.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| json!([rat_to_string(c), i]))
                .collect(),
        ),
    }
}

pub fn field_value(k: &NumberField) -> Value {
    if k.is_rationals() {
        return json!("Q");
    }
    let c: Vec<String> = k.defining_polynomial().coeffs().iter().map(rat_to_string).collect();
    json!({"defining_polynomial": c, "signature": [k.r1(), k.r2()]})
}

pub fn local_field_value(k: &LocalField) -> Value {
    json!({"p": k.p_u64(), "e": k.e(), "f": k.f(), "digits": k.digits()})
}

pub fn reduction_value(d: &ReductionData) -> Value {
    let m = &d.minimal_model;
    let model: Vec<String> = m.coeffs().iter().map(|c| elem_string(c)).collect();
    json!({
        "kodaira": d.kodaira,
        "delta": d.delta,
        "conductor_exponent": d.conductor_exponent,
        "reduction_class": d.reduction_class,
        "potentially_good": d.potentially_good,
        "semistability_defect_e": d.semistability_defect_e,
        "minimal_model": model,
    })
}

fn sign(s: Option<i8>) -> String {
    match s {
        Some(1) => "+1".into(),
        Some(-1) => "-1".into(),
        _ => "?".into(),
    }
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "?",
    }
}

/// One line saying which rule decided the place.
pub fn describe(a: &Alignment) -> String {
    let ev = &a.evidence;
    let kod = ev.kodaira.map(|t| t.to_string()).unwrap_or_else(|| "?".into());
    match ev.branch {
        None => "no rule applied".into(),
        Some(Branch::Real) => "real place".into(),
        Some(Branch::Complex) => "complex place".into(),
        Some(Branch::GoodReduction) => "good reduction".into(),
        Some(Branch::PotentiallyMultiplicative) => format!("j is not integral (type {kod})"),
        Some(Branch::OddI0Star) => format!("type I0*, (-1|k) = {}", sign(ev.symbol_minus_one)),
        Some(Branch::OddIII) => {
            let mut s = format!("type {kod}, (-1|k) = {}", sign(ev.symbol_minus_one));
            if ev.symbol_minus_two.is_some() {
                s.push_str(&format!(", (-2|k) = {}", sign(ev.symbol_minus_two)));
            }
            s
        }
        Some(Branch::OddIIOrIV) => {
            let mut s = format!("type {kod}, discriminant a square in k: {}", yes_no(ev.disc_is_square));
            if ev.disc_is_square == Some(true) {
                s.push_str(&format!(", (-1|k) = {}, delta = {}", sign(ev.symbol_minus_one), ev.delta.unwrap_or(0)));
            }
            s
        }
        Some(Branch::TwoAdic) => {
            let mut s = format!("residue characteristic 2, type {kod}");
            if let Some(g) = &ev.gamma_degrees {
                s.push_str(&format!(", gamma factors of degree {g:?}"));
            }
            if let Some(t) = &ev.splitting_steps {
                s.push_str(&format!(", splitting tower {t:?}"));
            }
            match ev.norm_test {
                Some(NormTest::Norm) => s.push_str(", -1 is a norm from the splitting field"),
                Some(NormTest::NotNorm) => s.push_str(", -1 is not a norm from the splitting field"),
                Some(NormTest::Undetermined) => s.push_str(", norm test undetermined"),
                None => {}
            }
            s
        }
    }
}

fn place_line(r: &PlaceReport) -> String {
    let loc = match (r.place.e, r.place.f) {
        (Some(e), Some(f)) => format!("{} (e={e}, f={f})", r.place),
        _ => r.place.to_string(),
    };
    format!("  {loc:<28} {:<28} {}", format!("{:?}", r.alignment.verdict), describe(&r.alignment))
}

pub fn hint_text(h: Hint) -> &'static str {
    match h {
        Hint::BecomesLawfulOverSomeQuadratic => "j is integral: lawful over some quadratic extension",
        Hint::StaysChaotic => "j is not integral: chaotic over every quadratic extension",
        Hint::NotApplicable => "additive above 2: no quadratic prediction",
    }
}

pub fn global_text(k: &NumberField, v: &GlobalVerdict, hint: Option<Hint>) -> String {
    let mut out = Vec::new();
    if k.is_rationals() {
        out.push("field: Q".to_string());
    } else {
        let c: Vec<String> = k.defining_polynomial().coeffs().iter().map(rat_to_string).collect();
        out.push(format!("field: Q[x]/({}), signature ({}, {})", poly_text(&c), k.r1(), k.r2()));
    }
    let w = v.root_number.map(|w| format!(", root number {w:+}")).unwrap_or_default();
    out.push(format!("global: {:?}{w}, lawful evil places: {}", v.global, v.evil_count));
    out.push(format!("bad primes: {:?}", v.bad_primes));
    out.extend(v.places.iter().map(place_line));
    if let Some(h) = hint {
        out.push(format!("hint: {}", hint_text(h)));
    }
    out.join("\n")
}

fn poly_text(c: &[String]) -> String {
    let mut terms = Vec::new();
    for (i, a) in c.iter().enumerate().rev() {
        if a == "0" {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        let t = match (a.as_str(), i) {
            ("1", i) if i > 0 => mono,
            ("-1", i) if i > 0 => format!("-{mono}"),
            (a, 0) => a.to_string(),
            (a, _) => format!("{a}*{mono}"),
        };
        terms.push(t);
    }
    terms.join(" + ").replace("+ -", "- ")
}

pub fn local_text(k: &LocalField, d: &ReductionData, a: &Alignment) -> String {
    let model: Vec<String> = d.minimal_model.coeffs().iter().map(|c| elem_string(c)).collect();
    [
        format!("local field: p={}, e={}, f={}, {} digits", k.p_u64(), k.e(), k.f(), k.digits()),
        format!(
            "reduction: {} delta={} {:?} conductor exponent {}",
            d.kodaira, d.delta, d.reduction_class, d.conductor_exponent
        ),
        format!("minimal model: [{}]", model.join(", ")),
        format!("verdict: {:?}", a.verdict),
        format!("rule: {}", describe(a)),
    ]
    .join("\n")
}

pub fn corpus_text(checks: &[CurveCheck]) -> String {
    let mut out = Vec::new();
    for c in checks {
        let status = if c.mismatches.is_empty() && c.invariant_failures.is_empty() { "ok" } else { "FAIL" };
        out.push(format!("{:<14} {status}", c.label));
        for m in c.mismatches.iter().chain(&c.invariant_failures) {
            out.push(format!("    {m}"));
        }
    }
    let (kodaira, invariants) = corpus_summary(checks);
    out.push(kodaira);
    out.push(invariants);
    out.join("\n")
}

/// "N/M kodaira match" and the invariant tally.
pub fn corpus_summary(checks: &[CurveCheck]) -> (String, String) {
    let matched = checks.iter().filter(|c| c.mismatches.is_empty()).count();
    let inv_fail: usize = checks.iter().map(|c| c.invariant_failures.len()).sum();
    let run: usize = checks.iter().map(|c| c.invariant_checks).sum();
    (format!("{matched}/{} kodaira match", checks.len()), format!("invariants: {} passed, {inv_fail} failed", run - inv_fail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_text() {
        let s = |v: &[&str]| poly_text(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        assert_eq!(s(&["37", "0", "0", "0", "1"]), "x^4 + 37");
        assert_eq!(s(&["-2", "-1", "3"]), "3*x^2 - x - 2");
    }
}
