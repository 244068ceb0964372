//! Curve fixtures with reference local data, and checking against them.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::parse_rational;
use crate::localfield::{Elem, LocalField};
use crate::tate::{reduce, Kodaira};
use crate::weierstrass::WeierstrassModel;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BadPrime {
    pub p: u64,
    pub kodaira: String,
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub label: String,
    pub a_invariants: Vec<String>,
    pub bad_primes: Vec<BadPrime>,
}

impl Fixture {
    pub fn model(&self) -> Result<WeierstrassModel<BigRational>, Error> {
        let a: Vec<BigRational> = self.a_invariants.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
        let a: [BigRational; 5] =
            a.try_into().map_err(|_| Error::Validation("expected five a-invariants".into()))?;
        Ok(WeierstrassModel::new(a))
    }
}

/// Parses JSON lines; blank lines are skipped, an empty corpus is an error.
pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>, Error> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fx: Fixture = serde_json::from_str(line)
            .map_err(|e| Error::MalformedFixture { line: i + 1, msg: e.to_string() })?;
        fx.model().map_err(|e| Error::MalformedFixture { line: i + 1, msg: e.to_string() })?;
        fx.bad_primes
            .iter()
            .try_for_each(|bp| bp.kodaira.parse::<Kodaira>().map(|_| ()))
            .map_err(|e| Error::MalformedFixture { line: i + 1, msg: e.to_string() })?;
        out.push(fx);
    }
    if out.is_empty() {
        return Err(Error::MalformedFixture { line: 0, msg: "no fixtures".into() });
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CurveCheck {
    pub label: String,
    pub places: usize,
    /// Places where the computed type or delta differs from the fixture.
    pub mismatches: Vec<String>,
    pub invariant_checks: usize,
    /// Failed structural checks: re-reducing the minimal model, and the type
    /// against delta for p >= 5.
    pub invariant_failures: Vec<String>,
}

/// Runs Tate's algorithm at each listed prime over Q_p with `digits` digits.
pub fn check_fixture(fx: &Fixture, digits: i64) -> Result<CurveCheck, Error> {
    let m = fx.model()?;
    let mut out = CurveCheck { label: fx.label.clone(), ..Default::default() };
    for bp in &fx.bad_primes {
        let k = LocalField::qp(&BigInt::from(bp.p), digits);
        let d = reduce(&m.map(|c| Elem::from_rational(&k, c)), &k)?;
        out.places += 1;
        let got = d.kodaira.to_string();
        if got != bp.kodaira || d.delta != bp.delta {
            out.mismatches.push(format!("p={}: got {} delta {}, want {} delta {}", bp.p, got, d.delta, bp.kodaira, bp.delta));
        }
        let again = reduce(&d.minimal_model, &k)?;
        out.invariant_checks += 1;
        if (again.kodaira, again.delta) != (d.kodaira, d.delta) {
            out.invariant_failures.push(format!("p={}: minimal model not stable", bp.p));
        }
        if bp.p >= 5 {
            out.invariant_checks += 1;
        }
        if bp.p >= 5 && !type_matches_delta(d.kodaira, d.delta) {
            out.invariant_failures.push(format!("p={}: type {} with delta {}", bp.p, d.kodaira, d.delta));
        }
    }
    Ok(out)
}

/// For residue characteristic at least 5: II, III, IV, I0*, IV*, III*, II*
/// have delta 2, 3, 4, 6, 8, 9, 10; I_n has delta n and I_n* has 6 + n.
pub fn type_matches_delta(t: Kodaira, delta: i64) -> bool {
    let want = match t {
        Kodaira::I0 => 0,
        Kodaira::I(n) => n as i64,
        Kodaira::II => 2,
        Kodaira::III => 3,
        Kodaira::IV => 4,
        Kodaira::I0Star => 6,
        Kodaira::IStar(n) => 6 + n as i64,
        Kodaira::IVStar => 8,
        Kodaira::IIIStar => 9,
        Kodaira::IIStar => 10,
    };
    want == delta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_input_names_the_line() {
        assert!(matches!(parse_fixtures(""), Err(Error::MalformedFixture { line: 0, .. })));
        let good = r#"{"label": "49a1", "a_invariants": ["1", "-1", "0", "-2", "-1"], "bad_primes": [{"p": 7, "kodaira": "III", "delta": 3}]}"#;
        assert_eq!(parse_fixtures(good).unwrap().len(), 1);
        let text = format!("{good}\n{{\"label\": 3}}");
        assert!(matches!(parse_fixtures(&text), Err(Error::MalformedFixture { line: 2, .. })));
        let bad_type = good.replace("\"III\"", "\"V\"");
        assert!(matches!(parse_fixtures(&bad_type), Err(Error::MalformedFixture { line: 1, .. })));
    }

    #[test]
    fn corrupted_delta_is_reported() {
        let fx = &parse_fixtures(r#"{"label": "49a1", "a_invariants": ["1", "-1", "0", "-2", "-1"], "bad_primes": [{"p": 7, "kodaira": "III", "delta": 4}]}"#).unwrap()[0];
        let c = check_fixture(fx, 40).unwrap();
        assert_eq!(c.mismatches.len(), 1);
        assert!(c.invariant_failures.is_empty());
    }
}
