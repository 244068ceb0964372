use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use twistlaw::arith::parse_rational;
use twistlaw::classify::{classify_place, Verdict};
use twistlaw::localfield::{make_padic_field, Elem, LocalField};
use twistlaw::weierstrass::WeierstrassModel;

#[derive(Deserialize)]
struct Fixture {
    label: String,
    a_invariants: Vec<String>,
}

#[derive(Deserialize)]
struct Oracle {
    label: String,
    p: u64,
    w_local: i8,
    lawful: bool,
}

fn qp(p: u64, digits: i64) -> LocalField {
    make_padic_field(&BigInt::from(p), digits).unwrap()
}

fn over(m: &WeierstrassModel<BigRational>, k: &LocalField) -> WeierstrassModel<Elem> {
    m.map(|c| Elem::from_rational(k, c))
}

#[test]
fn verdicts_match_root_number_oracle() {
    let models: HashMap<String, WeierstrassModel<BigRational>> = include_str!("data/fixtures.jsonl")
        .lines()
        .map(|l| {
            let f: Fixture = serde_json::from_str(l).unwrap();
            let v: Vec<BigRational> = f.a_invariants.iter().map(|s| parse_rational(s).unwrap()).collect();
            (f.label, WeierstrassModel::new(v.try_into().unwrap()))
        })
        .collect();
    let mut bad = vec![];
    let mut n = 0;
    for line in include_str!("data/oracle.jsonl").lines() {
        let o: Oracle = serde_json::from_str(line).unwrap();
        let m = &models[&o.label];
        let want = match (o.lawful, o.w_local) {
            (false, _) => Verdict::Chaotic,
            (true, 1) => Verdict::LawfulGood,
            (true, _) => Verdict::LawfulEvil,
        };
        let build = |d: i64| {
            let k = qp(o.p, d);
            Ok((k.clone(), over(m, &k)))
        };
        match classify_place(build) {
            Ok(a) if a.verdict == want => {}
            Ok(a) => bad.push(format!("{} at {}: got {:?} want {:?} {:?}", o.label, o.p, a.verdict, want, a.evidence)),
            Err(e) => bad.push(format!("{} at {}: error {e}", o.label, o.p)),
        }
        n += 1;
    }
    assert!(bad.is_empty(), "{}/{n} mismatches:\n{}", bad.len(), bad.join("\n"));
}
