use std::time::Instant;

use num_bigint::BigInt;

use twistlaw::arith::parse_rational;
use twistlaw::classify::{classify_global, predicted_root_number, quadratic_lawfulness_hint, Branch, Hint, Verdict};
use twistlaw::numberfield::{make_number_field, rationals, NfElem, NumberField, PlaceKind};
use twistlaw::weierstrass::WeierstrassModel;

fn field(c: &[i64]) -> NumberField {
    make_number_field(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap()
}

fn curve(k: &NumberField, a: [&str; 5]) -> WeierstrassModel<NfElem> {
    WeierstrassModel::new(a.map(|s| k.from_rational(parse_rational(s).unwrap())))
}

const E49: [&str; 5] = ["1", "-1", "0", "-2", "-1"];
const E121: [&str; 5] = ["0", "5/4", "0", "-2", "-7"];
const E1369: [&str; 5] = ["0", "1", "0", "-12", "-67/4"];

#[test]
fn e49_over_gaussian_rationals() {
    let t = Instant::now();
    let k = field(&[1, 0, 1]);
    let v = classify_global(&curve(&k, E49), &k).unwrap();
    assert_eq!(v.global, Verdict::LawfulEvil);
    assert_eq!(v.root_number, Some(-1));
    assert_eq!(v.evil_count, 1);
    let at = |p: u64| v.places.iter().find(|r| r.place.p == Some(p)).unwrap();
    let seven = &at(7).alignment;
    assert_eq!(seven.verdict, Verdict::LawfulGood);
    assert_eq!(seven.evidence.branch, Some(Branch::OddIII));
    assert_eq!((seven.evidence.symbol_minus_one, seven.evidence.symbol_minus_two), (Some(1), Some(1)));
    assert_eq!(at(7).place.f, Some(2));
    assert_eq!(at(2).alignment.evidence.branch, Some(Branch::GoodReduction));
    assert_eq!(predicted_root_number(&v, 2), Ok(1));
    assert_eq!(predicted_root_number(&v, 3), Ok(-1));
    assert!(t.elapsed().as_secs() < 5);
}

#[test]
fn e1369_over_quartic() {
    let k = field(&[37, 0, 0, 0, 1]);
    let v = classify_global(&curve(&k, E1369), &k).unwrap();
    assert_eq!(v.global, Verdict::LawfulGood);
    assert_eq!(v.evil_count, 2);
    assert_eq!(v.root_number, Some(1));
    for r in v.places.iter().filter(|r| r.place.kind == PlaceKind::Finite) {
        assert_eq!(r.alignment.evidence.branch, Some(Branch::GoodReduction), "{}", r.place);
    }
}

#[test]
fn e121_over_sextics() {
    for c in [11, 22] {
        let k = field(&[c, 0, 0, 0, 0, 0, 1]);
        let v = classify_global(&curve(&k, E121), &k).unwrap();
        assert_eq!(v.global, Verdict::LawfulEvil, "x^6 + {c}");
        assert_eq!(v.evil_count, 3);
    }
}

#[test]
fn everything_is_chaotic_over_the_rationals() {
    let q = rationals();
    for a in [E49, E121, E1369] {
        let v = classify_global(&curve(&q, a), &q).unwrap();
        assert_eq!(v.global, Verdict::Chaotic);
        assert_eq!(v.root_number, None);
        assert!(predicted_root_number(&v, 2).is_err());
    }
    let v = classify_global(&curve(&q, E49), &q).unwrap();
    assert_eq!(quadratic_lawfulness_hint(&v), Hint::BecomesLawfulOverSomeQuadratic);
    // 11a1 is multiplicative at 11 and good at 2
    let v = classify_global(&curve(&q, ["0", "-1", "1", "-10", "-20"]), &q).unwrap();
    assert_eq!(quadratic_lawfulness_hint(&v), Hint::StaysChaotic);
    // 32a1 is additive at 2
    let v = classify_global(&curve(&q, ["0", "0", "0", "4", "0"]), &q).unwrap();
    assert_eq!(quadratic_lawfulness_hint(&v), Hint::NotApplicable);
}

#[test]
fn bad_prime_candidates_include_denominators() {
    let q = rationals();
    assert_eq!(q.bad_prime_candidates(&curve(&q, E121)).unwrap(), vec![2, 11]);
    let k = field(&[1, 0, 1]);
    assert_eq!(k.bad_prime_candidates(&curve(&k, E49)).unwrap(), vec![7]);
    let k = field(&[37, 0, 0, 0, 1]);
    assert_eq!(k.bad_prime_candidates(&curve(&k, E1369)).unwrap(), vec![2, 37]);
}

#[test]
fn verdict_json_round_trips() {
    let k = field(&[1, 0, 1]);
    let v = classify_global(&curve(&k, E49), &k).unwrap();
    let s = serde_json::to_string(&v).unwrap();
    let back: twistlaw::classify::GlobalVerdict = serde_json::from_str(&s).unwrap();
    assert_eq!(back, v);
}
