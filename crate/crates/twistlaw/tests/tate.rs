use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use twistlaw::arith::parse_rational;
use twistlaw::corpus::{parse_fixtures, Fixture};
use twistlaw::localfield::extend::extend;
use twistlaw::localfield::{make_padic_field, precision_floor, Elem, LocalField, Poly};
use twistlaw::residue::irreducible_of_degree;
use twistlaw::tate::{reduce, Kodaira, ReductionClass, ReductionData};
use twistlaw::weierstrass::WeierstrassModel;

fn model(a: &[&str]) -> WeierstrassModel<BigRational> {
    let v: Vec<BigRational> = a.iter().map(|s| parse_rational(s).unwrap()).collect();
    WeierstrassModel::new(v.try_into().unwrap())
}

fn qp(p: u64) -> LocalField {
    make_padic_field(&BigInt::from(p), precision_floor()).unwrap()
}

fn local(m: &WeierstrassModel<BigRational>, k: &LocalField) -> ReductionData {
    reduce(&m.map(|c| Elem::from_rational(k, c)), k).unwrap()
}

fn fixtures() -> Vec<Fixture> {
    parse_fixtures(include_str!("data/fixtures.jsonl")).unwrap()
}

#[test]
fn small_conductor_examples() {
    let e121 = model(&["0", "5/4", "0", "-2", "-7"]);
    let d = local(&e121, &qp(11));
    assert_eq!((d.kodaira, d.delta), (Kodaira::IV, 4));
    assert_eq!(d.reduction_class, ReductionClass::Additive);
    assert!(d.potentially_good);
    assert_eq!(d.semistability_defect_e, Some(3));

    let e1369 = model(&["0", "1", "0", "-12", "-67/4"]);
    let d = local(&e1369, &qp(37));
    assert_eq!((d.kodaira, d.delta, d.semistability_defect_e), (Kodaira::III, 3, Some(4)));

    let e49 = model(&["1", "-1", "0", "-2", "-1"]);
    let d = local(&e49, &qp(5));
    assert_eq!((d.kodaira, d.delta, d.reduction_class), (Kodaira::I0, 0, ReductionClass::Good));
    assert_eq!(d.conductor_exponent, 0);
    let d = local(&e49, &qp(7));
    assert_eq!((d.kodaira, d.conductor_exponent), (Kodaira::III, 2));
}

#[test]
fn good_reduction_after_ramified_extension() {
    let k = qp(11);
    let (k6, _) = extend(&Poly::from_i64(&k, &[11, 0, 0, 0, 0, 0, 1])).unwrap();
    let d = local(&model(&["0", "5/4", "0", "-2", "-7"]), &k6);
    assert_eq!(d.reduction_class, ReductionClass::Good);

    let k = qp(37);
    let (k4, _) = extend(&Poly::from_i64(&k, &[37, 0, 0, 0, 1])).unwrap();
    let d = local(&model(&["0", "1", "0", "-12", "-67/4"]), &k4);
    assert_eq!(d.reduction_class, ReductionClass::Good);

    // over the quadratic subfield the reduction is still additive, with doubled delta
    let (k2, _) = extend(&Poly::from_i64(&k, &[37, 0, 1])).unwrap();
    let d = local(&model(&["0", "1", "0", "-12", "-67/4"]), &k2);
    assert_eq!((d.kodaira, d.delta), (Kodaira::I0Star, 6));
}

#[test]
fn multiplicative_split_and_nonsplit() {
    // 11a1: split at 11
    let d = local(&model(&["0", "-1", "1", "-10", "-20"]), &qp(11));
    assert_eq!((d.kodaira, d.reduction_class), (Kodaira::I(5), ReductionClass::MultiplicativeSplit));
    // 14a1: split at 7, nonsplit at 2
    let e14 = model(&["1", "0", "1", "4", "-6"]);
    assert_eq!(local(&e14, &qp(7)).reduction_class, ReductionClass::MultiplicativeSplit);
    let d = local(&e14, &qp(2));
    assert_eq!((d.kodaira, d.reduction_class), (Kodaira::I(6), ReductionClass::MultiplicativeNonsplit));
    // nonsplit becomes split over the unramified quadratic extension
    let k = qp(2);
    let k2 = k.unramified(&irreducible_of_degree(k.residue_field(), 2));
    assert_eq!(local(&e14, &k2).reduction_class, ReductionClass::MultiplicativeSplit);
}

#[test]
fn corpus_kodaira_and_delta() {
    let mut bad = vec![];
    for fx in fixtures() {
        let a: Vec<&str> = fx.a_invariants.iter().map(|s| s.as_str()).collect();
        let m = model(&a);
        for bp in &fx.bad_primes {
            let d = local(&m, &qp(bp.p));
            if d.kodaira.to_string() != bp.kodaira || d.delta != bp.delta {
                bad.push(format!("{} at {}: got {} {}, want {} {}", fx.label, bp.p, d.kodaira, d.delta, bp.kodaira, bp.delta));
            }
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn unramified_base_change_keeps_type() {
    for fx in fixtures().iter().take(50) {
        let a: Vec<&str> = fx.a_invariants.iter().map(|s| s.as_str()).collect();
        let m = model(&a);
        for bp in &fx.bad_primes {
            let k = qp(bp.p);
            let k2 = k.unramified(&irreducible_of_degree(k.residue_field(), 2));
            let (d1, d2) = (local(&m, &k), local(&m, &k2));
            assert_eq!((d1.kodaira, d1.delta), (d2.kodaira, d2.delta), "{} at {}", fx.label, bp.p);
        }
    }
}

#[test]
fn minimal_model_is_fixed() {
    for fx in fixtures().iter().take(40) {
        let a: Vec<&str> = fx.a_invariants.iter().map(|s| s.as_str()).collect();
        let m = model(&a);
        for bp in &fx.bad_primes {
            let k = qp(bp.p);
            let d = local(&m, &k);
            let again = reduce(&d.minimal_model, &k).unwrap();
            assert_eq!((again.kodaira, again.delta), (d.kodaira, d.delta));
            // scaling by p^-1 is undone
            let p = Elem::from_i64(&k, bp.p as i64);
            let big = m.map(|c| Elem::from_rational(&k, c)).transform(&p.inv().unwrap(), &p, &Elem::one(&k), &p).unwrap();
            let d3 = reduce(&big, &k).unwrap();
            assert_eq!((d3.kodaira, d3.delta), (d.kodaira, d.delta), "{} at {}", fx.label, bp.p);
        }
    }
}

#[derive(Deserialize)]
struct ExtCase {
    label: String,
    a_invariants: Vec<String>,
    p: u64,
    poly: Vec<i64>,
    kodaira: String,
    delta: i64,
    conductor_exponent: i64,
}

#[test]
fn ramified_completions_at_two_and_three() {
    let mut bad = vec![];
    for line in include_str!("data/tate_ext.jsonl").lines() {
        let c: ExtCase = serde_json::from_str(line).unwrap();
        let (k, _) = extend(&Poly::from_i64(&qp(c.p), &c.poly)).unwrap();
        let a: Vec<&str> = c.a_invariants.iter().map(|s| s.as_str()).collect();
        let d = local(&model(&a), &k);
        let got = (d.kodaira.to_string(), d.delta, d.conductor_exponent);
        let want = (c.kodaira.clone(), c.delta, c.conductor_exponent);
        if got != want {
            bad.push(format!("{} over {:?} at {}: got {got:?}, want {want:?}", c.label, c.poly, c.p));
        }
    }
    assert!(bad.is_empty(), "{} mismatches: {bad:#?}", bad.len());
}
