use num_bigint::BigInt;
use twistlaw::localfield::extend::extend;
use twistlaw::localfield::normgroup::{
    enumerate_quadratic_extensions, hilbert_symbol, minus_one_is_norm, NormTest,
};
use twistlaw::localfield::splitting::{splitting_tower, DEFAULT_DEGREE_CAP};
use twistlaw::localfield::symbols::{is_cube, is_square, quadratic_symbol};
use twistlaw::localfield::{Elem, LocalField, Poly};
use twistlaw::Error;

fn qp(p: i64) -> LocalField {
    LocalField::qp(&BigInt::from(p), 40)
}

fn int(k: &LocalField, n: i64) -> Elem {
    Elem::from_i64(k, n)
}

#[test]
fn quadratic_symbol_values() {
    let k = qp(37);
    assert_eq!(quadratic_symbol(&int(&k, -1)).unwrap(), 1);
    assert_eq!(quadratic_symbol(&int(&k, -2)).unwrap(), -1);
    let q7 = qp(7);
    let (f49, _) = extend(&Poly::from_i64(&q7, &[-3, 0, 1])).unwrap();
    assert_eq!(f49.f(), 2);
    assert_eq!(quadratic_symbol(&int(&f49, -1)).unwrap(), 1);
    assert_eq!(quadratic_symbol(&int(&qp(2), 3)), Err(Error::EvenResidueChar));
    assert_eq!(quadratic_symbol(&int(&k, 37)), Err(Error::NonUnit));
}

#[test]
fn squares_and_cubes() {
    let q11 = qp(11);
    assert!(!is_square(&int(&q11, -14641)).unwrap());
    let q2 = qp(2);
    assert!(!is_square(&int(&q2, -3)).unwrap());
    assert!(is_square(&int(&q2, 17)).unwrap());
    assert!(is_square(&int(&q2, 68)).unwrap());
    assert!(!is_square(&int(&q2, 5)).unwrap());
    assert!(is_cube(&int(&q2, 512)).unwrap());
    assert!(!is_cube(&int(&q2, 2)).unwrap());
    assert!(is_cube(&int(&q2, -3)).unwrap());
    let q7 = qp(7);
    assert!(!is_cube(&int(&q7, 2)).unwrap());
    assert!(is_cube(&int(&q7, 6)).unwrap());
    let q3 = qp(3);
    assert!(!is_cube(&int(&q3, 2)).unwrap());
    assert!(is_cube(&int(&q3, 10)).unwrap());
    assert!(!is_cube(&int(&q3, 4)).unwrap());
}

#[test]
fn hilbert_symbol_matches_reference() {
    let mut bad = Vec::new();
    for line in include_str!("data/hilbert_qp.jsonl").lines() {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        let (p, a, b, h) = (
            row["p"].as_i64().unwrap(),
            row["a"].as_i64().unwrap(),
            row["b"].as_i64().unwrap(),
            row["h"].as_i64().unwrap(),
        );
        let k = qp(p);
        let got = hilbert_symbol(&int(&k, a), &int(&k, b));
        if got != Ok(h as i8) {
            bad.push(format!("({a},{b})_{p}: want {h} got {got:?}"));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn minus_one_norms_from_quadratics() {
    let k = qp(2);
    assert_eq!(minus_one_is_norm(&k, &k).unwrap(), NormTest::Norm);
    for d in [-1, 2, -2, 3, -3, 6, -6] {
        let (m, _) = extend(&Poly::from_i64(&k, &[-d, 0, 1])).unwrap();
        let want = if hilbert_symbol(&int(&k, d), &int(&k, -1)).unwrap() == 1 { NormTest::Norm } else { NormTest::NotNorm };
        assert_eq!(minus_one_is_norm(&k, &m).unwrap(), want, "d = {d}");
    }
}

#[test]
fn biquadratic_norm_rule() {
    // Q_2(sqrt 2, sqrt 3): -1 is a norm from Q_2(sqrt 2) but not from Q_2(sqrt 3)
    let k = qp(2);
    let t = splitting_tower(&Poly::from_i64(&k, &[6, 0, -5, 0, 1]), DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(t.degree(), 4);
    assert_eq!(minus_one_is_norm(&k, &t.top).unwrap(), NormTest::NotNorm);
    // Q_2(sqrt 2, sqrt 5): -1 is a norm from both
    let t = splitting_tower(&Poly::from_i64(&k, &[10, 0, -7, 0, 1]), DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(t.degree(), 4);
    assert_eq!(minus_one_is_norm(&k, &t.top).unwrap(), NormTest::Norm);
}

#[test]
fn splitting_degrees() {
    let q7 = qp(7);
    let f = Poly::from_i64(&q7, &[1, 0, 1]).mul(&Poly::from_i64(&q7, &[-2, 0, 1]));
    assert_eq!(splitting_tower(&f, DEFAULT_DEGREE_CAP).unwrap().degree(), 2);
    let q37 = qp(37);
    let t = splitting_tower(&Poly::from_i64(&q37, &[37, 0, 0, 0, 1]), DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(t.degree(), 4);
    assert_eq!(t.roots.len(), 4);
    let q2 = qp(2);
    let t = splitting_tower(&Poly::from_i64(&q2, &[-2, 0, 0, 1]), DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(t.degree(), 6);
    assert!(matches!(splitting_tower(&Poly::from_i64(&q2, &[-2, 0, 0, 1]), 4), Err(Error::DegreeOverflow(6))));
}

#[test]
fn quadratic_extension_counts() {
    assert_eq!(enumerate_quadratic_extensions(&qp(7)).unwrap().len(), 3);
    let q2 = qp(2);
    let exts = enumerate_quadratic_extensions(&q2).unwrap();
    assert_eq!(exts.len(), 7);
    let q3 = qp(3);
    let (f9, _) = extend(&Poly::from_i64(&q3, &[1, 0, 1])).unwrap();
    assert_eq!(enumerate_quadratic_extensions(&f9).unwrap().len(), 3);
    let (r2, _) = extend(&Poly::from_i64(&q2, &[-2, 0, 1])).unwrap();
    assert_eq!(enumerate_quadratic_extensions(&r2).unwrap().len(), 15);
}
