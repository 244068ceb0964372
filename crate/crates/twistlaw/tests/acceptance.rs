//! One line per acceptance criterion; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use twistlaw::arith::parse_rational;
use twistlaw::classify::{classify_global, classify_place, tame_lawful_predicate, Alignment, Branch, Verdict};
use twistlaw::corpus::{check_fixture, parse_fixtures, type_matches_delta, Fixture};
use twistlaw::localfield::extend::extend;
use twistlaw::localfield::factor::{degree_pattern, expand, factor};
use twistlaw::localfield::normgroup::enumerate_quadratic_extensions;
use twistlaw::localfield::symbols::{is_square, quadratic_symbol};
use twistlaw::localfield::{precision_floor, Elem, LocalField, Poly};
use twistlaw::numberfield::{make_number_field, rationals, NfElem, NumberField, PlaceKind};
use twistlaw::ratpoly::RatPoly;
use twistlaw::residue::irreducible_of_degree;
use twistlaw::tate::{reduce, Kodaira, ReductionClass};
use twistlaw::weierstrass::{Ring, WeierstrassModel};
use twistlaw::Error;

type Check = Result<String, String>;

const E49: [&str; 5] = ["1", "-1", "0", "-2", "-1"];
const E121: [&str; 5] = ["0", "5/4", "0", "-2", "-7"];
const E121_MIN: [&str; 5] = ["1", "1", "0", "-2", "-7"];
const E1369: [&str; 5] = ["0", "1", "0", "-12", "-67/4"];
const E1369_MIN: [&str; 5] = ["0", "1", "1", "-12", "-17"];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: u64) -> Result<(), String> {
    ensure(t.elapsed() < Duration::from_secs(limit), || format!("took {:.1}s, limit {limit}s", t.elapsed().as_secs_f64()))
}

fn rat_model(a: [&str; 5]) -> WeierstrassModel<BigRational> {
    WeierstrassModel::new(a.map(|s| parse_rational(s).unwrap()))
}

fn field(c: &[i64]) -> NumberField {
    make_number_field(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap()
}

fn nf_model(k: &NumberField, a: [&str; 5]) -> WeierstrassModel<NfElem> {
    WeierstrassModel::new(a.map(|s| k.from_rational(parse_rational(s).unwrap())))
}

fn qp(p: u64, digits: i64) -> LocalField {
    LocalField::qp(&BigInt::from(p), digits)
}

fn over(m: &WeierstrassModel<BigRational>, k: &LocalField) -> WeierstrassModel<Elem> {
    m.map(|c| Elem::from_rational(k, c))
}

/// Local verdict over the field `make(digits)`, with the usual retry.
fn verdict_over(m: &WeierstrassModel<BigRational>, make: impl Fn(i64) -> Result<LocalField, Error>) -> Result<Alignment, Error> {
    classify_place(|d| {
        let k = make(d)?;
        Ok((k.clone(), over(m, &k)))
    })
}

fn corpus() -> Vec<Fixture> {
    parse_fixtures(include_str!("data/fixtures.jsonl")).unwrap()
}

fn e2e_1() -> Check {
    let t = Instant::now();
    let k = field(&[1, 0, 1]);
    let v = classify_global(&nf_model(&k, E49), &k).map_err(|e| e.to_string())?;
    ensure(v.global == Verdict::LawfulEvil, || format!("global {:?}", v.global))?;
    let cplx: Vec<_> = v.places.iter().filter(|r| r.place.kind == PlaceKind::Complex).collect();
    ensure(cplx.len() == 1 && cplx[0].alignment.verdict == Verdict::LawfulEvil, || "complex place".into())?;
    let seven: Vec<_> = v.places.iter().filter(|r| r.place.p == Some(7)).collect();
    ensure(seven.len() == 1, || format!("{} places above 7", seven.len()))?;
    let (s, ev) = (seven[0], &seven[0].alignment.evidence);
    ensure(
        s.alignment.verdict == Verdict::LawfulGood
            && ev.branch == Some(Branch::OddIII)
            && ev.kodaira == Some(Kodaira::III)
            && ev.symbol_minus_one == Some(1)
            && ev.symbol_minus_two == Some(1)
            && s.place.f == Some(2),
        || format!("place above 7: {:?} {ev:?}", s.alignment.verdict),
    )?;
    let two: Vec<_> = v.places.iter().filter(|r| r.place.p == Some(2)).collect();
    ensure(
        !two.is_empty() && two.iter().all(|r| r.alignment.evidence.branch == Some(Branch::GoodReduction)),
        || "places above 2 not good".into(),
    )?;
    within(t, 5)?;
    Ok(format!("complex evil, 7 good via III in F_49, 2 good, {:.2}s", t.elapsed().as_secs_f64()))
}

fn e2e_2() -> Check {
    let t = Instant::now();
    let k = field(&[37, 0, 0, 0, 1]);
    let v = classify_global(&nf_model(&k, E1369), &k).map_err(|e| e.to_string())?;
    ensure(v.global == Verdict::LawfulGood, || format!("global {:?}", v.global))?;
    ensure(v.evil_count == 2, || format!("evil_count {}", v.evil_count))?;
    for r in v.places.iter().filter(|r| r.place.kind == PlaceKind::Finite) {
        ensure(r.alignment.evidence.reduction_class == Some(ReductionClass::Good), || format!("{} not good", r.place))?;
    }
    within(t, 10)?;
    Ok(format!("LawfulGood, evil_count 2, finite places good, {:.2}s", t.elapsed().as_secs_f64()))
}

fn e2e_3() -> Check {
    let mut times = vec![];
    for a in [E121, E121_MIN] {
        for c in [11, 22] {
            let t = Instant::now();
            let k = field(&[c, 0, 0, 0, 0, 0, 1]);
            let v = classify_global(&nf_model(&k, a), &k).map_err(|e| e.to_string())?;
            ensure(v.global == Verdict::LawfulEvil, || format!("x^6+{c}, {a:?}: {:?}", v.global))?;
            within(t, 20)?;
            times.push(t.elapsed().as_secs_f64());
        }
        let q = rationals();
        let v = classify_global(&nf_model(&q, a), &q).map_err(|e| e.to_string())?;
        ensure(v.global == Verdict::Chaotic, || format!("over Q: {:?}", v.global))?;
    }
    let slowest = times.iter().cloned().fold(0.0, f64::max);
    Ok(format!("x^6+11, x^6+22 LawfulEvil, Q Chaotic, slowest {slowest:.2}s"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n: i64 = rng.gen_range(-1_000_000..=1_000_000);
    let d: i64 = if rng.gen_bool(0.5) { 1 } else { rng.gen_range(1..=1000) };
    BigRational::new(n.into(), d.into())
}

fn inv_1() -> Check {
    let disc = |a: [&str; 5]| rat_model(a).discriminant();
    let r = |n: i64| BigRational::from_integer(n.into());
    for a in [E121, E121_MIN] {
        ensure(disc(a) == r(-14641), || format!("disc {a:?} = {}", disc(a)))?;
    }
    for a in [E1369, E1369_MIN] {
        ensure(disc(a) == r(50653), || format!("disc {a:?} = {}", disc(a)))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fields = [rationals(), field(&[1, 0, 1]), field(&[-2, 0, 0, 1])];
    for i in 0..1000 {
        let k = &fields[i % 3];
        let a: Vec<NfElem> =
            (0..5).map(|_| k.elem((0..k.degree()).map(|_| random_rational(&mut rng)).collect())).collect();
        let m = WeierstrassModel::new(<[NfElem; 5]>::try_from(a).unwrap());
        let (c4, c6, d) = (m.c4(), m.c6(), m.discriminant());
        let lhs = d.scale(1728);
        let rhs = c4.square().mul(&c4).sub(&c6.square());
        ensure(lhs == rhs, || format!("identity fails for {m:?}"))?;
    }
    Ok("disc(121C1) = -11^4, disc(1369E1) = 37^3, 1728 disc = c4^3 - c6^2 on 1000 random models".into())
}

fn loc_1() -> Check {
    let cases = [
        (E1369_MIN, 37, Verdict::LawfulEvil, Branch::OddIII, Kodaira::III, 3),
        (E121_MIN, 11, Verdict::Chaotic, Branch::OddIIOrIV, Kodaira::IV, 4),
        (E49, 7, Verdict::Chaotic, Branch::OddIII, Kodaira::III, 3),
    ];
    for (a, p, want, branch, kod, delta) in cases {
        let m = rat_model(a);
        let al = verdict_over(&m, |d| Ok(qp(p, d))).map_err(|e| e.to_string())?;
        let ev = &al.evidence;
        ensure(al.verdict == want, || format!("{a:?} at {p}: {:?}", al.verdict))?;
        ensure(
            ev.branch == Some(branch) && ev.kodaira == Some(kod) && ev.delta == Some(delta),
            || format!("{a:?} at {p}: evidence {ev:?}"),
        )?;
        if p == 11 {
            ensure(ev.disc_is_square == Some(false), || "121C1 discriminant should be a non-square".into())?;
        }
        if p == 7 {
            ensure(ev.symbol_minus_one == Some(-1), || "(-1|F_7) should be -1".into())?;
        }
    }
    Ok("1369E1/Q_37 LawfulEvil (III, 3), 121C1/Q_11 Chaotic (IV, non-square), 49A1/Q_7 Chaotic".into())
}

fn cor_1() -> Check {
    let t = Instant::now();
    let fx = corpus();
    ensure(fx.len() >= 100, || format!("only {} fixtures", fx.len()))?;
    let checks: Vec<_> = fx
        .par_iter()
        .map(|f| check_fixture(f, precision_floor()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let bad: Vec<String> = checks.iter().flat_map(|c| c.mismatches.iter().map(move |m| format!("{}: {m}", c.label))).collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let places: usize = checks.iter().map(|c| c.places).sum();
    within(t, 120)?;
    Ok(format!("{}/{} curves, {places} bad places agree, {:.2}s", checks.len(), fx.len(), t.elapsed().as_secs_f64()))
}

/// Every (curve, bad prime) pair of the corpus.
fn corpus_places() -> Vec<(String, WeierstrassModel<BigRational>, u64)> {
    corpus()
        .into_iter()
        .flat_map(|f| {
            let m = f.model().unwrap();
            f.bad_primes.iter().map(|b| (f.label.clone(), m.clone(), b.p)).collect::<Vec<_>>()
        })
        .collect()
}

fn prop_1() -> Check {
    let t = Instant::now();
    let results: Vec<Result<(usize, usize), String>> = corpus_places()
        .par_iter()
        .map(|(label, m, p)| {
            let base = verdict_over(m, |d| Ok(qp(*p, d))).map_err(|e| format!("{label} at {p}: {e}"))?;
            if !base.verdict.is_lawful() {
                return Ok((0, 0));
            }
            let n = enumerate_quadratic_extensions(&qp(*p, precision_floor())).map_err(|e| e.to_string())?.len();
            let mut bad = 0;
            for i in 0..n {
                let make = |d: i64| Ok(enumerate_quadratic_extensions(&qp(*p, d))?.swap_remove(i).1);
                let a = verdict_over(m, make).map_err(|e| format!("{label} at {p}, extension {i}: {e}"))?;
                if a.verdict != Verdict::LawfulGood {
                    bad += 1;
                }
            }
            Ok((n, bad))
        })
        .collect();
    let mut checked = 0;
    let mut violations = 0;
    for r in results {
        let (n, bad) = r?;
        checked += n;
        violations += bad;
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    ensure(checked > 0, || "no lawful places".into())?;
    Ok(format!("{checked} quadratic extensions of lawful places all LawfulGood, {:.1}s", t.elapsed().as_secs_f64()))
}

/// Q_p and its unramified quadratic extension.
fn tame_fields(p: u64, d: i64) -> [LocalField; 2] {
    let k = qp(p, d);
    let k2 = k.unramified(&irreducible_of_degree(k.residue_field(), 2));
    [k, k2]
}

fn prop_2() -> Check {
    let mut n = 0;
    for (label, m, p) in corpus_places().into_iter().filter(|(_, _, p)| *p >= 5) {
        for level in 0..2 {
            let k = &tame_fields(p, precision_floor())[level];
            let red = reduce(&over(&m, k), k).map_err(|e| e.to_string())?;
            if !(red.is_additive() && red.potentially_good) {
                continue;
            }
            n += 1;
            ensure(type_matches_delta(red.kodaira, red.delta), || format!("{label} at {p}: {} delta {}", red.kodaira, red.delta))?;
            let a = verdict_over(&m, |d| Ok(tame_fields(p, d)[level].clone())).map_err(|e| e.to_string())?;
            let want = tame_lawful_predicate(&k.q(), red.delta);
            ensure(a.verdict.is_lawful() == want, || {
                format!("{label} at {p}, q = {}: verdict {:?}, delta {}", k.q(), a.verdict, red.delta)
            })?;
        }
    }
    ensure(n > 0, || "no places".into())?;
    Ok(format!("{n} tame additive places: lawful iff q = 1 mod 12/gcd(delta, 12), type matches delta"))
}

fn prop_3() -> Check {
    let mut n = 0;
    for (label, m, p) in corpus_places().into_iter().filter(|(_, _, p)| *p >= 5) {
        for k in tame_fields(p, precision_floor()) {
            let red = reduce(&over(&m, &k), &k).map_err(|e| e.to_string())?;
            if !(red.is_additive() && red.potentially_good) || red.delta % 3 == 0 {
                continue;
            }
            n += 1;
            let sq = is_square(&red.minimal_model.discriminant()).map_err(|e| e.to_string())?;
            let s = quadratic_symbol(&Elem::from_i64(&k, -3)).map_err(|e| e.to_string())?;
            ensure(sq == (s == 1), || format!("{label} at {p} (f = {}): square {sq}, (-3|k) = {s}", k.f()))?;
        }
    }
    ensure(n > 0, || "no places".into())?;
    Ok(format!("{n} places with 3 not dividing delta: disc square iff (-3|k) = 1"))
}

fn random_transform(m: &WeierstrassModel<BigRational>, rng: &mut ChaCha8Rng) -> WeierstrassModel<BigRational> {
    let small = |rng: &mut ChaCha8Rng| {
        BigRational::new(rng.gen_range(-40i64..=40).into(), [1i64, 1, 2, 3, 4, 5][rng.gen_range(0..6)].into())
    };
    let num: i64 = [1, -1, 2, -2, 3, 4, 6, 8, -8][rng.gen_range(0..9)];
    let den: i64 = [1, 1, 2, 3, 4][rng.gen_range(0..5)];
    let u = BigRational::new(num.into(), den.into());
    m.transform(&u, &small(rng), &small(rng), &small(rng)).unwrap()
}

fn prop_4() -> Check {
    let t = Instant::now();
    let cases: Vec<(String, WeierstrassModel<BigRational>)> = corpus_places()
        .into_iter()
        .filter(|(_, m, p)| {
            let k = qp(*p, precision_floor());
            *p == 2 && reduce(&over(m, &k), &k).map(|r| r.is_additive() && r.potentially_good).unwrap_or(false)
        })
        .map(|(l, m, _)| (l, m))
        .collect();
    ensure(!cases.is_empty(), || "no curves additive potentially good at 2".into())?;
    let results: Vec<Result<(), String>> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (label, m))| {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
            let base = verdict_over(m, |d| Ok(qp(2, d))).map_err(|e| format!("{label}: {e}"))?.verdict;
            for _ in 0..20 {
                let m2 = random_transform(m, &mut rng);
                let v = verdict_over(&m2, |d| Ok(qp(2, d))).map_err(|e| format!("{label}: {e}"))?.verdict;
                ensure(v == base, || format!("{label}: {base:?} became {v:?} under {m2:?}"))?;
            }
            Ok(())
        })
        .collect();
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok(format!("{} curves x 20 transforms, verdict at 2 unchanged, {:.1}s", cases.len(), t.elapsed().as_secs_f64()))
}

/// Q_2, Q_3, Q_5 and a ramified quadratic extension of each.
fn fac_field(i: usize, digits: i64) -> LocalField {
    let p = [2u64, 3, 5][i % 3];
    let k = qp(p, digits);
    if i % 6 < 3 {
        return k;
    }
    let p = p as i64;
    let eis = if p == 2 { vec![2, 2, 1] } else { vec![-p, 0, 1] };
    extend(&Poly::from_i64(&k, &eis)).unwrap().0
}

fn random_squarefree(rng: &mut ChaCha8Rng, p: i64) -> Vec<i64> {
    loop {
        let n = rng.gen_range(1..=8);
        let mut c: Vec<i64> = (0..=n)
            .map(|_| {
                let x = rng.gen_range(-30i64..=30);
                if rng.gen_bool(0.4) {
                    x * p.pow(rng.gen_range(1..=3))
                } else {
                    x
                }
            })
            .collect();
        if c[n] == 0 {
            c[n] = 1;
        }
        let f = RatPoly::from_i64(&c);
        if f.gcd(&f.derivative()).degree() == 0 {
            return c;
        }
    }
}

fn fac_1() -> Check {
    let t = Instant::now();
    let results: Vec<Result<(), String>> = (0..500)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(7000 + i as u64);
            let d = precision_floor();
            let k = fac_field(i, d);
            let c = random_squarefree(&mut rng, k.p_u64() as i64);
            let f = Poly::from_i64(&k, &c).monic().map_err(|e| e.to_string())?;
            let fs = factor(&f).map_err(|e| format!("{c:?} over {k:?}: {e}"))?;
            let g = expand(&fs).ok_or("no factors")?;
            ensure(g.degree() == f.degree(), || format!("{c:?}: degree {}", g.degree()))?;
            for j in 0..=f.degree() {
                ensure(f.coeff(j).sub(&g.coeff(j)).is_zero(), || format!("{c:?} over {k:?}: coefficient {j} differs"))?;
            }
            let k2 = fac_field(i, 2 * d);
            let wide = degree_pattern(&Poly::from_i64(&k2, &c)).map_err(|e| e.to_string())?;
            let narrow = degree_pattern(&f).map_err(|e| e.to_string())?;
            ensure(wide == narrow, || format!("{c:?} over {k:?}: {narrow:?} vs {wide:?} at doubled precision"))
        })
        .collect();
    let bad: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    ensure(bad.is_empty(), || format!("{} failures, first: {}", bad.len(), bad[0]))?;
    within(t, 120)?;
    Ok(format!("500 polynomials round-trip, patterns stable, {:.1}s", t.elapsed().as_secs_f64()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("E2E-1", e2e_1),
        ("E2E-2", e2e_2),
        ("E2E-3", e2e_3),
        ("INV-1", inv_1),
        ("LOC-1", loc_1),
        ("COR-1", cor_1),
        ("PROP-1", prop_1),
        ("PROP-2", prop_2),
        ("PROP-3", prop_3),
        ("PROP-4", prop_4),
        ("FAC-1", fac_1),
    ];
    // optional filter, as with the default test harness
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, run) in criteria {
        if !only.is_empty() && !only.iter().any(|o| id.contains(o.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {id}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
