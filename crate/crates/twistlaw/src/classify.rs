//! Lawful good, lawful evil or chaotic: per place, then globally.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::localfield::extend::extend;
use crate::localfield::factor::{degree_pattern, factor};
use crate::localfield::normgroup::{minus_one_is_norm, NormTest};
use crate::localfield::splitting::{splitting_tower, DEFAULT_DEGREE_CAP};
use crate::localfield::symbols::{is_cube, is_square, quadratic_symbol};
use crate::localfield::{precision_floor, Elem, LocalField, Poly};
use crate::numberfield::{FinitePlace, NfElem, NumberField, PlaceKind, PlaceLabel};
use crate::tate::{reduce, Kodaira, ReductionClass, ReductionData};
use crate::weierstrass::{gamma_poly, WeierstrassModel};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    LawfulGood,
    LawfulEvil,
    Chaotic,
    LawfulUndeterminedAlignment,
}

impl Verdict {
    pub fn is_lawful(self) -> bool {
        self != Verdict::Chaotic
    }

    fn from_sign(s: i8) -> Verdict {
        if s == 1 {
            Verdict::LawfulGood
        } else {
            Verdict::LawfulEvil
        }
    }
}

/// Which rule of the decision procedure produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Real,
    Complex,
    GoodReduction,
    PotentiallyMultiplicative,
    /// Odd residue characteristic, type I0*.
    #[serde(rename = "odd_i0_star")]
    OddI0Star,
    /// Odd residue characteristic, type III or III*.
    #[serde(rename = "odd_iii")]
    OddIII,
    /// Odd residue characteristic, type II, II*, IV or IV*.
    #[serde(rename = "odd_ii_or_iv")]
    OddIIOrIV,
    /// Residue characteristic 2, additive potentially good.
    TwoAdic,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Evidence {
    pub branch: Option<Branch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kodaira: Option<Kodaira>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction_class: Option<ReductionClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potentially_good: Option<bool>,
    /// (-1 | k)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol_minus_one: Option<i8>,
    /// (-2 | k)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol_minus_two: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc_is_square: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_minus_three_in_k: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cube_root_disc_in_k: Option<bool>,
    /// Degrees of the irreducible factors of gamma over k.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_degrees: Option<Vec<usize>>,
    /// Relative degrees of the splitting tower of gamma.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitting_steps: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_test: Option<NormTest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl Alignment {
    fn new(verdict: Verdict, evidence: Evidence) -> Self {
        Alignment { verdict, evidence }
    }
}

pub fn classify_real() -> Alignment {
    Alignment::new(Verdict::Chaotic, Evidence { branch: Some(Branch::Real), ..Default::default() })
}

pub fn classify_complex() -> Alignment {
    Alignment::new(Verdict::LawfulEvil, Evidence { branch: Some(Branch::Complex), ..Default::default() })
}

/// The local verdict over a finite extension k of Q_p, at the precision of k.
pub fn classify_local(m: &WeierstrassModel<Elem>, k: &LocalField) -> Result<Alignment, Error> {
    let red = reduce(m, k)?;
    classify_reduced(&red, k)
}

/// The local verdict with the working precision chosen from the curve.
///
/// `build(digits)` returns the completion and the model at that many p-adic
/// digits. The first attempt uses the larger of the precision floor and what
/// the 2-adic octic needs; a precision failure is retried once at twice that.
pub fn classify_place<B>(build: B) -> Result<Alignment, Error>
where
    B: Fn(i64) -> Result<(LocalField, WeierstrassModel<Elem>), Error>,
{
    classify_place_from(precision_floor(), build)
}

/// As `classify_place`, starting from at least `digits` digits.
pub fn classify_place_from<B>(digits: i64, build: B) -> Result<Alignment, Error>
where
    B: Fn(i64) -> Result<(LocalField, WeierstrassModel<Elem>), Error>,
{
    let mut digits = digits.max(precision_floor());
    let (mut k, m) = build(digits)?;
    let mut red = reduce(&m, &k)?;
    let need = required_digits(&red, &k)?;
    if need > digits {
        digits = need;
        let (k2, m2) = build(digits)?;
        red = reduce(&m2, &k2)?;
        k = k2;
    }
    match classify_with(&red, &k, false) {
        Err(Error::PrecisionExhausted(_)) => {
            let (k2, m2) = build(2 * digits)?;
            classify_with(&reduce(&m2, &k2)?, &k2, true)
        }
        other => other,
    }
}

/// p-adic digits needed for the 2-adic branch: max(40, 2 v(disc) + 20) for the
/// rescaled octic, and 0 when that branch does not apply.
pub fn required_digits(red: &ReductionData, k: &LocalField) -> Result<i64, Error> {
    if k.p_u64() != 2 || red.reduction_class != ReductionClass::Additive || !red.potentially_good {
        return Ok(0);
    }
    let mm = &red.minimal_model;
    let (_, vd) = reduced_gamma(&mm.c4(), &mm.c6())?;
    let v = (vd + k.e() - 1) / k.e();
    Ok((2 * v + 20).max(40))
}

/// gamma(pi^s y) / pi^(8s) for the largest s keeping it integral, and the
/// valuation of its discriminant. For c4 = 0 the squarefree part
/// x^7 - 8 c6 x is used instead.
fn reduced_gamma(c4: &Elem, c6: &Elem) -> Result<(Poly, i64), Error> {
    let k = c4.field().clone();
    let v = |n: i64| Elem::from_i64(&k, n).val();
    let (v2, v3) = (v(2)?, v(3)?);
    let v4 = c4.valuation();
    let v6 = c6.valuation();
    let mut s = i64::MAX;
    if let Some(v4) = v4 {
        s = s.min((2 * v4 + v3).div_euclid(8)).min((v4 + v2 + v3).div_euclid(4));
    }
    if let Some(v6) = v6 {
        s = s.min((3 * v2 + v6).div_euclid(6));
    }
    let s = s.max(0);
    match v4 {
        Some(v4) => {
            let g = gamma_poly(c4, c6);
            let coeffs = g.coeffs().iter().enumerate().map(|(i, c)| c.mul_pi_pow(s * (i as i64 - 8))).collect();
            let disc1728 = c4.pow(3).sub(&c6.square()).val()?;
            let vd = 32 * v2 + 7 * v3 + 2 * v4 + 4 * disc1728 - 56 * s;
            Ok((Poly::new(&k, coeffs), vd))
        }
        None => {
            let a = c6.mul(&Elem::from_i64(&k, 8)).mul_pi_pow(-6 * s);
            let mut coeffs = vec![Elem::zero(&k); 8];
            coeffs[1] = a.neg();
            coeffs[7] = Elem::one(&k);
            let vd = 6 * (v2 + v3) + 7 * a.val()?;
            Ok((Poly::new(&k, coeffs), vd))
        }
    }
}

/// The local verdict from precomputed reduction data over k.
pub fn classify_reduced(red: &ReductionData, k: &LocalField) -> Result<Alignment, Error> {
    classify_with(red, k, true)
}

/// With `last` unset, a precision failure in the splitting field is reported
/// as an error so that the caller can retry; otherwise it gives an
/// undetermined alignment.
fn classify_with(red: &ReductionData, k: &LocalField, last: bool) -> Result<Alignment, Error> {
    let mut ev = Evidence {
        kodaira: Some(red.kodaira),
        delta: Some(red.delta),
        reduction_class: Some(red.reduction_class),
        potentially_good: Some(red.potentially_good),
        ..Default::default()
    };
    if red.reduction_class == ReductionClass::Good {
        ev.branch = Some(Branch::GoodReduction);
        return Ok(Alignment::new(Verdict::LawfulGood, ev));
    }
    if !red.potentially_good {
        ev.branch = Some(Branch::PotentiallyMultiplicative);
        return Ok(Alignment::new(Verdict::Chaotic, ev));
    }
    if k.p_u64() == 2 {
        ev.branch = Some(Branch::TwoAdic);
        let verdict = two_adic(red, k, &mut ev, last)?;
        return Ok(Alignment::new(verdict, ev));
    }
    let minus_one = quadratic_symbol(&Elem::from_i64(k, -1))?;
    ev.symbol_minus_one = Some(minus_one);
    let verdict = match red.kodaira {
        Kodaira::I0Star => {
            ev.branch = Some(Branch::OddI0Star);
            Verdict::from_sign(minus_one)
        }
        Kodaira::III | Kodaira::IIIStar => {
            ev.branch = Some(Branch::OddIII);
            if minus_one == 1 {
                let minus_two = quadratic_symbol(&Elem::from_i64(k, -2))?;
                ev.symbol_minus_two = Some(minus_two);
                Verdict::from_sign(minus_two)
            } else {
                Verdict::Chaotic
            }
        }
        Kodaira::II | Kodaira::IIStar | Kodaira::IV | Kodaira::IVStar => {
            ev.branch = Some(Branch::OddIIOrIV);
            let sq = is_square(&red.minimal_model.discriminant())?;
            ev.disc_is_square = Some(sq);
            if sq {
                // a square discriminant has even valuation
                let s = if (red.delta / 2) % 2 == 0 { 1 } else { minus_one };
                Verdict::from_sign(s)
            } else {
                Verdict::Chaotic
            }
        }
        other => {
            return Err(Error::Validation(format!("type {other} with potentially good reduction")));
        }
    };
    Ok(Alignment::new(verdict, ev))
}

fn two_adic(red: &ReductionData, k: &LocalField, ev: &mut Evidence, last: bool) -> Result<Verdict, Error> {
    let mm = &red.minimal_model;
    let (c4, c6) = (mm.c4(), mm.c6());
    let (gamma, _) = reduced_gamma(&c4, &c6)?;
    // the x^2 dropped for c4 = 0 counts as a repeated linear factor
    let mut facs = factor(&gamma)?;
    if c4.is_zero() {
        for (h, m) in facs.iter_mut() {
            if h.degree() == 1 && h.coeff(0).is_zero() {
                *m += 1;
            }
        }
    }
    let mut degs: Vec<usize> = facs.iter().flat_map(|(h, e)| std::iter::repeat_n(h.degree(), *e)).collect();
    degs.sort();
    ev.gamma_degrees = Some(degs.clone());
    let minus_three = Elem::from_i64(k, -3);
    let s3 = is_square(&minus_three)?;
    ev.sqrt_minus_three_in_k = Some(s3);
    let lawful = if s3 {
        degs.len() > 1
    } else {
        let cube = is_cube(&mm.discriminant())?;
        ev.cube_root_disc_in_k = Some(cube);
        if cube {
            let (l, _) = extend(&Poly::new(k, vec![Elem::from_i64(k, 3), Elem::zero(k), Elem::one(k)]))?;
            let mut any = false;
            for (h, _) in facs.iter().filter(|(h, _)| h.degree() > 1) {
                if degree_pattern(&h.embed(&l))?.len() > 1 {
                    any = true;
                    break;
                }
            }
            any
        } else {
            false
        }
    };
    if !lawful {
        return Ok(Verdict::Chaotic);
    }
    let tower = match splitting_tower(&gamma, DEFAULT_DEGREE_CAP) {
        Ok(t) => t,
        Err(Error::PrecisionExhausted(_)) if !last => return Err(Error::PrecisionExhausted("splitting field".into())),
        Err(Error::DegreeOverflow(_)) | Err(Error::PrecisionExhausted(_)) => {
            ev.norm_test = Some(NormTest::Undetermined);
            return Ok(Verdict::LawfulUndeterminedAlignment);
        }
        Err(e) => return Err(e),
    };
    ev.splitting_steps = Some(tower.steps.clone());
    let t = minus_one_is_norm(k, &tower.top)?;
    ev.norm_test = Some(t);
    Ok(match t {
        NormTest::Norm => Verdict::LawfulGood,
        NormTest::NotNorm => Verdict::LawfulEvil,
        NormTest::Undetermined => Verdict::LawfulUndeterminedAlignment,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceReport {
    pub place: PlaceLabel,
    #[serde(flatten)]
    pub alignment: Alignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalVerdict {
    pub global: Verdict,
    /// (-1)^evil_count when the curve is lawful with known alignment.
    pub root_number: Option<i8>,
    /// Archimedean places and the finite places above 2 and above
    /// `bad_primes`; every other finite place has good reduction and is
    /// lawful good.
    pub places: Vec<PlaceReport>,
    pub evil_count: usize,
    pub bad_primes: Vec<u64>,
}

/// Verdicts at every place of K and their combination.
pub fn classify_global(m: &WeierstrassModel<NfElem>, k: &NumberField) -> Result<GlobalVerdict, Error> {
    classify_global_from(m, k, precision_floor())
}

/// As `classify_global`, with local work starting at `digits` p-adic digits.
pub fn classify_global_from(m: &WeierstrassModel<NfElem>, k: &NumberField, digits: i64) -> Result<GlobalVerdict, Error> {
    m.invariants()?;
    let mut places: Vec<PlaceReport> = k
        .infinite_places()
        .into_iter()
        .map(|place| {
            let alignment = if place.kind == PlaceKind::Real { classify_real() } else { classify_complex() };
            PlaceReport { place, alignment }
        })
        .collect();
    let bad = k.bad_prime_candidates(m)?;
    // places above 2 are always reported
    let mut primes = bad.clone();
    if !primes.contains(&2) {
        primes.insert(0, 2);
    }
    let finite: Vec<Vec<PlaceReport>> =
        primes.par_iter().map(|&p| classify_above(m, k, p, digits)).collect::<Result<_, _>>()?;
    places.extend(finite.into_iter().flatten());
    Ok(combine(places, bad))
}

fn classify_above(m: &WeierstrassModel<NfElem>, k: &NumberField, p: u64, digits: i64) -> Result<Vec<PlaceReport>, Error> {
    let digits = digits.max(precision_floor());
    let vs = match k.places_above(p, digits) {
        Err(Error::PrecisionExhausted(_)) => k.places_above(p, 2 * digits),
        other => other,
    }
    .map_err(|e| with_place(e, &format!("places above {p}")))?;
    vs.iter()
        .map(|v| {
            let base = v.completion.digits();
            let build = |d: i64| {
                let w: FinitePlace = if d == base { v.clone() } else { k.same_place(v, d)? };
                Ok((w.completion.clone(), k.embed_model(m, &w)))
            };
            let alignment = classify_place_from(base, build).map_err(|e| with_place(e, &v.label().to_string()))?;
            Ok(PlaceReport { place: v.label(), alignment })
        })
        .collect()
}

fn with_place(e: Error, label: &str) -> Error {
    match e {
        Error::PrecisionExhausted(s) => Error::PrecisionExhausted(format!("{label}: {s}")),
        Error::Validation(s) => Error::Validation(format!("{label}: {s}")),
        other => other,
    }
}

fn combine(places: Vec<PlaceReport>, bad_primes: Vec<u64>) -> GlobalVerdict {
    let evil_count = places.iter().filter(|r| r.alignment.verdict == Verdict::LawfulEvil).count();
    let verdicts: Vec<Verdict> = places.iter().map(|r| r.alignment.verdict).collect();
    let global = if verdicts.contains(&Verdict::Chaotic) {
        Verdict::Chaotic
    } else if verdicts.contains(&Verdict::LawfulUndeterminedAlignment) {
        Verdict::LawfulUndeterminedAlignment
    } else if evil_count % 2 == 1 {
        Verdict::LawfulEvil
    } else {
        Verdict::LawfulGood
    };
    let root_number = match global {
        Verdict::LawfulGood => Some(1),
        Verdict::LawfulEvil => Some(-1),
        _ => None,
    };
    GlobalVerdict { global, root_number, places, evil_count, bad_primes }
}

/// Root number over an extension of degree `degree` of a lawful curve.
pub fn predicted_root_number(v: &GlobalVerdict, degree: u64) -> Result<i8, Error> {
    match (v.global, v.root_number) {
        (Verdict::LawfulGood | Verdict::LawfulEvil, Some(w)) => Ok(if degree.is_multiple_of(2) { 1 } else { w }),
        _ => Err(Error::NotLawful),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hint {
    BecomesLawfulOverSomeQuadratic,
    StaysChaotic,
    NotApplicable,
}

/// Whether some quadratic extension makes the curve lawful, for curves
/// without additive reduction above 2: exactly when j is integral.
pub fn quadratic_lawfulness_hint(v: &GlobalVerdict) -> Hint {
    let finite = v.places.iter().filter(|r| r.place.kind == PlaceKind::Finite);
    let additive_at_two = finite
        .clone()
        .any(|r| r.place.p == Some(2) && r.alignment.evidence.reduction_class == Some(ReductionClass::Additive));
    if additive_at_two {
        return Hint::NotApplicable;
    }
    if finite.clone().any(|r| r.alignment.evidence.potentially_good == Some(false)) {
        Hint::StaysChaotic
    } else {
        Hint::BecomesLawfulOverSomeQuadratic
    }
}

/// Independent check for residue characteristic at least 5 with additive,
/// potentially good reduction: lawful exactly when q = 1 mod 12/gcd(delta, 12).
pub fn tame_lawful_predicate(q: &num_bigint::BigUint, delta: i64) -> bool {
    let e = 12 / num_integer::gcd(delta, 12);
    (q % num_bigint::BigUint::from(e as u64)) == num_bigint::BigUint::from(1u32)
}
