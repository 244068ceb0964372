//! Tate's algorithm over a finite extension of Q_p.
//!
//! Follows the formulation in Cremona's tables book, with every "mod p"
//! replaced by reduction to the residue field of the tower and every power
//! of p by a power of its uniformizer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::localfield::{Elem, LocalField};
use crate::residue::{FElem, Fq};
use crate::weierstrass::WeierstrassModel;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I0,
    /// I_n, n >= 1.
    I(u32),
    II,
    III,
    IV,
    I0Star,
    /// I_n^*, n >= 1.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

impl FromStr for Kodaira {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Validation(format!("unknown Kodaira symbol {s:?}"));
        Ok(match s {
            "II" => Kodaira::II,
            "III" => Kodaira::III,
            "IV" => Kodaira::IV,
            "IV*" => Kodaira::IVStar,
            "III*" => Kodaira::IIIStar,
            "II*" => Kodaira::IIStar,
            _ => {
                let body = s.strip_prefix('I').ok_or_else(bad)?;
                let (digits, star) = match body.strip_suffix('*') {
                    Some(d) => (d, true),
                    None => (body, false),
                };
                let n: u32 = digits.parse().map_err(|_| bad())?;
                match (n, star) {
                    (0, false) => Kodaira::I0,
                    (0, true) => Kodaira::I0Star,
                    (n, false) => Kodaira::I(n),
                    (n, true) => Kodaira::IStar(n),
                }
            }
        })
    }
}

impl Serialize for Kodaira {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Kodaira {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionClass {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

#[derive(Debug, Clone)]
pub struct ReductionData {
    pub minimal_model: WeierstrassModel<Elem>,
    pub kodaira: Kodaira,
    /// Valuation of the minimal discriminant.
    pub delta: i64,
    pub conductor_exponent: i64,
    pub reduction_class: ReductionClass,
    pub potentially_good: bool,
    /// Degree of the minimal extension acquiring good reduction; residue
    /// characteristic at least 5, additive potentially good reduction only.
    pub semistability_defect_e: Option<u32>,
}

impl ReductionData {
    pub fn is_additive(&self) -> bool {
        self.reduction_class == ReductionClass::Additive
    }
}

/// Minimal model and reduction type of `m` over `k`.
pub fn reduce(m: &WeierstrassModel<Elem>, k: &LocalField) -> Result<ReductionData, Error> {
    let m = m.map(|c| c.embed(k));
    let disc = m.discriminant();
    if disc.is_zero() {
        return Err(if disc.is_exact_zero() {
            Error::SingularModel
        } else {
            Error::PrecisionExhausted("discriminant below precision".into())
        });
    }
    let m = integralize(&m)?;
    let out = Tate::new(k).run(m)?;
    check_invariants(&out, k)?;
    Ok(out)
}

/// Scales by a power of pi until all coefficients are integral.
fn integralize(m: &WeierstrassModel<Elem>) -> Result<WeierstrassModel<Elem>, Error> {
    let mut k = 0i64;
    for (c, w) in m.coeffs().into_iter().zip([1i64, 2, 3, 4, 6]) {
        if let Some(v) = c.valuation() {
            if v < 0 {
                k = k.max((-v + w - 1) / w);
            }
        }
    }
    if k == 0 {
        return Ok(m.clone());
    }
    let s = |c: &Elem, w: i64| c.mul_pi_pow(w * k);
    Ok(WeierstrassModel { a1: s(&m.a1, 1), a2: s(&m.a2, 2), a3: s(&m.a3, 3), a4: s(&m.a4, 4), a6: s(&m.a6, 6) })
}

fn check_invariants(d: &ReductionData, k: &LocalField) -> Result<(), Error> {
    let good = d.delta == 0;
    let ok = good == (d.kodaira == Kodaira::I0)
        && good == (d.reduction_class == ReductionClass::Good)
        && matches!(d.kodaira, Kodaira::I(_))
            == matches!(d.reduction_class, ReductionClass::MultiplicativeSplit | ReductionClass::MultiplicativeNonsplit)
        && d.conductor_exponent >= 0;
    let table = k.p_u64() < 5
        || match d.kodaira {
            Kodaira::II => d.delta == 2,
            Kodaira::III => d.delta == 3,
            Kodaira::IV => d.delta == 4,
            Kodaira::I0Star => d.delta == 6,
            Kodaira::IVStar => d.delta == 8,
            Kodaira::IIIStar => d.delta == 9,
            Kodaira::IIStar => d.delta == 10,
            _ => true,
        };
    if ok && table {
        Ok(())
    } else {
        Err(Error::Validation(format!("inconsistent reduction data: {} with delta {}", d.kodaira, d.delta)))
    }
}

struct Tate<'a> {
    k: &'a LocalField,
    f: Fq<'a>,
    p: u64,
    one: Elem,
    zero: Elem,
}

enum Outcome {
    Done(Kodaira, i64, Option<bool>),
    NonMinimal,
}

impl<'a> Tate<'a> {
    fn new(k: &'a LocalField) -> Self {
        Tate { k, f: k.residue_field().top(), p: k.p_u64(), one: Elem::one(k), zero: Elem::zero(k) }
    }

    fn lift(&self, r: &FElem) -> Elem {
        Elem::lift_residue(self.k, r)
    }

    fn pi_pow(&self, n: i64) -> Elem {
        self.one.mul_pi_pow(n)
    }

    /// Residue of x / pi^n.
    fn red(&self, x: &Elem, n: i64) -> Result<FElem, Error> {
        x.mul_pi_pow(-n).residue()
    }

    /// v(x) < n, failing when precision cannot tell.
    fn below(&self, x: &Elem, n: i64) -> Result<bool, Error> {
        match x.valuation() {
            Some(v) => Ok(v < n),
            None if x.prec() >= n => Ok(false),
            None => Err(Error::PrecisionExhausted(format!("cannot decide v(x) < {n}"))),
        }
    }

    fn divisible(&self, x: &Elem) -> Result<bool, Error> {
        Ok(!self.below(x, 1)?)
    }

    fn int(&self, n: i64) -> FElem {
        self.f.from_i64(n)
    }

    /// Whether a x^2 + b x + c has a root in the residue field.
    fn quadroots(&self, a: &FElem, b: &FElem, c: &FElem) -> bool {
        let f = &self.f;
        if f.is_zero(a) {
            return !f.is_zero(b) || f.is_zero(c);
        }
        f.count_roots(&[c.clone(), b.clone(), a.clone()]) > 0
    }

    fn rst(&self, m: &WeierstrassModel<Elem>, r: &Elem, s: &Elem, t: &Elem) -> Result<WeierstrassModel<Elem>, Error> {
        m.transform(&self.one, r, s, t)
    }

    fn run(&self, mut m: WeierstrassModel<Elem>) -> Result<ReductionData, Error> {
        loop {
            match self.step(&mut m)? {
                Outcome::NonMinimal => {
                    m = WeierstrassModel {
                        a1: m.a1.mul_pi_pow(-1),
                        a2: m.a2.mul_pi_pow(-2),
                        a3: m.a3.mul_pi_pow(-3),
                        a4: m.a4.mul_pi_pow(-4),
                        a6: m.a6.mul_pi_pow(-6),
                    };
                }
                Outcome::Done(kodaira, cond, split) => return self.finish(m, kodaira, cond, split),
            }
        }
    }

    fn finish(
        &self,
        m: WeierstrassModel<Elem>,
        kodaira: Kodaira,
        conductor_exponent: i64,
        split: Option<bool>,
    ) -> Result<ReductionData, Error> {
        let delta = m.discriminant().val()?;
        let c4 = m.c4();
        // v(j) = 3 v(c4) - delta
        let potentially_good = match c4.valuation() {
            Some(v) => 3 * v >= delta,
            None if 3 * c4.prec() >= delta => true,
            None => return Err(Error::PrecisionExhausted("v(c4) below precision".into())),
        };
        let reduction_class = match (kodaira, split) {
            (Kodaira::I0, _) => ReductionClass::Good,
            (Kodaira::I(_), Some(true)) => ReductionClass::MultiplicativeSplit,
            (Kodaira::I(_), _) => ReductionClass::MultiplicativeNonsplit,
            _ => ReductionClass::Additive,
        };
        let semistability_defect_e = (self.p >= 5 && reduction_class == ReductionClass::Additive && potentially_good)
            .then(|| 12 / num_integer::gcd(delta, 12) as u32);
        Ok(ReductionData {
            minimal_model: m,
            kodaira,
            delta,
            conductor_exponent,
            reduction_class,
            potentially_good,
            semistability_defect_e,
        })
    }

    fn step(&self, m: &mut WeierstrassModel<Elem>) -> Result<Outcome, Error> {
        let f = &self.f;
        let p = self.p;
        let vd = m.discriminant().val()?;
        if vd == 0 {
            return Ok(Outcome::Done(Kodaira::I0, 0, None));
        }
        let half = (p != 2).then(|| f.inv(&self.int(2)));

        // move the singular point to (0, 0): pi | a3, a4, a6
        let (b2, b4, b6) = (m.b2(), m.b4(), m.b6());
        let (r, t) = match p {
            2 => {
                if self.divisible(&b2)? {
                    let r = f.pth_root(&m.a4.residue()?);
                    let (a2, a4, a6) = (m.a2.residue()?, m.a4.residue()?, m.a6.residue()?);
                    let v = f.add(&f.mul(&f.add(&f.mul(&f.add(&r, &a2), &r), &a4), &r), &a6);
                    (r.clone(), f.pth_root(&v))
                } else {
                    let ti = f.inv(&m.a1.residue()?);
                    let r = f.mul(&ti, &m.a3.residue()?);
                    let t = f.mul(&ti, &f.add(&m.a4.residue()?, &f.mul(&r, &r)));
                    (r, t)
                }
            }
            3 => {
                let r = if self.divisible(&b2)? {
                    f.pth_root(&f.neg(&b6.residue()?))
                } else {
                    f.neg(&f.mul(&f.inv(&b2.residue()?), &b4.residue()?))
                };
                let t = f.add(&f.mul(&m.a1.residue()?, &r), &m.a3.residue()?);
                (r, t)
            }
            _ => {
                let c4 = m.c4();
                let r = if self.divisible(&c4)? {
                    f.neg(&f.mul(&f.inv(&self.int(12)), &b2.residue()?))
                } else {
                    let c4r = c4.residue()?;
                    let num = f.add(&m.c6().residue()?, &f.mul(&b2.residue()?, &c4r));
                    f.neg(&f.mul(&f.inv(&f.mul(&self.int(12), &c4r)), &num))
                };
                let u = f.add(&f.mul(&m.a1.residue()?, &r), &m.a3.residue()?);
                let t = f.neg(&f.mul(half.as_ref().unwrap(), &u));
                (r, t)
            }
        };
        *m = self.rst(m, &self.lift(&r), &self.zero, &self.lift(&t))?;
        if !(self.divisible(&m.a3)? && self.divisible(&m.a4)? && self.divisible(&m.a6)?) {
            return Err(Error::Validation("singular point not moved to the origin".into()));
        }

        let c4 = m.c4();
        if !self.divisible(&c4)? {
            let split = self.quadroots(&f.one(), &m.a1.residue()?, &f.neg(&m.a2.residue()?));
            return Ok(Outcome::Done(Kodaira::I(vd as u32), 1, Some(split)));
        }
        if self.below(&m.a6, 2)? {
            return Ok(Outcome::Done(Kodaira::II, vd, None));
        }
        if self.below(&m.b8(), 3)? {
            return Ok(Outcome::Done(Kodaira::III, vd - 1, None));
        }
        if self.below(&m.b6(), 3)? {
            return Ok(Outcome::Done(Kodaira::IV, vd - 2, None));
        }

        // pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
        let (s, t) = match p {
            2 => {
                let s = self.lift(&f.pth_root(&m.a2.residue()?));
                let t = self.lift(&f.pth_root(&self.red(&m.a6, 2)?)).mul_pi_pow(1);
                (s, t)
            }
            3 => (m.a1.clone(), m.a3.clone()),
            _ => {
                let h = Elem::one(self.k).div(&Elem::from_i64(self.k, 2))?;
                (m.a1.mul(&h).neg(), m.a3.mul(&h).neg())
            }
        };
        *m = self.rst(m, &self.zero, &s, &t)?;
        if !(self.divisible(&m.a1)?
            && self.divisible(&m.a2)?
            && !self.below(&m.a3, 2)?
            && !self.below(&m.a4, 2)?
            && !self.below(&m.a6, 3)?)
        {
            return Err(Error::Validation("second change of coordinates failed".into()));
        }

        // the cubic T^3 + b T^2 + c T + d
        let b = self.red(&m.a2, 1)?;
        let c = self.red(&m.a4, 2)?;
        let d = self.red(&m.a6, 3)?;
        let (bb, cc, bc) = (f.mul(&b, &b), f.mul(&c, &c), f.mul(&b, &c));
        let w = {
            let t1 = f.mul(&self.int(27), &f.mul(&d, &d));
            let t2 = f.mul(&bb, &cc);
            let t3 = f.mul(&self.int(4), &f.mul(&f.mul(&b, &bb), &d));
            let t4 = f.mul(&self.int(18), &f.mul(&bc, &d));
            let t5 = f.mul(&self.int(4), &f.mul(&c, &cc));
            f.add(&f.sub(&f.add(&f.sub(&t1, &t2), &t3), &t4), &t5)
        };
        let x = f.sub(&f.mul(&self.int(3), &c), &bb);

        if !f.is_zero(&w) {
            return Ok(Outcome::Done(Kodaira::I0Star, vd - 4, None));
        }

        if !f.is_zero(&x) {
            // a double root; move it to T = 0
            let r = match p {
                2 => f.pth_root(&c),
                3 => f.mul(&c, &f.inv(&b)),
                _ => {
                    let num = f.sub(&bc, &f.mul(&self.int(9), &d));
                    f.mul(&num, &f.inv(&f.mul(&self.int(2), &x)))
                }
            };
            *m = self.rst(m, &self.lift(&r).mul_pi_pow(1), &self.zero, &self.zero)?;
            let (mut ix, mut iy) = (3i64, 3i64);
            let (mut mx, mut my) = (2i64, 2i64);
            loop {
                if ix + iy > vd + 6 {
                    return Err(Error::PrecisionExhausted("I_n* subprocedure did not terminate".into()));
                }
                let a3t = self.red(&m.a3, my)?;
                let a6t = self.red(&m.a6, mx + my)?;
                let disc_y = f.add(&f.mul(&a3t, &a3t), &f.mul(&self.int(4), &a6t));
                if !f.is_zero(&disc_y) {
                    break;
                }
                let tt = match p {
                    2 => f.pth_root(&a6t),
                    _ => f.neg(&f.mul(&a3t, half.as_ref().unwrap())),
                };
                *m = self.rst(m, &self.zero, &self.zero, &self.lift(&tt).mul(&self.pi_pow(my)))?;
                my += 1;
                iy += 1;
                let a2t = self.red(&m.a2, 1)?;
                let a4t = self.red(&m.a4, 1 + mx)?;
                let a6t = self.red(&m.a6, mx + my)?;
                let disc_x = f.sub(&f.mul(&a4t, &a4t), &f.mul(&self.int(4), &f.mul(&a2t, &a6t)));
                if !f.is_zero(&disc_x) {
                    break;
                }
                let rr = match p {
                    2 => f.pth_root(&f.mul(&a6t, &f.inv(&a2t))),
                    _ => f.neg(&f.mul(&a4t, &f.inv(&f.mul(&self.int(2), &a2t)))),
                };
                *m = self.rst(m, &self.lift(&rr).mul(&self.pi_pow(mx)), &self.zero, &self.zero)?;
                mx += 1;
                ix += 1;
            }
            let n = ix + iy - 5;
            return Ok(Outcome::Done(Kodaira::IStar(n as u32), vd - ix - iy + 1, None));
        }

        // a triple root; move it to T = 0
        let r = match p {
            2 => b.clone(),
            3 => f.pth_root(&f.neg(&d)),
            _ => f.neg(&f.mul(&b, &f.inv(&self.int(3)))),
        };
        *m = self.rst(m, &self.lift(&r).mul_pi_pow(1), &self.zero, &self.zero)?;
        let a3t = self.red(&m.a3, 2)?;
        let a6t = self.red(&m.a6, 4)?;
        if !f.is_zero(&f.add(&f.mul(&a3t, &a3t), &f.mul(&self.int(4), &a6t))) {
            return Ok(Outcome::Done(Kodaira::IVStar, vd - 6, None));
        }
        let tt = match p {
            2 => f.pth_root(&a6t),
            _ => f.neg(&f.mul(&a3t, half.as_ref().unwrap())),
        };
        *m = self.rst(m, &self.zero, &self.zero, &self.lift(&tt).mul_pi_pow(2))?;
        if self.below(&m.a4, 4)? {
            return Ok(Outcome::Done(Kodaira::IIIStar, vd - 7, None));
        }
        if self.below(&m.a6, 6)? {
            return Ok(Outcome::Done(Kodaira::IIStar, vd - 8, None));
        }
        Ok(Outcome::NonMinimal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kodaira_symbols_round_trip() {
        let all = [
            Kodaira::I0,
            Kodaira::I(7),
            Kodaira::II,
            Kodaira::III,
            Kodaira::IV,
            Kodaira::I0Star,
            Kodaira::IStar(3),
            Kodaira::IVStar,
            Kodaira::IIIStar,
            Kodaira::IIStar,
        ];
        for k in all {
            assert_eq!(k.to_string().parse::<Kodaira>().unwrap(), k);
        }
        assert!("V".parse::<Kodaira>().is_err());
        assert!("Ix".parse::<Kodaira>().is_err());
    }
}
