//! Number fields Q[x]/(g), their places, and curves over them.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::localfield::extend::extend;
use crate::localfield::factor::factor;
use crate::localfield::{precision_floor, Elem, LocalField, Poly};
use crate::ratpoly::RatPoly;
use crate::weierstrass::{Ring, WeierstrassModel};
use crate::Error;

pub const MAX_DEGREE: usize = 8;

/// Pollard rho iterations allowed when factoring norms.
pub const FACTOR_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct NumberField {
    g: Arc<RatPoly>,
    n: usize,
    r1: usize,
    r2: usize,
    disc: BigInt,
}

/// An element of K, as a polynomial of degree < n in the generator.
#[derive(Debug, Clone, PartialEq)]
pub struct NfElem {
    c: RatPoly,
    g: Arc<RatPoly>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Real,
    Complex,
    Finite,
}

/// How a place is reported.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub struct PlaceLabel {
    pub kind: PlaceKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub e: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f: Option<usize>,
}

impl std::fmt::Display for PlaceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.kind, self.p) {
            (PlaceKind::Finite, Some(p)) => write!(f, "place {} above {p}", self.index),
            (PlaceKind::Real, _) => write!(f, "real place {}", self.index),
            _ => write!(f, "complex place {}", self.index),
        }
    }
}

/// A finite place: a local factor of g and the completion it defines.
#[derive(Debug, Clone)]
pub struct FinitePlace {
    pub p: u64,
    pub index: usize,
    pub factor: Poly,
    pub completion: LocalField,
    /// Image of the generator of K.
    pub generator: Elem,
}

impl FinitePlace {
    pub fn label(&self) -> PlaceLabel {
        PlaceLabel {
            kind: PlaceKind::Finite,
            p: Some(self.p),
            index: self.index,
            e: Some(self.completion.e()),
            f: Some(self.completion.f()),
        }
    }
}

/// Validates g and computes the signature.
pub fn make_number_field(coeffs: &[BigInt]) -> Result<NumberField, Error> {
    let g = RatPoly::from_ints(coeffs);
    if g.is_zero() || g.degree() == 0 {
        return Err(Error::Validation("defining polynomial must have positive degree".into()));
    }
    if !g.leading().is_one() {
        return Err(Error::Validation("defining polynomial must be monic".into()));
    }
    let n = g.degree();
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let d = g.derivative();
    if g.gcd(&d).degree() > 0 {
        return Err(Error::NotSquarefree);
    }
    let disc = RatPoly::resultant(&g, &d).to_integer();
    check_irreducible(&g, &disc)?;
    let r1 = g.count_real_roots();
    Ok(NumberField { g: Arc::new(g), n, r1, r2: (n - r1) / 2, disc })
}

/// Q itself, as Q[x]/(x).
pub fn rationals() -> NumberField {
    make_number_field(&[BigInt::zero(), BigInt::one()]).expect("x is a valid defining polynomial")
}

/// Symmetric representative of the integral Q_p element x modulo p^m.
fn int_mod(x: &Elem, pm: &BigInt) -> BigInt {
    let c = if x.is_zero() { BigInt::zero() } else { x.integral_coords()[0].mod_floor(pm) };
    if &c * 2 > *pm {
        c - pm
    } else {
        c
    }
}

/// Integer polynomial congruent to the monic Q_p polynomial h modulo p^m.
fn int_poly(h: &Poly, pm: &BigInt) -> RatPoly {
    RatPoly::from_ints(&h.coeffs().iter().map(|c| int_mod(c, pm)).collect::<Vec<_>>())
}

/// Exact irreducibility test: local degrees at three primes not dividing
/// disc(g), then recombination of the local factors at one of them.
fn check_irreducible(g: &RatPoly, disc: &BigInt) -> Result<(), Error> {
    let n = g.degree();
    if n == 1 {
        return Ok(());
    }
    // coefficients of a monic factor are bounded by binom(d, i) |g|_2 <= 2^n |g|_2
    let norm2: BigInt = g.coeffs().iter().map(|c| c.to_integer().pow(2)).sum();
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1);
    let mut primes = Vec::new();
    let mut p = 2u64;
    while primes.len() < 3 {
        if arith::is_prime_u64(p) && !(disc % p).is_zero() {
            primes.push(p);
        }
        p += 1;
    }
    let mut possible: Vec<bool> = vec![true; n];
    let mut best: Option<(u64, Vec<Poly>, BigInt, i64)> = None;
    for &p in &primes {
        let pb = BigInt::from(p);
        let mut m = 1;
        let mut pm = pb.clone();
        while pm <= &bound * 2 {
            pm *= &pb;
            m += 1;
        }
        let k = LocalField::qp(&pb, (m + 10).max(precision_floor()));
        let gp = Poly::from_rationals(&k, g.coeffs());
        let facs: Vec<Poly> = factor(&gp)
            .map_err(|e| Error::IrreducibilityUnverified(format!("factoring over Q_{p}: {e}")))?
            .into_iter()
            .map(|(h, _)| h)
            .collect();
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for h in &facs {
            for s in (h.degree()..=n).rev() {
                if sums[s - h.degree()] {
                    sums[s] = true;
                }
            }
        }
        for (d, ok) in possible.iter_mut().enumerate() {
            *ok &= sums[d];
        }
        if best.as_ref().is_none_or(|(_, b, _, _)| facs.len() < b.len()) {
            best = Some((p, facs, pm, m));
        }
    }
    if (1..n).all(|d| !possible[d]) {
        return Ok(());
    }
    let (p, facs, pm, m) = best.expect("at least one prime");
    let r = facs.len();
    for mask in 1u32..(1 << r) - 1 {
        let chosen: Vec<&Poly> = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| &facs[i]).collect();
        let d: usize = chosen.iter().map(|h| h.degree()).sum();
        if 2 * d > n || !possible[d] {
            continue;
        }
        let prod = chosen[1..].iter().fold(chosen[0].clone(), |acc, h| acc.mul(h));
        if prod.coeffs().iter().any(|c| c.prec() < m) {
            return Err(Error::IrreducibilityUnverified(format!("precision lost at {p}")));
        }
        let h = int_poly(&prod, &pm);
        let (_, rem) = g.divrem(&h);
        if rem.is_zero() {
            return Err(Error::Reducible(format!("{h:?} divides the defining polynomial")));
        }
    }
    Ok(())
}

impl NumberField {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Number of real places.
    pub fn r1(&self) -> usize {
        self.r1
    }

    /// Number of complex places.
    pub fn r2(&self) -> usize {
        self.r2
    }

    pub fn defining_polynomial(&self) -> &RatPoly {
        &self.g
    }

    /// Res(g, g').
    pub fn disc_resultant(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_rationals(&self) -> bool {
        self.n == 1
    }

    /// The element sum c_i theta^i.
    pub fn elem(&self, c: Vec<BigRational>) -> NfElem {
        NfElem { c: RatPoly::new(c).rem(&self.g), g: self.g.clone() }
    }

    pub fn from_rational(&self, r: BigRational) -> NfElem {
        self.elem(vec![r])
    }

    /// Absolute norm N_{K/Q}(x).
    pub fn norm(&self, x: &NfElem) -> BigRational {
        RatPoly::resultant(&self.g, &x.c)
    }

    /// Image of x in the completion at v.
    pub fn embed(&self, x: &NfElem, v: &FinitePlace) -> Elem {
        let k = &v.completion;
        x.c.coeffs()
            .iter()
            .rev()
            .fold(Elem::zero(k), |acc, c| acc.mul(&v.generator).add(&Elem::from_rational(k, c)))
    }

    pub fn embed_model(&self, m: &WeierstrassModel<NfElem>, v: &FinitePlace) -> WeierstrassModel<Elem> {
        m.map(|c| self.embed(c, v))
    }

    /// The places above p, with completions at no fewer than `digits` p-adic
    /// digits (more when p divides disc(g)).
    pub fn places_above(&self, p: u64, digits: i64) -> Result<Vec<FinitePlace>, Error> {
        let pb = BigInt::from(p);
        if !arith::is_prime(&pb) {
            return Err(Error::CompositeP(p.to_string()));
        }
        let vd = arith::val_int(&self.disc, &pb);
        let k = LocalField::qp(&pb, digits.max(2 * vd + 20).max(precision_floor()));
        let gp = Poly::from_rationals(&k, self.g.coeffs());
        let mut facs: Vec<Poly> = factor(&gp)?.into_iter().map(|(h, _)| h).collect();
        facs.sort_by_cached_key(|h| {
            let pm = arith::pow_big(&pb, 8);
            (h.degree(), int_poly(h, &pm).coeffs().iter().map(|c| c.to_integer()).collect::<Vec<_>>())
        });
        let mut out = Vec::with_capacity(facs.len());
        for (index, h) in facs.into_iter().enumerate() {
            let (completion, generator) = extend(&h)?;
            out.push(FinitePlace { p, index, factor: h, completion, generator });
        }
        let total: usize = out.iter().map(|v| v.completion.degree()).sum();
        if total != self.n {
            return Err(Error::PrecisionExhausted(format!("local degrees above {p} sum to {total}")));
        }
        Ok(out)
    }

    /// The place above p at `digits` digits closest to `v`, which was found
    /// at another precision.
    pub fn same_place(&self, v: &FinitePlace, digits: i64) -> Result<FinitePlace, Error> {
        let places = self.places_above(v.p, digits)?;
        let pb = BigInt::from(v.p);
        let m = v.factor.coeffs().iter().map(|c| c.prec()).min().unwrap_or(1).max(1);
        let pm = arith::pow_big(&pb, m as u32);
        let old = int_poly(&v.factor, &pm);
        places
            .into_iter()
            .filter(|w| w.factor.degree() == v.factor.degree())
            .max_by_key(|w| {
                let diff = int_poly(&w.factor, &pm).sub(&old);
                diff.coeffs().iter().map(|c| arith::val_int(&c.to_integer(), &pb)).min().unwrap_or(i64::MAX)
            })
            .ok_or_else(|| Error::PrecisionExhausted(format!("place above {} lost at {digits} digits", v.p)))
    }

    /// Primes at which the model can have bad reduction: those dividing the
    /// norm of the discriminant or a denominator of a coefficient.
    pub fn bad_prime_candidates(&self, m: &WeierstrassModel<NfElem>) -> Result<Vec<u64>, Error> {
        let d = m.discriminant();
        if d.is_zero() {
            return Err(Error::SingularModel);
        }
        let nd = self.norm(&d);
        let mut primes = arith::prime_divisors(nd.numer(), FACTOR_BUDGET)?;
        primes.extend(arith::prime_divisors(nd.denom(), FACTOR_BUDGET)?);
        for c in m.coeffs() {
            primes.extend(arith::prime_divisors(&c.c.denominator(), FACTOR_BUDGET)?);
        }
        primes.sort();
        primes.dedup();
        primes
            .iter()
            .map(|q| q.to_u64().ok_or_else(|| Error::Validation(format!("prime {q} does not fit in 64 bits"))))
            .collect()
    }

    /// Labels of the archimedean places.
    pub fn infinite_places(&self) -> Vec<PlaceLabel> {
        let real = (0..self.r1).map(|i| PlaceLabel { kind: PlaceKind::Real, p: None, index: i, e: None, f: None });
        let cplx =
            (0..self.r2).map(|i| PlaceLabel { kind: PlaceKind::Complex, p: None, index: i, e: None, f: None });
        real.chain(cplx).collect()
    }
}

impl NfElem {
    /// Coefficients in the power basis of the generator.
    pub fn coeffs(&self) -> &[BigRational] {
        self.c.coeffs()
    }

    /// The rational number this element equals, if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c.degree() == 0 {
            Some(self.c.coeff(0))
        } else {
            None
        }
    }

    fn wrap(&self, c: RatPoly) -> NfElem {
        NfElem { c: c.rem(&self.g), g: self.g.clone() }
    }
}

impl Ring for NfElem {
    fn int_like(&self, n: i64) -> Self {
        self.wrap(RatPoly::constant(BigRational::from_integer(n.into())))
    }
    fn add(&self, o: &Self) -> Self {
        NfElem { c: self.c.add(&o.c), g: self.g.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        NfElem { c: self.c.sub(&o.c), g: self.g.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        self.wrap(self.c.mul(&o.c))
    }
    fn neg(&self) -> Self {
        NfElem { c: self.c.neg(), g: self.g.clone() }
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero()
    }
    fn inv(&self) -> Result<Self, Error> {
        let s = self.c.inv_mod(&self.g).ok_or_else(|| Error::Validation("division by zero".into()))?;
        Ok(self.wrap(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(c: &[i64]) -> Result<NumberField, Error> {
        make_number_field(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn signatures() {
        let k = nf(&[1, 0, 1]).unwrap();
        assert_eq!((k.degree(), k.r1(), k.r2()), (2, 0, 1));
        let k = nf(&[11, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!((k.degree(), k.r1(), k.r2()), (6, 0, 3));
        let k = nf(&[-2, 0, 1]).unwrap();
        assert_eq!((k.r1(), k.r2()), (2, 0));
        assert_eq!(rationals().r1(), 1);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert_eq!(nf(&[1, 2, 1]), Err(Error::NotSquarefree));
        assert!(matches!(nf(&[-4, 0, 1]), Err(Error::Reducible(_))));
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2) has no linear factor
        assert!(matches!(nf(&[4, 0, 0, 0, 1]), Err(Error::Reducible(_))));
        assert_eq!(nf(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 1]), Err(Error::DegreeTooLarge(9)));
        assert!(matches!(nf(&[1, 2]), Err(Error::Validation(_))));
        // x^4 + 1 is reducible modulo every prime but irreducible over Q
        assert!(nf(&[1, 0, 0, 0, 1]).is_ok());
    }

    #[test]
    fn splitting_of_primes() {
        let k = nf(&[1, 0, 1]).unwrap();
        let ef = |p| k.places_above(p, 40).unwrap().iter().map(|v| (v.completion.e(), v.completion.f())).collect::<Vec<_>>();
        assert_eq!(ef(7), vec![(1, 2)]);
        assert_eq!(ef(5), vec![(1, 1), (1, 1)]);
        assert_eq!(ef(2), vec![(2, 1)]);
        let k = nf(&[37, 0, 0, 0, 1]).unwrap();
        assert_eq!(k.places_above(37, 40).unwrap().len(), 1);
        assert_eq!(k.places_above(37, 40).unwrap()[0].completion.e(), 4);
    }

    #[test]
    fn element_arithmetic() {
        let k = nf(&[1, 0, 1]).unwrap();
        let i = k.elem(vec![BigRational::zero(), BigRational::one()]);
        assert_eq!(i.mul(&i), k.from_rational(BigRational::from_integer((-1).into())));
        let x = i.add(&i.int_like(1));
        assert_eq!(x.mul(&x.inv().unwrap()), i.int_like(1));
        assert_eq!(k.norm(&x), BigRational::from_integer(2.into()));
    }
}
