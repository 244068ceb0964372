//! Elements of a local field tower with absolute precision tracking.
//!
//! An element is p^shift * sum_b c_b * b over the monomial basis b of the
//! tower, with integer coordinates c_b not all divisible by p. The element is
//! known modulo pi^prec; coordinate c_b is kept modulo
//! p^ceil((prec - e*shift - w_b) / e), where w_b is the valuation of b.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::residue::FElem;
use crate::Error;

use super::field::{pow_p, FieldInner, LocalField};

/// Precision marker for exact zero.
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Clone)]
pub struct Elem {
    field: LocalField,
    shift: i64,
    coords: Vec<BigInt>,
    prec: i64,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

fn mul_level(f: &FieldInner, l: usize, a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if l == 0 {
        return vec![(&a[0] * &b[0]).mod_floor(m)];
    }
    let sub = f.dims[l - 1];
    let st = &f.stages[l - 1];
    let d = st.degree();
    let mut prod: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); sub]; 2 * d - 1];
    for i in 0..d {
        let ai = &a[i * sub..(i + 1) * sub];
        if ai.iter().all(|c| c.is_zero()) {
            continue;
        }
        for j in 0..d {
            let bj = &b[j * sub..(j + 1) * sub];
            if bj.iter().all(|c| c.is_zero()) {
                continue;
            }
            let t = mul_level(f, l - 1, ai, bj, m);
            for (x, y) in prod[i + j].iter_mut().zip(t) {
                *x += y;
            }
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c: Vec<BigInt> = std::mem::take(&mut prod[k]).into_iter().map(|x| x.mod_floor(m)).collect();
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        for (mm, phi) in st.poly.iter().enumerate().take(d) {
            if phi.iter().all(|x| x.is_zero()) {
                continue;
            }
            let t = mul_level(f, l - 1, &c, phi, m);
            for (x, y) in prod[k - d + mm].iter_mut().zip(t) {
                *x -= y;
            }
        }
    }
    let mut out = Vec::with_capacity(sub * d);
    for block in prod.into_iter().take(d) {
        out.extend(block.into_iter().map(|x| x.mod_floor(m)));
    }
    out
}

impl Elem {
    /// Builds and normalizes p^shift * sum coords_b * b known to absolute precision `prec`.
    pub fn from_parts(field: &LocalField, shift: i64, coords: Vec<BigInt>, prec: i64) -> Elem {
        debug_assert_eq!(coords.len(), field.degree());
        let e = field.e();
        let p = field.p().clone();
        let n = field.0.digits * e;
        let mut shift = shift;
        let mut coords = coords;
        let mut prec = prec.min(EXACT);
        let mut pow_cache: HashMap<i64, BigInt> = HashMap::new();
        let weights = field.weights();
        let reduce = |coords: &mut Vec<BigInt>, shift: i64, prec: i64, cache: &mut HashMap<i64, BigInt>| {
            if prec >= EXACT {
                return;
            }
            for (c, &w) in coords.iter_mut().zip(weights) {
                let k = ceil_div(prec - e * shift - w, e);
                if k <= 0 {
                    c.set_zero();
                } else {
                    let m = cache.entry(k).or_insert_with(|| pow_p(field, k));
                    *c = c.mod_floor(m);
                }
            }
        };
        loop {
            reduce(&mut coords, shift, prec, &mut pow_cache);
            if coords.iter().all(|c| c.is_zero()) {
                return Elem::zero_prec(field, prec);
            }
            if coords.iter().all(|c| (c % &p).is_zero()) {
                for c in coords.iter_mut() {
                    *c /= &p;
                }
                shift += 1;
                continue;
            }
            break;
        }
        let wmin = coords
            .iter()
            .zip(weights)
            .filter(|(c, _)| !(*c % &p).is_zero())
            .map(|(_, &w)| w)
            .min()
            .unwrap();
        let v = e * shift + wmin;
        if prec > v + n {
            prec = v + n;
            reduce(&mut coords, shift, prec, &mut pow_cache);
        }
        Elem { field: field.clone(), shift, coords, prec }
    }

    pub fn zero(field: &LocalField) -> Elem {
        Elem::zero_prec(field, EXACT)
    }

    /// Zero known only modulo pi^prec.
    pub fn zero_prec(field: &LocalField, prec: i64) -> Elem {
        Elem { field: field.clone(), shift: 0, coords: vec![BigInt::zero(); field.degree()], prec }
    }

    pub fn one(field: &LocalField) -> Elem {
        Elem::from_int(field, &BigInt::one())
    }

    pub fn from_i64(field: &LocalField, n: i64) -> Elem {
        Elem::from_int(field, &BigInt::from(n))
    }

    pub fn from_int(field: &LocalField, n: &BigInt) -> Elem {
        Elem::from_rational(field, &BigRational::from_integer(n.clone()))
    }

    pub fn from_rational(field: &LocalField, r: &BigRational) -> Elem {
        if r.is_zero() {
            return Elem::zero(field);
        }
        let p = field.p();
        let v = arith::val_rat(r, p);
        let num = r.numer() / pow_p(field, arith::val_int(r.numer(), p));
        let den = r.denom() / pow_p(field, arith::val_int(r.denom(), p));
        let digits = field.digits() + 1;
        let m = pow_p(field, digits);
        let c0 = (num * arith::inv_mod(&den, &m).unwrap()).mod_floor(&m);
        let mut coords = vec![BigInt::zero(); field.degree()];
        coords[0] = c0;
        let e = field.e();
        Elem::from_parts(field, v, coords, e * v + field.precision())
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// True if indistinguishable from zero at the current precision.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.prec >= EXACT
    }

    pub fn is_one(&self) -> bool {
        !self.is_zero() && (self - &Elem::one(&self.field)).is_zero()
    }

    /// Normalized valuation (v(pi) = 1), or None when below precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let p = self.field.p();
        let wmin = self
            .coords
            .iter()
            .zip(self.field.weights())
            .filter(|(c, _)| !(*c % p).is_zero())
            .map(|(_, &w)| w)
            .min()
            .unwrap();
        Some(self.field.e() * self.shift + wmin)
    }

    /// Valuation, or the precision for elements below precision.
    pub fn valuation_or_prec(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Valuation, failing with `PrecisionExhausted` below precision.
    pub fn val(&self) -> Result<i64, Error> {
        self.valuation()
            .ok_or_else(|| Error::PrecisionExhausted("valuation of an element below precision".into()))
    }

    /// Relative precision (absolute precision minus valuation).
    pub fn rel_prec(&self) -> i64 {
        self.prec - self.valuation_or_prec()
    }

    /// Lowers the absolute precision to at most `prec`.
    pub fn with_prec(&self, prec: i64) -> Elem {
        if prec >= self.prec {
            return self.clone();
        }
        Elem::from_parts(&self.field, self.shift, self.coords.clone(), prec)
    }

    /// Coordinates of an integral element as integers (p^shift folded in).
    pub fn integral_coords(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![BigInt::zero(); self.coords.len()];
        }
        assert!(self.shift >= 0, "integral_coords of a non-integral element");
        let m = pow_p(&self.field, self.shift);
        self.coords.iter().map(|c| c * &m).collect()
    }

    pub fn neg(&self) -> Elem {
        if self.is_zero() {
            return self.clone();
        }
        let coords = self.coords.iter().map(|c| -c).collect();
        Elem::from_parts(&self.field, self.shift, coords, self.prec)
    }

    pub fn add(&self, other: &Elem) -> Elem {
        self.check_field(other);
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return other.with_prec(prec);
        }
        if other.is_zero() {
            return self.with_prec(prec);
        }
        let s = self.shift.min(other.shift);
        let ma = pow_p(&self.field, self.shift - s);
        let mb = pow_p(&self.field, other.shift - s);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * &ma + b * &mb)
            .collect();
        Elem::from_parts(&self.field, s, coords, prec)
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        self.check_field(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Elem::zero(&self.field);
        }
        let va = self.valuation_or_prec();
        let vb = other.valuation_or_prec();
        let prec = (self.prec.saturating_add(vb)).min(other.prec.saturating_add(va));
        if self.is_zero() || other.is_zero() {
            return Elem::zero_prec(&self.field, prec);
        }
        let e = self.field.e();
        let shift = self.shift + other.shift;
        let k = ceil_div(prec - e * shift, e).max(1);
        let m = pow_p(&self.field, k);
        let inner = &self.field.0;
        let coords = mul_level(inner, inner.stages.len(), &self.coords, &other.coords, &m);
        Elem::from_parts(&self.field, shift, coords, prec)
    }

    pub fn square(&self) -> Elem {
        self.mul(self)
    }

    pub fn pow(&self, n: u64) -> Elem {
        let mut r = Elem::one(&self.field);
        let mut b = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = r.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.square();
            }
        }
        r
    }

    /// Multiplies by p^k exactly.
    pub fn mul_p_pow(&self, k: i64) -> Elem {
        if self.is_zero() {
            let prec = if self.prec >= EXACT { EXACT } else { self.prec + k * self.field.e() };
            return Elem::zero_prec(&self.field, prec);
        }
        Elem {
            field: self.field.clone(),
            shift: self.shift + k,
            coords: self.coords.clone(),
            prec: self.prec + k * self.field.e(),
        }
    }

    /// Multiplies by pi^k.
    pub fn mul_pi_pow(&self, k: i64) -> Elem {
        if k == 0 {
            return self.clone();
        }
        if self.field.e() == 1 {
            return self.mul_p_pow(k);
        }
        self.mul(&self.field.pi_pow(k))
    }

    fn unit_inv(&self) -> Result<Elem, Error> {
        let f = &self.field;
        let r = self.residue()?;
        let k = f.residue_field().top();
        let z0 = Elem::lift_residue(f, &k.inv(&r));
        let rel = self.prec.min(f.precision());
        let two = Elem::from_i64(f, 2);
        let mut z = z0;
        let mut good = 1;
        while good < rel {
            z = z.mul(&two.sub(&self.mul(&z)));
            good *= 2;
        }
        Ok(z.with_prec(rel))
    }

    pub fn inv(&self) -> Result<Elem, Error> {
        if self.is_zero() {
            return Err(Error::PrecisionExhausted("inverse of an element below precision".into()));
        }
        let f = self.field.clone();
        let e = f.e();
        let v = self.valuation().unwrap();
        let rel = self.prec - v;
        let y = Elem { field: f.clone(), shift: 0, coords: self.coords.clone(), prec: self.prec - e * self.shift };
        let vy = v - e * self.shift;
        let out = if vy == 0 {
            y.unit_inv()?.mul_p_pow(-self.shift)
        } else {
            let pik = f.uniformizer().pow((e - vy) as u64);
            let w = y.mul(&pik).mul_p_pow(-1);
            let z = w.unit_inv()?;
            z.mul(&pik).mul_p_pow(-1 - self.shift)
        };
        Ok(out.with_prec(-v + rel))
    }

    pub fn div(&self, other: &Elem) -> Result<Elem, Error> {
        Ok(self.mul(&other.inv()?))
    }

    /// Residue class of an integral element.
    pub fn residue(&self) -> Result<FElem, Error> {
        let k = self.field.residue_field().top();
        if self.is_zero() {
            if self.prec >= 1 {
                return Ok(k.zero());
            }
            return Err(Error::PrecisionExhausted("residue of an element below precision".into()));
        }
        let v = self.valuation().unwrap();
        if v < 0 {
            return Err(Error::Validation("residue of a non-integral element".into()));
        }
        if v > 0 {
            return Ok(k.zero());
        }
        let p = self.field.p();
        let mut r = k.zero();
        for (i, &pos) in self.field.0.res_pos.iter().enumerate() {
            r[i] = num_traits::ToPrimitive::to_u64(&self.coords[pos].mod_floor(p)).unwrap();
        }
        Ok(r)
    }

    /// Canonical lift of a residue element.
    pub fn lift_residue(field: &LocalField, r: &[u64]) -> Elem {
        let coords = field.lift_residue_coords(r);
        Elem::from_parts(field, 0, coords, field.precision())
    }

    /// Reduction modulo pi, lifted back (keeps integral elements small).
    pub fn reduce_mod_pi(&self) -> Result<Elem, Error> {
        Ok(Elem::lift_residue(&self.field, &self.residue()?))
    }

    /// Image in an extension tower built on this field.
    pub fn embed(&self, g: &LocalField) -> Elem {
        if g == &self.field {
            return self.clone();
        }
        debug_assert!(g.contains_subfield(&self.field) || g.degree().is_multiple_of(self.field.degree()));
        let eg = g.e() / self.field.e();
        let prec = if self.prec >= EXACT { EXACT } else { self.prec * eg };
        if self.is_zero() {
            return Elem::zero_prec(g, prec);
        }
        let mut coords = self.coords.clone();
        coords.resize(g.degree(), BigInt::zero());
        Elem::from_parts(g, self.shift, coords, prec)
    }

    /// Coordinates over a subfield `sub` of the tower, one per relative monomial.
    pub fn coords_over(&self, sub: &LocalField) -> Vec<Elem> {
        let ds = sub.degree();
        let n = self.field.degree() / ds;
        let eg = self.field.e() / sub.e();
        (0..n)
            .map(|rel| {
                let w = self.field.weights()[ds * rel];
                let prec = if self.prec >= EXACT { EXACT } else { ceil_div(self.prec - w, eg) };
                let block = self.coords[ds * rel..ds * (rel + 1)].to_vec();
                if block.iter().all(|c| c.is_zero()) {
                    Elem::zero_prec(sub, prec)
                } else {
                    Elem::from_parts(sub, self.shift, block, prec)
                }
            })
            .collect()
    }

    /// Inverse of `coords_over`.
    pub fn from_coords_over(g: &LocalField, sub: &LocalField, blocks: &[Elem]) -> Elem {
        let ds = sub.degree();
        let eg = g.e() / sub.e();
        let mut prec = EXACT;
        let mut shift = i64::MAX;
        for (rel, b) in blocks.iter().enumerate() {
            let w = g.weights()[ds * rel];
            if b.prec < EXACT {
                prec = prec.min(b.prec * eg + w);
            }
            if !b.is_zero() {
                shift = shift.min(b.shift);
            }
        }
        if shift == i64::MAX {
            return Elem::zero_prec(g, prec);
        }
        let mut coords = vec![BigInt::zero(); g.degree()];
        for (rel, b) in blocks.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let m = pow_p(g, b.shift - shift);
            for (i, c) in b.coords.iter().enumerate() {
                coords[ds * rel + i] = c * &m;
            }
        }
        Elem::from_parts(g, shift, coords, prec)
    }

    /// Whether self == other to the joint precision.
    pub fn equals(&self, other: &Elem) -> bool {
        self.sub(other).is_zero()
    }

    fn check_field(&self, other: &Elem) {
        debug_assert!(
            std::sync::Arc::ptr_eq(&self.field.0, &other.field.0) || self.field == other.field,
            "elements of different fields"
        );
    }

    /// A small signed representative of an integral element of Q_p, if it is one.
    pub fn to_rational_approx(&self) -> Option<BigRational> {
        if self.field.degree() != 1 || self.is_zero() {
            return None;
        }
        let p = self.field.p();
        let k = ceil_div(self.prec - self.shift, 1);
        let m = pow_p(&self.field, k.max(0));
        let mut c = self.coords[0].mod_floor(&m);
        if &c * 2 > m {
            c -= &m;
        }
        let s = self.shift;
        let base = BigRational::from_integer(c);
        if s >= 0 {
            Some(base * BigRational::from_integer(arith::pow_big(p, s as u32)))
        } else {
            Some(base / BigRational::from_integer(arith::pow_big(p, (-s) as u32)))
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        let stages = self.field.stages();
        let mut terms = Vec::new();
        for (idx, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut rem = idx;
            let mut mono = String::new();
            for (l, s) in stages.iter().enumerate() {
                let d = s.degree();
                let i = rem % d;
                rem /= d;
                if i > 0 {
                    mono.push_str(&format!("*t{}", l + 1));
                    if i > 1 {
                        mono.push_str(&format!("^{i}"));
                    }
                }
            }
            let c = if c.is_negative() { format!("({c})") } else { c.to_string() };
            terms.push(format!("{c}{mono}"));
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.shift != 0 {
            write!(f, "<{}^{}*({})>", self.field.p(), self.shift, body)?;
        } else {
            write!(f, "<{body}>")?;
        }
        write!(f, " + O(pi^{})", self.prec)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a Elem> for &'a Elem {
            type Output = Elem;
            fn $m(self, rhs: &'a Elem) -> Elem {
                Elem::$m(self, rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem::neg(self)
    }
}

