//! Weierstrass models y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over an exact ring.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::localfield::{Elem, Poly};
use crate::Error;

/// Coefficient domain: rationals, number field elements or local field elements.
pub trait Ring: Clone + fmt::Debug {
    /// The integer n in the ring of `self`.
    fn int_like(&self, n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self, Error>;

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn scale(&self, n: i64) -> Self {
        self.mul(&self.int_like(n))
    }
}

impl Ring for BigRational {
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Result<Self, Error> {
        if Zero::is_zero(self) {
            return Err(Error::Validation("division by zero".into()));
        }
        Ok(self.recip())
    }
}

impl Ring for Elem {
    fn int_like(&self, n: i64) -> Self {
        Elem::from_i64(self.field(), n)
    }
    fn add(&self, o: &Self) -> Self {
        Elem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Elem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Elem::mul(self, o)
    }
    fn neg(&self) -> Self {
        Elem::neg(self)
    }
    fn is_zero(&self) -> bool {
        Elem::is_zero(self)
    }
    fn inv(&self) -> Result<Self, Error> {
        Elem::inv(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassModel<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub a4: T,
    pub a6: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Invariants<T> {
    pub b2: T,
    pub b4: T,
    pub b6: T,
    pub b8: T,
    pub c4: T,
    pub c6: T,
    pub disc: T,
    pub j: T,
}

impl<T: Ring> WeierstrassModel<T> {
    pub fn new(a: [T; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = a;
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    pub fn coeffs(&self) -> [&T; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> WeierstrassModel<U> {
        WeierstrassModel { a1: f(&self.a1), a2: f(&self.a2), a3: f(&self.a3), a4: f(&self.a4), a6: f(&self.a6) }
    }

    pub fn b2(&self) -> T {
        self.a1.square().add(&self.a2.scale(4))
    }

    pub fn b4(&self) -> T {
        self.a1.mul(&self.a3).add(&self.a4.scale(2))
    }

    pub fn b6(&self) -> T {
        self.a3.square().add(&self.a6.scale(4))
    }

    pub fn b8(&self) -> T {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        a1.square()
            .mul(a6)
            .add(&a2.mul(a6).scale(4))
            .sub(&a1.mul(a3).mul(a4))
            .add(&a2.mul(&a3.square()))
            .sub(&a4.square())
    }

    pub fn c4(&self) -> T {
        let b2 = self.b2();
        b2.square().sub(&self.b4().scale(24))
    }

    pub fn c6(&self) -> T {
        let b2 = self.b2();
        b2.square().mul(&b2).neg().add(&b2.mul(&self.b4()).scale(36)).sub(&self.b6().scale(216))
    }

    pub fn discriminant(&self) -> T {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        b2.square()
            .mul(&b8)
            .neg()
            .sub(&b4.square().mul(&b4).scale(8))
            .sub(&b6.square().scale(27))
            .add(&b2.mul(&b4).mul(&b6).scale(9))
    }

    /// All standard invariants; fails on a singular model.
    pub fn invariants(&self) -> Result<Invariants<T>, Error> {
        let disc = self.discriminant();
        if disc.is_zero() {
            return Err(Error::SingularModel);
        }
        let c4 = self.c4();
        let j = c4.square().mul(&c4).mul(&disc.inv()?);
        Ok(Invariants { b2: self.b2(), b4: self.b4(), b6: self.b6(), b8: self.b8(), c4, c6: self.c6(), disc, j })
    }

    /// The model in coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
    pub fn transform(&self, u: &T, r: &T, s: &T, t: &T) -> Result<Self, Error> {
        if u.is_zero() {
            return Err(Error::NonInvertibleU);
        }
        let ui = u.inv().map_err(|_| Error::NonInvertibleU)?;
        let ui2 = ui.square();
        let ui3 = ui2.mul(&ui);
        let ui4 = ui2.square();
        let ui6 = ui3.square();
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let n1 = a1.add(&s.scale(2));
        let n2 = a2.sub(&s.mul(a1)).add(&r.scale(3)).sub(&s.square());
        let n3 = a3.add(&r.mul(a1)).add(&t.scale(2));
        let n4 = a4
            .sub(&s.mul(a3))
            .add(&r.mul(a2).scale(2))
            .sub(&t.add(&r.mul(s)).mul(a1))
            .add(&r.square().scale(3))
            .sub(&s.mul(t).scale(2));
        let n6 = a6
            .add(&r.mul(a4))
            .add(&r.square().mul(a2))
            .add(&r.square().mul(r))
            .sub(&t.mul(a3))
            .sub(&t.square())
            .sub(&r.mul(t).mul(a1));
        Ok(WeierstrassModel { a1: n1.mul(&ui), a2: n2.mul(&ui2), a3: n3.mul(&ui3), a4: n4.mul(&ui4), a6: n6.mul(&ui6) })
    }
}

impl WeierstrassModel<BigRational> {
    pub fn from_ints(a: [i64; 5]) -> Self {
        WeierstrassModel::new(a.map(|x| BigRational::from_integer(x.into())))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs().iter().all(|c| c.denom().is_one())
    }
}

/// Coefficients of x^8 - 6 c4 x^4 - 8 c6 x^2 - 3 c4^2, constant term first.
pub fn gamma_coeffs<T: Ring>(c4: &T, c6: &T) -> Vec<T> {
    let z = c4.int_like(0);
    vec![
        c4.square().scale(-3),
        z.clone(),
        c6.scale(-8),
        z.clone(),
        c4.scale(-6),
        z.clone(),
        z.clone(),
        z,
        c4.int_like(1),
    ]
}

/// The octic over a local field.
pub fn gamma_poly(c4: &Elem, c6: &Elem) -> Poly {
    Poly::new(c4.field(), gamma_coeffs(c4, c6))
}
