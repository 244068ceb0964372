//! Dense polynomials over Q, constant term first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatPoly(Vec<BigRational>);

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl RatPoly {
    pub fn new(mut c: Vec<BigRational>) -> RatPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RatPoly(c)
    }

    pub fn from_ints(c: &[BigInt]) -> RatPoly {
        RatPoly::new(c.iter().cloned().map(rat).collect())
    }

    pub fn from_i64(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| rat(x.into())).collect())
    }

    pub fn constant(c: BigRational) -> RatPoly {
        RatPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.0.len().max(o.0.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        let n = self.0.len().max(o.0.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() <= dd {
            return (RatPoly::default(), self.clone());
        }
        let lc = d.leading();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dj;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat(i.into())).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// s with s a = 1 mod m, for a coprime to m.
    pub fn inv_mod(&self, m: &RatPoly) -> Option<RatPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (RatPoly::default(), RatPoly::constant(BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != 0 || r0.is_zero() {
            return None;
        }
        Some(s0.scale(&r0.leading().recip()).rem(m))
    }

    /// Res(a, b), by the Euclidean algorithm.
    pub fn resultant(a: &RatPoly, b: &RatPoly) -> BigRational {
        if a.is_zero() || b.is_zero() {
            return BigRational::zero();
        }
        let (mut a, mut b) = (a.clone(), b.clone());
        let mut acc = BigRational::one();
        loop {
            let (da, db) = (a.degree(), b.degree());
            if db == 0 {
                return acc * num_traits::pow(b.leading(), da);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return BigRational::zero();
            }
            if da % 2 == 1 && db % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.leading(), da - r.degree());
            a = b;
            b = r;
        }
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Number of distinct real roots of a squarefree polynomial (Sturm).
    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        let changes = |signs: Vec<i8>| -> usize {
            let s: Vec<i8> = signs.into_iter().filter(|&x| x != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let sign = |c: &BigRational| if c.is_positive() { 1 } else if c.is_negative() { -1 } else { 0 };
        let at_pos: Vec<i8> = seq.iter().map(|p| sign(&p.leading())).collect();
        let at_neg: Vec<i8> =
            seq.iter().map(|p| if p.degree() % 2 == 0 { sign(&p.leading()) } else { -sign(&p.leading()) }).collect();
        changes(at_neg) - changes(at_pos)
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_and_sturm() {
        // disc(x^2 + 1) = -4 = -Res(f, f')
        let f = RatPoly::from_i64(&[1, 0, 1]);
        assert_eq!(RatPoly::resultant(&f, &f.derivative()), rat(4.into()));
        assert_eq!(f.count_real_roots(), 0);
        assert_eq!(RatPoly::from_i64(&[-2, 0, 1]).count_real_roots(), 2);
        // (x-1)(x-2)(x-3)(x^2+1)
        let g = RatPoly::from_i64(&[-1, 1]).mul(&RatPoly::from_i64(&[-2, 1])).mul(&RatPoly::from_i64(&[-3, 1])).mul(&f);
        assert_eq!(g.count_real_roots(), 3);
        assert_eq!(RatPoly::from_i64(&[11, 0, 0, 0, 0, 0, 1]).count_real_roots(), 0);
        // Res(x - a, g) = (-1)^deg g g(a)
        let a = RatPoly::from_i64(&[-5, 1]);
        assert_eq!(RatPoly::resultant(&g, &a), g.eval(&rat(5.into())) * rat((-1).into()));
    }

    #[test]
    fn inverse_mod() {
        let m = RatPoly::from_i64(&[1, 0, 1]);
        let a = RatPoly::from_i64(&[1, 1]);
        let s = a.inv_mod(&m).unwrap();
        assert_eq!(s.mul(&a).rem(&m), RatPoly::from_i64(&[1]));
        assert!(RatPoly::from_i64(&[0, 0, 1]).inv_mod(&RatPoly::from_i64(&[0, 1, 1])).is_none());
    }
}
