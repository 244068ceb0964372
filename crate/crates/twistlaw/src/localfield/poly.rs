//! Dense univariate polynomials over a local field.

use std::fmt;

use num_rational::Ratio;

use crate::residue::FPoly;
use crate::Error;

use super::elem::Elem;
use super::field::LocalField;

#[derive(Clone)]
pub struct Poly {
    field: LocalField,
    /// Constant term first.
    coeffs: Vec<Elem>,
}

/// One edge of a Newton polygon; roots on it have valuation `slope`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    /// Valuation of the roots on this edge (minus the geometric slope).
    pub slope: Ratio<i64>,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }
}

impl Poly {
    pub fn new(field: &LocalField, coeffs: Vec<Elem>) -> Poly {
        let mut p = Poly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    pub fn from_i64(field: &LocalField, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| Elem::from_i64(field, c)).collect())
    }

    pub fn from_rationals(field: &LocalField, coeffs: &[num_rational::BigRational]) -> Poly {
        Poly::new(field, coeffs.iter().map(|c| Elem::from_rational(field, c)).collect())
    }

    pub fn zero(field: &LocalField) -> Poly {
        Poly { field: field.clone(), coeffs: vec![] }
    }

    pub fn one(field: &LocalField) -> Poly {
        Poly::new(field, vec![Elem::one(field)])
    }

    /// x - a
    pub fn linear(a: &Elem) -> Poly {
        let f = a.field();
        Poly::new(f, vec![a.neg(), Elem::one(f)])
    }

    pub fn x(field: &LocalField) -> Poly {
        Poly::new(field, vec![Elem::zero(field), Elem::one(field)])
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Elem::zero(&self.field))
    }

    /// Drops trailing coefficients that are zero to precision.
    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Degree; the zero polynomial has degree 0 and `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| Elem::zero(&self.field))
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Result<Poly, Error> {
        let li = self.leading().inv()?;
        Ok(self.scale(&li))
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![Elem::zero(&self.field); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let mut acc = Elem::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&Elem::from_i64(&self.field, i as i64)))
                .collect(),
        )
    }

    /// Division with remainder by a polynomial with invertible leading coefficient.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly), Error> {
        if d.is_zero() {
            return Err(Error::PrecisionExhausted("division by a polynomial below precision".into()));
        }
        let dd = d.degree();
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let li = d.leading().inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![Elem::zero(&self.field); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&li);
            for (i, di) in d.coeffs.iter().enumerate().take(dd) {
                r[k + i] = r[k + i].sub(&c.mul(di));
            }
            r[k + dd] = Elem::zero(&self.field);
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(&self.field, q), Poly::new(&self.field, r)))
    }

    /// f(a x + b)
    pub fn compose_affine(&self, a: &Elem, b: &Elem) -> Poly {
        let lin = Poly::new(&self.field, vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::new(&self.field, vec![c.clone()]));
        }
        acc
    }

    /// f(x + b), by Taylor expansion.
    pub fn shift(&self, b: &Elem) -> Poly {
        let n = self.coeffs.len();
        let mut c = self.coeffs.clone();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].mul(b);
                c[j] = c[j].add(&t);
            }
        }
        Poly::new(&self.field, c)
    }

    /// f(pi^k x)
    pub fn scale_var_pi(&self, k: i64) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().enumerate().map(|(i, c)| c.mul_pi_pow(k * i as i64)).collect(),
        )
    }

    /// Multiplies every coefficient by pi^k.
    pub fn mul_pi_pow(&self, k: i64) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| c.mul_pi_pow(k)).collect())
    }

    /// Image over an extension tower.
    pub fn embed(&self, g: &LocalField) -> Poly {
        Poly::new(g, self.coeffs.iter().map(|c| c.embed(g)).collect())
    }

    /// Minimum coefficient valuation.
    pub fn min_valuation(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }

    /// Reduction of an integral polynomial to the residue field.
    pub fn residual(&self) -> Result<FPoly, Error> {
        let k = self.field.residue_field().top();
        let mut out: FPoly = self.coeffs.iter().map(|c| c.residue()).collect::<Result<_, _>>()?;
        k.poly_trim(&mut out);
        Ok(out)
    }

    /// Lower convex hull of (i, v(a_i)) over coefficients that are nonzero to precision.
    ///
    /// Coefficients below precision are required to lie on or above the hull,
    /// otherwise the polygon is not determined and `PrecisionExhausted` is returned.
    pub fn newton_polygon(&self) -> Result<Vec<Segment>, Error> {
        let pts: Vec<(usize, i64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.valuation().map(|v| (i, v)))
            .collect();
        let mut hull: Vec<(usize, i64)> = Vec::new();
        for &pt in &pts {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                // drop (x2,y2) if it lies on or above the chord from (x1,y1) to pt
                let lhs = (y2 - y1) as i128 * (pt.0 - x1) as i128;
                let rhs = (pt.1 - y1) as i128 * (x2 - x1) as i128;
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let segs: Vec<Segment> = hull
            .windows(2)
            .map(|w| Segment {
                start: w[0].0,
                end: w[1].0,
                slope: Ratio::new(w[0].1 - w[1].1, (w[1].0 - w[0].0) as i64),
            })
            .collect();
        // inexact zeros must not poke below the hull
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() || c.is_exact_zero() {
                continue;
            }
            if let Some(h) = hull_value(&hull, i) {
                if Ratio::from_integer(c.prec()) < h {
                    return Err(Error::PrecisionExhausted("Newton polygon not determined at this precision".into()));
                }
            }
        }
        Ok(segs)
    }
}

fn hull_value(hull: &[(usize, i64)], i: usize) -> Option<Ratio<i64>> {
    for w in hull.windows(2) {
        let ((x1, y1), (x2, y2)) = (w[0], w[1]);
        if x1 <= i && i <= x2 {
            let t = Ratio::new((i - x1) as i64, (x2 - x1) as i64);
            return Some(Ratio::from_integer(y1) + t * Ratio::from_integer(y2 - y1));
        }
    }
    None
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(i, c)| format!("({c})*x^{i}"))
            .collect();
        write!(f, "{}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}
