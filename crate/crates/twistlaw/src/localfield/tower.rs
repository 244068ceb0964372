//! Relative norms and minimal polynomials in a tower.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::Error;

use super::elem::Elem;
use super::field::LocalField;
use super::linalg;
use super::poly::Poly;

/// The generator of the top stage of `k`.
pub fn stage_generator(k: &LocalField) -> Elem {
    let sub = k.parent().expect("base field has no stage generator").degree();
    let mut c = vec![BigInt::zero(); k.degree()];
    c[sub] = BigInt::from(1);
    Elem::from_parts(k, 0, c, k.precision() + k.weights()[sub])
}

/// N_{K/sub}(x) for `sub` a field of the tower of x.
pub fn norm(x: &Elem, sub: &LocalField) -> Result<Elem, Error> {
    let mut x = x.clone();
    while x.field() != sub {
        let k = x.field().clone();
        let parent = k.parent().ok_or_else(|| Error::Validation("not a subfield".into()))?.clone();
        let d = k.degree() / parent.degree();
        let t = stage_generator(&k);
        let mut cols = Vec::with_capacity(d);
        let mut cur = x.clone();
        for i in 0..d {
            cols.push(cur.coords_over(&parent));
            if i + 1 < d {
                cur = cur.mul(&t);
            }
        }
        let rows: Vec<Vec<Elem>> = (0..d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        x = linalg::determinant(&parent, rows)?;
    }
    Ok(x)
}

/// Minimal polynomial over `sub` of an element of an extension tower of `sub`,
/// checked to divide `target` when given.
pub fn min_poly(theta: &Elem, sub: &LocalField, target: Option<&Poly>) -> Result<Poly, Error> {
    let g = theta.field().clone();
    let n = g.degree() / sub.degree();
    let mut powers = vec![Elem::one(&g)];
    for d in 1..=n {
        powers.push(powers[d - 1].mul(theta));
        let cols: Vec<Vec<Elem>> = powers[..d].iter().map(|x| x.coords_over(sub)).collect();
        let rhs = powers[d].coords_over(sub);
        let sol = match linalg::solve(sub, &cols, &rhs) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if let Some(c) = sol {
            let mut coeffs: Vec<Elem> = c.iter().map(|x| x.neg()).collect();
            coeffs.push(Elem::one(sub));
            let h = Poly::new(sub, coeffs);
            match target {
                Some(t) => {
                    let (_, r) = t.divrem(&h)?;
                    if r.is_zero() {
                        return Ok(h);
                    }
                }
                None => return Ok(h),
            }
        }
    }
    Err(Error::PrecisionExhausted("minimal polynomial not found at this precision".into()))
}
