//! Quadratic residue symbol, squares and cubes.

use crate::Error;

use super::elem::Elem;
use super::poly::Poly;
use super::roots;

/// (u|k) for a unit u of a field with odd residue characteristic.
pub fn quadratic_symbol(u: &Elem) -> Result<i8, Error> {
    if u.field().p_u64() == 2 {
        return Err(Error::EvenResidueChar);
    }
    if u.val()? != 0 {
        return Err(Error::NonUnit);
    }
    let k = u.field().residue_field().top();
    Ok(if k.is_square(&u.residue()?) { 1 } else { -1 })
}

/// Unit part x / pi^v(x).
pub fn unit_part(x: &Elem) -> Result<(i64, Elem), Error> {
    let v = x.val()?;
    Ok((v, x.mul_pi_pow(-v)))
}

fn has_nth_root(u: &Elem, n: usize) -> Result<bool, Error> {
    let k = u.field();
    let mut c = vec![Elem::zero(k); n + 1];
    c[0] = u.neg();
    c[n] = Elem::one(k);
    Ok(!roots::roots(&Poly::new(k, c))?.is_empty())
}

/// Whether x is a nonzero square.
pub fn is_square(x: &Elem) -> Result<bool, Error> {
    let (v, u) = unit_part(x)?;
    if v % 2 != 0 {
        return Ok(false);
    }
    if x.field().p_u64() != 2 {
        return Ok(quadratic_symbol(&u)? == 1);
    }
    if u.prec() < 2 * x.field().e() + 1 {
        return Err(Error::PrecisionExhausted("too few digits to decide a 2-adic square".into()));
    }
    has_nth_root(&u, 2)
}

/// Whether x is a nonzero cube.
pub fn is_cube(x: &Elem) -> Result<bool, Error> {
    let (v, u) = unit_part(x)?;
    if v.rem_euclid(3) != 0 {
        return Ok(false);
    }
    if x.field().p_u64() != 3 {
        // the derivative 3y^2 is a unit, so a residue cube root lifts
        let k = x.field().residue_field().top();
        let r = u.residue()?;
        let poly = vec![k.neg(&r), k.zero(), k.zero(), k.one()];
        return Ok(k.count_roots(&poly) > 0);
    }
    has_nth_root(&u, 3)
}
