//! Adjoining a root of an irreducible polynomial.
//!
//! Eisenstein and residually irreducible polynomials become one stage
//! directly. Otherwise F(theta) is built from the ramification and residue
//! data of F[x]/(f), as unramified stages followed by an Eisenstein stage.

use crate::Error;

use super::elem::Elem;
use super::factor;
use super::field::LocalField;
use super::poly::Poly;
use super::roots;
use super::tower;

/// Extension of `f.field()` generated by a root of the irreducible `f`, and that root.
pub fn extend(f: &Poly) -> Result<(LocalField, Elem), Error> {
    let base = f.field().clone();
    let f = f.monic()?;
    let n = f.degree();
    if n == 0 {
        return Err(Error::Validation("cannot extend by a constant".into()));
    }
    if n == 1 {
        return Ok((base, f.coeff(0).neg()));
    }
    if let Some(out) = fast_path(&f)? {
        return Ok(out);
    }
    match super::montes::stem_field(&f)? {
        Some(out) => Ok(out),
        None => {
            let degs: Vec<usize> = factor::factor(&f)?.iter().map(|(h, _)| h.degree()).collect();
            Err(Error::Reducible(format!("factor degrees {degs:?}")))
        }
    }
}

fn fast_path(f: &Poly) -> Result<Option<(LocalField, Elem)>, Error> {
    let base = f.field().clone();
    let n = f.degree();
    let vals: Vec<Option<i64>> = f.coeffs().iter().map(|c| c.valuation()).collect();
    let eisenstein = vals[0] == Some(1)
        && (1..n).all(|i| vals[i].is_none_or(|v| v >= 1) && (vals[i].is_some() || f.coeff(i).prec() >= 1));
    if eisenstein {
        let g = base.eisenstein(f.coeffs())?;
        let t = tower::stage_generator(&g);
        return Ok(Some((g, t)));
    }
    if vals.iter().all(|v| v.is_none_or(|v| v >= 0)) {
        let fbar = f.residual()?;
        let k = base.residue_field().top();
        let facs = k.irreducible_factors(&fbar);
        if facs.len() == 1 && facs[0].len() == n + 1 && k.poly_radical(&fbar).len() == n + 1 {
            let g = base.unramified(&fbar);
            let fg = f.embed(&g);
            let kg = g.residue_field().top();
            let gen = kg.gen();
            let r = roots::hensel(&fg, &Elem::lift_residue(&g, &gen))?;
            return Ok(Some((g, r)));
        }
    }
    Ok(None)
}
