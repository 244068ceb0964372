//! Root finding by Newton polygons, residual polynomials and Hensel lifting.

use crate::Error;

use super::elem::Elem;
use super::poly::Poly;

const MAX_DEPTH: usize = 400;

fn exhausted(what: &str) -> Error {
    Error::PrecisionExhausted(what.into())
}

/// Newton iteration from `r`, a simple root modulo pi of the integral polynomial `g`.
pub fn hensel(g: &Poly, r: &Elem) -> Result<Elem, Error> {
    let dg = g.derivative();
    let n = g.field().precision();
    let mut y = r.clone();
    let mut good = 1;
    let mut rounds = 0;
    while good < 2 * n + 4 {
        let gy = g.eval(&y);
        if gy.is_zero() {
            break;
        }
        let d = dg.eval(&y);
        if d.valuation() != Some(0) {
            return Err(exhausted("Hensel lift lost a unit derivative"));
        }
        y = y.sub(&gy.div(&d)?);
        good *= 2;
        rounds += 1;
        if rounds > 64 {
            break;
        }
    }
    Ok(y)
}

/// Roots of `f` in its own field, each listed once.
///
/// A constant term below precision is read as a simple root near zero.
pub fn roots(f: &Poly) -> Result<Vec<Elem>, Error> {
    if f.degree() == 0 {
        return Ok(vec![]);
    }
    let field = f.field().clone();
    let mut out = Vec::new();
    let mut f = f.clone();
    // exact zero roots
    let k = f.coeffs().iter().take_while(|c| c.is_exact_zero()).count();
    if k > 0 {
        out.push(Elem::zero(&field));
        f = Poly::new(&field, f.coeffs()[k..].to_vec());
    }
    if f.degree() == 0 {
        return Ok(out);
    }
    if f.coeff(0).is_zero() {
        let c1 = f.coeff(1);
        if c1.is_zero() {
            return Err(exhausted("repeated root near zero"));
        }
        out.push(Elem::zero_prec(&field, f.coeff(0).prec() - c1.val()?));
        f = Poly::new(&field, f.coeffs()[1..].to_vec());
    }
    find(&f, None, 0, &mut out)?;
    Ok(out)
}

/// Appends roots of `f` with valuation strictly above `lower` (all roots when None).
fn find(f: &Poly, lower: Option<i64>, depth: usize, out: &mut Vec<Elem>) -> Result<(), Error> {
    if depth > MAX_DEPTH {
        return Err(exhausted("root clustering deeper than the precision allows"));
    }
    let field = f.field().clone();
    for seg in f.newton_polygon()? {
        if !seg.slope.is_integer() {
            continue;
        }
        let lam = seg.slope.to_integer();
        if lower.is_some_and(|l| lam <= l) {
            continue;
        }
        let g = normalized_on_segment(f, lam, seg.start)?;
        let gbar = g.residual()?;
        let k = field.residue_field().top();
        for rbar in k.roots(&gbar) {
            if k.is_zero(&rbar) {
                continue;
            }
            let m = k.root_multiplicity(&gbar, &rbar);
            let r = Elem::lift_residue(&field, &rbar);
            if m == 1 {
                let y = hensel(&g, &r)?;
                out.push(y.mul_pi_pow(lam));
                continue;
            }
            let mut h = g.shift(&r);
            let mut sub = Vec::new();
            if h.coeff(0).is_zero() {
                let c1 = h.coeff(1);
                if c1.is_zero() {
                    return Err(exhausted("roots closer than the working precision"));
                }
                sub.push(Elem::zero_prec(&field, h.coeff(0).prec() - c1.val()?));
                h = Poly::new(&field, h.coeffs()[1..].to_vec());
            }
            find(&h, Some(0), depth + 1, &mut sub)?;
            for z in sub {
                out.push(r.add(&z).mul_pi_pow(lam));
            }
        }
    }
    Ok(())
}

/// f(pi^lam y) / pi^mu, where mu makes the coefficient at `anchor` a unit.
fn normalized_on_segment(f: &Poly, lam: i64, anchor: usize) -> Result<Poly, Error> {
    let mu = f.coeff(anchor).val()? + lam * anchor as i64;
    Ok(f.scale_var_pi(lam).mul_pi_pow(-mu))
}
