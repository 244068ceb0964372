//! Factorization of polynomials over a local field.

use crate::Error;

use super::poly::Poly;

/// Monic gcd by the Euclidean algorithm; remainders below precision count as zero.
pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly, Error> {
    let mut a = a.clone();
    let mut b = b.clone();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let (_, r) = a.divrem(&b)?;
        a = b;
        b = r;
    }
    if a.is_zero() {
        return Ok(a);
    }
    a.monic()
}

/// Squarefree decomposition (Yun): pairs (s_i, i) with f = lc * prod s_i^i.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>, Error> {
    let f = f.monic()?;
    let df = f.derivative();
    let a0 = gcd(&f, &df)?;
    if a0.degree() == 0 {
        return Ok(vec![(f, 1)]);
    }
    let mut out = Vec::new();
    let mut b = f.divrem(&a0)?.0;
    let c = df.divrem(&a0)?.0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() > 0 {
        let a = gcd(&b, &d)?;
        let (nb, _) = b.divrem(&a)?;
        let (c, _) = d.divrem(&a)?;
        d = c.sub(&nb.derivative());
        if a.degree() > 0 {
            out.push((a, i));
        }
        b = nb;
        i += 1;
        if i > f.degree() + 1 {
            return Err(Error::PrecisionExhausted("squarefree decomposition did not terminate".into()));
        }
    }
    Ok(out)
}

/// Irreducible monic factors with multiplicities, sorted by degree.
pub fn factor(f: &Poly) -> Result<Vec<(Poly, usize)>, Error> {
    if f.is_zero() {
        return Err(Error::Validation("cannot factor the zero polynomial".into()));
    }
    let field = f.field().clone();
    let mut f = f.monic()?;
    let mut out = Vec::new();
    let k = f.coeffs().iter().take_while(|c| c.is_exact_zero()).count();
    if k > 0 {
        out.push((Poly::x(&field), k));
        f = Poly::new(&field, f.coeffs()[k..].to_vec());
    }
    if f.degree() > 0 {
        for (s, m) in squarefree_decomposition(&f)? {
            for h in factor_squarefree(&s)? {
                out.push((h, m));
            }
        }
    }
    out.sort_by_key(|(h, m)| (h.degree(), *m));
    Ok(out)
}

/// Irreducible factors of a monic squarefree polynomial.
pub fn factor_squarefree(f: &Poly) -> Result<Vec<Poly>, Error> {
    super::montes::factor_squarefree(f)
}

/// Degrees of the irreducible factors, with multiplicity, ascending.
pub fn degree_pattern(f: &Poly) -> Result<Vec<usize>, Error> {
    let mut v: Vec<usize> = factor(f)?
        .iter()
        .flat_map(|(h, m)| std::iter::repeat_n(h.degree(), *m))
        .collect();
    v.sort();
    Ok(v)
}

/// Product of the factors with multiplicity.
pub fn expand(factors: &[(Poly, usize)]) -> Option<Poly> {
    let mut it = factors.iter();
    let (h, m) = it.next()?;
    let mut acc = Poly::one(h.field());
    for _ in 0..*m {
        acc = acc.mul(h);
    }
    for (h, m) in it {
        for _ in 0..*m {
            acc = acc.mul(h);
        }
    }
    Some(acc)
}
