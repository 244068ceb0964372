//! Norm groups through the 2-primary part of k*/(k*)^(2^a).
//!
//! For an abelian extension M/k of degree d = 2^a * odd, an element x of
//! 2-power order in k*/N(M*) is a norm iff it lies in N(M*) (k*)^(2^a). That
//! quotient is computed as (Z/2^a)^n modulo an explicit relation lattice.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::Error;

use super::elem::Elem;
use super::extend::extend;
use super::field::LocalField;
use super::poly::Poly;
use super::symbols::{is_square, unit_part};
use super::tower;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormTest {
    Norm,
    NotNorm,
    Undetermined,
}

/// k*/(k*)^(2^a) with coordinates, for a fixed field k.
pub struct PowerClasses {
    field: LocalField,
    a: u32,
    /// Unit filtration depth (p = 2 only).
    m: i64,
    relations: Vec<Vec<u64>>,
    ncols: usize,
    gens_inv: Vec<Elem>,
    /// 2-part of q - 1 and a generator of the matching roots of unity (odd p only).
    t: u64,
    zeta: Vec<u64>,
}

fn mask(a: u32) -> u64 {
    if a >= 64 {
        u64::MAX
    } else {
        (1u64 << a) - 1
    }
}

fn inv_odd(u: u64, a: u32) -> u64 {
    let mut x = 1u64;
    for _ in 0..7 {
        x = x.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(x)));
    }
    x & mask(a)
}

/// log2 of the order of (Z/2^a)^ncols modulo the span of `rows`.
pub fn index_log2(rows: &[Vec<u64>], ncols: usize, a: u32) -> u32 {
    let mk = mask(a);
    let mut mat: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x & mk).collect()).collect();
    let mut cols: Vec<usize> = (0..ncols).collect();
    let mut total = a * ncols as u32;
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for (ri, r) in mat.iter().enumerate() {
            for &c in &cols {
                if r[c] != 0 {
                    let v = r[c].trailing_zeros();
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, ri, c));
                    }
                }
            }
        }
        let Some((v, pr, pc)) = best else { break };
        total -= a - v;
        let prow = mat.swap_remove(pr);
        let unit_inv = inv_odd(prow[pc] >> v, a);
        let prow: Vec<u64> = prow.iter().map(|x| x.wrapping_mul(unit_inv) & mk).collect();
        for r in mat.iter_mut() {
            if r[pc] == 0 {
                continue;
            }
            let t = r[pc] >> v;
            for &c in &cols {
                r[c] = r[c].wrapping_sub(t.wrapping_mul(prow[c])) & mk;
            }
        }
        // column operations clear the rest of the pivot row without changing the index
        cols.retain(|&c| c != pc);
    }
    total
}

/// Whether `w` lies in the span of `rows` over Z/2^a.
pub fn in_span(rows: &[Vec<u64>], w: &[u64], a: u32) -> bool {
    let n = w.len();
    let mut ext = rows.to_vec();
    ext.push(w.to_vec());
    index_log2(rows, n, a) == index_log2(&ext, n, a)
}

impl PowerClasses {
    pub fn new(field: &LocalField, a: u32) -> Result<PowerClasses, Error> {
        let p = field.p_u64();
        let kres = field.residue_field().top();
        let f = field.f();
        if p != 2 {
            let q1 = field.q() - 1u32;
            let two = BigUint::from(2u32);
            let mut t = 1u64;
            let mut rest = q1.clone();
            while t < (1u64 << a) && (&rest % &two) == BigUint::from(0u32) {
                t *= 2;
                rest /= &two;
            }
            let nu = kres.non_square();
            let zeta = kres.pow(&nu, &(&q1 / BigUint::from(t)));
            let mk = mask(a);
            let relations = vec![vec![0, t & mk]];
            return Ok(PowerClasses { field: field.clone(), a, m: 0, relations, ncols: 2, gens_inv: vec![], t, zeta });
        }
        let e = field.e();
        let m = 2 * e * (a as i64 + 1) + 2;
        let pi = field.uniformizer().clone();
        let mut gens = Vec::new();
        for i in 1..m {
            let pii = pi.pow(i as u64);
            for j in 0..f {
                let mut eps = kres.zero();
                eps[j] = 1;
                gens.push(Elem::one(field).add(&Elem::lift_residue(field, &eps).mul(&pii)));
            }
        }
        let gens_inv = gens.iter().map(|g| g.inv()).collect::<Result<Vec<_>, _>>()?;
        let ncols = 1 + gens.len();
        let mut pc = PowerClasses { field: field.clone(), a, m, relations: vec![], ncols, gens_inv, t: 1, zeta: vec![] };
        let mk = mask(a);
        let mut relations = Vec::with_capacity(gens.len());
        for (idx, g) in gens.iter().enumerate() {
            let d = pc.digits(&g.square())?;
            let mut row = vec![0u64; ncols];
            for (c, bit) in d.iter().enumerate() {
                row[1 + c] = (*bit as u64).wrapping_neg() & mk;
            }
            row[1 + idx] = row[1 + idx].wrapping_add(2) & mk;
            relations.push(row);
        }
        pc.relations = relations;
        Ok(pc)
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn exponent(&self) -> u32 {
        self.a
    }

    pub fn relations(&self) -> &[Vec<u64>] {
        &self.relations
    }

    /// Digits of u in U^(1) modulo U^(m) against the generators 1 + eps_j pi^i.
    fn digits(&self, u: &Elem) -> Result<Vec<u8>, Error> {
        let f = self.field.f();
        let mut out = vec![0u8; self.gens_inv.len()];
        let one = Elem::one(&self.field);
        let mut cur = u.clone();
        for i in 1..self.m {
            let d = cur.sub(&one);
            if d.is_zero() {
                if d.prec() < self.m {
                    return Err(Error::PrecisionExhausted("unit known to too few digits".into()));
                }
                break;
            }
            if d.val()? < i {
                return Err(Error::Validation("digit expansion of a non-principal unit".into()));
            }
            let r = d.mul_pi_pow(-i).residue()?;
            for j in 0..f {
                if r[j] != 0 {
                    let idx = (i as usize - 1) * f + j;
                    out[idx] = 1;
                    cur = cur.mul(&self.gens_inv[idx]);
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of the class of x.
    pub fn coords(&self, x: &Elem) -> Result<Vec<u64>, Error> {
        let mk = mask(self.a);
        let (v, u) = unit_part(x)?;
        let mut out = vec![0u64; self.ncols];
        out[0] = (v as u64) & mk;
        let kres = self.field.residue_field().top();
        if self.field.p_u64() != 2 {
            let q1 = self.field.q() - 1u32;
            let w = kres.pow(&u.residue()?, &(&q1 / BigUint::from(self.t)));
            let mut z = kres.one();
            for c in 0..self.t {
                if z == w {
                    out[1] = c & mk;
                    return Ok(out);
                }
                z = kres.mul(&z, &self.zeta);
            }
            return Err(Error::Validation("residue root of unity not found".into()));
        }
        // strip the Teichmuller part: u^(q-1) is principal and q - 1 is odd
        let q1 = self.field.q() - 1u32;
        let q1_low = q1.to_u64_digits().first().copied().unwrap_or(0);
        let up = pow_big(&u, &q1);
        let d = self.digits(&up)?;
        let c = inv_odd(q1_low, self.a);
        for (i, bit) in d.iter().enumerate() {
            out[1 + i] = (*bit as u64).wrapping_mul(c) & mk;
        }
        Ok(out)
    }
}

fn pow_big(x: &Elem, e: &BigUint) -> Elem {
    let mut out = Elem::one(x.field());
    for i in (0..e.bits()).rev() {
        out = out.square();
        if e.bit(i) {
            out = out.mul(x);
        }
    }
    out
}

/// Generators of M* modulo (M*)^(2^a) and units deep enough to have norms in (k*)^(2^a).
fn norm_generators(m_field: &LocalField, k: &LocalField, depth: i64) -> Vec<Elem> {
    let mut gens = vec![m_field.uniformizer().clone()];
    let kres = m_field.residue_field().top();
    if m_field.p_u64() != 2 {
        gens.push(Elem::lift_residue(m_field, &kres.non_square()));
        return gens;
    }
    let emk = m_field.e() / k.e();
    let pi = m_field.uniformizer();
    let one = Elem::one(m_field);
    let mut pii = one.clone();
    for _ in 1..(emk * depth) {
        pii = pii.mul(pi);
        for j in 0..m_field.f() {
            let mut eps = kres.zero();
            eps[j] = 1;
            gens.push(one.add(&Elem::lift_residue(m_field, &eps).mul(&pii)));
        }
    }
    gens
}

/// Decides whether x in k* is a norm from the abelian extension M/k, assuming
/// the class of x in k*/N(M*) has 2-power order (as for x = -1).
pub fn is_norm(x: &Elem, m_field: &LocalField) -> Result<NormTest, Error> {
    let k = x.field().clone();
    let d = m_field.degree_over(&k);
    if d == 1 {
        return Ok(NormTest::Norm);
    }
    let a = d.trailing_zeros();
    if a == 0 {
        return Ok(NormTest::Norm);
    }
    let run = || -> Result<(bool, u32), Error> {
        let pc = PowerClasses::new(&k, a)?;
        let mut rows = pc.relations().to_vec();
        for g in norm_generators(m_field, &k, pc.m.max(1)) {
            let n = tower::norm(&g, &k)?;
            rows.push(pc.coords(&n)?);
        }
        let idx = index_log2(&rows, pc.ncols, a);
        let w = pc.coords(x)?;
        Ok((in_span(&rows, &w, a), idx))
    };
    match run() {
        Ok((member, idx)) => {
            if idx != a {
                return Err(Error::NotAbelianSuspected { index: 1u64 << idx, degree: d as u64 });
            }
            Ok(if member { NormTest::Norm } else { NormTest::NotNorm })
        }
        Err(Error::PrecisionExhausted(_)) => Ok(NormTest::Undetermined),
        Err(e) => Err(e),
    }
}

/// -1 in N(M*) for an abelian M over k.
pub fn minus_one_is_norm(k: &LocalField, m_field: &LocalField) -> Result<NormTest, Error> {
    is_norm(&Elem::from_i64(k, -1), m_field)
}

/// Hilbert symbol (a, b) over the common field of a and b.
pub fn hilbert_symbol(a: &Elem, b: &Elem) -> Result<i8, Error> {
    if is_square(a)? {
        return Ok(1);
    }
    let k = a.field().clone();
    let f = Poly::new(&k, vec![a.neg(), Elem::zero(&k), Elem::one(&k)]);
    let (m, _) = extend(&f)?;
    match is_norm(b, &m)? {
        NormTest::Norm => Ok(1),
        NormTest::NotNorm => Ok(-1),
        NormTest::Undetermined => Err(Error::PrecisionExhausted("Hilbert symbol undecided".into())),
    }
}

/// Representatives of the nontrivial classes of k*/(k*)^2.
pub fn square_class_representatives(k: &LocalField) -> Result<Vec<Elem>, Error> {
    let pc = PowerClasses::new(k, 1)?;
    // basis of the quotient: coordinates that are not pivots of the relations mod 2
    let mut rows: Vec<Vec<u64>> = pc.relations().iter().map(|r| r.iter().map(|x| x & 1).collect()).collect();
    let n = pc.ncols;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else { continue };
        rows.swap(rank, pr);
        let prow = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] == 1 {
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let basis_elems: Vec<Elem> = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            if c == 0 {
                Ok(k.uniformizer().clone())
            } else if k.p_u64() != 2 {
                Ok(Elem::lift_residue(k, &k.residue_field().top().non_square()))
            } else {
                pc.gens_inv[c - 1].inv()
            }
        })
        .collect::<Result<_, Error>>()?;
    let nb = basis_elems.len();
    let mut out = Vec::with_capacity((1 << nb) - 1);
    for mask_bits in 1u32..(1 << nb) {
        let mut x = Elem::one(k);
        for (i, b) in basis_elems.iter().enumerate() {
            if mask_bits >> i & 1 == 1 {
                x = x.mul(b);
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// One quadratic extension per nontrivial square class, with its class representative.
pub fn enumerate_quadratic_extensions(k: &LocalField) -> Result<Vec<(Elem, LocalField)>, Error> {
    square_class_representatives(k)?
        .into_iter()
        .map(|d| {
            let f = Poly::new(k, vec![d.neg(), Elem::zero(k), Elem::one(k)]);
            extend(&f).map(|(m, _)| (d, m))
        })
        .collect()
}
