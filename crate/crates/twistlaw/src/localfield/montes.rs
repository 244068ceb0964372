//! Irreducible factors of a squarefree polynomial f, and the field generated
//! by a root, found by refining key elements of the algebra A = F[x]/(f).
//!
//! The state is an element of A of valuation 1/E, lifts of generators of a
//! residue field of degree R over that of F, and a key element phi. Every
//! characteristic polynomial computed along the way either shows two different
//! valuations or residue classes among the roots of f, which splits f by an
//! idempotent, or it refines phi. Once E R = deg f the algebra is a field.

use num_integer::Integer;
use num_rational::Ratio;

use crate::residue::{FElem, FPoly, ResidueField};
use crate::Error;

use super::elem::Elem;
use super::field::LocalField;
use super::linalg;
use super::poly::{Poly, Segment};

fn exhausted(what: &str) -> Error {
    Error::PrecisionExhausted(what.into())
}

/// Arithmetic in F[x]/(f) for monic f.
struct Algebra {
    field: LocalField,
    f: Poly,
    n: usize,
    /// Power sums of the roots of f.
    ps: Vec<Elem>,
}

impl Algebra {
    fn new(f: &Poly) -> Result<Self, Error> {
        let field = f.field().clone();
        let f = f.monic()?;
        let n = f.degree();
        let c = f.coeffs();
        let mut ps: Vec<Elem> = vec![Elem::from_i64(&field, n as i64)];
        for m in 1..n {
            let mut acc = c[n - m].mul(&Elem::from_i64(&field, m as i64));
            for i in 1..m {
                acc = acc.add(&c[n - i].mul(&ps[m - i]));
            }
            ps.push(acc.neg());
        }
        Ok(Algebra { field, f, n, ps })
    }

    fn constant(&self, c: &Elem) -> Poly {
        Poly::new(&self.field, vec![c.clone()])
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly, Error> {
        Ok(a.mul(b).divrem(&self.f)?.1)
    }

    fn pow(&self, a: &Poly, mut k: u64) -> Result<Poly, Error> {
        let mut out = Poly::one(&self.field);
        let mut b = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                out = self.mul(&out, &b)?;
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b)?;
            }
        }
        Ok(out)
    }

    /// a^k for a signed exponent, given a^-1.
    fn zpow(&self, a: &Poly, a_inv: &Poly, k: i64) -> Result<Poly, Error> {
        if k >= 0 {
            self.pow(a, k as u64)
        } else {
            self.pow(a_inv, (-k) as u64)
        }
    }

    /// p(a) for p with coefficients in F.
    fn eval(&self, p: &Poly, a: &Poly) -> Result<Poly, Error> {
        let mut acc = Poly::zero(&self.field);
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, a)?.add(&self.constant(c));
        }
        Ok(acc)
    }

    fn trace(&self, a: &Poly) -> Elem {
        let mut t = Elem::zero(&self.field);
        for (i, ai) in a.coeffs().iter().enumerate() {
            t = t.add(&ai.mul(&self.ps[i]));
        }
        t
    }

    fn charpoly(&self, a: &Poly) -> Result<Poly, Error> {
        let n = self.n;
        let field = &self.field;
        let mut cur = Poly::one(field);
        let mut tr = vec![Elem::zero(field)];
        for _ in 1..=n {
            cur = self.mul(&cur, a)?;
            tr.push(self.trace(&cur));
        }
        // Newton's identities
        let mut e = vec![Elem::one(field)];
        for j in 1..=n {
            let mut acc = Elem::zero(field);
            for i in 1..=j {
                let term = e[j - i].mul(&tr[i]);
                acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
            }
            e.push(acc.div(&Elem::from_i64(field, j as i64))?);
        }
        let coeffs = (0..=n).map(|i| if (n - i).is_multiple_of(2) { e[n - i].clone() } else { e[n - i].neg() }).collect();
        Ok(Poly::new(field, coeffs))
    }

    /// Inverse by Cayley-Hamilton, given the characteristic polynomial of a.
    fn inv(&self, a: &Poly, chi: &Poly) -> Result<Poly, Error> {
        let c0 = chi.coeff(0);
        let q = Poly::new(&self.field, chi.coeffs()[1..].to_vec());
        Ok(self.eval(&q, a)?.scale(&c0.inv()?.neg()))
    }
}

/// Residual polynomial of an edge with slope a/b, in z = y^b / pi^a.
pub(crate) fn segment_residual(f: &Poly, seg: &Segment) -> Result<FPoly, Error> {
    let (a, b) = (*seg.slope.numer(), *seg.slope.denom() as usize);
    let k = f.field().residue_field().top();
    let c0_inv = f.coeff(seg.start).inv()?;
    let m = seg.len() / b;
    let mut out = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let c = f.coeff(seg.start + j * b).mul(&c0_inv).mul_pi_pow(a * j as i64);
        out.push(if c.valuation().is_none_or(|v| v > 0) { k.zero() } else { c.residue()? });
    }
    Ok(out)
}

/// The common valuation of the roots of chi, if their valuations and leading
/// residues are all conjugate.
fn pure_slope(chi: &Poly) -> Result<Option<Ratio<i64>>, Error> {
    if chi.coeff(0).is_zero() {
        if chi.coeffs()[..chi.degree()].iter().all(|c| c.is_zero()) {
            return Err(exhausted("key element vanishes at the working precision"));
        }
        return Ok(None);
    }
    let segs = chi.newton_polygon()?;
    if segs.len() != 1 {
        return Ok(None);
    }
    let rz = segment_residual(chi, &segs[0])?;
    let k = chi.field().residue_field().top();
    if k.irreducible_factors(&rz).len() != 1 {
        return Ok(None);
    }
    Ok(Some(segs[0].slope))
}

/// Result of analysing F[x]/(f).
enum Outcome {
    Split(Poly, Poly),
    Field(FieldData),
}

struct FieldData {
    e: i64,
    /// Element of valuation 1/e.
    pi: Poly,
    /// Residue field of F(theta), as a tower over that of F.
    kbar: ResidueField,
    /// Lifts to A of the generators of the levels of `kbar` above the base.
    gens: Vec<Poly>,
}

/// Lift of a residue element at `level` to A, through lifts of the level generators.
fn lift_with(alg: &Algebra, kbar: &ResidueField, base_level: usize, gens: &[Poly], x: &[u64], level: usize) -> Result<Poly, Error> {
    if level == base_level {
        return Ok(alg.constant(&Elem::lift_residue(&alg.field, x)));
    }
    let blocks = kbar.at(level).coords_over(x, level - 1);
    let g = &gens[level - base_level - 1];
    let mut acc = Poly::zero(&alg.field);
    for b in blocks.iter().rev() {
        let c = lift_with(alg, kbar, base_level, gens, b, level - 1)?;
        acc = alg.mul(&acc, g)?.add(&c);
    }
    Ok(acc)
}

fn analyze(f: &Poly) -> Result<Outcome, Error> {
    let alg = Algebra::new(f)?;
    let field = alg.field.clone();
    let n = alg.n as i64;
    let base_rf = field.residue_field().clone();
    let bl = base_rf.levels();
    let mut kbar = base_rf.clone();
    let mut gens: Vec<Poly> = Vec::new();
    let mut e: i64 = 1;
    let mut pi = alg.constant(field.uniformizer());
    let mut pi_inv = alg.constant(field.uniformizer_inv());
    let mut phi = Poly::x(&field).divrem(&alg.f)?.1;
    let cap = 64 + 8 * alg.n * field.precision().max(1) as usize;
    for _ in 0..cap {
        let r = (kbar.degree() / base_rf.degree()) as i64;
        if e * r == n {
            return Ok(Outcome::Field(FieldData { e, pi, kbar, gens }));
        }
        if e * r > n {
            return Err(exhausted("ramification and residue degree exceed the degree"));
        }
        if phi.is_zero() {
            return Err(exhausted("key element vanishes at the working precision"));
        }
        let chi = alg.charpoly(&phi)?;
        let Some(lam) = pure_slope(&chi)? else {
            return split(&alg, &phi).map(|(a, b)| Outcome::Split(a, b));
        };
        let b = *lam.denom();
        let er = b / b.gcd(&e);
        let s = (lam * Ratio::from_integer(e * er)).to_integer();
        let phi_er = alg.pow(&phi, er as u64)?;
        let u = alg.mul(&phi_er, &alg.zpow(&pi, &pi_inv, -s)?)?;
        let chiu = alg.charpoly(&u)?;
        let ubar_poly = chiu.residual()?;
        let kb = base_rf.top();
        let psis = kb.irreducible_factors(&ubar_poly);
        if psis.len() != 1 {
            return split(&alg, &u).map(|(a, b)| Outcome::Split(a, b));
        }
        let psi = &psis[0];
        let top = kbar.levels();
        let kt = kbar.top();
        let psi_top: FPoly = psi.iter().map(|c| kbar.embed(c, top)).collect();
        // the residue of u, as an element of kbar, if it lies there
        let mut next = None;
        for rt in kt.roots(&psi_top) {
            let beta = u.sub(&lift_with(&alg, &kbar, bl, &gens, &rt, top)?);
            match residue_test(&alg, &beta)? {
                Test::Zero => {
                    next = Some(beta);
                    break;
                }
                Test::Unit => {}
                Test::Mixed => return split(&alg, &beta).map(|(a, b)| Outcome::Split(a, b)),
            }
        }
        let next = match next {
            Some(beta) => beta,
            None => {
                // u generates a larger residue field: adjoin its minimal polynomial over kbar
                let mut found = None;
                for h in kt.irreducible_factors(&psi_top) {
                    let mut acc = Poly::zero(&field);
                    for c in h.iter().rev() {
                        acc = alg.mul(&acc, &u)?.add(&lift_with(&alg, &kbar, bl, &gens, c, top)?);
                    }
                    match residue_test(&alg, &acc)? {
                        Test::Zero => {
                            found = Some((h, acc));
                            break;
                        }
                        Test::Unit => {}
                        Test::Mixed => return split(&alg, &acc).map(|(a, b)| Outcome::Split(a, b)),
                    }
                }
                let (h, beta) = found.ok_or_else(|| exhausted("residue of a key element not located"))?;
                kbar = kbar.extend(&h);
                gens.push(u.clone());
                beta
            }
        };
        if er > 1 {
            // new element of valuation 1/(e er) from phi and pi
            let l = e * er;
            let a = (lam * Ratio::from_integer(l)).to_integer();
            let ext = a.extended_gcd(&er);
            debug_assert_eq!(ext.gcd, 1);
            let (x, y) = (ext.x, ext.y);
            let phi_inv = alg.inv(&phi, &chi)?;
            let new_pi = alg.mul(&alg.zpow(&phi, &phi_inv, x)?, &alg.zpow(&pi, &pi_inv, y)?)?;
            let chi_pi = alg.charpoly(&new_pi)?;
            pi_inv = alg.inv(&new_pi, &chi_pi)?;
            pi = new_pi;
            e = l;
        }
        phi = next;
    }
    Err(exhausted("key element refinement did not terminate"))
}

enum Test {
    /// Every conjugate has positive valuation.
    Zero,
    /// Every conjugate is a unit.
    Unit,
    Mixed,
}

/// Classifies the conjugates of an integral element by whether they vanish mod pi.
fn residue_test(alg: &Algebra, beta: &Poly) -> Result<Test, Error> {
    let chi = alg.charpoly(beta)?;
    let k = alg.field.residue_field().top();
    let mut gbar = loose_residual(&chi)?;
    k.poly_trim(&mut gbar);
    let m = gbar.iter().take_while(|c| k.is_zero(c)).count();
    Ok(if m == alg.n {
        Test::Zero
    } else if m == 0 {
        Test::Unit
    } else {
        Test::Mixed
    })
}

fn loose_residual(f: &Poly) -> Result<FPoly, Error> {
    let k = f.field().residue_field().top();
    f.coeffs().iter().map(|c| if c.is_zero() { Ok(k.zero()) } else { c.residue() }).collect()
}

/// Factors f = f1 f2 using an element beta whose conjugates are not all alike.
fn split(alg: &Algebra, beta: &Poly) -> Result<(Poly, Poly), Error> {
    let field = &alg.field;
    let n = alg.n;
    let chi = alg.charpoly(beta)?;
    // rescale so that the smallest valuation among the roots is 0
    let lam = if chi.coeff(0).is_zero() && chi.coeffs()[..n].iter().all(|c| c.is_zero()) {
        return Err(exhausted("splitting element vanishes"));
    } else {
        chi.newton_polygon()?
            .iter()
            .map(|s| s.slope)
            .min()
            .unwrap_or_else(|| Ratio::from_integer(0))
    };
    let (a, b) = (*lam.numer(), *lam.denom());
    let beta1 = alg.pow(beta, b as u64)?.mul_pi_pow(-a);
    let g = alg.charpoly(&beta1)?;
    let k = field.residue_field().top();
    let mut gbar = loose_residual(&g)?;
    k.poly_trim(&mut gbar);
    let m = gbar.iter().take_while(|c| k.is_zero(c)).count();
    let (g1bar, g2bar) = if m > 0 && m < n {
        let mut zm = vec![k.zero(); m + 1];
        zm[m] = k.one();
        (gbar[m..].to_vec(), zm)
    } else {
        let facs = k.irreducible_factors(&gbar);
        if facs.len() < 2 {
            return Err(exhausted("splitting element has alike conjugates"));
        }
        let mut g1 = vec![k.one()];
        let mut rest = gbar.clone();
        loop {
            let (q, r) = k.poly_divrem(&rest, &facs[0]);
            if !r.is_empty() {
                break;
            }
            g1 = k.poly_mul(&g1, &facs[0]);
            rest = q;
        }
        (g1, rest)
    };
    let lift = |h: &[FElem]| Poly::new(field, h.iter().map(|c| Elem::lift_residue(field, c)).collect());
    let (chi1, chi2) = refine(&g, &lift(&g1bar), &lift(&g2bar))?;
    let (_, _, t) = k.poly_xgcd(&g1bar, &g2bar);
    let tl = lift(&t);
    // approximate idempotent: 1 on the roots of chi1, 0 on those of chi2
    let mut idem = alg.eval(&tl.mul(&chi2), &beta1)?;
    let rounds = 2 + (64 - (field.precision().max(1) as u64).leading_zeros()) as usize;
    for _ in 0..rounds + 4 {
        let sq = alg.mul(&idem, &idem)?;
        if sq.sub(&idem).is_zero() {
            break;
        }
        let three = alg.constant(&Elem::from_i64(field, 3));
        let two_e = idem.scale(&Elem::from_i64(field, 2));
        idem = alg.mul(&sq, &three.sub(&two_e))?;
    }
    if !alg.mul(&idem, &idem)?.sub(&idem).is_zero() {
        return Err(exhausted("idempotent did not converge"));
    }
    let x_e = alg.mul(&Poly::x(field).divrem(&alg.f)?.1, &idem)?;
    let c = alg.charpoly(&x_e)?;
    let n1 = chi1.degree();
    let n2 = n - n1;
    if c.coeffs()[..n2].iter().any(|x| !x.is_zero()) {
        return Err(exhausted("factor not separated at this precision"));
    }
    let f1 = Poly::new(field, c.coeffs()[n2..].to_vec());
    if f1.degree() != n1 {
        return Err(exhausted("factor not separated at this precision"));
    }
    let (f2, _) = alg.f.divrem(&f1)?;
    refine(&alg.f, &f1, &f2)
}

/// Newton iteration on f = f1 f2 for monic coprime f1, f2 known to lower
/// precision than f.
fn refine(f: &Poly, f1: &Poly, f2: &Poly) -> Result<(Poly, Poly), Error> {
    let field = f.field();
    let (n, n1, n2) = (f.degree(), f1.degree(), f2.degree());
    if n1 + n2 != n {
        return Err(exhausted("factor degrees do not add up"));
    }
    let shifted = |h: &Poly, i: usize| -> Vec<Elem> {
        (0..n).map(|r| if r >= i { h.coeff(r - i) } else { Elem::zero(field) }).collect()
    };
    let (mut f1, mut f2) = (rebase_poly(f1, field), rebase_poly(f2, field));
    let mut last = None;
    for _ in 0..64 {
        let err = f.sub(&f1.mul(&f2));
        let v = err.coeffs().iter().filter_map(|c| c.valuation().filter(|&v| v < c.prec().min(field.precision()))).min();
        let Some(v) = v else { return Ok((f1, f2)) };
        if last.is_some_and(|l| v <= l) {
            // products with coefficients of negative valuation lose that
            // many digits, so the error cannot get below it
            let lowest = f1.coeffs().iter().chain(f2.coeffs()).filter_map(|c| c.valuation()).min().unwrap_or(0);
            if v >= field.precision() - 2 * (-lowest).max(0) - field.e() {
                return Ok((f1, f2));
            }
            return Err(exhausted("factor does not divide at this precision"));
        }
        last = Some(v);
        let mut cols: Vec<Vec<Elem>> = (0..n1).map(|i| shifted(&f2, i)).collect();
        cols.extend((0..n2).map(|j| shifted(&f1, j)));
        let rhs: Vec<Elem> = (0..n).map(|r| err.coeff(r)).collect();
        let Some(x) = linalg::solve(field, &cols, &rhs)? else {
            return Err(exhausted("factor does not divide at this precision"));
        };
        f1 = f1.add(&Poly::new(field, x[..n1].to_vec()));
        f2 = f2.add(&Poly::new(field, x[n1..].to_vec()));
    }
    Err(exhausted("factor refinement did not converge"))
}

/// Copy of x in a tower with the same stages and different precision; the
/// missing digits are read as zero.
fn rebase(x: &Elem, g: &LocalField) -> Elem {
    if x.is_zero() {
        return Elem::zero(g);
    }
    Elem::from_parts(g, x.shift(), x.coords().to_vec(), super::EXACT)
}

fn rebase_poly(f: &Poly, g: &LocalField) -> Poly {
    Poly::new(g, f.coeffs().iter().map(|c| rebase(c, g)).collect())
}

/// Runs `work` on f lifted to more digits: power-basis arithmetic in A loses
/// about the index of F[x]/(f) on every product.
fn lifted<T>(f: &Poly, work: impl Fn(&Poly) -> Result<T, Error>) -> Result<T, Error> {
    let k = f.field();
    let mut digits = 3 * k.digits() + 20;
    for attempt in 0..2 {
        let g = k.with_digits(digits);
        match work(&rebase_poly(f, &g)) {
            Err(Error::PrecisionExhausted(_)) if attempt == 0 => digits *= 2,
            other => return other,
        }
    }
    unreachable!()
}

/// Irreducible monic factors of a monic squarefree polynomial.
pub(crate) fn factor_squarefree(f: &Poly) -> Result<Vec<Poly>, Error> {
    let f = f.monic()?;
    if f.degree() <= 1 {
        return Ok(vec![f]);
    }
    let k = f.field().clone();
    let facs = lifted(&f, factor_lifted)?;
    Ok(facs.iter().map(|h| rebase_poly(h, &k)).collect())
}

fn factor_lifted(f: &Poly) -> Result<Vec<Poly>, Error> {
    if f.degree() <= 1 {
        return Ok(vec![f.clone()]);
    }
    match analyze(f)? {
        Outcome::Field(_) => Ok(vec![f.clone()]),
        Outcome::Split(a, b) => {
            let mut out = factor_lifted(&a)?;
            out.extend(factor_lifted(&b)?);
            Ok(out)
        }
    }
}

/// Stages of F(theta) over F and theta in the top field.
struct Stem {
    unramified: Vec<FPoly>,
    eisenstein: Option<Vec<Elem>>,
    theta: Elem,
}

/// F(theta) for the irreducible f, built as unramified stages followed by one
/// Eisenstein stage, with theta. `Ok(None)` if f is reducible.
pub(crate) fn stem_field(f: &Poly) -> Result<Option<(LocalField, Elem)>, Error> {
    let f = f.monic()?;
    let k = f.field().clone();
    let Some(stem) = lifted(&f, stem_lifted)? else { return Ok(None) };
    let mut top = k.clone();
    for sp in &stem.unramified {
        top = top.unramified(sp);
    }
    if let Some(c) = &stem.eisenstein {
        let coeffs: Vec<Elem> = c.iter().map(|x| rebase(x, &top)).collect();
        top = top.eisenstein(&coeffs)?;
    }
    let theta = rebase(&stem.theta, &top).with_prec(stem.theta.prec().min(top.precision()));
    Ok(Some((top, theta)))
}

fn stem_lifted(f: &Poly) -> Result<Option<Stem>, Error> {
    let data = match analyze(f)? {
        Outcome::Split(..) => return Ok(None),
        Outcome::Field(d) => d,
    };
    let f = f.clone();
    let alg = Algebra::new(&f)?;
    let base = alg.field.clone();
    let bl = base.residue_field().levels();
    let kbar = &data.kbar;
    // unramified part, with Hensel lifts in A of its stage generators
    let mut u = base.clone();
    let mut taus: Vec<Poly> = Vec::new();
    let mut unramified = Vec::new();
    for level in bl + 1..=kbar.levels() {
        let sp = kbar.stage_poly(level).to_vec();
        let coeffs: Vec<Poly> =
            sp.iter().map(|c| lift_with(&alg, kbar, bl, &taus, c, level - 1)).collect::<Result<_, _>>()?;
        let h_at = |t: &Poly| -> Result<(Poly, Poly), Error> {
            let mut v = Poly::zero(&base);
            let mut dv = Poly::zero(&base);
            for c in coeffs.iter().rev() {
                dv = alg.mul(&dv, t)?.add(&v);
                v = alg.mul(&v, t)?.add(c);
            }
            Ok((v, dv))
        };
        let mut t = data.gens[level - bl - 1].clone();
        let mut done = false;
        for _ in 0..(8 + 2 * (64 - (base.precision().max(1) as u64).leading_zeros()) as usize) {
            let (v, dv) = h_at(&t)?;
            if v.is_zero() {
                done = true;
                break;
            }
            let chi = alg.charpoly(&dv)?;
            t = t.sub(&alg.mul(&v, &alg.inv(&dv, &chi)?)?);
        }
        if !done {
            return Err(exhausted("unramified generator did not converge"));
        }
        taus.push(t);
        u = u.unramified(&sp);
        unramified.push(sp);
    }
    // U-basis monomials in A, first stage least significant
    let mut monos = vec![Poly::one(&base)];
    for (i, t) in taus.iter().enumerate() {
        let d = kbar.stage_degree(bl + i + 1);
        let mut next = Vec::with_capacity(monos.len() * d);
        let mut pw = Poly::one(&base);
        let mut powers = Vec::with_capacity(d);
        for _ in 0..d {
            powers.push(pw.clone());
            pw = alg.mul(&pw, t)?;
        }
        for p in &powers {
            for m in &monos {
                next.push(alg.mul(m, p)?);
            }
        }
        monos = next;
    }
    let fd = monos.len();
    let e = data.e as usize;
    let vec_of = |a: &Poly| -> Vec<Elem> { (0..alg.n).map(|i| a.coeff(i)).collect() };
    let mut cols = Vec::with_capacity(alg.n);
    let mut pis = vec![Poly::one(&base)];
    for i in 1..=e {
        pis.push(alg.mul(&pis[i - 1], &data.pi)?);
    }
    for p in pis.iter().take(e) {
        for m in &monos {
            cols.push(vec_of(&alg.mul(m, p)?));
        }
    }
    let as_u = |sol: &[Elem], i: usize| -> Elem { Elem::from_coords_over(&u, &base, &sol[i * fd..(i + 1) * fd]) };
    let mut eisenstein = None;
    let top = if e > 1 {
        let sol = linalg::solve(&base, &cols, &vec_of(&pis[e]))?
            .ok_or_else(|| exhausted("uniformizer relation not found"))?;
        let neg: Vec<Elem> = sol.iter().map(|c| c.neg()).collect();
        let mut coeffs: Vec<Elem> = (0..e).map(|i| as_u(&neg, i)).collect();
        coeffs.push(Elem::one(&u));
        let top = u.eisenstein(&coeffs)?;
        eisenstein = Some(coeffs);
        top
    } else {
        u.clone()
    };
    let theta_coords = linalg::solve(&base, &cols, &vec_of(&Poly::x(&base).divrem(&alg.f)?.1))?
        .ok_or_else(|| exhausted("generator not expressed in the new basis"))?;
    let pit = top.uniformizer().clone();
    let mut theta = Elem::zero(&top);
    let mut pp = Elem::one(&top);
    for i in 0..e {
        theta = theta.add(&as_u(&theta_coords, i).embed(&top).mul(&pp));
        if e > 1 {
            pp = pp.mul(&pit);
        }
    }
    Ok(Some(Stem { unramified, eisenstein, theta }))
}
