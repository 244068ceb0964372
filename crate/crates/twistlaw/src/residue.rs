//! Finite fields as towers of polynomial quotients over F_p.
//!
//! An element at level `l` is a coordinate vector of length `dim(l)`; the
//! coordinate for the monomial t_1^i_1 ... t_l^i_l sits at index
//! i_1 + d_1 (i_2 + d_2 (...)), so level `l - 1` elements are the first block.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type FElem = Vec<u64>;
pub type FPoly = Vec<FElem>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct RStage {
    /// Monic defining polynomial over the previous level, constant term first.
    poly: Vec<FElem>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct ResidueInner {
    p: u64,
    stages: Vec<RStage>,
    dims: Vec<usize>,
}

/// A finite field F_p[t_1,...,t_s] given by a tower of irreducible polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField(Arc<ResidueInner>);

impl ResidueField {
    pub fn prime(p: u64) -> Self {
        ResidueField(Arc::new(ResidueInner { p, stages: vec![], dims: vec![1] }))
    }

    /// Adjoins a root of `poly` (monic, irreducible over the top level).
    pub fn extend(&self, poly: &FPoly) -> Self {
        let top = self.levels();
        let d = poly.len() - 1;
        debug_assert!(poly[d] == self.one_at(top));
        let mut inner = ResidueInner {
            p: self.0.p,
            stages: self.0.stages.clone(),
            dims: self.0.dims.clone(),
        };
        inner.stages.push(RStage { poly: poly.clone() });
        inner.dims.push(self.dim(top) * d);
        ResidueField(Arc::new(inner))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Number of stages.
    pub fn levels(&self) -> usize {
        self.0.stages.len()
    }

    /// Degree over F_p of the level-`l` subfield.
    pub fn dim(&self, l: usize) -> usize {
        self.0.dims[l]
    }

    pub fn degree(&self) -> usize {
        self.dim(self.levels())
    }

    pub fn stage_degree(&self, l: usize) -> usize {
        self.0.stages[l - 1].poly.len() - 1
    }

    pub fn stage_poly(&self, l: usize) -> &[FElem] {
        &self.0.stages[l - 1].poly
    }

    /// The prefix tower of the first `l` stages.
    pub fn truncate(&self, l: usize) -> Self {
        if l == self.levels() {
            return self.clone();
        }
        ResidueField(Arc::new(ResidueInner {
            p: self.0.p,
            stages: self.0.stages[..l].to_vec(),
            dims: self.0.dims[..=l].to_vec(),
        }))
    }

    /// Whether `other` is a prefix of this tower.
    pub fn has_prefix(&self, other: &ResidueField) -> bool {
        other.0.p == self.0.p
            && other.levels() <= self.levels()
            && self.0.stages[..other.levels()] == other.0.stages[..]
    }

    pub fn order(&self) -> BigUint {
        self.order_at(self.levels())
    }

    pub fn order_at(&self, l: usize) -> BigUint {
        num_traits::pow(BigUint::from(self.0.p), self.dim(l))
    }

    /// Arithmetic at the top level.
    pub fn top(&self) -> Fq<'_> {
        Fq { rf: self, level: self.levels() }
    }

    pub fn at(&self, level: usize) -> Fq<'_> {
        Fq { rf: self, level }
    }

    pub fn zero_at(&self, l: usize) -> FElem {
        vec![0; self.dim(l)]
    }

    pub fn one_at(&self, l: usize) -> FElem {
        let mut v = vec![0; self.dim(l)];
        v[0] = 1;
        v
    }

    /// Embeds a level-`from` element into level `to`.
    pub fn embed(&self, x: &[u64], to: usize) -> FElem {
        let mut v = vec![0; self.dim(to)];
        v[..x.len()].copy_from_slice(x);
        v
    }

    /// Returns the level-`l` element if `x` lies in that subfield.
    pub fn restrict(&self, x: &[u64], l: usize) -> Option<FElem> {
        let d = self.dim(l);
        if x[d..].iter().all(|&c| c == 0) {
            Some(x[..d].to_vec())
        } else {
            None
        }
    }

    fn mul_level(&self, l: usize, a: &[u64], b: &[u64]) -> FElem {
        let p = self.0.p;
        if l == 0 {
            return vec![((a[0] as u128 * b[0] as u128) % p as u128) as u64];
        }
        let sub = self.dim(l - 1);
        let d = self.stage_degree(l);
        let mut prod: Vec<FElem> = vec![vec![0; sub]; 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * sub..(i + 1) * sub];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * sub..(j + 1) * sub];
                if bj.iter().all(|&c| c == 0) {
                    continue;
                }
                let t = self.mul_level(l - 1, ai, bj);
                add_assign(&mut prod[i + j], &t, p);
            }
        }
        let phi = &self.0.stages[l - 1].poly;
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for m in 0..d {
                let t = self.mul_level(l - 1, &c, &phi[m]);
                sub_assign(&mut prod[k - d + m], &t, p);
            }
        }
        let mut out = Vec::with_capacity(sub * d);
        for block in prod.into_iter().take(d) {
            out.extend(block);
        }
        out
    }
}

fn add_assign(a: &mut [u64], b: &[u64], p: u64) {
    for (x, y) in a.iter_mut().zip(b) {
        let s = *x + *y;
        *x = if s >= p { s - p } else { s };
    }
}

fn sub_assign(a: &mut [u64], b: &[u64], p: u64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = if *x >= *y { *x - *y } else { *x + p - *y };
    }
}

/// Arithmetic handle for one level of a residue tower.
#[derive(Clone, Copy)]
pub struct Fq<'a> {
    pub rf: &'a ResidueField,
    pub level: usize,
}

impl<'a> Fq<'a> {
    pub fn p(&self) -> u64 {
        self.rf.p()
    }

    pub fn dim(&self) -> usize {
        self.rf.dim(self.level)
    }

    pub fn q(&self) -> BigUint {
        self.rf.order_at(self.level)
    }

    pub fn zero(&self) -> FElem {
        self.rf.zero_at(self.level)
    }

    pub fn one(&self) -> FElem {
        self.rf.one_at(self.level)
    }

    pub fn from_u64(&self, n: u64) -> FElem {
        let mut v = self.zero();
        v[0] = n % self.p();
        v
    }

    pub fn from_i64(&self, n: i64) -> FElem {
        let p = self.p() as i64;
        self.from_u64(n.rem_euclid(p) as u64)
    }

    /// The generator of the top stage (or 1 at level 0).
    pub fn gen(&self) -> FElem {
        let mut v = self.zero();
        if self.level == 0 {
            v[0] = 1;
        } else {
            v[self.rf.dim(self.level - 1)] = 1;
        }
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> FElem {
        let mut v = a.to_vec();
        add_assign(&mut v, b, self.p());
        v
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> FElem {
        let mut v = a.to_vec();
        sub_assign(&mut v, b, self.p());
        v
    }

    pub fn neg(&self, a: &[u64]) -> FElem {
        let p = self.p();
        a.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> FElem {
        self.rf.mul_level(self.level, a, b)
    }

    pub fn scale(&self, a: &[u64], k: u64) -> FElem {
        let p = self.p();
        a.iter().map(|&c| ((c as u128 * k as u128) % p as u128) as u64).collect()
    }

    pub fn pow(&self, a: &[u64], e: &BigUint) -> FElem {
        let mut r = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn inv(&self, a: &[u64]) -> FElem {
        assert!(!self.is_zero(a), "inverse of zero in residue field");
        let e = self.q() - 2u32;
        self.pow(a, &e)
    }

    pub fn div(&self, a: &[u64], b: &[u64]) -> FElem {
        self.mul(a, &self.inv(b))
    }

    pub fn is_square(&self, a: &[u64]) -> bool {
        if self.p() == 2 || self.is_zero(a) {
            return true;
        }
        let e = (self.q() - 1u32) >> 1;
        self.is_one(&self.pow(a, &e))
    }

    /// The unique p-th root (Frobenius inverse).
    pub fn pth_root(&self, a: &[u64]) -> FElem {
        let e = self.q() / self.p();
        self.pow(a, &e)
    }

    /// Enumerates elements in a fixed order: coordinates are the base-p digits of `n`.
    pub fn nth_element(&self, mut n: u128) -> FElem {
        let p = self.p() as u128;
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = (n % p) as u64;
            n /= p;
        }
        v
    }

    /// The first non-square in the enumeration order (odd p only).
    pub fn non_square(&self) -> FElem {
        assert!(self.p() != 2);
        (1u128..)
            .map(|n| self.nth_element(n))
            .find(|x| !self.is_square(x))
            .unwrap()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x7477_6973_746c_6177)
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> FElem {
        let p = self.p();
        (0..self.dim()).map(|_| rng.gen_range(0..p)).collect()
    }

    // ---- polynomials -------------------------------------------------

    pub fn poly_trim(&self, f: &mut FPoly) {
        while !f.is_empty() && self.is_zero(f.last().unwrap()) {
            f.pop();
        }
    }

    pub fn poly_deg(&self, f: &[FElem]) -> Option<usize> {
        f.iter().rposition(|c| !self.is_zero(c))
    }

    pub fn poly_monic(&self, f: &[FElem]) -> FPoly {
        let mut f = f.to_vec();
        self.poly_trim(&mut f);
        if f.is_empty() {
            return f;
        }
        let li = self.inv(f.last().unwrap());
        f.iter().map(|c| self.mul(c, &li)).collect()
    }

    pub fn poly_add(&self, a: &[FElem], b: &[FElem]) -> FPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut out: FPoly = (0..n)
            .map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.poly_trim(&mut out);
        out
    }

    pub fn poly_sub(&self, a: &[FElem], b: &[FElem]) -> FPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut out: FPoly = (0..n)
            .map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.poly_trim(&mut out);
        out
    }

    pub fn poly_mul(&self, a: &[FElem], b: &[FElem]) -> FPoly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.mul(x, y);
                add_assign(&mut out[i + j], &t, self.p());
            }
        }
        self.poly_trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn poly_divrem(&self, a: &[FElem], b: &[FElem]) -> (FPoly, FPoly) {
        let mut b = b.to_vec();
        self.poly_trim(&mut b);
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = a.to_vec();
        self.poly_trim(&mut r);
        if r.len() < b.len() {
            return (vec![], r);
        }
        let lb = self.inv(b.last().unwrap());
        let db = b.len() - 1;
        let mut q = vec![self.zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mul(&r[k + db], &lb);
            if !self.is_zero(&c) {
                for (i, bi) in b.iter().enumerate() {
                    let t = self.mul(&c, bi);
                    sub_assign(&mut r[k + i], &t, self.p());
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        self.poly_trim(&mut r);
        self.poly_trim(&mut q);
        (q, r)
    }

    pub fn poly_rem(&self, a: &[FElem], b: &[FElem]) -> FPoly {
        self.poly_divrem(a, b).1
    }

    pub fn poly_gcd(&self, a: &[FElem], b: &[FElem]) -> FPoly {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        self.poly_trim(&mut a);
        self.poly_trim(&mut b);
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(&a)
    }

    /// (g, s, t) with s a + t b = g monic.
    pub fn poly_xgcd(&self, a: &[FElem], b: &[FElem]) -> (FPoly, FPoly, FPoly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        self.poly_trim(&mut r0);
        self.poly_trim(&mut r1);
        let (mut s0, mut s1): (FPoly, FPoly) = (vec![self.one()], vec![]);
        let (mut t0, mut t1): (FPoly, FPoly) = (vec![], vec![self.one()]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_empty() {
            return (r0, s0, t0);
        }
        let li = vec![self.inv(r0.last().unwrap())];
        (self.poly_mul(&r0, &li), self.poly_mul(&s0, &li), self.poly_mul(&t0, &li))
    }

    pub fn poly_deriv(&self, f: &[FElem]) -> FPoly {
        let mut out: FPoly = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.scale(c, (i as u64) % self.p()))
            .collect();
        self.poly_trim(&mut out);
        out
    }

    pub fn poly_eval(&self, f: &[FElem], x: &[u64]) -> FElem {
        let mut acc = self.zero();
        for c in f.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// a^e mod m.
    pub fn poly_powmod(&self, a: &[FElem], e: &BigUint, m: &[FElem]) -> FPoly {
        let mut r = vec![self.one()];
        let base = self.poly_rem(a, m);
        for i in (0..e.bits()).rev() {
            r = self.poly_rem(&self.poly_mul(&r, &r), m);
            if e.bit(i) {
                r = self.poly_rem(&self.poly_mul(&r, &base), m);
            }
        }
        r
    }

    fn x_poly(&self) -> FPoly {
        vec![self.zero(), self.one()]
    }

    /// Product of the distinct monic irreducible factors of `f`.
    pub fn poly_radical(&self, f: &[FElem]) -> FPoly {
        let f = self.poly_monic(f);
        if f.len() <= 1 {
            return vec![self.one()];
        }
        let d = self.poly_deriv(&f);
        if d.is_empty() {
            return self.poly_radical(&self.poly_pth_root(&f));
        }
        let g = self.poly_gcd(&f, &d);
        let w = self.poly_divrem(&f, &g).0;
        let mut g2 = g;
        loop {
            let c = self.poly_gcd(&g2, &w);
            if c.len() <= 1 {
                break;
            }
            g2 = self.poly_divrem(&g2, &c).0;
        }
        let w = self.poly_monic(&w);
        if g2.len() <= 1 {
            return w;
        }
        let rest = self.poly_radical(&self.poly_pth_root(&g2));
        self.poly_monic(&self.poly_mul(&w, &rest))
    }

    /// h with h(x)^p = f(x), for f a polynomial in x^p.
    fn poly_pth_root(&self, f: &[FElem]) -> FPoly {
        let p = self.p() as usize;
        (0..f.len())
            .step_by(p)
            .map(|i| self.pth_root(&f[i]))
            .collect()
    }

    /// Distinct roots of `f` in this field.
    pub fn roots(&self, f: &[FElem]) -> Vec<FElem> {
        let f = self.poly_monic(f);
        if f.len() <= 1 {
            return vec![];
        }
        let mut out = Vec::new();
        let mut f = f;
        // zero root
        if self.is_zero(&f[0]) {
            out.push(self.zero());
            while !f.is_empty() && self.is_zero(&f[0]) {
                f.remove(0);
            }
        }
        if f.len() <= 1 {
            return out;
        }
        let xq = self.poly_powmod(&self.x_poly(), &self.q(), &f);
        let g = self.poly_gcd(&f, &self.poly_sub(&xq, &self.x_poly()));
        let mut lin = Vec::new();
        self.equal_degree(&g, 1, &mut lin);
        for l in lin {
            out.push(self.neg(&l[0]));
        }
        out.sort();
        out
    }

    /// Number of distinct roots of `f` in this field.
    pub fn count_roots(&self, f: &[FElem]) -> usize {
        let mut f = self.poly_monic(f);
        if f.len() <= 1 {
            return 0;
        }
        let mut n = 0;
        if self.is_zero(&f[0]) {
            n += 1;
            while self.is_zero(&f[0]) {
                f.remove(0);
            }
        }
        if f.len() <= 1 {
            return n;
        }
        let xq = self.poly_powmod(&self.x_poly(), &self.q(), &f);
        let g = self.poly_gcd(&f, &self.poly_sub(&xq, &self.x_poly()));
        n + g.len() - 1
    }

    /// Multiplicity of `r` as a root of `f`.
    pub fn root_multiplicity(&self, f: &[FElem], r: &[u64]) -> usize {
        let lin = vec![self.neg(r), self.one()];
        let mut g = f.to_vec();
        self.poly_trim(&mut g);
        let mut m = 0;
        while !g.is_empty() {
            let (q, rem) = self.poly_divrem(&g, &lin);
            if !rem.is_empty() {
                break;
            }
            g = q;
            m += 1;
        }
        m
    }

    /// Splits a squarefree monic product of irreducibles of degree `d`.
    fn equal_degree(&self, f: &[FElem], d: usize, out: &mut Vec<FPoly>) {
        let n = f.len() - 1;
        if n == 0 {
            return;
        }
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let mut rng = self.rng();
        // deterministic seed mixed with the input degree
        for _ in 0..n {
            let _ = rng.gen::<u64>();
        }
        let qd = num_traits::pow(self.q(), d);
        loop {
            let h: FPoly = {
                let mut h: FPoly = (0..n).map(|_| self.random(&mut rng)).collect();
                self.poly_trim(&mut h);
                h
            };
            if h.len() <= 1 {
                continue;
            }
            let t = if self.p() == 2 {
                // trace-like map h + h^2 + ... + h^(2^(k d - 1))
                let k = self.dim() * d;
                let mut acc = self.poly_rem(&h, f);
                let mut cur = acc.clone();
                for _ in 1..k {
                    cur = self.poly_rem(&self.poly_mul(&cur, &cur), f);
                    acc = self.poly_add(&acc, &cur);
                }
                acc
            } else {
                let e = (&qd - 1u32) >> 1;
                let t = self.poly_powmod(&h, &e, f);
                self.poly_sub(&t, &[self.one()])
            };
            let g = self.poly_gcd(f, &t);
            let dg = g.len() - 1;
            if dg > 0 && dg < n {
                let other = self.poly_divrem(f, &g).0;
                let other = self.poly_monic(&other);
                self.equal_degree(&g, d, out);
                self.equal_degree(&other, d, out);
                return;
            }
        }
    }

    /// Monic irreducible factors of the radical of `f`, sorted by degree.
    pub fn irreducible_factors(&self, f: &[FElem]) -> Vec<FPoly> {
        let mut rest = self.poly_radical(f);
        let mut out = Vec::new();
        let x = self.x_poly();
        let mut h = x.clone();
        let mut d = 0;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                out.push(rest.clone());
                break;
            }
            h = self.poly_powmod(&h, &self.q(), &rest);
            let g = self.poly_gcd(&rest, &self.poly_sub(&h, &x));
            if g.len() > 1 {
                self.equal_degree(&g, d, &mut out);
                rest = self.poly_monic(&self.poly_divrem(&rest, &g).0);
                h = self.poly_rem(&h, &rest);
            }
        }
        out.sort_by_key(|g| g.len());
        out
    }

    /// Minimal polynomial over the level-`sub` subfield, as a level-`sub` polynomial.
    pub fn min_poly_over(&self, a: &[u64], sub: usize) -> FPoly {
        let qs = self.rf.order_at(sub);
        let mut conj = vec![a.to_vec()];
        loop {
            let next = self.pow(conj.last().unwrap(), &qs);
            if next == conj[0] {
                break;
            }
            conj.push(next);
        }
        let mut poly = vec![self.one()];
        for c in &conj {
            poly = self.poly_mul(&poly, &[self.neg(c), self.one()]);
        }
        poly.iter()
            .map(|c| self.rf.restrict(c, sub).expect("conjugate product outside subfield"))
            .collect()
    }

    /// Coordinates of `a` over the level-`sub` subfield (blocks of `dim(sub)`).
    pub fn coords_over(&self, a: &[u64], sub: usize) -> Vec<FElem> {
        a.chunks(self.rf.dim(sub)).map(|c| c.to_vec()).collect()
    }
}

/// An irreducible polynomial of degree `d` over the top level of `rf`.
pub fn irreducible_of_degree(rf: &ResidueField, d: usize) -> FPoly {
    let k = rf.top();
    let mut n: u128 = 0;
    loop {
        let mut f = vec![k.zero(); d + 1];
        f[d] = k.one();
        let mut m = n;
        let q = num_traits::ToPrimitive::to_u128(&k.q()).unwrap_or(u128::MAX);
        for c in f.iter_mut().take(d) {
            *c = k.nth_element(m % q);
            m /= q;
        }
        n += 1;
        if k.is_zero(&f[0]) {
            continue;
        }
        let facs = k.irreducible_factors(&f);
        if facs.len() == 1 && facs[0].len() == d + 1 {
            return f;
        }
    }
}
