//! Towers of unramified and Eisenstein extensions over Q_p.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::residue::{FPoly, ResidueField};
use crate::Error;

use super::elem::Elem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum StageKind {
    Unramified,
    Eisenstein,
}

#[derive(Debug, PartialEq, Eq)]
pub struct Stage {
    pub kind: StageKind,
    /// Monic defining polynomial; each coefficient is an integral coordinate
    /// vector over the previous level. Constant term first.
    pub poly: Vec<Vec<BigInt>>,
}

impl Stage {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }
}

pub struct FieldInner {
    pub(crate) p: BigInt,
    pub(crate) p_u64: u64,
    pub(crate) stages: Vec<Arc<Stage>>,
    /// dims[l]: degree over Q_p of the level-l subfield.
    pub(crate) dims: Vec<usize>,
    /// e after l stages.
    pub(crate) e_at: Vec<i64>,
    pub(crate) residue: ResidueField,
    /// Residue-tower level reached after l stages.
    pub(crate) res_level_at: Vec<usize>,
    /// Valuation (in units of this field's uniformizer) of each basis monomial.
    pub(crate) weights: Vec<i64>,
    /// For each basis monomial without ramified exponents, its residue coordinate.
    pub(crate) res_index: Vec<Option<usize>>,
    /// Basis position of each residue coordinate.
    pub(crate) res_pos: Vec<usize>,
    /// p-adic digits of precision.
    pub(crate) digits: i64,
    pub(crate) parent: Option<LocalField>,
    pub(crate) uniformizer: OnceLock<Elem>,
    pub(crate) pi_inv: OnceLock<Elem>,
    pub(crate) pi_pows: Mutex<HashMap<i64, Elem>>,
    /// p^k for 0 <= k <= 2 digits + 2.
    pub(crate) p_pows: OnceLock<Vec<BigInt>>,
}

/// A finite extension of Q_p, built as a tower of stages.
#[derive(Clone)]
pub struct LocalField(pub(crate) Arc<FieldInner>);

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalField(p={}, e={}, f={}, N={}, stages={:?})",
            self.p(),
            self.e(),
            self.f(),
            self.precision(),
            self.0.stages.iter().map(|s| (s.kind, s.degree())).collect::<Vec<_>>()
        )
    }
}

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.digits == other.0.digits
                && self.0.stages.len() == other.0.stages.len()
                && self.0.stages.iter().zip(&other.0.stages).all(|(a, b)| a == b))
    }
}

/// Working precision floor in p-adic digits; `TWISTLAW_PRECISION` overrides it.
pub fn precision_floor() -> i64 {
    std::env::var("TWISTLAW_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(40)
}

/// Q_p with `precision` p-adic digits.
pub fn make_padic_field(p: &BigInt, precision: i64) -> Result<LocalField, Error> {
    if !arith::is_prime(p) {
        return Err(Error::CompositeP(p.to_string()));
    }
    if precision < precision_floor() {
        return Err(Error::PrecisionTooLow { got: precision, floor: precision_floor() });
    }
    Ok(LocalField::qp(p, precision))
}

impl LocalField {
    /// Q_p without the precision floor check.
    pub fn qp(p: &BigInt, digits: i64) -> LocalField {
        let p_u64 = p.to_u64().expect("residue characteristic must fit in 64 bits");
        LocalField(Arc::new(FieldInner {
            p: p.clone(),
            p_u64,
            stages: vec![],
            dims: vec![1],
            e_at: vec![1],
            residue: ResidueField::prime(p_u64),
            res_level_at: vec![0],
            weights: vec![0],
            res_index: vec![Some(0)],
            res_pos: vec![0],
            digits,
            parent: None,
            uniformizer: OnceLock::new(),
            pi_inv: OnceLock::new(),
            pi_pows: Mutex::default(),
            p_pows: OnceLock::new(),
        }))
    }

    fn push_stage(&self, stage: Stage) -> LocalField {
        let inner = &self.0;
        let d = stage.degree();
        let mut stages = inner.stages.clone();
        let kind = stage.kind;
        let mut residue = inner.residue.clone();
        let mut res_level_at = inner.res_level_at.clone();
        let mut e_at = inner.e_at.clone();
        let prev_e = *e_at.last().unwrap();
        match kind {
            StageKind::Unramified => {
                let k = residue.top();
                let rpoly: FPoly = stage
                    .poly
                    .iter()
                    .map(|c| {
                        let mut v = k.zero();
                        for (b, x) in c.iter().enumerate() {
                            if let Some(r) = inner.res_index[b] {
                                v[r] = arith_mod_u64(x, inner.p_u64);
                            }
                        }
                        v
                    })
                    .collect();
                residue = residue.extend(&rpoly);
                e_at.push(prev_e);
                res_level_at.push(res_level_at.last().unwrap() + 1);
            }
            StageKind::Eisenstein => {
                e_at.push(prev_e * d as i64);
                res_level_at.push(*res_level_at.last().unwrap());
            }
        }
        stages.push(Arc::new(stage));
        let mut dims = inner.dims.clone();
        dims.push(inner.dims.last().unwrap() * d);
        let e_top = *e_at.last().unwrap();
        let n = *dims.last().unwrap();
        let mut weights = vec![0i64; n];
        let mut res_index = vec![None; n];
        let mut res_pos = vec![];
        // residue coordinate positions follow the same mixed radix restricted to unramified stages
        for (idx, w) in weights.iter_mut().enumerate() {
            let mut rem = idx;
            let mut wt = 0;
            let mut ridx = 0usize;
            let mut rmul = 1usize;
            let mut ramified = false;
            for (l, s) in stages.iter().enumerate() {
                let dl = s.degree();
                let i = rem % dl;
                rem /= dl;
                match s.kind {
                    StageKind::Eisenstein => {
                        wt += i as i64 * (e_top / e_at[l + 1]);
                        if i != 0 {
                            ramified = true;
                        }
                    }
                    StageKind::Unramified => {
                        ridx += i * rmul;
                        rmul *= dl;
                    }
                }
            }
            *w = wt;
            if !ramified {
                res_index[idx] = Some(ridx);
            }
        }
        let f = residue.degree();
        res_pos.resize(f, 0);
        for (idx, r) in res_index.iter().enumerate() {
            if let Some(r) = r {
                res_pos[*r] = idx;
            }
        }
        LocalField(Arc::new(FieldInner {
            p: inner.p.clone(),
            p_u64: inner.p_u64,
            stages,
            dims,
            e_at,
            residue,
            res_level_at,
            weights,
            res_index,
            res_pos,
            digits: inner.digits,
            parent: Some(self.clone()),
            uniformizer: OnceLock::new(),
            pi_inv: OnceLock::new(),
            pi_pows: Mutex::default(),
            p_pows: OnceLock::new(),
        }))
    }

    /// Unramified extension by a lift of a monic irreducible residue polynomial.
    pub fn unramified(&self, rpoly: &FPoly) -> LocalField {
        let coeffs = rpoly.iter().map(|c| self.lift_residue_coords(c)).collect();
        self.push_stage(Stage { kind: StageKind::Unramified, poly: coeffs })
    }

    /// Extension by a monic Eisenstein polynomial with coefficients in this field.
    pub fn eisenstein(&self, poly: &[Elem]) -> Result<LocalField, Error> {
        let d = poly.len() - 1;
        if d < 1 || !poly[d].is_one() {
            return Err(Error::Validation("Eisenstein polynomial must be monic".into()));
        }
        for (i, c) in poly.iter().enumerate().take(d) {
            let v = c.valuation_or_prec();
            if v < 1 || (i == 0 && v != 1) {
                return Err(Error::Validation("polynomial is not Eisenstein".into()));
            }
        }
        if d == 1 {
            return Ok(self.clone());
        }
        let coeffs = poly.iter().map(|c| c.integral_coords()).collect();
        Ok(self.push_stage(Stage { kind: StageKind::Eisenstein, poly: coeffs }))
    }

    /// A copy of this tower at a different p-adic precision.
    pub fn with_digits(&self, digits: i64) -> LocalField {
        let mut f = LocalField::qp(&self.0.p, digits);
        for s in &self.0.stages {
            f = f.push_stage(Stage { kind: s.kind, poly: s.poly.clone() });
        }
        f
    }

    pub fn p(&self) -> &BigInt {
        &self.0.p
    }

    pub fn p_u64(&self) -> u64 {
        self.0.p_u64
    }

    /// Absolute ramification index.
    pub fn e(&self) -> i64 {
        *self.0.e_at.last().unwrap()
    }

    /// Absolute residue degree.
    pub fn f(&self) -> usize {
        self.0.residue.degree()
    }

    pub fn degree(&self) -> usize {
        *self.0.dims.last().unwrap()
    }

    pub fn q(&self) -> num_bigint::BigUint {
        self.0.residue.order()
    }

    /// Precision N in units of the uniformizer.
    pub fn precision(&self) -> i64 {
        self.e() * self.0.digits
    }

    pub fn digits(&self) -> i64 {
        self.0.digits
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.0.residue
    }

    pub fn stages(&self) -> &[Arc<Stage>] {
        &self.0.stages
    }

    pub fn parent(&self) -> Option<&LocalField> {
        self.0.parent.as_ref()
    }

    /// v(p) in units of the uniformizer.
    pub fn vp(&self) -> i64 {
        self.e()
    }

    pub fn weights(&self) -> &[i64] {
        &self.0.weights
    }

    /// Whether `sub` is one of the fields this tower was built on (or equal).
    pub fn contains_subfield(&self, sub: &LocalField) -> bool {
        let mut cur = Some(self);
        while let Some(f) = cur {
            if Arc::ptr_eq(&f.0, &sub.0) {
                return true;
            }
            cur = f.parent();
        }
        false
    }

    /// Ramification index of this field over the subfield `sub`.
    pub fn e_over(&self, sub: &LocalField) -> i64 {
        self.e() / sub.e()
    }

    pub fn degree_over(&self, sub: &LocalField) -> usize {
        self.degree() / sub.degree()
    }

    /// The level-`l` subfield of the tower.
    pub fn level(&self, l: usize) -> LocalField {
        let mut cur = self.clone();
        while cur.0.stages.len() > l {
            cur = cur.parent().unwrap().clone();
        }
        cur
    }

    pub(crate) fn lift_residue_coords(&self, r: &[u64]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.degree()];
        for (i, &c) in r.iter().enumerate() {
            v[self.0.res_pos[i]] = BigInt::from(c);
        }
        v
    }

    /// Uniformizer: the top Eisenstein generator, or p.
    pub fn uniformizer(&self) -> &Elem {
        self.0.uniformizer.get_or_init(|| {
            let n = self.degree();
            let mut idx = None;
            let mut stride = 1;
            for s in self.0.stages.iter() {
                if s.kind == StageKind::Eisenstein {
                    idx = Some(stride);
                }
                stride *= s.degree();
            }
            match idx {
                Some(i) => {
                    let mut c = vec![BigInt::zero(); n];
                    c[i] = BigInt::one();
                    Elem::from_parts(self, 0, c, self.precision() + 1)
                }
                None => Elem::from_int(self, &self.0.p),
            }
        })
    }

    /// 1/pi to full relative precision.
    pub fn uniformizer_inv(&self) -> &Elem {
        self.0.pi_inv.get_or_init(|| self.uniformizer().inv().expect("uniformizer is invertible"))
    }

    /// pi^k, memoized.
    pub(crate) fn pi_pow(&self, k: i64) -> Elem {
        if let Some(x) = self.0.pi_pows.lock().unwrap().get(&k) {
            return x.clone();
        }
        let x = if k >= 0 {
            self.uniformizer().pow(k as u64)
        } else {
            self.uniformizer_inv().pow((-k) as u64)
        };
        self.0.pi_pows.lock().unwrap().insert(k, x.clone());
        x
    }
}

fn arith_mod_u64(x: &BigInt, p: u64) -> u64 {
    use num_integer::Integer;
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

pub(crate) fn pow_p(f: &LocalField, k: i64) -> BigInt {
    if k <= 0 {
        return BigInt::one();
    }
    let table = f.0.p_pows.get_or_init(|| {
        let mut v = vec![BigInt::one()];
        for _ in 0..2 * f.0.digits.max(1) + 2 {
            let next = v.last().unwrap() * &f.0.p;
            v.push(next);
        }
        v
    });
    match table.get(k as usize) {
        Some(x) => x.clone(),
        None => arith::pow_big(&f.0.p, k as u32),
    }
}
