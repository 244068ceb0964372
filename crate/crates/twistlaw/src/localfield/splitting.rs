//! Splitting fields by repeated adjunction.

use crate::Error;

use super::elem::Elem;
use super::extend::extend;
use super::factor::factor;
use super::field::LocalField;
use super::poly::Poly;
use super::roots::roots;

pub const DEFAULT_DEGREE_CAP: usize = 24;

#[derive(Debug, Clone)]
pub struct SplittingTower {
    pub base: LocalField,
    pub top: LocalField,
    /// Relative degree of each adjunction, in order.
    pub steps: Vec<usize>,
    pub roots: Vec<Elem>,
}

impl SplittingTower {
    pub fn degree(&self) -> usize {
        self.steps.iter().product()
    }
}

/// Splitting field of the squarefree polynomial `f` over its field.
///
/// Over each new field the roots are found directly; only the part of `f`
/// they leave over is factored.
pub fn splitting_tower(f: &Poly, cap: usize) -> Result<SplittingTower, Error> {
    let base = f.field().clone();
    let mut top = base.clone();
    let mut steps = Vec::new();
    loop {
        let fe = f.embed(&top).monic()?;
        let mut found = if steps.is_empty() { vec![] } else { roots(&fe)? };
        if found.len() == fe.degree() {
            return Ok(SplittingTower { base, top, steps, roots: found });
        }
        let mut rest = fe;
        for r in &found {
            rest = rest.divrem(&Poly::linear(r))?.0;
        }
        let facs = factor(&rest)?;
        if facs.iter().any(|(_, m)| *m > 1) {
            return Err(Error::NotSquarefree);
        }
        let Some((h, _)) = facs.iter().rev().find(|(h, _)| h.degree() > 1) else {
            found.extend(facs.iter().map(|(h, _)| h.coeff(0).neg()));
            return Ok(SplittingTower { base, top, steps, roots: found });
        };
        let d = h.degree();
        let total: usize = steps.iter().product::<usize>() * d;
        if total > cap {
            return Err(Error::DegreeOverflow(total));
        }
        let (g, _) = extend(h)?;
        steps.push(d);
        top = g;
    }
}
