//! Gaussian elimination over a local field with minimal-valuation pivoting.

use crate::Error;

use super::elem::Elem;
use super::field::LocalField;

fn pick_pivot(rows: &[Vec<Elem>], used: &[bool], col: usize) -> Option<usize> {
    rows.iter()
        .enumerate()
        .filter(|(r, row)| !used[*r] && !row[col].is_zero())
        .min_by_key(|(_, row)| row[col].valuation().unwrap())
        .map(|(r, _)| r)
}

/// Solves sum_j x_j cols[j] = rhs.
///
/// Returns `Ok(None)` when the system is inconsistent at the working
/// precision and an error when the columns are dependent.
pub fn solve(field: &LocalField, cols: &[Vec<Elem>], rhs: &[Elem]) -> Result<Option<Vec<Elem>>, Error> {
    let m = rhs.len();
    let n = cols.len();
    let mut rows: Vec<Vec<Elem>> = (0..m)
        .map(|r| {
            let mut row: Vec<Elem> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut used = vec![false; m];
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let pr = pick_pivot(&rows, &used, col)
            .ok_or_else(|| Error::PrecisionExhausted("linear system is singular at this precision".into()))?;
        used[pr] = true;
        let inv = rows[pr][col].inv()?;
        let prow: Vec<Elem> = rows[pr].iter().map(|x| x.mul(&inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pr || row[col].is_zero() {
                continue;
            }
            let c = row[col].clone();
            for k in col..=n {
                row[k] = row[k].sub(&c.mul(&prow[k]));
            }
        }
        rows[pr] = prow;
        pivots.push(pr);
    }
    for (r, row) in rows.iter().enumerate() {
        if !used[r] && !row[n].is_zero() {
            return Ok(None);
        }
    }
    let _ = field;
    Ok(Some(pivots.iter().map(|&r| rows[r][n].clone()).collect()))
}

/// Determinant of a square matrix (rows of elements).
pub fn determinant(field: &LocalField, mut rows: Vec<Vec<Elem>>) -> Result<Elem, Error> {
    let n = rows.len();
    let mut det = Elem::one(field);
    let mut used = vec![false; n];
    for col in 0..n {
        let pr = pick_pivot(&rows, &used, col)
            .ok_or_else(|| Error::PrecisionExhausted("determinant below precision".into()))?;
        used[pr] = true;
        let piv = rows[pr][col].clone();
        det = det.mul(&piv);
        // sign of the implicit row permutation
        let swaps = (0..pr).filter(|&r| !used[r]).count();
        if swaps % 2 == 1 {
            det = det.neg();
        }
        let inv = piv.inv()?;
        let prow = rows[pr].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if used[r] || row[col].is_zero() {
                continue;
            }
            let c = row[col].mul(&inv);
            for k in col..n {
                row[k] = row[k].sub(&c.mul(&prow[k]));
            }
        }
    }
    Ok(det)
}
