//! Dense linear algebra over base-rational expressions.

use super::rational::RationalExpr;
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<RationalExpr>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { RationalExpr::one() } else { RationalExpr::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(a.len());
    for row in a {
        if row.len() != inner {
            return Err(Error::Unsupported("matrix shape mismatch".into()));
        }
        let mut r = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut acc = RationalExpr::zero();
            for (k, x) in row.iter().enumerate() {
                if !x.is_zero() && !b[k][j].is_zero() {
                    acc = acc.checked_add(&x.checked_mul(&b[k][j])?)?;
                }
            }
            r.push(acc);
        }
        out.push(r);
    }
    Ok(out)
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().flatten().all(RationalExpr::is_zero)
}

/// Indices of the lexicographically-first maximal independent set of rows.
pub fn independent_rows(rows: &[Vec<RationalExpr>]) -> Result<Vec<usize>> {
    // Reduced rows kept with their pivot columns.
    let mut basis: Vec<(usize, Vec<RationalExpr>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (pc, b) in &basis {
            if r[*pc].is_zero() {
                continue;
            }
            let f = r[*pc].clone();
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.checked_sub(&f.checked_mul(y)?)?;
                }
            }
        }
        if let Some(pc) = r.iter().position(|x| !x.is_zero()) {
            let inv = r[pc].inv()?;
            for x in r.iter_mut() {
                *x = x.checked_mul(&inv)?;
            }
            for (_, b) in basis.iter_mut() {
                if b[pc].is_zero() {
                    continue;
                }
                let f = b[pc].clone();
                for (x, y) in b.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x = x.checked_sub(&f.checked_mul(y)?)?;
                    }
                }
            }
            basis.push((pc, r));
            chosen.push(idx);
        }
    }
    Ok(chosen)
}

pub fn rank(rows: &[Vec<RationalExpr>]) -> Result<usize> {
    Ok(independent_rows(rows)?.len())
}

/// Gauss-Jordan inverse; `Err(SingularBlock)` if no inverse exists.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut m: Vec<Vec<RationalExpr>> = a
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::SingularBlock(format!("no pivot in column {col}")))?;
        m.swap(col, piv);
        let inv = m[col][col].inv()?;
        for x in m[col].iter_mut() {
            *x = x.checked_mul(&inv)?;
        }
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = x.checked_sub(&f.checked_mul(y)?)?;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant by fraction-free expansion along elimination.
pub fn determinant(a: &Matrix) -> Result<RationalExpr> {
    let n = a.len();
    let mut m = a.clone();
    let mut det = RationalExpr::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(RationalExpr::zero());
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det = det.checked_mul(&m[col][col])?;
        let inv = m[col][col].inv()?;
        let prow = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].checked_mul(&inv)?;
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = x.checked_sub(&f.checked_mul(y)?)?;
                }
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::var::Var;

    fn c(n: i64) -> RationalExpr {
        RationalExpr::int(n)
    }

    #[test]
    fn inverse_and_determinant() {
        let x = RationalExpr::var(&Var::base("x"));
        let a = vec![vec![x.clone(), c(1)], vec![c(1), c(1)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv).unwrap(), identity(2));
        assert_eq!(determinant(&a).unwrap(), &x - &c(1));
    }

    #[test]
    fn lex_first_rows() {
        let rows = vec![
            vec![c(1), c(2)],
            vec![c(2), c(4)],
            vec![c(0), c(1)],
        ];
        assert_eq!(independent_rows(&rows).unwrap(), vec![0, 2]);
        assert!(inverse(&vec![vec![c(1), c(2)], vec![c(2), c(4)]]).is_err());
    }
}
