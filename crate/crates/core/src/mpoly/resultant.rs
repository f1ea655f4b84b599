//! Resultants as Sylvester determinants over the polynomial ring.
//!
//! Signs never matter in characteristic 2, so the determinant is the plain
//! sum over permutations. Small matrices use cofactor expansion; larger ones
//! use fraction-free Bareiss elimination with exact division.

use super::{Domain, MPoly, PolyError, Var};

const COFACTOR_LIMIT: usize = 6;

/// Sylvester matrix of `p` and `q` with respect to `v`, rows of `p` first.
pub fn sylvester_matrix(p: &MPoly, q: &MPoly, v: Var) -> Result<Vec<Vec<MPoly>>, PolyError> {
    p.check_domain(q)?;
    let m = p.degree_in(v) as usize;
    let n = q.degree_in(v) as usize;
    if m == 0 {
        return Err(PolyError::ZeroDegree(v));
    }
    if n == 0 {
        return Err(PolyError::ZeroDegree(v));
    }
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    let size = m + n;
    let zero = MPoly::zero(p.domain());
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in pc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in qc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

pub(super) fn resultant(p: &MPoly, q: &MPoly, v: Var) -> Result<MPoly, PolyError> {
    let matrix = sylvester_matrix(p, q, v)?;
    determinant(matrix, p.domain())
}

pub fn determinant(matrix: Vec<Vec<MPoly>>, domain: Domain) -> Result<MPoly, PolyError> {
    if matrix.len() <= COFACTOR_LIMIT {
        Ok(determinant_cofactor(&matrix, domain))
    } else {
        determinant_bareiss(matrix, domain)
    }
}

/// Laplace expansion along the first column, skipping zero entries.
pub fn determinant_cofactor(matrix: &[Vec<MPoly>], domain: Domain) -> MPoly {
    let n = matrix.len();
    let rows: Vec<usize> = (0..n).collect();
    expand(matrix, &rows, 0, domain)
}

fn expand(matrix: &[Vec<MPoly>], rows: &[usize], col: usize, domain: Domain) -> MPoly {
    if rows.is_empty() {
        return MPoly::one(domain);
    }
    if rows.len() == 1 {
        return matrix[rows[0]][col].clone();
    }
    let mut acc = MPoly::zero(domain);
    for (i, &r) in rows.iter().enumerate() {
        let entry = &matrix[r][col];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &r)| r)
            .collect();
        let minor = expand(matrix, &rest, col + 1, domain);
        if !minor.is_zero() {
            acc = &acc + &(entry * &minor);
        }
    }
    acc
}

pub fn determinant_bareiss(mut a: Vec<Vec<MPoly>>, domain: Domain) -> Result<MPoly, PolyError> {
    let n = a.len();
    if n == 0 {
        return Ok(MPoly::one(domain));
    }
    let mut prev = MPoly::one(domain);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => a.swap(k, i),
                None => return Ok(MPoly::zero(domain)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) + &(&a[i][k] * &a[k][j]);
                a[i][j] = num.divide_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(a[n - 1][n - 1].clone())
}
