//! Dense exact matrices with rank, canonical kernel bases, and canonical
//! solves.
//!
//! Elimination over `Q` keeps rows as primitive integer vectors (denominators
//! cleared, content divided out) and picks pivots of smallest bit size, which
//! keeps entry growth polynomial in practice.  Over `Fp` it is plain Gaussian
//! elimination with the first nonzero pivot.  Both orders are deterministic,
//! so every derived object (reduced echelon form, kernel basis, particular
//! solution) is canonical: the same matrix always yields byte-identical
//! results.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Field, Scalar};

/// A `rows x cols` matrix over a single [`Field`], row-major.
///
/// Either dimension may be zero.  All entries are validated to lie in
/// `self.field` at construction, so arithmetic never observes a mixed-field
/// pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, field: Field) -> Matrix {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Matrix {
        let mut m = Matrix::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from row vectors; every row must have the same length and every
    /// entry must lie in `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::dim(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::field_mismatch(format!(
                        "entry in row {i} lies in {}, matrix is over {field}",
                        s.field()
                    )));
                }
            }
            data.extend(row.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, field, data })
    }

    /// Build from column vectors (each of length `rows`).
    pub fn from_columns(field: Field, columns: &[Vec<Scalar>], rows: usize) -> Result<Matrix> {
        let mut m = Matrix::zero(rows, columns.len(), field);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::dim(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, s) in col.iter().enumerate() {
                if s.field() != field {
                    return Err(Error::field_mismatch(format!(
                        "entry in column {j} lies in {}, matrix is over {field}",
                        s.field()
                    )));
                }
                m.set(i, j, s.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry field must match matrix field");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix product; panics on shape or field mismatch (internal misuse).
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        assert_eq!(self.field, rhs.field, "fields must agree");
        let mut out = Matrix::zero(self.rows, rhs.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = &(a * b) + out.get(i, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Canonical basis of the right kernel, one vector per free column in
    /// ascending column order.  The vector for free column `j` has a 1 in
    /// coordinate `j`, the negated reduced-echelon entries in the pivot
    /// coordinates, and 0 elsewhere; because the reduced echelon form is
    /// unique, so is this basis.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let red = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            // pivot_set[c] = index of the pivot row with pivot in column c
            let mut v = vec![None; self.cols];
            for (r, &c) in red.pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivot_set[j].is_some() {
                continue;
            }
            let mut vec = vec![self.field.zero(); self.cols];
            vec[j] = self.field.one();
            for (r, &c) in red.pivots.iter().enumerate() {
                vec[c] = -&red.rows[r][j];
            }
            basis.push(vec);
        }
        basis
    }

    /// Canonical solution of `self * x = rhs`: free coordinates are 0,
    /// pivot coordinates come from the reduced echelon form.  `None` when the
    /// system is inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if rhs.len() != self.rows {
            return Err(Error::dim(format!(
                "right-hand side has length {}, expected {}",
                rhs.len(),
                self.rows
            )));
        }
        let b = Matrix::from_columns(self.field, &[rhs.to_vec()], self.rows)?;
        Ok(self.solve_many(&b)?.map(|m| m.column(0)))
    }

    /// Solve `self * X = rhs` column by column with the canonical rule of
    /// [`Matrix::solve`].  `None` if any column is inconsistent.
    pub fn solve_many(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if rhs.rows() != self.rows {
            return Err(Error::dim(format!(
                "right-hand side has {} rows, expected {}",
                rhs.rows(),
                self.rows
            )));
        }
        if rhs.field() != self.field {
            return Err(Error::field_mismatch(format!(
                "right-hand side over {}, matrix over {}",
                rhs.field(),
                self.field
            )));
        }
        let mut aug = Matrix::zero(self.rows, self.cols + rhs.cols(), self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols() {
                aug.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        let red = aug.rref();
        // A pivot inside the augmented block certifies an inconsistent column.
        if red.pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zero(self.cols, rhs.cols(), self.field);
        for (r, &c) in red.pivots.iter().enumerate() {
            for j in 0..rhs.cols() {
                x.set(c, j, red.rows[r][self.cols + j].clone());
            }
        }
        Ok(Some(x))
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row echelon form (not reduced) with the pivot columns, via the
    /// fraction-controlled elimination described in the module docs.
    fn echelon(&self) -> Echelon {
        let mut rows: Vec<Vec<Scalar>> =
            (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        if self.field == Field::Q {
            for row in &mut rows {
                normalize_row_q(row);
            }
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = self.select_pivot(&rows, r, c) else { continue };
            rows.swap(r, p);
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                match self.field {
                    Field::Q => {
                        // rows[i] := pivot * rows[i] - a * rows[r], an integer
                        // operation on primitive rows; re-primitivize after.
                        let pivot = rows[r][c].clone();
                        let a = rows[i][c].clone();
                        for j in c..self.cols {
                            rows[i][j] = &(&pivot * &rows[i][j]) - &(&a * &rows[r][j]);
                        }
                        normalize_row_q(&mut rows[i]);
                    }
                    Field::Fp(_) => {
                        let factor = &rows[i][c] * &rows[r][c].inv().expect("pivot nonzero");
                        for j in c..self.cols {
                            rows[i][j] = &rows[i][j] - &(&factor * &rows[r][j]);
                        }
                    }
                }
                debug_assert!(rows[i][c].is_zero());
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(pivots.len());
        Echelon { rows, pivots }
    }

    /// Reduced row echelon form: pivots scaled to 1 and cleared upward.
    fn rref(&self) -> Echelon {
        let mut ech = self.echelon();
        for r in 0..ech.rows.len() {
            let c = ech.pivots[r];
            let inv = ech.rows[r][c].inv().expect("pivot nonzero");
            for j in c..self.cols {
                ech.rows[r][j] = &ech.rows[r][j] * &inv;
            }
        }
        for r in (0..ech.rows.len()).rev() {
            let c = ech.pivots[r];
            for i in 0..r {
                if ech.rows[i][c].is_zero() {
                    continue;
                }
                let factor = ech.rows[i][c].clone();
                for j in c..self.cols {
                    ech.rows[i][j] = &ech.rows[i][j] - &(&factor * &ech.rows[r][j]);
                }
            }
        }
        ech
    }

    /// Pivot choice in column `c` among rows `r..`: smallest bit size over
    /// `Q` (ties to the lowest row index), first nonzero over `Fp`.
    fn select_pivot(&self, rows: &[Vec<Scalar>], r: usize, c: usize) -> Option<usize> {
        match self.field {
            Field::Q => {
                let mut best: Option<(u64, usize)> = None;
                for (i, row) in rows.iter().enumerate().skip(r) {
                    if row[c].is_zero() {
                        continue;
                    }
                    let w = row[c].bit_size();
                    if best.map_or(true, |(bw, _)| w < bw) {
                        best = Some((w, i));
                    }
                }
                best.map(|(_, i)| i)
            }
            Field::Fp(_) => rows.iter().enumerate().skip(r).find(|(_, row)| !row[c].is_zero()).map(|(i, _)| i),
        }
    }
}

struct Echelon {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

/// Scale a rational row to a primitive integer vector: multiply by the lcm of
/// the denominators, divide by the gcd of the numerators.  Zero rows pass
/// through; signs are untouched.
fn normalize_row_q(row: &mut [Scalar]) {
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for s in row.iter() {
        let r = scalar::rational(s);
        if r.is_zero() {
            continue;
        }
        denom_lcm = denom_lcm.lcm(r.denom());
        numer_gcd = numer_gcd.gcd(&r.numer().abs());
    }
    if numer_gcd.is_zero() {
        return;
    }
    let factor = BigRational::new(denom_lcm, numer_gcd);
    if factor.is_one() {
        return;
    }
    for s in row.iter_mut() {
        let r = scalar::rational(s);
        if !r.is_zero() {
            *s = scalar::from_rational(r * &factor);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            Field::Q,
            rows.iter().map(|r| r.iter().map(|&v| Field::Q.from_i64(v)).collect()).collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(qm(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(qm(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(qm(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
        assert_eq!(Matrix::zero(3, 4, Field::Q).rank(), 0);
        assert_eq!(Matrix::zero(0, 5, Field::Q).rank(), 0);
        assert_eq!(Matrix::zero(5, 0, Field::Q).rank(), 0);
    }

    #[test]
    fn hilbert_matrix_has_full_rank() {
        // Classic exact-arithmetic stress test: badly conditioned but
        // invertible, so any rounding would be visible as a rank drop.
        let n = 8;
        let mut m = Matrix::zero(n, n, Field::Q);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, Field::Q.fraction(1, (i + j + 1) as i64).unwrap());
            }
        }
        assert_eq!(m.rank(), n);
    }

    #[test]
    fn kernel_basis_is_canonical_rref_form() {
        let m = qm(&[&[1, 2, 3]]);
        let k = m.kernel_basis();
        let f = Field::Q;
        assert_eq!(
            k,
            vec![
                vec![f.from_i64(-2), f.one(), f.zero()],
                vec![f.from_i64(-3), f.zero(), f.one()],
            ]
        );
        // Row operations do not change the kernel, nor its canonical basis.
        let m2 = qm(&[&[2, 4, 6], &[1, 2, 3], &[3, 6, 9]]);
        assert_eq!(m2.kernel_basis(), k);
    }

    #[test]
    fn kernel_of_empty_matrix_is_standard_basis() {
        let m = Matrix::zero(0, 3, Field::Q);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 3);
        for (j, v) in k.iter().enumerate() {
            for (i, s) in v.iter().enumerate() {
                assert_eq!(s.is_one(), i == j);
            }
        }
    }

    #[test]
    fn rank_nullity_on_fixed_examples() {
        for m in [
            qm(&[&[1, 2, 3], &[4, 5, 6]]),
            qm(&[&[0, 0], &[0, 0], &[1, 1]]),
            qm(&[&[5]]),
        ] {
            assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn solve_canonical_and_inconsistent() {
        let m = qm(&[&[2, 0], &[0, 3]]);
        let rhs = vec![Field::Q.from_i64(4), Field::Q.from_i64(9)];
        assert_eq!(
            m.solve(&rhs).unwrap().unwrap(),
            vec![Field::Q.from_i64(2), Field::Q.from_i64(3)]
        );

        let under = qm(&[&[1, 1]]);
        // Free coordinate pinned to zero keeps the solution canonical.
        assert_eq!(
            under.solve(&[Field::Q.from_i64(5)]).unwrap().unwrap(),
            vec![Field::Q.from_i64(5), Field::Q.zero()]
        );

        let bad = qm(&[&[1], &[1]]);
        let none = bad.solve(&[Field::Q.from_i64(1), Field::Q.from_i64(2)]).unwrap();
        assert!(none.is_none());

        assert!(m.solve(&[Field::Q.one()]).is_err()); // wrong length
    }

    #[test]
    fn solve_many_matches_columnwise_solve() {
        let m = qm(&[&[1, 2], &[3, 4], &[4, 6]]);
        let rhs = qm(&[&[3], &[7], &[10]]);
        let x = m.solve_many(&rhs).unwrap().unwrap();
        assert_eq!(x.column(0), m.solve(&rhs.column(0)).unwrap().unwrap());
        // Verify by multiplying back.
        assert_eq!(m.mul(&x), rhs);
    }

    #[test]
    fn prime_field_rank_matches_rational_rank_on_small_entries() {
        let f = Field::fp(2147483647).unwrap();
        let rows: Vec<Vec<i64>> =
            vec![vec![3, -1, 2, 7], vec![0, 4, 4, 1], vec![3, 3, 6, 9], vec![6, -2, 4, 14]];
        let q = Matrix::from_rows(
            Field::Q,
            rows.iter().map(|r| r.iter().map(|&v| Field::Q.from_i64(v)).collect()).collect(),
            4,
        )
        .unwrap();
        let p = Matrix::from_rows(
            f,
            rows.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect(),
            4,
        )
        .unwrap();
        assert_eq!(q.rank(), 3);
        assert_eq!(p.rank(), 3);
        assert_eq!(q.kernel_basis().len(), p.kernel_basis().len());
    }

    #[test]
    fn mixed_field_construction_is_rejected() {
        let f = Field::fp(2147483647).unwrap();
        let err = Matrix::from_rows(Field::Q, vec![vec![f.one()]], 1);
        assert!(err.is_err());
    }
}
