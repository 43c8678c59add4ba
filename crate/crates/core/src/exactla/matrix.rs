use std::fmt;

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

pub type RatVector = Vec<Rational>;

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_columns(columns: Vec<Vec<Rational>>) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|col| col.len() != r) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let data = (0..r).flat_map(|i| columns.iter().map(move |col| col[i].clone())).collect();
        Self::new(r, c, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Rational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rational::one();
        }
        RatMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                data.push(acc);
            }
        }
        RatMatrix::new(self.rows, rhs.cols, data)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Exact inverse by Gauss–Jordan elimination, pivoting on the first nonzero entry.
    pub fn inverse(&self) -> Result<RatMatrix> {
        self.require_square()?;
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
            aug.swap(col, pivot);
            eliminate(&mut aug, col, col);
        }
        let data = aug.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        RatMatrix::new(n, n, data)
    }

    /// Exact solution of `self · x = b` for square, nonsingular `self`.
    pub fn solve(&self, b: &[Rational]) -> Result<RatVector> {
        self.require_square()?;
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let n = self.rows;
        let mut aug = self.augmented(b);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
            aug.swap(col, pivot);
            eliminate(&mut aug, col, col);
        }
        Ok(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
    }

    /// Some exact solution of `self · x = b` for an arbitrary shape, with every
    /// free variable set to zero. `None` when the system is inconsistent.
    pub fn solve_particular(&self, b: &[Rational]) -> Result<Option<RatVector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = self.augmented(b);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !aug[r][col].is_zero()) else {
                continue;
            };
            aug.swap(row, p);
            eliminate(&mut aug, row, col);
            pivots.push(col);
            row += 1;
        }
        if aug[row..].iter().any(|r| !r[self.cols].is_zero()) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[r][self.cols].clone();
        }
        Ok(Some(x))
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<Rational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            if let Some(p) = (rank..self.rows).find(|&r| !rows[r][col].is_zero()) {
                rows.swap(rank, p);
                eliminate(&mut rows, rank, col);
                rank += 1;
            }
        }
        rank
    }

    fn augmented(&self, b: &[Rational]) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i].clone());
                row
            })
            .collect()
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", self.rows, self.cols)));
        }
        Ok(())
    }
}

/// Scales row `pr` so that column `col` holds one and clears that column elsewhere.
fn eliminate(rows: &mut [Vec<Rational>], pr: usize, col: usize) {
    let inv = rows[pr][col].recip();
    for x in rows[pr].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = rows[pr].clone();
    for (r, row) in rows.iter_mut().enumerate() {
        if r == pr || row[col].is_zero() {
            continue;
        }
        let factor = row[col].clone();
        for (x, p) in row.iter_mut().zip(&pivot_row) {
            *x -= &factor * p;
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(","))?;
        }
        Ok(())
    }
}
