//! Square and rectangular matrices over `S_n`, row operations, inversion and
//! quasideterminants.
//!
//! Indices are zero-based throughout. For a square `A`, the `(i, j)`
//! quasideterminant is `a_ij - r (A^ij)^-1 c`, where `A^ij` deletes row `i`
//! and column `j`, `r` is row `i` without entry `j` and `c` is column `j`
//! without entry `i`. It is only defined when `A^ij` is invertible; a `1x1`
//! matrix has its single entry as quasideterminant.

use std::fmt;

use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::sring::{RingError, SElem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("index {index} out of range for dimension {dim}")]
    Index { index: usize, dim: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("minor ({i}, {j}) is not invertible")]
    MinorNotInvertible { i: usize, j: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct NcMatrix {
    rows: usize,
    cols: usize,
    order: usize,
    entries: Vec<SElem>,
}

impl NcMatrix {
    pub fn zeros(rows: usize, cols: usize, order: usize) -> Self {
        Self {
            rows,
            cols,
            order,
            entries: vec![SElem::zero(order); rows * cols],
        }
    }

    pub fn identity(m: usize, order: usize) -> Self {
        let mut a = Self::zeros(m, m, order);
        for i in 0..m {
            a.entries[i * m + i] = SElem::one(order);
        }
        a
    }

    /// Builds a matrix from its rows. `order` is used for empty input.
    pub fn from_rows(rows: Vec<Vec<SElem>>, order: usize) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MatrixError::Shape("rows of different lengths".into()));
            }
            for x in row {
                if x.order() != order {
                    return Err(RingError::OrderMismatch(x.order(), order).into());
                }
                entries.push(x);
            }
        }
        Ok(Self {
            rows: r,
            cols: c,
            order,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SElem {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: SElem) -> Result<(), MatrixError> {
        self.check_row(i)?;
        self.check_col(j)?;
        if x.order() != self.order {
            return Err(RingError::OrderMismatch(x.order(), self.order).into());
        }
        self.entries[i * self.cols + j] = x;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[SElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows, self.order) && self.is_square()
    }

    fn check_row(&self, i: usize) -> Result<(), MatrixError> {
        if i >= self.rows {
            return Err(MatrixError::Index { index: i, dim: self.rows });
        }
        Ok(())
    }

    fn check_col(&self, j: usize) -> Result<(), MatrixError> {
        if j >= self.cols {
            return Err(MatrixError::Index { index: j, dim: self.cols });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &NcMatrix) -> Result<NcMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.order != other.order {
            return Err(RingError::OrderMismatch(self.order, other.order).into());
        }
        let mut out = Self::zeros(self.rows, other.cols, self.order);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &NcMatrix) -> Result<NcMatrix, MatrixError> {
        self.zip(other, SElem::checked_add)
    }

    pub fn checked_sub(&self, other: &NcMatrix) -> Result<NcMatrix, MatrixError> {
        self.zip(other, SElem::checked_sub)
    }

    fn zip(
        &self,
        other: &NcMatrix,
        f: impl Fn(&SElem, &SElem) -> Result<SElem, RingError>,
    ) -> Result<NcMatrix, MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::Shape("dimensions differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_, _>>()?;
        Ok(Self { entries, ..*self })
    }

    /// Entrywise degree-zero part, a matrix over `Z[s, s^-1]`.
    pub fn pi0(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.pi0().clone()).collect())
            .collect()
    }

    /// Entrywise projection to a lower order.
    pub fn project(&self, m: usize) -> Result<NcMatrix, MatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.project(m))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            entries,
            order: m,
            ..*self
        })
    }

    /// Deletes row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Result<NcMatrix, MatrixError> {
        self.check_row(i)?;
        self.check_col(j)?;
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != i) {
            for c in (0..self.cols).filter(|&c| c != j) {
                entries.push(self.get(r, c).clone());
            }
        }
        Ok(Self {
            rows: self.rows - 1,
            cols: self.cols - 1,
            order: self.order,
            entries,
        })
    }

    /// Row `target` += `mu` * row `source`, with `mu` multiplied from the left.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, mu: &SElem) -> Result<(), MatrixError> {
        self.check_row(target)?;
        self.check_row(source)?;
        if target == source {
            return Err(MatrixError::Shape("row addition needs two distinct rows".into()));
        }
        if mu.order() != self.order {
            return Err(RingError::OrderMismatch(mu.order(), self.order).into());
        }
        if mu.is_zero() {
            return Ok(());
        }
        for c in 0..self.cols {
            let src = &self.entries[source * self.cols + c];
            if !src.is_zero() {
                let add = mu * src;
                let idx = target * self.cols + c;
                self.entries[idx] = &self.entries[idx] + &add;
            }
        }
        Ok(())
    }

    /// Row `i` is replaced by `u` times row `i`, `u` a unit acting from the
    /// left.
    pub fn scale_row(&mut self, i: usize, u: &SElem) -> Result<(), MatrixError> {
        self.check_row(i)?;
        if u.order() != self.order {
            return Err(RingError::OrderMismatch(u.order(), self.order).into());
        }
        if !u.is_unit() {
            return Err(RingError::NotUnit(u.to_string()).into());
        }
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            self.entries[idx] = u * &self.entries[idx];
        }
        Ok(())
    }

    /// The product `(I + mu E_{target,source}) A`.
    pub fn row_add_left(&self, target: usize, source: usize, mu: &SElem) -> Result<NcMatrix, MatrixError> {
        let mut b = self.clone();
        b.add_row_multiple(target, source, mu)?;
        Ok(b)
    }

    /// The product `X_i(u) A`.
    pub fn row_scale_left(&self, i: usize, u: &SElem) -> Result<NcMatrix, MatrixError> {
        let mut b = self.clone();
        b.scale_row(i, u)?;
        Ok(b)
    }

    pub fn swap_rows(&self, i: usize, j: usize) -> Result<NcMatrix, MatrixError> {
        self.check_row(i)?;
        self.check_row(j)?;
        let mut b = self.clone();
        for c in 0..self.cols {
            b.entries.swap(i * self.cols + c, j * self.cols + c);
        }
        Ok(b)
    }

    pub fn swap_cols(&self, i: usize, j: usize) -> Result<NcMatrix, MatrixError> {
        self.check_col(i)?;
        self.check_col(j)?;
        let mut b = self.clone();
        for r in 0..self.rows {
            b.entries.swap(r * self.cols + i, r * self.cols + j);
        }
        Ok(b)
    }

    /// Two-sided inverse. A matrix over `S_n` is invertible exactly when its
    /// degree-zero part is invertible over `Z[s, s^-1]`.
    pub fn invert(&self) -> Result<NcMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape("only square matrices can be inverted".into()));
        }
        let m = self.rows;
        let base = invert_laurent(&self.pi0()).ok_or(MatrixError::NotInvertible)?;
        let lifted = base
            .into_iter()
            .flatten()
            .map(|p| SElem::from_laurent(p, self.order))
            .collect();
        let mut y = Self {
            rows: m,
            cols: m,
            order: self.order,
            entries: lifted,
        };
        let id = Self::identity(m, self.order);
        // The residual I - AY squares at every step, so its t-adic valuation
        // doubles; order + 1 rounds are more than enough.
        for _ in 0..=self.order {
            let residual = id.checked_sub(&self.checked_mul(&y)?)?;
            if residual.entries.iter().all(SElem::is_zero) {
                break;
            }
            y = y.checked_add(&y.checked_mul(&residual)?)?;
        }
        if !self.checked_mul(&y)?.is_identity() || !y.checked_mul(self)?.is_identity() {
            return Err(MatrixError::NotInvertible);
        }
        Ok(y)
    }

    pub fn quasideterminant(&self, i: usize, j: usize) -> Result<SElem, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape("quasideterminants need a square matrix".into()));
        }
        self.check_row(i)?;
        self.check_col(j)?;
        if self.rows == 1 {
            return Ok(self.get(0, 0).clone());
        }
        let inv = self.minor(i, j)?.invert().map_err(|e| match e {
            MatrixError::NotInvertible => MatrixError::MinorNotInvertible { i, j },
            other => other,
        })?;
        let r = Self::from_rows(
            vec![(0..self.cols).filter(|&c| c != j).map(|c| self.get(i, c).clone()).collect()],
            self.order,
        )?;
        let c = Self::from_rows(
            (0..self.rows)
                .filter(|&r| r != i)
                .map(|r| vec![self.get(r, j).clone()])
                .collect(),
            self.order,
        )?;
        let correction = r.checked_mul(&inv)?.checked_mul(&c)?;
        Ok(self.get(i, j) - correction.get(0, 0))
    }
}

/// Inverse of a square matrix over `Z[s, s^-1]`, if it exists.
///
/// Fraction-free Gauss-Jordan elimination on `[A | I]`: every division by the
/// previous pivot is exact, and the run ends with `[d I | d A^-1]` where
/// `d = ±det A`. The inverse exists iff `d` is a unit `±s^k`.
pub fn invert_laurent(a: &[Vec<LaurentPoly>]) -> Option<Vec<Vec<LaurentPoly>>> {
    let m = a.len();
    let w = 2 * m;
    let mut aug: Vec<Vec<LaurentPoly>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }));
            r
        })
        .collect();
    let mut prev = LaurentPoly::one();
    for k in 0..m {
        let p = (k..m).find(|&r| !aug[r][k].is_zero())?;
        aug.swap(k, p);
        let pivot = aug[k][k].clone();
        for i in (0..m).filter(|&i| i != k) {
            let factor = aug[i][k].clone();
            for j in 0..w {
                let v = &(&pivot * &aug[i][j]) - &(&factor * &aug[k][j]);
                aug[i][j] = v.div_exact(&prev)?;
            }
        }
        prev = pivot;
    }
    let d_inv = prev.inverse().ok()?;
    Some(
        aug.into_iter()
            .enumerate()
            .map(|(i, row)| {
                debug_assert_eq!(row[i], prev);
                row[m..].iter().map(|x| x * &d_inv).collect()
            })
            .collect(),
    )
}

impl fmt::Display for NcMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        let mut widths = vec![0; self.cols];
        for (idx, c) in cells.iter().enumerate() {
            let w = &mut widths[idx % self.cols.max(1)];
            *w = (*w).max(c.chars().count());
        }
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                let cell = &cells[i * self.cols + j];
                let pad = widths[j] - cell.chars().count();
                if j > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{cell}{}", " ".repeat(pad))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NcMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "NcMatrix {}x{} over S_{}", self.rows, self.cols, self.order)?;
        fmt::Display::fmt(self, f)
    }
}
