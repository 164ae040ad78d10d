//! Dense matrices over a cyclotomic field, with exact Gaussian elimination.

use super::cyclotomic::Cyclotomic;
use super::rational::Rational;
use super::ExactError;

/// A rows x cols matrix whose entries all live in one Q(zeta_order).
#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    order: u32,
    entries: Vec<Cyclotomic>,
}

impl CycMatrix {
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Result<CycMatrix, ExactError> {
        let r = rows.len();
        if r == 0 {
            return Err(ExactError::Shape("empty matrix".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::Shape("ragged rows".into()));
        }
        let mut order = 1u32;
        for row in &rows {
            for e in row {
                order = num_integer::lcm(order, e.order());
            }
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            for e in row {
                entries.push(e.embed(order)?);
            }
        }
        Ok(CycMatrix {
            rows: r,
            cols: c,
            order,
            entries,
        })
    }

    pub fn identity(n: usize, order: u32) -> CycMatrix {
        let mut m = CycMatrix::zeros(n, n, order);
        for i in 0..n {
            *m.at_mut(i, i) = Cyclotomic::one(order);
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize, order: u32) -> CycMatrix {
        CycMatrix {
            rows,
            cols,
            order,
            entries: vec![Cyclotomic::zero(order); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Cyclotomic {
        &mut self.entries[i * self.cols + j]
    }

    /// Re-embed every entry in Q(zeta_want).
    pub fn embed(&self, want: u32) -> Result<CycMatrix, ExactError> {
        if want == self.order {
            return Ok(self.clone());
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed(want))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: want,
            entries,
        })
    }

    fn promote(&self, other: &CycMatrix) -> Result<(CycMatrix, CycMatrix), ExactError> {
        let order = num_integer::lcm(self.order, other.order);
        Ok((self.embed(order)?, other.embed(order)?))
    }

    pub fn mul(&self, other: &CycMatrix) -> Result<CycMatrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.promote(other)?;
        let mut out = CycMatrix::zeros(a.rows, b.cols, a.order);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let aik = a.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bkj = b.at(k, j);
                    if bkj.is_zero() {
                        continue;
                    }
                    let prod = aik.mul(bkj);
                    let cur = out.at(i, j).add(&prod);
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &CycMatrix) -> Result<CycMatrix, ExactError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ExactError::Shape("add shape mismatch".into()));
        }
        let (a, b) = self.promote(other)?;
        let entries = a
            .entries
            .iter()
            .zip(b.entries.iter())
            .map(|(x, y)| x.add(y))
            .collect();
        Ok(CycMatrix {
            rows: a.rows,
            cols: a.cols,
            order: a.order,
            entries,
        })
    }

    pub fn sub(&self, other: &CycMatrix) -> Result<CycMatrix, ExactError> {
        self.add(&other.scale_cyc(&Cyclotomic::from_int(-1)))
    }

    pub fn scale_cyc(&self, s: &Cyclotomic) -> CycMatrix {
        let order = num_integer::lcm(self.order, s.order());
        let entries = self.entries.iter().map(|e| e.mul(s)).collect::<Vec<_>>();
        let entries = entries
            .into_iter()
            .map(|e| e.embed(order).expect("lcm embedding"))
            .collect();
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            entries,
        }
    }

    pub fn scale(&self, r: &Rational) -> CycMatrix {
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries: self.entries.iter().map(|e| e.scale(r)).collect(),
        }
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut out = CycMatrix::zeros(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    /// Power by repeated squaring; requires a square matrix.
    pub fn pow(&self, mut exp: u64) -> Result<CycMatrix, ExactError> {
        if !self.is_square() {
            return Err(ExactError::Shape("pow of non-square matrix".into()));
        }
        let mut acc = CycMatrix::identity(self.rows, self.order);
        let mut sq = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<Cyclotomic, ExactError> {
        if !self.is_square() {
            return Err(ExactError::Shape("trace of non-square matrix".into()));
        }
        let mut t = Cyclotomic::zero(self.order);
        for i in 0..self.rows {
            t = t.add(self.at(i, i));
        }
        Ok(t)
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let one = Cyclotomic::one(self.order);
        let zero = Cyclotomic::zero(self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { &one } else { &zero };
                if self.at(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Gauss-Jordan inverse; errors on a singular matrix.
    pub fn inverse(&self) -> Result<CycMatrix, ExactError> {
        if !self.is_square() {
            return Err(ExactError::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CycMatrix::identity(n, self.order);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a.at(r, col).is_zero())
                .ok_or(ExactError::SingularMatrix)?;
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let pivot_inv = a.at(col, col).inv()?;
            a.scale_row(col, &pivot_inv);
            inv.scale_row(col, &pivot_inv);
            for r in 0..n {
                if r != col && !a.at(r, col).is_zero() {
                    let factor = a.at(r, col).clone();
                    a.row_sub_scaled(r, col, &factor);
                    inv.row_sub_scaled(r, col, &factor);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        for j in 0..self.cols {
            self.entries.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Cyclotomic) {
        for j in 0..self.cols {
            let v = self.at(r, j).mul(s);
            *self.at_mut(r, j) = v.embed(self.order).expect("same order");
        }
    }

    fn row_sub_scaled(&mut self, dst: usize, src: usize, s: &Cyclotomic) {
        for j in 0..self.cols {
            let delta = self.at(src, j).mul(s);
            let v = self.at(dst, j).sub(&delta);
            *self.at_mut(dst, j) = v.embed(self.order).expect("same order");
        }
    }

    /// Row rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0usize;
        let mut col = 0usize;
        while rank < a.rows && col < a.cols {
            let pivot_row = (rank..a.rows).find(|&r| !a.at(r, col).is_zero());
            let pivot_row = match pivot_row {
                Some(r) => r,
                None => {
                    col += 1;
                    continue;
                }
            };
            a.swap_rows(pivot_row, rank);
            let pivot_inv = a.at(rank, col).inv().expect("nonzero pivot");
            a.scale_row(rank, &pivot_inv);
            for r in rank + 1..a.rows {
                if !a.at(r, col).is_zero() {
                    let factor = a.at(r, col).clone();
                    a.row_sub_scaled(r, rank, &factor);
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Dimension of the right null space.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Stack `self` on top of `other` (equal column counts).
    pub fn vstack(&self, other: &CycMatrix) -> Result<CycMatrix, ExactError> {
        if self.cols != other.cols {
            return Err(ExactError::Shape("vstack column mismatch".into()));
        }
        let (a, b) = self.promote(other)?;
        let mut entries = a.entries;
        entries.extend(b.entries);
        Ok(CycMatrix {
            rows: a.rows + b.rows,
            cols: a.cols,
            order: a.order,
            entries,
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &CycMatrix) -> CycMatrix {
        let order = num_integer::lcm(self.order, other.order);
        let a = self.embed(order).expect("lcm embedding");
        let b = other.embed(order).expect("lcm embedding");
        let mut out = CycMatrix::zeros(a.rows + b.rows, a.cols + b.cols, order);
        for i in 0..a.rows {
            for j in 0..a.cols {
                *out.at_mut(i, j) = a.at(i, j).clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                *out.at_mut(a.rows + i, a.cols + j) = b.at(i, j).clone();
            }
        }
        out
    }

    /// Flattened coefficient key, used for hashing group elements during
    /// image-closure enumeration. Entries must already share this matrix's
    /// order, which `from_rows` guarantees.
    pub fn flat_key(&self) -> Vec<Rational> {
        let mut key = Vec::new();
        for e in &self.entries {
            key.extend(e.coeffs().iter().cloned());
        }
        key
    }
}

impl std::fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CycMatrix {}x{} (order {})", self.rows, self.cols, self.order)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn int_matrix(rows: &[&[i64]]) -> CycMatrix {
        CycMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Cyclotomic::from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn trace_of_identity() {
        let m = CycMatrix::identity(2, 1);
        assert_eq!(m.trace().unwrap().as_rational(), Some(rat_int(2)));
    }

    #[test]
    fn s_matrix_has_order_four() {
        let s = int_matrix(&[&[0, -1], &[1, 0]]);
        assert!(s.pow(4).unwrap().is_identity());
        assert!(!s.pow(2).unwrap().is_identity());
    }

    #[test]
    fn r_matrix_has_order_six() {
        // R = S*T with S = (0 -1; 1 0), T = (1 1; 0 1).
        let s = int_matrix(&[&[0, -1], &[1, 0]]);
        let t = int_matrix(&[&[1, 1], &[0, 1]]);
        let r = s.mul(&t).unwrap();
        assert!(r.pow(6).unwrap().is_identity());
        assert!(!r.pow(3).unwrap().is_identity());
    }

    #[test]
    fn kernel_dims() {
        assert_eq!(CycMatrix::zeros(3, 3, 1).kernel_dim(), 3);
        assert_eq!(CycMatrix::identity(3, 1).kernel_dim(), 0);
        assert_eq!(int_matrix(&[&[1, 1], &[1, 1]]).kernel_dim(), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let m = int_matrix(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let singular = int_matrix(&[&[1, 2], &[2, 4]]);
        assert!(matches!(singular.inverse(), Err(ExactError::SingularMatrix)));
    }

    #[test]
    fn inverse_over_cyclotomic_entries() {
        let z = Cyclotomic::root_of_unity(12, 1);
        let m = CycMatrix::from_rows(vec![
            vec![z.clone(), Cyclotomic::one(12)],
            vec![Cyclotomic::zero(12), z.pow(5).unwrap()],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn rank_plus_kernel_is_cols() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank() + m.kernel_dim(), 3);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn vstack_kernel() {
        let a = int_matrix(&[&[1, -1]]);
        let b = int_matrix(&[&[2, -2]]);
        assert_eq!(a.vstack(&b).unwrap().kernel_dim(), 1);
    }

    #[test]
    fn mixed_order_product_promotes() {
        let i = Cyclotomic::root_of_unity(4, 1);
        let z3 = Cyclotomic::root_of_unity(3, 1);
        let a = CycMatrix::from_rows(vec![vec![i]]).unwrap();
        let b = CycMatrix::from_rows(vec![vec![z3]]).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.order(), 12);
        assert_eq!(*prod.at(0, 0), Cyclotomic::root_of_unity(12, 7));
    }

    #[test]
    fn scale_by_rational() {
        let m = int_matrix(&[&[2, 0], &[0, 2]]).scale(&rat(1, 2));
        assert!(m.is_identity());
    }
}
