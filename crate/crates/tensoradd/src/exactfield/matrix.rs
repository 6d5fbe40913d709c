use std::fmt;

use crate::error::{Error, Result};

use super::{FieldDescriptor, Scalar};

/// Dense matrix with entries in a single exact field, row-major storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    desc: FieldDescriptor,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(desc: FieldDescriptor, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            desc,
            entries: vec![Scalar::zero(desc); rows * cols],
        }
    }

    pub fn identity(desc: FieldDescriptor, n: usize) -> Self {
        let mut m = Self::zeros(desc, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(desc));
        }
        m
    }

    pub fn from_entries(
        desc: FieldDescriptor,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.descriptor() != desc) {
            return Err(Error::FieldMismatch(desc.to_string(), "entry".into()));
        }
        Ok(Matrix { rows, cols, desc, entries })
    }

    pub fn from_rows(desc: FieldDescriptor, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_entries(desc, r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.descriptor(), self.desc);
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.desc, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.desc != other.desc {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        let mut m = Matrix::zeros(self.desc, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.desc != other.desc {
            return Err(Error::DimensionMismatch("matmul".into()));
        }
        let mut m = Matrix::zeros(self.desc, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero(self.desc);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    /// Outer product of two vectors, as a rank <= 1 matrix.
    pub fn outer(desc: FieldDescriptor, v: &[Scalar], w: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(desc, v.len(), w.len());
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m.set(i, j, vi * wj);
            }
        }
        m
    }

    fn pivot_row(&self, col: usize, start: usize) -> Option<usize> {
        match self.desc {
            // first nonzero entry from the top
            FieldDescriptor::Prime(_) => {
                (start..self.rows).find(|&i| !self.get(i, col).is_zero())
            }
            // largest absolute numerator, ties broken by lowest index
            FieldDescriptor::Rationals => {
                let mut best: Option<(usize, num_bigint::BigInt)> = None;
                for i in start..self.rows {
                    if self.get(i, col).is_zero() {
                        continue;
                    }
                    let key = self.get(i, col).numer_abs().unwrap();
                    match &best {
                        Some((_, k)) if *k >= key => {}
                        _ => best = Some((i, key)),
                    }
                }
                best.map(|(i, _)| i)
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, s: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(i, j) * s;
            self.set(i, j, v);
        }
    }

    // row[dst] -= s * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) - &(self.get(src, j) * s);
            self.set(dst, j, v);
        }
    }

    /// Reduced row echelon form. Returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = self.pivot_row(col, r) else { continue };
            self.swap_rows(r, pr);
            let inv = self.get(r, col).inv().unwrap();
            self.scale_row(r, &inv);
            for i in 0..self.rows {
                if i != r {
                    let s = self.get(i, col).clone();
                    self.axpy_row(i, r, &s);
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Solves a*x = b when consistent; `None` when inconsistent.
/// Free variables are set to zero, so the result is deterministic.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: {} vs {} rows",
            a.rows(),
            b.rows()
        )));
    }
    if a.descriptor() != b.descriptor() {
        return Err(Error::FieldMismatch(
            a.descriptor().to_string(),
            b.descriptor().to_string(),
        ));
    }
    let aug = a.hstack(b)?;
    let (r, pivots) = aug.rref();
    // any pivot in the b-part means inconsistency
    if pivots.iter().any(|&c| c >= a.cols()) {
        return Ok(None);
    }
    let mut x = Matrix::zeros(a.descriptor(), a.cols(), b.cols());
    for (row, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, r.get(row, a.cols() + j).clone());
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::Lcg;

    fn gf(p: u32) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(Matrix::identity(gf(2), 2).rank(), 2);
        assert_eq!(Matrix::zeros(gf(5), 3, 3).rank(), 0);
    }

    // determinant-minor oracle: rank = size of the largest nonvanishing minor
    fn minor_rank(m: &Matrix) -> usize {
        fn det(m: &Matrix, rows: &[usize], cols: &[usize]) -> Scalar {
            let n = rows.len();
            if n == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = Scalar::zero(m.descriptor());
            for (k, &c) in cols.iter().enumerate() {
                let sub_cols: Vec<usize> =
                    cols.iter().copied().filter(|&x| x != c).collect();
                let term = &(m.get(rows[0], c).clone()) * &det(m, &rows[1..], &sub_cols);
                if k % 2 == 0 {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
            }
            acc
        }
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut v = vec![first];
                        v.append(&mut rest);
                        out.push(v);
                    }
                }
            }
            out
        }
        for size in (1..=m.rows().min(m.cols())).rev() {
            for rows in combos(m.rows(), size) {
                for cols in combos(m.cols(), size) {
                    if !det(m, &rows, &cols).is_zero() {
                        return size;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn hook_pattern_rank_matches_minor_oracle() {
        // 4x4 (1,2)-hook support filled with generic GF(5) entries
        let desc = gf(5);
        let mut rng = Lcg::new(7);
        for _ in 0..20 {
            let mut m = Matrix::zeros(desc, 4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    if i == 0 || j < 2 {
                        let v =
                            Scalar::from_residue(desc, rng.next_below(5)).unwrap();
                        m.set(i, j, v);
                    }
                }
            }
            assert_eq!(m.rank(), minor_rank(&m));
        }
    }

    #[test]
    fn rank_transpose_invariant() {
        let mut rng = Lcg::new(3);
        for &p in &[2u32, 3, 5] {
            let desc = gf(p);
            for _ in 0..50 {
                let mut m = Matrix::zeros(desc, 3, 4);
                for i in 0..3 {
                    for j in 0..4 {
                        m.set(
                            i,
                            j,
                            Scalar::from_residue(desc, rng.next_below(p as u64)).unwrap(),
                        );
                    }
                }
                assert_eq!(m.rank(), m.transpose().rank());
            }
        }
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let desc = FieldDescriptor::rationals();
        let a = Matrix::identity(desc, 3);
        let b = Matrix::from_rows(
            desc,
            vec![
                vec![Scalar::from_int(desc, 5)],
                vec![Scalar::from_int(desc, -2)],
                vec![Scalar::from_int(desc, 7)],
            ],
        )
        .unwrap();
        assert_eq!(solve_linear(&a, &b).unwrap().unwrap(), b);

        // zero row in a, nonzero in b
        let a2 = Matrix::zeros(desc, 2, 2);
        let b2 = Matrix::from_rows(
            desc,
            vec![vec![Scalar::from_int(desc, 1)], vec![Scalar::zero(desc)]],
        )
        .unwrap();
        assert!(solve_linear(&a2, &b2).unwrap().is_none());
    }

    #[test]
    fn solve_random_full_rank_gf3() {
        let desc = gf(3);
        let mut rng = Lcg::new(11);
        let mut found = 0;
        while found < 10 {
            let mut a = Matrix::zeros(desc, 4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    a.set(i, j, Scalar::from_residue(desc, rng.next_below(3)).unwrap());
                }
            }
            if a.rank() < 4 {
                continue;
            }
            found += 1;
            let mut b = Matrix::zeros(desc, 4, 1);
            for i in 0..4 {
                b.set(i, 0, Scalar::from_residue(desc, rng.next_below(3)).unwrap());
            }
            let x = solve_linear(&a, &b).unwrap().unwrap();
            assert_eq!(a.matmul(&x).unwrap(), b);
        }
    }
}
