//! Subspace utilities on vectors represented as `Vec<Scalar>`.

use crate::error::{Error, Result};

use super::{FieldDescriptor, Matrix, Scalar};

fn stack(desc: FieldDescriptor, vecs: &[Vec<Scalar>]) -> Result<Matrix> {
    Matrix::from_rows(desc, vecs.to_vec())
}

/// Canonical basis (RREF rows) of the span of the given vectors.
pub fn row_basis(desc: FieldDescriptor, vecs: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    if vecs.is_empty() {
        return Ok(Vec::new());
    }
    let (r, pivots) = stack(desc, vecs)?.rref();
    Ok((0..pivots.len()).map(|i| r.row(i)).collect())
}

pub fn span_dim(desc: FieldDescriptor, vecs: &[Vec<Scalar>]) -> Result<usize> {
    Ok(row_basis(desc, vecs)?.len())
}

/// Membership test: is v in the span of the given vectors?
pub fn in_span(desc: FieldDescriptor, vecs: &[Vec<Scalar>], v: &[Scalar]) -> Result<bool> {
    if v.iter().all(Scalar::is_zero) {
        return Ok(true);
    }
    if vecs.is_empty() {
        return Ok(false);
    }
    let a = stack(desc, vecs)?.transpose();
    let b = Matrix::from_rows(desc, v.iter().map(|s| vec![s.clone()]).collect())?;
    Ok(super::solve_linear(&a, &b)?.is_some())
}

/// Basis of the intersection of two spans (Zassenhaus).
pub fn subspace_intersect(
    desc: FieldDescriptor,
    span1: &[Vec<Scalar>],
    span2: &[Vec<Scalar>],
) -> Result<Vec<Vec<Scalar>>> {
    let n = span1
        .first()
        .or_else(|| span2.first())
        .map_or(0, |v| v.len());
    for v in span1.iter().chain(span2.iter()) {
        if v.len() != n {
            return Err(Error::DimensionMismatch("subspace_intersect".into()));
        }
    }
    if span1.is_empty() || span2.is_empty() {
        return Ok(Vec::new());
    }
    // rows [u | u] for u in span1, [w | 0] for w in span2; after RREF the
    // rows whose left half vanished have right halves spanning the intersection
    let zero = Scalar::zero(desc);
    let mut rows = Vec::new();
    for u in span1 {
        let mut row = u.clone();
        row.extend(u.iter().cloned());
        rows.push(row);
    }
    for w in span2 {
        let mut row = w.clone();
        row.extend(std::iter::repeat(zero.clone()).take(n));
        rows.push(row);
    }
    let (r, pivots) = stack(desc, &rows)?.rref();
    let mut basis = Vec::new();
    for (i, &pc) in pivots.iter().enumerate() {
        if pc >= n {
            basis.push(r.row(i)[n..].to_vec());
        }
    }
    Ok(basis)
}

/// Linear map onto coordinates of the quotient by a subspace.
///
/// The map reduces a vector against the RREF basis of the subspace and keeps
/// the non-pivot coordinates; its kernel is exactly the subspace.
pub struct QuotientMap {
    desc: FieldDescriptor,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    nonpivots: Vec<usize>,
}

impl QuotientMap {
    pub fn new(desc: FieldDescriptor, sub: &[Vec<Scalar>], ambient: usize) -> Result<Self> {
        let basis = row_basis(desc, sub)?;
        let pivots: Vec<usize> = basis
            .iter()
            .map(|row| row.iter().position(|s| !s.is_zero()).unwrap())
            .collect();
        let nonpivots: Vec<usize> =
            (0..ambient).filter(|j| !pivots.contains(j)).collect();
        Ok(QuotientMap { desc, basis, pivots, nonpivots })
    }

    pub fn codim(&self) -> usize {
        self.nonpivots.len()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc].clone();
            if !c.is_zero() {
                for (j, rj) in row.iter().enumerate() {
                    w[j] = &w[j] - &(&c * rj);
                }
            }
        }
        self.nonpivots.iter().map(|&j| w[j].clone()).collect()
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }
}

/// Iterator over representatives of projective classes of GF(p)^n, one per
/// class, normalized so the first nonzero coordinate is 1.
///
/// Order: ascending position of the first nonzero coordinate, then the free
/// tail counted lexicographically in base p.
pub fn projective_points(desc: FieldDescriptor, n: usize) -> Result<ProjectivePoints> {
    let Some(p) = desc.modulus() else {
        return Err(Error::UnsupportedField);
    };
    Ok(ProjectivePoints { desc, p: p as u64, n, lead: 0, tail: 0, done: n == 0 })
}

pub struct ProjectivePoints {
    desc: FieldDescriptor,
    p: u64,
    n: usize,
    lead: usize,
    tail: u64,
    done: bool,
}

impl Iterator for ProjectivePoints {
    type Item = Vec<Scalar>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let free = self.n - self.lead - 1;
        let mut v = vec![Scalar::zero(self.desc); self.n];
        v[self.lead] = Scalar::one(self.desc);
        let mut t = self.tail;
        for k in 0..free {
            let digit = t % self.p;
            t /= self.p;
            v[self.lead + 1 + k] = Scalar::from_residue(self.desc, digit).unwrap();
        }
        self.tail += 1;
        if self.tail == self.p.pow(free as u32) {
            self.tail = 0;
            self.lead += 1;
            if self.lead == self.n {
                self.done = true;
            }
        }
        Some(v)
    }
}
