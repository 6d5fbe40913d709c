//! Rank-one decompositions: representation, verification, Strassen's
//! 7-term table, and the exact rank oracle over prime fields.

mod search;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactfield::{solve_linear, FieldDescriptor, Matrix, Scalar};
use crate::io::{DecompositionFile, EntryValue, FieldSpec, TermFile};
use crate::tensor3::{Axis, MatrixSpace, Tensor3};

/// Default search budget, counted in search-tree nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A simple tensor u (x) v (x) w; all three vectors nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankOneTerm {
    u: Vec<Scalar>,
    v: Vec<Scalar>,
    w: Vec<Scalar>,
}

impl RankOneTerm {
    pub fn new(u: Vec<Scalar>, v: Vec<Scalar>, w: Vec<Scalar>) -> Result<Self> {
        if u.iter().all(Scalar::is_zero)
            || v.iter().all(Scalar::is_zero)
            || w.iter().all(Scalar::is_zero)
        {
            return Err(Error::BadArgument("zero vector in a rank-one term".into()));
        }
        Ok(RankOneTerm { u, v, w })
    }

    pub fn u(&self) -> &[Scalar] {
        &self.u
    }

    pub fn v(&self) -> &[Scalar] {
        &self.v
    }

    pub fn w(&self) -> &[Scalar] {
        &self.w
    }

    pub fn tensor(&self, desc: FieldDescriptor) -> Result<Tensor3> {
        Tensor3::rank_one(desc, &self.u, &self.v, &self.w)
    }

    /// The b x c matrix v (x) w (the term's slice-space contribution).
    pub fn matrix(&self, desc: FieldDescriptor) -> Matrix {
        Matrix::outer(desc, &self.v, &self.w)
    }
}

/// Ordered list of rank-one terms against fixed target dims.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    desc: FieldDescriptor,
    dims: (usize, usize, usize),
    terms: Vec<RankOneTerm>,
}

impl Decomposition {
    pub fn new(
        desc: FieldDescriptor,
        dims: (usize, usize, usize),
        terms: Vec<RankOneTerm>,
    ) -> Result<Self> {
        for t in &terms {
            if t.u.len() != dims.0 || t.v.len() != dims.1 || t.w.len() != dims.2 {
                return Err(Error::DimensionMismatch("term vs target dims".into()));
            }
            for s in t.u.iter().chain(&t.v).chain(&t.w) {
                if s.descriptor() != desc {
                    return Err(Error::FieldMismatch(
                        desc.to_string(),
                        s.descriptor().to_string(),
                    ));
                }
            }
        }
        Ok(Decomposition { desc, dims, terms })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn terms(&self) -> &[RankOneTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficient-weighted terms as a dense tensor; linear in the
    /// coefficients.
    pub fn evaluate(&self, coefficients: &[Scalar]) -> Result<Tensor3> {
        if coefficients.len() != self.terms.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} terms",
                coefficients.len(),
                self.terms.len()
            )));
        }
        let mut acc = Tensor3::zeros(self.desc, self.dims);
        for (t, c) in self.terms.iter().zip(coefficients) {
            acc = acc.add(&t.tensor(self.desc)?.scale(c))?;
        }
        Ok(acc)
    }

    /// Coefficients with evaluate(self, c) = p, or None. One exact linear
    /// solve in the vectorized tensor space.
    pub fn certifies(&self, p: &Tensor3) -> Result<Option<Vec<Scalar>>> {
        if p.dims() != self.dims {
            return Err(Error::DimensionMismatch("certifies".into()));
        }
        if p.descriptor() != self.desc {
            return Err(Error::FieldMismatch(
                self.desc.to_string(),
                p.descriptor().to_string(),
            ));
        }
        if self.terms.is_empty() {
            return Ok(if p.is_zero() { Some(Vec::new()) } else { None });
        }
        // columns = vectorized terms
        let n = self.dims.0 * self.dims.1 * self.dims.2;
        let mut a = Matrix::zeros(self.desc, n, self.terms.len());
        for (j, t) in self.terms.iter().enumerate() {
            for (i, e) in t.tensor(self.desc)?.entries().iter().enumerate() {
                a.set(i, j, e.clone());
            }
        }
        let b = Matrix::from_entries(self.desc, n, 1, p.entries().to_vec())?;
        Ok(solve_linear(&a, &b)?.map(|x| x.col(0)))
    }

    /// Concatenation with block embedding: terms of `self` land in the
    /// leading coordinates, terms of `other` in the trailing ones.
    pub fn direct_sum(&self, other: &Decomposition) -> Result<Decomposition> {
        if self.desc != other.desc {
            return Err(Error::FieldMismatch(
                self.desc.to_string(),
                other.desc.to_string(),
            ));
        }
        let dims = (
            self.dims.0 + other.dims.0,
            self.dims.1 + other.dims.1,
            self.dims.2 + other.dims.2,
        );
        let zero = Scalar::zero(self.desc);
        let pad = |v: &[Scalar], before: usize, after: usize| {
            let mut out = vec![zero.clone(); before];
            out.extend(v.iter().cloned());
            out.extend(std::iter::repeat(zero.clone()).take(after));
            out
        };
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.push(RankOneTerm::new(
                pad(&t.u, 0, other.dims.0),
                pad(&t.v, 0, other.dims.1),
                pad(&t.w, 0, other.dims.2),
            )?);
        }
        for t in &other.terms {
            terms.push(RankOneTerm::new(
                pad(&t.u, self.dims.0, 0),
                pad(&t.v, self.dims.1, 0),
                pad(&t.w, self.dims.2, 0),
            )?);
        }
        Decomposition::new(self.desc, dims, terms)
    }

    pub fn to_file(&self) -> DecompositionFile {
        DecompositionFile {
            field: FieldSpec::of(self.desc),
            dims: [self.dims.0, self.dims.1, self.dims.2],
            terms: self
                .terms
                .iter()
                .map(|t| TermFile {
                    u: t.u.iter().map(EntryValue::of).collect(),
                    v: t.v.iter().map(EntryValue::of).collect(),
                    w: t.w.iter().map(EntryValue::of).collect(),
                })
                .collect(),
        }
    }

    pub fn from_file(f: &DecompositionFile) -> Result<Decomposition> {
        let desc = f.field.descriptor()?;
        let conv = |vs: &[EntryValue]| -> Result<Vec<Scalar>> {
            vs.iter().map(|e| e.to_scalar(desc)).collect()
        };
        let mut terms = Vec::new();
        for t in &f.terms {
            terms.push(RankOneTerm::new(conv(&t.u)?, conv(&t.v)?, conv(&t.w)?)?);
        }
        Decomposition::new(desc, (f.dims[0], f.dims[1], f.dims[2]), terms)
    }
}

/// Strassen's seven-term decomposition of the 2x2 matrix multiplication
/// tensor. Coefficients are all +-1, so the table is valid over any field.
///
/// Basis order within each factor is row-major: (a11, a12, a21, a22), etc.
pub fn strassen_222(desc: FieldDescriptor) -> Decomposition {
    // (u, v, w) rows: I..VII
    const TABLE: [([i64; 4], [i64; 4], [i64; 4]); 7] = [
        // (a11+a22)(b11+b22) -> c11, c22
        ([1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1]),
        // (a21+a22) b11 -> c21 - c22
        ([0, 0, 1, 1], [1, 0, 0, 0], [0, 0, 1, -1]),
        // a11 (b12-b22) -> c12 + c22
        ([1, 0, 0, 0], [0, 1, 0, -1], [0, 1, 0, 1]),
        // a22 (b21-b11) -> c11 + c21
        ([0, 0, 0, 1], [-1, 0, 1, 0], [1, 0, 1, 0]),
        // (a11+a12) b22 -> c12 - c11
        ([1, 1, 0, 0], [0, 0, 0, 1], [-1, 1, 0, 0]),
        // (a21-a11)(b11+b12) -> c22
        ([-1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 0, 1]),
        // (a12-a22)(b21+b22) -> c11
        ([0, 1, 0, -1], [0, 0, 1, 1], [1, 0, 0, 0]),
    ];
    let vec = |row: &[i64; 4]| row.iter().map(|&n| Scalar::from_int(desc, n)).collect();
    let terms = TABLE
        .iter()
        .map(|(u, v, w)| RankOneTerm::new(vec(u), vec(v), vec(w)).unwrap())
        .collect();
    Decomposition::new(desc, (4, 4, 4), terms).unwrap()
}

/// Outcome of the exact rank search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RankResult {
    /// Minimal rank with a certifying witness; no shorter decomposition
    /// exists (iterative deepening).
    Exact { rank: usize, witness: Decomposition },
    /// Every length up to the cap was exhausted without a witness.
    LowerBoundOnly { bound: usize },
    /// The node budget ran out; all lengths below `lower_bound` were
    /// exhausted.
    BudgetExceeded { lower_bound: usize },
}

impl RankResult {
    pub fn exact_rank(&self) -> Option<usize> {
        match self {
            RankResult::Exact { rank, .. } => Some(*rank),
            _ => None,
        }
    }

    pub fn lower_bound(&self) -> usize {
        match self {
            RankResult::Exact { rank, .. } => *rank,
            RankResult::LowerBoundOnly { bound } => *bound,
            RankResult::BudgetExceeded { lower_bound } => *lower_bound,
        }
    }
}

fn residue_rows(t: &Tensor3) -> Vec<Vec<u32>> {
    // vectorized A-slices of a front-permuted tensor
    let (n, r, c) = t.dims();
    (0..n)
        .map(|i| {
            (0..r)
                .flat_map(|j| (0..c).map(move |k| (j, k)))
                .map(|(j, k)| t.get(i, j, k).residue().unwrap())
                .collect()
        })
        .collect()
}

/// Exact tensor rank over a prime field by exhaustive search with
/// iterative deepening from the flattening bound.
///
/// Deterministic: conciseness reduction first, then the search runs on the
/// slice space of the largest axis. The budget is counted in search-tree
/// nodes; exhausting it returns the best proven lower bound.
pub fn rank_oracle(p: &Tensor3, max_rank: usize, budget: u64) -> Result<RankResult> {
    let desc = p.descriptor();
    let Some(q_mod) = desc.modulus() else {
        return Err(Error::UnsupportedField);
    };
    if p.is_zero() {
        return Ok(RankResult::Exact {
            rank: 0,
            witness: Decomposition::new(desc, p.dims(), Vec::new())?,
        });
    }
    let (q, recs) = p.concise_reduce();
    let qd = q.dims();
    // size guard on the concise core: direct sums of small factors stay
    // searchable even when the raw ambient is larger
    if qd.0 * qd.1 * qd.2 > 216 {
        return Err(Error::TooLarge(format!(
            "rank oracle: concise core {}x{}x{} exceeds 216 entries",
            qd.0, qd.1, qd.2
        )));
    }
    // front axis = the largest (slice space dim is maximal, matrix ambient
    // and the number of extension levels are minimal)
    let axis = if qd.0 >= qd.1 && qd.0 >= qd.2 {
        Axis::A
    } else if qd.1 >= qd.2 {
        Axis::B
    } else {
        Axis::C
    };
    let front = q.bring_to_front(axis);
    let (_, fb, fc) = front.dims();
    let engine = search::SliceSearch::new(q_mod as u64, fb, fc, residue_rows(&front));
    let r0 = qd.0.max(qd.1).max(qd.2);
    let mut budget = budget;
    for r in r0..=max_rank {
        match engine.run(r, &mut budget) {
            search::Outcome::Found(idxs) => {
                let witness = lift_witness(p, axis, &front, &engine, &idxs, &recs)?;
                return Ok(RankResult::Exact { rank: r, witness });
            }
            search::Outcome::Exhausted => {}
            search::Outcome::OutOfBudget => {
                return Ok(RankResult::BudgetExceeded { lower_bound: r });
            }
        }
    }
    Ok(RankResult::LowerBoundOnly {
        bound: r0.max(max_rank + 1),
    })
}

/// Rank of a matrix space W (minimal number of rank-one matrices spanning a
/// superspace of W), via the tensor whose A-slices are a basis of W.
pub fn rank_oracle_space(space: &MatrixSpace, max_rank: usize, budget: u64) -> Result<RankResult> {
    let desc = space.descriptor();
    let (r, c) = space.ambient();
    if space.dim() == 0 {
        return Ok(RankResult::Exact {
            rank: 0,
            witness: Decomposition::new(desc, (0, r, c), Vec::new())?,
        });
    }
    let mut t = Tensor3::zeros(desc, (space.dim(), r, c));
    for (i, m) in space.basis().iter().enumerate() {
        for j in 0..r {
            for k in 0..c {
                t.set(i, j, k, m.get(j, k).clone());
            }
        }
    }
    rank_oracle(&t, max_rank, budget)
}

fn lift_witness(
    p: &Tensor3,
    axis: Axis,
    front: &Tensor3,
    engine: &search::SliceSearch,
    idxs: &[usize],
    recs: &[Matrix; 3],
) -> Result<Decomposition> {
    let desc = p.descriptor();
    let (n, fb, fc) = front.dims();
    let r = idxs.len();
    let to_scalars = |v: &[u32]| -> Vec<Scalar> {
        v.iter()
            .map(|&x| Scalar::from_residue(desc, x as u64).unwrap())
            .collect()
    };
    // coefficients: solve [vec(M_1) ... vec(M_r)] X = [vec(slice_1) ... ]
    let mut mat = Matrix::zeros(desc, fb * fc, r);
    for (j, &idx) in idxs.iter().enumerate() {
        let cls = engine.class(idx);
        let v = to_scalars(&cls.v);
        let w = to_scalars(&cls.w);
        let outer = Matrix::outer(desc, &v, &w);
        for (i, e) in outer.entries().iter().enumerate() {
            mat.set(i, j, e.clone());
        }
    }
    let mut rhs = Matrix::zeros(desc, fb * fc, n);
    for t in 0..n {
        for j in 0..fb {
            for k in 0..fc {
                rhs.set(j * fc + k, t, front.get(t, j, k).clone());
            }
        }
    }
    let x = solve_linear(&mat, &rhs)?
        .expect("accepted span must contain every slice");
    // terms in front coordinates, then permuted back to q's axes, then
    // lifted through the conciseness records
    let lift = |rec: &Matrix, v: &[Scalar]| -> Vec<Scalar> {
        let col = Matrix::from_rows(desc, v.iter().map(|s| vec![s.clone()]).collect()).unwrap();
        rec.matmul(&col).unwrap().col(0)
    };
    let mut terms = Vec::with_capacity(r);
    for (i, &idx) in idxs.iter().enumerate() {
        let cls = engine.class(idx);
        let u = x.row(i);
        let v = to_scalars(&cls.v);
        let w = to_scalars(&cls.w);
        let (qu, qv, qw) = match axis {
            Axis::A => (u, v, w),
            Axis::B => (v, u, w),
            Axis::C => (v, w, u),
        };
        terms.push(RankOneTerm::new(
            lift(&recs[0], &qu),
            lift(&recs[1], &qv),
            lift(&recs[2], &qw),
        )?);
    }
    let witness = Decomposition::new(desc, p.dims(), terms)?;
    let ones = vec![Scalar::one(desc); r];
    if witness.evaluate(&ones)? != *p {
        return Err(Error::DoesNotCertify);
    }
    Ok(witness)
}

/// Exact rank histogram over every tensor of the given shape.
pub fn max_rank_census(
    dims: (usize, usize, usize),
    desc: FieldDescriptor,
) -> Result<BTreeMap<usize, usize>> {
    let Some(p) = desc.modulus() else {
        return Err(Error::UnsupportedField);
    };
    let cells = dims.0 * dims.1 * dims.2;
    let total = (p as f64).powi(cells as i32);
    if total > (1u64 << 20) as f64 {
        return Err(Error::TooLarge(format!(
            "census of {total} tensors exceeds 2^20"
        )));
    }
    let total = total as u64;
    let mut hist = BTreeMap::new();
    let mut digits = vec![0u32; cells];
    for counter in 0..total {
        let mut t = counter;
        for d in digits.iter_mut() {
            *d = (t % p as u64) as u32;
            t /= p as u64;
        }
        let entries: Vec<Scalar> = digits
            .iter()
            .map(|&x| Scalar::from_residue(desc, x as u64).unwrap())
            .collect();
        let tensor = Tensor3::from_entries(desc, dims, entries)?;
        match rank_oracle(&tensor, cells, DEFAULT_BUDGET)? {
            RankResult::Exact { rank, .. } => *hist.entry(rank).or_insert(0) += 1,
            _ => {
                return Err(Error::TooLarge(
                    "census instance exceeded the rank cap or budget".into(),
                ))
            }
        }
    }
    Ok(hist)
}
