//! Internal exhaustive search engine over GF(p), on flat `u32` residue
//! vectors for speed. Not exposed outside the decomp module.
//!
//! The search answers: given W ⊂ k^b ⊗ k^c (as a basis of vectorized
//! matrices), is there a set of r rank-one matrices whose span contains W?
//! Equivalently: is there a subspace U ⊇ W with dim U = r that is spanned
//! by its rank-one elements? The search branches only over the r − dim W
//! rank-one extension vectors (in increasing class order, each required to
//! raise the dimension) and closes each candidate U by enumerating its
//! rank-one elements projectively.

use std::collections::HashMap;

fn inv_mod(x: u64, p: u64) -> u64 {
    // Fermat
    let mut base = x % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Row-echelon basis with cheap rollback (new rows are reduced against
/// existing pivots but existing rows are never touched, so undoing an
/// insertion is a truncate).
struct RowBasis {
    p: u64,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl RowBasis {
    fn new(p: u64) -> Self {
        RowBasis { p, rows: Vec::new(), pivots: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        // insertion order is a valid elimination order: row i has zeros at
        // the pivots of all rows inserted before it
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc] as u64;
            if c != 0 {
                let f = self.p - c;
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = ((*x as u64 + f * r as u64) % self.p) as u32;
                }
            }
        }
        v
    }

    fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    fn insert(&mut self, v: &[u32]) -> bool {
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(r[pc] as u64, self.p);
        for x in r.iter_mut() {
            *x = (*x as u64 * inv % self.p) as u32;
        }
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }

    fn truncate(&mut self, n: usize) {
        self.rows.truncate(n);
        self.pivots.truncate(n);
    }
}

/// Projective representatives of GF(p)^n, same pinned order as
/// `exactfield::projective_points`: ascending first-nonzero position, then
/// the tail counted in base p with the coordinate after the lead as the
/// least significant digit.
fn proj_points(p: u64, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = p.pow(free as u32);
        for tail in 0..count {
            let mut v = vec![0u32; n];
            v[lead] = 1;
            let mut t = tail;
            for k in 0..free {
                v[lead + 1 + k] = (t % p) as u32;
                t /= p;
            }
            out.push(v);
        }
    }
    out
}

/// True iff the b x c matrix (flat, row-major) has rank <= 1.
fn is_rank_le_one(mat: &[u32], b: usize, c: usize, p: u64) -> bool {
    let Some(r0) = (0..b).find(|&i| mat[i * c..(i + 1) * c].iter().any(|&x| x != 0))
    else {
        return true;
    };
    let base = &mat[r0 * c..(r0 + 1) * c];
    let lead = base.iter().position(|&x| x != 0).unwrap();
    let inv = inv_mod(base[lead] as u64, p);
    for i in r0 + 1..b {
        let row = &mat[i * c..(i + 1) * c];
        let factor = row[lead] as u64 * inv % p;
        for j in 0..c {
            if row[j] as u64 != factor * base[j] as u64 % p {
                return false;
            }
        }
    }
    true
}

pub(super) struct RankOneClass {
    pub v: Vec<u32>,
    pub w: Vec<u32>,
    mat: Vec<u32>,
}

pub(super) enum Outcome {
    /// Class indices of r rank-one matrices spanning a space containing W.
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
}

pub(super) struct SliceSearch {
    p: u64,
    b: usize,
    c: usize,
    w_rows: Vec<Vec<u32>>,
    classes: Vec<RankOneClass>,
    class_index: HashMap<Vec<u32>, usize>,
}

impl SliceSearch {
    /// `w_rows`: linearly independent vectorized b x c matrices spanning W.
    pub(super) fn new(p: u64, b: usize, c: usize, w_rows: Vec<Vec<u32>>) -> Self {
        let mut classes = Vec::new();
        let mut class_index = HashMap::new();
        for v in proj_points(p, b) {
            for w in proj_points(p, c) {
                let mut mat = vec![0u32; b * c];
                for (i, &vi) in v.iter().enumerate() {
                    for (j, &wj) in w.iter().enumerate() {
                        mat[i * c + j] = (vi as u64 * wj as u64 % p) as u32;
                    }
                }
                class_index.insert(mat.clone(), classes.len());
                classes.push(RankOneClass { v: v.clone(), w, mat });
            }
        }
        SliceSearch { p, b, c, w_rows, classes, class_index }
    }

    pub(super) fn class(&self, idx: usize) -> &RankOneClass {
        &self.classes[idx]
    }

    /// Projective canonical form: scale so the first nonzero entry is 1.
    fn canon(&self, mat: &[u32]) -> Vec<u32> {
        let mut m = mat.to_vec();
        let lead = m.iter().position(|&x| x != 0).expect("nonzero matrix");
        let inv = inv_mod(m[lead] as u64, self.p);
        for x in m.iter_mut() {
            *x = (*x as u64 * inv % self.p) as u32;
        }
        m
    }

    /// Search for r rank-one matrices spanning a superspace of W.
    /// Requires r >= dim W (the flattening bound along this axis).
    pub(super) fn run(&self, r: usize, budget: &mut u64) -> Outcome {
        let a = self.w_rows.len();
        assert!(r >= a);
        let mut ubasis = RowBasis::new(self.p);
        for row in &self.w_rows {
            assert!(ubasis.insert(row), "W basis must be independent");
        }
        self.dfs(r - a, 0, &mut ubasis, budget)
    }

    fn dfs(&self, k: usize, start: usize, ubasis: &mut RowBasis, budget: &mut u64) -> Outcome {
        if k == 0 {
            return self.close(ubasis, budget);
        }
        if start + k > self.classes.len() {
            return Outcome::Exhausted;
        }
        for idx in start..=self.classes.len() - k {
            if *budget == 0 {
                return Outcome::OutOfBudget;
            }
            *budget -= 1;
            let n0 = ubasis.dim();
            if !ubasis.insert(&self.classes[idx].mat) {
                // dependent extension: the same U arises from a smaller set,
                // already covered at a lower target rank
                continue;
            }
            match self.dfs(k - 1, idx + 1, ubasis, budget) {
                Outcome::Exhausted => {}
                other => return other,
            }
            ubasis.truncate(n0);
        }
        Outcome::Exhausted
    }

    /// Enumerate the rank-one elements of U projectively; accept iff their
    /// span contains W. The witness is the lex-greedy independent subset.
    fn close(&self, ubasis: &RowBasis, budget: &mut u64) -> Outcome {
        let r = ubasis.dim();
        let mut span = RowBasis::new(self.p);
        let mut found: Vec<Vec<u32>> = Vec::new();
        for coeff in proj_points(self.p, r) {
            if *budget == 0 {
                return Outcome::OutOfBudget;
            }
            *budget -= 1;
            let mut acc = vec![0u64; self.b * self.c];
            for (row, &ci) in ubasis.rows.iter().zip(&coeff) {
                if ci == 0 {
                    continue;
                }
                for (x, &e) in acc.iter_mut().zip(row) {
                    *x = (*x + ci as u64 * e as u64) % self.p;
                }
            }
            let mat: Vec<u32> = acc.iter().map(|&x| x as u32).collect();
            if !is_rank_le_one(&mat, self.b, self.c, self.p) {
                continue;
            }
            if span.insert(&mat) {
                found.push(mat);
                if span.dim() == r {
                    break;
                }
            }
        }
        if self.w_rows.iter().all(|w| span.contains(w)) {
            let mut idxs: Vec<usize> = found
                .iter()
                .map(|m| self.class_index[&self.canon(m)])
                .collect();
            idxs.sort_unstable();
            // iterative deepening guarantees exactly r spanning rank-ones
            // at the first accepted level
            assert_eq!(idxs.len(), r);
            Outcome::Found(idxs)
        } else {
            Outcome::Exhausted
        }
    }
}
