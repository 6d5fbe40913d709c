//! Rank lower bounds: the flattening bound and the substitution method
//! (peel a rank-one slice, rank drops by exactly one).

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactfield::{projective_points, FieldDescriptor, Matrix, Scalar};
use crate::tensor3::{Axis, Tensor3};

/// One substitution step: p = chosen_a (x) slice + embed(residual), where
/// the embedding identifies the residual's axis with a basis of ker(alpha).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeelCertificate {
    pub axis: Axis,
    pub alpha: Vec<Scalar>,
    pub chosen_a: Vec<Scalar>,
    pub slice: Matrix,
    pub residual: Tensor3,
    /// True iff the peeled slice has matrix rank 1. Then the residual has
    /// rank at least R(p) - 1 for every valid chosen_a, and exactly
    /// R(p) - 1 for a minimizing choice; peeling can never overshoot.
    pub exact: bool,
}

impl PeelCertificate {
    /// Rebuild the original tensor from the certificate (bit-exact).
    pub fn reconstruct(&self) -> Result<Tensor3> {
        let desc = self.slice.descriptor();
        let n = self.alpha.len();
        let piv = pivot_index(&self.alpha).expect("alpha is nonzero");
        let apiv_inv = self.alpha[piv].inv().unwrap();
        // residual slice i (skipping piv) sits on basis vector
        // f_i = e_i - (alpha_i / alpha_piv) e_piv
        let front_res = self.residual.bring_to_front(self.axis);
        let (rn, rr, rc) = front_res.dims();
        assert_eq!(rn + 1, n);
        let mut front = Tensor3::zeros(desc, (n, rr, rc));
        let mut res_idx = 0;
        for i in 0..n {
            if i == piv {
                continue;
            }
            let coef = -&(&self.alpha[i] * &apiv_inv);
            for j in 0..rr {
                for k in 0..rc {
                    let v = front_res.get(res_idx, j, k);
                    front.set(i, j, k, v.clone());
                    let acc = front.get(piv, j, k) + &(&coef * v);
                    front.set(piv, j, k, acc);
                }
            }
            res_idx += 1;
        }
        // add chosen_a (x) slice
        for i in 0..n {
            if self.chosen_a[i].is_zero() {
                continue;
            }
            for j in 0..rr {
                for k in 0..rc {
                    let acc =
                        front.get(i, j, k) + &(&self.chosen_a[i] * self.slice.get(j, k));
                    front.set(i, j, k, acc);
                }
            }
        }
        Ok(front.send_from_front(self.axis))
    }
}

fn pivot_index(alpha: &[Scalar]) -> Option<usize> {
    alpha.iter().position(|s| !s.is_zero())
}

/// A functional alpha with matrix_rank(p(alpha)) = 1, or None.
///
/// Prime fields: full projective enumeration of the dual space, so None is
/// exhaustive. Rationals: coordinate functionals, plus coordinate-pair
/// pencils alpha = e_i + t e_j with t solving the 2x2-minor equations when
/// one of the other two dims is <= 2; None is inconclusive.
pub fn find_rank_one_slice(
    p: &Tensor3,
    axis: Axis,
) -> Result<Option<(Vec<Scalar>, Matrix)>> {
    let desc = p.descriptor();
    let n = p.dim(axis);
    if desc.is_prime_field() {
        for alpha in projective_points(desc, n)? {
            let slice = p.contract(axis, &alpha)?;
            if slice.rank() == 1 {
                return Ok(Some((alpha, slice)));
            }
        }
        return Ok(None);
    }
    // rationals: coordinate functionals first
    let unit = |i: usize| {
        let mut v = vec![Scalar::zero(desc); n];
        v[i] = Scalar::one(desc);
        v
    };
    for i in 0..n {
        let slice = p.slice(axis, i);
        if slice.rank() == 1 {
            return Ok(Some((unit(i), slice)));
        }
    }
    // pencils only when the 2x2 minors are quadratics we can solve, i.e.
    // one matrix dimension is at most 2
    let front = p.bring_to_front(axis);
    let (_, r, c) = front.dims();
    if r.min(c) > 2 {
        return Ok(None);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let si = p.slice(axis, i);
            let sj = p.slice(axis, j);
            for t in pencil_candidates(&si, &sj) {
                let mut alpha = unit(i);
                alpha[j] = t;
                let slice = p.contract(axis, &alpha)?;
                if slice.rank() == 1 {
                    return Ok(Some((alpha, slice)));
                }
            }
        }
    }
    Ok(None)
}

/// Rational t-candidates for rank(S_i + t S_j) <= 1: roots of the first
/// nonvanishing 2x2-minor polynomial (candidates only; callers re-test).
fn pencil_candidates(si: &Matrix, sj: &Matrix) -> Vec<Scalar> {
    let (r, c) = (si.rows(), si.cols());
    for r0 in 0..r {
        for r1 in r0 + 1..r {
            for c0 in 0..c {
                for c1 in c0 + 1..c {
                    // det of the 2x2 submatrix of S_i + t S_j:
                    // quadratic q2 t^2 + q1 t + q0
                    let a = [si.get(r0, c0), si.get(r0, c1), si.get(r1, c0), si.get(r1, c1)];
                    let b = [sj.get(r0, c0), sj.get(r0, c1), sj.get(r1, c0), sj.get(r1, c1)];
                    let q0 = &(a[0] * a[3]) - &(a[1] * a[2]);
                    let q2 = &(b[0] * b[3]) - &(b[1] * b[2]);
                    let q1 = &(&(a[0] * b[3]) + &(b[0] * a[3]))
                        - &(&(a[1] * b[2]) + &(b[1] * a[2]));
                    if q0.is_zero() && q1.is_zero() && q2.is_zero() {
                        continue;
                    }
                    return rational_roots(&q2, &q1, &q0);
                }
            }
        }
    }
    Vec::new()
}

/// Rational roots of q2 t^2 + q1 t + q0 with rational coefficients.
fn rational_roots(q2: &Scalar, q1: &Scalar, q0: &Scalar) -> Vec<Scalar> {
    let two = Scalar::from_int(FieldDescriptor::rationals(), 2);
    if q2.is_zero() {
        if q1.is_zero() {
            return Vec::new();
        }
        return vec![-&(q0 * &q1.inv().unwrap())];
    }
    // discriminant q1^2 - 4 q0 q2; rational square root or nothing
    let four = &two * &two;
    let disc = &(q1 * q1) - &(&four * &(q0 * q2));
    let d = disc.rational().unwrap();
    if d.is_negative() {
        return Vec::new();
    }
    let sq = |x: &BigInt| -> Option<BigInt> {
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    };
    let (Some(ns), Some(ds)) = (sq(d.numer()), sq(d.denom())) else {
        return Vec::new();
    };
    let root = Scalar::from_ratio(ns, ds).unwrap();
    let denom_inv = (&two * q2).inv().unwrap();
    let r1 = &(&-q1 + &root) * &denom_inv;
    let r2 = &(&-q1 - &root) * &denom_inv;
    if r1 == r2 {
        vec![r1]
    } else {
        vec![r1, r2]
    }
}

/// Substitute away the slice p(alpha): residual = p - chosen_a (x) p(alpha),
/// expressed in the basis of ker(alpha) that drops alpha's pivot coordinate.
/// Some chosen_a always achieves R(residual) <= R(p) - 1; when the slice has
/// rank 1 every chosen_a also satisfies R(residual) >= R(p) - 1, so the
/// minimum over the affine hyperplane (alpha = 1) is exactly R(p) - 1.
pub fn peel(
    p: &Tensor3,
    axis: Axis,
    alpha: &[Scalar],
    chosen_a: &[Scalar],
) -> Result<PeelCertificate> {
    let desc = p.descriptor();
    let n = p.dim(axis);
    if alpha.len() != n || chosen_a.len() != n {
        return Err(Error::DimensionMismatch("peel functional".into()));
    }
    let pairing = alpha
        .iter()
        .zip(chosen_a)
        .fold(Scalar::zero(desc), |acc, (x, y)| &acc + &(x * y));
    if !pairing.is_one() {
        return Err(Error::BadArgument("alpha(chosen_a) must be 1".into()));
    }
    let slice = p.contract(axis, alpha)?;
    if slice.is_zero() {
        return Err(Error::BadArgument("p(alpha) is zero".into()));
    }
    let piv = pivot_index(alpha).unwrap();
    // q = p - chosen_a (x) slice, then drop the pivot slice of q
    let front = p.bring_to_front(axis);
    let (_, r, c) = front.dims();
    let mut res_front = Tensor3::zeros(desc, (n - 1, r, c));
    let mut out = 0;
    for i in 0..n {
        if i == piv {
            continue;
        }
        for j in 0..r {
            for k in 0..c {
                let v = front.get(i, j, k) - &(&chosen_a[i] * slice.get(j, k));
                res_front.set(out, j, k, v);
            }
        }
        out += 1;
    }
    let exact = slice.rank() == 1;
    Ok(PeelCertificate {
        axis,
        alpha: alpha.to_vec(),
        chosen_a: chosen_a.to_vec(),
        slice,
        residual: res_front.send_from_front(axis),
        exact,
    })
}

/// The canonical hyperplane representative: e_piv / alpha_piv.
pub fn canonical_a(desc: FieldDescriptor, alpha: &[Scalar]) -> Vec<Scalar> {
    let piv = pivot_index(alpha).expect("alpha must be nonzero");
    let mut a = vec![Scalar::zero(desc); alpha.len()];
    a[piv] = alpha[piv].inv().unwrap();
    a
}

/// All vectors of the affine hyperplane (alpha = 1) over a prime field:
/// free coordinates range over GF(p), the pivot coordinate is solved for.
pub fn affine_hyperplane(desc: FieldDescriptor, alpha: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = alpha.len();
    let piv = pivot_index(alpha).expect("alpha must be nonzero");
    let apiv_inv = alpha[piv].inv().unwrap();
    let p = desc.modulus().expect("prime field") as u64;
    let free: Vec<usize> = (0..n).filter(|&i| i != piv).collect();
    let count = p.pow(free.len() as u32);
    let mut out = Vec::with_capacity(count as usize);
    for code in 0..count {
        let mut a = vec![Scalar::zero(desc); n];
        let mut t = code;
        for &i in &free {
            a[i] = Scalar::from_residue(desc, t % p).unwrap();
            t /= p;
        }
        // alpha(a) = 1  =>  a_piv = (1 - sum_{i != piv} alpha_i a_i)/alpha_piv
        let partial = free
            .iter()
            .fold(Scalar::zero(desc), |acc, &i| &acc + &(&alpha[i] * &a[i]));
        a[piv] = &(&Scalar::one(desc) - &partial) * &apiv_inv;
        out.push(a);
    }
    out
}

/// Substitution bound: peel rank-one slices (axis order A, B, C, first
/// functional found wins) until none remains, then add the best flattening
/// rank of the residual. At each peel the bound minimizes over every
/// chosen_a in (alpha = 1): some a achieves the exact drop and no a
/// overshoots, so the result is a sound lower bound, result <= R(p).
pub fn substitution_lower_bound(p: &Tensor3) -> Result<(usize, Vec<PeelCertificate>)> {
    substitution_lower_bound_on(p, &Axis::ALL)
}

/// Substitution bound restricted to peeling along the given axes (still a
/// sound lower bound: any rank-one slice peels).
pub fn substitution_lower_bound_on(
    p: &Tensor3,
    axes: &[Axis],
) -> Result<(usize, Vec<PeelCertificate>)> {
    if !p.descriptor().is_prime_field() {
        return Err(Error::UnsupportedField);
    }
    substitution_recurse(p, axes)
}

fn substitution_recurse(p: &Tensor3, axes: &[Axis]) -> Result<(usize, Vec<PeelCertificate>)> {
    let desc = p.descriptor();
    for &axis in axes {
        if let Some((alpha, _)) = find_rank_one_slice(p, axis)? {
            let mut best: Option<(usize, Vec<PeelCertificate>)> = None;
            for a in affine_hyperplane(desc, &alpha) {
                let cert = peel(p, axis, &alpha, &a)?;
                let (sub, mut trace) = substitution_recurse(&cert.residual, axes)?;
                if best.as_ref().is_none_or(|(b, _)| sub < *b) {
                    trace.insert(0, cert);
                    best = Some((sub, trace));
                }
            }
            let (sub, trace) = best.unwrap();
            return Ok((1 + sub, trace));
        }
    }
    let (ra, rb, rc) = p.flattening_ranks();
    Ok((ra.max(rb).max(rc), Vec::new()))
}
