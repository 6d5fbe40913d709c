//! Direct-sum machinery: block splits, stick-out profiles, the seven-type
//! classification of rank-one terms, repletion and digestion, hook-slice
//! peeling, the inequality audit, and the additivity report.

use serde_json::{json, Value};

use crate::bounds::{canonical_a, peel, PeelCertificate};
use crate::decomp::{rank_oracle, Decomposition, RankResult};
use crate::error::{Error, Result};
use crate::exactfield::{
    in_span, row_basis, span_dim, subspace_intersect, FieldDescriptor, Matrix, QuotientMap,
    Scalar,
};
use crate::io::TensorFile;
use crate::tensor3::{find_hook_shape, Axis, HookShape, MatrixSpace, Tensor3};

/// Coordinate block boundary of a direct sum: the primed summand occupies
/// the leading b' x c' (and a', when tracked) coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BlockSplit {
    pub a: Option<(usize, usize)>,
    pub b: (usize, usize),
    pub c: (usize, usize),
}

impl BlockSplit {
    pub fn new(b: (usize, usize), c: (usize, usize)) -> Self {
        BlockSplit { a: None, b, c }
    }

    pub fn with_a(a: (usize, usize), b: (usize, usize), c: (usize, usize)) -> Self {
        BlockSplit { a: Some(a), b, c }
    }

    pub fn of_tensors(p1: &Tensor3, p2: &Tensor3) -> Self {
        let (a1, b1, c1) = p1.dims();
        let (a2, b2, c2) = p2.dims();
        BlockSplit::with_a((a1, a2), (b1, b2), (c1, c2))
    }

    pub fn b_total(&self) -> usize {
        self.b.0 + self.b.1
    }

    pub fn c_total(&self) -> usize {
        self.c.0 + self.c.1
    }
}

fn split_at(v: &[Scalar], at: usize) -> (Vec<Scalar>, Vec<Scalar>) {
    (v[..at].to_vec(), v[at..].to_vec())
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// The minimal subspaces E', E'', F', F'' measuring how far a decomposition
/// of a direct sum sticks out of the block-diagonal structure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StickOutProfile {
    e_prime: Vec<Vec<Scalar>>,
    e_bis: Vec<Vec<Scalar>>,
    f_prime: Vec<Vec<Scalar>>,
    f_bis: Vec<Vec<Scalar>>,
}

impl StickOutProfile {
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (
            self.e_prime.len(),
            self.e_bis.len(),
            self.f_prime.len(),
            self.f_bis.len(),
        )
    }

    pub fn e_prime(&self) -> &[Vec<Scalar>] {
        &self.e_prime
    }

    pub fn e_bis(&self) -> &[Vec<Scalar>] {
        &self.e_bis
    }

    pub fn f_prime(&self) -> &[Vec<Scalar>] {
        &self.f_prime
    }

    pub fn f_bis(&self) -> &[Vec<Scalar>] {
        &self.f_bis
    }
}

/// E' = span of the B'-parts of b-vectors of terms whose c-vector has a
/// nonzero C''-part; E'', F', F'' analogous (swap blocks / factors).
/// Minimality holds by construction: exactly the contributing components.
pub fn stickout_profile(d: &Decomposition, split: &BlockSplit) -> Result<StickOutProfile> {
    let desc = d.descriptor();
    let (_, db, dc) = d.dims();
    if db != split.b_total() || dc != split.c_total() {
        return Err(Error::DimensionMismatch("split vs decomposition dims".into()));
    }
    let mut ep = Vec::new();
    let mut eb = Vec::new();
    let mut fp = Vec::new();
    let mut fb = Vec::new();
    for t in d.terms() {
        let (vp, vb) = split_at(t.v(), split.b.0);
        let (wp, wb) = split_at(t.w(), split.c.0);
        if !is_zero_vec(&wb) {
            ep.push(vp.clone());
        }
        if !is_zero_vec(&wp) {
            eb.push(vb.clone());
        }
        if !is_zero_vec(&vb) {
            fp.push(wp.clone());
        }
        if !is_zero_vec(&vp) {
            fb.push(wb.clone());
        }
    }
    Ok(StickOutProfile {
        e_prime: row_basis(desc, &ep)?,
        e_bis: row_basis(desc, &eb)?,
        f_prime: row_basis(desc, &fp)?,
        f_bis: row_basis(desc, &fb)?,
    })
}

/// The seven types of rank-one terms in a decomposition of a direct sum.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TermLabel {
    Prime,
    Bis,
    Hl,
    Hr,
    Vl,
    Vr,
    Mix,
}

impl std::fmt::Display for TermLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TermLabel::Prime => "Prime",
            TermLabel::Bis => "Bis",
            TermLabel::Hl => "HL",
            TermLabel::Hr => "HR",
            TermLabel::Vl => "VL",
            TermLabel::Vr => "VR",
            TermLabel::Mix => "Mix",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct TypeCounts {
    pub prim: usize,
    pub bis: usize,
    pub hl: usize,
    pub hr: usize,
    pub vl: usize,
    pub vr: usize,
    pub mix: usize,
}

impl TypeCounts {
    pub fn total(&self) -> usize {
        self.prim + self.bis + self.hl + self.hr + self.vl + self.vr + self.mix
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassifiedDecomposition {
    pub decomposition: Decomposition,
    pub split: BlockSplit,
    pub profile: StickOutProfile,
    pub labels: Vec<TermLabel>,
    pub counts: TypeCounts,
}

/// Label every term with the highest-priority type it satisfies
/// (Prime > Bis > HL > HR > VL > VR > Mix). A term satisfying none is a
/// data error: for minimal decompositions of direct sums every term is
/// classifiable.
pub fn classify(d: &Decomposition, split: &BlockSplit) -> Result<ClassifiedDecomposition> {
    let desc = d.descriptor();
    let profile = stickout_profile(d, split)?;
    let mut labels = Vec::with_capacity(d.len());
    let mut counts = TypeCounts::default();
    for (idx, t) in d.terms().iter().enumerate() {
        let (vp, vb) = split_at(t.v(), split.b.0);
        let (wp, wb) = split_at(t.w(), split.c.0);
        let vp0 = is_zero_vec(&vp);
        let vb0 = is_zero_vec(&vb);
        let wp0 = is_zero_vec(&wp);
        let wb0 = is_zero_vec(&wb);
        let in_ep = in_span(desc, profile.e_prime(), &vp)?;
        let in_eb = in_span(desc, profile.e_bis(), &vb)?;
        let in_fp = in_span(desc, profile.f_prime(), &wp)?;
        let in_fb = in_span(desc, profile.f_bis(), &wb)?;
        let label = if vb0 && wb0 {
            TermLabel::Prime
        } else if vp0 && wp0 {
            TermLabel::Bis
        } else if vb0 && in_ep && in_fb {
            // HL: E' (x) (C' + F'')
            TermLabel::Hl
        } else if vp0 && in_eb && in_fp {
            // HR: E'' (x) (F' + C'')
            TermLabel::Hr
        } else if wb0 && in_fp && in_eb {
            // VL: (B' + E'') (x) F'
            TermLabel::Vl
        } else if wp0 && in_fb && in_ep {
            // VR: (E' + B'') (x) F''
            TermLabel::Vr
        } else if in_ep && in_eb && in_fp && in_fb {
            TermLabel::Mix
        } else {
            return Err(Error::Unclassifiable(idx));
        };
        match label {
            TermLabel::Prime => counts.prim += 1,
            TermLabel::Bis => counts.bis += 1,
            TermLabel::Hl => counts.hl += 1,
            TermLabel::Hr => counts.hr += 1,
            TermLabel::Vl => counts.vl += 1,
            TermLabel::Vr => counts.vr += 1,
            TermLabel::Mix => counts.mix += 1,
        }
        labels.push(label);
    }
    Ok(ClassifiedDecomposition {
        decomposition: d.clone(),
        split: *split,
        profile,
        labels,
        counts,
    })
}

/// The block matrix of a Prime (primed block) or Bis (doubled block) term.
fn block_matrix(cd: &ClassifiedDecomposition, idx: usize) -> Result<Matrix> {
    let desc = cd.decomposition.descriptor();
    let t = &cd.decomposition.terms()[idx];
    let (vp, vb) = split_at(t.v(), cd.split.b.0);
    let (wp, wb) = split_at(t.w(), cd.split.c.0);
    match cd.labels[idx] {
        TermLabel::Prime => Ok(Matrix::outer(desc, &vp, &wp)),
        TermLabel::Bis => Ok(Matrix::outer(desc, &vb, &wb)),
        other => Err(Error::NotPrimeOrBis(idx, other.to_string())),
    }
}

/// Repletion: enlarge W' by a Prime term (or W'' by a Bis term). The rank
/// of the pair is unchanged and the dimension grows by at most one.
pub fn replete(
    wp: &MatrixSpace,
    wb: &MatrixSpace,
    cd: &ClassifiedDecomposition,
    idx: usize,
) -> Result<(MatrixSpace, MatrixSpace)> {
    let desc = cd.decomposition.descriptor();
    let m = block_matrix(cd, idx)?;
    let enlarge = |space: &MatrixSpace, m: &Matrix| -> Result<MatrixSpace> {
        let mut mats: Vec<Matrix> = space.basis().to_vec();
        mats.push(m.clone());
        MatrixSpace::from_span(desc, space.ambient(), &mats)
    };
    match cd.labels[idx] {
        TermLabel::Prime => Ok((enlarge(wp, &m)?, wb.clone())),
        TermLabel::Bis => Ok((wp.clone(), enlarge(wb, &m)?)),
        _ => unreachable!("block_matrix already rejected other labels"),
    }
}

fn embed_block(m: &Matrix, boff: usize, coff: usize, b: usize, c: usize) -> Matrix {
    let mut out = Matrix::zeros(m.descriptor(), b, c);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(boff + i, coff + j, m.get(i, j).clone());
        }
    }
    out
}

fn restrict_block(
    v: &[Scalar],
    boff: usize,
    coff: usize,
    rows: usize,
    cols: usize,
    b: usize,
    c: usize,
    desc: FieldDescriptor,
) -> Result<Matrix> {
    // the vector is a vectorized b x c matrix supported on the given block
    let mut out = Matrix::zeros(desc, rows, cols);
    for i in 0..b {
        for j in 0..c {
            let s = &v[i * c + j];
            let inside =
                i >= boff && i < boff + rows && j >= coff && j < coff + cols;
            if inside {
                out.set(i - boff, j - coff, s.clone());
            } else if !s.is_zero() {
                return Err(Error::DimensionMismatch(
                    "intersection leaves the block".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Digestion: S' = <terms except idx> intersected with W' (Prime case; Bis
/// symmetric), together with the reduced decomposition. On replete pairs
/// the rank of the pair drops by exactly one and dim S' = dim W' - 1.
pub fn digest(
    wp: &MatrixSpace,
    wb: &MatrixSpace,
    cd: &ClassifiedDecomposition,
    idx: usize,
    require_replete: bool,
) -> Result<(MatrixSpace, MatrixSpace, Decomposition)> {
    let desc = cd.decomposition.descriptor();
    let m = block_matrix(cd, idx)?;
    let prime = cd.labels[idx] == TermLabel::Prime;
    let target = if prime { wp } else { wb };
    if require_replete && !target.contains(&m)? {
        return Err(Error::NotReplete(idx));
    }
    let b = cd.split.b_total();
    let c = cd.split.c_total();
    let (boff, coff) = if prime {
        (0, 0)
    } else {
        (cd.split.b.0, cd.split.c.0)
    };
    let others: Vec<Vec<Scalar>> = cd
        .decomposition
        .terms()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, t)| Matrix::outer(desc, t.v(), t.w()).entries().to_vec())
        .collect();
    let embedded: Vec<Vec<Scalar>> = target
        .basis()
        .iter()
        .map(|mat| embed_block(mat, boff, coff, b, c).entries().to_vec())
        .collect();
    let inter = subspace_intersect(desc, &others, &embedded)?;
    let (rows, cols) = target.ambient();
    let s_mats: Result<Vec<Matrix>> = inter
        .iter()
        .map(|v| restrict_block(v, boff, coff, rows, cols, b, c, desc))
        .collect();
    let s = MatrixSpace::from_span(desc, (rows, cols), &s_mats?)?;
    let reduced_terms = cd
        .decomposition
        .terms()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, t)| t.clone())
        .collect();
    let reduced = Decomposition::new(desc, cd.decomposition.dims(), reduced_terms)?;
    if prime {
        Ok((s, wb.clone(), reduced))
    } else {
        Ok((wp.clone(), s, reduced))
    }
}

/// Result of peeling a rank-one hook slice from the primed block of a
/// direct sum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HookPeel {
    pub reduced: Tensor3,
    pub split: BlockSplit,
    pub hook: HookShape,
    pub certificate: PeelCertificate,
}

/// Peel the C-slice selected by a functional gamma on C' that annihilates
/// the hook column space. The direct-sum block support is preserved, the
/// reduced primed block loses one C'-coordinate, and the hook certificate
/// survives in the new coordinates.
pub fn peel_hook_slice(
    p: &Tensor3,
    split: &BlockSplit,
    gamma_prime: &[Scalar],
    hook: &HookShape,
) -> Result<HookPeel> {
    let desc = p.descriptor();
    if gamma_prime.len() != split.c.0 || p.dim(Axis::C) != split.c_total() {
        return Err(Error::DimensionMismatch("gamma vs split".into()));
    }
    for h in hook.col_subspace() {
        let pairing = gamma_prime
            .iter()
            .zip(h)
            .fold(Scalar::zero(desc), |acc, (x, y)| &acc + &(x * y));
        if !pairing.is_zero() {
            return Err(Error::GammaDoesNotAnnihilateHook);
        }
    }
    let mut gamma = gamma_prime.to_vec();
    gamma.extend(std::iter::repeat(Scalar::zero(desc)).take(split.c.1));
    let slice = p.contract(Axis::C, &gamma)?;
    let rank = slice.rank();
    if rank != 1 {
        return Err(Error::SliceRankNotOne(rank));
    }
    let a = canonical_a(desc, &gamma);
    let certificate = peel(p, Axis::C, &gamma, &a)?;
    let piv = gamma.iter().position(|s| !s.is_zero()).unwrap();
    // the pivot sits inside C', so the dropped coordinate is a primed one
    let new_split = BlockSplit {
        a: split.a,
        b: split.b,
        c: (split.c.0 - 1, split.c.1),
    };
    // gamma annihilates the hook columns, so in the ker(gamma) basis their
    // coordinates are simply the old ones with the pivot dropped
    let new_cols: Vec<Vec<Scalar>> = hook
        .col_subspace()
        .iter()
        .map(|h| {
            h.iter()
                .enumerate()
                .filter(|(i, _)| *i != piv)
                .map(|(_, s)| s.clone())
                .collect()
        })
        .collect();
    let new_hook = HookShape::new(hook.row_subspace().to_vec(), new_cols);
    Ok(HookPeel {
        reduced: certificate.residual.clone(),
        split: new_split,
        hook: new_hook,
        certificate,
    })
}

/// One audited inequality with both sides evaluated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AuditItem {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    /// True when the stated relation (as written in `name`) holds.
    pub pass: bool,
}

fn leq(name: &str, lhs: i64, rhs: i64) -> AuditItem {
    AuditItem { name: name.to_string(), lhs, rhs, pass: lhs <= rhs }
}

fn geq(name: &str, lhs: i64, rhs: i64) -> AuditItem {
    AuditItem { name: name.to_string(), lhs, rhs, pass: lhs >= rhs }
}

/// Evaluate every inequality the classification must satisfy for exact
/// ranks: the four projection bounds, the two covering bounds, and (when
/// the defect is positive) the three mix bounds.
pub fn audit_inequalities(
    cd: &ClassifiedDecomposition,
    dim_wp: usize,
    dim_wb: usize,
    r_prime: usize,
    r_bis: usize,
    r_sum: usize,
) -> Vec<AuditItem> {
    let (ep, eb, fp, fb) = cd.profile.dims();
    let c = &cd.counts;
    let (rp, rb, rs) = (r_prime as i64, r_bis as i64, r_sum as i64);
    let (ep, eb, fp, fb) = (ep as i64, eb as i64, fp as i64, fb as i64);
    let (dwp, dwb) = (dim_wp as i64, dim_wb as i64);
    let mut items = vec![
        leq("R(W') + e'' <= R(W) - dim W''", rp + eb, rs - dwb),
        leq("R(W'') + e' <= R(W) - dim W'", rb + ep, rs - dwp),
        leq("R(W') + f'' <= R(W) - dim W''", rp + fb, rs - dwb),
        leq("R(W'') + f' <= R(W) - dim W'", rb + fp, rs - dwp),
        geq(
            "prim + hl + vl + min(mix, e'f') >= R(W')",
            (c.prim + c.hl + c.vl) as i64 + (c.mix as i64).min(ep * fp),
            rp,
        ),
        geq(
            "bis + hr + vr + min(mix, e''f'') >= R(W'')",
            (c.bis + c.hr + c.vr) as i64 + (c.mix as i64).min(eb * fb),
            rb,
        ),
    ];
    let d = rp + rb - rs;
    if d > 0 {
        items.push(geq("mix >= d", c.mix as i64, d));
        items.push(geq(
            "hl + hr + mix >= e' + e'' + d",
            (c.hl + c.hr + c.mix) as i64,
            ep + eb + d,
        ));
        items.push(geq(
            "vl + vr + mix >= f' + f'' + d",
            (c.vl + c.vr + c.mix) as i64,
            fp + fb + d,
        ));
    }
    items
}

/// Full additivity report for a pair of tensors over the same field.
#[derive(Clone, Debug)]
pub struct AdditivityReport {
    pub r_prime: RankResult,
    pub r_bis: RankResult,
    pub r_sum: RankResult,
    /// r_prime + r_bis - r_sum when all three ranks are exact.
    pub defect: Option<i64>,
    pub split: BlockSplit,
    pub classified: Option<ClassifiedDecomposition>,
    pub classification_error: Option<String>,
    pub audit: Vec<AuditItem>,
    /// Serialized counterexample data when the defect is nonzero.
    pub dossier: Option<Value>,
}

fn rank_cap(dims: (usize, usize, usize)) -> usize {
    let (a, b, c) = dims;
    (a * b).min(a * c).min(b * c)
}

/// Rank the two summands and their direct sum, classify the minimal
/// decomposition of the sum, audit the inequalities, and assemble the
/// report. Budget exhaustion degrades ranks to bounds; it never errors.
pub fn additivity_check(p1: &Tensor3, p2: &Tensor3, budget: u64) -> Result<AdditivityReport> {
    if p1.descriptor() != p2.descriptor() {
        return Err(Error::FieldMismatch(
            p1.descriptor().to_string(),
            p2.descriptor().to_string(),
        ));
    }
    let sum = p1.direct_sum(p2)?;
    let split = BlockSplit::of_tensors(p1, p2);
    let r_prime = rank_oracle(p1, rank_cap(p1.dims()), budget)?;
    let r_bis = rank_oracle(p2, rank_cap(p2.dims()), budget)?;
    let sum_cap = match (r_prime.exact_rank(), r_bis.exact_rank()) {
        // subadditivity: a witness of this length always exists
        (Some(r1), Some(r2)) => r1 + r2,
        _ => rank_cap(sum.dims()),
    };
    let r_sum = rank_oracle(&sum, sum_cap, budget)?;
    let defect = match (r_prime.exact_rank(), r_bis.exact_rank(), r_sum.exact_rank()) {
        (Some(r1), Some(r2), Some(rs)) => Some(r1 as i64 + r2 as i64 - rs as i64),
        _ => None,
    };
    let (classified, classification_error) = match &r_sum {
        RankResult::Exact { witness, .. } => match classify(witness, &split) {
            Ok(cd) => (Some(cd), None),
            Err(e) => (None, Some(e.to_string())),
        },
        _ => (None, None),
    };
    let audit = match (&classified, defect) {
        (Some(cd), Some(_)) => {
            let dim_wp = p1.flattening(Axis::A).rank();
            let dim_wb = p2.flattening(Axis::A).rank();
            audit_inequalities(
                cd,
                dim_wp,
                dim_wb,
                r_prime.exact_rank().unwrap(),
                r_bis.exact_rank().unwrap(),
                r_sum.exact_rank().unwrap(),
            )
        }
        _ => Vec::new(),
    };
    let dossier = match defect {
        Some(d) if d != 0 => Some(build_dossier(
            p1, p2, &split, &r_prime, &r_bis, &r_sum, &classified, &audit, d,
        )),
        _ => None,
    };
    Ok(AdditivityReport {
        r_prime,
        r_bis,
        r_sum,
        defect,
        split,
        classified,
        classification_error,
        audit,
        dossier,
    })
}

#[allow(clippy::too_many_arguments)]
fn build_dossier(
    p1: &Tensor3,
    p2: &Tensor3,
    split: &BlockSplit,
    r_prime: &RankResult,
    r_bis: &RankResult,
    r_sum: &RankResult,
    classified: &Option<ClassifiedDecomposition>,
    audit: &[AuditItem],
    defect: i64,
) -> Value {
    let witness_json = |r: &RankResult| -> Value {
        match r {
            RankResult::Exact { rank, witness } => json!({
                "rank": rank,
                "decomposition": witness.to_file(),
            }),
            other => json!({ "bound": other.lower_bound() }),
        }
    };
    json!({
        "field": p1.descriptor().to_string(),
        "defect": defect,
        "primeTensor": TensorFile::of(p1, None),
        "bisTensor": TensorFile::of(p2, None),
        "split": { "aP": split.a.map(|a| a.0), "bP": split.b.0, "cP": split.c.0 },
        "rPrime": witness_json(r_prime),
        "rBis": witness_json(r_bis),
        "rSum": witness_json(r_sum),
        "labels": classified
            .as_ref()
            .map(|cd| cd.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>()),
        "profileDims": classified.as_ref().map(|cd| {
            let (e1, e2, f1, f2) = cd.profile.dims();
            json!({ "eP": e1, "eB": e2, "fP": f1, "fB": f2 })
        }),
        "audit": audit
            .iter()
            .map(|i| json!({ "name": i.name, "lhs": i.lhs, "rhs": i.rhs, "pass": i.pass }))
            .collect::<Vec<_>>(),
    })
}

/// Status of the three hypotheses of the mix lemma.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MixConditions {
    /// Smallest k with W'' being (k, f'')-hook shaped.
    pub k: usize,
    pub dim_e_tilde: usize,
    pub e_tilde_small: bool,
    pub vl_independent_concise: bool,
    pub hr_independent: bool,
}

impl MixConditions {
    pub fn all_hold(&self) -> bool {
        self.e_tilde_small && self.vl_independent_concise && self.hr_independent
    }
}

/// Check the three hypotheses under which a mix-heavy decomposition still
/// forces additivity: (1) dim E-tilde'' <= k - 1, (2) the VL projections to
/// (B'/E') (x) F' are linearly independent and concise, (3) the HR
/// projections are linearly independent. Requires an empty Bis set.
pub fn check_mix_conditions(
    cd: &ClassifiedDecomposition,
    wb: &MatrixSpace,
) -> Result<MixConditions> {
    if cd.counts.bis != 0 {
        return Err(Error::BadArgument(
            "mix conditions require an empty Bis set".into(),
        ));
    }
    let desc = cd.decomposition.descriptor();
    let (bp, bb) = cd.split.b;
    let (cp, _) = cd.split.c;
    let (_, _, fp_dim, fb_dim) = cd.profile.dims();
    // smallest k with W'' a (k, f'')-hook; k = b'' always works
    let mut k = bb;
    for cand in 0..bb {
        if find_hook_shape(wb, cand, fb_dim)?.is_some() {
            k = cand;
            break;
        }
    }
    // E-tilde'' / F-tilde': contributions of the Mix terms only
    let mut e_tilde = Vec::new();
    let mut f_tilde = Vec::new();
    let mut vl_proj = Vec::new();
    let mut hr_pairs = Vec::new();
    for (t, label) in cd.decomposition.terms().iter().zip(&cd.labels) {
        let (vp, vb) = split_at(t.v(), bp);
        let (wp, _) = split_at(t.w(), cp);
        match label {
            TermLabel::Mix => {
                e_tilde.push(vb.clone());
                f_tilde.push(wp.clone());
            }
            TermLabel::Vl => vl_proj.push((vp.clone(), wp.clone())),
            TermLabel::Hr => hr_pairs.push((vb.clone(), wp.clone())),
            _ => {}
        }
    }
    let dim_e_tilde = span_dim(desc, &e_tilde)?;
    let e_tilde_small = dim_e_tilde + 1 <= k;
    let e_tilde_basis = row_basis(desc, &e_tilde)?;
    // (2): kill E' inside B', keep the F'-part of the c-vector
    let q_ep = QuotientMap::new(desc, cd.profile.e_prime(), bp)?;
    let vl_vecs: Vec<Vec<Scalar>> = vl_proj
        .iter()
        .map(|(vp, wp)| Matrix::outer(desc, &q_ep.apply(vp), wp).entries().to_vec())
        .collect();
    let vl_independent_concise = if vl_vecs.is_empty() {
        true // vacuous
    } else {
        let independent = span_dim(desc, &vl_vecs)? == vl_vecs.len();
        let mats: Vec<Matrix> = vl_proj
            .iter()
            .map(|(vp, wp)| Matrix::outer(desc, &q_ep.apply(vp), wp))
            .collect();
        let space = MatrixSpace::from_span(desc, (q_ep.codim(), cp), &mats)?;
        let concise = space.b_support().len() == q_ep.codim()
            && space.c_support().len() == fp_dim;
        independent && concise
    };
    // (3): kill C'', quotient the b''-part by E-tilde''
    let q_et = QuotientMap::new(desc, &e_tilde_basis, bb)?;
    let hr_vecs: Vec<Vec<Scalar>> = hr_pairs
        .iter()
        .map(|(vb, wp)| Matrix::outer(desc, &q_et.apply(vb), wp).entries().to_vec())
        .collect();
    let hr_independent =
        hr_vecs.is_empty() || span_dim(desc, &hr_vecs)? == hr_vecs.len();
    let _ = f_tilde;
    Ok(MixConditions {
        k,
        dim_e_tilde,
        e_tilde_small,
        vl_independent_concise,
        hr_independent,
    })
}

/// Block-diagonal tensor whose A-slices are the bases of W' and W''
/// embedded in B (x) C; its rank is R(W' + W'') for the pair.
pub fn space_pair_tensor(wp: &MatrixSpace, wb: &MatrixSpace) -> Result<Tensor3> {
    let desc = wp.descriptor();
    if desc != wb.descriptor() {
        return Err(Error::FieldMismatch(
            desc.to_string(),
            wb.descriptor().to_string(),
        ));
    }
    let (bp, cp) = wp.ambient();
    let (bb, cb) = wb.ambient();
    let (b, c) = (bp + bb, cp + cb);
    let n = wp.dim() + wb.dim();
    let mut t = Tensor3::zeros(desc, (n, b, c));
    for (i, m) in wp.basis().iter().enumerate() {
        for j in 0..bp {
            for k in 0..cp {
                t.set(i, j, k, m.get(j, k).clone());
            }
        }
    }
    for (i, m) in wb.basis().iter().enumerate() {
        for j in 0..bb {
            for k in 0..cb {
                t.set(wp.dim() + i, bp + j, cp + k, m.get(j, k).clone());
            }
        }
    }
    Ok(t)
}
