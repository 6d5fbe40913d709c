//! Acceptance gate: ten criteria, one pass/fail line each. Every random
//! suite draws from the pinned generator with a fixed seed, so reruns are
//! bit-exact. Budget-limited instances are reported and never counted as
//! passes. Run with `cargo test --test acceptance -- --nocapture` to see
//! the per-criterion lines on success.

use std::time::Instant;

use tensoradd::bounds::{affine_hyperplane, find_rank_one_slice, substitution_lower_bound};
use tensoradd::decomp::{
    max_rank_census, rank_oracle, strassen_222, RankResult,
};
use tensoradd::directsum::{
    additivity_check, digest, peel_hook_slice, replete, space_pair_tensor, BlockSplit,
    TermLabel,
};
use tensoradd::exactfield::{FieldDescriptor, Scalar};
use tensoradd::io::Lcg;
use tensoradd::tensor3::{
    is_hook_shaped, matmul_tensor, random_hook_tensor, random_tensor, Axis, HookShape,
    Tensor3,
};

fn gf(p: u32) -> FieldDescriptor {
    FieldDescriptor::prime(p).unwrap()
}

/// Running tallies for criterion 8, fed by the suites of criteria 5-7.
#[derive(Default)]
struct AuditTally {
    classified: usize,
    classification_failures: usize,
    audit_items: usize,
    audit_failures: usize,
}

impl AuditTally {
    fn absorb(&mut self, report: &tensoradd::directsum::AdditivityReport) {
        if report.classified.is_some() {
            self.classified += 1;
        }
        if report.classification_error.is_some() {
            self.classification_failures += 1;
        }
        for item in &report.audit {
            self.audit_items += 1;
            if !item.pass {
                self.audit_failures += 1;
            }
        }
    }
}

fn criterion_1() -> Result<String, String> {
    let fields = [gf(2), gf(3), gf(5), FieldDescriptor::rationals()];
    for desc in fields {
        let mu = matmul_tensor(2, 2, 2, desc).map_err(|e| e.to_string())?;
        let cert = strassen_222(desc).certifies(&mu).map_err(|e| e.to_string())?;
        if cert.is_none() {
            return Err(format!("7-term table does not certify over {desc}"));
        }
    }
    Ok("7-term table certifies the 2x2 matmul tensor over Q, GF(2), GF(3), GF(5)".into())
}

fn criterion_2() -> Result<String, String> {
    for desc in [gf(2), FieldDescriptor::rationals()] {
        let mu222 = matmul_tensor(2, 2, 2, desc).map_err(|e| e.to_string())?;
        if mu222.flattening_ranks() != (4, 4, 4) {
            return Err(format!(
                "mu_{{2,2,2}} flattening ranks {:?} != (4,4,4) over {desc}",
                mu222.flattening_ranks()
            ));
        }
        let mu223 = matmul_tensor(2, 2, 3, desc).map_err(|e| e.to_string())?;
        if mu223.flattening_ranks() != (4, 6, 6) {
            return Err(format!(
                "mu_{{2,2,3}} flattening ranks {:?} != (4,6,6) over {desc}",
                mu223.flattening_ranks()
            ));
        }
    }
    Ok("flattening ranks: mu_{2,2,2} = (4,4,4), mu_{2,2,3} = (4,6,6)".into())
}

fn criterion_3() -> Result<String, String> {
    let desc = gf(2);
    let census = max_rank_census((2, 2, 2), desc).map_err(|e| e.to_string())?;
    let total: usize = census.values().sum();
    if total != 256 {
        return Err(format!("census covered {total} of 256 tensors"));
    }
    let max = *census.keys().max().unwrap();
    if max != 3 {
        return Err(format!("census max rank {max} != 3"));
    }
    // pairwise subadditivity on a pinned 1000-pair sample
    let mut rng = Lcg::new(7);
    let mut exceeded = 0;
    for i in 0..1000 {
        let a = random_tensor(desc, (2, 2, 2), &mut rng);
        let b = random_tensor(desc, (2, 2, 2), &mut rng);
        let ra = rank_oracle(&a, 8, 10_000_000)
            .map_err(|e| e.to_string())?
            .exact_rank()
            .ok_or("factor rank not exact")?;
        let rb = rank_oracle(&b, 8, 10_000_000)
            .map_err(|e| e.to_string())?
            .exact_rank()
            .ok_or("factor rank not exact")?;
        let sum = a.direct_sum(&b).map_err(|e| e.to_string())?;
        match rank_oracle(&sum, ra + rb, 50_000_000).map_err(|e| e.to_string())? {
            RankResult::Exact { rank, .. } => {
                if rank > ra + rb {
                    return Err(format!("pair {i}: R(sum) = {rank} > {ra} + {rb}"));
                }
            }
            RankResult::LowerBoundOnly { bound } => {
                return Err(format!("pair {i}: no witness up to {ra}+{rb} (bound {bound})"));
            }
            RankResult::BudgetExceeded { .. } => exceeded += 1,
        }
    }
    Ok(format!(
        "census {census:?} (256 tensors, max rank 3); subadditivity held on all \
         completed pairs of the 1000-pair sample ({exceeded} budget-limited)"
    ))
}

/// A rank-one slice guarantees the peeled residual never loses more than
/// one unit of rank for any choice of a, and the minimum over the affine
/// hyperplane (alpha = 1) achieves the drop exactly. (The stronger reading
/// "every choice drops exactly one" is false: slices {e11, I2} give a
/// counterexample, so this criterion tests the correct two-sided form.)
fn criterion_4() -> Result<String, String> {
    let mut tested = 0;
    for (p, seed, count) in [(2u32, 11u64, 100usize), (3, 13, 100)] {
        let desc = gf(p);
        let mut rng = Lcg::new(seed);
        let mut done = 0;
        while done < count {
            let dims = if done % 2 == 0 { (2, 2, 2) } else { (2, 2, 3) };
            let t = random_tensor(desc, dims, &mut rng);
            if t.is_zero() {
                continue;
            }
            let mut found = None;
            for axis in Axis::ALL {
                if let Some((alpha, _)) =
                    find_rank_one_slice(&t, axis).map_err(|e| e.to_string())?
                {
                    found = Some((axis, alpha));
                    break;
                }
            }
            let Some((axis, alpha)) = found else { continue };
            let r = rank_oracle(&t, 12, 10_000_000)
                .map_err(|e| e.to_string())?
                .exact_rank()
                .ok_or("rank not exact")?;
            let mut min_rr = usize::MAX;
            for a in affine_hyperplane(desc, &alpha) {
                let cert =
                    tensoradd::bounds::peel(&t, axis, &alpha, &a).map_err(|e| e.to_string())?;
                let rr = rank_oracle(&cert.residual, 12, 10_000_000)
                    .map_err(|e| e.to_string())?
                    .exact_rank()
                    .ok_or("residual rank not exact")?;
                if rr + 1 < r {
                    return Err(format!(
                        "overshoot over {desc}: residual rank {rr}, rank {r}"
                    ));
                }
                min_rr = min_rr.min(rr);
            }
            if min_rr != r - 1 {
                return Err(format!(
                    "no choice of a achieved the exact drop over {desc}: \
                     min residual rank {min_rr}, rank {r}"
                ));
            }
            done += 1;
            tested += 1;
        }
    }
    Ok(format!(
        "{tested} tensors over GF(2)/GF(3): every a gives residual rank >= r-1 and \
         the minimum over (alpha=1) equals r-1 (corrected two-sided form)"
    ))
}

fn criterion_5(tally: &mut AuditTally) -> Result<String, String> {
    let desc = gf(2);
    let mut rng = Lcg::new(42);
    let dims_small = [(1usize, 2, 2), (2, 2, 2), (1, 3, 3), (2, 2, 3)];
    let dims_any = [(2, 2, 2), (2, 2, 3), (2, 3, 3), (3, 3, 3), (1, 3, 3)];
    let mut completed = 0;
    let mut exceeded = 0;
    let mut oversize = 0;
    for i in 0..200usize {
        // one factor always has some flattening rank <= 2 by construction
        let d1 = dims_small[i % dims_small.len()];
        let d2 = dims_any[(i * 7 + 3) % dims_any.len()];
        let p1 = loop {
            let t = random_tensor(desc, d1, &mut rng);
            if !t.is_zero() {
                break t;
            }
        };
        let p2 = loop {
            let t = random_tensor(desc, d2, &mut rng);
            if !t.is_zero() {
                break t;
            }
        };
        let (f1a, f1b, f1c) = p1.flattening_ranks();
        assert!(f1a.min(f1b).min(f1c) <= 2);
        match additivity_check(&p1, &p2, 20_000_000) {
            Ok(report) => {
                tally.absorb(&report);
                match report.defect {
                    Some(0) => completed += 1,
                    Some(d) => return Err(format!("pair {i}: nonzero defect {d}")),
                    None => exceeded += 1,
                }
            }
            Err(tensoradd::Error::TooLarge(_)) => oversize += 1,
            Err(e) => return Err(format!("pair {i}: {e}")),
        }
    }
    Ok(format!(
        "defect 0 in 100% of {completed} completed pairs \
         ({exceeded} budget-limited, {oversize} oversize; reported, not counted)"
    ))
}

fn criterion_6(tally: &mut AuditTally) -> Result<String, String> {
    let desc = gf(2);
    let mut rng = Lcg::new(1);
    let mut completed = 0;
    let mut exceeded = 0;
    for i in 0..100 {
        let p1 = random_hook_tensor(desc, (2, 3, 3), 1, 2, &mut rng)
            .map_err(|e| e.to_string())?;
        let p2 = loop {
            let t = random_tensor(desc, (2, 2, 2), &mut rng);
            if !t.is_zero() {
                break t;
            }
        };
        let report = additivity_check(&p1, &p2, 50_000_000).map_err(|e| e.to_string())?;
        tally.absorb(&report);
        match report.defect {
            Some(0) => completed += 1,
            Some(d) => return Err(format!("hook pair {i}: nonzero defect {d}")),
            None => exceeded += 1,
        }
    }
    Ok(format!(
        "(1,2)-hook factor: defect 0 in 100% of {completed} completed pairs \
         ({exceeded} budget-limited)"
    ))
}

fn criterion_7(tally: &mut AuditTally) -> Result<String, String> {
    let desc = gf(2);
    let mut rng = Lcg::new(23);
    let mut done = 0;
    while done < 100 {
        let d2 = if done % 2 == 0 { (1, 2, 2) } else { (2, 2, 2) };
        let p1 = loop {
            let t = random_tensor(desc, (2, 2, 2), &mut rng);
            if !t.is_zero() {
                break t;
            }
        };
        let p2 = loop {
            let t = random_tensor(desc, d2, &mut rng);
            if !t.is_zero() {
                break t;
            }
        };
        let report = additivity_check(&p1, &p2, 50_000_000).map_err(|e| e.to_string())?;
        if report.defect != Some(0) {
            continue;
        }
        tally.absorb(&report);
        let Some(cd) = &report.classified else { continue };
        let Some(idx) = cd
            .labels
            .iter()
            .position(|l| matches!(l, TermLabel::Prime | TermLabel::Bis))
        else {
            continue;
        };
        let wp = p1.slice_space(Axis::A);
        let wb = p2.slice_space(Axis::A);
        let rank_of = |wp: &_, wb: &_| -> Result<usize, String> {
            let t = space_pair_tensor(wp, wb).map_err(|e| e.to_string())?;
            rank_oracle(&t, 10, 50_000_000)
                .map_err(|e| e.to_string())?
                .exact_rank()
                .ok_or_else(|| "pair rank not exact".to_string())
        };
        let r_before = rank_of(&wp, &wb)?;
        // repletion: dimension grows by at most one, rank of the pair unchanged
        let (wp1, wb1) = replete(&wp, &wb, cd, idx).map_err(|e| e.to_string())?;
        if wp1.dim() + wb1.dim() > wp.dim() + wb.dim() + 1 {
            return Err("repletion grew dimension by more than one".into());
        }
        let r_replete = rank_of(&wp1, &wb1)?;
        if r_replete != r_before {
            return Err(format!(
                "repletion changed the rank: {r_before} -> {r_replete}"
            ));
        }
        // digestion at the repleted term: dims and rank both drop by exactly one
        let (s1, s2, reduced) = digest(&wp1, &wb1, cd, idx, true).map_err(|e| e.to_string())?;
        if s1.dim() + s2.dim() != wp1.dim() + wb1.dim() - 1 {
            return Err("digestion did not drop the dimension by exactly one".into());
        }
        if reduced.len() != cd.decomposition.len() - 1 {
            return Err("digestion did not shorten the decomposition by one".into());
        }
        let r_digested = rank_of(&s1, &s2)?;
        if r_digested != r_replete - 1 {
            return Err(format!(
                "digestion rank {r_digested} != {} - 1",
                r_replete
            ));
        }
        done += 1;
    }
    Ok(format!(
        "{done} replete instances: rank invariant under repletion, rank and \
         dimension drop by exactly one under digestion"
    ))
}

fn criterion_8(tally: &AuditTally) -> Result<String, String> {
    if tally.classified == 0 {
        return Err("no decompositions were classified by criteria 5-7".into());
    }
    if tally.classification_failures > 0 {
        return Err(format!(
            "{} decompositions had unclassifiable terms",
            tally.classification_failures
        ));
    }
    if tally.audit_failures > 0 {
        return Err(format!(
            "{} of {} audited inequalities failed",
            tally.audit_failures, tally.audit_items
        ));
    }
    Ok(format!(
        "all {} oracle-minimal decompositions classified totally; \
         {} audited inequalities, zero failures",
        tally.classified, tally.audit_items
    ))
}

/// The exact values R = 7 for the 2x2 matmul tensor over Q/C and R = 14 for
/// its direct square are published theorems whose lower-bound halves are not
/// desk-reproducible here; this criterion verifies the bounds the artifact
/// can certify: upper bounds from the 7-term table (and its concatenation)
/// and lower bounds from flattenings.
fn criterion_9() -> Result<String, String> {
    let desc = FieldDescriptor::rationals();
    let mu = matmul_tensor(2, 2, 2, desc).map_err(|e| e.to_string())?;
    let table = strassen_222(desc);
    if table.certifies(&mu).map_err(|e| e.to_string())?.is_none() {
        return Err("7-term upper bound does not certify".into());
    }
    let (ra, rb, rc) = mu.flattening_ranks();
    if ra.max(rb).max(rc) != 4 {
        return Err("flattening lower bound is not 4".into());
    }
    let sum = mu.direct_sum(&mu).map_err(|e| e.to_string())?;
    let double = table.direct_sum(&table).map_err(|e| e.to_string())?;
    if double.len() != 14 || double.certifies(&sum).map_err(|e| e.to_string())?.is_none() {
        return Err("14-term concatenated upper bound does not certify".into());
    }
    let (sa, sb, sc) = sum.flattening_ranks();
    Ok(format!(
        "verified bounds: 4 <= R(mu) <= 7 and {} <= R(mu + mu) <= 14 over Q; \
         the exact values 7 and 14 are the published theorems, cited, not re-proved",
        sa.max(sb).max(sc)
    ))
}

fn criterion_10() -> Result<String, String> {
    let desc = gf(2);
    let mut rng = Lcg::new(29);
    'outer: loop {
        // primed factor: (1,2)-hook shaped slices in 3 x 4 matrices, so the
        // non-hook C' coordinates 2 and 3 can be peeled twice
        let p1 = random_hook_tensor(desc, (2, 3, 4), 1, 2, &mut rng)
            .map_err(|e| e.to_string())?;
        let p2 = loop {
            let t = random_tensor(desc, (2, 2, 2), &mut rng);
            if !t.is_zero() {
                break t;
            }
        };
        let mut sum = p1.direct_sum(&p2).map_err(|e| e.to_string())?;
        let mut split = BlockSplit::of_tensors(&p1, &p2);
        let mut hook = HookShape::coordinate(desc, 3, 4, 1, 2);
        let mut rank = match rank_oracle(&sum, 10, 100_000_000).map_err(|e| e.to_string())? {
            RankResult::Exact { rank, .. } => rank,
            _ => continue,
        };
        for _ in 0..2 {
            // gamma: dual of the first C'-coordinate outside the hook columns
            let mut gamma = vec![Scalar::zero(desc); split.c.0];
            gamma[hook.f()] = Scalar::one(desc);
            let peeled = match peel_hook_slice(&sum, &split, &gamma, &hook) {
                Ok(p) => p,
                Err(_) => continue 'outer, // zero or higher-rank slice: resample
            };
            let new_rank =
                match rank_oracle(&peeled.reduced, 10, 100_000_000).map_err(|e| e.to_string())? {
                    RankResult::Exact { rank, .. } => rank,
                    _ => continue 'outer,
                };
            if new_rank != rank - 1 {
                return Err(format!("peel dropped rank {rank} -> {new_rank}, not by 1"));
            }
            sum = peeled.reduced;
            split = peeled.split;
            hook = peeled.hook;
            rank = new_rank;
            // hook certificate must survive on the reduced primed block
            let mut primed = Tensor3::zeros(desc, (2, split.b.0, split.c.0));
            for i in 0..2 {
                for j in 0..split.b.0 {
                    for k in 0..split.c.0 {
                        primed.set(i, j, k, sum.get(i, j, k).clone());
                    }
                }
            }
            if !is_hook_shaped(&primed.slice_space(Axis::A), &hook)
                .map_err(|e| e.to_string())?
            {
                return Err("hook certificate lost after a peel".into());
            }
        }
        if split.c.0 != 2 {
            return Err(format!("final c' = {} != 2", split.c.0));
        }
        return Ok(format!(
            "two rank-one hook peels, each dropping the oracle rank by exactly 1, \
             hook certificate preserved, final primed space inside B' (x) k^2 \
             (final rank {rank})"
        ));
    }
}

#[test]
fn acceptance() {
    let mut tally = AuditTally::default();
    let mut failures = 0;
    let mut run = |n: usize, result: Result<String, String>, t0: Instant| {
        match result {
            Ok(msg) => println!("criterion {n}: PASS ({:.1?}) — {msg}", t0.elapsed()),
            Err(msg) => {
                println!("criterion {n}: FAIL ({:.1?}) — {msg}", t0.elapsed());
                failures += 1;
            }
        }
    };
    let t = Instant::now();
    run(1, criterion_1(), t);
    let t = Instant::now();
    run(2, criterion_2(), t);
    let t = Instant::now();
    run(3, criterion_3(), t);
    let t = Instant::now();
    run(4, criterion_4(), t);
    let t = Instant::now();
    run(5, criterion_5(&mut tally), t);
    let t = Instant::now();
    run(6, criterion_6(&mut tally), t);
    let t = Instant::now();
    run(7, criterion_7(&mut tally), t);
    let t = Instant::now();
    run(8, criterion_8(&tally), t);
    let t = Instant::now();
    run(9, criterion_9(), t);
    let t = Instant::now();
    run(10, criterion_10(), t);
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}

/// The substitution bound itself stays sound on the acceptance fixtures.
#[test]
fn substitution_bound_sound_on_census_sample() {
    let desc = gf(2);
    let mut rng = Lcg::new(47);
    for _ in 0..50 {
        let t = random_tensor(desc, (2, 2, 2), &mut rng);
        let (bound, _) = substitution_lower_bound(&t).unwrap();
        let r = rank_oracle(&t, 8, 10_000_000)
            .unwrap()
            .exact_rank()
            .unwrap();
        assert!(bound <= r, "substitution bound {bound} exceeds rank {r}");
    }
}
