//! Three-route verification of the identities over a parameter grid.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_traits::{One, Zero};

use super::report::{
    BijectionRecord, BudgetStatus, ClassRecord, EnumerationRecord, ExponentSummary, InstanceRecord, RouteFlags,
    SampleRecord, Status, StreamRecord, Summary, SurvivorCounts, VerificationReport, SCHEMA_VERSION,
};
use crate::codes_signs::{code_of_survivor, sign_lhs, sign_rhs, LhsExponent};
use crate::error::EnumError;
use crate::exact_arith::{HankelDims, IdentityParams, Parity};
use crate::folded_overlays::{fold, psi, reflect_rhs, unreflect_rhs, FoldedOverlay};
use crate::lattice_paths::{
    enumerate_tuples, lgv_involution, sample_tuples, signed_tuple_sum_grouped, survivors, tuple_count, Budget,
    PathTuple,
};
use crate::xi_bijection::{code_transform, XiBijection};
use crate::{hankel_det, Int};

/// Ranges of identity parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub k: RangeInclusive<u32>,
    pub m: RangeInclusive<u32>,
    pub n: RangeInclusive<u32>,
    pub parities: Vec<Parity>,
}

impl Default for Grid {
    /// `k, m` in `1..=3`, `n` in `0..=3`, both parities.
    fn default() -> Self {
        Self { k: 1..=3, m: 1..=3, n: 0..=3, parities: Parity::ALL.to_vec() }
    }
}

impl Grid {
    /// A grid holding a single instance.
    pub fn single(p: IdentityParams) -> Self {
        Self { k: p.k..=p.k, m: p.m..=p.m, n: p.n..=p.n, parities: vec![p.parity] }
    }

    /// All instances, sorted by `(k, m, n, parity)`.
    pub fn params(&self) -> Vec<IdentityParams> {
        let mut out = Vec::new();
        for k in self.k.clone() {
            for m in self.m.clone() {
                for n in self.n.clone() {
                    for &parity in &self.parities {
                        out.push(IdentityParams::new(k, m, n, parity));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Deliberate corruption used to check that failures propagate to the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds one to the rhs determinant before any comparison.
    PerturbRhsDeterminant,
}

/// Settings of a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub budget: Budget,
    /// Run the involution / bijection route when the enumeration fits.
    pub bijection: bool,
    /// Attach full bijection records to the report.
    pub bijection_details: bool,
    /// Record wall-clock time per instance (makes reports non-reproducible).
    pub timing: bool,
    pub fault: Option<Fault>,
    /// Worker threads; `0` uses the available parallelism.
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            budget: Budget::default(),
            bijection: true,
            bijection_details: false,
            timing: false,
            fault: None,
            threads: 0,
        }
    }
}

fn signed_sum(tuples: &[PathTuple]) -> i64 {
    tuples.iter().map(|t| i64::from(t.sign())).sum()
}

/// Lhs and rhs survivors, or the reason the enumeration does not fit.
fn enumerate_sides(p: IdentityParams, budget: &Budget) -> Result<(Vec<PathTuple>, Vec<PathTuple>), EnumError> {
    Ok((survivors(p.lhs().dims(), budget)?, survivors(p.rhs().dims(), budget)?))
}

/// Closed-form lhs exponents that reproduce the permutation sign of every
/// folded lhs survivor.
fn matching_exponents(p: IdentityParams, overlays: &[(FoldedOverlay, i32)]) -> Vec<LhsExponent> {
    LhsExponent::ALL
        .into_iter()
        .filter(|&e| overlays.iter().all(|(o, sign)| sign_lhs(&o.code(), p, e) == *sign))
        .collect()
}

/// Checks one instance by every route the budget allows.
pub fn verify_instance(p: IdentityParams, opts: &VerifyOptions) -> (InstanceRecord, Option<BijectionRecord>) {
    let started = Instant::now();
    let (lhs, rhs) = (p.lhs().dims(), p.rhs().dims());
    let det = |d: HankelDims| hankel_det(d).expect("lhs and rhs orders are positive");
    let d_lhs = det(lhs);
    let mut d_rhs = det(rhs);
    if opts.fault == Some(Fault::PerturbRhsDeterminant) {
        d_rhs += Int::one();
    }
    let factor = Int::from(p.theorem_sign());

    let zero_range: Vec<usize> = p.zero_range().collect();
    let zero_ok = zero_range.iter().all(|&n| det(HankelDims::new(lhs.k, lhs.m, n)).is_zero());
    let determinant_ok = d_lhs == &factor * &d_rhs;

    let mut counts = SurvivorCounts::default();
    let mut enumeration = None;
    let mut bijection = None;
    let mut exponents = None;
    let mut record = None;
    let budget_status = match enumerate_sides(p, &opts.budget) {
        Err(e) => BudgetStatus { within: false, skipped: Some(e.to_string()) },
        Ok((ls, rs)) => {
            counts.lhs = Some(ls.len());
            counts.rhs = Some(rs.len());
            let enum_ok = Int::from(signed_sum(&ls)) == d_lhs
                && Int::from(signed_sum(&rs)) == d_rhs
                && signed_tuple_sum_grouped(lhs) == d_lhs
                && signed_tuple_sum_grouped(rhs) == d_rhs;
            enumeration = Some(enum_ok);
            let folded: Result<Vec<(FoldedOverlay, i32)>, _> =
                ls.iter().map(|s| fold(s, p).map(|o| (o, s.sign()))).collect();
            match folded {
                Ok(overlays) => {
                    exponents = Some(matching_exponents(p, &overlays));
                    if opts.bijection {
                        let rec = bijection_route(p, overlays, &rs, &d_lhs);
                        counts.folded = Some(rec.folded_survivors);
                        bijection = Some(rec.passed());
                        record = Some(rec);
                    }
                }
                Err(e) => {
                    enumeration = Some(false);
                    if opts.bijection {
                        bijection = Some(false);
                        record = Some(failed_bijection(p, ls.len(), rs.len(), e.to_string()));
                    }
                }
            }
            BudgetStatus { within: true, skipped: None }
        }
    };

    let routes = RouteFlags { zero_range: zero_ok, determinant: determinant_ok, enumeration, bijection };
    let status = if !routes.all_attempted_agree() {
        Status::Fail
    } else if routes.enumeration.is_none() {
        Status::DeterminantOnlyPass
    } else {
        Status::Pass
    };
    let inst = InstanceRecord {
        k: p.k,
        m: p.m,
        n: p.n,
        parity: p.parity,
        lhs,
        rhs,
        d_lhs: d_lhs.to_string(),
        d_rhs: d_rhs.to_string(),
        theorem_factor: p.theorem_sign(),
        zero_range,
        survivors: counts,
        routes,
        lhs_exponents: exponents,
        budget_status,
        status,
        timing_ms: opts.timing.then(|| started.elapsed().as_millis() as u64),
    };
    (inst, record)
}

fn failed_bijection(p: IdentityParams, overlays: usize, rhs: usize, error: String) -> BijectionRecord {
    BijectionRecord {
        params: p,
        overlays,
        folded_survivors: 0,
        rhs_survivors: rhs,
        involution_ok: false,
        fixed_sum_matches: false,
        classes_match: false,
        roundtrip_ok: false,
        sign_factor_constant: false,
        weighted_identity: false,
        classes: Vec::new(),
        error: Some(error),
    }
}

/// Involution and bijection checks on already enumerated survivors.
///
/// `overlays` pairs each folded lhs survivor with its permutation sign; `rhs`
/// holds the (unreflected) rhs survivors.
fn bijection_route(
    p: IdentityParams,
    overlays: Vec<(FoldedOverlay, i32)>,
    rhs: &[PathTuple],
    d_lhs: &Int,
) -> BijectionRecord {
    let total = overlays.len();
    let mut involution_ok = true;
    let mut fixed = Vec::new();
    let mut fixed_sum = 0i64;
    for (o, sign) in overlays {
        let q = match psi(&o) {
            Ok(q) => q,
            Err(e) => return failed_bijection(p, total, rhs.len(), e.to_string()),
        };
        if q == o {
            fixed_sum += i64::from(sign);
            fixed.push((o, sign));
        } else {
            let back = psi(&q).ok();
            let q_sign = q.sign().ok();
            if back.as_ref() != Some(&o) || q_sign != Some(-sign) {
                involution_ok = false;
            }
        }
    }
    let reflected: Result<Vec<PathTuple>, _> = rhs.iter().map(|s| reflect_rhs(s, p)).collect();
    let reflected = match reflected {
        Ok(r) => r,
        Err(e) => return failed_bijection(p, total, rhs.len(), e.to_string()),
    };

    let factor = i64::from(p.theorem_sign());
    let mut classes: BTreeMap<String, ClassRecord> = BTreeMap::new();
    let mut error = None;
    let class = |classes: &mut BTreeMap<String, ClassRecord>, code: String| {
        classes.entry(code.clone()).or_insert(ClassRecord {
            rhs_code: code,
            lhs_count: 0,
            rhs_count: 0,
            lhs_signed: 0,
            rhs_signed: 0,
        });
    };
    for (o, sign) in &fixed {
        match code_transform(&o.code()) {
            Ok(c) => {
                let key = c.to_string();
                class(&mut classes, key.clone());
                let e = classes.get_mut(&key).expect("inserted");
                e.lhs_count += 1;
                e.lhs_signed += i64::from(*sign);
            }
            Err(e) => error = Some(e.to_string()),
        }
    }
    for s in rhs {
        match code_of_survivor(s, p.rhs()) {
            Ok(c) => {
                let key = c.to_string();
                class(&mut classes, key.clone());
                let e = classes.get_mut(&key).expect("inserted");
                e.rhs_count += 1;
                e.rhs_signed += i64::from(sign_rhs(&c));
            }
            Err(e) => error = Some(e.to_string()),
        }
    }
    let classes: Vec<ClassRecord> = classes.into_values().collect();
    let rhs_sum: i64 = classes.iter().map(|c| c.rhs_signed).sum();
    let weighted_identity =
        classes.iter().all(|c| c.lhs_signed == factor * c.rhs_signed) && fixed_sum == factor * rhs_sum;

    let fixed_count = fixed.len();
    let (classes_match, roundtrip_ok, sign_factor_constant) =
        match XiBijection::from_parts(p, fixed.into_iter().map(|(o, _)| o).collect(), reflected) {
            Ok(xi) => {
                let mut roundtrip = xi.len() == fixed_count && xi.len() == rhs.len();
                let mut constant = true;
                for (o, r) in xi.pairs() {
                    roundtrip &= xi.forward(o).as_ref() == Ok(r) && xi.inverse(r).as_ref() == Ok(o);
                    constant &= o.sign().ok().map(|s| s * unreflect_rhs(r).sign()) == Some(p.theorem_sign());
                }
                (true, roundtrip, constant)
            }
            Err(e) => {
                error.get_or_insert(e.to_string());
                (false, false, false)
            }
        };

    BijectionRecord {
        params: p,
        overlays: total,
        folded_survivors: fixed_count,
        rhs_survivors: rhs.len(),
        involution_ok,
        fixed_sum_matches: Int::from(fixed_sum) == *d_lhs,
        classes_match,
        roundtrip_ok,
        sign_factor_constant,
        weighted_identity,
        classes,
        error,
    }
}

/// Runs the involution / bijection route on one instance.
pub fn run_route_bijection(p: IdentityParams, budget: &Budget) -> Result<BijectionRecord, EnumError> {
    let (ls, rs) = enumerate_sides(p, budget)?;
    let d_lhs = hankel_det(p.lhs().dims()).expect("lhs order is positive");
    Ok(match ls.iter().map(|s| fold(s, p).map(|o| (o, s.sign()))).collect::<Result<Vec<_>, _>>() {
        Ok(overlays) => bijection_route(p, overlays, &rs, &d_lhs),
        Err(e) => failed_bijection(p, ls.len(), rs.len(), e.to_string()),
    })
}

/// `true` iff the LGV involution behaves correctly at `t`: nonintersecting
/// tuples are fixed, every other tuple is sent to a tuple of opposite sign
/// that is sent back.
pub fn lgv_involution_holds_at(t: &PathTuple) -> bool {
    let q = lgv_involution(t);
    if t.is_nonintersecting() {
        q == *t
    } else {
        q != *t && q.sign() == -t.sign() && lgv_involution(&q) == *t
    }
}

/// Tuples drawn when the full stream exceeds the budget.
pub const SAMPLE_SIZE: u64 = 10_000;

/// Enumeration route on one matrix instance: grouped signed sum, the full
/// tuple stream when it fits (a deterministic sample otherwise), and the
/// survivor search, each compared with the determinant.
pub fn run_route_enumeration(dims: HankelDims, budget: &Budget) -> EnumerationRecord {
    let det = hankel_det(dims).expect("order is positive");
    let grouped = signed_tuple_sum_grouped(dims);
    let mut agree = grouped == det;
    let mut skipped = Vec::new();
    let mut stream = None;
    let mut sample = None;
    match enumerate_tuples(dims, budget) {
        Ok(tuples) => {
            let mut rec = StreamRecord { tuples: 0, signed_sum: 0, fixed_points: 0, involution_ok: true };
            for t in tuples {
                rec.tuples += 1;
                rec.signed_sum += i64::from(t.sign());
                if t.is_nonintersecting() {
                    rec.fixed_points += 1;
                }
                rec.involution_ok &= lgv_involution_holds_at(&t);
            }
            agree &= rec.involution_ok && Int::from(rec.signed_sum) == det;
            stream = Some(rec);
        }
        Err(e) => {
            skipped.push(e.to_string());
            match sample_tuples(dims, budget, SAMPLE_SIZE) {
                Ok(ts) => {
                    let ok = ts.iter().all(lgv_involution_holds_at);
                    agree &= ok;
                    sample = Some(SampleRecord { samples: ts.len(), involution_ok: ok });
                }
                Err(e) => skipped.push(e.to_string()),
            }
        }
    }
    let (mut count, mut sum) = (None, None);
    match survivors(dims, budget) {
        Ok(ls) => {
            let s = signed_sum(&ls);
            agree &= Int::from(s) == det;
            if let Some(st) = &stream {
                agree &= st.fixed_points == ls.len() as u64;
            }
            count = Some(ls.len());
            sum = Some(s);
        }
        Err(e) => skipped.push(e.to_string()),
    }
    EnumerationRecord {
        schema_version: SCHEMA_VERSION,
        dims,
        determinant: det.to_string(),
        tuples: tuple_count(dims).to_string(),
        grouped_signed_sum: grouped.to_string(),
        stream,
        sample,
        survivors: count,
        survivor_signed_sum: sum,
        skipped,
        agree,
    }
}

fn exponent_summaries(records: &[InstanceRecord]) -> Vec<ExponentSummary> {
    let mut by_k: BTreeMap<u32, Vec<&Vec<LhsExponent>>> = BTreeMap::new();
    for r in records {
        if let Some(e) = &r.lhs_exponents {
            by_k.entry(r.k).or_default().push(e);
        }
    }
    by_k.into_iter()
        .flat_map(|(k, lists)| {
            LhsExponent::ALL.into_iter().map(move |exponent| ExponentSummary {
                k,
                instances: lists.len(),
                exponent,
                formula: exponent.formula().to_string(),
                matches: lists.iter().all(|l| l.contains(&exponent)),
            })
        })
        .collect()
}

/// Verifies every instance of the grid; instances are processed in parallel
/// and the report is sorted by instance key.
pub fn verify_identities(grid: &Grid, opts: &VerifyOptions) -> VerificationReport {
    let params = grid.params();
    let threads = match opts.threads {
        0 => std::thread::available_parallelism().map_or(1, usize::from),
        t => t,
    }
    .min(params.len().max(1));
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(params.len()));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&p) = params.get(i) else { break };
                let out = verify_instance(p, opts);
                results.lock().expect("no worker panicked").push((p, out));
            });
        }
    });
    let mut results = results.into_inner().expect("no worker panicked");
    results.sort_by_key(|(p, _)| *p);

    let mut instances = Vec::with_capacity(results.len());
    let mut bijection = Vec::new();
    for (_, (inst, rec)) in results {
        instances.push(inst);
        if opts.bijection_details {
            bijection.extend(rec);
        }
    }
    let summary = Summary {
        instances: instances.len(),
        pass: instances.iter().filter(|r| r.status == Status::Pass).count(),
        determinant_only_pass: instances.iter().filter(|r| r.status == Status::DeterminantOnlyPass).count(),
        fail: instances.iter().filter(|r| r.status == Status::Fail).count(),
    };
    VerificationReport {
        schema_version: SCHEMA_VERSION,
        budget: opts.budget,
        summary,
        lhs_exponents: exponent_summaries(&instances),
        instances,
        bijection,
    }
}
