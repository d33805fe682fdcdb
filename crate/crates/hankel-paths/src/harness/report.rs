//! Versioned verification reports and their JSON / CSV emission.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codes_signs::LhsExponent;
use crate::exact_arith::{HankelDims, IdentityParams, Parity};
use crate::lattice_paths::Budget;

/// Version of the report layout; bumped on any field change.
pub const SCHEMA_VERSION: u32 = 1;

/// Overall verdict of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    /// Every route ran and agreed.
    #[serde(rename = "pass")]
    Pass,
    /// Zero ranges and determinants agree; the enumeration routes were
    /// skipped because the instance exceeds the budget.
    #[serde(rename = "determinant-only pass")]
    DeterminantOnlyPass,
    /// Some attempted route disagreed.
    #[serde(rename = "fail")]
    Fail,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::DeterminantOnlyPass => "determinant-only pass",
            Status::Fail => "fail",
        })
    }
}

/// Per-route agreement flags; `None` marks a route that was not attempted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteFlags {
    /// The lhs determinant vanishes on the whole zero range.
    pub zero_range: bool,
    /// `D_lhs = factor * D_rhs` by exact determinants.
    pub determinant: bool,
    /// Signed survivor sums (and grouped all-tuple sums) equal the determinants on both sides.
    pub enumeration: Option<bool>,
    /// The sign-reversing involution and the code-class bijection agree with the identity.
    pub bijection: Option<bool>,
}

impl RouteFlags {
    /// `true` iff every attempted route agrees.
    pub fn all_attempted_agree(&self) -> bool {
        self.zero_range && self.determinant && self.enumeration != Some(false) && self.bijection != Some(false)
    }
}

/// Survivor counts; `None` when the enumeration was skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SurvivorCounts {
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
    /// Fixed points of the involution on folded lhs survivors.
    pub folded: Option<usize>,
}

/// Whether the enumeration routes fit in the budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetStatus {
    pub within: bool,
    /// Reason the enumeration routes were skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// Result of the involution / bijection route on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionRecord {
    pub params: IdentityParams,
    /// Number of lhs survivors (all folded overlays).
    pub overlays: usize,
    /// Number of involution fixed points.
    pub folded_survivors: usize,
    pub rhs_survivors: usize,
    /// The involution is an involution and reverses the sign off its fixed points.
    pub involution_ok: bool,
    /// Signed sum over fixed points equals `D_lhs`.
    pub fixed_sum_matches: bool,
    /// Every code class has equal size on both sides.
    pub classes_match: bool,
    /// Forward then inverse (and the reverse) is the identity.
    pub roundtrip_ok: bool,
    /// `sign(lhs) * sign(rhs)` equals the identity's sign factor on every matched pair.
    pub sign_factor_constant: bool,
    /// Weighted code sums satisfy `sum_lhs = factor * sum_rhs`.
    pub weighted_identity: bool,
    pub classes: Vec<ClassRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BijectionRecord {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.involution_ok
            && self.fixed_sum_matches
            && self.classes_match
            && self.roundtrip_ok
            && self.sign_factor_constant
            && self.weighted_identity
    }
}

/// Sizes and signed sums of one rhs code class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub rhs_code: String,
    pub lhs_count: usize,
    pub rhs_count: usize,
    pub lhs_signed: i64,
    pub rhs_signed: i64,
}

/// One identity instance checked by every route the budget allows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub k: u32,
    pub m: u32,
    pub n: u32,
    pub parity: Parity,
    pub lhs: HankelDims,
    pub rhs: HankelDims,
    /// Decimal `D_lhs`.
    pub d_lhs: String,
    /// Decimal `D_rhs`.
    pub d_rhs: String,
    /// `(-1)^binom(m+k-1+[even], 2)`.
    pub theorem_factor: i32,
    /// Lhs sizes `N` on which the determinant must vanish.
    pub zero_range: Vec<usize>,
    pub survivors: SurvivorCounts,
    pub routes: RouteFlags,
    /// Closed-form lhs sign exponents that agree with the permutation sign on
    /// every lhs survivor; absent when enumeration was skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_exponents: Option<Vec<LhsExponent>>,
    pub budget_status: BudgetStatus,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl InstanceRecord {
    pub fn params(&self) -> IdentityParams {
        IdentityParams::new(self.k, self.m, self.n, self.parity)
    }
}

/// Exponent agreement aggregated over all enumerated instances with one `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSummary {
    pub k: u32,
    pub instances: usize,
    pub exponent: LhsExponent,
    pub formula: String,
    /// Agrees on every survivor of every enumerated instance with this `k`.
    pub matches: bool,
}

/// Counts of each status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub pass: usize,
    pub determinant_only_pass: usize,
    pub fail: usize,
}

/// Full report of a `verify` run, instances sorted by `(k, m, n, parity)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub budget: Budget,
    pub summary: Summary,
    pub instances: Vec<InstanceRecord>,
    pub lhs_exponents: Vec<ExponentSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bijection: Vec<BijectionRecord>,
}

impl VerificationReport {
    /// `true` iff some instance (or bijection record) failed.
    pub fn has_failure(&self) -> bool {
        self.instances.iter().any(|r| r.status.is_failure()) || self.bijection.iter().any(|b| !b.passed())
    }
}

/// Report serialisation format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("format must be 'json' or 'csv', got {other:?}")),
        }
    }
}

/// Flat CSV row of an instance record.
#[derive(Serialize)]
struct CsvRow<'a> {
    k: u32,
    m: u32,
    n: u32,
    parity: Parity,
    lhs_k: i64,
    lhs_m: i64,
    lhs_n: usize,
    rhs_k: i64,
    rhs_m: i64,
    rhs_n: usize,
    d_lhs: &'a str,
    d_rhs: &'a str,
    theorem_factor: i32,
    survivors_lhs: Option<usize>,
    survivors_rhs: Option<usize>,
    survivors_folded: Option<usize>,
    route_zero_range: bool,
    route_determinant: bool,
    route_enumeration: Option<bool>,
    route_bijection: Option<bool>,
    budget_within: bool,
    status: Status,
}

impl<'a> From<&'a InstanceRecord> for CsvRow<'a> {
    fn from(r: &'a InstanceRecord) -> Self {
        Self {
            k: r.k,
            m: r.m,
            n: r.n,
            parity: r.parity,
            lhs_k: r.lhs.k,
            lhs_m: r.lhs.m,
            lhs_n: r.lhs.n,
            rhs_k: r.rhs.k,
            rhs_m: r.rhs.m,
            rhs_n: r.rhs.n,
            d_lhs: &r.d_lhs,
            d_rhs: &r.d_rhs,
            theorem_factor: r.theorem_factor,
            survivors_lhs: r.survivors.lhs,
            survivors_rhs: r.survivors.rhs,
            survivors_folded: r.survivors.folded,
            route_zero_range: r.routes.zero_range,
            route_determinant: r.routes.determinant,
            route_enumeration: r.routes.enumeration,
            route_bijection: r.routes.bijection,
            budget_within: r.budget_status.within,
            status: r.status,
        }
    }
}

/// Serialises a report. JSON is the full document; CSV has one row per
/// instance with the nested fields flattened.
pub fn emit_report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => json_document(r),
        Format::Csv => csv_document(r.instances.iter().map(CsvRow::from)),
    }
}

/// Exhaustive stream of all tuples of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamRecord {
    pub tuples: u64,
    pub signed_sum: i64,
    /// Tuples fixed by the LGV involution.
    pub fixed_points: u64,
    /// The involution is an involution, reverses the sign off its fixed
    /// points, and fixes exactly the nonintersecting tuples.
    pub involution_ok: bool,
}

/// LGV involution checked on an evenly spaced sample of tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub samples: usize,
    pub involution_ok: bool,
}

/// Enumeration route on one side of one identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationRecord {
    pub schema_version: u32,
    pub dims: HankelDims,
    pub determinant: String,
    /// Total number of tuples, counted without enumeration.
    pub tuples: String,
    /// `sum_perm sgn(perm) prod count(A_i, B_perm(i))`.
    pub grouped_signed_sum: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<StreamRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleRecord>,
    pub survivors: Option<usize>,
    pub survivor_signed_sum: Option<i64>,
    /// Reasons parts of the route were skipped.
    pub skipped: Vec<String>,
    /// Every computed quantity agrees with the determinant.
    pub agree: bool,
}

/// Exact determinant of one matrix instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantRecord {
    pub schema_version: u32,
    pub k: i64,
    pub m: i64,
    pub n: usize,
    pub determinant: String,
}

#[derive(Serialize)]
struct EnumerationRow<'a> {
    k: i64,
    m: i64,
    n: usize,
    determinant: &'a str,
    tuples: &'a str,
    grouped_signed_sum: &'a str,
    streamed_tuples: Option<u64>,
    streamed_signed_sum: Option<i64>,
    lgv_fixed_points: Option<u64>,
    lgv_involution_ok: Option<bool>,
    sampled_tuples: Option<usize>,
    survivors: Option<usize>,
    survivor_signed_sum: Option<i64>,
    agree: bool,
}

fn csv_document<T: Serialize>(rows: impl IntoIterator<Item = T>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("row is serialisable");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

fn json_document<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("record is serialisable");
    s.push('\n');
    s
}

/// Serialises a determinant record.
pub fn emit_determinant(r: &DeterminantRecord, format: Format) -> String {
    match format {
        Format::Json => json_document(r),
        Format::Csv => csv_document([r]),
    }
}

/// Serialises an enumeration record; CSV flattens the stream and sample parts.
pub fn emit_enumeration(r: &EnumerationRecord, format: Format) -> String {
    match format {
        Format::Json => json_document(r),
        Format::Csv => csv_document([EnumerationRow {
            k: r.dims.k,
            m: r.dims.m,
            n: r.dims.n,
            determinant: &r.determinant,
            tuples: &r.tuples,
            grouped_signed_sum: &r.grouped_signed_sum,
            streamed_tuples: r.stream.as_ref().map(|s| s.tuples),
            streamed_signed_sum: r.stream.as_ref().map(|s| s.signed_sum),
            lgv_fixed_points: r.stream.as_ref().map(|s| s.fixed_points),
            lgv_involution_ok: r
                .stream
                .as_ref()
                .map(|s| s.involution_ok)
                .or(r.sample.as_ref().map(|s| s.involution_ok)),
            sampled_tuples: r.sample.as_ref().map(|s| s.samples),
            survivors: r.survivors,
            survivor_signed_sum: r.survivor_signed_sum,
            agree: r.agree,
        }]),
    }
}
