//! Verification harness: grids of identity instances, route cross-checks,
//! reports and SVG rendering.

pub mod report;
pub mod svg;
pub mod verify;

pub use report::{
    emit_determinant, emit_enumeration, emit_report, BijectionRecord, BudgetStatus, ClassRecord, DeterminantRecord,
    EnumerationRecord, ExponentSummary, Format, InstanceRecord, RouteFlags, SampleRecord, Status, StreamRecord,
    Summary, SurvivorCounts, VerificationReport, SCHEMA_VERSION,
};
pub use svg::{render_svg, RenderObject, SvgOptions};
pub use verify::{
    lgv_involution_holds_at, run_route_bijection, run_route_enumeration, verify_identities, verify_instance, Fault,
    Grid, VerifyOptions, SAMPLE_SIZE,
};
