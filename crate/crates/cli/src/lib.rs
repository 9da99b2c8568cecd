//! Campaign orchestration behind the `fpcqaoa` binary: generate benchmark
//! instances, run paired QAOA / FPC-QAOA optimizations, aggregate enhancement
//! ratios and iteration counts, and wrap the random-sampling baseline.

// Guards like `!(x > 0.0)` are deliberate: they reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod campaign;
pub mod report;

pub use campaign::{
    baseline_record, cmd_generate, cmd_run, BaselineOutput, CampaignSpec, Family, RunOutcome,
    SummaryRow,
};
pub use report::{cmd_report, EtaReportRow, IterReportRow};

/// FNV-1a 64-bit content hash, hex-encoded; identifies instance files in
/// summary rows so paired runs provably reference the same bytes.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}
