//! Gauge-fixing erasure decoders.
//!
//! The pipeline is: extract syndromes, peel isolated erasures, cluster what
//! is left, then per cluster fix X components stack by stack and Z
//! components either on the parent color code (partial mode) or stack by
//! stack (maximal mode). A decode fails when the residual error
//! anticommutes with a bare logical.

mod cluster;
mod peel;
mod stages;
mod syndrome;

pub use cluster::{cluster, Cluster};
pub use peel::{peel, PeelOutcome};
pub use stages::{cc_erasure_decode, correct_x, correct_z_gauge, correct_z_plain};
pub use syndrome::{extract_syndrome, extract_syndrome_dense, w2_pauli, SyndromeSet};

pub use crate::schedule::Mode;

use serde::Serialize;

use crate::code::TsccCode;
use crate::erasure::ErasurePattern;
use crate::error::Result;
use crate::pauli::PauliOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    None,
    Logical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub estimate: PauliOperator,
    pub failed: bool,
    pub failure_kind: FailureKind,
}

/// Knobs that do not change the verdict; exposed for testing that claim.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Process clusters from last to first.
    pub reverse_clusters: bool,
    /// In maximal mode, run the Z stage before the X stage.
    pub z_first: bool,
}

/// True iff `residual` anticommutes with one of the code's bare logicals.
pub fn is_logical_failure(code: &TsccCode, residual: &PauliOperator) -> bool {
    code.logicals.iter().any(|l| !l.commutes(residual))
}

pub fn decode(code: &TsccCode, mode: Mode, pattern: &ErasurePattern) -> Result<DecodeOutcome> {
    decode_with(code, mode, pattern, DecodeOptions::default())
}

pub fn decode_with(
    code: &TsccCode,
    mode: Mode,
    pattern: &ErasurePattern,
    options: DecodeOptions,
) -> Result<DecodeOutcome> {
    let mut syn = extract_syndrome(code, mode, pattern.error());
    let peeled = peel(code, pattern.erased(), &mut syn);
    let mut clusters = cluster(code, &peeled.remaining);
    if options.reverse_clusters {
        clusters.reverse();
    }
    let mut estimate = peeled.estimate;
    for cl in &clusters {
        match mode {
            Mode::Partial => {
                estimate *= &correct_x(code, cl, &mut syn)?;
                estimate *= &correct_z_plain(code, cl, &mut syn)?;
            }
            Mode::Maximal if options.z_first => {
                estimate *= &correct_z_gauge(code, cl, &mut syn)?;
                estimate *= &correct_x(code, cl, &mut syn)?;
            }
            Mode::Maximal => {
                estimate *= &correct_x(code, cl, &mut syn)?;
                estimate *= &correct_z_gauge(code, cl, &mut syn)?;
            }
        }
    }
    let failed = is_logical_failure(code, &(pattern.error() * &estimate));
    Ok(DecodeOutcome {
        estimate,
        failed,
        failure_kind: if failed {
            FailureKind::Logical
        } else {
            FailureKind::None
        },
    })
}
