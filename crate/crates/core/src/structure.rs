//! Verdicts shared by the two structure engines: a module assembled from
//! class reductions, its graded blocks and its comparison with a target.

use serde::Serialize;

use crate::arith::LemmaParams;
use crate::error::Result;
use crate::gmod::{char_module, is_isomorphic, FpGModule, IsoVerdict};
use crate::group::TameGroup;

/// Per-level comparison of a graded block with `l(r mod e)`.
#[derive(Clone, Debug, Serialize)]
pub struct GradedCheck {
    pub level: i64,
    pub label: u64,
    pub isomorphic: bool,
    pub certificate_digest: Option<String>,
}

/// Compares each `g`-dimensional block starting at `offset` with `l(level)`.
pub fn graded_checks(
    group: &TameGroup,
    module: &FpGModule,
    levels: &[i64],
    offset: usize,
) -> Result<Vec<GradedCheck>> {
    let g = group.require_tower()?.g();
    levels
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let start = offset + i * g;
            let block = module.subquotient(start, start + g)?;
            let v = is_isomorphic(&block, &char_module(group, r)?, 0)?;
            Ok(GradedCheck {
                level: r,
                label: r.rem_euclid(group.e() as i64) as u64,
                isomorphic: v.isomorphic,
                certificate_digest: v.certificate_digest,
            })
        })
        .collect()
}

/// Assembled module, its graded blocks and the comparison with the target.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub kind: &'static str,
    pub params: LemmaParams,
    pub inflation: u64,
    pub levels: Vec<i64>,
    pub dim: usize,
    pub expected_dim: usize,
    /// Absolute `π`-adic precision the reductions were run at.
    pub precision: i64,
    pub graded: Vec<GradedCheck>,
    pub total: IsoVerdict,
    #[serde(skip)]
    pub module: FpGModule,
}

impl StructureReport {
    pub fn pass(&self) -> bool {
        self.dim == self.expected_dim
            && self.graded.iter().all(|c| c.isomorphic)
            && self.total.isomorphic
    }
}
