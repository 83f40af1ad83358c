//! Trace functions of intertwiners and the characterization of their span: the condition
//! checker, the constructive decomposition and the supporting counts.

mod conditions;
mod counting;
mod decompose;
mod series;

pub use conditions::{
    check_conditions, check_conditions_with, solution_space, Cond1Report, Cond2Entry, Cond2Report, Cond3Entry,
    Cond3Report, ConditionReport,
};
pub use counting::{
    dimension_count, function_rank, has_double_root_weight, orbit_box, small_v_check, trace_family, DimensionCount,
    SmallVReport,
};
pub use decompose::{decompose, decompose_with, reconstruct, Decomposition, DecompositionTerm, TraceCache};
pub use series::{verma_trace_series, SeriesReport};

use crate::error::Result;
use crate::intertwiner::{HomSpace, Intertwiner};
use crate::torus::TorusFunction;

/// Weighted trace of an intertwiner, the image of `phi` under the restriction map.
pub fn res_trace(hom: &HomSpace, phi: &Intertwiner) -> Result<TorusFunction> {
    hom.trace(phi)
}
