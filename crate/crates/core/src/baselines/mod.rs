//! Comparison algorithms, the exact oracle for small instances and the
//! performance ratio against the scaled-capacity upper bound.

mod ldm;
mod oracle;
mod zsg;

pub use ldm::{ldm, LdmConfig, LdmReport};
pub use oracle::{brute_force_opt, OracleError, OracleGuards, OracleResult};
pub use zsg::zsg;

use crate::discretize::Combination;
use crate::lp::{build_upper_bound_lp, solve, LpError};
use crate::model::MecInstance;

/// Optimum of the combination program with every capacity scaled by φ.
pub fn upper_bound(inst: &MecInstance, combos: &[Combination], phi: f64) -> Result<f64, LpError> {
    if combos.is_empty() {
        return Ok(0.0);
    }
    Ok(solve(&build_upper_bound_lp(inst, combos, phi))?.objective)
}

/// `obj / bound`; defined as 1 when both are zero.
pub fn ratio_against(obj: f64, bound: f64) -> f64 {
    if bound <= 0.0 {
        if obj <= 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        obj / bound
    }
}

/// Saved energy relative to the upper-bound program built from `combos`.
pub fn performance_ratio(obj: f64, inst: &MecInstance, combos: &[Combination], phi: f64) -> Result<f64, LpError> {
    Ok(ratio_against(obj, upper_bound(inst, combos, phi)?))
}
