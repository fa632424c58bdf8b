//! Worked example algebras: finite powerset semilattices and a Boolean
//! algebra, plus symbolic project schedules, integers and Gaussian integers.

pub mod boolean;
pub mod gaussian;
pub mod integers;
pub mod pert;
pub mod semilattice;

use crate::commutativity::{SampledLaw, SampledWitness};
use crate::error::Result;

/// Runs `case` for `samples` indices, stopping at the first failure it
/// reports as `Some((inputs, lhs, rhs))`.
pub(crate) fn sampled_law(
    law: &str,
    samples: u64,
    mut case: impl FnMut(u64) -> Result<Option<(Vec<String>, String, String)>>,
) -> Result<SampledLaw> {
    for k in 0..samples {
        if let Some((inputs, lhs, rhs)) = case(k)? {
            return Ok(SampledLaw {
                law: law.to_string(),
                samples: k + 1,
                witness: Some(SampledWitness {
                    sample: k,
                    inputs: vec![inputs],
                    lhs,
                    rhs,
                }),
            });
        }
    }
    Ok(SampledLaw {
        law: law.to_string(),
        samples,
        witness: None,
    })
}

/// `Some(witness)` when `lhs != rhs`.
pub(crate) fn differ<T: PartialEq + std::fmt::Display>(
    inputs: impl FnOnce() -> Vec<String>,
    lhs: T,
    rhs: T,
) -> Option<(Vec<String>, String, String)> {
    (lhs != rhs).then(|| (inputs(), lhs.to_string(), rhs.to_string()))
}
