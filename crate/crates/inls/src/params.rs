use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of the 3D radial energy-critical INLS.
///
/// The nonlinearity power is `p = 5 - 2b` and the half-power is
/// `p0 = (p - 1)/2 = 2 - b`.  Both are derived from `b` and kept
/// together so the relations cannot drift apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub b: f64,
    pub p: f64,
    pub p0: f64,
}

impl ProblemParams {
    /// Build the parameter set from the inhomogeneity exponent `b`.
    ///
    /// Requires `0 < b < 4/3`; the upper bound is the range on which the
    /// scattering/blowup dichotomy is formulated.
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b < 4.0 / 3.0) || !b.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "b must lie in (0, 4/3), got {b}"
            )));
        }
        Ok(ProblemParams {
            b,
            p: 5.0 - 2.0 * b,
            p0: 2.0 - b,
        })
    }
}
