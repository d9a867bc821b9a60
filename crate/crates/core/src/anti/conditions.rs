use serde::{Deserialize, Serialize};

use super::AntiTriangularInput;
use crate::drazin::drazin_oracle;
use crate::error::Result;
use crate::matrix::ComplexMatrix;

/// Outcome of testing one `X = 0` hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition_name: String,
    /// Frobenius norm of the product that should vanish.
    pub defect_norm: f64,
    /// `zero_abs_tol * (1 + |E|)(1 + |F|)^2`
    pub threshold: f64,
    pub holds: bool,
}

impl ConditionReport {
    pub(crate) fn new(name: &str, defect: &ComplexMatrix, threshold: f64) -> Self {
        let defect_norm = defect.frobenius_norm();
        Self {
            condition_name: name.to_string(),
            defect_norm,
            threshold,
            holds: defect_norm <= threshold,
        }
    }
}

pub(crate) fn all_hold(reports: &[ConditionReport]) -> bool {
    reports.iter().all(|r| r.holds)
}

/// `EF^2 = 0` and `EFE = 0`.
pub fn check_t23(input: &AntiTriangularInput) -> [ConditionReport; 2] {
    let (e, f) = (input.e(), input.f());
    let threshold = input.cfg().zero_abs_tol * input.condition_scale();
    let ef = e * f;
    [
        ConditionReport::new("EF^2 = 0", &(&ef * f), threshold),
        ConditionReport::new("EFE = 0", &(&ef * e), threshold),
    ]
}

/// `F^pi E F^2 = 0` and `F^pi E F E = 0`, with `F^pi` from the oracle.
pub fn check_t26(input: &AntiTriangularInput) -> Result<[ConditionReport; 2]> {
    let fp = drazin_oracle(input.f(), input.cfg())?.projector;
    Ok(check_t26_with_projector(input, &fp))
}

pub(crate) fn check_t26_with_projector(input: &AntiTriangularInput, fp: &ComplexMatrix) -> [ConditionReport; 2] {
    let (e, f) = (input.e(), input.f());
    let threshold = input.cfg().zero_abs_tol * input.condition_scale();
    let fpef = &(fp * e) * f;
    [
        ConditionReport::new("F^pi E F^2 = 0", &(&fpef * f), threshold),
        ConditionReport::new("F^pi E F E = 0", &(&fpef * e), threshold),
    ]
}

/// `|EF|`, reported alongside the checks; the closed forms do not need `EF = 0`.
pub fn coupling_norm(input: &AntiTriangularInput) -> f64 {
    (input.e() * input.f()).frobenius_norm()
}
