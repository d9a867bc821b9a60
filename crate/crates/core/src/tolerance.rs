use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every numeric threshold used by the crate.
///
/// - `rank_rel_tol`: a singular value counts toward the rank when it exceeds
///   this fraction of the reference scale (normally the largest singular value).
/// - `zero_abs_tol`: a hypothesis such as `EF^2 = 0` holds when the defect norm
///   is below this fraction of the problem scale.
/// - `residual_tol`: bound on the relative residuals of the g-Drazin defining
///   equations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rank_rel_tol: f64,
    pub zero_abs_tol: f64,
    pub residual_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-10,
            zero_abs_tol: 1e-10,
            residual_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_tol: f64, zero_abs_tol: f64, residual_tol: f64) -> Result<Self> {
        let cfg = Self {
            rank_rel_tol,
            zero_abs_tol,
            residual_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rank_rel_tol", self.rank_rel_tol),
            ("zero_abs_tol", self.zero_abs_tol),
            ("residual_tol", self.residual_tol),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    pub fn with_residual_tol(mut self, tol: f64) -> Result<Self> {
        self.residual_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rank_tol(mut self, tol: f64) -> Result<Self> {
        self.rank_rel_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_zero_tol(mut self, tol: f64) -> Result<Self> {
        self.zero_abs_tol = tol;
        self.validate()?;
        Ok(self)
    }
}
