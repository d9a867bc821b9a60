//! g-Drazin inverses of anti-triangular block matrices `[[E, I], [F, 0]]`.
//!
//! Closed-form block representations live in [`anti`]; every one of them is
//! checked against the pseudoinverse-based oracle in [`drazin`].

pub mod anti;
pub mod cli;
pub mod decomp;
pub mod drazin;
pub mod error;
pub mod io;
pub mod matrix;
pub mod tolerance;

pub use anti::{AntiTriangularInput, BlockQuadruple, ConditionReport, Method, SeriesOptions};
pub use drazin::{drazin_index, drazin_oracle, verify_gdrazin, DrazinResult, Residuals};
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use tolerance::ToleranceConfig;
