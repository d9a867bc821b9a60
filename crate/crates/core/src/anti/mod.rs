//! Closed-form g-Drazin inverses of `M = [[E, I], [F, 0]]` and its relatives.
//!
//! Two representations are provided:
//!
//! - [`anti_triangular_drazin_t23`] for pairs with `EF^2 = 0` and `EFE = 0`,
//!   producing the four blocks directly;
//! - [`anti_triangular_drazin_t26`] for the weaker `F^pi E F^2 = 0`,
//!   `F^pi E F E = 0`, producing four blocks plus a correction series.
//!
//! Every infinite series in these formulas is finite for matrices: each summand
//! carries a factor `E^k E^pi` or `F^k F^pi`, which vanishes once `k` reaches
//! the index. Series are summed exactly up to that point. [`SeriesOptions`]
//! can append further terms, which must not change the result.
//!
//! The ingredients `E^d`, `F^d`, `E^pi`, `F^pi` always come from
//! [`drazin_oracle`](crate::drazin::drazin_oracle).

mod conditions;
mod generate;
mod lemmas;
mod series;
mod t23;
mod t26;
mod transforms;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::drazin::{drazin_oracle, verify_gdrazin};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::ToleranceConfig;

pub use conditions::{check_t23, check_t26, coupling_norm, ConditionReport};
pub use generate::{
    generate_t23_instance, generate_t26_instance, random_annihilating_pair, random_triangular_triple,
    T23Family, T26Family,
};
pub use lemmas::{additive_drazin, additive_drazin_with, check_additive, triangular_drazin, triangular_drazin_with};
pub use t23::{anti_triangular_drazin_t23, anti_triangular_drazin_t23_with};
pub use t26::{anti_triangular_drazin_t26, anti_triangular_drazin_t26_with, T26Output};
pub use transforms::{
    anti_triangular_flipped, anti_triangular_flipped_explicit, anti_triangular_flipped_with, drazin_by_method,
    drazin_by_method_with, flipped_from_block_inverse,
    second_order_from_block_inverse, second_order_transform, second_order_transform_with, MethodResult,
};

/// Which representation produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    T23,
    T26,
    Oracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::T23 => "t23",
            Method::T26 => "t26",
            Method::Oracle => "oracle",
        }
    }
}

/// Knobs for series evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SeriesOptions {
    /// Terms appended after the last one that can be nonzero.
    pub extra_terms: usize,
}

impl SeriesOptions {
    pub fn padded(extra_terms: usize) -> Self {
        Self { extra_terms }
    }
}

/// The pair `(E, F)` defining `M = [[E, I], [F, 0]]`.
#[derive(Clone, Debug)]
pub struct AntiTriangularInput {
    e: ComplexMatrix,
    f: ComplexMatrix,
    cfg: ToleranceConfig,
    verify: bool,
}

impl AntiTriangularInput {
    pub fn new(e: ComplexMatrix, f: ComplexMatrix, cfg: ToleranceConfig) -> Result<Self> {
        cfg.validate()?;
        let n = e.require_square("anti_triangular_input")?;
        f.require_square("anti_triangular_input")?;
        e.require_same_shape(&f, "anti_triangular_input")?;
        if n == 0 {
            return Err(Error::Empty {
                op: "anti_triangular_input",
            });
        }
        Ok(Self {
            e,
            f,
            cfg,
            verify: false,
        })
    }

    /// `E = [[1, 0], [0, 0]]`, `F = [[0, 1], [0, 0]]`: satisfies `EF^2 = 0`
    /// and `EFE = 0` while `EF = F != 0`.
    pub fn reference_pair() -> Self {
        let e = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]).expect("finite");
        let f = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).expect("finite");
        Self::new(e, f, ToleranceConfig::default()).expect("valid pair")
    }

    /// Request verification of formula outputs. Debug builds always verify.
    pub fn with_verification(mut self, verify: bool) -> Self {
        self.verify = verify;
        self
    }

    pub fn with_config(mut self, cfg: ToleranceConfig) -> Result<Self> {
        cfg.validate()?;
        self.cfg = cfg;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.e.rows()
    }

    pub fn e(&self) -> &ComplexMatrix {
        &self.e
    }

    pub fn f(&self) -> &ComplexMatrix {
        &self.f
    }

    pub fn cfg(&self) -> &ToleranceConfig {
        &self.cfg
    }

    pub(crate) fn verifies(&self) -> bool {
        self.verify || cfg!(debug_assertions)
    }

    /// `[[E, I], [F, 0]]`
    pub fn block_matrix(&self) -> ComplexMatrix {
        let n = self.n();
        ComplexMatrix::from_blocks(&self.e, &ComplexMatrix::identity(n), &self.f, &ComplexMatrix::zeros(n, n))
            .expect("conformable blocks")
    }

    /// `[[E, F], [I, 0]]`
    pub fn flipped_matrix(&self) -> ComplexMatrix {
        let n = self.n();
        ComplexMatrix::from_blocks(&self.e, &self.f, &ComplexMatrix::identity(n), &ComplexMatrix::zeros(n, n))
            .expect("conformable blocks")
    }

    /// `[[E, -F], [-I, 0]]`
    pub fn second_order_matrix(&self) -> ComplexMatrix {
        let n = self.n();
        let minus_i = ComplexMatrix::identity(n).scale(Complex64::new(-1.0, 0.0));
        ComplexMatrix::from_blocks(&self.e, &-&self.f, &minus_i, &ComplexMatrix::zeros(n, n))
            .expect("conformable blocks")
    }

    /// `(1 + |E|)(1 + |F|)^2`, the scale against which "= 0" hypotheses are tested.
    pub fn condition_scale(&self) -> f64 {
        let f = 1.0 + self.f.frobenius_norm();
        (1.0 + self.e.frobenius_norm()) * f * f
    }
}

/// Four `n x n` blocks of a `2n x 2n` matrix.
#[derive(Clone, Debug)]
pub struct BlockQuadruple {
    pub b11: ComplexMatrix,
    pub b12: ComplexMatrix,
    pub b21: ComplexMatrix,
    pub b22: ComplexMatrix,
    pub source: Method,
}

impl BlockQuadruple {
    pub fn assemble(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&self.b11, &self.b12, &self.b21, &self.b22).expect("blocks are n x n")
    }

    pub fn split(m: &ComplexMatrix, source: Method) -> Self {
        let n = m.rows() / 2;
        Self {
            b11: m.block(0, 0, n, n),
            b12: m.block(0, n, n, n),
            b21: m.block(n, 0, n, n),
            b22: m.block(n, n, n, n),
            source,
        }
    }
}

/// `E^d, E^pi, i(E)` and the same for `F`, all from the oracle.
pub(crate) struct Ingredients {
    pub ed: ComplexMatrix,
    pub ep: ComplexMatrix,
    pub s: usize,
    pub fd: ComplexMatrix,
    pub fp: ComplexMatrix,
    pub t: usize,
}

impl Ingredients {
    pub fn of(input: &AntiTriangularInput) -> Result<Self> {
        let e = drazin_oracle(input.e(), input.cfg())?;
        let f = drazin_oracle(input.f(), input.cfg())?;
        Ok(Self {
            ed: e.inverse,
            ep: e.projector,
            s: e.index,
            fd: f.inverse,
            fp: f.projector,
            t: f.index,
        })
    }
}

pub(crate) fn verify_if(
    enabled: bool,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
    context: &'static str,
) -> Result<()> {
    if !enabled {
        return Ok(());
    }
    let residuals = verify_gdrazin(a, b, cfg)?;
    if residuals.passed {
        Ok(())
    } else {
        Err(Error::Verification { context, residuals })
    }
}
