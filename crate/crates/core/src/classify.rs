//! Numerical dimension regimes read off from the positive part.
//!
//! The decomposition's positive part `P` determines the regime through the
//! sign of `q(P)` and whether `P` vanishes; incomplete-model diagnostics
//! make the verdict unreliable and force [`Regime::Indeterminate`].

use crate::model::{DivisorClass, HKModel};
use crate::rat::{serde_rat, Rat};
use crate::zariski::{decompose, Decomposition, ZariskiError};
use num_traits::Signed;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `P = 0`: the class carries no positive part at all.
    Zero,
    /// `P ≠ 0` with `q(P) = 0`: positive part on the boundary null ray.
    NullCandidate,
    /// `q(P) > 0`: positive part in the interior of the positive cone.
    Maximal,
    /// Diagnostics fired during decomposition, so the positive part is not
    /// certified to lie in the closed positive cone.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub regime: Regime,
    #[serde(rename = "qP", with = "serde_rat")]
    pub q_p: Rat,
    pub decomposition: Decomposition,
}

/// Decomposes `D` and classifies it by the square of its positive part.
pub fn d_dimension_class(m: &HKModel, d: &DivisorClass) -> Result<ClassReport, ZariskiError> {
    let decomposition = decompose(m, d)?;
    let p = decomposition.positive_part();
    let q_p = m.q_square(p);
    let regime = if !decomposition.has_clean_diagnostics() {
        Regime::Indeterminate
    } else if p.is_zero() {
        Regime::Zero
    } else if q_p.is_positive() {
        Regime::Maximal
    } else {
        Regime::NullCandidate
    };
    Ok(ClassReport {
        regime,
        q_p,
        decomposition,
    })
}
