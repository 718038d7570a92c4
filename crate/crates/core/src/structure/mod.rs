//! Structural facts about the continued fraction of `g_d`.
//!
//! Everything here is checked against the Euclidean oracle in
//! [`crate::contfrac`]: convergents of `h_d` and `u_d` are transported to
//! `g_d`, convergents of `g_d` are classified back to their sources, and the
//! monic recurrence coefficients `beta_n` are extracted and tested against
//! closed-form relations.

mod identities;
mod theorem2;
mod transport;
mod wellapprox;

pub use identities::{verify_identity, Identity, IdentityFailure, IdentityReport};
pub use theorem2::{bzz_beta, sub_leading_coeffs, theorem2_from_monic, theorem2_sequence, BetaSequence, Theorem2Output};
pub use transport::{
    lemma33_map, theorem1_classify, transport, Classification, Direction, Origin, TransportedConvergent,
};
pub use wellapprox::{rational_equivalence_window, wellapprox_witness, RateRow, WellApproxReport, WindowReport};

use crate::contfrac::{expand_family, monic_normalize, CfError, CfExpansion, MonicCf, PrecisionPolicy};
use crate::laurent::{LaurentError, SeriesKind, TruncatedLaurentSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("measured rate {measured} is below the bound {bound}")]
    RateViolation { measured: i64, bound: i64 },
    #[error("rate {measured} vs bound {bound} contradicts the divisibility condition ({condition})")]
    ExactnessViolation { measured: i64, bound: i64, condition: bool },
    #[error("convergent {0} of g_d has no source")]
    ClassificationFailure(usize),
    #[error("monic recurrence shape fails at index {0}")]
    ShapeViolation(usize),
    #[error("beta_{0} is zero")]
    ZeroDenominator(usize),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

impl StructureError {
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            StructureError::Cf(CfError::InsufficientPrecision { .. } | CfError::PrecisionCapReached { .. })
                | StructureError::Laurent(LaurentError::InsufficientPrecision { .. })
                | StructureError::Cf(CfError::Laurent(LaurentError::InsufficientPrecision { .. }))
        )
    }
}

/// Expansions of `g_d`, `h_d` and `u_d` deep enough to relate `n`
/// convergents of `g_d` to their sources.
#[derive(Debug, Clone)]
pub struct FamilyData {
    pub d: u32,
    pub g: CfExpansion,
    pub g_series: TruncatedLaurentSeries,
    pub g_monic: MonicCf,
    pub h: CfExpansion,
    pub h_series: TruncatedLaurentSeries,
    pub u: CfExpansion,
    pub u_series: TruncatedLaurentSeries,
}

impl FamilyData {
    pub fn compute(d: u32, n: usize) -> Result<Self, StructureError> {
        let policy = PrecisionPolicy::default();
        let (g, g_series) = expand_family(d, SeriesKind::G, n.max(1), policy)?;
        let g_monic = monic_normalize(&g)?;
        let top = g.convergents.last().map_or(0, |c| c.deg_q());
        let m = top / d as usize + 2;
        let (h, h_series) = expand_family(d, SeriesKind::H, m, policy)?;
        let (u, u_series) = expand_family(d, SeriesKind::U, m, policy)?;
        Ok(Self { d, g, g_series, g_monic, h, h_series, u, u_series })
    }
}
