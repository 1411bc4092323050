//! Per-degree threshold tables: the corollary radii next to the largest
//! certified radius and the conditions of earlier work.

use serde::{Deserialize, Serialize};

use crate::certify::{
    sup_certified_radius, threshold_corollary, CertificateKind, Corollary, MethodParams, PriorWork,
};
use crate::error::{Error, Result};
use crate::norm::NormParameter;

/// Largest degree accepted by [`threshold_table`].
pub const MAX_TABLE_DEGREE: usize = 10_000;

/// One row of the comparison table. Earlier conditions bound `||W||_inf` by
/// `C delta`, so their columns are only filled for `p = inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub n: usize,
    #[serde(with = "crate::fmt::opt_float")]
    pub ehrlich_corollary: Option<f64>,
    #[serde(with = "crate::fmt::float")]
    pub ehrlich_sup: f64,
    #[serde(with = "crate::fmt::opt_float")]
    pub petkovic_herceg_41: Option<f64>,
    #[serde(with = "crate::fmt::opt_float")]
    pub petkovic_herceg_42: Option<f64>,
    #[serde(with = "crate::fmt::opt_float")]
    pub nourein_corollary: Option<f64>,
    #[serde(with = "crate::fmt::float")]
    pub nourein_sup: f64,
    #[serde(with = "crate::fmt::opt_float")]
    pub nedic_2: Option<f64>,
    #[serde(with = "crate::fmt::opt_float")]
    pub nedic_3: Option<f64>,
}

impl ThresholdRow {
    /// `ehrlich_corollary >= petkovic_herceg_42`, when both exist.
    pub fn ehrlich_dominates(&self) -> Option<bool> {
        Some(self.ehrlich_corollary? >= self.petkovic_herceg_42?)
    }

    /// `nourein_corollary >= nedic_3`, when both exist.
    pub fn nourein_dominates(&self) -> Option<bool> {
        Some(self.nourein_corollary? >= self.nedic_3?)
    }

    /// `nourein_sup >= nedic_3`, when the latter exists.
    pub fn nourein_sup_dominates(&self) -> Option<bool> {
        Some(self.nourein_sup >= self.nedic_3?)
    }
}

fn corollary_for(kind: CertificateKind, n: usize, norm: NormParameter) -> Option<f64> {
    let candidates: &[Corollary] = match kind {
        CertificateKind::Ehrlich => &[
            Corollary::EhrlichInf,
            Corollary::EhrlichL1,
            Corollary::EhrlichLp,
        ],
        _ => &[
            Corollary::NoureinInf,
            Corollary::NoureinL1,
            Corollary::NoureinLp,
        ],
    };
    candidates
        .iter()
        .find_map(|&c| threshold_corollary(c, n, norm).ok())
}

pub fn threshold_row(n: usize, norm: NormParameter) -> Result<ThresholdRow> {
    let params = MethodParams::new(n, norm)?;
    let prior = |w: PriorWork| {
        if norm.is_inf() {
            w.threshold(n).ok()
        } else {
            None
        }
    };
    Ok(ThresholdRow {
        n,
        ehrlich_corollary: corollary_for(CertificateKind::Ehrlich, n, norm),
        ehrlich_sup: sup_certified_radius(CertificateKind::Ehrlich, &params)?,
        petkovic_herceg_41: prior(PriorWork::PetkovicHerceg41),
        petkovic_herceg_42: prior(PriorWork::PetkovicHerceg42),
        nourein_corollary: corollary_for(CertificateKind::Nourein, n, norm),
        nourein_sup: sup_certified_radius(CertificateKind::Nourein, &params)?,
        nedic_2: prior(PriorWork::Nedic2),
        nedic_3: prior(PriorWork::Nedic3),
    })
}

pub fn threshold_table(
    n_range: std::ops::RangeInclusive<usize>,
    norm: NormParameter,
) -> Result<Vec<ThresholdRow>> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo < 2 || hi > MAX_TABLE_DEGREE || lo > hi {
        return Err(Error::Parse(format!(
            "degree range {lo}..={hi} outside 2..={MAX_TABLE_DEGREE}"
        )));
    }
    n_range.map(|n| threshold_row(n, norm)).collect()
}

/// Degrees where a corollary radius falls below the earlier constant.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DominanceExceptions {
    pub ehrlich: Vec<usize>,
    pub nourein: Vec<usize>,
    pub nourein_sup: Vec<usize>,
}

pub fn dominance_exceptions(rows: &[ThresholdRow]) -> DominanceExceptions {
    let failing = |test: fn(&ThresholdRow) -> Option<bool>| {
        rows.iter()
            .filter(|r| test(r) == Some(false))
            .map(|r| r.n)
            .collect()
    };
    DominanceExceptions {
        ehrlich: failing(ThresholdRow::ehrlich_dominates),
        nourein: failing(ThresholdRow::nourein_dominates),
        nourein_sup: failing(ThresholdRow::nourein_sup_dominates),
    }
}
