//! Zero-localization disks and the simple-zeros verdict.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::certify::{certify_localization, Certificate};
use crate::error::{Error, Result};
use crate::norm::NormParameter;
use crate::poly::MonicPolynomial;
use crate::simul::{step_quantities, ApproximationVector};

/// Disjointness slack below which a pair of disks is reported as near-tangent.
pub const TANGENCY_SLACK: f64 = 1e-14;

/// `{z : |z - center| <= radius}` with `center = z_i - W_i` and `radius = C |W_i|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InclusionDisk {
    #[serde(with = "crate::fmt::complex")]
    pub center: Complex64,
    #[serde(with = "crate::fmt::float")]
    pub radius: f64,
}

impl InclusionDisk {
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }

    pub fn contains_strictly(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// Common radius ratio `C = theta lambda / (1 - theta lambda^2)`.
pub fn radius_ratio(cert: &Certificate) -> Result<f64> {
    if !cert.satisfied {
        return Err(Error::CertificateNotSatisfied {
            e: cert.e0,
            lambda: cert.lambda,
        });
    }
    let (lambda, theta) = match (cert.lambda, cert.theta) {
        (Some(l), Some(t)) => (l, t),
        _ => {
            return Err(Error::CertificateNotSatisfied {
                e: cert.e0,
                lambda: cert.lambda,
            })
        }
    };
    let tl2 = theta * lambda * lambda;
    if !(tl2 < 1.0) {
        return Err(Error::CertificateDegenerate(tl2));
    }
    Ok(theta * lambda / (1.0 - tl2))
}

/// The `n` inclusion disks at `z0`; requires the localization certificate.
pub fn inclusion_disks(
    f: &MonicPolynomial,
    z0: &ApproximationVector,
    norm: NormParameter,
) -> Result<Vec<InclusionDisk>> {
    let cert = certify_localization(f, z0, norm)?;
    let ratio = radius_ratio(&cert)?;
    let q = step_quantities(f, z0, norm)?;
    Ok(z0
        .points()
        .iter()
        .zip(&q.w)
        .map(|(z, w)| InclusionDisk {
            center: z - w,
            radius: ratio * w.norm(),
        })
        .collect())
}

/// `true` when the localization condition certifies that every zero of `f`
/// is simple. `false` only means "not certified".
pub fn simplicity_verdict(
    f: &MonicPolynomial,
    z0: &ApproximationVector,
    norm: NormParameter,
) -> Result<bool> {
    Ok(certify_localization(f, z0, norm)?.satisfied)
}

/// Geometry of a disk family checked against known zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskCheck {
    /// `|c_i - c_j| > r_i + r_j` for every pair.
    pub disjoint: bool,
    /// Smallest `|c_i - c_j| - (r_i + r_j)` over all pairs.
    #[serde(with = "crate::fmt::float")]
    pub min_slack: f64,
    /// Some pair has slack below [`TANGENCY_SLACK`].
    pub near_tangent: bool,
    /// `assignment[k]` is the disk holding root `k`, when each disk holds
    /// exactly one root.
    pub assignment: Option<Vec<usize>>,
    /// Every root lies in the interior of its assigned disk.
    pub strictly_inside: bool,
}

impl DiskCheck {
    pub fn ok(&self) -> bool {
        self.disjoint && self.assignment.is_some()
    }
}

/// Verifies disjointness and assigns each root to its nearest center, then
/// checks that the assignment is a bijection with every root inside its disk.
pub fn check_disks(disks: &[InclusionDisk], roots: &[Complex64]) -> DiskCheck {
    let mut min_slack = f64::INFINITY;
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let gap = (disks[i].center - disks[j].center).norm();
            min_slack = min_slack.min(gap - (disks[i].radius + disks[j].radius));
        }
    }
    let disjoint = min_slack > 0.0;

    let nearest: Vec<usize> = roots
        .iter()
        .map(|r| {
            (0..disks.len())
                .min_by(|&a, &b| {
                    (r - disks[a].center)
                        .norm()
                        .total_cmp(&(r - disks[b].center).norm())
                })
                .unwrap_or(0)
        })
        .collect();
    let mut used = vec![false; disks.len()];
    let mut bijective = roots.len() == disks.len();
    for &k in &nearest {
        bijective &= !std::mem::replace(&mut used[k], true);
    }
    let inside = nearest
        .iter()
        .zip(roots)
        .all(|(&k, &r)| disks[k].contains(r));
    let strictly_inside = bijective
        && nearest
            .iter()
            .zip(roots)
            .all(|(&k, &r)| disks[k].contains_strictly(r));

    DiskCheck {
        disjoint,
        min_slack,
        near_tangent: min_slack < TANGENCY_SLACK,
        assignment: (bijective && inside).then_some(nearest),
        strictly_inside,
    }
}
