//! Magnifications as residues and the numeric check of the global residue
//! theorem.

use serde::{Deserialize, Serialize};

use crate::catalog::{assigned_weights, FamilyId, PlaneMap, Weights};
use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::solver::{preimages, PreimageSet, TargetPoint};
use crate::wproj::{homogenize, roots_at_infinity, weighted_degree, InfinityPoint};
use crate::C64;

/// Relative tolerance of the affine residue sum against the largest single
/// residue.
pub const GRT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrtVerdict {
    /// No common roots at infinity and `h = 1`.
    VanishesByNoRootsAtInfinity,
    /// No common roots at infinity and `deg_w h < d1 + d2 - a0 - a1` for a
    /// non-constant `h`.
    VanishesByDegreeCriterion,
    Inconclusive,
}

impl GrtVerdict {
    pub fn guarantees_vanishing(self) -> bool {
        self != GrtVerdict::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub family: FamilyId,
    pub target: TargetPoint,
    pub weights: Weights,
    #[serde(with = "crate::complex_serde")]
    pub affine_residue_sum: C64,
    /// Largest `|h(x_i, y_i) / J_i|`, the scale of the tolerance.
    pub max_abs_residue: f64,
    pub infinity_roots: Vec<InfinityPoint>,
    pub grt_verdict: GrtVerdict,
    /// Weighted degree of the numerator (`0` for `h = 1`).
    pub numerator_degree: u32,
    pub degree_bound: i64,
}

impl ResidueReport {
    /// `|sum| <= GRT_REL_TOL * max(1, max |residue|)`.
    pub fn sum_within_tolerance(&self) -> bool {
        self.affine_residue_sum.norm() <= GRT_REL_TOL * self.max_abs_residue.max(1.0)
    }

    /// A vanishing verdict confirmed by the numeric sum.
    pub fn confirmed(&self) -> bool {
        self.grt_verdict.guarantees_vanishing() && self.sum_within_tolerance()
    }
}

/// Residue of `dx dy / ((f1 - s1)(f2 - s2))` at a simple common root:
/// `1 / det Jac`.
pub fn residue_at_root(m: &PlaneMap, x: C64, y: C64) -> Result<C64> {
    let j = m.jacobian_det(x, y);
    if j.norm() < 1e-6 * m.jacobian_scale() {
        return Err(Error::NonSimpleRoot(j.norm()));
    }
    Ok(j.inv())
}

/// `deg_w h < d1 + d2 - a0 - a1`.
pub fn degree_criterion(h_deg: u32, d1: u32, d2: u32, w: Weights) -> bool {
    (h_deg as i64) < degree_bound(d1, d2, w)
}

fn degree_bound(d1: u32, d2: u32, w: Weights) -> i64 {
    d1 as i64 + d2 as i64 - w.a0 as i64 - w.a1 as i64
}

/// Sums `h / J` over all complex pre-images of `s` and decides whether the
/// sum is guaranteed to vanish in the family's assigned weights.
pub fn verify_grt(m: &PlaneMap, s: TargetPoint, h: Option<&BiPoly>) -> Result<ResidueReport> {
    verify_grt_in(m, s, h, assigned_weights(m.family()))
}

/// As [`verify_grt`] with explicit weights.
pub fn verify_grt_in(m: &PlaneMap, s: TargetPoint, h: Option<&BiPoly>, w: Weights) -> Result<ResidueReport> {
    let ps = preimages(m, s)?;
    report_from(m, &ps, h, w)
}

/// Builds the report from an already solved pre-image set.
pub fn report_from(m: &PlaneMap, ps: &PreimageSet, h: Option<&BiPoly>, w: Weights) -> Result<ResidueReport> {
    let residues: Vec<C64> = ps
        .preimages
        .iter()
        .map(|p| match h {
            Some(h) => h.eval(p.x, p.y) * p.magnification,
            None => p.magnification,
        })
        .collect();
    let affine_residue_sum: C64 = residues.iter().sum();
    let max_abs_residue = residues.iter().map(|r| r.norm()).fold(0.0, f64::max);

    let hp = homogenize(m, ps.target, w);
    let infinity_roots = roots_at_infinity(&hp)?;
    let numerator_degree = match h {
        Some(h) if !h.is_zero() => weighted_degree(h, w)?,
        _ => 0,
    };
    let is_unit = h.is_none_or(|h| h.degree() == Some(0));
    let grt_verdict = if !infinity_roots.is_empty() || !degree_criterion(numerator_degree, hp.d1, hp.d2, w) {
        GrtVerdict::Inconclusive
    } else if is_unit {
        GrtVerdict::VanishesByNoRootsAtInfinity
    } else {
        GrtVerdict::VanishesByDegreeCriterion
    };
    Ok(ResidueReport {
        family: m.family().clone(),
        target: ps.target,
        weights: w,
        affine_residue_sum,
        max_abs_residue,
        infinity_roots,
        grt_verdict,
        numerator_degree,
        degree_bound: degree_bound(hp.d1, hp.d2, w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_family, standard_families, ParamVector, Sign};
    use crate::solver::{total_signed_magnification, SumMode};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn w321() -> Weights {
        Weights::new(3, 2, 1).unwrap()
    }

    fn e7() -> PlaneMap {
        let p = ParamVector::new()
            .with("c1", -0.6)
            .with("c2", 1.3)
            .with("c3", 0.2)
            .with("c4", -1.4);
        build_family(&FamilyId::e7(), &p).unwrap()
    }

    #[test]
    fn degree_criterion_examples() {
        assert!(degree_criterion(7, 6, 7, w321()));
        assert!(!degree_criterion(8, 6, 7, w321()));
        for id in standard_families() {
            let p = id.param_names().iter().fold(ParamVector::new(), |p, n| p.with(n, 0.5));
            let m = build_family(&id, &p).unwrap();
            let (d1, d2) = m.degrees();
            assert!(degree_criterion(0, d1, d2, m.weights()), "{id}");
        }
    }

    #[test]
    fn degree_criterion_is_monotone() {
        for k in 0..20 {
            if degree_criterion(k, 6, 7, w321()) {
                assert!((0..k).all(|j| degree_criterion(j, 6, 7, w321())));
            }
        }
    }

    #[test]
    fn fold_residue() {
        let m = build_family(&FamilyId::a(2, Sign::Plus, Sign::Plus).unwrap(), &ParamVector::new()).unwrap();
        assert!((residue_at_root(&m, c(2.0 / 3.0), c(-1.0)).unwrap() - c(-1.0 / 16.0)).norm() < 1e-15);
        assert!(matches!(residue_at_root(&m, c(0.0), c(0.0)), Err(Error::NonSimpleRoot(_))));
    }

    #[test]
    fn d5_unit_numerator_vanishes() {
        let p = ParamVector::new().with("c2", -0.4).with("c3", 1.1);
        let m = build_family(&FamilyId::d(5, Sign::Plus).unwrap(), &p).unwrap();
        let s = TargetPoint::new(1.7, -0.9);
        let r = verify_grt(&m, s, None).unwrap();
        assert_eq!(r.grt_verdict, GrtVerdict::VanishesByNoRootsAtInfinity);
        assert!(r.affine_residue_sum.norm() < 1e-9 * r.max_abs_residue.max(1.0));
        assert!(r.confirmed());
        let ps = preimages(&m, s).unwrap();
        assert_eq!(r.affine_residue_sum, total_signed_magnification(&ps, SumMode::AllComplex));
    }

    #[test]
    fn d5_in_cp2_is_inconclusive() {
        let p = ParamVector::new().with("c2", -0.4).with("c3", 1.1);
        let m = build_family(&FamilyId::d(5, Sign::Plus).unwrap(), &p).unwrap();
        let r = verify_grt_in(&m, TargetPoint::new(1.7, -0.9), None, Weights::projective()).unwrap();
        assert_eq!(r.grt_verdict, GrtVerdict::Inconclusive);
        assert_eq!(r.infinity_roots.len(), 1);
    }

    #[test]
    fn e7_numerator_degrees() {
        let m = e7();
        let s = TargetPoint::new(0.8, 2.1);
        // x y^2 has weighted degree 3 + 4 = 7.
        let h7 = BiPoly::from_real_terms([(1, 2, 1.0)]);
        let r = verify_grt(&m, s, Some(&h7)).unwrap();
        assert_eq!(r.numerator_degree, 7);
        assert_eq!(r.grt_verdict, GrtVerdict::VanishesByDegreeCriterion);
        assert!(r.affine_residue_sum.norm() < 1e-9 * r.max_abs_residue.max(1.0));

        let h8 = BiPoly::from_real_terms([(2, 1, 1.0)]);
        let r = verify_grt(&m, s, Some(&h8)).unwrap();
        assert_eq!(r.numerator_degree, 8);
        assert_eq!(r.grt_verdict, GrtVerdict::Inconclusive);
    }

    #[test]
    fn caustic_target_propagates() {
        let m = build_family(&FamilyId::a(2, Sign::Plus, Sign::Plus).unwrap(), &ParamVector::new()).unwrap();
        assert!(matches!(
            verify_grt(&m, TargetPoint::new(0.0, 0.0), None),
            Err(Error::CausticTarget { .. })
        ));
    }
}
