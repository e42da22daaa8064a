//! Random parameter and target draws.

use rand::Rng;

use crate::catalog::{build_family, FamilyId, ParamVector, PlaneMap};
use crate::error::{Error, Result};
use crate::solver::{preimages, PreimageSet, TargetPoint};

pub const PARAM_RANGE: f64 = 2.0;
pub const TARGET_RANGE: f64 = 5.0;
/// Draws attempted before giving up on finding a non-caustic target.
pub const MAX_REJECTIONS: usize = 1000;

/// Every parameter of `id` uniform in `[-2, 2]`.
pub fn random_params<R: Rng + ?Sized>(id: &FamilyId, rng: &mut R) -> ParamVector {
    let mut p = ParamVector::new();
    for name in id.param_names() {
        p.set(&name, rng.gen_range(-PARAM_RANGE..=PARAM_RANGE));
    }
    p
}

/// Uniform in `[-5, 5]^2`.
pub fn random_target<R: Rng + ?Sized>(rng: &mut R) -> TargetPoint {
    TargetPoint::new(
        rng.gen_range(-TARGET_RANGE..=TARGET_RANGE),
        rng.gen_range(-TARGET_RANGE..=TARGET_RANGE),
    )
}

/// One random instance together with the solver outcome.
#[derive(Debug, Clone)]
pub struct Draw {
    pub map: PlaneMap,
    pub target: TargetPoint,
    pub result: Result<PreimageSet>,
    /// Caustic targets rejected before this draw.
    pub rejected: usize,
}

/// Draws params and target until the target is not near-caustic. Other
/// solver errors (such as `DegenerateSystem`) are kept in the draw.
pub fn draw_noncaustic<R: Rng + ?Sized>(id: &FamilyId, rng: &mut R) -> Draw {
    let mut rejected = 0;
    loop {
        let params = random_params(id, rng);
        let map = build_family(id, &params).expect("sampled params match the family");
        let target = random_target(rng);
        let result = preimages(&map, target);
        let caustic = matches!(result, Err(Error::CausticTarget { .. }));
        if !caustic || rejected + 1 >= MAX_REJECTIONS {
            return Draw {
                map,
                target,
                result,
                rejected,
            };
        }
        rejected += 1;
    }
}

/// A non-caustic target for a fixed map.
pub fn noncaustic_target<R: Rng + ?Sized>(m: &PlaneMap, rng: &mut R) -> Result<(TargetPoint, PreimageSet)> {
    let mut last = None;
    for _ in 0..MAX_REJECTIONS {
        let s = random_target(rng);
        match preimages(m, s) {
            Ok(ps) => return Ok((s, ps)),
            Err(e @ Error::CausticTarget { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one draw"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{standard_families, Sign};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn params_in_range_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for id in standard_families() {
            let p = random_params(&id, &mut rng);
            p.validate(&id).unwrap();
            assert!(p.iter().all(|(_, v)| v.re.abs() <= 2.0 && v.im == 0.0));
        }
    }

    #[test]
    fn draws_are_reproducible() {
        let id = FamilyId::d(6, Sign::Minus).unwrap();
        let a = draw_noncaustic(&id, &mut ChaCha8Rng::seed_from_u64(9));
        let b = draw_noncaustic(&id, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a.target, b.target);
        assert_eq!(a.result, b.result);
        assert!(a.result.is_ok());
    }
}
