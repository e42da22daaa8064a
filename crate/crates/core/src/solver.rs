//! Pre-images of a target point and their magnifications.
//!
//! `f(x, y) = s` is reduced to one variable with a resultant, the univariate
//! roots are lifted back by solving each component in the eliminated
//! variable, and every candidate is polished with a 2x2 Newton iteration on
//! the original system.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{FamilyId, ParamVector, PlaneMap};
use crate::error::{Error, Result};
use crate::poly::{resultant_eliminate, uniroots, BiPoly, UniPoly, Var};
use crate::C64;

/// Target point `s = (s1, s2)`. Complex coordinates are accepted for testing
/// the algebra off the real plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetPoint {
    #[serde(with = "crate::complex_serde")]
    pub s1: C64,
    #[serde(with = "crate::complex_serde")]
    pub s2: C64,
}

impl TargetPoint {
    pub fn new(s1: f64, s2: f64) -> Self {
        TargetPoint {
            s1: C64::new(s1, 0.0),
            s2: C64::new(s2, 0.0),
        }
    }

    pub fn complex(s1: C64, s2: C64) -> Self {
        TargetPoint { s1, s2 }
    }

    pub fn is_real(&self) -> bool {
        self.s1.im == 0.0 && self.s2.im == 0.0
    }

    /// Euclidean norm `|s|`.
    pub fn norm(&self) -> f64 {
        (self.s1.norm_sqr() + self.s2.norm_sqr()).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Preimage {
    #[serde(with = "crate::complex_serde")]
    pub x: C64,
    #[serde(with = "crate::complex_serde")]
    pub y: C64,
    /// `1 / jac_det`.
    #[serde(with = "crate::complex_serde")]
    pub magnification: C64,
    #[serde(with = "crate::complex_serde")]
    pub jac_det: C64,
    /// `max(|f1 - s1|, |f2 - s2|)`.
    pub residual: f64,
    pub is_real: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageSet {
    pub family: FamilyId,
    pub params: ParamVector,
    pub target: TargetPoint,
    pub bezout_expected: usize,
    pub preimages: Vec<Preimage>,
}

impl PreimageSet {
    pub fn len(&self) -> usize {
        self.preimages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preimages.is_empty()
    }

    pub fn real_count(&self) -> usize {
        self.preimages.iter().filter(|p| p.is_real).count()
    }

    pub fn min_abs_jac(&self) -> f64 {
        self.preimages
            .iter()
            .map(|p| p.jac_det.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_magnification(&self) -> f64 {
        self.preimages
            .iter()
            .map(|p| p.magnification.norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumMode {
    /// Observable sum over real pre-images only.
    RealOnly,
    AllComplex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// A target is near-caustic when `min |det Jac| < caustic_rel * jacobian_scale`.
    pub caustic_rel: f64,
    /// Accepted residual, relative to `1 + |s|`.
    pub residual_rel: f64,
    /// Return the roots found instead of failing with `DegenerateSystem` or
    /// `CausticTarget`.
    pub lenient: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            caustic_rel: 1e-6,
            residual_rel: 1e-9,
            lenient: false,
        }
    }
}

const NEWTON_MAX_ITER: usize = 60;
const DEDUP_REL: f64 = 1e-7;
const REAL_REL: f64 = 1e-8;

/// All complex solutions of `m(x, y) = s` with default options.
pub fn preimages(m: &PlaneMap, s: TargetPoint) -> Result<PreimageSet> {
    preimages_with(m, s, &SolveOptions::default())
}

pub fn preimages_with(m: &PlaneMap, s: TargetPoint, opts: &SolveOptions) -> Result<PreimageSet> {
    let expected = m.bezout_count() as usize;
    let tol = opts.residual_rel * (1.0 + s.norm());

    let first = m.elimination_var();
    let mut roots = candidates(m, s, first, tol);
    if roots.len() != expected {
        log::debug!(
            "{}: {} roots eliminating {first:?}, retrying with {:?}",
            m.family(),
            roots.len(),
            first.other()
        );
        roots.extend(candidates(m, s, first.other(), tol));
        roots = dedup(roots);
    }

    let real_input = m.is_real() && s.is_real();
    if real_input {
        roots = symmetrize(m, s, roots);
    }

    let mut pre: Vec<Preimage> = roots
        .into_iter()
        .map(|(x, y, residual)| {
            let jac_det = m.jacobian_det(x, y);
            Preimage {
                x,
                y,
                magnification: jac_det.inv(),
                jac_det,
                residual,
                is_real: is_real_point(x, y),
            }
        })
        .collect();
    pre.sort_by(|a, b| {
        (b.is_real.cmp(&a.is_real))
            .then(a.x.re.total_cmp(&b.x.re))
            .then(a.y.re.total_cmp(&b.y.re))
            .then(a.x.im.total_cmp(&b.x.im))
            .then(a.y.im.total_cmp(&b.y.im))
    });

    let set = PreimageSet {
        family: m.family().clone(),
        params: m.params().clone(),
        target: s,
        bezout_expected: expected,
        preimages: pre,
    };
    if opts.lenient {
        return Ok(set);
    }
    let threshold = opts.caustic_rel * m.jacobian_scale();
    let min_jac = set.min_abs_jac();
    if min_jac < threshold {
        return Err(Error::CausticTarget { min_jac, threshold });
    }
    if set.len() != expected {
        return Err(Error::DegenerateSystem {
            found: set.len(),
            expected,
        });
    }
    Ok(set)
}

/// Solves many targets in parallel; results keep the input order.
pub fn preimages_batch(m: &PlaneMap, targets: &[TargetPoint], opts: &SolveOptions) -> Vec<Result<PreimageSet>> {
    targets.par_iter().map(|&s| preimages_with(m, s, opts)).collect()
}

/// `1 / det Jac` at `(x, y)`.
pub fn magnification(m: &PlaneMap, x: C64, y: C64) -> Result<C64> {
    let j = m.jacobian_det(x, y);
    if j.norm() < SolveOptions::default().caustic_rel * m.jacobian_scale() {
        return Err(Error::OnCriticalCurve(j.norm()));
    }
    Ok(j.inv())
}

pub fn total_signed_magnification(ps: &PreimageSet, mode: SumMode) -> C64 {
    ps.preimages
        .iter()
        .filter(|p| mode == SumMode::AllComplex || p.is_real)
        .map(|p| p.magnification)
        .sum()
}

/// `sum_i h(x_i, y_i) M_i` over all complex pre-images.
pub fn moment_sum(ps: &PreimageSet, h: &BiPoly) -> C64 {
    ps.preimages
        .iter()
        .map(|p| h.eval(p.x, p.y) * p.magnification)
        .sum()
}

/// Newton iteration for `m(x, y) = s` from `(x, y)`. Returns the final point
/// and its residual `max(|f1 - s1|, |f2 - s2|)` whether or not it converged.
pub fn newton_polish(m: &PlaneMap, s: TargetPoint, mut x: C64, mut y: C64, max_iter: usize) -> (C64, C64, f64) {
    let resid = |x: C64, y: C64| {
        let (a, b) = m.eval(x, y);
        (a - s.s1, b - s.s2)
    };
    let (mut r1, mut r2) = resid(x, y);
    let mut best = (x, y, r1.norm().max(r2.norm()));
    for _ in 0..max_iter {
        let j = m.jacobian(x, y);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.norm() == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (j[1][1] * r1 - j[0][1] * r2) / det;
        let dy = (j[0][0] * r2 - j[1][0] * r1) / det;
        x -= dx;
        y -= dy;
        (r1, r2) = resid(x, y);
        let r = r1.norm().max(r2.norm());
        if !r.is_finite() {
            break;
        }
        if r < best.2 {
            best = (x, y, r);
        }
        let step = dx.norm().max(dy.norm());
        if step <= 4.0 * f64::EPSILON * (1.0 + x.norm() + y.norm()) || r == 0.0 {
            break;
        }
    }
    best
}

fn is_real_point(x: C64, y: C64) -> bool {
    x.im.abs().max(y.im.abs()) <= REAL_REL * (1.0 + x.norm() + y.norm())
}

/// Candidate roots from eliminating `var`, polished and de-duplicated.
fn candidates(m: &PlaneMap, s: TargetPoint, var: Var, tol: f64) -> Vec<(C64, C64, f64)> {
    let p = m.f1() - &BiPoly::constant(s.s1);
    let q = m.f2() - &BiPoly::constant(s.s2);
    let res = match resultant_eliminate(&p, &q, var) {
        Ok(r) => r,
        Err(e) => {
            log::debug!("resultant eliminating {var:?} failed: {e}");
            return Vec::new();
        }
    };
    let Some(deg) = res.degree() else {
        log::debug!("resultant eliminating {var:?} vanishes identically");
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let Ok(outer) = uniroots(&res) else {
        return Vec::new();
    };
    let kept = var.other();
    let mut out = Vec::new();
    for root in outer.iter() {
        let v = root.value;
        for poly in [&p, &q] {
            let inner: UniPoly = poly.substitute(kept, v);
            if inner.degree().unwrap_or(0) == 0 {
                continue;
            }
            let Ok(us) = uniroots(&inner) else { continue };
            for u in us.iter() {
                let (x0, y0) = match var {
                    Var::X => (u.value, v),
                    Var::Y => (v, u.value),
                };
                let (x, y, r) = newton_polish(m, s, x0, y0, NEWTON_MAX_ITER);
                if r <= tol {
                    out.push((x, y, r));
                }
            }
        }
    }
    dedup(out)
}

fn close(a: (C64, C64), b: (C64, C64)) -> bool {
    let d = (a.0 - b.0).norm() + (a.1 - b.1).norm();
    d <= DEDUP_REL * (1.0 + a.0.norm() + a.1.norm())
}

fn dedup(mut v: Vec<(C64, C64, f64)>) -> Vec<(C64, C64, f64)> {
    v.sort_by(|a, b| a.2.total_cmp(&b.2));
    let mut out: Vec<(C64, C64, f64)> = Vec::with_capacity(v.len());
    for c in v {
        if !out.iter().any(|o| close((o.0, o.1), (c.0, c.1))) {
            out.push(c);
        }
    }
    out
}

/// For real input: makes nearly real roots exactly real and pairs the rest
/// with exact conjugates.
fn symmetrize(m: &PlaneMap, s: TargetPoint, roots: Vec<(C64, C64, f64)>) -> Vec<(C64, C64, f64)> {
    let mut real = Vec::new();
    let mut complex = Vec::new();
    for (x, y, r) in roots {
        if is_real_point(x, y) {
            let (xr, yr, rr) = newton_polish(m, s, C64::new(x.re, 0.0), C64::new(y.re, 0.0), NEWTON_MAX_ITER);
            if rr <= r.max(f64::MIN_POSITIVE) * 10.0 || rr <= 1e-12 * (1.0 + s.norm()) {
                real.push((C64::new(xr.re, 0.0), C64::new(yr.re, 0.0), rr));
            } else {
                real.push((C64::new(x.re, 0.0), C64::new(y.re, 0.0), r));
            }
        } else {
            complex.push((x, y, r));
        }
    }
    // Keep the root of each conjugate pair in the upper half (by Im y, then
    // Im x) and mirror it.
    let mut used = vec![false; complex.len()];
    let mut paired = Vec::with_capacity(complex.len());
    for i in 0..complex.len() {
        if used[i] {
            continue;
        }
        let (x, y, r) = complex[i];
        let partner = (0..complex.len())
            .filter(|&j| j != i && !used[j])
            .find(|&j| close((complex[j].0, complex[j].1), (x.conj(), y.conj())));
        used[i] = true;
        match partner {
            Some(j) => {
                used[j] = true;
                let upper = if (y.im, x.im) > (complex[j].1.im, complex[j].0.im) {
                    (x, y, r)
                } else {
                    complex[j]
                };
                paired.push(upper);
                paired.push((upper.0.conj(), upper.1.conj(), upper.2));
            }
            None => paired.push((x, y, r)),
        }
    }
    real.extend(paired);
    real
}
