//! Aberth–Ehrlich simultaneous root finding with Newton polishing and
//! cluster detection for multiple roots.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::UniPoly;
use crate::error::{Error, Result};
use crate::C64;

const MAX_ITERATIONS: usize = 1000;
/// Absolute spread below which two roots are always the same root.
const MERGE_REL: f64 = 1e-8;
const DEFAULT_SEED: u64 = 0x5eed_ab3e;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
    /// `|p(z)| / (1 + |z|^deg)` with `p` scaled to unit max coefficient.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootList {
    pub roots: Vec<Root>,
}

impl RootList {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Every root repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<C64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter()
    }
}

/// All complex roots of `p` with a fixed internal seed.
pub fn uniroots(p: &UniPoly) -> Result<RootList> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    uniroots_with(p, &mut rng)
}

/// All complex roots of `p`; `rng` perturbs the initial circle.
///
/// # Panics
/// If `p` is constant (degree 0 or the zero polynomial).
pub fn uniroots_with<R: Rng + ?Sized>(p: &UniPoly, rng: &mut R) -> Result<RootList> {
    let deg = p.degree().expect("uniroots: zero polynomial");
    assert!(deg >= 1, "uniroots: constant polynomial");

    let scale = p.max_abs_coeff();
    let normalized = p.scale(C64::new(1.0 / scale, 0.0));
    let lead = p.leading();
    let monic = p.scale(lead.inv());

    // exact zeros first
    let zeros = monic.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = UniPoly::new(monic.coeffs()[zeros..].to_vec());

    let mut values: Vec<C64> = vec![C64::new(0.0, 0.0); zeros];
    if reduced.degree().unwrap_or(0) >= 1 {
        let mut found = aberth(&reduced, rng)?;
        polish(&reduced, &mut found);
        values.extend(found);
    }

    let clusters = cluster(&monic, &values);
    let roots = clusters
        .into_iter()
        .map(|(value, multiplicity)| Root {
            value,
            multiplicity,
            residual: normalized.eval(value).norm() / (1.0 + value.norm().powi(deg as i32)),
        })
        .collect();
    Ok(RootList { roots })
}

fn aberth<R: Rng + ?Sized>(p: &UniPoly, rng: &mut R) -> Result<Vec<C64>> {
    let n = p.degree().unwrap();
    let a = p.coeffs();
    if n == 1 {
        return Ok(vec![-a[0] / a[1]]);
    }

    let center = -a[n - 1] / (a[n] * n as f64);
    let shifted = taylor_shift(p, center);
    let b = shifted.coeffs();
    let lead = b[n].norm();
    let radius = (0..n)
        .map(|k| (b[k].norm() / lead).powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max);
    if radius == 0.0 {
        return Ok(vec![center; n]);
    }

    let phase: f64 = rng.gen_range(0.0..TAU);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let jitter: f64 = rng.gen_range(-0.1..0.1);
            let theta = phase + TAU * (k as f64 + 0.25 + jitter) / n as f64;
            center + C64::from_polar(radius, theta)
        })
        .collect();

    let mut done = vec![false; n];
    for iteration in 0..MAX_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (pz, dpz) = p.eval_with_derivative(z[i]);
            let noise = 16.0 * f64::EPSILON * p.eval_abs(z[i]);
            if pz.norm() <= noise {
                done[i] = true;
                continue;
            }
            if dpz.norm() == 0.0 {
                let bump = C64::from_polar(1e-8 * (1.0 + z[i].norm()), rng.gen_range(0.0..TAU));
                z[i] += bump;
                continue;
            }
            let ratio = pz / dpz;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if !w.is_finite() {
                let bump = C64::from_polar(1e-8 * (1.0 + z[i].norm()), rng.gen_range(0.0..TAU));
                z[i] += bump;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            log::trace!("aberth converged after {} sweeps", iteration + 1);
            return Ok(z);
        }
    }
    Err(Error::DidNotConverge {
        iterations: MAX_ITERATIONS,
    })
}

/// A few Newton steps per root, kept only while `|p|` keeps shrinking.
fn polish(p: &UniPoly, z: &mut [C64]) {
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let (pz, dpz) = p.eval_with_derivative(*zi);
            if dpz.norm() == 0.0 {
                break;
            }
            let cand = *zi - pz / dpz;
            if p.eval(cand).norm() < pz.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
}

/// Groups approximations of the same multiple root.
///
/// Two approximations belong together when they are closer than a few times
/// their Newton corrections (the inclusion radius of an unresolved cluster)
/// or closer than `1e-8 (1 + |z|)`.
fn cluster(p: &UniPoly, z: &[C64]) -> Vec<(C64, usize)> {
    let n = z.len();
    let reach: Vec<f64> = z
        .iter()
        .map(|&zi| {
            let (pz, dpz) = p.eval_with_derivative(zi);
            let w = (pz / dpz).norm();
            if w.is_finite() {
                2.0 * n as f64 * w
            } else {
                f64::INFINITY
            }
        })
        .collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (z[i] - z[j]).norm();
            let tol = MERGE_REL * (1.0 + z[i].norm().max(z[j].norm()));
            if d <= tol || d <= reach[i].max(reach[j]).min(1e-2 * (1.0 + z[i].norm())) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }

    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let m = members.len();
            let centroid = members.iter().map(|&i| z[i]).sum::<C64>() / m as f64;
            let spread = members.iter().map(|&i| (z[i] - centroid).norm()).fold(0.0, f64::max);
            (refine_multiple(p, centroid, m, spread), m)
        })
        .collect()
}

/// A root of multiplicity `m` is a simple root of `p^(m-1)`; Newton on that
/// derivative sharpens the cluster centroid. The result must stay inside the
/// cluster.
fn refine_multiple(p: &UniPoly, centroid: C64, m: usize, spread: f64) -> C64 {
    if m == 1 {
        return centroid;
    }
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    let mut z = centroid;
    for _ in 0..8 {
        let (v, dv) = d.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    if z.is_finite() && (z - centroid).norm() <= spread.max(MERGE_REL * (1.0 + centroid.norm())) {
        z
    } else {
        centroid
    }
}

/// Coefficients of `p(z + c)`.
fn taylor_shift(p: &UniPoly, c: C64) -> UniPoly {
    let mut a = p.coeffs().to_vec();
    let n = a.len();
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let next = a[k + 1];
            a[k] += c * next;
        }
    }
    UniPoly::new(a)
}
